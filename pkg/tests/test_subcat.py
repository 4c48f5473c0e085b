import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regclose import fintop, subcat
from regclose.errors import BudgetError, InputError, ValidationError
from regclose.subcat import builtin

from .conftest import spaces

T0 = builtin("t0")
ALL = builtin("all")
INDISCRETE = builtin("indiscrete")
DISCRETE = builtin("discrete")
SEH_S = builtin("seh:sierpinski")
SEH_D2 = builtin("seh:discrete2")


# independent membership oracles, phrased through the open sets


def brute_t0(X):
    return all(any((o >> x & 1) != (o >> y & 1) for o in X.opens) for x, y in itertools.combinations(range(X.n), 2))


def brute_discrete(X):
    return all(X.is_open(1 << x) for x in range(X.n))


def brute_indiscrete(X):
    return set(X.opens) <= {0, X.full}


def members_upto(A, n):
    return [X for X in fintop.universe(n) if A.contains(X)]


def brute_cancellable(f, A, bound):
    """Direct: every pair of maps cod(f) -> M (M a member) agreeing on im f coincides."""
    D = f.cod
    for M in members_upto(A, bound):
        homs = fintop.hom_set(D, M)
        for h in homs:
            for k in homs:
                if h != k and all(h(f(x)) == k(f(x)) for x in range(f.dom.n)):
                    return False
    return True


# --- membership and reflections


@pytest.mark.parametrize(
    "A, oracle",
    [(T0, brute_t0), (DISCRETE, brute_discrete), (builtin("t1"), brute_discrete), (INDISCRETE, brute_indiscrete)],
)
def test_builtin_membership(A, oracle):
    for X in fintop.universe(4):
        assert A.contains(X) == oracle(X)


def test_all_contains_everything():
    assert all(ALL.contains(X) for X in fintop.universe(4))


def test_seh_membership_small():
    # products of the connected doublet give exactly the T0 spaces; of the discrete doublet, the discrete ones
    for X in fintop.universe(4):
        assert SEH_S.contains(X) == brute_t0(X)
        assert SEH_D2.contains(X) == brute_discrete(X)


def test_seh_reflection_examples(I2, S, D2):
    assert subcat.seh_reflection(I2, [S]).target.n == 1
    assert subcat.seh_reflection(S, [D2]).target.n == 1
    for X in fintop.universe(4):
        if X.is_t0():
            assert subcat.seh_reflection(X, [S]).morphism.is_iso()


@pytest.mark.parametrize("name", ["t0", "t1", "discrete", "indiscrete", "all", "seh:sierpinski", "seh:discrete2"])
def test_reflections_are_universal(name):
    A = builtin(name)
    for X in fintop.universe(3):
        refl = A.reflect(X)
        assert A.contains(refl.target)
        cert = subcat.verify_weak_reflection(X, refl, A, bound=3)
        assert cert.verified and cert.unique


def test_verify_weak_reflection_examples(I2, S):
    r = T0.reflect(I2)
    cert = subcat.verify_weak_reflection(I2, r, T0)
    assert cert.verified and cert.unique
    ident = subcat.Reflection(S, fintop.identity(S), S, weak=False)
    assert subcat.verify_weak_reflection(S, ident, T0)
    ident = subcat.Reflection(I2, fintop.identity(I2), I2, weak=False)
    assert subcat.verify_weak_reflection(I2, ident, INDISCRETE)


def test_verify_weak_reflection_rejects_non_universal(S, P1):
    # S -> point is not the T0 reflection of S
    cand = subcat.Reflection(S, fintop.constant(S, P1, "*"), P1, weak=False)
    cert = subcat.verify_weak_reflection(S, cand, T0, bound=2)
    assert not cert and cert.counterexample is not None
    with pytest.raises(InputError):
        subcat.verify_weak_reflection(S, subcat.Reflection(S, fintop.identity(S), S, False), INDISCRETE)


@settings(max_examples=30)
@given(spaces(max_n=3), spaces(max_n=3), st.data())
def test_weak_naturality(X, Y, data):
    homs = fintop.hom_set(X, Y)
    if not homs:
        return
    f = data.draw(st.sampled_from(homs))
    for A in (T0, INDISCRETE, DISCRETE, SEH_S):
        g = subcat.reflect_map(A, f)
        assert (g @ A.reflect(X).morphism).images == (A.reflect(Y).morphism @ f).images


def test_composite_reflection(I2):
    r = subcat.composite_reflection(I2, T0, INDISCRETE)
    assert r.target.n == 1 and T0.contains(r.target)


# --- table-described subcategories


def test_predicate_table_and_files(tmp_path):
    forms = [fintop.canonical_form(X) for X in fintop.universe(2) if X.is_t0()]
    A = subcat.predicate_table("small-t0", forms)
    assert A.hereditary and not A.has_reflector
    assert A.contains(fintop.sierpinski()) and not A.contains(fintop.indiscrete(2))
    path = tmp_path / "sub.json"
    path.write_text('{"kind": "predicate-table", "name": "p", "members": ' + str(forms).replace("'", '"') + "}")
    B = subcat.resolve_subcat(str(path))
    assert B.contains(fintop.point())
    with pytest.raises(InputError):
        subcat.resolve_subcat("no-such-subcategory")
    with pytest.raises(ValidationError):
        subcat.subcat_from_json({"kind": "mystery"})


def test_reflector_table_from_json(I2):
    obj = {
        "kind": "reflector-table",
        "name": "collapse-i2",
        "reflections": {
            fintop.canonical_form(I2): {"target": {"points": ["*"], "opens": [[], ["*"]]}, "map": {"0": "*", "1": "*"}},
        },
        "members": ["1:1"],
    }
    A = subcat.subcat_from_json(obj)
    assert A.has_reflector
    assert A.reflect(I2).target.n == 1


def test_seh_from_json():
    A = subcat.subcat_from_json({"kind": "seh", "generators": [{"points": ["0", "1"], "opens": [[], ["1"], ["0", "1"]]}]})
    assert A.contains(fintop.sierpinski()) and not A.contains(fintop.indiscrete(2))


# --- cancellability


def test_cancellable_examples(S):
    incl = fintop.subobject(S, ["1"]).inclusion
    v = subcat.is_cancellable(incl, T0)
    assert not v and v.exact
    h, k = v.witness
    assert h(1) == k(1) and h(0) != k(0)
    assert subcat.is_cancellable(fintop.identity(S), T0)
    for X in fintop.universe(3):
        for Y in fintop.universe(3):
            for f in fintop.hom_set(X, Y):
                if f.is_surjective():
                    assert subcat.is_cancellable(f, T0) and subcat.is_cancellable(f, INDISCRETE)


@settings(max_examples=40, deadline=None)
@given(spaces(max_n=2), spaces(max_n=2), st.data())
def test_cancellable_matches_brute_force(X, Y, data):
    homs = fintop.hom_set(X, Y)
    if not homs:
        return
    f = data.draw(st.sampled_from(homs))
    for A in (T0, INDISCRETE, DISCRETE, ALL):
        v = subcat.is_cancellable(f, A)
        assert v.exact
        assert bool(v) == brute_cancellable(f, A, 2 * Y.n)


def test_pair_agreements_first_witness(S):
    table = subcat.pair_agreements(S.nbhd, S.nbhd)
    # every agreement set of a pair of maps S -> S, with a witness that realizes it
    homs = fintop.hom_tuples(S.nbhd, S.nbhd)
    expected = {sum(1 << x for x in range(2) if h[x] == k[x]) for h in homs for k in homs}
    assert set(table) == expected
    for mask, (h, k) in table.items():
        assert sum(1 << x for x in range(2) if h[x] == k[x]) == mask


def test_member_agreements_budget(S):
    with pytest.raises(BudgetError):
        subcat.member_agreements(S, T0, subcat.BRUTE_FORCE_LIMIT + 1)


# --- hulls


def test_s_hull_examples(S, I2):
    assert subcat.in_S_hull(S, T0).member
    assert not subcat.in_S_hull(I2, T0).member
    for X in fintop.universe(3):
        assert subcat.in_S_hull(X, ALL).member


def test_s_hull_equals_embedding_search():
    for A in (T0, DISCRETE, INDISCRETE, SEH_S):
        for X in fintop.universe(3):
            assert subcat.in_S_hull(X, A).member == subcat.in_smallest_intermediate(X, A).member


def test_mono_hull_examples(S, I2):
    assert not subcat.in_mono_hull(I2, T0).member
    assert not subcat.in_mono_hull(S, DISCRETE).member
    assert subcat.in_mono_hull(S, T0).member


def test_e_and_d_hull_examples(S, P1):
    for A in (T0, INDISCRETE, ALL):
        assert subcat.in_E_hull(P1, A, bound=3).member
        assert subcat.in_D_hull(P1, A, bound=3).member
    assert subcat.in_E_hull(S, T0, bound=3).member
    for X in fintop.universe(3):
        assert subcat.in_E_hull(X, ALL, bound=3).member


def test_e_hull_rejects_indiscrete_doublet(I2):
    rep = subcat.in_E_hull(I2, T0, bound=3)
    assert not rep.member and rep.witness is not None


def test_largest_intermediate(P1, I2):
    rep = subcat.in_largest_intermediate(P1, T0)
    assert rep.member
    rep = subcat.in_largest_intermediate(I2, T0)
    assert rep.member and "degenerate" in rep.note


def test_smallest_intermediate_examples(S, I2):
    assert not subcat.in_smallest_intermediate(I2, T0).member
    assert subcat.in_smallest_intermediate(S, T0).member


# --- diagonal, comparison map, splitting condition


def test_diagonal_examples(S, P1):
    d = subcat.diagonal(P1)
    assert d.is_full()
    d = subcat.diagonal(S)
    assert d.labels == ["(0,0)", "(1,1)"]


def test_canonical_alpha_examples(S, I2, P1):
    for X in fintop.universe(3):
        alpha, mono = subcat.canonical_alpha(P1, X, T0)
        assert alpha.is_iso() and mono
    alpha, mono = subcat.canonical_alpha(I2, S, T0)
    assert alpha.is_iso() and mono and alpha.dom.n == 2
    alpha, mono = subcat.canonical_alpha(S, S, T0)
    assert alpha.is_iso() and mono


def test_lord_condition_star_examples(I2):
    Z, f, g, gbar = subcat.lord_condition_star(I2, T0)
    assert Z.n == 1 and f != g
    r = T0.reflect(I2).morphism
    assert (r @ f) == (r @ g)
    assert (gbar @ g) == (gbar @ f)
    assert (g @ gbar @ g) == g
    assert subcat.lord_condition_star(fintop.indiscrete(3), T0) is not None
    with pytest.raises(InputError):
        subcat.lord_condition_star(fintop.sierpinski(), T0)


def test_members_listing():
    assert len(T0.members(3)) == 1 + 1 + 2 + 5
    assert [X.n for X in INDISCRETE.members(3)] == [0, 1, 2, 3]


# --- invariants

BUILTINS = ["all", "t0", "t1", "discrete", "indiscrete", "seh:sierpinski", "seh:discrete2"]


@pytest.mark.parametrize("name", BUILTINS)
def test_inclusion_chain(name):
    A = builtin(name)
    for X in fintop.universe(3):
        a = A.contains(X)
        s = subcat.in_S_hull(X, A).member
        e = subcat.in_E_hull(X, A, bound=3).member
        d = subcat.in_D_hull(X, A, bound=3).member
        assert (not a or s) and (not s or e) and (not e or d), (name, fintop.canonical_form(X))


@pytest.mark.parametrize("name", BUILTINS)
def test_reflection_invariants(name):
    A = builtin(name)
    for X in fintop.universe(4):
        r = A.reflect(X).morphism
        if A.contains(X):
            assert r.is_iso()
        if subcat.in_S_hull(X, A).member:
            assert r.is_embedding()
        if X.n <= 3 and subcat.in_mono_hull(X, A).member:
            assert r.is_injective()


@pytest.mark.parametrize("gens", [["sierpinski"], ["discrete2"], ["indiscrete2"], ["sierpinski", "discrete2"]])
def test_seh_target_in_hull(gens):
    G = [fintop.resolve_space(g) for g in gens]
    A = subcat.seh_subcat(G)
    for X in fintop.universe(4):
        target = subcat.seh_reflection(X, G).target
        assert subcat.in_S_hull(target, A).member
        assert A.contains(target)


@pytest.mark.parametrize("b_name", ["seh:sierpinski", "all"])
def test_composite_reflection_premise(b_name):
    # B-reflection followed by the T0 reflection is again a T0 reflection whenever T0 sits inside B
    B = builtin(b_name)
    for X in fintop.universe(3):
        refl = subcat.composite_reflection(X, T0, B)
        assert subcat.verify_weak_reflection(X, refl, T0, bound=3)
