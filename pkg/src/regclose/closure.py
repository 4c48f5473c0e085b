"""Regular closure operators, computed two ways, and the checks built on them.

``closure_formula`` equalizes the reflected cokernel-pair injections;
``closure_bruteforce`` intersects every A-regular subset above the input
found by sweeping pairs of maps into members.  The second is the oracle for
the first and is only feasible for small ambients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import fintop
from .errors import BudgetError, InputError
from .fintop import ContMap, FinSpace, Subobject, hom_tuples
from .subcat import (
    BRUTE_FORCE_LIMIT,
    SubcatSpec,
    _pair_bound,
    canonical_alpha,
    diagonal,
    in_S_hull,
    is_cancellable,
    member_agreements,
)


@dataclass(frozen=True)
class ClosureResult:
    input: Subobject
    closure: Subobject
    method: str
    exact: bool
    witnesses: tuple = ()


@dataclass(frozen=True)
class RegularVerdict:
    value: bool
    witness: tuple | None
    method: str
    exact: bool

    def __bool__(self) -> bool:
        return self.value


def closure_formula(m: Subobject, A: SubcatSpec) -> ClosureResult:
    """Equalizer of the two cokernel-pair injections after reflecting the apex."""
    if not A.has_reflector:
        raise InputError(f"subcategory {A.name!r} has no reflector for the closure formula")
    cp = fintop.cokernel_pair(m)
    refl = A.reflect(cp.apex)
    r = refl.morphism
    closed = fintop.equalizer(r @ cp.left, r @ cp.right)
    return ClosureResult(m, closed, "formula", True, (cp, refl))


def _regular_sets(X: FinSpace, A: SubcatSpec, bound: int | None) -> tuple[dict[int, tuple], int, bool]:
    b, exact = _pair_bound(A, X.n, bound)
    if bound is None and not exact and A.hereditary:
        raise BudgetError(
            f"brute-force closure on a {X.n}-point space needs codomains up to {2 * X.n} points "
            f"(limit {BRUTE_FORCE_LIMIT}); use the formula"
        )
    return member_agreements(X, A, b), b, exact


def closure_bruteforce(m: Subobject, A: SubcatSpec, bound: int | None = None) -> ClosureResult:
    """Meet of every A-regular subset containing the carrier (full set if there is none)."""
    X = m.ambient
    regular, _, exact = _regular_sets(X, A, bound)
    closed = X.full
    witnesses = []
    for mask, (h, k, M) in sorted(regular.items()):
        if mask & m.carrier == m.carrier:
            closed &= mask
            witnesses.append(Subobject(X, mask))
    return ClosureResult(m, Subobject(X, closed), "bruteforce", exact, tuple(witnesses))


def closure(m: Subobject, A: SubcatSpec) -> ClosureResult:
    if A.has_reflector:
        return closure_formula(m, A)
    return closure_bruteforce(m, A)


def is_A_regular(m: Subobject, A: SubcatSpec, method: str = "auto", bound: int | None = None) -> RegularVerdict:
    """Is ``m`` the equalizer of a pair of maps into a member?

    ``auto`` uses the formula when A has a reflector (a subset is regular iff
    it is closed), brute force otherwise.  The witness is ``(h, k, M)``.
    """
    if method == "auto":
        method = "formula" if A.has_reflector else "bruteforce"
    if method == "formula":
        res = closure_formula(m, A)
        if res.closure.carrier != m.carrier:
            return RegularVerdict(False, None, "formula", True)
        cp, refl = res.witnesses
        r = refl.morphism
        return RegularVerdict(True, (r @ cp.left, r @ cp.right, refl.target), "formula", True)
    if method != "bruteforce":
        raise InputError(f"unknown method {method!r}")
    X = m.ambient
    regular, _, exact = _regular_sets(X, A, bound)
    if m.carrier in regular:
        h, k, M = regular[m.carrier]
        return RegularVerdict(True, (ContMap.unchecked(X, M, h), ContMap.unchecked(X, M, k), M), "bruteforce", True)
    return RegularVerdict(False, None, "bruteforce", exact)


# ---------------------------------------------------------------------------
# tables


def _check_universe(universe) -> list[FinSpace]:
    reps = []
    ceiling = fintop.max_points()
    for X in universe:
        if X.n > ceiling:
            raise BudgetError(f"universe contains a {X.n}-point space; ceiling is {ceiling}")
        reps.append(fintop.canonical_space(X)[0])
    return reps


@dataclass
class ClosureOperatorTable:
    """``entries[(canonical form, subset mask)]`` = closed subset mask."""

    subcat: SubcatSpec
    universe: list[FinSpace]
    entries: dict[tuple[str, int], int] = field(default_factory=dict)
    methods: dict[tuple[str, int], str] = field(default_factory=dict)
    exact: bool = True

    def lookup(self, X: FinSpace, mask: int) -> int:
        return self.entries[fintop.canonical_form(X), mask]

    def spaces(self) -> dict[str, FinSpace]:
        return {fintop.canonical_form(X): X for X in self.universe}

    def to_json(self) -> list[dict]:
        out = []
        spaces = self.spaces()
        for (form, mask), closed in self.entries.items():
            X = spaces[form]
            out.append({
                "space": form,
                "subset": X.labels(mask),
                "closure": X.labels(closed),
                "method": self.methods[form, mask],
                "exact": self.exact,
            })
        return out


def closure_operator_table(A: SubcatSpec, universe) -> ClosureOperatorTable:
    """Closure of every subset of every universe space (formula when A has a reflector)."""
    reps = _check_universe(universe)
    key = ("table", tuple(fintop.canonical_form(X) for X in reps))
    if key in A._memo:
        return A._memo[key]
    table = ClosureOperatorTable(A, reps)
    for X in reps:
        form = fintop.canonical_form(X)
        for mask in range(X.full + 1):
            res = closure(Subobject(X, mask), A)
            table.entries[form, mask] = res.closure.carrier
            table.methods[form, mask] = res.method
            table.exact = table.exact and res.exact
    A._memo[key] = table
    return table


@dataclass(frozen=True)
class AxiomCheck:
    ok: bool
    counterexample: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class AxiomReport:
    extension: AxiomCheck
    monotonicity: AxiomCheck
    continuity: AxiomCheck
    idempotency: AxiomCheck

    @property
    def passed(self) -> bool:
        return all((self.extension, self.monotonicity, self.continuity, self.idempotency))


def check_axioms(t: ClosureOperatorTable, maps=None) -> AxiomReport:
    """Extension, monotonicity, continuity along maps, idempotency; first counterexample each.

    ``maps`` defaults to every continuous map between universe spaces.
    """
    spaces = t.spaces()
    ext = mono = idem = None
    for (form, mask), c in t.entries.items():
        if ext is None and mask & ~c:
            ext = (form, mask, c)
        if idem is None and t.entries.get((form, c), c) != c:
            idem = (form, mask, c, t.entries[form, c])
    for form, X in spaces.items():
        if mono is not None:
            break
        for a in range(X.full + 1):
            ca = t.entries[form, a]
            # b runs over supersets of a
            free = X.full & ~a
            sub = free
            while True:
                b = a | sub
                if ca & ~t.entries[form, b]:
                    mono = (form, a, b)
                    break
                if sub == 0:
                    break
                sub = (sub - 1) & free
            if mono is not None:
                break
    cont = None
    if maps is None:
        maps = (
            ContMap.unchecked(X, Y, f)
            for X in t.universe for Y in t.universe
            for f in hom_tuples(X.nbhd, Y.nbhd)
        )
    for f in maps:
        fx, fy = fintop.canonical_form(f.dom), fintop.canonical_form(f.cod)
        for mask in range(f.dom.full + 1):
            lhs = f.image(t.entries[fx, mask])
            rhs = t.entries[fy, f.image(mask)]
            if lhs & ~rhs:
                cont = (f, mask)
                break
        if cont is not None:
            break
    return AxiomReport(
        AxiomCheck(ext is None, ext),
        AxiomCheck(mono is None, mono),
        AxiomCheck(cont is None, cont),
        AxiomCheck(idem is None, idem),
    )


@dataclass(frozen=True)
class Comparison:
    same: bool
    counterexample: dict | None
    exact: bool
    universe_size: int

    def __bool__(self) -> bool:
        return self.same


def same_closure(A: SubcatSpec, B: SubcatSpec, universe) -> Comparison:
    """Do A and B induce equal closures on every subset of every universe space?

    The verdict is relative to the universe.  The first disagreeing entry is
    returned, ordering entries by space size, canonical form and subset mask,
    so the witness does not depend on the order the universe was given in.
    """
    ta = closure_operator_table(A, universe)
    tb = closure_operator_table(B, universe)
    spaces = ta.spaces()
    for key in sorted(ta.entries, key=lambda k: (spaces[k[0]].n, k[0], k[1])):
        ca, cb = ta.entries[key], tb.entries[key]
        if ca != cb:
            form, mask = key
            X = spaces[form]
            cex = {
                "space": form,
                "subset": X.labels(mask),
                A.name: X.labels(ca),
                B.name: X.labels(cb),
            }
            return Comparison(False, cex, ta.exact and tb.exact, len(ta.universe))
    return Comparison(True, None, ta.exact and tb.exact, len(ta.universe))


# ---------------------------------------------------------------------------
# sweeps

_EPI_DENSE_BUILTINS = ("t0", "indiscrete", "all")


@dataclass(frozen=True)
class EpiDenseReport:
    checked: int
    violations: tuple

    @property
    def passed(self) -> bool:
        return not self.violations


def epi_dense_consistency(A: SubcatSpec, universe) -> EpiDenseReport:
    """For maps between members: cancellable iff the image has full closure."""
    if not (A.kind == "seh" or (A.kind == "builtin" and A.name in _EPI_DENSE_BUILTINS)):
        raise InputError(f"epi/dense consistency needs a strongly epireflective builtin, got {A.name!r}")
    reps = [X for X in _check_universe(universe) if A.contains(X)]
    table = closure_operator_table(A, reps)
    checked = 0
    violations = []
    for X in reps:
        for Y in reps:
            fy = fintop.canonical_form(Y)
            for t in hom_tuples(X.nbhd, Y.nbhd):
                f = ContMap.unchecked(X, Y, t)
                cancel = bool(is_cancellable(f, A, bound=min(2 * Y.n, BRUTE_FORCE_LIMIT)))
                dense = table.entries[fy, f.image()] == Y.full
                checked += 1
                if cancel != dense:
                    violations.append((f, cancel, dense))
    return EpiDenseReport(checked, tuple(violations))


@dataclass(frozen=True)
class EquivalenceRow:
    space: str
    alpha_mono: bool
    diagonal_regular: bool
    in_s_hull: bool


@dataclass(frozen=True)
class EquivalenceReport:
    a_name: str
    b_name: str
    rows: tuple
    precondition: bool
    a: bool
    b: bool
    c: bool
    counterexample: dict | None
    flags: tuple

    @property
    def consistent(self) -> bool:
        return not self.flags


def thm41_sweep(A: SubcatSpec, B: SubcatSpec, universe) -> EquivalenceReport:
    """Evaluate the diagonal / hull / same-closure equivalence over a universe.

    A flag is raised when the comparison maps are all injective but the three
    statements do not share a truth value.
    """
    if not A.has_reflector:
        raise InputError(f"subcategory {A.name!r} has no reflector")
    reps = _check_universe(universe)
    rows = []
    for X in reps:
        if not B.contains(X):
            continue
        pre = all(canonical_alpha(U, X, A)[1] for U in reps)
        a = bool(is_A_regular(diagonal(X), A))
        b = bool(in_S_hull(X, A))
        rows.append(EquivalenceRow(fintop.canonical_form(X), pre, a, b))
    cmp = same_closure(A, B, reps)
    P = all(r.alpha_mono for r in rows)
    a = all(r.diagonal_regular for r in rows)
    b = all(r.in_s_hull for r in rows)
    c = cmp.same
    flags = ()
    if P and not (a == b == c):
        flags = ({"precondition": P, "a": a, "b": b, "c": c},)
    return EquivalenceReport(A.name, B.name, tuple(rows), P, a, b, c, cmp.counterexample, flags)


def lord_criterion(A: SubcatSpec, universe) -> list[tuple[str, bool, bool]]:
    """Spaces where membership and regularity of the diagonal disagree."""
    out = []
    for X in _check_universe(universe):
        member = A.contains(X)
        regular = bool(is_A_regular(diagonal(X), A))
        if member != regular:
            out.append((fintop.canonical_form(X), member, regular))
    return out


def oracle_agreement(A: SubcatSpec, universe) -> list[tuple[str, int, int, int]]:
    """Subsets where the formula and brute-force closures differ: (space, subset, formula, brute)."""
    mismatches = []
    for X in universe:
        for mask in range(X.full + 1):
            m = Subobject(X, mask)
            f = closure_formula(m, A).closure.carrier
            b = closure_bruteforce(m, A).closure.carrier
            if f != b:
                mismatches.append((fintop.canonical_form(X), mask, f, b))
    return mismatches
