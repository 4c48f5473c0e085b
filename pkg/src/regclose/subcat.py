"""Finitely described subcategories of finite spaces and their hulls.

A subcategory is a homeomorphism-invariant membership predicate, optionally
with a (weak) reflector.  Class-quantified notions (cancellability,
Hausdorff objects, the E and D hulls, ...) are evaluated over spaces up to
an explicit size bound; every verdict reports the bound it used and whether
that bound is known to be exact.

For a subcategory closed under subspaces ("hereditary"), a pair of maps
into a member can be cut down to the union of the two images, so a
codomain bound of twice the domain size is exact for regularity and
cancellability questions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import fintop
from .errors import BudgetError, InputError, ValidationError
from .fintop import ContMap, FinSpace, Subobject, bits, hom_tuples

# largest codomain the brute-force pair sweeps will enumerate
BRUTE_FORCE_LIMIT = 6
BUILTIN_NAMES = ("all", "t0", "t1", "discrete", "indiscrete")


@dataclass(frozen=True)
class Reflection:
    source: FinSpace
    morphism: ContMap
    target: FinSpace
    weak: bool = False


@dataclass(eq=False)
class SubcatSpec:
    """A subcategory ``A``: membership, optional reflector, hull-check bound."""

    name: str
    kind: str
    membership: Callable[[FinSpace], bool]
    reflector: Callable[[FinSpace], Reflection] | None = None
    generators: tuple[FinSpace, ...] = ()
    bound: int = 4
    hereditary: bool = False
    weak: bool = False
    _memo: dict = field(default_factory=dict, repr=False)

    def contains(self, X: FinSpace) -> bool:
        key = ("member", X.nbhd)
        if key not in self._memo:
            self._memo[key] = bool(self.membership(X))
        return self._memo[key]

    @property
    def has_reflector(self) -> bool:
        return self.reflector is not None

    def reflect(self, X: FinSpace) -> Reflection:
        if self.reflector is None:
            raise InputError(f"subcategory {self.name!r} has no reflector")
        return self.reflector(X)

    def members(self, bound: int) -> list[FinSpace]:
        """Canonical representatives of members with at most ``bound`` points."""
        key = ("members", bound)
        if key not in self._memo:
            out = []
            for n in range(bound + 1):
                out.extend(X for X in fintop.spaces_of_size(n) if self.contains(X))
            self._memo[key] = out
        return self._memo[key]

    def __repr__(self) -> str:
        return f"SubcatSpec({self.name!r}, kind={self.kind!r})"


# ---------------------------------------------------------------------------
# reflectors


def _identity_reflection(X: FinSpace) -> Reflection:
    return Reflection(X, fintop.identity(X), X)


def _t0_reflection(X: FinSpace) -> Reflection:
    r, rX = fintop.t0_reflection(X)
    return Reflection(X, r, rX)


def _indiscrete_reflection(X: FinSpace) -> Reflection:
    target = FinSpace(X.points, (X.full,) * X.n)
    return Reflection(X, ContMap.unchecked(X, target, tuple(range(X.n))), target)


def _discrete_reflection(X: FinSpace) -> Reflection:
    r, D = fintop.discrete_reflection(X)
    return Reflection(X, r, D)


def _exists_map(X: FinSpace, G: FinSpace, fixed: dict[int, int]) -> bool:
    """Is there a continuous X -> G taking the prescribed values?"""
    n = X.n
    full = G.full
    domains = [full] * n
    for x, v in fixed.items():
        domains[x] &= 1 << v
    edges = [(x, y) for x in range(n) for y in bits(X.nbhd[x]) if x != y]

    def up_of(mask):
        out = 0
        for a in bits(mask):
            out |= G.nbhd[a]
        return out

    def down_of(mask):
        out = 0
        for b in bits(mask):
            out |= G.down[b]
        return out

    def propagate(doms):
        changed = True
        while changed:
            changed = False
            for x, y in edges:
                ny = doms[y] & up_of(doms[x])
                if ny != doms[y]:
                    doms[y] = ny
                    changed = True
                nx = doms[x] & down_of(doms[y])
                if nx != doms[x]:
                    doms[x] = nx
                    changed = True
                if not ny or not nx:
                    return False
        return all(doms)

    def search(doms):
        if not propagate(doms):
            return False
        open_vars = [x for x in range(n) if doms[x] & (doms[x] - 1)]
        if not open_vars:
            return True
        x = min(open_vars, key=lambda v: fintop.popcount(doms[v]))
        for v in bits(doms[x]):
            trial = list(doms)
            trial[x] = 1 << v
            if search(trial):
                return True
        return False

    return search(domains)


_ENUMERATE_CAP = 50_000


def _separation(X: FinSpace, gens: Sequence[FinSpace]) -> tuple[list[int], list[int]]:
    """Masks ``same[x]`` (points no map separates from x) and ``below[x]`` (points y with f(x) <= f(y) for all f)."""
    n = X.n
    same = [X.full] * n
    below = [X.full] * n
    for G in gens:
        if G.n ** n <= _ENUMERATE_CAP:
            for f in hom_tuples(X.nbhd, G.nbhd):
                for x in range(n):
                    fx = f[x]
                    up = G.nbhd[fx]
                    for y in range(n):
                        if f[y] != fx:
                            same[x] &= ~(1 << y)
                        if not up >> f[y] & 1:
                            below[x] &= ~(1 << y)
            continue
        for x in range(n):
            for y in range(n):
                if x == y:
                    continue
                for a in range(G.n):
                    for b in range(G.n):
                        if a == b:
                            continue
                        sep = same[x] >> y & 1
                        order = below[x] >> y & 1 and not G.leq(a, b)
                        if not (sep or order):
                            continue
                        if _exists_map(X, G, {x: a, y: b}):
                            same[x] &= ~(1 << y)
                            same[y] &= ~(1 << x)
                            if not G.leq(a, b):
                                below[x] &= ~(1 << y)
    return same, below


@lru_cache(maxsize=4096)
def _seh_cached(nbhd: tuple[int, ...], gens_key: tuple) -> tuple[tuple[int, ...], tuple[int, ...]]:
    X = FinSpace(tuple(str(i) for i in range(len(nbhd))), nbhd)
    gens = [FinSpace(tuple(str(i) for i in range(len(g))), g) for g in gens_key]
    same, below = _separation(X, gens)
    classes, k = fintop._classes_by_key(same)
    reps = [classes.index(c) for c in range(k)]
    up = []
    for c in range(k):
        mask = 0
        for d in range(k):
            if below[reps[c]] >> reps[d] & 1:
                mask |= 1 << d
        up.append(mask)
    return tuple(classes), tuple(up)


def seh_reflection(X: FinSpace, gens: Sequence[FinSpace]) -> Reflection:
    """Reflection into the strongly epireflective hull of ``gens``.

    Points are identified when no continuous map into a generator separates
    them; the quotient carries the initial topology of the induced family.
    Separating maps are found point pair by point pair, never by building
    the product of all generators.
    """
    if not gens:
        raise InputError("seh reflection needs at least one generator")
    classes, up = _seh_cached(X.nbhd, tuple(g.nbhd for g in gens))
    k = len(up)
    labels = fintop._partition_labels(X, classes, k)
    target = FinSpace(tuple(labels), up)
    return Reflection(X, ContMap.unchecked(X, target, classes), target)


# ---------------------------------------------------------------------------
# constructors


def _all_member(X):
    return True


_BUILTINS: dict[str, SubcatSpec] = {}


def builtin(name: str) -> SubcatSpec:
    """One of ``all, t0, t1, discrete, indiscrete`` or ``seh:<space>``."""
    if name in _BUILTINS:
        return _BUILTINS[name]
    if name.startswith("seh:"):
        ref = name[4:]
        sub = seh_subcat([fintop.resolve_space(ref)], name=name)
    elif name == "all":
        sub = SubcatSpec("all", "builtin", _all_member, _identity_reflection, hereditary=True)
    elif name == "t0":
        sub = SubcatSpec("t0", "builtin", FinSpace.is_t0, _t0_reflection, hereditary=True)
    elif name in ("t1", "discrete"):
        # finite T1 spaces are discrete
        sub = SubcatSpec(name, "builtin", FinSpace.is_discrete, _discrete_reflection, hereditary=True)
    elif name == "indiscrete":
        sub = SubcatSpec("indiscrete", "builtin", FinSpace.is_indiscrete, _indiscrete_reflection, hereditary=True)
    else:
        raise InputError(f"unknown builtin subcategory {name!r}")
    _BUILTINS[name] = sub
    return sub


def seh_subcat(gens: Sequence[FinSpace], name: str | None = None, bound: int = 4) -> SubcatSpec:
    """Strongly epireflective hull of the generators (embeddable in products of them)."""
    gens = tuple(gens)
    if not gens:
        raise InputError("seh subcategory needs at least one generator")

    def reflect(X):
        return seh_reflection(X, gens)

    def member(X):
        r = reflect(X).morphism
        return r.is_iso()

    label = name or "seh:[" + ",".join(fintop.canonical_form(g) for g in gens) + "]"
    return SubcatSpec(label, "seh", member, reflect, generators=gens, bound=bound, hereditary=True)


def predicate_table(name: str, members: Sequence[str], bound: int = 4) -> SubcatSpec:
    """Membership given by a finite list of canonical forms."""
    forms = frozenset(members)
    for form in forms:
        fintop.from_canonical_form(form)

    def member(X):
        return fintop.canonical_form(X) in forms

    return SubcatSpec(name, "predicate-table", member, bound=bound, hereditary=_closed_under_subspaces(forms))


def _closed_under_subspaces(forms) -> bool:
    for form in forms:
        X = fintop.from_canonical_form(form)
        for carrier in range(X.full + 1):
            if fintop.canonical_form(fintop.subspace(X, carrier)) not in forms:
                return False
    return True


def reflector_table(name: str, members: Sequence[str], reflections: dict, weak: bool = False, bound: int = 4) -> SubcatSpec:
    """Membership by canonical forms plus a per-class table of (weak) reflections.

    ``reflections`` maps a canonical form to ``(target, images)`` where
    ``images`` are target indices for the points of the canonical
    representative.
    """
    base = predicate_table(name, members, bound)
    table = {}
    for form, (target, images) in reflections.items():
        rep = fintop.from_canonical_form(form)
        table[form] = ContMap(rep, target, tuple(images))
        if not base.contains(target):
            raise ValidationError(f"reflection target for {form!r} is not a member", form)

    def reflect(X):
        rep, iso = fintop.canonical_space(X)
        form = fintop.canonical_form(rep)
        if form not in table:
            raise InputError(f"no reflection recorded for {form!r} in {name!r}")
        r = table[form]
        return Reflection(X, r @ iso, r.cod, weak)

    kind = "weak-reflector-table" if weak else "reflector-table"
    return SubcatSpec(name, kind, base.membership, reflect, bound=bound, hereditary=base.hereditary, weak=weak)


def subcat_from_json(obj) -> SubcatSpec:
    if not isinstance(obj, dict):
        raise ValidationError("subcategory description must be a JSON object")
    kind = obj.get("kind")
    name = obj.get("name", kind or "?")
    bound = obj.get("bound", 4)
    if not isinstance(bound, int) or bound < 0:
        raise ValidationError('"bound" must be a non-negative integer')
    if kind == "builtin":
        b = obj.get("builtin")
        if not isinstance(b, str):
            raise ValidationError('builtin subcategory needs a "builtin" name')
        sub = builtin(b)
        return sub
    if kind == "seh":
        gens = [fintop.space_from_json(g) for g in obj.get("generators") or []]
        return seh_subcat(gens, name=name, bound=bound)
    if kind == "predicate-table":
        return predicate_table(name, obj.get("members") or [], bound)
    if kind in ("reflector-table", "weak-reflector-table"):
        raw = obj.get("reflections") or {}
        reflections = {}
        for form, entry in raw.items():
            target = fintop.space_from_json(entry["target"])
            rep = fintop.from_canonical_form(form)
            images = tuple(target.index(entry["map"][p]) for p in rep.points)
            reflections[form] = (target, images)
        members = obj.get("members")
        if members is None:
            members = sorted({fintop.canonical_form(t) for t, _ in reflections.values()})
        weak = kind == "weak-reflector-table" or bool(obj.get("weak", False))
        return reflector_table(name, members, reflections, weak, bound)
    raise ValidationError(f"unknown subcategory kind {kind!r}")


def resolve_subcat(ref: str) -> SubcatSpec:
    """A builtin name, ``seh:<space>``, or the path of a subcategory JSON file."""
    if ref in BUILTIN_NAMES or ref.startswith("seh:"):
        return builtin(ref)
    path = Path(ref)
    if path.exists():
        try:
            obj = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ValidationError(f"subcategory file {ref} is not valid JSON: {exc}") from None
        return subcat_from_json(obj)
    raise InputError(f"unknown subcategory {ref!r}")


# ---------------------------------------------------------------------------
# reflections


@dataclass(frozen=True)
class ReflectionCertificate:
    verified: bool
    unique: bool
    bound: int
    counterexample: tuple | None = None

    def __bool__(self) -> bool:
        return self.verified


def verify_weak_reflection(X: FinSpace, cand: Reflection, A: SubcatSpec, bound: int | None = None) -> ReflectionCertificate:
    """Does every map from X into a member (up to ``bound`` points) factor through ``cand``?"""
    if not A.contains(cand.target):
        raise InputError("candidate reflection target is not a member")
    bound = A.bound if bound is None else bound
    r = cand.morphism
    unique = True
    for M in A.members(bound):
        lifts: dict = {}
        for g in hom_tuples(cand.target.nbhd, M.nbhd):
            key = tuple(g[v] for v in r.images)
            lifts[key] = lifts.get(key, 0) + 1
        for f in hom_tuples(X.nbhd, M.nbhd):
            count = lifts.get(f, 0)
            if count == 0:
                return ReflectionCertificate(False, False, bound, (M, ContMap.unchecked(X, M, f)))
            if count > 1:
                unique = False
    return ReflectionCertificate(True, unique, bound)


def factor_through(refl: Reflection, f: ContMap) -> ContMap | None:
    """Some g with g @ refl.morphism == f, or None."""
    r = refl.morphism
    if r.is_surjective():
        images = [None] * refl.target.n
        for x, c in enumerate(r.images):
            if images[c] is None:
                images[c] = f.images[x]
            elif images[c] != f.images[x]:
                return None
        if fintop.is_continuous(refl.target, f.cod, images):
            return ContMap.unchecked(refl.target, f.cod, images)
        return None
    for g in hom_tuples(refl.target.nbhd, f.cod.nbhd):
        if all(g[v] == w for v, w in zip(r.images, f.images)):
            return ContMap.unchecked(refl.target, f.cod, g)
    return None


def composite_reflection(X: FinSpace, A: SubcatSpec, B: SubcatSpec) -> Reflection:
    """B-reflection of X followed by the A-reflection of its target."""
    s = B.reflect(X)
    r = A.reflect(s.target)
    return Reflection(X, r.morphism @ s.morphism, r.target, weak=A.weak or B.weak)


# ---------------------------------------------------------------------------
# pair sweeps


@lru_cache(maxsize=None)
def pair_agreements(dom_nbhd: tuple[int, ...], cod_nbhd: tuple[int, ...]) -> dict[int, tuple]:
    """Agreement set of every ordered pair of maps dom -> cod, first pair per set.

    Maps to ``{mask: (h, k)}``; pairs are scanned in lexicographic order.
    """
    homs = hom_tuples(dom_nbhd, cod_nbhd)
    n = len(dom_nbhd)
    if not homs:
        return {}
    if n == 0:
        return {0: ((), ())}
    H = np.asarray(homs, dtype=np.int16)
    weights = (1 << np.arange(n)).astype(np.int64)
    masks = ((H[:, None, :] == H[None, :, :]) @ weights).ravel()
    values, first = np.unique(masks, return_index=True)
    size = len(homs)
    out = {}
    for v, idx in sorted(zip(values.tolist(), first.tolist()), key=lambda t: t[1]):
        out[v] = (homs[idx // size], homs[idx % size])
    return out


def member_agreements(D: FinSpace, A: SubcatSpec, bound: int) -> dict[int, tuple]:
    """Agreement sets of pairs D -> M over members M with at most ``bound`` points.

    ``{mask: (h, k, M)}``, first witness in canonical member order.
    """
    if bound > BRUTE_FORCE_LIMIT:
        raise BudgetError(f"codomain bound {bound} exceeds the brute-force limit {BRUTE_FORCE_LIMIT}")
    key = ("agreements", D.nbhd, bound)
    if key in A._memo:
        return A._memo[key]
    out: dict[int, tuple] = {}
    total = 1 << D.n
    for M in A.members(bound):
        for mask, (h, k) in pair_agreements(D.nbhd, M.nbhd).items():
            if mask not in out:
                out[mask] = (h, k, M)
        if len(out) == total:
            break
    A._memo[key] = out
    return out


def exact_bound(A: SubcatSpec, size: int) -> int | None:
    """Codomain bound that makes pair sweeps from a ``size``-point space exact, if known."""
    return 2 * size if A.hereditary else None


@dataclass(frozen=True)
class Verdict:
    value: bool
    bound: int
    exact: bool
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.value


def _pair_bound(A: SubcatSpec, size: int, bound: int | None) -> tuple[int, bool]:
    if bound is not None:
        exact = A.hereditary and bound >= 2 * size
        return bound, exact
    eb = exact_bound(A, size)
    if eb is not None and eb <= BRUTE_FORCE_LIMIT:
        return eb, True
    return min(A.bound, BRUTE_FORCE_LIMIT), False


def is_cancellable(f: ContMap, A: SubcatSpec, bound: int | None = None) -> Verdict:
    """Do pairs from cod(f) into members that agree after f coincide?

    Witness ``(h, k, M)`` when they need not.  Alias: ``is_rel_epi``.
    """
    D = f.cod
    bound, exact = _pair_bound(A, D.n, bound)
    image = f.image()
    for mask, (h, k, M) in member_agreements(D, A, bound).items():
        if mask != D.full and mask & image == image:
            return Verdict(False, bound, exact, (ContMap.unchecked(D, M, h), ContMap.unchecked(D, M, k)))
    return Verdict(True, bound, exact)


is_rel_epi = is_cancellable


def separates(f: ContMap, X: FinSpace) -> tuple | None:
    """A pair h != k: cod(f) -> X with h f = k f, or None when f is {X}-cancellable."""
    image = f.image()
    D = f.cod
    for mask, (h, k) in pair_agreements(D.nbhd, X.nbhd).items():
        if mask != D.full and mask & image == image:
            return ContMap.unchecked(D, X, h), ContMap.unchecked(D, X, k)
    return None


# ---------------------------------------------------------------------------
# hulls


@dataclass(frozen=True)
class HullReport:
    space: FinSpace
    hull: str
    member: bool
    bound: int | None
    witness: tuple | None = None
    exact: bool = False
    note: str = ""

    def __bool__(self) -> bool:
        return self.member


def _find_map(X: FinSpace, A: SubcatSpec, bound: int, accept) -> tuple | None:
    for M in A.members(bound):
        if M.n < X.n:
            continue
        for t in hom_tuples(X.nbhd, M.nbhd):
            f = ContMap.unchecked(X, M, t)
            if accept(f):
                return (f,)
    return None


def _map_bound(X: FinSpace, A: SubcatSpec, bound: int | None) -> tuple[int, bool]:
    # an injective map into a hereditary A restricts onto its image, a member of size |X|
    if bound is not None:
        return bound, A.hereditary and bound >= X.n
    if A.hereditary:
        return X.n, True
    return A.bound, False


def in_S_hull(X: FinSpace, A: SubcatSpec, bound: int | None = None) -> HullReport:
    """Does X embed into a member of A?

    Generator-described and reflective subcategories are decided exactly
    through the reflection being an embedding; otherwise by bounded search.
    """
    if A.kind == "seh" or (A.has_reflector and not A.weak):
        r = A.reflect(X).morphism
        member = r.is_embedding()
        return HullReport(X, "S", member, None, (r,) if member else None, exact=True)
    return _embedding_search(X, A, bound, "S")


def _embedding_search(X: FinSpace, A: SubcatSpec, bound: int | None, hull: str) -> HullReport:
    b, exact = _map_bound(X, A, bound)
    witness = _find_map(X, A, b, ContMap.is_embedding)
    return HullReport(X, hull, witness is not None, b, witness, exact=exact or witness is not None)


def in_smallest_intermediate(X: FinSpace, A: SubcatSpec, bound: int | None = None) -> HullReport:
    """Is X an extremal subobject (subspace) of a member?  Always by embedding search."""
    return _embedding_search(X, A, bound, "smallest-intermediate")


def in_mono_hull(X: FinSpace, A: SubcatSpec, bound: int | None = None) -> HullReport:
    """Is there an injective continuous map from X into a member?"""
    b, exact = _map_bound(X, A, bound)
    witness = _find_map(X, A, b, ContMap.is_injective)
    return HullReport(X, "mono-hull", witness is not None, b, witness, exact=exact or witness is not None)


def _test_morphisms(bound: int):
    for D in fintop.universe(bound, limit=fintop.ENUMERATION_LIMIT):
        for C in fintop.universe(bound, limit=fintop.ENUMERATION_LIMIT):
            for t in hom_tuples(C.nbhd, D.nbhd):
                yield ContMap.unchecked(C, D, t)


def _hausdorff(X: FinSpace, A: SubcatSpec, bound: int | None, hull: str, in_class) -> HullReport:
    bound = A.bound if bound is None else bound
    checked: dict = {}
    for p in _test_morphisms(bound):
        key = (p.cod.nbhd, p.image())
        if key in checked:
            continue
        checked[key] = True
        if not in_class(p, A):
            continue
        pair = separates(p, X)
        if pair is not None:
            return HullReport(X, hull, False, bound, (p,) + pair, exact=True)
    return HullReport(X, hull, True, bound, None, exact=False)


def _cancellable_class(p: ContMap, A: SubcatSpec) -> bool:
    # the class is assumed to contain every epimorphism
    return p.is_surjective() or bool(is_cancellable(p, A))


def _epi_class(p: ContMap, A: SubcatSpec) -> bool:
    return bool(is_rel_epi(p, A))


def in_E_hull(X: FinSpace, A: SubcatSpec, bound: int | None = None) -> HullReport:
    """Is every A-cancellable map between spaces of at most ``bound`` points {X}-cancellable?

    A negative verdict is definitive; a positive one holds within the bound.
    """
    return _hausdorff(X, A, bound, "E", _cancellable_class)


def in_D_hull(X: FinSpace, A: SubcatSpec, bound: int | None = None) -> HullReport:
    """As ``in_E_hull`` but over A-epimorphisms."""
    return _hausdorff(X, A, bound, "D", _epi_class)


def in_largest_intermediate(X: FinSpace, A: SubcatSpec, bound: int | None = None) -> HullReport:
    """For every B embeddable in a member, pairs rB -> X agreeing after r_B coincide."""
    if not A.has_reflector:
        raise InputError(f"subcategory {A.name!r} has no reflector")
    bound = A.bound if bound is None else bound
    all_iso = True
    for B in fintop.universe(bound, limit=fintop.ENUMERATION_LIMIT):
        if not in_S_hull(B, A):
            continue
        r = A.reflect(B).morphism
        all_iso = all_iso and r.is_iso()
        pair = separates(r, X)
        if pair is not None:
            return HullReport(X, "largest-intermediate", False, bound, (r,) + pair, exact=True)
    note = "degenerate: every reflection in the class is an isomorphism" if all_iso else ""
    return HullReport(X, "largest-intermediate", True, bound, None, exact=False, note=note)


# ---------------------------------------------------------------------------
# diagonal and canonical morphism


def diagonal(X: FinSpace) -> Subobject:
    """The diagonal {(x, x)} inside X x X."""
    P, _, _ = fintop.product(X, X)
    carrier = 0
    for i in range(X.n):
        carrier |= 1 << (i * X.n + i)
    return Subobject(P, carrier)


def reflect_map(A: SubcatSpec, f: ContMap, rdom: Reflection | None = None, rcod: Reflection | None = None) -> ContMap:
    """The reflected map r(f) with r(f) @ r_dom == r_cod @ f."""
    rdom = rdom or A.reflect(f.dom)
    rcod = rcod or A.reflect(f.cod)
    g = factor_through(rdom, rcod.morphism @ f)
    if g is None:
        raise InputError(f"map does not factor through the {A.name!r} reflection")
    return g


def canonical_alpha(U: FinSpace, X: FinSpace, A: SubcatSpec) -> tuple[ContMap, bool]:
    """The comparison map r(U x X) -> rU x rX and whether it is injective."""
    if not A.has_reflector:
        raise InputError(f"subcategory {A.name!r} has no reflector")
    P, p, q = fintop.product(U, X)
    rP, rU, rX = A.reflect(P), A.reflect(U), A.reflect(X)
    rp = reflect_map(A, p, rP, rU)
    rq = reflect_map(A, q, rP, rX)
    R, _, _ = fintop.product(rU.target, rX.target)
    m = rX.target.n
    images = tuple(a * m + b for a, b in zip(rp.images, rq.images))
    alpha = ContMap.unchecked(rP.target, R, images)
    return alpha, alpha.is_injective()


def lord_condition_star(X: FinSpace, A: SubcatSpec, bound: int | None = None):
    """First (Z, f, g, gbar) with f != g, r f = r g, gbar g = gbar f, g gbar g = g, or None."""
    if not A.has_reflector:
        raise InputError(f"subcategory {A.name!r} has no reflector")
    if A.contains(X):
        raise InputError("the splitting condition only concerns non-members")
    bound = A.bound if bound is None else bound
    r = A.reflect(X).morphism.images
    for Z in fintop.universe(bound, limit=fintop.ENUMERATION_LIMIT):
        maps = hom_tuples(Z.nbhd, X.nbhd)
        back = hom_tuples(X.nbhd, Z.nbhd)
        for f in maps:
            rf = tuple(r[v] for v in f)
            for g in maps:
                if f == g or tuple(r[v] for v in g) != rf:
                    continue
                for gb in back:
                    gbg = tuple(gb[v] for v in g)
                    if gbg != tuple(gb[v] for v in f):
                        continue
                    if tuple(g[w] for w in gbg) == g:
                        return (
                            Z,
                            ContMap.unchecked(Z, X, f),
                            ContMap.unchecked(Z, X, g),
                            ContMap.unchecked(X, Z, gb),
                        )
    return None
