"""Finite categories and brute-force universal-property verifiers.

Nothing in this module knows about topology.  A ``FinCategory`` is given by
its objects, hom-sets, composition and identities; the verifiers decide
universal properties by exhausting hom-sets.  They are deliberately slow
and serve as the oracle for the direct constructions in ``fintop``.

Verifiers take an optional ``test_objects`` sequence restricting the
objects the universal property is quantified over (default: all objects).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .errors import InputError, ValidationError

Morphism = Hashable


class FinCategory:
    """A finite category.

    ``hom(a, b)`` returns the morphisms a -> b as a tuple in canonical order,
    ``compose(g, f)`` is g after f.
    """

    def __init__(
        self,
        objects: Sequence,
        hom: Callable[[Any, Any], tuple],
        dom: Callable[[Morphism], Any],
        cod: Callable[[Morphism], Any],
        compose: Callable[[Morphism, Morphism], Morphism],
        identity: Callable[[Any], Morphism],
    ):
        self.objects = tuple(objects)
        self._hom = hom
        self._dom = dom
        self._cod = cod
        self._compose = compose
        self._identity = identity

    @classmethod
    def from_tables(
        cls,
        objects: Sequence,
        morphisms: Iterable[tuple[Morphism, Any, Any]],
        composition: Mapping[tuple[Morphism, Morphism], Morphism],
        identities: Mapping[Any, Morphism],
    ) -> "FinCategory":
        """Build from explicit tables; ``composition[(g, f)]`` is g after f."""
        objects = tuple(objects)
        doms: dict = {}
        cods: dict = {}
        homs: dict = {(a, b): [] for a in objects for b in objects}
        for mid, a, b in morphisms:
            if mid in doms:
                raise ValidationError(f"duplicate morphism id {mid!r}", mid)
            if (a, b) not in homs:
                raise ValidationError(f"morphism {mid!r} has an unknown endpoint", mid)
            doms[mid], cods[mid] = a, b
            homs[a, b].append(mid)
        frozen = {k: tuple(v) for k, v in homs.items()}
        table = dict(composition)

        def compose(g, f):
            if cods.get(f) != doms.get(g):
                raise InputError(f"{g!r} and {f!r} are not composable")
            try:
                return table[g, f]
            except KeyError:
                raise ValidationError(f"composition table has no entry for ({g!r}, {f!r})", (g, f)) from None

        def lookup(d, f):
            try:
                return d[f]
            except KeyError:
                raise InputError(f"unknown morphism {f!r}") from None

        return cls(
            objects,
            hom=lambda a, b: frozen[a, b],
            dom=lambda f: lookup(doms, f),
            cod=lambda f: lookup(cods, f),
            compose=compose,
            identity=lambda a: identities[a],
        )

    def hom(self, a, b) -> tuple:
        return self._hom(a, b)

    def dom(self, f):
        return self._dom(f)

    def cod(self, f):
        return self._cod(f)

    def compose(self, g, f):
        return self._compose(g, f)

    def identity(self, a):
        return self._identity(a)

    @property
    def morphisms(self) -> list:
        return [f for a in self.objects for b in self.objects for f in self.hom(a, b)]

    def check_laws(self) -> list[tuple[str, tuple]]:
        """Exhaustively check closure, identity and associativity; return violations."""
        problems: list[tuple[str, tuple]] = []
        for a in self.objects:
            ida = self.identity(a)
            if ida not in self.hom(a, a):
                problems.append(("identity-missing", (a,)))
        for a, b in itertools.product(self.objects, repeat=2):
            for f in self.hom(a, b):
                if self.compose(self.identity(b), f) != f or self.compose(f, self.identity(a)) != f:
                    problems.append(("identity-law", (f,)))
                for c in self.objects:
                    for g in self.hom(b, c):
                        gf = self.compose(g, f)
                        if gf not in self.hom(a, c):
                            problems.append(("closure", (g, f)))
                            continue
                        for d in self.objects:
                            for h in self.hom(c, d):
                                if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                                    problems.append(("associativity", (h, g, f)))
        return problems


@dataclass(frozen=True)
class UniversalCertificate:
    """Outcome of a universal-property check.

    ``failure`` is one of ``"commute"``, ``"existence"``, ``"uniqueness"``
    when ``verified`` is false; ``counterexample`` is (test object, morphisms).
    """

    kind: str
    verified: bool
    counterexample: tuple | None = None
    failure: str | None = None

    def __bool__(self) -> bool:
        return self.verified


@dataclass(frozen=True)
class MorphismClass:
    mono: bool
    epi: bool
    iso: bool


def _known(C: FinCategory, f) -> tuple:
    a, b = C.dom(f), C.cod(f)
    if f not in C.hom(a, b):
        raise InputError(f"unknown morphism {f!r}")
    return a, b


def morphism_class(C: FinCategory, f) -> MorphismClass:
    a, b = _known(C, f)
    mono = True
    for t in C.objects:
        seen = {}
        for u in C.hom(t, a):
            key = C.compose(f, u)
            if key in seen:
                mono = False
                break
            seen[key] = u
        if not mono:
            break
    epi = True
    for z in C.objects:
        seen = {}
        for u in C.hom(b, z):
            key = C.compose(u, f)
            if key in seen:
                epi = False
                break
            seen[key] = u
        if not epi:
            break
    iso = any(
        C.compose(g, f) == C.identity(a) and C.compose(f, g) == C.identity(b)
        for g in C.hom(b, a)
    )
    return MorphismClass(mono, epi, iso)


def _tests(C: FinCategory, test_objects) -> tuple:
    return C.objects if test_objects is None else tuple(test_objects)


def verify_equalizer(C: FinCategory, e, f, g, test_objects=None) -> UniversalCertificate:
    """Is ``e`` an equalizer of the parallel pair ``f, g``?"""
    _known(C, e), _known(C, f), _known(C, g)
    E, X = C.dom(e), C.cod(e)
    if C.dom(f) != X or C.dom(g) != X or C.cod(f) != C.cod(g):
        raise InputError("equalizer needs e: E -> X and a parallel pair f, g: X -> Y")
    if C.compose(f, e) != C.compose(g, e):
        return UniversalCertificate("equalizer", False, (E, (e,)), "commute")
    for t in _tests(C, test_objects):
        through = {}
        for u in C.hom(t, E):
            through.setdefault(C.compose(e, u), []).append(u)
        for h in C.hom(t, X):
            if C.compose(f, h) != C.compose(g, h):
                continue
            found = through.get(h, [])
            if not found:
                return UniversalCertificate("equalizer", False, (t, (h,)), "existence")
            if len(found) > 1:
                return UniversalCertificate("equalizer", False, (t, (h, found[0], found[1])), "uniqueness")
    return UniversalCertificate("equalizer", True)


def verify_cokernel_pair(C: FinCategory, m, i, j, test_objects=None) -> UniversalCertificate:
    """Is ``(i, j)`` a cokernel pair (pushout of ``m`` along itself)?"""
    _known(C, m), _known(C, i), _known(C, j)
    X = C.cod(m)
    Y = C.cod(i)
    if C.dom(i) != X or C.dom(j) != X or C.cod(j) != Y:
        raise InputError("cokernel pair needs i, j: cod(m) -> Y")
    if C.compose(i, m) != C.compose(j, m):
        return UniversalCertificate("cokernel-pair", False, (Y, (i, j)), "commute")
    for z in _tests(C, test_objects):
        mediated: dict = {}
        for u in C.hom(Y, z):
            mediated.setdefault((C.compose(u, i), C.compose(u, j)), []).append(u)
        cone = C.hom(X, z)
        for a in cone:
            am = C.compose(a, m)
            for b in cone:
                if C.compose(b, m) != am:
                    continue
                found = mediated.get((a, b), [])
                if not found:
                    return UniversalCertificate("cokernel-pair", False, (z, (a, b)), "existence")
                if len(found) > 1:
                    return UniversalCertificate("cokernel-pair", False, (z, (a, b, found[0], found[1])), "uniqueness")
    return UniversalCertificate("cokernel-pair", True)


def verify_product(C: FinCategory, p, q, test_objects=None) -> UniversalCertificate:
    """Is ``P`` with projections ``p: P -> X``, ``q: P -> Y`` a product?"""
    _known(C, p), _known(C, q)
    P = C.dom(p)
    if C.dom(q) != P:
        raise InputError("projections must share a domain")
    X, Y = C.cod(p), C.cod(q)
    for t in _tests(C, test_objects):
        mediated: dict = {}
        for u in C.hom(t, P):
            mediated.setdefault((C.compose(p, u), C.compose(q, u)), []).append(u)
        for a in C.hom(t, X):
            for b in C.hom(t, Y):
                found = mediated.get((a, b), [])
                if not found:
                    return UniversalCertificate("product", False, (t, (a, b)), "existence")
                if len(found) > 1:
                    return UniversalCertificate("product", False, (t, (a, b, found[0], found[1])), "uniqueness")
    return UniversalCertificate("product", True)


def verify_pullback(C: FinCategory, p, q, f, g, test_objects=None) -> UniversalCertificate:
    """Is ``(p, q)`` a pullback of the cospan ``f: X -> Z <- Y: g``?"""
    for h in (p, q, f, g):
        _known(C, h)
    P, X, Y = C.dom(p), C.dom(f), C.dom(g)
    if C.dom(q) != P or C.cod(p) != X or C.cod(q) != Y or C.cod(f) != C.cod(g):
        raise InputError("pullback needs p: P -> X, q: P -> Y over a cospan X -> Z <- Y")
    if C.compose(f, p) != C.compose(g, q):
        return UniversalCertificate("pullback", False, (P, (p, q)), "commute")
    for t in _tests(C, test_objects):
        mediated: dict = {}
        for u in C.hom(t, P):
            mediated.setdefault((C.compose(p, u), C.compose(q, u)), []).append(u)
        for a in C.hom(t, X):
            fa = C.compose(f, a)
            for b in C.hom(t, Y):
                if C.compose(g, b) != fa:
                    continue
                found = mediated.get((a, b), [])
                if not found:
                    return UniversalCertificate("pullback", False, (t, (a, b)), "existence")
                if len(found) > 1:
                    return UniversalCertificate("pullback", False, (t, (a, b, found[0], found[1])), "uniqueness")
    return UniversalCertificate("pullback", True)


def search_equalizer(C: FinCategory, f, g, test_objects=None):
    """First morphism (canonical order) that equalizes ``f, g`` universally, else None."""
    _known(C, f), _known(C, g)
    X = C.dom(f)
    if C.dom(g) != X or C.cod(f) != C.cod(g):
        raise InputError("search_equalizer needs a parallel pair")
    for e_dom in C.objects:
        for e in C.hom(e_dom, X):
            if verify_equalizer(C, e, f, g, test_objects):
                return e
    return None
