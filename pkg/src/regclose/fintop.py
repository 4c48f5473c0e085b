"""Finite topological spaces and continuous maps.

A finite space is stored through its specialization preorder: for every
point ``x`` we keep ``nbhd[x]``, the smallest open set containing ``x``, as
an integer bitmask.  Open sets are exactly the unions of these minimal
neighbourhoods, so the full open family is derivable (``FinSpace.opens``)
but never needed for the constructions below.  We write ``x <= y`` when
``y`` lies in ``nbhd[x]``; a map is continuous iff it is monotone for this
relation.

Everything here is immutable.  Maps are tuples of target indices, which
also gives the canonical (lexicographic) order on hom-sets.
"""

from __future__ import annotations

import itertools
import json
import os
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import BudgetError, InputError, ValidationError

DEFAULT_MAX_POINTS = 4
# Internal universes (brute-force codomains) may go past the public ceiling.
ENUMERATION_LIMIT = 7
DEFAULT_EXPORT_BUDGET = 200_000


def max_points() -> int:
    """Public universe ceiling, overridable through ``REGCLOSE_MAX_POINTS``."""
    raw = os.environ.get("REGCLOSE_MAX_POINTS")
    if raw is None:
        return DEFAULT_MAX_POINTS
    try:
        value = int(raw)
    except ValueError:
        raise InputError(f"REGCLOSE_MAX_POINTS must be an integer, got {raw!r}") from None
    return min(value, ENUMERATION_LIMIT)


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask`` in increasing order."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def _compress(mask: int, carrier: int) -> int:
    """Re-index ``mask`` (a subset of ``carrier``) onto positions within ``carrier``."""
    out = 0
    for pos, i in enumerate(bits(carrier)):
        if mask >> i & 1:
            out |= 1 << pos
    return out


def _transitive_closure(up: list[int]) -> list[int]:
    n = len(up)
    up = [u | (1 << i) for i, u in enumerate(up)]
    for k in range(n):
        kb = 1 << k
        uk = up[k]
        for i in range(n):
            if up[i] & kb:
                up[i] |= uk
    return up


# ---------------------------------------------------------------------------
# spaces


@dataclass(frozen=True)
class FinSpace:
    """A finite topological space.

    ``points`` are unique string labels, ``nbhd[i]`` is the minimal open
    neighbourhood of point ``i`` as a bitmask over point indices.
    """

    points: tuple[str, ...]
    nbhd: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << len(self.points)) - 1

    def leq(self, x: int, y: int) -> bool:
        """Specialization order: every open containing ``x`` contains ``y``."""
        return bool(self.nbhd[x] >> y & 1)

    @cached_property
    def down(self) -> tuple[int, ...]:
        """``down[y]`` = the points ``x`` with ``x <= y`` (closure of ``{y}``)."""
        out = [0] * self.n
        for x, u in enumerate(self.nbhd):
            for y in bits(u):
                out[y] |= 1 << x
        return tuple(out)

    @cached_property
    def opens(self) -> tuple[int, ...]:
        """All open sets as bitmasks, sorted by (cardinality, index list)."""
        found = {0}
        for u in self.nbhd:
            found |= {o | u for o in found}
        return tuple(sorted(found, key=lambda o: (popcount(o), list(bits(o)))))

    def is_open(self, mask: int) -> bool:
        return all(self.nbhd[x] & ~mask == 0 for x in bits(mask))

    def is_closed(self, mask: int) -> bool:
        return self.is_open(self.full & ~mask)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {p: i for i, p in enumerate(self.points)}

    def index(self, label: str) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise InputError(f"unknown point {label!r}") from None

    def mask(self, labels: Iterable[str]) -> int:
        out = 0
        for label in labels:
            out |= 1 << self.index(label)
        return out

    def labels(self, mask: int) -> list[str]:
        return [self.points[i] for i in bits(mask)]

    def is_t0(self) -> bool:
        return len(set(self.nbhd)) == self.n

    def is_discrete(self) -> bool:
        return all(u == 1 << i for i, u in enumerate(self.nbhd))

    def is_indiscrete(self) -> bool:
        return all(u == self.full for u in self.nbhd)

    def relabel(self, points: Sequence[str]) -> "FinSpace":
        return make_space_from_nbhd(points, self.nbhd)

    def __repr__(self) -> str:
        parts = ", ".join(
            f"{p}:{{{','.join(self.labels(u))}}}" for p, u in zip(self.points, self.nbhd)
        )
        return f"FinSpace({parts})"


def make_space_from_nbhd(points: Sequence[str], nbhd: Sequence[int]) -> FinSpace:
    """Build a space from minimal neighbourhoods, checking they form a preorder."""
    points = tuple(str(p) for p in points)
    nbhd = tuple(nbhd)
    if len(set(points)) != len(points):
        dup = next(p for p in points if points.count(p) > 1)
        raise ValidationError(f"duplicate point label {dup!r}", dup)
    if len(nbhd) != len(points):
        raise ValidationError("one neighbourhood per point is required")
    full = (1 << len(points)) - 1
    for x, u in enumerate(nbhd):
        if u & ~full or not u >> x & 1:
            raise ValidationError(f"neighbourhood of {points[x]!r} is malformed", points[x])
        for y in bits(u):
            if nbhd[y] & ~u:
                raise ValidationError(
                    f"neighbourhoods are not transitive at ({points[x]!r}, {points[y]!r})",
                    (points[x], points[y]),
                )
    return FinSpace(points, nbhd)


def mk_space(points: Sequence, opens: Iterable[Iterable]) -> FinSpace:
    """Validate an explicit open-set family and return the space.

    Raises ValidationError naming the violated axiom; closure failures carry
    the offending pair of opens as witness.
    """
    points = [str(p) for p in points]
    seen: set[str] = set()
    for p in points:
        if p in seen:
            raise ValidationError(f"points: duplicate label {p!r}", p)
        seen.add(p)
    index = {p: i for i, p in enumerate(points)}
    full = (1 << len(points)) - 1
    family = set()
    for o in opens:
        m = 0
        for label in o:
            label = str(label)
            if label not in index:
                raise ValidationError(f"opens: unknown point {label!r}", label)
            m |= 1 << index[label]
        family.add(m)
    if 0 not in family:
        raise ValidationError("opens: the empty set must be open")
    if full not in family:
        raise ValidationError("opens: the whole point set must be open")
    ordered = sorted(family)
    for a, b in itertools.combinations(ordered, 2):
        for combined, axiom in ((a | b, "union"), (a & b, "intersection")):
            if combined not in family:
                pair = ([points[i] for i in bits(a)], [points[i] for i in bits(b)])
                raise ValidationError(f"opens: not closed under {axiom}, witness {pair}", pair)
    nbhd = []
    for x in range(len(points)):
        u = full
        for o in ordered:
            if o >> x & 1:
                u &= o
        nbhd.append(u)
    return FinSpace(tuple(points), tuple(nbhd))


def point() -> FinSpace:
    return FinSpace(("*",), (1,))


def empty_space() -> FinSpace:
    return FinSpace((), ())


def discrete(n: int, prefix: str = "") -> FinSpace:
    return FinSpace(tuple(f"{prefix}{i}" for i in range(n)), tuple(1 << i for i in range(n)))


def indiscrete(n: int, prefix: str = "") -> FinSpace:
    full = (1 << n) - 1
    return FinSpace(tuple(f"{prefix}{i}" for i in range(n)), (full,) * n)


def sierpinski() -> FinSpace:
    """Points 0, 1 with {1} the only nontrivial open."""
    return mk_space(["0", "1"], [[], ["1"], ["0", "1"]])


NAMED_SPACES = {
    "point": point,
    "P1": point,
    "sierpinski": sierpinski,
    "S": sierpinski,
    "discrete2": lambda: discrete(2),
    "D2": lambda: discrete(2),
    "indiscrete2": lambda: mk_space(["a", "b"], [[], ["a", "b"]]),
    "I2": lambda: mk_space(["a", "b"], [[], ["a", "b"]]),
}


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class ContMap:
    """A continuous map; ``images[i]`` is the index in ``cod`` of the image of point ``i``."""

    dom: FinSpace
    cod: FinSpace
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.dom.n:
            raise ValidationError("map must send every point somewhere")
        if any(not 0 <= v < self.cod.n for v in self.images):
            raise ValidationError("map leaves its codomain")
        bad = _discontinuity(self.dom, self.cod, self.images)
        if bad is not None:
            raise ValidationError(
                f"map is not continuous at {self.dom.points[bad[0]]!r} <= {self.dom.points[bad[1]]!r}",
                (self.dom.points[bad[0]], self.dom.points[bad[1]]),
            )

    @classmethod
    def unchecked(cls, dom: FinSpace, cod: FinSpace, images: Sequence[int]) -> "ContMap":
        obj = object.__new__(cls)
        object.__setattr__(obj, "dom", dom)
        object.__setattr__(obj, "cod", cod)
        object.__setattr__(obj, "images", tuple(images))
        return obj

    @classmethod
    def from_labels(cls, dom: FinSpace, cod: FinSpace, assignment: dict) -> "ContMap":
        return cls(dom, cod, tuple(cod.index(assignment[p]) for p in dom.points))

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __matmul__(self, other: "ContMap") -> "ContMap":
        """``g @ f`` is the composite g after f."""
        if other.cod != self.dom:
            raise InputError("maps are not composable")
        return ContMap.unchecked(other.dom, self.cod, tuple(self.images[v] for v in other.images))

    def image(self, mask: int | None = None) -> int:
        if mask is None:
            mask = self.dom.full
        out = 0
        for i in bits(mask):
            out |= 1 << self.images[i]
        return out

    def preimage(self, mask: int) -> int:
        out = 0
        for i, v in enumerate(self.images):
            if mask >> v & 1:
                out |= 1 << i
        return out

    def is_injective(self) -> bool:
        return len(set(self.images)) == len(self.images)

    def is_surjective(self) -> bool:
        return self.image() == self.cod.full

    def is_initial(self) -> bool:
        """Domain carries the topology pulled back along the map."""
        d, c, f = self.dom, self.cod, self.images
        return all(
            d.leq(x, y) == c.leq(f[x], f[y]) for x in range(d.n) for y in range(d.n)
        )

    def is_embedding(self) -> bool:
        return self.is_injective() and self.is_initial()

    def is_iso(self) -> bool:
        return self.is_embedding() and self.is_surjective()

    def as_labels(self) -> dict[str, str]:
        return {p: self.cod.points[v] for p, v in zip(self.dom.points, self.images)}

    def __repr__(self) -> str:
        body = ", ".join(f"{a}->{b}" for a, b in self.as_labels().items())
        return f"ContMap({body})"


def _discontinuity(dom: FinSpace, cod: FinSpace, images: Sequence[int]):
    for x, u in enumerate(dom.nbhd):
        target = cod.nbhd[images[x]]
        for y in bits(u):
            if not target >> images[y] & 1:
                return (x, y)
    return None


def is_continuous(dom: FinSpace, cod: FinSpace, images: Sequence[int]) -> bool:
    return _discontinuity(dom, cod, images) is None


def identity(X: FinSpace) -> ContMap:
    return ContMap.unchecked(X, X, tuple(range(X.n)))


def constant(X: FinSpace, Y: FinSpace, label: str) -> ContMap:
    return ContMap.unchecked(X, Y, (Y.index(label),) * X.n)


@lru_cache(maxsize=None)
def hom_tuples(dom_nbhd: tuple[int, ...], cod_nbhd: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """All monotone maps between two preorders given by neighbourhood masks, lexicographic."""
    n, m = len(dom_nbhd), len(cod_nbhd)
    if n == 0:
        return ((),)
    if m == 0:
        return ()
    cod_down = [0] * m
    for a, u in enumerate(cod_nbhd):
        for b in bits(u):
            cod_down[b] |= 1 << a
    # constraints against earlier points only
    below = [[j for j in range(x) if dom_nbhd[j] >> x & 1] for x in range(n)]
    above = [[j for j in range(x) if dom_nbhd[x] >> j & 1] for x in range(n)]
    full = (1 << m) - 1
    out: list[tuple[int, ...]] = []
    current = [0] * n

    def extend(x: int) -> None:
        if x == n:
            out.append(tuple(current))
            return
        allowed = full
        for j in below[x]:
            allowed &= cod_nbhd[current[j]]
        for j in above[x]:
            allowed &= cod_down[current[j]]
        for v in bits(allowed):
            current[x] = v
            extend(x + 1)

    extend(0)
    return tuple(out)


def hom_set(X: FinSpace, Y: FinSpace) -> list[ContMap]:
    """Every continuous map X -> Y in lexicographic order of image tuples."""
    return [ContMap.unchecked(X, Y, t) for t in hom_tuples(X.nbhd, Y.nbhd)]


# ---------------------------------------------------------------------------
# subobjects


@dataclass(frozen=True)
class Subobject:
    """A subset of ``ambient`` carrying the subspace topology."""

    ambient: FinSpace
    carrier: int

    def __post_init__(self):
        if self.carrier & ~self.ambient.full:
            raise ValidationError("carrier is not a subset of the ambient space")

    @cached_property
    def space(self) -> FinSpace:
        return subspace(self.ambient, self.carrier)

    @cached_property
    def inclusion(self) -> ContMap:
        return ContMap.unchecked(self.space, self.ambient, tuple(bits(self.carrier)))

    @property
    def labels(self) -> list[str]:
        return self.ambient.labels(self.carrier)

    def is_full(self) -> bool:
        return self.carrier == self.ambient.full

    def __le__(self, other: "Subobject") -> bool:
        return self.ambient == other.ambient and self.carrier & ~other.carrier == 0

    def __repr__(self) -> str:
        return f"Subobject({{{','.join(self.labels)}}} in {self.ambient.n}-point space)"


def subobject(X: FinSpace, labels: Iterable[str]) -> Subobject:
    return Subobject(X, X.mask(labels))


def subspace(X: FinSpace, carrier: int) -> FinSpace:
    idx = list(bits(carrier))
    return FinSpace(
        tuple(X.points[i] for i in idx),
        tuple(_compress(X.nbhd[i] & carrier, carrier) for i in idx),
    )


# ---------------------------------------------------------------------------
# limits and colimits


def product(X: FinSpace, Y: FinSpace) -> tuple[FinSpace, ContMap, ContMap]:
    """Product space with its two projections; point (x, y) has index x*|Y| + y."""
    m = Y.n
    points = tuple(f"({a},{b})" for a in X.points for b in Y.points)
    nbhd = []
    for x in range(X.n):
        for y in range(m):
            u = 0
            for a in bits(X.nbhd[x]):
                u |= Y.nbhd[y] << (a * m)
            nbhd.append(u)
    P = FinSpace(points, tuple(nbhd))
    p = ContMap.unchecked(P, X, tuple(i // m for i in range(X.n * m)) if m else ())
    q = ContMap.unchecked(P, Y, tuple(i % m for i in range(X.n * m)) if m else ())
    return P, p, q


def equalizer(h: ContMap, k: ContMap) -> Subobject:
    """The subspace on which two parallel maps agree."""
    if h.dom != k.dom or h.cod != k.cod:
        raise InputError("equalizer needs a parallel pair")
    carrier = 0
    for i, (a, b) in enumerate(zip(h.images, k.images)):
        if a == b:
            carrier |= 1 << i
    return Subobject(h.dom, carrier)


def pullback(f: ContMap, g: ContMap) -> tuple[FinSpace, ContMap, ContMap]:
    """Pullback of a cospan X -f-> Z <-g- Y, as a subspace of X x Y."""
    if f.cod != g.cod:
        raise InputError("pullback needs a cospan")
    P, p, q = product(f.dom, g.dom)
    carrier = 0
    for i in range(P.n):
        if f.images[p.images[i]] == g.images[q.images[i]]:
            carrier |= 1 << i
    sub = Subobject(P, carrier)
    return sub.space, p @ sub.inclusion, q @ sub.inclusion


def quotient(X: FinSpace, classes: Sequence[int], labels: Sequence[str]) -> tuple[ContMap, FinSpace]:
    """Quotient by the partition ``classes`` (class index per point) with the quotient topology."""
    k = len(labels)
    up = [0] * k
    for x, u in enumerate(X.nbhd):
        for y in bits(u):
            up[classes[x]] |= 1 << classes[y]
    Q = FinSpace(tuple(labels), tuple(_transitive_closure(up)))
    return ContMap.unchecked(X, Q, tuple(classes)), Q


@dataclass(frozen=True)
class CokernelPair:
    source: Subobject
    apex: FinSpace
    left: ContMap
    right: ContMap


def cokernel_pair(m: Subobject) -> CokernelPair:
    """Two copies of the ambient glued along the carrier, with the quotient topology.

    The left injection keeps point indices; the right one sends the points
    outside the carrier to indices ``n, n+1, ...``.  Glued points keep their
    label, duplicated ones get suffixes ``_1`` and ``_2``.
    """
    X = m.ambient
    n = X.n
    labels = [p if m.carrier >> i & 1 else f"{p}_1" for i, p in enumerate(X.points)]
    right = list(range(n))
    for i in range(n):
        if not m.carrier >> i & 1:
            right[i] = len(labels)
            labels.append(f"{X.points[i]}_2")
    # quotient of the disjoint union X + X
    classes = list(range(n)) + right
    union_nbhd = list(X.nbhd) + [u << n for u in X.nbhd]
    union = FinSpace(tuple(f"{p}#1" for p in X.points) + tuple(f"{p}#2" for p in X.points), tuple(union_nbhd))
    _, Y = quotient(union, classes, labels)
    return CokernelPair(
        m,
        Y,
        ContMap.unchecked(X, Y, tuple(range(n))),
        ContMap.unchecked(X, Y, tuple(right)),
    )


def coproduct(X: FinSpace, Y: FinSpace) -> tuple[FinSpace, ContMap, ContMap]:
    n = X.n
    S = FinSpace(
        tuple(f"{p}#1" for p in X.points) + tuple(f"{p}#2" for p in Y.points),
        tuple(X.nbhd) + tuple(u << n for u in Y.nbhd),
    )
    return (
        S,
        ContMap.unchecked(X, S, tuple(range(n))),
        ContMap.unchecked(Y, S, tuple(range(n, n + Y.n))),
    )


def factorize(f: ContMap) -> tuple[ContMap, Subobject]:
    """(surjection, embedding) factorization: f = m.inclusion @ e."""
    m = Subobject(f.cod, f.image())
    pos = {v: i for i, v in enumerate(bits(m.carrier))}
    e = ContMap.unchecked(f.dom, m.space, tuple(pos[v] for v in f.images))
    return e, m


def _partition_labels(X: FinSpace, classes: Sequence[int], k: int) -> list[str]:
    members: list[list[str]] = [[] for _ in range(k)]
    for x, c in enumerate(classes):
        members[c].append(X.points[x])
    return ["|".join(ms) for ms in members]


def _classes_by_key(keys: Sequence) -> tuple[list[int], int]:
    seen: dict = {}
    out = []
    for key in keys:
        if key not in seen:
            seen[key] = len(seen)
        out.append(seen[key])
    return out, len(seen)


def t0_reflection(X: FinSpace) -> tuple[ContMap, FinSpace]:
    """Identify topologically indistinguishable points."""
    classes, k = _classes_by_key(X.nbhd)
    return quotient(X, classes, _partition_labels(X, classes, k))


def components(X: FinSpace) -> list[int]:
    """Connected-component index of every point."""
    sym = [X.nbhd[x] | X.down[x] for x in range(X.n)]
    comp = [-1] * X.n
    k = 0
    for s in range(X.n):
        if comp[s] >= 0:
            continue
        stack = [s]
        comp[s] = k
        while stack:
            x = stack.pop()
            for y in bits(sym[x]):
                if comp[y] < 0:
                    comp[y] = k
                    stack.append(y)
        k += 1
    return comp


def discrete_reflection(X: FinSpace) -> tuple[ContMap, FinSpace]:
    """Collapse connected components to points of a discrete space."""
    classes = components(X)
    k = max(classes, default=-1) + 1
    labels = _partition_labels(X, classes, k)
    D = FinSpace(tuple(labels), tuple(1 << i for i in range(k)))
    return ContMap.unchecked(X, D, tuple(classes)), D


# ---------------------------------------------------------------------------
# canonical forms


def _refined_colors(nbhd: tuple[int, ...], down: tuple[int, ...]) -> list[int]:
    n = len(nbhd)
    colors = [(popcount(nbhd[x]), popcount(down[x])) for x in range(n)]
    colors = _rank(colors)
    while True:
        sigs = [
            (colors[x],
             tuple(sorted(colors[y] for y in bits(nbhd[x]))),
             tuple(sorted(colors[y] for y in bits(down[x]))))
            for x in range(n)
        ]
        new = _rank(sigs)
        if len(set(new)) == len(set(colors)):
            return new
        colors = new


def _rank(values: list) -> list[int]:
    order = {v: i for i, v in enumerate(sorted(set(values)))}
    return [order[v] for v in values]


def _twin_classes(group: list[int], nbhd, down) -> list[list[int]]:
    """Split a colour group into classes of points whose transposition is an automorphism."""
    classes: list[list[int]] = []
    for x in group:
        for cls in classes:
            y = cls[0]
            xy = (1 << x) | (1 << y)
            if (
                nbhd[x] & ~xy == nbhd[y] & ~xy
                and down[x] & ~xy == down[y] & ~xy
                and bool(nbhd[x] >> y & 1) == bool(nbhd[y] >> x & 1)
            ):
                cls.append(x)
                break
        else:
            classes.append([x])
    return classes


def _multiset_orders(classes: list[list[int]]) -> Iterator[list[int]]:
    """Orders of the union of ``classes`` up to reordering inside a class."""
    counts = [len(c) for c in classes]
    total = sum(counts)
    used = [0] * len(classes)
    seq: list[int] = []

    def rec():
        if len(seq) == total:
            yield list(seq)
            return
        for c in range(len(classes)):
            if used[c] < counts[c]:
                seq.append(classes[c][used[c]])
                used[c] += 1
                yield from rec()
                used[c] -= 1
                seq.pop()

    yield from rec()


@lru_cache(maxsize=None)
def _canonical(nbhd: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    n = len(nbhd)
    down = [0] * n
    for x, u in enumerate(nbhd):
        for y in bits(u):
            down[y] |= 1 << x
    colors = _refined_colors(nbhd, tuple(down))
    groups = [[x for x in range(n) if colors[x] == c] for c in sorted(set(colors))]
    per_group = [list(_multiset_orders(_twin_classes(g, nbhd, down))) for g in groups]
    best = None
    best_order = None
    for choice in itertools.product(*per_group):
        order = [x for part in choice for x in part]
        pos = [0] * n
        for k, x in enumerate(order):
            pos[x] = k
        enc = tuple(sum(1 << pos[y] for y in bits(nbhd[x])) for x in order)
        if best is None or enc < best:
            best, best_order = enc, tuple(order)
    return (best or ()), (best_order or ())


def canonical_labeling(X: FinSpace) -> tuple[str, tuple[int, ...]]:
    """Canonical form string and ``order`` with ``order[k]`` = original index at canonical position k."""
    enc, order = _canonical(X.nbhd)
    return _encode(enc), order


def _encode(enc: tuple[int, ...]) -> str:
    return f"{len(enc)}:" + ".".join(format(m, "x") for m in enc)


def canonical_form(X: FinSpace) -> str:
    """A string equal for two spaces iff they are homeomorphic."""
    return canonical_labeling(X)[0]


def from_canonical_form(form: str) -> FinSpace:
    try:
        head, _, body = form.partition(":")
        n = int(head)
        masks = [int(part, 16) for part in body.split(".")] if n else []
    except ValueError:
        raise InputError(f"malformed canonical form {form!r}") from None
    if len(masks) != n:
        raise InputError(f"malformed canonical form {form!r}")
    X = make_space_from_nbhd([str(i) for i in range(n)], masks)
    if canonical_form(X) != form:
        raise InputError(f"{form!r} is not in canonical form")
    return X


def canonical_space(X: FinSpace) -> tuple[FinSpace, ContMap]:
    """The canonical representative of X's class and a homeomorphism X -> representative."""
    form, order = canonical_labeling(X)
    rep = _rep_from_form(form)
    pos = [0] * X.n
    for k, x in enumerate(order):
        pos[x] = k
    return rep, ContMap.unchecked(X, rep, tuple(pos))


@lru_cache(maxsize=None)
def _rep_from_form(form: str) -> FinSpace:
    head, _, body = form.partition(":")
    n = int(head)
    masks = tuple(int(part, 16) for part in body.split(".")) if n else ()
    return FinSpace(tuple(str(i) for i in range(n)), masks)


def homeomorphic(X: FinSpace, Y: FinSpace) -> bool:
    return canonical_form(X) == canonical_form(Y)


def find_homeomorphism(X: FinSpace, Y: FinSpace) -> ContMap | None:
    """Brute-force search over all bijections; independent of canonical_form."""
    if X.n != Y.n:
        return None
    for perm in itertools.permutations(range(Y.n)):
        f = ContMap.unchecked(X, Y, perm)
        if f.is_initial():
            return f
    return None


# ---------------------------------------------------------------------------
# enumeration


@lru_cache(maxsize=None)
def _class_encodings(n: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    found = set()
    p = n - 1
    pbit = 1 << p
    for base in _class_encodings(n - 1):
        X = FinSpace(tuple(str(i) for i in range(n - 1)), base)
        opens = X.opens
        full = X.full
        closed = [full & ~o for o in opens]
        for c in closed:
            common = full
            for x in bits(c):
                common &= base[x]
            new_base = tuple(u | pbit if c >> x & 1 else u for x, u in enumerate(base))
            for o in opens:
                if o & ~common:
                    continue
                found.add(_canonical(new_base + (o | pbit,))[0])
    return tuple(sorted(found))


def spaces_of_size(n: int) -> list[FinSpace]:
    """Canonical representatives of every n-point space, no public ceiling applied."""
    if n > ENUMERATION_LIMIT:
        raise BudgetError(f"enumeration of {n}-point spaces exceeds the hard limit {ENUMERATION_LIMIT}")
    return [_rep_from_form(_encode(enc)) for enc in _class_encodings(n)]


def enumerate_spaces(n: int, limit: int | None = None) -> list[FinSpace]:
    """One representative per homeomorphism class of n-point spaces, canonical order."""
    ceiling = max_points() if limit is None else limit
    if n < 0:
        raise InputError("number of points must be non-negative")
    if n > ceiling:
        raise BudgetError(f"n = {n} exceeds the universe ceiling {ceiling}")
    return spaces_of_size(n)


def universe(max_n: int, include_empty: bool = True, limit: int | None = None) -> list[FinSpace]:
    """All spaces with at most ``max_n`` points, by size then canonical form."""
    start = 0 if include_empty else 1
    out: list[FinSpace] = []
    for n in range(start, max_n + 1):
        out.extend(enumerate_spaces(n, limit=limit))
    return out


# ---------------------------------------------------------------------------
# category export


def export_category(
    spaces: Sequence[FinSpace],
    budget: int = DEFAULT_EXPORT_BUDGET,
    names: Sequence[str] | None = None,
    lazy: bool = False,
):
    """The full subcategory of finite spaces on ``spaces``.

    Object ids are ``names`` (default ``X0, X1, ...``).  Morphism ids are
    ``(dom index, cod index, image tuple)``, so their natural order is the
    canonical morphism order.  Composites are read off the function graphs.

    Hom-sets are materialized eagerly and ``budget`` caps the total morphism
    count.  With ``lazy=True`` a hom-set is built on first use and the budget
    applies to each hom-set separately; use this when some objects are large
    and only hom-sets out of small test objects will be asked for.
    """
    from .core_cat import FinCategory

    spaces = list(spaces)
    names = list(names) if names is not None else [f"X{i}" for i in range(len(spaces))]
    if len(names) != len(spaces) or len(set(names)) != len(names):
        raise InputError("object names must be unique, one per space")
    position = {name: i for i, name in enumerate(names)}
    homs: dict = {}

    def build(a: int, b: int) -> tuple:
        X, Y = spaces[a], spaces[b]
        if Y.n ** X.n > budget and lazy:
            raise BudgetError(f"hom-set {names[a]} -> {names[b]} may exceed the morphism budget {budget}")
        return tuple((a, b, t) for t in hom_tuples(X.nbhd, Y.nbhd))

    def hom(x, y):
        key = (x, y)
        if key not in homs:
            homs[key] = build(position[x], position[y])
        return homs[key]

    if not lazy:
        total = 0
        for x in names:
            for y in names:
                total += len(hom(x, y))
                if total > budget:
                    raise BudgetError(f"exported category exceeds the morphism budget {budget}")

    def compose(g, f):
        if f[1] != g[0]:
            raise InputError("morphisms are not composable")
        return (f[0], g[1], tuple(g[2][v] for v in f[2]))

    category = FinCategory(
        objects=tuple(names),
        hom=hom,
        dom=lambda f: names[f[0]],
        cod=lambda f: names[f[1]],
        compose=compose,
        identity=lambda a: (position[a], position[a], tuple(range(spaces[position[a]].n))),
    )
    category.spaces = dict(zip(names, spaces))
    return category


def morphism_id(category, f: ContMap) -> tuple:
    """Look up the id of a continuous map in an exported category by its spaces."""
    dom = cod = None
    for i, name in enumerate(category.objects):
        X = category.spaces[name]
        if dom is None and X == f.dom:
            dom = i
        if cod is None and X == f.cod:
            cod = i
    if dom is None or cod is None:
        raise InputError("map's spaces are not objects of the category")
    return (dom, cod, f.images)


# ---------------------------------------------------------------------------
# space files


def space_to_json(X: FinSpace) -> dict:
    """Canonical JSON object: points sorted, opens sorted by (cardinality, labels)."""
    points = sorted(X.points)
    opens = sorted((sorted(X.labels(o)) for o in X.opens), key=lambda o: (len(o), o))
    return {"points": points, "opens": opens}


def space_from_json(obj) -> FinSpace:
    if not isinstance(obj, dict) or "points" not in obj or "opens" not in obj:
        raise ValidationError('space object needs "points" and "opens"')
    if not isinstance(obj["points"], list) or not isinstance(obj["opens"], list):
        raise ValidationError('"points" and "opens" must be arrays')
    return mk_space(obj["points"], obj["opens"])


def load_space(path) -> FinSpace:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read space file {path}: {exc}") from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"space file {path} is not valid JSON: {exc}") from None
    try:
        return space_from_json(obj)
    except ValidationError as exc:
        raise ValidationError(f"space file {path}: {exc}", exc.witness) from None


def dumps_space(X: FinSpace) -> str:
    return json.dumps(space_to_json(X), sort_keys=True)


def resolve_space(ref: str) -> FinSpace:
    """A space from a file path or one of the built-in names (point, sierpinski, ...)."""
    if ref in NAMED_SPACES and not Path(ref).exists():
        return NAMED_SPACES[ref]()
    return load_space(ref)
