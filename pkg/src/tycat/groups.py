"""Finite abelian groups in invariant-factor form.

Groups are stored canonically as a divisibility chain d_1 | d_2 | ... | d_r
(each >= 2), so two isomorphic groups compare equal.  Elements are coordinate
tuples reduced mod the factors.  The module also provides the positive-set
split for odd groups, character groups with their canonical pairing,
brute-force automorphism enumeration, and subgroup enumeration -- all at the
desk scale (|G| up to a few hundred) this package targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .cyclo import RootOfUnity, factorize
from .errors import CapacityError, InvalidArgumentError

__all__ = [
    "FinAbGroup",
    "GroupElement",
    "PositiveSet",
    "GroupAut",
    "positive_set",
    "character_group",
    "automorphisms",
    "subgroups",
    "product_group",
]


def _canonical_invariant_factors(factors) -> tuple[int, ...]:
    """Normalize an arbitrary list of cyclic orders to the divisibility chain."""
    primary: dict[int, list[int]] = {}
    for d in factors:
        d = int(d)
        if d < 1:
            raise InvalidArgumentError(f"cyclic factor {d} is not positive")
        for p, e in factorize(d).items():
            primary.setdefault(p, []).append(e)
    slots = max((len(v) for v in primary.values()), default=0)
    chain = []
    for j in range(slots):  # j = 0 collects the largest prime powers
        d = 1
        for p, es in primary.items():
            es_sorted = sorted(es, reverse=True)
            if j < len(es_sorted):
                d *= p ** es_sorted[j]
        chain.append(d)
    return tuple(reversed(chain))


@dataclass(frozen=True)
class FinAbGroup:
    invariant_factors: tuple[int, ...]

    @staticmethod
    def of(*factors) -> "FinAbGroup":
        if len(factors) == 1 and isinstance(factors[0], (list, tuple)):
            factors = tuple(factors[0])
        return FinAbGroup(_canonical_invariant_factors(factors))

    def __post_init__(self):
        fac = self.invariant_factors
        if fac != _canonical_invariant_factors(fac):
            raise InvalidArgumentError(f"{fac} is not a divisibility chain")

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def element(self, coords) -> "GroupElement":
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise InvalidArgumentError("coordinate vector has wrong length")
        return GroupElement(
            self, tuple(c % d for c, d in zip(coords, self.invariant_factors))
        )

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def generators(self) -> tuple["GroupElement", ...]:
        return tuple(
            GroupElement(self, tuple(int(i == j) for j in range(self.rank)))
            for i in range(self.rank)
        )

    def elements(self) -> tuple["GroupElement", ...]:
        return _elements_of(self)

    def index_of(self, g: "GroupElement") -> int:
        idx = 0
        for c, d in zip(g.coords, self.invariant_factors):
            idx = idx * d + c
        return idx

    def to_json(self) -> dict:
        return {"invariant_factors": list(self.invariant_factors)}

    @staticmethod
    def from_json(obj: dict) -> "FinAbGroup":
        return FinAbGroup.of(obj["invariant_factors"])

    def __repr__(self):
        if self.is_trivial():
            return "FinAbGroup(trivial)"
        return "FinAbGroup(" + "x".join(f"Z{d}" for d in self.invariant_factors) + ")"


@lru_cache(maxsize=None)
def _elements_of(group: FinAbGroup) -> tuple["GroupElement", ...]:
    ranges = [range(d) for d in group.invariant_factors]
    return tuple(GroupElement(group, coords) for coords in product(*ranges))


@dataclass(frozen=True)
class GroupElement:
    group: FinAbGroup
    coords: tuple[int, ...]

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if other.group != self.group:
            raise InvalidArgumentError("elements of different groups")
        return GroupElement(
            self.group,
            tuple(
                (a + b) % d
                for a, b, d in zip(self.coords, other.coords, self.group.invariant_factors)
            ),
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(
            self.group,
            tuple((-a) % d for a, d in zip(self.coords, self.group.invariant_factors)),
        )

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, k: int) -> "GroupElement":
        return GroupElement(
            self.group,
            tuple((a * k) % d for a, d in zip(self.coords, self.group.invariant_factors)),
        )

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def order(self) -> int:
        n = 1
        for c, d in zip(self.coords, self.group.invariant_factors):
            n = math.lcm(n, d // math.gcd(c, d))
        return n

    def __repr__(self):
        return "(" + ",".join(map(str, self.coords)) + ")"


# -- positive sets -----------------------------------------------------------


@dataclass(frozen=True)
class PositiveSet:
    """A choice of G_+ with G = G_+ | {0} | -G_+, for |G| odd.

    The deterministic rule: g is positive iff its first nonzero coordinate
    x_i satisfies 1 <= x_i <= (d_i - 1) / 2.
    """

    group: FinAbGroup
    members: tuple[GroupElement, ...]

    def __contains__(self, g: GroupElement) -> bool:
        return self._is_positive(g)

    @staticmethod
    def _is_positive(g: GroupElement) -> bool:
        for c, d in zip(g.coords, g.group.invariant_factors):
            if c:
                return 1 <= c <= (d - 1) // 2
        return False

    def fold(self, g: GroupElement) -> GroupElement:
        """|g|: the representative of {g, -g} in G_+ u {0}."""
        if g.is_zero() or self._is_positive(g):
            return g
        return -g


def positive_set(group: FinAbGroup) -> PositiveSet:
    if group.order % 2 == 0:
        raise InvalidArgumentError("positive sets need a group of odd order")
    members = tuple(g for g in group.elements() if PositiveSet._is_positive(g))
    assert len(members) == (group.order - 1) // 2
    return PositiveSet(group, members)


# -- characters --------------------------------------------------------------


def character_group(group: FinAbGroup):
    """The dual group (isomorphic copy) together with the canonical pairing
    chi_h(g) = e^{2 pi i sum h_i g_i / d_i}."""

    def pairing(h: GroupElement, g: GroupElement) -> RootOfUnity:
        r = Fraction(0)
        for hi, gi, d in zip(h.coords, g.coords, group.invariant_factors):
            r += Fraction(hi * gi, d)
        return RootOfUnity(r)

    return group, pairing


# -- automorphisms -----------------------------------------------------------


@dataclass(frozen=True)
class GroupAut:
    """An automorphism given by the images of the canonical generators."""

    group: FinAbGroup
    images: tuple[GroupElement, ...]

    def __call__(self, g: GroupElement) -> GroupElement:
        out = self.group.zero()
        for c, img in zip(g.coords, self.images):
            out = out + img * c
        return out

    def compose(self, other: "GroupAut") -> "GroupAut":
        return GroupAut(self.group, tuple(self(img) for img in other.images))

    def inverse(self) -> "GroupAut":
        table = {self(g): g for g in self.group.elements()}
        return GroupAut(self.group, tuple(table[g] for g in self.group.generators()))

    def is_identity(self) -> bool:
        return self.images == self.group.generators()


@lru_cache(maxsize=None)
def _automorphisms_cached(group: FinAbGroup, max_candidates: int):
    if group.is_trivial():
        return (GroupAut(group, ()),)
    facs = group.invariant_factors
    pools = []
    n_candidates = 1
    for d in facs:
        pool = tuple(g for g in group.elements() if d % g.order() == 0)
        pools.append(pool)
        n_candidates *= len(pool)
    if n_candidates > max_candidates:
        raise CapacityError(
            f"{n_candidates} candidate generator images exceed the bound "
            f"{max_candidates}"
        )
    order = group.order
    auts = []
    for images in product(*pools):
        # images define a homomorphism; keep it iff the images generate G
        span = {group.zero()}
        for img in images:
            if img.is_zero():
                continue
            new = set(span)
            for base in span:
                cur = base
                for _ in range(img.order() - 1):
                    cur = cur + img
                    new.add(cur)
            span = new
            if len(span) == order:
                break
        if len(span) == order:
            auts.append(GroupAut(group, images))
    return tuple(auts)


def automorphisms(group: FinAbGroup, max_candidates: int = 10_000):
    """All automorphisms of the group, by brute force over generator images
    with order pruning.  Raises CapacityError past ``max_candidates``."""
    return _automorphisms_cached(group, max_candidates)


# -- subgroups ---------------------------------------------------------------


@lru_cache(maxsize=None)
def _span(group: FinAbGroup, gens: frozenset[GroupElement]) -> frozenset[GroupElement]:
    span = {group.zero()}
    frontier = [group.zero()]
    gens = list(gens)
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = cur + g
            if nxt not in span:
                span.add(nxt)
                frontier.append(nxt)
    return frozenset(span)


def subgroups(group: FinAbGroup) -> list[frozenset[GroupElement]]:
    """All subgroups, as frozensets of elements (brute-force closure search)."""
    found = {frozenset({group.zero()})}
    frontier = [frozenset({group.zero()})]
    while frontier:
        h = frontier.pop()
        for g in group.elements():
            if g in h:
                continue
            bigger = _span(group, frozenset(h | {g}))
            if bigger not in found:
                found.add(bigger)
                frontier.append(bigger)
    return sorted(found, key=lambda h: (len(h), sorted(group.index_of(x) for x in h)))


# -- structured products ------------------------------------------------------


def _crt_pair(r1: int, m1: int, r2: int, m2: int) -> int:
    g, x, _ = _xgcd(m1, m2)
    assert g == 1
    return (r1 + (r2 - r1) * x % m2 * m1) % (m1 * m2)


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def product_group(orders):
    """The canonical group isomorphic to prod Z_{orders[i]}, together with
    both directions of the isomorphism (as coordinate maps).

    Returns (group, to_canonical, from_canonical) where to_canonical maps a
    coordinate tuple over ``orders`` to a GroupElement and from_canonical
    inverts it.
    """
    orders = [int(d) for d in orders]
    group = FinAbGroup.of([d for d in orders if d > 1])
    # primary pieces of each source slot, and of each canonical slot
    src_pieces = []  # (slot, p, p^e)
    for i, d in enumerate(orders):
        for p, e in factorize(d).items():
            src_pieces.append((i, p, p**e))
    dst_pieces = []
    for j, d in enumerate(group.invariant_factors):
        for p, e in factorize(d).items():
            dst_pieces.append((j, p, p**e))
    # match source to destination pieces per prime, largest first
    assignment = {}  # (src_idx in src_pieces) -> dst index
    for p in {p for _, p, _ in src_pieces}:
        src_idx = sorted(
            (k for k, (_, q, _) in enumerate(src_pieces) if q == p),
            key=lambda k: -src_pieces[k][2],
        )
        dst_idx = sorted(
            (k for k, (_, q, _) in enumerate(dst_pieces) if q == p),
            key=lambda k: -dst_pieces[k][2],
        )
        assert len(src_idx) == len(dst_idx)
        for s, t in zip(src_idx, dst_idx):
            assert src_pieces[s][2] == dst_pieces[t][2]
            assignment[s] = t

    def to_canonical(coords) -> GroupElement:
        coords = [int(c) % d if d > 0 else 0 for c, d in zip(coords, orders)]
        out = [0] * group.rank
        mod = [1] * group.rank
        for s, (i, _, q) in enumerate(src_pieces):
            t = assignment[s]
            j = dst_pieces[t][0]
            out[j] = _crt_pair(out[j], mod[j], coords[i] % q, q)
            mod[j] *= q
        assert tuple(mod) == group.invariant_factors or group.is_trivial()
        return group.element(out)

    def from_canonical(g: GroupElement):
        coords = [0] * len(orders)
        mod = [1] * len(orders)
        for s, (i, _, q) in enumerate(src_pieces):
            t = assignment[s]
            j = dst_pieces[t][0]
            coords[i] = _crt_pair(coords[i], mod[i], g.coords[j] % q, q)
            mod[i] *= q
        return tuple(c % d if d > 0 else 0 for c, d in zip(coords, orders))

    return group, to_canonical, from_canonical
