"""Positive even lattices via integer Gram matrices.

A lattice here is its Gram matrix (symmetric, positive definite, even
diagonal).  The discriminant construction produces the metric group
(L*/L, e^{pi i <x,x>}); gluing by an isotropic subgroup of the discriminant
returns the overlattice as a new even Gram matrix in a Hermite-reduced
basis.  Root counting enumerates norm-2 vectors exactly with rational
bounds, so the E8 identifications can be checked by (rank, det, evenness,
root count) without any lattice-isomorphism machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclo import RootOfUnity
from .errors import CapacityError, InvalidArgumentError
from .groups import FinAbGroup, GroupAut, GroupElement, automorphisms
from .intmat import (
    Matrix,
    as_matrix,
    det,
    hermite_row_basis,
    rational_inverse,
    smith_normal_form,
)
from .quadforms import MetricGroup, QuadForm, metric_equiv, metric_group

__all__ = [
    "EvenLattice",
    "DiscriminantForm",
    "named_lattice",
    "discriminant_form",
    "glue",
    "orthogonal_sum",
    "mirror_check",
    "count_roots",
]


@dataclass(frozen=True)
class EvenLattice:
    gram: Matrix

    def __post_init__(self):
        g = self.gram
        n = len(g)
        if any(len(row) != n for row in g):
            raise InvalidArgumentError("Gram matrix must be square")
        for i in range(n):
            if g[i][i] % 2:
                raise InvalidArgumentError("Gram diagonal must be even")
            for j in range(n):
                if g[i][j] != g[j][i]:
                    raise InvalidArgumentError("Gram matrix must be symmetric")
        for k in range(1, n + 1):
            minor = as_matrix([row[:k] for row in g[:k]])
            if det(minor) <= 0:
                raise InvalidArgumentError("Gram matrix is not positive definite")

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def determinant(self) -> int:
        return det(self.gram)

    def to_json(self) -> dict:
        return {"gram": [list(r) for r in self.gram]}

    @staticmethod
    def from_json(obj: dict) -> "EvenLattice":
        return EvenLattice(as_matrix(obj["gram"]))

    def __repr__(self):
        return f"EvenLattice(rank={self.rank}, det={self.determinant})"


def _cartan_a(n: int) -> Matrix:
    return as_matrix(
        [
            [2 if i == j else -1 if abs(i - j) == 1 else 0 for j in range(n)]
            for i in range(n)
        ]
    )


def _cartan_e(n: int) -> Matrix:
    # Bourbaki numbering: node 2 attaches to node 4 of the A-chain 1-3-4-5-...
    m = [[0] * n for _ in range(n)]
    chain = [0] + list(range(2, n))
    for i in range(n):
        m[i][i] = 2
    for a, b in zip(chain, chain[1:]):
        m[a][b] = m[b][a] = -1
    m[1][3] = m[3][1] = -1
    return as_matrix(m)


@lru_cache(maxsize=None)
def named_lattice(name: str) -> EvenLattice:
    """Built-in root lattices: A1..A24, E6, E7, E8."""
    name = name.strip().upper()
    if name.startswith("A"):
        n = int(name[1:])
        if not 1 <= n <= 24:
            raise InvalidArgumentError(f"A-series lattices ship for n <= 24, got {name}")
        return EvenLattice(_cartan_a(n))
    if name in ("E6", "E7", "E8"):
        return EvenLattice(_cartan_e(int(name[1])))
    raise InvalidArgumentError(f"unknown lattice name {name!r}")


@dataclass(frozen=True)
class DiscriminantForm:
    """The metric group L*/L with q(x) = e^{pi i <x,x>}, plus generator lifts
    in dual-basis coordinates (rows, one per canonical generator)."""

    lattice: EvenLattice
    group: FinAbGroup
    qform: QuadForm
    lifts: tuple[tuple[int, ...], ...]

    def metric(self) -> MetricGroup:
        return metric_group(self.qform)

    def lift(self, g: GroupElement) -> tuple[int, ...]:
        n = self.lattice.rank
        out = [0] * n
        for c, row in zip(g.coords, self.lifts):
            for k in range(n):
                out[k] += c * row[k]
        return tuple(out)

    def norm_exponent(self, g: GroupElement) -> Fraction:
        """<x,x>/2 mod 1 for a lift x of g, i.e. q(g) = e^{2 pi i (this)}."""
        v = self.lift(g)
        inv = _gram_inverse(self.lattice)
        r = sum(
            Fraction(v[i]) * inv[i][j] * v[j]
            for i in range(len(v))
            for j in range(len(v))
        )
        return Fraction(r, 2) % 1


@lru_cache(maxsize=None)
def _gram_inverse(lattice: EvenLattice):
    return rational_inverse(lattice.gram)


@lru_cache(maxsize=None)
def discriminant_form(lattice: EvenLattice) -> DiscriminantForm:
    """Compute L*/L via the Smith normal form of the Gram matrix.

    Dual vectors are written in the dual basis f_j (with <f_j, b_k> = d_jk),
    in which L itself is the row span of the Gram matrix.  Generators are
    then normalized so the value table is the lexicographically smallest
    among all automorphism images, making the output canonical per
    isomorphism class.
    """
    gram = lattice.gram
    n = lattice.rank
    d, u, _v = smith_normal_form(gram)
    u_inv = rational_inverse(u)
    factors = [d[i][i] for i in range(n)]
    keep = [i for i in range(n) if factors[i] > 1]
    group = FinAbGroup.of([factors[i] for i in keep])
    lifts = []
    for i in keep:
        col = [u_inv[r][i] for r in range(n)]
        assert all(x.denominator == 1 for x in col)
        lifts.append(tuple(int(x) for x in col))
    lifts = tuple(lifts)

    inv = rational_inverse(gram)

    def norm(v) -> Fraction:
        return sum(
            Fraction(v[i]) * inv[i][j] * v[j] for i in range(n) for j in range(n)
        )

    # q is well-defined on cosets: shifting a generator lift by any lattice
    # basis vector must not change e^{pi i <x,x>}
    for lift in lifts:
        base = norm(lift)
        for row in gram:
            shifted = norm([a + b for a, b in zip(lift, row)])
            assert (shifted - base) % 2 == 0

    def qval(g: GroupElement) -> RootOfUnity:
        v = [0] * n
        for c, row in zip(g.coords, lifts):
            for k in range(n):
                v[k] += c * row[k]
        return RootOfUnity(Fraction(norm(v), 2))

    qform = QuadForm.from_callable(group, qval)
    if not qform.is_nondegenerate():
        raise InvalidArgumentError("discriminant form is degenerate")

    # canonicalize the generator choice
    best = qform
    best_aut: GroupAut | None = None
    for phi in automorphisms(group, max_candidates=100_000):
        cand = tuple(qform(phi(g)) for g in group.elements())
        if cand < best.values:
            best = QuadForm(group, cand)
            best_aut = phi
    if best_aut is not None:
        new_lifts = []
        for gen in group.generators():
            img = best_aut(gen)
            v = [0] * n
            for c, row in zip(img.coords, lifts):
                for k in range(n):
                    v[k] += c * row[k]
            new_lifts.append(tuple(v))
        lifts = tuple(new_lifts)
        qform = best

    disc = DiscriminantForm(lattice, group, qform, lifts)
    assert lattice.determinant == group.order
    return disc


def orthogonal_sum(l1: EvenLattice, l2: EvenLattice) -> EvenLattice:
    n1, n2 = l1.rank, l2.rank
    rows = []
    for i in range(n1):
        rows.append(list(l1.gram[i]) + [0] * n2)
    for i in range(n2):
        rows.append([0] * n1 + list(l2.gram[i]))
    return EvenLattice(as_matrix(rows))


def glue(lattice: EvenLattice, isotropic) -> EvenLattice:
    """The overlattice generated by L and lifts of an isotropic subgroup of
    its discriminant group.

    ``isotropic`` is an iterable of GroupElements of the discriminant group
    (generators suffice).  Raises InvalidArgumentError naming the first
    element where the form is not 1.
    """
    disc = discriminant_form(lattice)
    gens = list(isotropic)
    span = {disc.group.zero()}
    frontier = [disc.group.zero()]
    while frontier:
        cur = frontier.pop()
        for g in gens:
            nxt = cur + g
            if nxt not in span:
                span.add(nxt)
                frontier.append(nxt)
    for h in sorted(span, key=disc.group.index_of):
        if not disc.qform(h).is_one():
            raise InvalidArgumentError(f"subgroup is not isotropic: q({h}) != 1")
    if len(span) == 1:
        return lattice

    n = lattice.rank
    rows = [list(r) for r in lattice.gram]  # L in dual-basis coordinates
    for h in span:
        if not h.is_zero():
            rows.append(list(disc.lift(h)))
    basis = hermite_row_basis(rows)
    assert len(basis) == n
    inv = _gram_inverse(lattice)
    gram_new = []
    for r1 in basis:
        row_out = []
        for r2 in basis:
            val = sum(
                Fraction(r1[i]) * inv[i][j] * r2[j]
                for i in range(n)
                for j in range(n)
            )
            if val.denominator != 1:
                raise InvalidArgumentError("glued basis is not integral")
            row_out.append(int(val))
        gram_new.append(row_out)
    out = EvenLattice(as_matrix(gram_new))
    assert out.determinant * len(span) ** 2 == lattice.determinant
    return out


def mirror_check(lattice: EvenLattice, candidate: EvenLattice) -> GroupAut | None:
    """An isomorphism (G_L, q_L) = (G_M, conj q_M) if the lattices mirror
    each other, else None.  On success the diagonal subgroup it induces is
    verified isotropic inside the orthogonal sum."""
    d1 = discriminant_form(lattice)
    d2 = discriminant_form(candidate)
    phi = metric_equiv(d1.metric(), MetricGroup(d2.group, d2.qform.conj()))
    if phi is None:
        return None
    for g in d1.group.elements():
        assert (d1.qform(g) * d2.qform(phi(g))).is_one()
    return phi


def count_roots(lattice: EvenLattice, norm: int = 2) -> int:
    """The exact number of lattice vectors of the given norm, by exhaustive
    search with rational Cholesky bounds.  Rank is capped at 8."""
    n = lattice.rank
    if n > 8:
        raise CapacityError("root counting is capped at rank 8")
    if n == 0:
        return 0
    # rational LDL^T: Q(x) = sum_i d_i (x_i + sum_{j>i} c_ij x_j)^2
    a = [[Fraction(x) for x in row] for row in lattice.gram]
    dvec = [Fraction(0)] * n
    coef = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        dvec[i] = a[i][i]
        for j in range(i + 1, n):
            coef[i][j] = a[i][j] / a[i][i]
        for k in range(i + 1, n):
            for l in range(i + 1, n):
                a[k][l] -= a[k][i] * a[i][l] / a[i][i]

    target = Fraction(norm)
    count = 0

    def floor_sqrt(f: Fraction) -> Fraction:
        # floor of sqrt(f) for f >= 0, exact
        if f < 0:
            return Fraction(-1)
        num, den = f.numerator, f.denominator
        return Fraction(math.isqrt(num * den), den)

    def search(i: int, rem: Fraction, shifts: list[Fraction]):
        nonlocal count
        if i < 0:
            if rem == 0:
                count += 1
            return
        c = shifts[i]
        bound = rem / dvec[i]
        s = floor_sqrt(bound)
        lo = math.ceil(-c - s) - 1  # widen: s only under-approximates sqrt
        hi = math.floor(-c + s) + 1
        for xi in range(lo, hi + 1):
            term = dvec[i] * (xi + c) ** 2
            if term > rem:
                continue
            new_shifts = list(shifts)
            for j in range(i):
                new_shifts[j] += coef[j][i] * xi
            search(i - 1, rem - term, new_shifts)

    search(n - 1, target, [Fraction(0)] * n)
    if norm == 0:
        count -= 1  # exclude the zero vector
    return count
