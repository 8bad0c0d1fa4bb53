"""Fusion rings, hypergroups, and character tables from explicit rule tables.

Rings store the full structure-constant tensor N_{ij}^k regardless of how
they were built (rule table or Verlinde formula), so the same checking path
applies to both.  Hypergroups hold exact rational convex structure
constants; the Tambara-Yamagami hypergroup and its dual come with the
character table and Haar weights that make the rows exactly orthogonal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .cyclo import CycNum
from .errors import InvalidArgumentError, UnsupportedError
from .groups import FinAbGroup, character_group, positive_set
from .labels import MPAlpha, MPRho, MPSigma, MPUnit, label_to_json

__all__ = [
    "FusionRing",
    "FusionCheckReport",
    "Hypergroup",
    "CharTable",
    "ty_fusion_ring",
    "gen_ty_fusion_ring",
    "gen_mp_fusion_ring",
    "check_fusion_ring",
    "ty_hypergroup",
    "ty_dual_hypergroup_and_table",
    "hypergroup_from_fusion_ring",
]


@dataclass(frozen=True)
class FusionRing:
    labels: tuple
    tensor: tuple  # tensor[i][j][k] = N_{ij}^k, nonnegative ints
    unit: int = 0

    @property
    def rank(self) -> int:
        return len(self.labels)

    def n(self, i: int, j: int, k: int) -> int:
        return self.tensor[i][j][k]

    def product(self, i: int, j: int) -> dict[int, int]:
        return {k: c for k, c in enumerate(self.tensor[i][j]) if c}

    def dual(self, i: int) -> int:
        hits = [k for k in range(self.rank) if self.tensor[i][k][self.unit]]
        if len(hits) != 1:
            raise InvalidArgumentError(f"label {i} has no unique dual")
        return hits[0]

    def index_of(self, label) -> int:
        return self.labels.index(label)

    def fusion_matrix(self, i: int) -> list[list[int]]:
        return [[self.tensor[i][j][k] for k in range(self.rank)] for j in range(self.rank)]

    def to_json(self) -> dict:
        triples = [
            [i, j, k, self.tensor[i][j][k]]
            for i in range(self.rank)
            for j in range(self.rank)
            for k in range(self.rank)
            if self.tensor[i][j][k]
        ]
        return {
            "labels": [label_to_json(l) for l in self.labels],
            "label_names": [str(l) for l in self.labels],
            "unit": self.unit,
            "nonzero": triples,
        }


def _freeze(t) -> tuple:
    return tuple(tuple(tuple(row) for row in plane) for plane in t)


def _ring_from_products(labels, prod) -> FusionRing:
    """Build the dense tensor from a map (i, j) -> {k: coeff}."""
    r = len(labels)
    tensor = [[[0] * r for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(r):
            for k, c in prod(i, j).items():
                tensor[i][j][k] = c
    return FusionRing(tuple(labels), _freeze(tensor))


@dataclass
class FusionCheckReport:
    ok: bool
    violations: list = field(default_factory=list)
    fp_dims: list = field(default_factory=list)  # floats, advisory
    global_dim: int | None = None  # exact, only when all dims are integers

    def __bool__(self):
        return self.ok


def check_fusion_ring(ring: FusionRing, fp_tol: float = 1e-9) -> FusionCheckReport:
    """Verify unit, duality, associativity, and the Frobenius symmetries;
    compute Frobenius-Perron dimensions (floating, advisory)."""
    r = ring.rank
    report = FusionCheckReport(ok=True)
    t = ring.tensor
    u = ring.unit

    for j in range(r):
        for k in range(r):
            if t[u][j][k] != (1 if j == k else 0) or t[j][u][k] != (1 if j == k else 0):
                report.violations.append(("unit", (u, j, k)))
    try:
        dual = [ring.dual(i) for i in range(r)]
        for i in range(r):
            if dual[dual[i]] != i:
                report.violations.append(("dual-involution", (i,)))
    except InvalidArgumentError:
        report.violations.append(("dual", ()))
        dual = None

    # associativity sum_m N_ij^m N_mk^l == sum_m N_jk^m N_im^l, as exact
    # int64 contractions (coefficients are tiny at desk scale)
    arr = np.array(t, dtype=np.int64)
    lhs = np.einsum("ijm,mkl->ijkl", arr, arr)
    rhs = np.einsum("jkm,iml->ijkl", arr, arr)
    for idx in zip(*np.nonzero(lhs != rhs)):
        report.violations.append(("associativity", tuple(int(x) for x in idx)))

    if dual is not None:
        dual_arr = np.array(dual)
        # N_ij^k = N_{k j*}^i and N_ij^k = N_{j* i*}^{k*} hold in any fusion
        # ring; N_ij^k = N_{i k*}^{j*} additionally needs commutativity
        frob_a = arr[:, dual_arr, :].transpose(2, 1, 0)
        frob_b = arr[np.ix_(dual_arr, dual_arr, dual_arr)].transpose(1, 0, 2)
        bad = (arr != frob_a) | (arr != frob_b)
        if bool(np.all(arr == arr.transpose(1, 0, 2))):
            frob_c = arr[:, dual_arr, :][:, :, dual_arr].transpose(0, 2, 1)
            bad |= arr != frob_c
        for idx in zip(*np.nonzero(bad)):
            report.violations.append(("frobenius", tuple(int(x) for x in idx)))

    dims = []
    for i in range(r):
        eig = np.linalg.eigvals(np.array(ring.fusion_matrix(i), dtype=float))
        dims.append(float(max(eig.real)))
    report.fp_dims = dims

    int_dims = [round(d) for d in dims]
    if all(abs(d - i) < fp_tol for d, i in zip(dims, int_dims)):
        # verify the rounded dimensions exactly: N_i d = d_i d_j entrywise
        dvec = np.array(int_dims, dtype=np.int64)
        if bool(np.all(arr @ dvec == np.outer(dvec, dvec))):
            report.global_dim = int(sum(d * d for d in int_dims))

    report.ok = not report.violations
    return report


# -- rule-table builders -------------------------------------------------------


def ty_fusion_ring(group: FinAbGroup) -> FusionRing:
    """Labels G u {rho}: g h = g+h, g rho = rho g = rho, rho^2 = sum_g g."""
    els = group.elements()
    labels = list(els) + ["rho"]
    n = len(els)
    idx = {g: i for i, g in enumerate(els)}

    def prod(i, j):
        if i < n and j < n:
            return {idx[els[i] + els[j]]: 1}
        if i == n and j == n:
            return {k: 1 for k in range(n)}
        return {n: 1}

    ring = _ring_from_products(labels, prod)
    report = check_fusion_ring(ring)
    assert report.ok, report.violations
    return ring


def gen_ty_fusion_ring(A: FinAbGroup) -> FusionRing:
    """Labels Dih(A) u {rho+, rho-} for |A| odd.

    Dih(A) elements are encoded as pairs (a, eps) with (a,0)(b,0) = (a+b,0),
    (a,1)(b,0) = (a-b,1), (a,0)(b,1) = (a+b,1), (a,1)(b,1) = (a-b,0);
    rho_{+-}^2 = sum_a (a,0), rho_+ rho_- = sum_a (a,1), even elements fix
    rho_{+-} and odd elements swap them.
    """
    if A.order % 2 == 0:
        raise UnsupportedError("the dihedral extension needs |A| odd")
    els = A.elements()
    n = len(els)
    dih = [(a, 0) for a in els] + [(a, 1) for a in els]
    labels = dih + ["rho+", "rho-"]
    idx = {d: i for i, d in enumerate(dih)}
    rp, rm = 2 * n, 2 * n + 1

    def dih_mul(x, y):
        (a, e1), (b, e2) = x, y
        return (a - b if e1 else a + b, e1 ^ e2)

    def prod(i, j):
        if i < 2 * n and j < 2 * n:
            return {idx[dih_mul(dih[i], dih[j])]: 1}
        if i < 2 * n:  # group element times rho
            swap = dih[i][1]
            target = rp if (j == rp) == (not swap) else rm
            return {target: 1}
        if j < 2 * n:
            swap = dih[j][1]
            target = rp if (i == rp) == (not swap) else rm
            return {target: 1}
        if i == j:  # rho_+- squared
            return {idx[(a, 0)]: 1 for a in els}
        return {idx[(a, 1)]: 1 for a in els}

    ring = _ring_from_products(labels, prod)
    report = check_fusion_ring(ring)
    assert report.ok, report.violations
    return ring


def gen_mp_fusion_ring(G: FinAbGroup) -> FusionRing:
    """The metaplectic-type fusion ring on {1, alpha, rho, alpha rho} u
    {sigma_g : g in G_+} for |G| odd."""
    if G.order % 2 == 0:
        raise UnsupportedError("metaplectic fusion rings need |G| odd")
    pos = positive_set(G)
    sig = list(pos.members)
    labels = [MPUnit(), MPAlpha(), MPRho(0), MPRho(1)] + [MPSigma(h) for h in sig]
    sidx = {h: 4 + i for i, h in enumerate(sig)}
    UNIT, ALPHA, RHO0, RHO1 = 0, 1, 2, 3

    def prod(i, j):
        if j < i:
            return prod(j, i)
        li, lj = labels[i], labels[j]
        if i == UNIT:
            return {j: 1}
        if i == ALPHA:
            if j == ALPHA:
                return {UNIT: 1}
            if j == RHO0:
                return {RHO1: 1}
            if j == RHO1:
                return {RHO0: 1}
            return {j: 1}  # alpha sigma = sigma
        if i in (RHO0, RHO1) and j in (RHO0, RHO1):
            base = UNIT if i == j else ALPHA
            out = {base: 1}
            for h in sig:
                out[sidx[h]] = 1
            return out
        if i in (RHO0, RHO1):  # rho sigma = rho0 + rho1
            return {RHO0: 1, RHO1: 1}
        g, h = li.h, lj.h
        if i == j:
            return {UNIT: 1, ALPHA: 1, sidx[pos.fold(g + g)]: 1}
        out: dict[int, int] = {}
        for target in (pos.fold(g + h), pos.fold(g - h)):
            out[sidx[target]] = out.get(sidx[target], 0) + 1
        return out

    ring = _ring_from_products(labels, prod)
    report = check_fusion_ring(ring)
    assert report.ok, report.violations
    return ring


# -- hypergroups ---------------------------------------------------------------


@dataclass(frozen=True)
class Hypergroup:
    """Finite hypergroup: convex multiplication table with involution."""

    elements: tuple
    table: tuple  # table[i][j][k] = Fraction coefficient of e_k in e_i e_j
    star: tuple[int, ...]
    unit: int = 0

    @property
    def rank(self) -> int:
        return len(self.elements)

    def coeff(self, i: int, j: int, k: int) -> Fraction:
        return self.table[i][j][k]

    def validate(self) -> None:
        r = self.rank
        t = self.table
        for i in range(r):
            for j in range(r):
                coeffs = t[i][j]
                if any(c < 0 for c in coeffs):
                    raise InvalidArgumentError(f"negative weight in {i} * {j}")
                if sum(coeffs) != 1:
                    raise InvalidArgumentError(f"weights of {i} * {j} do not sum to 1")
                has_unit = coeffs[self.unit] > 0
                if has_unit != (j == self.star[i]):
                    raise InvalidArgumentError(f"antipode law fails at ({i}, {j})")
        for j in range(r):
            if (
                t[self.unit][j][j] != 1
                or t[j][self.unit][j] != 1
            ):
                raise InvalidArgumentError("unit is not a two-sided identity")
        # associativity, exactly, over a cleared common denominator
        den = 1
        for plane in t:
            for row in plane:
                for c in row:
                    den = den * c.denominator // math.gcd(den, c.denominator)
        arr = np.array(
            [[[int(c * den) for c in row] for row in plane] for plane in t],
            dtype=np.int64,
        )
        lhs = np.einsum("ijm,mkl->ijkl", arr, arr)
        rhs = np.einsum("jkm,iml->ijkl", arr, arr)
        bad = np.nonzero(lhs != rhs)
        if bad[0].size:
            where = tuple(int(x[0]) for x in bad)
            raise InvalidArgumentError(f"hypergroup is not associative at {where}")

    def to_json(self) -> dict:
        return {
            "elements": [str(e) for e in self.elements],
            "unit": self.unit,
            "star": list(self.star),
            "weights": [
                [i, j, k, str(self.table[i][j][k])]
                for i in range(self.rank)
                for j in range(self.rank)
                for k in range(self.rank)
                if self.table[i][j][k]
            ],
        }


def ty_hypergroup(group: FinAbGroup) -> Hypergroup:
    """K = G u {tau} with tau* = tau = g tau = tau g, tau^2 = (1/|G|) sum_g g."""
    els = group.elements()
    n = len(els)
    labels = list(els) + ["tau"]
    idx = {g: i for i, g in enumerate(els)}
    r = n + 1
    table = [[[Fraction(0)] * r for _ in range(r)] for _ in range(r)]
    for i, g in enumerate(els):
        for j, h in enumerate(els):
            table[i][j][idx[g + h]] = Fraction(1)
        table[i][n][n] = Fraction(1)
        table[n][i][n] = Fraction(1)
    for k in range(n):
        table[n][n][k] = Fraction(1, n)
    star = tuple(idx[-g] for g in els) + (n,)
    hg = Hypergroup(tuple(labels), _freeze_frac(table), star)
    hg.validate()
    return hg


def _freeze_frac(t) -> tuple:
    return tuple(tuple(tuple(row) for row in plane) for plane in t)


def hypergroup_from_fusion_ring(ring: FusionRing, dims) -> Hypergroup:
    """Renormalize a fusion ring by exact dimensions: on the basis
    [x]/d(x) the structure constants become N_ij^k d_k / (d_i d_j)."""
    r = ring.rank
    inv = [d.inverse() for d in dims]
    table = [[[Fraction(0)] * r for _ in range(r)] for _ in range(r)]
    for i in range(r):
        for j in range(r):
            scale = inv[i] * inv[j]
            for k in range(r):
                c = ring.tensor[i][j][k]
                if c:
                    val = dims[k] * scale * c
                    if not val.is_rational():
                        raise InvalidArgumentError(
                            "renormalized structure constants are not rational"
                        )
                    table[i][j][k] = val.rational_value()
    star = tuple(ring.dual(i) for i in range(r))
    hg = Hypergroup(tuple(ring.labels), _freeze_frac(table), star, ring.unit)
    hg.validate()
    return hg


@dataclass(frozen=True)
class CharTable:
    """Rows indexed by dual elements, columns by hypergroup elements,
    with Haar weights per column making distinct rows orthogonal."""

    row_labels: tuple
    col_labels: tuple
    entries: tuple  # CycNum matrix
    weights: tuple  # Fraction per column

    def validate(self) -> None:
        rows = len(self.row_labels)
        cols = len(self.col_labels)
        for j in range(cols):
            if self.entries[0][j] != 1:
                raise InvalidArgumentError("first row of the character table is not 1")
        for i in range(rows):
            for j in range(i + 1, rows):
                total = CycNum.zero()
                for k in range(cols):
                    total = total + self.entries[i][k] * self.entries[j][k].conj() * self.weights[k]
                if not total.is_zero():
                    raise InvalidArgumentError(
                        f"rows {i} and {j} are not weighted-orthogonal"
                    )

    def to_json(self) -> dict:
        return {
            "rows": [str(l) for l in self.row_labels],
            "columns": [str(l) for l in self.col_labels],
            "weights": [str(w) for w in self.weights],
            "entries": [[e.to_json() for e in row] for row in self.entries],
        }


def ty_dual_hypergroup_and_table(group: FinAbGroup):
    """The dual hypergroup {1, eps} u {c_chi : chi != 1} of the
    Tambara-Yamagami hypergroup of an odd group, and its character table
    with weights w(g) = 1, w(tau) = |G|."""
    if group.order % 2 == 0:
        raise UnsupportedError("the dual hypergroup computation needs |G| odd")
    dual, pairing = character_group(group)
    chis = [h for h in dual.elements() if not h.is_zero()]
    labels = ["1", "eps"] + [("c", chi) for chi in chis]
    r = len(labels)
    cidx = {chi: 2 + i for i, chi in enumerate(chis)}
    table = [[[Fraction(0)] * r for _ in range(r)] for _ in range(r)]

    def set_prod(i, j, weights):
        for k, w in weights.items():
            table[i][j][k] = w

    for i in range(r):
        set_prod(0, i, {i: Fraction(1)})
        set_prod(i, 0, {i: Fraction(1)})
    set_prod(1, 1, {0: Fraction(1)})
    for chi in chis:
        i = cidx[chi]
        set_prod(1, i, {i: Fraction(1)})
        set_prod(i, 1, {i: Fraction(1)})
        for tchi in chis:
            j = cidx[tchi]
            if (chi + tchi).is_zero():
                set_prod(i, j, {0: Fraction(1, 2), 1: Fraction(1, 2)})
            else:
                set_prod(i, j, {cidx[chi + tchi]: Fraction(1)})
    star = (0, 1) + tuple(cidx[-chi] for chi in chis)
    hg = Hypergroup(tuple(labels), _freeze_frac(table), star)
    hg.validate()

    # character table over columns G u {tau}
    els = group.elements()
    cols = list(els) + ["tau"]
    one = CycNum.one()
    zero = CycNum.zero()
    entries = [[one] * (len(els) + 1)]
    entries.append([one] * len(els) + [-one])
    for chi in chis:
        row = [pairing(chi, g).to_cyc() for g in els] + [zero]
        entries.append(row)
    weights = tuple([Fraction(1)] * len(els) + [Fraction(group.order)])
    ct = CharTable(
        tuple(labels),
        tuple(cols),
        tuple(tuple(row) for row in entries),
        weights,
    )
    ct.validate()
    return hg, ct
