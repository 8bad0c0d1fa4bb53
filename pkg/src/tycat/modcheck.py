"""Exact verification of cyclotomic matrix identities at scale.

Matrix identities like S^2 = C or TSTST = S over Q(zeta_N) are decided
exactly but without big-number matrix products: clear denominators, then
evaluate both sides at every primitive N-th root of unity modulo several
primes p = 1 (mod N).  A nonzero reduced difference R (degree < phi(N))
cannot vanish at all phi(N) primitive points mod p, so if all evaluations
agree modulo a set of primes whose product exceeds twice a runtime-computed
bound on R's coefficients, the identity holds over Z -- this is a
deterministic proof, not a probabilistic check.

All modular arithmetic runs in float64 BLAS ops whose intermediate values
are kept below 2^53, where float64 integer arithmetic is exact; the bounds
that guarantee this are asserted at runtime.
"""

from __future__ import annotations

import math

import numpy as np

from .cyclo import CycNum, _phi_deg, _reduction_table
from .errors import ModularityError

_PRIME_CAP = 1 << 22  # keeps every float64 intermediate below 2^53
_MAX_RANK_FLOAT = 1 << 8  # r * p^2 < 2^53 needs rank below 2^9


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _order_n_root(p: int, n: int) -> int:
    """An element of exact multiplicative order n mod p (requires n | p-1)."""
    cof = (p - 1) // n
    fac = set()
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            fac.add(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        fac.add(m)
    for g in range(2, p):
        w = pow(g, cof, p)
        if w == 1:
            continue
        if all(pow(w, n // q, p) != 1 for q in fac):
            return w
    raise ModularityError(f"no order-{n} element mod {p}")


class MatProver:
    """Verifies products of CycNum matrices at one common conductor."""

    def __init__(self, conductor: int):
        self.n = conductor
        self.phi = _phi_deg(conductor)
        self.points = [j for j in range(conductor) if math.gcd(j, conductor) == 1]
        pt_index = {j: k for k, j in enumerate(self.points)}
        self.neg_perm = np.array(
            [pt_index[(conductor - j) % conductor] for j in self.points]
        )
        # growth factor of reduction mod Phi_N, for coefficient bounds
        table = _reduction_table(conductor)
        self.red_growth = max(
            sum(abs(c) for c in row.values()) for row in table
        )
        self._prime_cache: list[int] = []

    # -- matrix registration ------------------------------------------------

    def pack(self, rows) -> dict:
        """Clear denominators of a CycNum matrix; keep int64 coefficients,
        the denominator, L1 norms, and a per-prime evaluation cache."""
        nr = len(rows)
        nc = len(rows[0])
        den = 1
        for row in rows:
            for x in row:
                den = den * x.den // math.gcd(den, x.den)
        coeffs = np.zeros((nr, nc, self.phi), dtype=np.int64)
        l1_max = 0
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if x.n != self.n:
                    raise ModularityError("matrix entry at a foreign conductor")
                scale = den // x.den
                tot = 0
                for e, c in x.num.items():
                    v = c * scale
                    coeffs[i, j, e] = v
                    tot += abs(v)
                l1_max = max(l1_max, tot)
        cmax = int(np.abs(coeffs).max()) if coeffs.size else 0
        assert cmax * _PRIME_CAP * self.phi < 2**53, "coefficients too large"
        return {"coeffs": coeffs, "den": den, "l1": l1_max, "rank": nr, "evals": {}}

    # -- primes and evaluation ----------------------------------------------

    def _primes(self, need: int) -> list[int]:
        have = 1
        for p in self._prime_cache:
            have *= p
        start = self._prime_cache[-1] + self.n if self._prime_cache else (
            (_PRIME_CAP // 2) // self.n * self.n + 1
        )
        p = start
        while have <= need:
            if p >= _PRIME_CAP:
                raise ModularityError("prime pool exhausted")
            if _is_prime(p):
                self._prime_cache.append(p)
                have *= p
            p += self.n
        out = []
        have = 1
        for q in self._prime_cache:
            out.append(q)
            have *= q
            if have > need:
                break
        return out

    def _eval(self, mat: dict, p: int) -> np.ndarray:
        """Evaluations mod p at every primitive point: shape (npts, nr, nc)."""
        if p in mat["evals"]:
            return mat["evals"][p]
        w = _order_n_root(p, self.n)
        wpow = [1] * self.n
        for k in range(1, self.n):
            wpow[k] = wpow[k - 1] * w % p
        warr = np.array(wpow, dtype=np.float64)
        idx = np.outer(np.arange(self.phi), np.array(self.points)) % self.n
        v = warr[idx]
        nr, nc, _ = mat["coeffs"].shape
        flat = mat["coeffs"].reshape(nr * nc, self.phi).astype(np.float64)
        ev = (flat @ v) % p
        ev = np.ascontiguousarray(
            ev.reshape(nr, nc, len(self.points)).transpose(2, 0, 1)
        )
        mat["evals"][p] = ev
        return ev

    # -- the identities -------------------------------------------------------

    def product_bound(self, a: dict, b: dict) -> int:
        # group-algebra L1 of a product row, times one final reduction
        inner_dim = a["coeffs"].shape[1]
        return inner_dim * a["l1"] * b["l1"] * self.red_growth

    def verify_product(
        self,
        a: dict,
        b: dict,
        rhs: dict,
        *,
        conj_a=False,
        conj_b=False,
        scale_lhs: int = 1,
        scale_rhs: int = 1,
        what: str = "matrix product",
    ) -> None:
        """Check scale_lhs * (A B) == scale_rhs * RHS exactly."""
        g = self.red_growth
        l1a = a["l1"] * (g if conj_a else 1)
        l1b = b["l1"] * (g if conj_b else 1)
        inner_dim = a["coeffs"].shape[1]
        bound = scale_lhs * inner_dim * l1a * l1b * g + scale_rhs * rhs["l1"]
        for p in self._primes(2 * bound):
            ea = self._eval(a, p)
            eb = self._eval(b, p)
            if conj_a:
                ea = ea[self.neg_perm]
            if conj_b:
                eb = eb[self.neg_perm]
            lhs = np.matmul(ea, eb) % p
            lhs = lhs * (scale_lhs % p) % p
            er = self._eval(rhs, p) * (scale_rhs % p) % p
            if not np.array_equal(lhs, er):
                raise ModularityError(f"{what} identity fails")

    def verify_tstst(self, s: dict, t_diag: dict, what="TSTST = S") -> None:
        """T S T S T == den_S * S with diagonal T of algebraic integers.

        Computed as (T S T) @ (S T): X = S * t[col], then t[row] * X, then
        one matrix product.
        """
        den = s["den"]
        r = s["rank"]
        t_l1 = t_diag["l1"]
        g = self.red_growth
        # L1 in the group algebra stays below r l1^2 t^3; one reduction at the end
        bound = r * s["l1"] ** 2 * t_l1**3 * g + den * s["l1"]
        for p in self._primes(2 * bound):
            es = self._eval(s, p)
            et = self._eval(t_diag, p)[:, 0, :]  # (npts, r)
            st = es * et[:, None, :] % p  # S T   (columns scaled)
            tst = st * et[:, :, None] % p  # T S T (then rows)
            lhs = np.matmul(tst, st) % p
            rhs = es * (den % p) % p
            if not np.array_equal(lhs, rhs):
                raise ModularityError(f"{what} identity fails")

    def verify_st_cubed(self, s: dict, t_diag: dict, c_perm: np.ndarray) -> None:
        """(S T)^3 == den_S^3 * C for a permutation matrix C."""
        den = s["den"]
        r = s["rank"]
        g = self.red_growth
        w_l1 = s["l1"] * t_diag["l1"]  # group-algebra L1 of entries of W = S T
        bound = r * r * w_l1**3 * g + den**3
        for p in self._primes(2 * bound):
            es = self._eval(s, p)
            et = self._eval(t_diag, p)[:, 0, :]
            w = es * et[:, None, :] % p
            w3m = np.matmul(np.matmul(w, w) % p, w) % p
            rhs = np.tile(c_perm * (den**3 % p) % p, (len(self.points), 1, 1))
            if not np.array_equal(w3m, rhs):
                raise ModularityError("(ST)^3 = S^2 identity fails")

    def verify_verlinde(self, s: dict, tensor: np.ndarray) -> None:
        """sum_k N_ij^k S[k,l] S[0,l] == S[i,l] S[j,l] for all i, j, l.

        The tensor must be symmetric in (i, j) (asserted), so only pairs
        with i <= j are pushed through the provers.
        """
        r = s["coeffs"].shape[0]
        nmax = int(tensor.max()) if tensor.size else 0
        assert r * max(nmax, 1) * _PRIME_CAP < 2**53, "fusion coefficients too large"
        if not np.array_equal(tensor, tensor.transpose(1, 0, 2)):
            raise ModularityError("fusion coefficients are not symmetric")
        g = self.red_growth
        bound = r * nmax * s["l1"] ** 2 * g + s["l1"] ** 2 * g
        iu, ju = np.triu_indices(r)
        nmat = tensor[iu, ju, :].astype(np.float64)  # (npairs, r)
        npairs = len(iu)
        npts = len(self.points)
        nz_cols = [np.nonzero(nmat[:, k])[0] for k in range(r)]
        nnz = sum(len(c) for c in nz_cols)
        sparse = nnz * 8 < npairs * r
        for p in self._primes(2 * bound):
            es = self._eval(s, p)  # (npts, r, r)
            pmat = es * es[:, 0:1, :] % p
            pm = np.ascontiguousarray(pmat.transpose(1, 0, 2)).reshape(
                r, npts * r
            )
            if sparse:  # typical: a handful of channels per fusion product
                lhs = np.zeros((npairs, npts * r))
                for k in range(r):
                    rows = nz_cols[k]
                    if len(rows):
                        lhs[rows] += nmat[rows, k][:, None] * pm[k]
                lhs %= p
            else:
                lhs = (nmat @ pm) % p
            rhs = np.ascontiguousarray(
                (es[:, iu, :] * es[:, ju, :] % p).transpose(1, 0, 2)
            ).reshape(npairs, npts * r)
            if not np.array_equal(lhs, rhs):
                bad = np.argwhere(lhs != rhs)[0]
                raise ModularityError(
                    "Verlinde eigen-relation fails near "
                    f"(i={int(iu[bad[0]])}, j={int(ju[bad[0]])})"
                )
