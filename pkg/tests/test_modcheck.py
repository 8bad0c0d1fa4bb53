"""Cross-checks of the modular-evaluation prover against direct exact
arithmetic, plus negative controls."""

import random
from fractions import Fraction

import pytest

from tycat.cyclo import CycNum, RootOfUnity, zeta
from tycat.errors import ModularityError
from tycat.groups import FinAbGroup
from tycat.modcheck import MatProver
from tycat.moddata import mp_md, pointed_md
from tycat.quadforms import (
    QuadForm,
    bichar_from_qform,
    metric_group,
)

Z3 = FinAbGroup.of(3)
Q_A2 = QuadForm.from_callable(
    Z3, lambda g: RootOfUnity(Fraction(g.coords[0] ** 2, 3))
)


def mat_mult_direct(a, b):
    r = len(a)
    out = []
    for i in range(r):
        row = []
        for j in range(r):
            tot = CycNum.zero()
            for k in range(r):
                tot = tot + a[i][k] * b[k][j]
            row.append(tot)
        out.append(row)
    return out


def test_prover_agrees_with_direct_products():
    md = mp_md(Z3, bichar_from_qform(Q_A2), 1)
    s = [list(row) for row in md.S]
    # direct exact S.S must be the charge-conjugation permutation
    ss = mat_mult_direct(s, s)
    cperm = md.charge_conjugation()
    for i in range(md.rank):
        for j in range(md.rank):
            assert ss[i][j] == (1 if cperm[i] == j else 0)
    # direct S conj(S) = identity
    sc = mat_mult_direct(s, [[x.conj() for x in row] for row in s])
    for i in range(md.rank):
        for j in range(md.rank):
            assert sc[i][j] == (1 if i == j else 0)
    # direct T S T S T = S, and hence (S T)^3 = S^2
    t = md.T
    tstst = [
        [
            sum(
                (t[i] * s[i][k] * t[k] * s[k][j] * t[j] for k in range(md.rank)),
                CycNum.zero(),
            )
            for j in range(md.rank)
        ]
        for i in range(md.rank)
    ]
    for i in range(md.rank):
        for j in range(md.rank):
            assert tstst[i][j] == s[i][j]


def test_prover_explicit_st_cubed_small():
    md = pointed_md(metric_group(Q_A2))
    prover = MatProver(md.conductor)
    s = prover.pack(md.S)
    t = prover.pack([md.T])
    import numpy as np

    cperm = md.charge_conjugation()
    c_mat = np.zeros((md.rank, md.rank))
    for i, j in enumerate(cperm):
        c_mat[i, j] = 1
    prover.verify_st_cubed(s, t, c_mat)  # must not raise


def test_prover_rejects_corruption():
    md = mp_md(Z3, bichar_from_qform(Q_A2), 1)
    prover = MatProver(md.conductor)
    rows = [list(row) for row in md.S]
    rows[2][3] = rows[2][3] + 1
    s_bad = prover.pack(rows)
    one = CycNum.one().promoted(md.conductor)
    nil = CycNum.zero().promoted(md.conductor)
    r = md.rank
    cperm = md.charge_conjugation()
    cmat = prover.pack(
        [[one if cperm[i] == j else nil for j in range(r)] for i in range(r)]
    )
    with pytest.raises(ModularityError):
        prover.verify_product(
            s_bad, s_bad, cmat, scale_rhs=s_bad["den"] ** 2, what="S^2 = C"
        )


def test_prover_random_product_identities():
    rng = random.Random(19)
    conductor = 36
    prover = MatProver(conductor)
    r = 4
    def rand_mat():
        return [
            [
                zeta(36, rng.randrange(36)) * rng.randrange(-3, 4)
                + zeta(36, rng.randrange(36))
                for _ in range(r)
            ]
            for _ in range(r)
        ]

    for _ in range(5):
        a = rand_mat()
        b = rand_mat()
        ab = mat_mult_direct(a, b)
        pa, pb, pab = prover.pack(a), prover.pack(b), prover.pack(ab)
        scale = pa["den"] * pb["den"]
        prover.verify_product(
            pa, pb, pab, scale_lhs=pab["den"], scale_rhs=scale
        )
        wrong = [list(row) for row in ab]
        wrong[1][2] = wrong[1][2] + Fraction(1, 7)
        pw = prover.pack(wrong)
        with pytest.raises(ModularityError):
            prover.verify_product(
                pa, pb, pw, scale_lhs=pw["den"], scale_rhs=pa["den"] * pb["den"]
            )


def test_verlinde_rejects_wrong_tensor():
    import numpy as np

    md = mp_md(Z3, bichar_from_qform(Q_A2), 1)
    ring = md.fusion_ring()
    tensor = np.array(ring.tensor, dtype=np.int64)
    tensor[2, 2, 1] += 1
    tensor[2, 2, 0] -= 1
    tensor = np.maximum(tensor, 0)
    tensor[1, 2, 2] = tensor[2, 1, 2]  # keep it symmetric
    prover = MatProver(md.conductor)
    s = prover.pack(md.S)
    with pytest.raises(ModularityError):
        prover.verify_verlinde(s, tensor)
