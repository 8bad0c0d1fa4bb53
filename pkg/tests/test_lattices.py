from fractions import Fraction

import pytest

from tycat.cyclo import RootOfUnity
from tycat.errors import CapacityError, InvalidArgumentError
from tycat.groups import FinAbGroup
from tycat.lattices import (
    EvenLattice,
    count_roots,
    discriminant_form,
    glue,
    mirror_check,
    named_lattice,
    orthogonal_sum,
)
from tycat.quadforms import gauss_central_charge, metric_equiv, metric_group


def table_form(n_group: int, exponents):
    """Quadratic form on Z_n by x -> e^{2 pi i exponents[x]}."""
    from tycat.quadforms import QuadForm

    g = FinAbGroup.of(n_group)
    return QuadForm.from_callable(
        g, lambda x: RootOfUnity(Fraction(exponents[x.coords[0]]))
    )


def reference_disc(name):
    """Discriminant data of the named root lattices: q(x) = e^{pi i x^2 n/(n+1)}
    for A_n; the E-series values."""
    if name.startswith("A"):
        n = int(name[1:])
        g = FinAbGroup.of(n + 1)
        from tycat.quadforms import QuadForm

        return QuadForm.from_callable(
            g, lambda x: RootOfUnity(Fraction(x.coords[0] ** 2 * n, 2 * (n + 1)))
        )
    if name == "E6":
        return table_form(3, {0: 0, 1: Fraction(2, 3), 2: Fraction(2, 3)})
    if name == "E7":
        return table_form(2, {0: 0, 1: Fraction(3, 4)})
    raise ValueError(name)


def test_named_dets():
    assert named_lattice("A2").determinant == 3
    assert named_lattice("E6").determinant == 3
    assert named_lattice("E7").determinant == 2
    assert named_lattice("E8").determinant == 1
    assert named_lattice("A8").determinant == 9
    with pytest.raises(InvalidArgumentError):
        named_lattice("B2")


def test_discriminant_matches_reference_tables():
    for name in ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "E6", "E7"]:
        disc = discriminant_form(named_lattice(name))
        ref = reference_disc(name)
        assert disc.group == ref.group
        phi = metric_equiv(disc.metric(), metric_group(ref))
        assert phi is not None, name

    e8 = discriminant_form(named_lattice("E8"))
    assert e8.group.is_trivial()


def test_discriminant_e6_values():
    disc = discriminant_form(named_lattice("E6"))
    assert disc.group == FinAbGroup.of(3)
    vals = {g.coords[0]: disc.qform(g).exponent for g in disc.group.elements()}
    assert vals == {0: 0, 1: Fraction(2, 3), 2: Fraction(2, 3)}


def test_discriminant_a2_values():
    disc = discriminant_form(named_lattice("A2"))
    vals = {g.coords[0]: disc.qform(g).exponent for g in disc.group.elements()}
    assert vals == {0: 0, 1: Fraction(1, 3), 2: Fraction(1, 3)}


def test_orthogonal_sum():
    a2, e6 = named_lattice("A2"), named_lattice("E6")
    s = orthogonal_sum(a2, e6)
    assert s.rank == 8 and s.determinant == 9
    d = discriminant_form(s)
    assert d.group == FinAbGroup.of(3, 3)
    assert orthogonal_sum(a2, a2).determinant == 9

    from tycat.quadforms import direct_sum

    expect = direct_sum(
        discriminant_form(a2).metric(), discriminant_form(e6).metric()
    )
    assert metric_equiv(d.metric(), expect) is not None


def test_glue_trivial():
    a2 = named_lattice("A2")
    assert glue(a2, []) == a2


def test_glue_to_e8():
    s = orthogonal_sum(named_lattice("A2"), named_lattice("E6"))
    disc = discriminant_form(s)
    gen = next(
        g
        for g in disc.group.elements()
        if not g.is_zero() and disc.qform(g).is_one()
    )
    glued = glue(s, [gen])
    assert glued.rank == 8
    assert glued.determinant == 1
    assert count_roots(glued) == 240

    s2 = orthogonal_sum(named_lattice("A1"), named_lattice("E7"))
    disc2 = discriminant_form(s2)
    gen2 = next(
        g
        for g in disc2.group.elements()
        if not g.is_zero() and disc2.qform(g).is_one()
    )
    glued2 = glue(s2, [gen2])
    assert glued2.rank == 8 and glued2.determinant == 1
    assert count_roots(glued2) == 240


def test_glue_rejects_anisotropic():
    a2 = named_lattice("A2")
    disc = discriminant_form(a2)
    g = next(g for g in disc.group.elements() if not g.is_zero())
    with pytest.raises(InvalidArgumentError):
        glue(a2, [g])


def test_glue_determinant_law():
    from tycat.quadforms import isotropic_subgroups

    for name in ["A3", "A8"]:
        lat = named_lattice(name)
        disc = discriminant_form(lat)
        for h in isotropic_subgroups(disc.metric()):
            glued = glue(lat, list(h))
            assert glued.determinant * len(h) ** 2 == lat.determinant


def test_mirrors():
    assert mirror_check(named_lattice("A1"), named_lattice("E7")) is not None
    assert mirror_check(named_lattice("A2"), named_lattice("E6")) is not None
    assert mirror_check(named_lattice("A2"), named_lattice("A2")) is None


def test_count_roots():
    assert count_roots(named_lattice("A1")) == 2
    assert count_roots(named_lattice("A2")) == 6
    assert count_roots(named_lattice("A3")) == 12
    assert count_roots(named_lattice("E6")) == 72
    assert count_roots(named_lattice("E7")) == 126
    assert count_roots(named_lattice("E8")) == 240
    with pytest.raises(CapacityError):
        count_roots(orthogonal_sum(named_lattice("E8"), named_lattice("A1")))


def test_central_charge_matches_rank_mod_8():
    for name in ["A1", "A2", "A3", "A4", "A5", "A6", "A7", "A8", "E6", "E7", "E8"]:
        lat = named_lattice(name)
        disc = discriminant_form(lat)
        assert gauss_central_charge(disc.qform) == lat.rank % 8, name


def test_lattice_json_roundtrip():
    a2 = named_lattice("A2")
    assert EvenLattice.from_json(a2.to_json()) == a2


def test_glue_determinant_law_all_small_builtins():
    from tycat.quadforms import isotropic_subgroups

    names = [f"A{n}" for n in range(1, 25)] + ["E6", "E7", "E8"]
    for name in names:
        lat = named_lattice(name)
        disc = discriminant_form(lat)
        if disc.group.order > 25:
            continue
        for h in isotropic_subgroups(disc.metric()):
            glued = glue(lat, list(h))
            assert glued.determinant * len(h) ** 2 == lat.determinant, name


def test_count_roots_brute_force_oracle():
    import random
    from itertools import product as iproduct

    from tycat.intmat import as_matrix

    rng = random.Random(23)
    for _ in range(12):
        n = rng.randint(1, 3)
        # diagonally dominant even Gram: short vectors stay inside the box
        off = [[0] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                off[i][j] = off[j][i] = rng.randint(-1, 1)
        gram = [
            [4 + 2 * rng.randint(0, 2) if i == j else off[i][j] for j in range(n)]
            for i in range(n)
        ]
        lat = EvenLattice(as_matrix(gram))
        for norm in (2, 4, 6):
            brute = 0
            for x in iproduct(range(-5, 6), repeat=n):
                val = sum(
                    gram[i][j] * x[i] * x[j] for i in range(n) for j in range(n)
                )
                if val == norm:
                    brute += 1
            assert count_roots(lat, norm) == brute, (gram, norm)
