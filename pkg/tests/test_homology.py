"""Betti numbers, Euler additivity, semicharacteristic, sectors, sides."""

import random

import pytest

from gdslab.complexes import Chain
from gdslab.homology import (
    betti,
    betti_of_cells,
    bounding_cells,
    euler_char,
    homology_sector_reps,
    is_boundary,
    is_homologous,
    semicharacteristic,
    semicharacteristic_of_cells,
    two_sidedness_d2,
)
from gdslab.manifolds import builtin_manifold


def test_classical_betti_vectors(torus2, klein, sphere4, torus3, rp2):
    assert betti(torus2).b == (1, 2, 1)
    assert betti(klein).b == (1, 2, 1)
    assert betti(sphere4).b == (1, 0, 0, 0, 1)
    assert betti(torus3).b == (1, 3, 3, 1)
    assert betti(rp2).b == (1, 1, 1)


def test_betti_alternating_sum_is_chi(torus3, voronoi2):
    for c in (torus3, voronoi2):
        assert betti(c).chi == c.euler_characteristic()


def test_euler_char_additivity_on_random_subcomplexes(torus2):
    rng = random.Random(4)
    n = torus2.n_cells(2)
    for _ in range(40):
        a_cells = rng.sample(range(n), rng.randint(1, n))
        b_cells = rng.sample(range(n), rng.randint(1, n))
        cl_a = torus2.closure((2, i) for i in a_cells)
        cl_b = torus2.closure((2, i) for i in b_cells)
        lhs = euler_char(cl_a | cl_b) + euler_char(cl_a & cl_b)
        rhs = euler_char(cl_a) + euler_char(cl_b)
        assert lhs == rhs


def test_semicharacteristic_circle(sphere2):
    ring = sphere2.boundary_sphere(0)
    assert semicharacteristic(betti(ring), k=0, start=0) == 1


def test_semicharacteristic_3_manifolds(sphere3, torus3):
    # b0 + b1 of the 3-sphere is 1; of the 3-torus it is 1 + 3, even
    assert semicharacteristic(betti(sphere3), k=1, start=0) == 1
    assert semicharacteristic(betti(torus3), k=1, start=0) == 0
    assert semicharacteristic(betti(torus3), k=1, start=1) == 1


def test_semicharacteristic_of_embedded_3_sphere(sphere4):
    bubble = Chain(sphere4, 3, sphere4.boundary_bits(4, 0))
    assert semicharacteristic_of_cells(sphere4, bubble.closure(), k=1) == 1
    assert betti_of_cells(sphere4, bubble.closure()).b == (1, 0, 0, 1)


def test_betti_of_disjoint_union_adds(torus3):
    b1 = Chain(torus3, 2, torus3.boundary_bits(3, 0))
    # find a second cell whose boundary shares nothing with the first
    other = None
    for cell in range(1, torus3.n_cells(3)):
        b2 = Chain(torus3, 2, torus3.boundary_bits(3, cell))
        if not (b1.closure() & b2.closure()):
            other = b2
            break
    assert other is not None
    union = betti_of_cells(torus3, b1.closure() | other.closure())
    single = betti_of_cells(torus3, b1.closure())
    assert union.b[0] == 2 * single.b[0]
    assert union.chi == 2 * single.chi


def test_sector_counts(sphere2, torus2):
    assert homology_sector_reps(sphere2, 1).class_count == 1
    assert homology_sector_reps(torus2, 1).class_count == 4
    t3 = builtin_manifold("tP", 3)
    assert homology_sector_reps(t3, 1).class_count == 8


def test_sector_reps_are_canonical_cycles(torus2):
    sectors = homology_sector_reps(torus2, 1)
    assert sectors.reps[0].bits == 0
    seen = set()
    for rep in sectors.reps:
        assert rep.is_cycle()
        assert sectors.canonical_bits(rep.bits) == rep.bits
        seen.add(rep.bits)
    assert len(seen) == 4
    for rep in sectors.reps[1:]:
        assert not is_boundary(torus2, rep)


def test_homology_test_helper(torus2):
    rng = random.Random(8)
    from gdslab.model import random_cycle

    sectors = homology_sector_reps(torus2, 1)
    for _ in range(20):
        z = random_cycle(torus2, rng)
        idx = sectors.sector_index(z)
        assert is_homologous(torus2, z, sectors.reps[idx])
    boundary = Chain(torus2, 1, torus2.boundary_bits(2, 0))
    filler = bounding_cells(torus2, boundary)
    assert filler.bits == 1  # the cell itself is the least filler
    assert is_boundary(torus2, boundary)


def test_rp2_essential_loop_is_one_sided(rp2):
    sectors = homology_sector_reps(rp2, 1)
    essential = [r for r in sectors.reps if r.bits][0]
    report = two_sidedness_d2(rp2, essential)
    assert report.one_sided == (True,)
    assert report.epsilon == 1 and report.w1_eval == 1


def test_torus_loops_are_two_sided(torus2):
    sectors = homology_sector_reps(torus2, 1)
    for rep in sectors.reps:
        if rep.bits:
            assert two_sidedness_d2(torus2, rep).w1_eval == 0


def test_klein_loop_orientation_characters(klein):
    # the orientation character is onto for a non-orientable surface:
    # half the classes are one-sided
    sectors = homology_sector_reps(klein, 1)
    values = [two_sidedness_d2(klein, r).w1_eval for r in sectors.reps]
    assert sorted(values) == [0, 0, 1, 1]


def test_two_sidedness_guards(torus3, torus2):
    with pytest.raises(ValueError):
        two_sidedness_d2(torus3, Chain.empty(torus3, 2))
    with pytest.raises(ValueError):
        two_sidedness_d2(torus2, Chain.from_cells(torus2, 1, [0]))


def test_bounding_manifold_chi_even(torus3):
    # boundaries of random top-cell unions have even Euler characteristic
    rng = random.Random(12)
    for _ in range(30):
        cells = rng.sample(range(torus3.n_cells(3)), rng.randint(1, 20))
        bits = 0
        for cell in cells:
            bits ^= torus3.boundary_bits(3, cell)
        chain = Chain(torus3, 2, bits)
        assert chain.euler_characteristic() % 2 == 0
