"""Plaquette model: flips, signs, projector and commutation laws, sweeps."""

import random

import pytest

from gdslab.complexes import Chain
from gdslab.f2 import PreconditionError
from gdslab.manifolds import builtin_manifold
from gdslab.model import (
    GDS,
    GTC,
    SignedFlip,
    chi_up,
    flip,
    ground_degeneracy,
    hplus_violations,
    morse_parity,
    random_cycle,
    sector_reps,
    sweep_sign,
    verify_commutation,
    verify_projector,
)


def test_hplus_violations_examples(torus2):
    empty = Chain.empty(torus2, 1)
    assert not hplus_violations(torus2, empty)
    boundary = Chain(torus2, 1, torus2.boundary_bits(2, 0))
    assert not hplus_violations(torus2, boundary)
    single = Chain.from_cells(torus2, 1, [0])
    assert len(hplus_violations(torus2, single)) == 2


def test_chi_up_examples(torus2, sphere3):
    all_down = Chain.empty(torus2, 1)
    assert chi_up(torus2, 0, all_down) == 0
    # the whole boundary of a 3-cell is a 2-sphere
    cell_faces = sphere3.faces(3, 0)
    state = Chain.from_cells(sphere3, 2, cell_faces)
    assert chi_up(sphere3, 0, state) == 2
    # one edge of a polygon is a closed arc
    one_edge = Chain.from_cells(torus2, 1, [torus2.faces(2, 0)[0]])
    assert chi_up(torus2, 0, one_edge) == 1


def test_flip_phases(torus2, sphere3):
    all_down = Chain.empty(torus2, 1)
    _, sf = flip(torus2, 0, all_down, GDS)
    assert sf.phase == -1  # birth of a loop
    assert morse_parity(torus2, 0, all_down) == 1
    state = Chain(torus2, 1, torus2.boundary_bits(2, 0))
    back, sf2 = flip(torus2, 0, state, GDS)
    assert back.bits == 0 and sf2.phase == -1  # death of the same loop
    _, sf3 = flip(torus2, 0, all_down, GTC)
    assert sf3.phase == 1
    # d=3 birth: chi of the empty set is 0, phase -1
    _, sf4 = flip(sphere3, 0, Chain.empty(sphere3, 2), GDS)
    assert sf4.phase == -1


def test_signed_flip_consistency_guard():
    with pytest.raises(ValueError):
        SignedFlip(cell=0, chi_up=0, phase=1, model=GDS)


def test_flip_is_involution_on_states(torus3):
    rng = random.Random(0)
    for _ in range(30):
        s = random_cycle(torus3, rng)
        cell = rng.randrange(torus3.n_cells(3))
        s1, _ = flip(torus3, cell, s, GDS)
        s2, _ = flip(torus3, cell, s1, GDS)
        assert s2.bits == s.bits


def test_projector_property_random_cycles(torus2, sphere3, voronoi2):
    rng = random.Random(1)
    for c in (torus2, sphere3, voronoi2):
        for _ in range(100):
            s = random_cycle(c, rng)
            cell = rng.randrange(c.n_cells(c.dim))
            assert verify_projector(c, cell, s)


def test_projector_all_down_and_all_up(sphere3):
    n = sphere3.n_cells(2)
    assert verify_projector(sphere3, 0, Chain.empty(sphere3, 2))
    all_up = Chain.from_cells(sphere3, 2, range(n))
    assert verify_projector(sphere3, 0, all_up)


def test_projector_precondition_reported(torus2):
    # a single up edge violates vertex terms on every 2-cell containing it
    bad = Chain.from_cells(torus2, 1, [0])
    cell = torus2.cofaces(1, 0)[0]
    with pytest.raises(PreconditionError):
        verify_projector(torus2, cell, bad)


def test_commutation_on_cycles(torus2, voronoi3):
    rng = random.Random(2)
    for c in (torus2, voronoi3):
        n = c.n_cells(c.dim)
        for _ in range(60):
            s = random_cycle(c, rng)
            assert verify_commutation(c, rng.randrange(n), rng.randrange(n), s)


def test_commutation_rejects_noncycle(torus2):
    with pytest.raises(PreconditionError):
        verify_commutation(torus2, 0, 1, Chain.from_cells(torus2, 1, [0]))


def test_sweep_sign_rp2_and_sphere(rp2, sphere2):
    assert sweep_sign(rp2, Chain.empty(rp2, 1)) == -1
    assert sweep_sign(sphere2, Chain.empty(sphere2, 1)) == 1


def test_sweep_sign_torus_all_sectors(torus2):
    for rep in sector_reps(torus2).reps:
        assert sweep_sign(torus2, rep) == 1


def test_sweep_order_independence(rp2, torus2):
    rng = random.Random(3)
    for c in (rp2, torus2):
        for rep in sector_reps(c).reps:
            base = sweep_sign(c, rep)
            for _ in range(20):
                order = list(range(c.n_cells(2)))
                rng.shuffle(order)
                assert sweep_sign(c, rep, order) == base


def test_sweep_representative_independence(klein):
    rng = random.Random(4)
    sectors = sector_reps(klein)
    for rep in sectors.reps:
        base = sweep_sign(klein, rep)
        for _ in range(5):
            # another representative of the same class
            bits = rep.bits
            for _ in range(rng.randint(1, 4)):
                bits ^= klein.boundary_bits(2, rng.randrange(klein.n_cells(2)))
            assert sweep_sign(klein, Chain(klein, 1, bits)) == base


def test_sweep_rejects_noncycle(torus2):
    with pytest.raises(ValueError):
        sweep_sign(torus2, Chain.from_cells(torus2, 1, [0]))


@pytest.mark.parametrize("t,expected", [(1, 1), (2, 2), (3, 4), (4, 8)])
def test_ground_degeneracy_projective_sums(t, expected):
    c = builtin_manifold("tP", t)
    gds, _ = ground_degeneracy(c, GDS)
    gtc, _ = ground_degeneracy(c, GTC)
    assert gds == expected
    assert gtc == 2**t


def test_ground_degeneracy_odd_dimension(torus3, sphere3):
    assert ground_degeneracy(torus3, GDS)[0] == 8
    assert ground_degeneracy(torus3, GTC)[0] == 8
    assert ground_degeneracy(sphere3, GDS)[0] == 1


def test_ground_degeneracy_even_sphere(sphere4):
    gsd, reports = ground_degeneracy(sphere4, GDS)
    assert gsd == 1
    assert reports[0].survives and reports[0].epsilon == 0


def test_sector_reports_flag_consistency(klein):
    gsd, reports = ground_degeneracy(klein, GDS)
    assert gsd == 2
    for r in reports:
        assert r.survives == (r.sweep_sign == 1)
        # even d back-solved one-sidedness parity
        assert r.epsilon == (0 if r.survives else 1)  # chi(klein) = 0


def test_disconnected_complex_factorizes():
    from gdslab.complexes import Triangulation, dual_of_triangulation
    from gdslab.manifolds import freudenthal_torus, nonorientable_surface

    t_torus = freudenthal_torus(2, 3)
    t_rp2 = nonorientable_surface(1)
    shift = t_torus.n_vertices
    merged = Triangulation(
        2,
        t_torus.simplices
        + [tuple(v + shift for v in s) for s in t_rp2.simplices],
    )
    c = dual_of_triangulation(merged)
    assert ground_degeneracy(c, GDS)[0] == 4 * 1
    assert ground_degeneracy(c, GTC)[0] == 4 * 2
    with pytest.raises(ValueError):
        sweep_sign(c, Chain.empty(c, 1))


def test_even_d_sign_identity_on_cycles(sphere2, sphere4):
    # (-1)^chi(up) equals i^chi(up meet down) on cycle states in even d
    from gdslab.phases import Phase

    rng = random.Random(6)
    for c in (sphere2, sphere4):
        d = c.dim
        for _ in range(50):
            s = random_cycle(c, rng)
            cell = rng.randrange(c.n_cells(d))
            up = [f for f in c.faces(d, cell) if s.contains(f)]
            down = [f for f in c.faces(d, cell) if not s.contains(f)]
            cl_up = c.closure((d - 1, f) for f in up)
            cl_down = c.closure((d - 1, f) for f in down)
            chi_meet = c.chi_of_cells(cl_up & cl_down)
            assert chi_meet % 2 == 0
            assert Phase.i_power(chi_meet).sign() == (-1) ** chi_up(c, cell, s)


def test_odd_d_flip_changes_chi_by_even(torus3):
    from gdslab.phases import Phase

    rng = random.Random(7)
    f_state = random_cycle(torus3, rng)
    for _ in range(100):
        cell = rng.randrange(torus3.n_cells(3))
        new_state, sf = flip(torus3, cell, f_state, GDS)
        delta = new_state.euler_characteristic() - f_state.euler_characteristic()
        assert delta % 2 == 0
        # i^chi flips sign exactly when the flip phase is -1
        assert Phase.i_power(delta).sign() == sf.phase
        f_state = new_state
