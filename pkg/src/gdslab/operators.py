"""Balloon operators, the classical two-dimensional Wilson sign with its
linking term, dual Wilson loops and arcs, and open-balloon excitations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import FrozenSet, List, Sequence, Tuple

from .complexes import CellComplex, Chain, ensure_validated, resolve_union
from .f2 import in_span
from .homology import betti, betti_of_cells, semicharacteristic
from .phases import MINUS_ONE, Phase


@dataclass(frozen=True)
class Balloon:
    """Codimension-1 operator support: a set of (d-1)-cells, closed or open."""

    support: Chain
    closed: bool = True

    def __post_init__(self):
        if self.support.dim != self.support.complex.dim - 1:
            raise ValueError("balloon support must consist of (d-1)-cells")
        has_boundary = self.support.boundary().bits != 0
        if self.closed and has_boundary:
            raise ValueError("closed balloon support must be a cycle")
        if not self.closed and not has_boundary:
            raise ValueError("open balloon support must have boundary")


@dataclass(frozen=True)
class DualLoop:
    """A walk in the dual graph given by the (d-1)-cells it crosses."""

    cells: Tuple[int, ...]
    closed: bool = True


def _walk_shared_cells(c: CellComplex, loop: DualLoop) -> List[int]:
    """Top cells shared by consecutive crossed faces; validates adjacency."""
    cells = loop.cells
    if not cells:
        raise ValueError("empty dual walk")
    pairs = list(zip(cells, cells[1:]))
    if loop.closed and len(cells) > 1:
        pairs.append((cells[-1], cells[0]))
    shared = []
    for f1, f2 in pairs:
        common = set(c.cofaces(c.dim - 1, f1)) & set(c.cofaces(c.dim - 1, f2))
        if not common:
            raise ValueError(f"faces {f1} and {f2} do not share a top cell")
        shared.append(min(common))
    return shared


class TangentialOverlapError(ValueError):
    """The two supports touch along cells without sharing codimension-1 cells
    there; the continuum treatment perturbs such contacts away, so no sign is
    assigned on the unrefined complex."""


@dataclass
class OverlapPieces:
    """Support-only, shared, and state-only parts of a balloon application."""

    l_only_bits: int
    shared_bits: int
    state_only_bits: int
    clean: bool
    chi_shared: int
    chi_boundary: int
    boundary_cells: frozenset


def _is_embedded_union(c: CellComplex, k: int, bits: int) -> bool:
    """A union of k-cells is embedded when normalizing it splits nothing."""
    cells = Chain(c, k, bits).cells()
    if not cells:
        return True
    resolved = resolve_union(c, k, cells)
    closure = c.closure((k, i) for i in cells)
    counts = [0] * (k + 1)
    for dim, _ in closure:
        counts[dim] += 1
    return list(resolved.cell_counts) == counts


def overlap_pieces(c: CellComplex, l_bits: int, a_bits: int) -> OverlapPieces:
    """Decompose supports and certify that they intersect cleanly.

    Clean means: the support-only, shared, and state-only pieces are each
    embedded, and all pairwise closures meet exactly in the boundary of the
    shared piece, so the Euler/Betti bookkeeping of the continuum picture
    applies verbatim.
    """
    d1 = c.dim - 1
    b_bits = l_bits & a_bits
    a_bits_only = l_bits & ~a_bits
    c_bits_only = a_bits & ~l_bits

    def closure_of(bits: int):
        return c.closure((d1, i) for i in Chain(c, d1, bits).cells())

    cl_a = closure_of(a_bits_only)
    cl_b = closure_of(b_bits)
    cl_c = closure_of(c_bits_only)
    m_cells = c.closure(
        (d1 - 1, i) for i in Chain(c, d1, b_bits).boundary().cells()
    )
    clean = (
        (cl_a & cl_b) == m_cells
        and (cl_b & cl_c) == m_cells
        and (cl_a & cl_c) == m_cells
        and _is_embedded_union(c, d1, a_bits_only)
        and _is_embedded_union(c, d1, b_bits)
        and _is_embedded_union(c, d1, c_bits_only)
    )
    return OverlapPieces(
        a_bits_only,
        b_bits,
        c_bits_only,
        clean,
        c.chi_of_cells(cl_b),
        c.chi_of_cells(m_cells),
        m_cells,
    )


def balloon_sign(c: CellComplex, l: Balloon, alpha: Chain) -> Phase:
    """Sign that makes NOT-on-support preserve zero-energy states.

    Odd ambient dimension needs no topological assumptions; the even case is
    only offered on complexes tagged as satisfying the vanishing-homology and
    tangent-class hypotheses (the shipped even spheres)."""
    ensure_validated(c)
    if not l.closed:
        raise ValueError("balloon must be closed; use open_balloon_apply")
    if not alpha.is_cycle():
        raise ValueError("state must be a cycle")
    d = c.dim
    pieces = overlap_pieces(c, l.support.bits, alpha.bits)
    if not pieces.clean:
        raise TangentialOverlapError(
            "balloon support and state touch tangentially; no consistent sign"
        )
    if d % 2 == 1:
        chi_l = l.support.euler_characteristic()
        return Phase.i_power(chi_l) * Phase.from_sign((-1) ** pieces.chi_shared)
    if d == 2:
        raise ValueError("use ds2_wilson_sign for surfaces; the point boundary"
                         " case carries an extra linking term")
    if not c.meta.get("balloon_even_ok"):
        raise ValueError(
            "even-dimensional balloon signs are only defined on complexes "
            "tagged with the required topology hypotheses"
        )
    k = (d - 2) // 2
    s_l = semicharacteristic(betti_of_cells(c, l.support.closure()), k, start=0)
    if pieces.chi_boundary % 2:
        raise AssertionError("boundary of the overlap has odd Euler characteristic")
    return Phase.from_sign((-1) ** s_l) * Phase.i_power(pieces.chi_boundary)


def apply_balloon(c: CellComplex, l: Balloon, alpha: Chain) -> Tuple[Chain, Phase]:
    sign = balloon_sign(c, l, alpha)
    return alpha ^ l.support, sign


def _single_loop_order(c: CellComplex, l: Chain) -> Tuple[List[int], List[int]]:
    """Ordered edges and vertices of a single embedded loop."""
    edges = set(l.cells())
    at_vertex = {}
    for e in edges:
        for v in c.faces(1, e):
            at_vertex.setdefault(v, []).append(e)
    if any(len(es) != 2 for es in at_vertex.values()):
        raise ValueError("support is not a disjoint union of loops")
    start = min(edges)
    loop = [start]
    verts = [c.faces(1, start)[0]]
    cur = c.faces(1, start)[1]
    while True:
        nxt = [e for e in at_vertex[cur] if e != loop[-1]][0]
        if nxt == start:
            break
        verts.append(cur)
        loop.append(nxt)
        a, b = c.faces(1, nxt)
        cur = b if a == cur else a
    if len(loop) != len(edges):
        raise ValueError("support has more than one loop component")
    # verts[i] is the vertex between loop[i] and loop[i+1]
    verts = verts[1:] + [cur]
    return loop, verts


@dataclass
class WilsonData:
    phase: Phase
    endpoint_count: int
    link: int


def ds2_wilson_sign(c: CellComplex, l: Chain, alpha: Chain) -> Phase:
    return ds2_wilson_data(c, l, alpha).phase


def ds2_wilson_data(c: CellComplex, l: Chain, alpha: Chain) -> WilsonData:
    """Wilson sign on a cellulated 2-sphere: a semicharacteristic factor, an
    endpoint count, and a total mod-2 linking number of the endpoint pairs."""
    ensure_validated(c)
    if c.dim != 2 or betti(c).b != (1, 0, 1):
        raise ValueError("ambient complex must be a 2-sphere cellulation")
    if not alpha.is_cycle():
        raise ValueError("state must be a cycle")
    loop_edges, loop_verts = _single_loop_order(c, l)
    if not Chain.from_cells(c, 1, loop_edges).is_cycle():
        raise ValueError("loop is not a cycle")

    b_bits = l.bits & alpha.bits
    endpoints = set(Chain(c, 1, b_bits).boundary().cells())
    # positions of endpoint vertices along the loop
    position = {v: i for i, v in enumerate(loop_verts)}
    if not all(v in position for v in endpoints):
        raise AssertionError("overlap endpoints must lie on the loop")

    # pair endpoints by the off-loop arcs of the state
    c_only = alpha.bits & ~l.bits
    pairs = []
    remaining = set(Chain(c, 1, c_only).cells())
    adj = {}
    for e in remaining:
        for v in c.faces(1, e):
            adj.setdefault(v, []).append(e)
    visited = set()
    for e0 in sorted(remaining):
        if e0 in visited:
            continue
        component = {e0}
        frontier = [e0]
        visited.add(e0)
        while frontier:
            e = frontier.pop()
            for v in c.faces(1, e):
                for e2 in adj[v]:
                    if e2 not in visited:
                        visited.add(e2)
                        component.add(e2)
                        frontier.append(e2)
        ends = [
            v
            for v in set(
                v for e in component for v in c.faces(1, e)
            )
            if sum(1 for e in component for w in c.faces(1, e) if w == v) == 1
        ]
        if len(ends) == 2:
            pairs.append((position[ends[0]], position[ends[1]]))
        elif ends:
            raise AssertionError("off-loop arc with a bad endpoint count")

    link = interleave_parity(pairs)
    chi_points = len(endpoints)
    if chi_points % 2:
        raise AssertionError("odd number of overlap endpoints")
    phase = MINUS_ONE * Phase.i_power(chi_points) * Phase.from_sign((-1) ** link)
    return WilsonData(phase, chi_points, link)


def interleave_parity(pairs: Sequence[Tuple[int, int]]) -> int:
    """Total mod-2 linking of point pairs on a circle: the parity of chord
    crossings, independent of which complementary disk the chords use."""
    link = 0
    for i in range(len(pairs)):
        for j in range(i + 1, len(pairs)):
            a1, b1 = pairs[i]
            a2, b2 = pairs[j]
            lo, hi = min(a1, b1), max(a1, b1)
            inside = sum(1 for x in (a2, b2) if lo < x < hi)
            link ^= inside & 1
    return link


def dual_wilson_phase(c: CellComplex, loop: DualLoop, state: Chain) -> int:
    """Diagonal phase of the Z-string along a closed dual loop."""
    if not loop.closed:
        raise ValueError("loop must be closed")
    _walk_shared_cells(c, loop)
    ups = sum(1 for f in loop.cells if state.contains(f))
    return (-1) ** (ups % 2)


def dual_crossing_chain(c: CellComplex, loop: DualLoop) -> Chain:
    bits = 0
    for f in loop.cells:
        bits ^= 1 << f
    return Chain(c, c.dim - 1, bits)


def is_dual_nullhomologous(c: CellComplex, loop: DualLoop) -> bool:
    """True iff the loop bounds in the dual 2-skeleton, i.e. its crossing
    chain is a sum of coface triples of (d-2)-cells."""
    cols = c.incidence(c.dim - 1).transpose().row_space_basis()
    return in_span(dual_crossing_chain(c, loop).bits, cols)


@dataclass
class ArcExcitation:
    violated_cells: FrozenSet[int]
    sector_phases: Tuple[int, ...]


def open_dual_arc_excite(c: CellComplex, arc: DualLoop, sector_reps: Sequence[Chain]) -> ArcExcitation:
    """Z-string along an open dual arc: plaquette terms at the two endpoint
    top cells anticommute, everything else is untouched."""
    if arc.closed:
        raise ValueError("arc must be open")
    _walk_shared_cells(c, arc)
    d_chain = dual_crossing_chain(c, arc)
    violated = frozenset(_bits_to_cells(c.incidence(c.dim).matvec(d_chain.bits)))
    phases = tuple(
        (-1) ** (sum(1 for f in arc.cells if rep.contains(f)) % 2)
        for rep in sector_reps
    )
    return ArcExcitation(violated, phases)


def _bits_to_cells(bits: int) -> Tuple[int, ...]:
    out = []
    while bits:
        low = bits & -bits
        out.append(low.bit_length() - 1)
        bits ^= low
    return tuple(out)


def open_balloon_apply(
    c: CellComplex, l: Balloon, alpha: Chain, conjugate: bool = False
) -> Tuple[Chain, Phase, FrozenSet[int]]:
    """NOT on an open codimension-1 support, with the boundary-overlap sign;
    the excited vertex terms lie exactly on the support boundary."""
    ensure_validated(c)
    d = c.dim
    if d % 2 or d < 4:
        raise ValueError("open balloons are defined in even dimension >= 4")
    if l.closed:
        raise ValueError("balloon must be open")
    if not alpha.is_cycle():
        raise ValueError("state must be a cycle")
    k = (d - 2) // 2
    if not _is_embedded_union(c, d - 1, l.support.bits):
        raise TangentialOverlapError("open balloon support is not embedded")
    s_l = semicharacteristic(betti_of_cells(c, l.support.closure()), k, start=1)
    pieces = overlap_pieces(c, l.support.bits, alpha.bits)
    if not pieces.clean:
        raise TangentialOverlapError(
            "balloon support and state touch tangentially; no consistent sign"
        )
    chi_m = pieces.chi_boundary
    if chi_m % 2:
        raise AssertionError("overlap boundary has odd Euler characteristic")
    i_factor = Phase.i_power(-chi_m if conjugate else chi_m)
    phase = Phase.from_sign((-1) ** s_l) * i_factor
    new_state = alpha ^ l.support
    violated = frozenset(l.support.boundary().cells())
    return new_state, phase, violated


@dataclass
class DeltaCheck:
    holds: bool
    lhs: int
    rhs: int


def semichar_delta_check(c: CellComplex, l: Balloon, alpha: Chain) -> DeltaCheck:
    """Bookkeeping identity for the semicharacteristic (even d) or the Euler
    characteristic (odd d) across a balloon application."""
    if not l.closed or not alpha.is_cycle():
        raise ValueError("both the balloon and the state must be closed")
    d = c.dim
    pieces = overlap_pieces(c, l.support.bits, alpha.bits)
    if not pieces.clean:
        raise TangentialOverlapError("supports touch tangentially; refine first")
    final = alpha ^ l.support          # the cycle A union C
    chi_m = pieces.chi_boundary
    if d % 2 == 1:
        lhs = final.euler_characteristic() - alpha.euler_characteristic()
        rhs = (
            l.support.euler_characteristic()
            + chi_m
            - 2 * pieces.chi_shared
        )
        return DeltaCheck(lhs == rhs and chi_m == 0, lhs, rhs)
    k = (d - 2) // 2
    s_final = semicharacteristic(betti_of_cells(c, final.closure()), k, start=0)
    s_initial = semicharacteristic(betti_of_cells(c, alpha.closure()), k, start=0)
    s_l = semicharacteristic(betti_of_cells(c, l.support.closure()), k, start=0)
    if chi_m % 2:
        return DeltaCheck(False, (s_final + s_initial) % 2, -1)
    lhs = (s_final + s_initial) % 2
    rhs = (s_l + chi_m // 2) % 2
    return DeltaCheck(lhs == rhs, lhs, rhs)


def random_sparse_cycle(c: CellComplex, rng, max_cells: int = 3, reps=None) -> Chain:
    """Flip-generated cycle: boundary of a few top cells, optionally shifted
    into a nontrivial sector."""
    bits = 0
    for _ in range(rng.randint(1, max_cells)):
        bits ^= c.boundary_bits(c.dim, rng.randrange(c.n_cells(c.dim)))
    if reps and rng.getrandbits(1):
        bits ^= rng.choice(reps).bits
    return Chain(c, c.dim - 1, bits)


def sample_clean_pair(
    c: CellComplex, rng, reps=None, max_tries: int = 400
) -> Tuple[Balloon, Chain]:
    """Rejection-sample a (closed balloon, cycle state) pair whose supports
    intersect cleanly; tangential contacts would be refined away in the
    continuum, so they are skipped here."""
    for _ in range(max_tries):
        support = random_sparse_cycle(c, rng, reps=reps)
        alpha = random_sparse_cycle(c, rng, reps=reps)
        if support.bits == 0:
            continue
        if overlap_pieces(c, support.bits, alpha.bits).clean:
            return Balloon(support, closed=True), alpha
    raise RuntimeError("no cleanly intersecting pair found")


def balloon_dual_loop_commutator(
    c: CellComplex, l: Balloon, loop: DualLoop, alpha: Chain
) -> int:
    """+1 or -1 according to the parity of |support intersect crossings|.

    The balloon sign cancels between the two application orders, so this is
    checked operationally on the NOT part alone."""
    p_before = dual_wilson_phase(c, loop, alpha)
    p_after = dual_wilson_phase(c, loop, alpha ^ l.support)
    parity = sum(1 for f in loop.cells if l.support.contains(f)) % 2
    if p_before * p_after != (-1) ** parity:
        raise AssertionError("commutator parity disagrees with the overlap count")
    return (-1) ** parity
