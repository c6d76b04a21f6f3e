"""Z2 cellular homology: Betti numbers, semicharacteristic, sector
representatives, and side analysis of curves on surfaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Tuple

from .complexes import CellComplex, CellKey, Chain
from .f2 import F2Matrix, in_span, reduce_by_rref


@dataclass(frozen=True)
class BettiVector:
    b: Tuple[int, ...]

    @property
    def chi(self) -> int:
        return sum((-1) ** k * n for k, n in enumerate(self.b))

    def __getitem__(self, k: int) -> int:
        return self.b[k] if 0 <= k < len(self.b) else 0


def betti(c: CellComplex) -> BettiVector:
    """b_k = dim ker boundary_k - rank boundary_{k+1}, all over F2."""
    ranks = [c.incidence(k).rank() if 1 <= k <= c.dim else 0 for k in range(c.dim + 2)]
    out = []
    for k in range(c.dim + 1):
        kernel = c.n_cells(k) - ranks[k]
        out.append(kernel - ranks[k + 1])
    return BettiVector(tuple(out))


def betti_of_cells(c: CellComplex, closed_cells: Iterable[CellKey]) -> BettiVector:
    """Betti numbers of a face-closed cell set, computed in place.

    Builds the restricted incidence matrices directly so no subcomplex object
    is materialized.
    """
    cells = set(closed_cells)
    if not cells:
        return BettiVector((0,))
    top = max(k for k, _ in cells)
    ids = [sorted(i for k, i in cells if k == kk) for kk in range(top + 1)]
    index = [{pid: j for j, pid in enumerate(lst)} for lst in ids]
    ranks = [0] * (top + 2)
    for k in range(1, top + 1):
        rows = []
        for pid in ids[k]:
            bits = 0
            full = c.incidence(k).row(pid)
            while full:
                low = full & -full
                f = low.bit_length() - 1
                bits |= 1 << index[k - 1][f]
                full ^= low
            rows.append(bits)
        ranks[k] = F2Matrix(len(rows), len(ids[k - 1]), rows).rank()
    out = []
    for k in range(top + 1):
        kernel = len(ids[k]) - ranks[k]
        out.append(kernel - ranks[k + 1])
    return BettiVector(tuple(out))


def euler_char(c: CellComplex | Iterable[CellKey]) -> int:
    if isinstance(c, CellComplex):
        return c.euler_characteristic()
    total = 0
    for k, _ in c:
        total += 1 if k % 2 == 0 else -1
    return total


def semicharacteristic(b: BettiVector, k: int, start: int = 0) -> int:
    """Sum of b_start .. b_k mod 2; the half-range Betti parity of a
    (2k+1)-dimensional space."""
    if start not in (0, 1):
        raise ValueError("start must be 0 or 1")
    return sum(b[i] for i in range(start, k + 1)) % 2


def semicharacteristic_of_cells(
    c: CellComplex, closed_cells: Iterable[CellKey], k: int, start: int = 0
) -> int:
    return semicharacteristic(betti_of_cells(c, closed_cells), k, start)


def cycle_space_basis(c: CellComplex, p: int) -> List[int]:
    """Basis of ker boundary_p as bitmasks over p-cells."""
    if p == 0:
        return [1 << i for i in range(c.n_cells(0))]
    return c.incidence(p).transpose().nullspace()


def boundary_space_rref(c: CellComplex, p: int) -> List[int]:
    """RREF basis of the space of boundaries inside the p-chains."""
    if p + 1 > c.dim:
        return []
    return c.incidence(p + 1).row_space_basis()


def is_boundary(c: CellComplex, chain: Chain) -> bool:
    return in_span(chain.bits, boundary_space_rref(c, chain.dim))


def is_homologous(c: CellComplex, a: Chain, b: Chain) -> bool:
    """Same class iff the difference bounds a set of (p+1)-cells."""
    return is_boundary(c, a ^ b)


def bounding_cells(c: CellComplex, chain: Chain) -> Chain:
    """A set of (p+1)-cells whose boundary is the given null-homologous chain."""
    rows = [c.incidence(chain.dim + 1).row(i) for i in range(c.n_cells(chain.dim + 1))]
    m = F2Matrix(len(rows), c.n_cells(chain.dim), rows).transpose()
    # solve m x = chain.bits by elimination on the augmented system
    aug = [m.row(r) | (((chain.bits >> r) & 1) << len(rows)) for r in range(m.rows)]
    work = F2Matrix(m.rows, len(rows) + 1, aug)
    red, pivots = work.rref()
    x = 0
    for r, p in enumerate(pivots):
        if p == len(rows):
            raise ValueError("chain is not a boundary")
        if (red.data[r] >> len(rows)) & 1:
            x |= 1 << p
    return Chain(c, chain.dim + 1, x)


@dataclass
class SectorSet:
    complex: CellComplex
    p: int
    reps: List[Chain]
    boundary_rref: Tuple[int, ...]

    @property
    def class_count(self) -> int:
        return len(self.reps)

    def canonical_bits(self, chain_bits: int) -> int:
        return reduce_by_rref(chain_bits, self.boundary_rref)

    def sector_index(self, chain: Chain) -> int:
        key = self.canonical_bits(chain.bits)
        for i, rep in enumerate(self.reps):
            if rep.bits == key:
                return i
        raise ValueError("chain is not a cycle in a known sector")


def homology_sector_reps(c: CellComplex, p: int, max_rank: int = 12) -> SectorSet:
    """One canonical cycle per Z2 homology class of dimension p.

    Representatives are reduced against the boundary space in lexicographic
    pivot order, so the empty chain represents the trivial class and the
    choice is reproducible.
    """
    cycles = cycle_space_basis(c, p)
    bound_rref = tuple(boundary_space_rref(c, p))
    homology_basis = []
    seen_rref: List[int] = list(bound_rref)
    for z in cycles:
        reduced = reduce_by_rref(z, seen_rref)
        if reduced:
            homology_basis.append(z)
            seen_rref.append(reduced)
            # keep seen_rref triangular for the reduction helper
            seen_rref = F2Matrix(
                len(seen_rref), c.n_cells(p), seen_rref
            ).row_space_basis()
    b_p = len(homology_basis)
    if b_p > max_rank:
        raise ValueError(f"2^{b_p} sectors exceed the enumeration guard")
    reps = []
    for bits in range(1 << b_p):
        z = 0
        for i in range(b_p):
            if (bits >> i) & 1:
                z ^= homology_basis[i]
        reps.append(Chain(c, p, reduce_by_rref(z, bound_rref)))
    reps.sort(key=lambda ch: (ch.bits.bit_count(), ch.bits))
    assert reps[0].bits == 0
    return SectorSet(c, p, reps, bound_rref)


@dataclass
class SideReport:
    one_sided: Tuple[bool, ...]
    epsilon: int
    w1_eval: int


def _loop_components(c: CellComplex, e: Chain) -> List[List[int]]:
    """Split a 1-cycle on a trivalent surface into its loops (edge id lists)."""
    edges = set(e.cells())
    at_vertex: Dict[int, List[int]] = {}
    for edge in edges:
        for v in c.faces(1, edge):
            at_vertex.setdefault(v, []).append(edge)
    for v, lst in at_vertex.items():
        if len(lst) != 2:
            raise ValueError(f"not a disjoint union of loops at vertex {v}")
    components = []
    remaining = set(edges)
    while remaining:
        start = min(remaining)
        loop = [start]
        remaining.discard(start)
        v_prev, v_cur = c.faces(1, start)
        while True:
            nxt = [x for x in at_vertex[v_cur] if x != loop[-1]]
            edge = nxt[0]
            if edge == start:
                break
            loop.append(edge)
            remaining.discard(edge)
            a, b = c.faces(1, edge)
            v_cur = b if a == v_cur else a
        components.append(loop)
    return components


def _corner_face(c: CellComplex, v: int, e1: int, e2: int) -> int:
    """The 2-cell wedged between two edges at a trivalent vertex."""
    shared = [
        f
        for f in set(c.cofaces(1, e1))
        if f in c.cofaces(1, e2) and (0, v) in c.closure_of_cell(2, f)
    ]
    if len(shared) != 1:
        raise ValueError(f"ambiguous corner at vertex {v}")
    return shared[0]


def two_sidedness_d2(c: CellComplex, e: Chain) -> SideReport:
    """Propagate a side label along each loop of a 1-cycle on a surface.

    A loop is one-sided when the label comes back flipped (a Mobius
    neighborhood); the parity of one-sided loops is both the defect-point
    count mod 2 and the orientation character of the cycle's class.
    """
    if c.dim != 2:
        raise ValueError("side analysis is defined for surfaces only")
    if not e.is_cycle():
        raise ValueError("chain is not a cycle")
    flags = []
    for loop in _loop_components(c, e):
        # orient the loop as a vertex sequence
        verts = []
        a, b = c.faces(1, loop[0])
        verts.append(a)
        cur = b
        for edge in loop[1:]:
            verts.append(cur)
            x, y = c.faces(1, edge)
            cur = y if x == cur else x
        # side = one of the two cofaces of the current edge
        side = c.cofaces(1, loop[0])[0]
        start_side = side
        n = len(loop)
        for i in range(n):
            edge = loop[i]
            nxt_edge = loop[(i + 1) % n]
            v = verts[(i + 1) % n]
            third = [
                x for x in set(c.cofaces(0, v)) if x not in (edge, nxt_edge)
            ][0]
            if side != _corner_face(c, v, edge, nxt_edge):
                # crossing the vertex, the other side passes the third edge
                side = _corner_face(c, v, third, nxt_edge)
        flags.append(side != start_side)
    eps = sum(flags) % 2
    return SideReport(tuple(flags), eps, eps)
