"""Cell complexes as graded face posets, triangulations, and their duals.

A complex of dimension d stores, for every k-cell, the list of its
codimension-1 face ids.  Face lists may contain repeats (a cell glued to the
same face twice); boundary maps over F2 use the parity of the multiplicity,
coface counts use the multiplicity itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Sequence, Set, Tuple

from .f2 import F2Matrix

CellKey = Tuple[int, int]  # (dimension, id)


class Triangulation:
    """A pure simplicial complex given by its maximal simplices."""

    def __init__(self, dim: int, maximal_simplices: Iterable[Sequence[int]]):
        self.dim = dim
        self.simplices = sorted({tuple(sorted(s)) for s in maximal_simplices})
        if not self.simplices:
            raise ValueError("no simplices")
        for s in self.simplices:
            if len(s) != dim + 1 or len(set(s)) != dim + 1:
                raise ValueError(f"simplex {s} is not a {dim}-simplex")
        self.n_vertices = max(max(s) for s in self.simplices) + 1

    def faces_by_dim(self) -> Dict[int, List[Tuple[int, ...]]]:
        """All faces of all maximal simplices, sorted per dimension."""
        found: Dict[int, Set[Tuple[int, ...]]] = {k: set() for k in range(self.dim + 1)}
        for s in self.simplices:
            n = len(s)
            for bits in range(1, 1 << n):
                sub = tuple(s[i] for i in range(n) if (bits >> i) & 1)
                found[len(sub) - 1].add(sub)
        return {k: sorted(v) for k, v in found.items()}

    def validate(self) -> List[str]:
        """Closed pseudo-manifold checks; returns a list of violations."""
        problems = []
        ridge_count: Dict[Tuple[int, ...], int] = {}
        for s in self.simplices:
            for i in range(len(s)):
                ridge = s[:i] + s[i + 1 :]
                ridge_count[ridge] = ridge_count.get(ridge, 0) + 1
        for ridge, n in ridge_count.items():
            if n != 2:
                problems.append(f"face {ridge} lies in {n} maximal simplices")
        # Vertex links must be connected (one wedge of top simplices per vertex).
        star: Dict[int, List[int]] = {}
        for idx, s in enumerate(self.simplices):
            for v in s:
                star.setdefault(v, []).append(idx)
        for v, idxs in star.items():
            parent = {i: i for i in idxs}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            by_ridge: Dict[Tuple[int, ...], List[int]] = {}
            for i in idxs:
                s = self.simplices[i]
                for j in range(len(s)):
                    ridge = s[:j] + s[j + 1 :]
                    if v in ridge:
                        by_ridge.setdefault(ridge, []).append(i)
            for members in by_ridge.values():
                for other in members[1:]:
                    parent[find(other)] = find(members[0])
            if len({find(i) for i in idxs}) != 1:
                problems.append(f"vertex {v} has a disconnected link")
        return problems

    def euler_characteristic(self) -> int:
        faces = self.faces_by_dim()
        return sum((-1) ** k * len(v) for k, v in faces.items())

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"dim {self.dim}\n")
            for s in self.simplices:
                fh.write("s " + " ".join(str(v) for v in s) + "\n")

    @classmethod
    def load(cls, path: str) -> "Triangulation":
        dim = None
        simplices = []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if line.startswith("dim "):
                    dim = int(line.split()[1])
                elif line.startswith("s "):
                    simplices.append([int(tok) for tok in line.split()[1:]])
                else:
                    raise ValueError(f"bad triangulation line: {line!r}")
        if dim is None:
            raise ValueError("missing dim header")
        return cls(dim, simplices)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Triangulation)
            and self.dim == other.dim
            and self.simplices == other.simplices
        )


class CellComplex:
    """Regular-CW-style complex stored as a graded face poset."""

    def __init__(
        self,
        dim: int,
        faces: Sequence[Sequence[Sequence[int]]],
        provenance: str = "unknown",
        meta: dict | None = None,
    ):
        if len(faces) != dim + 1:
            raise ValueError("need one face table per dimension")
        self.dim = dim
        self._faces: List[List[Tuple[int, ...]]] = [
            [tuple(f) for f in faces[k]] for k in range(dim + 1)
        ]
        self.provenance = provenance
        self.meta = dict(meta or {})
        for k in range(1, dim + 1):
            limit = len(self._faces[k - 1])
            for i, fl in enumerate(self._faces[k]):
                if not fl:
                    raise ValueError(f"{k}-cell {i} has no faces")
                for f in fl:
                    if not 0 <= f < limit:
                        raise ValueError(f"{k}-cell {i} has bad face id {f}")
        for i, fl in enumerate(self._faces[0]):
            if fl:
                raise ValueError(f"0-cell {i} has faces")
        self._cofaces: List[List[Tuple[int, ...]]] | None = None
        self._closures: Dict[CellKey, FrozenSet[CellKey]] = {}
        self._incidence: Dict[int, F2Matrix] = {}

    # -- basic queries -----------------------------------------------------

    def n_cells(self, k: int) -> int:
        if not 0 <= k <= self.dim:
            return 0
        return len(self._faces[k])

    @property
    def cell_counts(self) -> Tuple[int, ...]:
        return tuple(len(self._faces[k]) for k in range(self.dim + 1))

    def faces(self, k: int, i: int) -> Tuple[int, ...]:
        return self._faces[k][i]

    def cofaces(self, k: int, i: int) -> Tuple[int, ...]:
        """Ids of (k+1)-cells having (k, i) as a face, with multiplicity."""
        if self._cofaces is None:
            tables: List[List[List[int]]] = [
                [[] for _ in range(self.n_cells(k2))] for k2 in range(self.dim + 1)
            ]
            for k2 in range(1, self.dim + 1):
                for j, fl in enumerate(self._faces[k2]):
                    for f in fl:
                        tables[k2 - 1][f].append(j)
            self._cofaces = [[tuple(lst) for lst in tab] for tab in tables]
        return self._cofaces[k][i]

    def euler_characteristic(self) -> int:
        return sum((-1) ** k * self.n_cells(k) for k in range(self.dim + 1))

    def boundary_bits(self, k: int, i: int) -> int:
        """Odd-multiplicity faces of (k, i) as a bitmask over (k-1)-cells."""
        return self.incidence(k).row(i)

    def incidence(self, k: int) -> F2Matrix:
        """Matrix with one row per k-cell, bit j set iff (k-1)-cell j appears
        an odd number of times among its faces."""
        if k not in self._incidence:
            rows = []
            for fl in self._faces[k] if k <= self.dim else []:
                bits = 0
                for f in set(fl):
                    if fl.count(f) & 1:
                        bits |= 1 << f
                rows.append(bits)
            self._incidence[k] = F2Matrix(
                self.n_cells(k), self.n_cells(k - 1) if k >= 1 else 0, rows
            )
        return self._incidence[k]

    # -- closures and subcomplexes ------------------------------------------

    def closure_of_cell(self, k: int, i: int) -> FrozenSet[CellKey]:
        key = (k, i)
        cached = self._closures.get(key)
        if cached is not None:
            return cached
        out: Set[CellKey] = {key}
        if k > 0:
            for f in set(self._faces[k][i]):
                out |= self.closure_of_cell(k - 1, f)
        result = frozenset(out)
        self._closures[key] = result
        return result

    def closure(self, cells: Iterable[CellKey]) -> FrozenSet[CellKey]:
        out: Set[CellKey] = set()
        for k, i in cells:
            out |= self.closure_of_cell(k, i)
        return frozenset(out)

    def chi_of_cells(self, closed_cells: Iterable[CellKey]) -> int:
        total = 0
        for k, _ in closed_cells:
            total += 1 if k % 2 == 0 else -1
        return total

    def cell_closure_embedded(self, k: int, i: int) -> bool:
        """True iff no face list inside the closure of (k, i) has repeats."""
        for ck, ci in self.closure_of_cell(k, i):
            fl = self._faces[ck][ci]
            if len(fl) != len(set(fl)):
                return False
        return True

    def subcomplex(self, cells: Iterable[CellKey]) -> "CellComplex":
        """The complex induced on a face-closed set of cells.

        Cell ids are re-densified per dimension in increasing parent order;
        the parent ids are kept in meta["parent_ids"].
        """
        cell_set = set(cells)
        for k, i in cell_set:
            for f in self._faces[k][i]:
                if (k - 1, f) not in cell_set:
                    raise ValueError("cell set is not closed under faces")
        if cell_set:
            sub_dim = max(k for k, _ in cell_set)
        else:
            sub_dim = 0
        parent_ids = [
            sorted(i for k, i in cell_set if k == kk) for kk in range(sub_dim + 1)
        ]
        index = [
            {pid: new for new, pid in enumerate(ids)} for ids in parent_ids
        ]
        faces: List[List[Tuple[int, ...]]] = [[] for _ in range(sub_dim + 1)]
        for k in range(sub_dim + 1):
            for pid in parent_ids[k]:
                if k == 0:
                    faces[0].append(())
                else:
                    faces[k].append(
                        tuple(index[k - 1][f] for f in self._faces[k][pid])
                    )
        return CellComplex(
            sub_dim,
            faces,
            provenance=f"subcomplex-of-{self.provenance}",
            meta={"parent_ids": parent_ids},
        )

    def boundary_sphere(self, cell: int) -> "CellComplex":
        """The induced complex on the proper faces of a top cell."""
        if not 0 <= cell < self.n_cells(self.dim):
            raise ValueError(f"no {self.dim}-cell {cell}")
        if not self.cell_closure_embedded(self.dim, cell):
            raise ValueError(
                f"{self.dim}-cell {cell} has a non-embedded closure; "
                "its boundary is not an induced subcomplex"
            )
        cells = self.closure_of_cell(self.dim, cell) - {(self.dim, cell)}
        return self.subcomplex(cells)

    def is_connected(self) -> bool:
        n = self.n_cells(0)
        if n == 0:
            return True
        parent = list(range(n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for fl in self._faces[1] if self.dim >= 1 else []:
            vs = list(fl)
            for other in vs[1:]:
                parent[find(other)] = find(vs[0])
        return len({find(v) for v in range(n)}) == 1

    # -- persistence ---------------------------------------------------------

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"dim {self.dim}\n")
            for k in range(self.dim + 1):
                for i, fl in enumerate(self._faces[k]):
                    face_txt = " ".join(str(f) for f in fl)
                    fh.write(f"c {i} {k} : {face_txt}\n".rstrip() + "\n")

    @classmethod
    def load(cls, path: str) -> "CellComplex":
        dim = None
        rows: Dict[int, Dict[int, Tuple[int, ...]]] = {}
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if line.startswith("dim "):
                    dim = int(line.split()[1])
                elif line.startswith("c "):
                    head, _, tail = line[2:].partition(":")
                    idx, k = (int(tok) for tok in head.split())
                    rows.setdefault(k, {})[idx] = tuple(
                        int(tok) for tok in tail.split()
                    )
                else:
                    raise ValueError(f"bad complex line: {line!r}")
        if dim is None:
            raise ValueError("missing dim header")
        faces = []
        for k in range(dim + 1):
            table = rows.get(k, {})
            if sorted(table) != list(range(len(table))):
                raise ValueError(f"non-dense ids in dimension {k}")
            faces.append([table[i] for i in range(len(table))])
        return cls(dim, faces, provenance="loaded")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CellComplex)
            and self.dim == other.dim
            and self._faces == other._faces
        )


@dataclass(frozen=True)
class Chain:
    """A per-dimension bit vector over the cells of one complex."""

    complex: CellComplex = field(compare=False)
    dim: int
    bits: int

    def __post_init__(self):
        n = self.complex.n_cells(self.dim)
        if self.bits >> n:
            raise ValueError("chain has bits beyond the cell count")

    @classmethod
    def from_cells(cls, complex: CellComplex, dim: int, cells: Iterable[int]) -> "Chain":
        bits = 0
        for c in cells:
            bits ^= 1 << c
        return cls(complex, dim, bits)

    @classmethod
    def empty(cls, complex: CellComplex, dim: int) -> "Chain":
        return cls(complex, dim, 0)

    def cells(self) -> List[int]:
        out = []
        b = self.bits
        while b:
            low = b & -b
            out.append(low.bit_length() - 1)
            b ^= low
        return out

    def count(self) -> int:
        return self.bits.bit_count()

    def __xor__(self, other: "Chain") -> "Chain":
        if other.complex is not self.complex or other.dim != self.dim:
            raise ValueError("chains live on different cell sets")
        return Chain(self.complex, self.dim, self.bits ^ other.bits)

    def contains(self, cell: int) -> bool:
        return (self.bits >> cell) & 1 == 1

    def boundary(self) -> "Chain":
        inc = self.complex.incidence(self.dim)
        bits = 0
        for c in self.cells():
            bits ^= inc.row(c)
        return Chain(self.complex, self.dim - 1, bits)

    def is_cycle(self) -> bool:
        return self.dim == 0 or self.boundary().bits == 0

    def closure(self) -> FrozenSet[CellKey]:
        return self.complex.closure((self.dim, c) for c in self.cells())

    def euler_characteristic(self) -> int:
        return self.complex.chi_of_cells(self.closure())


def dual_of_triangulation(t: Triangulation) -> CellComplex:
    """One (d-k)-cell per k-simplex; the dual of sigma is a face of the dual
    of tau exactly when tau is a facet of sigma."""
    problems = t.validate()
    if problems:
        raise ValueError("input is not a closed pseudo-manifold: " + problems[0])
    d = t.dim
    by_dim = t.faces_by_dim()
    ids = {
        k: {simplex: i for i, simplex in enumerate(by_dim[k])} for k in by_dim
    }
    # The dual of a k-simplex has dimension d - k; its faces are the duals of
    # the (k+1)-simplices containing it.
    contains: Dict[int, Dict[Tuple[int, ...], List[int]]] = {
        k: {s: [] for s in by_dim[k]} for k in by_dim
    }
    for k in range(1, d + 1):
        for tau in by_dim[k]:
            n = len(tau)
            for drop in range(n):
                sigma = tau[:drop] + tau[drop + 1 :]
                contains[k - 1][sigma].append(ids[k][tau])
    faces: List[List[Tuple[int, ...]]] = [[] for _ in range(d + 1)]
    for j in range(d + 1):
        k = d - j
        for simplex in by_dim[k]:
            if j == 0:
                faces[0].append(())
            else:
                faces[j].append(tuple(sorted(contains[k][simplex])))
    meta = {
        "dual_id": {k: dict(ids[k]) for k in ids},
        "primal_simplices": {k: list(by_dim[k]) for k in by_dim},
    }
    return CellComplex(d, faces, provenance="dual-of-triangulation", meta=meta)


@dataclass
class GenericityReport:
    passed: bool
    violations: List[str]

    def __bool__(self) -> bool:
        return self.passed


def validate_generic(c: CellComplex, heritability_samples: int = 4) -> GenericityReport:
    """Check the local combinatorics of a generic cellulation.

    (a) every j-cell (j < d) has exactly d - j + 1 cofaces, in particular
        every (d-1)-cell sits in 2 top cells and every (d-2)-cell in 3
        codimension-1 cells; (b) boundary spheres of sampled top cells pass
        the same counts one dimension down; (c) the F2 boundary of a boundary
        vanishes; (d) cell closures are embedded (no repeated faces).
    """
    violations: List[str] = []
    d = c.dim
    for k in range(d):
        expected = d - k + 1
        for i in range(c.n_cells(k)):
            n = len(c.cofaces(k, i))
            if n != expected:
                violations.append(
                    f"{k}-cell {i} has {n} cofaces, expected {expected}"
                )
    for k in range(1, d + 1):
        for i, fl in enumerate(c._faces[k]):
            if len(fl) != len(set(fl)):
                violations.append(f"{k}-cell {i} has a repeated face (non-embedded)")
    for k in range(2, d + 1):
        m = c.incidence(k).matmul(c.incidence(k - 1))
        if any(m.data):
            violations.append(f"boundary of boundary nonzero in dimension {k}")
    if d >= 1 and not violations:
        n_top = c.n_cells(d)
        step = max(1, n_top // max(1, heritability_samples))
        for cell in range(0, n_top, step):
            try:
                sphere = c.boundary_sphere(cell)
            except ValueError as exc:
                violations.append(f"top cell {cell}: {exc}")
                continue
            if sphere.dim != d - 1:
                violations.append(f"top cell {cell}: boundary has wrong dimension")
                continue
            for k in range(sphere.dim):
                expected = sphere.dim - k + 1
                for i in range(sphere.n_cells(k)):
                    if len(sphere.cofaces(k, i)) != expected:
                        violations.append(
                            f"top cell {cell}: boundary sphere fails coface "
                            f"count at {k}-cell {i}"
                        )
            expected_chi = 0 if (d - 1) % 2 else 2
            if sphere.euler_characteristic() != expected_chi:
                violations.append(
                    f"top cell {cell}: boundary sphere has chi "
                    f"{sphere.euler_characteristic()}, expected {expected_chi}"
                )
    return GenericityReport(not violations, violations)


def ensure_validated(c: CellComplex) -> None:
    """Validate once and cache; model operations require a generic cellulation."""
    if c.meta.get("generic_validated"):
        return
    report = validate_generic(c)
    if not report.passed:
        raise ValueError(
            "complex is not a validated generic cellulation: "
            + "; ".join(report.violations[:3])
        )
    c.meta["generic_validated"] = True


def closed_subcomplex(c: CellComplex, top_cells: Chain) -> CellComplex:
    """The subcomplex of all faces of the selected cells of one dimension."""
    if top_cells.complex is not c:
        raise ValueError("chain belongs to another complex")
    return c.subcomplex(c.closure((top_cells.dim, i) for i in top_cells.cells()))


def resolve_union(c: CellComplex, k: int, cells: Iterable[int]) -> CellComplex:
    """Normalization of a union of k-cells: tangential touchings split apart.

    Cells of the result are (cell, sheet) pairs, where the sheets at a face
    are the components of the incident k-cells under codimension-1 adjacency.
    Two k-cells count as locally connected at a face only when they share a
    (k-1)-cell containing it, which is exactly the perturbed picture of a
    union of closed cells.
    """
    tops = sorted(set(cells))
    containing: Dict[CellKey, List[int]] = {}
    for f in tops:
        for key in c.closure_of_cell(k, f):
            containing.setdefault(key, []).append(f)
    ridge_members: Dict[CellKey, List[int]] = {
        key: mem for key, mem in containing.items() if key[0] == k - 1
    }
    touches: Dict[CellKey, List[CellKey]] = {}
    for ridge in ridge_members:
        for key in c.closure_of_cell(*ridge):
            touches.setdefault(key, []).append(ridge)
    # sheet index per (cell, top): components under adjacency through ridges
    sheet_of: Dict[CellKey, Dict[int, int]] = {}
    for key, members in containing.items():
        parent = {f: f for f in members}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for ridge in touches.get(key, []):
            mem = ridge_members[ridge]
            for other in mem[1:]:
                parent[find(other)] = find(mem[0])
        roots = sorted({find(f) for f in members})
        root_index = {r: i for i, r in enumerate(roots)}
        sheet_of[key] = {f: root_index[find(f)] for f in members}
    new_ids: Dict[Tuple[CellKey, int], int] = {}
    per_dim: List[List[Tuple[CellKey, int]]] = [[] for _ in range(k + 1)]
    for key in sorted(containing):
        for sheet in sorted(set(sheet_of[key].values())):
            new_ids[(key, sheet)] = len(per_dim[key[0]])
            per_dim[key[0]].append((key, sheet))
    faces: List[List[Tuple[int, ...]]] = [[] for _ in range(k + 1)]
    for dim in range(k + 1):
        for key, sheet in per_dim[dim]:
            if dim == 0:
                faces[0].append(())
                continue
            rep = next(f for f, s in sheet_of[key].items() if s == sheet)
            fl = []
            for fid in c.faces(*key):
                face_key = (dim - 1, fid)
                fl.append(new_ids[(face_key, sheet_of[face_key][rep])])
            faces[dim].append(tuple(fl))
    return CellComplex(
        k,
        faces,
        provenance=f"resolved-union-of-{c.provenance}",
        meta={"source_cells": [key for key, _ in per_dim[k]]},
    )


def subset_boundary_manifold_check(c: CellComplex, top_cells: Iterable[int]) -> bool:
    """True iff the boundary of a union of closed top cells is a closed
    (d-1)-manifold, verified by link conditions (supported for d <= 3)."""
    d = c.dim
    if d > 3:
        raise NotImplementedError("link checks implemented for dimension <= 3")
    tset = set(top_cells)
    boundary_cells = [
        i
        for i in range(c.n_cells(d - 1))
        if sum(1 for cf in c.cofaces(d - 1, i) if cf in tset) == 1
    ]
    if not boundary_cells:
        return True
    bset = set(boundary_cells)
    closure = c.closure((d - 1, i) for i in boundary_cells)
    if d >= 2:
        # every (d-2)-cell of the boundary must sit in exactly 2 boundary cells
        for k, i in closure:
            if k != d - 2:
                continue
            n = sum(1 for cf in c.cofaces(d - 2, i) if cf in bset)
            if n != 2:
                return False
    if d == 3:
        # vertex links inside the boundary surface must be single circles
        for k, v in closure:
            if k != 0:
                continue
            incident = [
                f
                for f in bset
                if (0, v) in c.closure_of_cell(2, f)
            ]
            edges_at_v = {
                e
                for e in range(c.n_cells(1))
                if (0, v) in c.closure_of_cell(1, e)
            }
            parent = {f: f for f in incident}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            degree = {f: 0 for f in incident}
            for e in edges_at_v:
                sharing = [f for f in incident if e in c.faces(2, f)]
                if len(sharing) == 2:
                    a, b = sharing
                    degree[a] += 1
                    degree[b] += 1
                    parent[find(a)] = find(b)
                elif len(sharing) > 2:
                    return False
            if any(deg != 2 for deg in degree.values()):
                return False
            if len({find(f) for f in incident}) != 1:
                return False
    return True
