"""Local phase circuit conjugating the semion model to the toric code (odd d).

One gate per cell of dimension below d; a gate fires on a basis state when its
cell lies in the closure of the up-set, contributing +i for even-dimensional
cells and -i for odd.  The product telescopes to i to the Euler characteristic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Sequence, Tuple

from .complexes import CellComplex, Chain, ensure_validated
from .model import GDS, flip, random_cycle
from .phases import ONE, Phase


@dataclass(frozen=True)
class PhaseGate:
    dim: int
    cell: int
    support: FrozenSet[int]   # (d-1)-cells whose state the gate reads
    phase_if_present: Phase   # +i for even dim, -i for odd

    def fires(self, state: Chain) -> bool:
        return any(state.contains(f) for f in self.support)


def build_gates(c: CellComplex) -> List[PhaseGate]:
    if c.dim % 2 == 0:
        raise ValueError("the conjugating circuit exists in odd dimension")
    ensure_validated(c)
    d = c.dim
    support: Dict[Tuple[int, int], set] = {}
    for f in range(c.n_cells(d - 1)):
        for key in c.closure_of_cell(d - 1, f):
            support.setdefault(key, set()).add(f)
    gates = []
    for j in range(d):
        phase = Phase.i_power(1 if j % 2 == 0 else -1)
        for i in range(c.n_cells(j)):
            gates.append(
                PhaseGate(j, i, frozenset(support.get((j, i), ())), phase)
            )
    return gates


def circuit_phase(gates: Sequence[PhaseGate], state: Chain) -> Phase:
    """Product of all firing gates, evaluated gate by gate."""
    total = ONE
    for g in gates:
        if g.fires(state):
            total = total * g.phase_if_present
    return total


@dataclass
class Schedule:
    rounds: List[List[int]]   # gate indices per round

    @property
    def depth(self) -> int:
        return len(self.rounds)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for r in self.rounds:
                fh.write(" ".join(str(g) for g in r) + "\n")


def schedule(gates: Sequence[PhaseGate]) -> Schedule:
    """Greedy conflict coloring: gates with disjoint supports share a round.

    Gates are processed per dimension in id order, so the result is a pure
    function of the complex; the depth is bounded by one plus the largest
    number of gates any single qubit supports, hence by local geometry only.
    """
    by_qubit: Dict[int, List[int]] = {}
    for idx, g in enumerate(gates):
        for f in g.support:
            by_qubit.setdefault(f, []).append(idx)
    color: Dict[int, int] = {}
    n_colors = 0
    for idx, g in enumerate(gates):
        used = set()
        for f in g.support:
            for other in by_qubit[f]:
                if other in color:
                    used.add(color[other])
        c0 = 0
        while c0 in used:
            c0 += 1
        color[idx] = c0
        n_colors = max(n_colors, c0 + 1)
    rounds = [[] for _ in range(n_colors)]
    for idx in range(len(gates)):
        rounds[color[idx]].append(idx)
    return Schedule(rounds)


def verify_conjugation(c: CellComplex, n_states: int = 20, seed: int = 0) -> bool:
    """Check that conjugating a flip by the phase circuit cancels its sign.

    For every top cell and sampled cycle states: the circuit phase after the
    flip, times the semion flip sign, times the conjugate circuit phase before
    the flip, must be the toric-code sign +1.
    """
    if c.dim % 2 == 0:
        raise ValueError("the conjugating circuit exists in odd dimension")
    gates = build_gates(c)
    rng = random.Random(seed)
    for _ in range(n_states):
        state = random_cycle(c, rng)
        before = circuit_phase(gates, state)
        for cell in range(c.n_cells(c.dim)):
            after_state, sf = flip(c, cell, state, GDS)
            after = circuit_phase(gates, after_state)
            if after * Phase.from_sign(sf.phase) * before.conj() != ONE:
                return False
    return True
