"""Hamiltonian cycles of the complete carrier graph: enumeration, incidence
matrices, and proper edge colorings.

Vertices are 1-based carrier indices. A cycle is stored as a directed tour
starting at vertex 1; edge i runs from ``tour[i]`` to ``tour[i+1]`` (wrapping
back to vertex 1), so edges are indexed consecutively along the loop. The
undirected cycle has 2n directed/rotated representations; the canonical one
starts at vertex 1 and orients toward the smaller of its two neighbors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations

import numpy as np


@dataclass(frozen=True)
class HamiltonianCycle:
    """Directed Hamiltonian tour of the complete graph on n vertices."""

    tour: tuple[int, ...]
    edges: tuple[tuple[int, int], ...] = field(init=False)

    def __post_init__(self):
        tour = tuple(int(v) for v in self.tour)
        n = len(tour)
        if n < 3:
            raise ValueError(f"a Hamiltonian cycle needs at least 3 vertices, got {n}")
        if sorted(tour) != list(range(1, n + 1)):
            raise ValueError(f"tour must visit each of 1..{n} exactly once: {tour}")
        # Rotate so the tour starts at vertex 1; direction is preserved.
        k = tour.index(1)
        tour = tour[k:] + tour[:k]
        object.__setattr__(self, "tour", tour)
        edges = tuple((tour[i], tour[(i + 1) % n]) for i in range(n))
        object.__setattr__(self, "edges", edges)

    @property
    def n(self) -> int:
        return len(self.tour)

    def incoming_edge(self, vertex: int) -> int:
        """0-based index of the edge whose second endpoint is ``vertex``."""
        for i, (_, dst) in enumerate(self.edges):
            if dst == vertex:
                return i
        raise ValueError(f"vertex {vertex} not in cycle")

    def canonical(self) -> "HamiltonianCycle":
        """Representative under rotation and reflection: starts at vertex 1,
        second vertex smaller than the last."""
        if self.tour[1] < self.tour[-1]:
            return self
        return HamiltonianCycle((1,) + self.tour[:0:-1])

    def to_json(self) -> str:
        return json.dumps(list(self.tour))

    @classmethod
    def from_json(cls, text: str) -> "HamiltonianCycle":
        return cls(tuple(json.loads(text)))


@dataclass(frozen=True)
class EdgeColoring:
    """Assignment of 1-based color indices (into a function library) to the
    cycle's edges; adjacent edges never share a color."""

    colors: tuple[int, ...]
    n_colors: int

    def __post_init__(self):
        n = len(self.colors)
        for i in range(n):
            if self.colors[i] == self.colors[(i + 1) % n]:
                raise ValueError(
                    f"adjacent edges {i} and {(i + 1) % n} share color {self.colors[i]}"
                )
        if not all(1 <= c <= self.n_colors for c in self.colors):
            raise ValueError("colors must lie in 1..n_colors")


def enumerate_cycles(n: int) -> list[HamiltonianCycle]:
    """All (n-1)!/2 Hamiltonian cycles of the complete graph on n vertices,
    one canonical representative each.

    Exhaustive over permutations; intended for n <= 10.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise ValueError(f"vertex count must be an integer, got {n!r}")
    if n < 3:
        raise ValueError(f"need at least 3 vertices, got {n}")
    cycles = []
    for perm in permutations(range(2, n + 1)):
        if perm[0] < perm[-1]:  # drop the reversed duplicate
            cycles.append(HamiltonianCycle((1,) + perm))
    return cycles


def incidence(cycle: HamiltonianCycle) -> np.ndarray:
    """n x n incidence matrix: column i has +1 at edge i's first vertex and
    -1 at its second."""
    n = cycle.n
    h = np.zeros((n, n), dtype=int)
    for i, (src, dst) in enumerate(cycle.edges):
        h[src - 1, i] = 1
        h[dst - 1, i] = -1
    return h


def color_edges(cycle: HamiltonianCycle, mode: str = "minimal") -> EdgeColoring:
    """Proper edge coloring of the cycle.

    ``minimal`` uses 2 colors for even n and 3 for odd n (alternating 1,2
    with a final 3 closing the odd loop). ``universal`` gives edge i color i,
    which stays valid for every cycle of the same n and pairs with the
    n-function library.
    """
    n = cycle.n
    if mode == "minimal":
        if n % 2 == 0:
            colors = tuple(1 if i % 2 == 0 else 2 for i in range(n))
            return EdgeColoring(colors, 2)
        colors = tuple(1 if i % 2 == 0 else 2 for i in range(n - 1)) + (3,)
        return EdgeColoring(colors, 3)
    if mode == "universal":
        return EdgeColoring(tuple(range(1, n + 1)), n)
    raise ValueError(f"unknown coloring mode {mode!r} (expected 'minimal' or 'universal')")
