"""Independent-set combinatorics on the blockade graph.

Counts independent sets exactly by size (the independence polynomial),
identifies all maximum independent sets, and evaluates the hardness
parameter R_(m-1) / (m * R_m) where m is the MIS size.  Counting is an
exhaustive branch-and-bound on vertex bitmasks: split connected
components, branch on a maximum-degree vertex, memoize subproblems.
"""

from __future__ import annotations

from dataclasses import dataclass

from .configs import atom_bit, bits_to_config, config_to_bits, config_to_vertices
from .errors import ResourceLimitError
from .geometry import BlockadeGraph

DEFAULT_NODE_BUDGET = 10**9
DEFAULT_MIS_CAP = 10**6


@dataclass(frozen=True)
class ISetStats:
    """Exact independent-set census of a graph.

    r maps set size k to the count R_k (every k from 0 to mis_size is
    present).  mis_sets holds all maximum independent sets as sorted
    0-based index tuples, or None when their number exceeds the retention
    cap.  hp is the hardness parameter.
    """

    r: dict[int, int]
    mis_size: int
    mis_sets: tuple[tuple[int, ...], ...] | None
    hp: float
    nodes_visited: int


class _PolyCounter:
    """Independence polynomial of induced subgraphs, as count-by-size lists."""

    def __init__(self, adjacency: tuple[int, ...], n: int, budget: int):
        self.adj = adjacency
        self.n = n
        self.budget = budget
        self.nodes = 0
        self._memo: dict[int, list[int]] = {}
        self._vbits = [(v, atom_bit(n, v)) for v in range(n)]

    def poly(self, mask: int) -> list[int]:
        self.nodes += 1
        if self.nodes > self.budget:
            raise ResourceLimitError(
                f"independent-set search exceeded node budget {self.budget}"
            )
        if mask == 0:
            return [1]
        cached = self._memo.get(mask)
        if cached is not None:
            return cached

        comp = self._component(mask)
        if comp != mask:
            result = _poly_mul(self.poly(comp), self.poly(mask & ~comp))
        else:
            v, vbit = self._max_degree_vertex(mask)
            without_v = self.poly(mask & ~vbit)
            with_v = self.poly(mask & ~(self.adj[v] | vbit))
            result = _poly_add_shifted(without_v, with_v)

        if len(self._memo) < 2_000_000:
            self._memo[mask] = result
        return result

    def _component(self, mask: int) -> int:
        seed = mask & -mask
        comp = seed
        frontier = seed
        while frontier:
            grow = 0
            m = frontier
            while m:
                bit = m & -m
                m ^= bit
                # mask bit 1 << b belongs to vertex n - 1 - b
                grow |= self.adj[self.n - bit.bit_length()] & mask
            frontier = grow & ~comp
            comp |= grow & mask
        return comp

    def _max_degree_vertex(self, mask: int) -> tuple[int, int]:
        best_v, best_bit, best_deg = -1, 0, -1
        for v, vbit in self._vbits:
            if mask & vbit:
                deg = (self.adj[v] & mask).bit_count()
                if deg > best_deg:
                    best_v, best_bit, best_deg = v, vbit, deg
        return best_v, best_bit


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return out


def _poly_add_shifted(base: list[int], shifted: list[int]) -> list[int]:
    """base + x * shifted."""
    out = list(base) + [0] * max(0, len(shifted) + 1 - len(base))
    for i, c in enumerate(shifted):
        out[i + 1] += c
    return out


def count_isets(
    g: BlockadeGraph,
    min_size: int = 0,
    node_budget: int = DEFAULT_NODE_BUDGET,
    mis_cap: int = DEFAULT_MIS_CAP,
) -> ISetStats:
    """Exact independent-set counts R_k for all k, MIS list and hardness.

    min_size is accepted for interface compatibility (callers may only
    need the top of the census); the census returned is always complete.
    Raises ResourceLimitError if the search tree exceeds node_budget.
    """
    if min_size > g.n:
        raise ValueError("min_size exceeds vertex count")
    counter = _PolyCounter(g.adjacency, g.n, node_budget)
    full_mask = (1 << g.n) - 1
    coeffs = counter.poly(full_mask)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    mis_size = len(coeffs) - 1
    r = {k: coeffs[k] for k in range(mis_size + 1)}

    if mis_size >= 1:
        hp = r[mis_size - 1] / (mis_size * r[mis_size])
    else:
        hp = 0.0

    mis_sets: tuple[tuple[int, ...], ...] | None = None
    if r[mis_size] <= mis_cap:
        found = _enumerate_isets_of_size(g, mis_size, limit=r[mis_size])
        assert len(found) == r[mis_size]
        mis_sets = tuple(sorted(found))

    return ISetStats(
        r=r,
        mis_size=mis_size,
        mis_sets=mis_sets,
        hp=hp,
        nodes_visited=counter.nodes,
    )


def _enumerate_isets_of_size(
    g: BlockadeGraph, k: int, limit: int
) -> list[tuple[int, ...]]:
    """All independent sets of exactly k vertices (branch with size bound)."""
    n = g.n
    out: list[tuple[int, ...]] = []
    order = sorted(range(n), key=g.degree, reverse=True)

    def rec(idx: int, chosen: list[int], blocked: int) -> None:
        if len(chosen) == k:
            out.append(tuple(sorted(chosen)))
            return
        if len(chosen) + (n - idx) < k:
            return
        for i in range(idx, n):
            v = order[i]
            vbit = atom_bit(n, v)
            if blocked & vbit:
                continue
            if len(chosen) + 1 + (n - i - 1) < k:
                return
            chosen.append(v)
            rec(i + 1, chosen, blocked | vbit | g.adjacency[v])
            chosen.pop()

    if k == 0:
        return [()]
    rec(0, [], 0)
    assert len(out) <= limit
    return out


def classify_bitstring(
    g: BlockadeGraph, bits: str, stats: ISetStats | None = None
) -> dict:
    """Classify one measurement bitstring against the blockade graph.

    bits[v] = '1' means atom v+1 was read out in the Rydberg state.
    Returns {"is_independent", "size", "is_mis", "is_mis_minus_1"}.
    """
    if len(bits) != g.n:
        raise ValueError(f"bitstring length {len(bits)} != atom count {g.n}")
    if set(bits) - {"0", "1"}:
        raise ValueError("bitstring must contain only 0 and 1")
    if stats is None:
        stats = count_isets(g)
    config = bits_to_config(bits)
    size = config.bit_count()
    independent = all(
        not (config & g.adjacency[v]) for v in config_to_vertices(config, g.n)
    )
    return {
        "is_independent": independent,
        "size": size,
        "is_mis": independent and size == stats.mis_size,
        "is_mis_minus_1": independent and size == stats.mis_size - 1,
    }


def mis_projector_support(
    g: BlockadeGraph, stats: ISetStats | None = None
) -> tuple[str, ...]:
    """All MIS configurations as bitstrings, in lexicographic order.

    These span the subspace used for MIS-overlap and MIS-probability
    computations.  Raises ResourceLimitError when the MIS count exceeded
    the retention cap during counting.
    """
    if stats is None:
        stats = count_isets(g)
    if stats.mis_sets is None:
        raise ResourceLimitError(
            "MIS sets were not retained (count exceeds the retention cap)"
        )
    configs = sorted(
        sum(atom_bit(g.n, v) for v in s) if s else 0 for s in stats.mis_sets
    )
    return tuple(config_to_bits(c, g.n) for c in configs)
