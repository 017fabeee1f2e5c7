"""Bitstring and configuration-integer conversions.

A configuration of n atoms is written as an n-character bitstring whose
i-th character is the state of atom i+1 ('1' = Rydberg).  The canonical
integer encoding reads that string as a binary numeral, so atom 1 is the
most significant bit and ascending integers sort bitstrings
lexicographically.  Vertex sets, adjacency masks and basis states all use
this one convention.
"""

from __future__ import annotations

from collections.abc import Iterable


def atom_bit(n: int, v: int) -> int:
    """Mask of atom v (0-based) in an n-atom configuration integer."""
    return 1 << (n - 1 - v)


def bits_to_config(bits: str) -> int:
    return int(bits, 2)


def config_to_bits(config: int, n: int) -> str:
    return format(config, f"0{n}b")


def vertices_to_config(vertices: Iterable[int], n: int) -> int:
    mask = 0
    for v in vertices:
        mask |= atom_bit(n, v)
    return mask


def config_to_vertices(config: int, n: int) -> tuple[int, ...]:
    return tuple(v for v in range(n) if config & atom_bit(n, v))
