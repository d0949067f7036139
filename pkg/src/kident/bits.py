"""Small bitmask helpers shared across the package.

Vertex sets are plain Python ints: bit i set means vertex i is in the set.
Arbitrary-precision ints double as bit vectors for the answer tables, so
Hamming distances reduce to ``(a ^ b).bit_count()``.
"""

from __future__ import annotations

from typing import Iterator


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of set bits in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def full_mask(n: int) -> int:
    return (1 << n) - 1


def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def iter_pairs(n: int) -> Iterator[tuple[int, int]]:
    """All vertex pairs (u, v) with u < v, lexicographic."""
    for u in range(n):
        for v in range(u + 1, n):
            yield u, v


def pair_index(n: int, u: int, v: int) -> int:
    """Rank of pair (u, v), u < v, in lexicographic order."""
    if not (0 <= u < v < n):
        raise ValueError(f"bad pair ({u}, {v}) for n={n}")
    return u * (2 * n - u - 1) // 2 + (v - u - 1)


def pair_from_index(n: int, i: int) -> tuple[int, int]:
    """Inverse of pair_index."""
    if not 0 <= i < pair_count(n):
        raise ValueError(f"pair index {i} out of range for n={n}")
    u = 0
    while i >= n - 1 - u:
        i -= n - 1 - u
        u += 1
    return u, u + 1 + i


def check_vertex_set(n: int, mask: int, name: str = "set") -> None:
    if mask < 0 or mask >> n:
        raise ValueError(f"{name} {mask:#x} has bits outside 0..{n - 1}")
