"""Exact integer helpers shared by the generators and the bound checks."""

from __future__ import annotations


def iroot(x: int, k: int) -> int:
    """``floor(x ** (1/k))`` for ``x >= 0``, exact at any size (Newton)."""
    if x < 0 or k < 1:
        raise ValueError("iroot needs x >= 0 and k >= 1")
    if x < 2 or k == 1:
        return x
    r = 1 << (x.bit_length() // k + 1)  # overestimate
    while True:
        nxt = ((k - 1) * r + x // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def ceil_log2(x: int) -> int:
    """Smallest ``e`` with ``2**e >= x`` for ``x >= 1``."""
    if x < 1:
        raise ValueError("ceil_log2 needs x >= 1")
    return (x - 1).bit_length()
