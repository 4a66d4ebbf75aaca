"""Seedable, splittable deterministic randomness.

Every generator is identified by a root seed plus a path of labels.  Splitting
derives a child whose stream depends only on ``(seed, path + (label,))``, so
independent consumers never perturb each other's draws.
"""

from __future__ import annotations

import hashlib
import random
from fractions import Fraction
from typing import MutableSequence, Sequence, TypeVar

T = TypeVar("T")


class Rng:
    def __init__(self, seed: int, path: tuple[str, ...] = ()):
        self.seed = int(seed)
        self.path = tuple(path)
        digest = hashlib.sha256(repr((self.seed, self.path)).encode()).digest()
        self._random = random.Random(int.from_bytes(digest, "big"))

    def split(self, label) -> Rng:
        return Rng(self.seed, self.path + (str(label),))

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in ``[lo, hi]``; arbitrary precision."""
        return self._random.randint(lo, hi)

    def randrange(self, n: int) -> int:
        return self._random.randrange(n)

    def choice(self, seq: Sequence[T]) -> T:
        return seq[self._random.randrange(len(seq))]

    def shuffle(self, seq: MutableSequence) -> None:
        self._random.shuffle(seq)

    def permutation(self, n: int) -> list[int]:
        perm = list(range(n))
        self._random.shuffle(perm)
        return perm

    def sign(self) -> int:
        return 1 if self._random.randrange(2) else -1

    def bernoulli(self, p: Fraction) -> bool:
        p = Fraction(p)
        if p <= 0:
            return False
        if p >= 1:
            return True
        return self._random.randrange(p.denominator) < p.numerator

    def __repr__(self) -> str:
        return f"Rng(seed={self.seed}, path={'/'.join(self.path) or '-'})"
