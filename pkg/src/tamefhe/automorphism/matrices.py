"""Small sparse unimodular integer matrices and affine automorphisms.

Matrices are tuples of row tuples of Python ints.  Every generator returns the
matrix together with its exact inverse, so callers never need to invert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from ..intmath import iroot
from ..poly import PolyMap
from ..rng import Rng

Matrix = tuple[tuple[int, ...], ...]


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> tuple[int, ...]:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def transpose(a: Sequence[Sequence[int]]) -> Matrix:
    return tuple(zip(*a))


def permutation_matrix(perm: Sequence[int]) -> Matrix:
    """Row ``i`` has its one in column ``perm[i]``."""
    n = len(perm)
    return tuple(tuple(1 if j == perm[i] else 0 for j in range(n)) for i in range(n))


def determinant(a: Sequence[Sequence[int]]) -> int:
    """Fraction-free Bareiss elimination; exact for any integer matrix."""
    m = [list(row) for row in a]
    n = len(m)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def inverse_unimodular(a: Sequence[Sequence[int]]) -> Matrix:
    """Exact inverse of a unimodular matrix; raises if ``|det| != 1``."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [x / pv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    inv = [row[n:] for row in aug]
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


def max_abs(a: Sequence[Sequence[int]]) -> int:
    return max((abs(x) for row in a for x in row), default=0)


def row_support(a: Sequence[Sequence[int]]) -> int:
    """Largest number of nonzero entries in any row."""
    return max((sum(1 for x in row if x) for row in a), default=0)


def inf_norm(a: Sequence[Sequence[int]]) -> int:
    """Largest absolute row sum."""
    return max((sum(abs(x) for x in row) for row in a), default=0)


@dataclass(frozen=True)
class UnimodularMatrix:
    matrix: Matrix
    inverse: Matrix

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def determinant(self) -> int:
        return determinant(self.matrix)


# -- 2x2 blocks ----------------------------------------------------------------

def bezout_min(x11: int, x12: int, delta: int) -> tuple[int, int]:
    """Solve ``x11*y - x12*x = delta`` for ``(x, y)`` of minimal max-abs size.

    Ties go to the solution with non-negative ``y``, then to smaller
    ``|x| + |y|``.
    """
    if math.gcd(x11, x12) != 1:
        raise ValueError(f"{x11} and {x12} are not coprime")
    # extended Euclid on |x11|, |x12|
    old_r, r = abs(x11), abs(x12)
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    # old_s*|x11| + old_t*|x12| = 1
    s0 = old_s * (1 if x11 >= 0 else -1)
    t0 = old_t * (1 if x12 >= 0 else -1)
    y0, x0 = delta * s0, -delta * t0
    # solutions: y = y0 + k*x12, x = x0 + k*x11
    centres = []
    if x12:
        centres.append(Fraction(-y0, x12))
    if x11:
        centres.append(Fraction(-x0, x11))
    candidates = set()
    for c in centres:
        base = math.floor(c)
        candidates.update(range(base - 2, base + 3))

    def rank(k):
        y, x = y0 + k * x12, x0 + k * x11
        return (max(abs(x), abs(y)), y < 0, abs(x) + abs(y), k)

    k = min(candidates, key=rank)
    return x0 + k * x11, y0 + k * x12


def unimodular_2x2_from(x11: int, x12: int, delta: int) -> UnimodularMatrix:
    """Complete the first row ``(x11, x12)`` to a matrix of determinant ``delta``."""
    x, y = bezout_min(x11, x12, delta)
    m = ((x11, x12), (x, y))
    inv = ((delta * y, -delta * x12), (-delta * x, delta * x11))
    return UnimodularMatrix(m, inv)


def gen_unimodular_2x2(beta: int, delta: int, rng: Rng, *, full_support: bool = False) -> UnimodularMatrix:
    """Random 2x2 matrix with determinant ``delta`` and entries bounded by ``beta``.

    With ``full_support`` all four entries are nonzero; that needs ``beta >= 2``.
    """
    if beta < 1:
        raise ValueError("beta must be >= 1")
    if delta not in (1, -1):
        raise ValueError("delta must be +1 or -1")
    if full_support and beta < 2:
        raise ValueError("no full-support unimodular 2x2 matrix has entries in [-1, 1]")
    while True:
        x11, x12 = rng.randint(-beta, beta), rng.randint(-beta, beta)
        if math.gcd(x11, x12) != 1:
            continue
        block = unimodular_2x2_from(x11, x12, delta)
        if full_support and any(v == 0 for row in block.matrix for v in row):
            continue
        assert max_abs(block.matrix) <= beta
        return block


# -- n x n --------------------------------------------------------------------

def block_diagonal(blocks: Sequence[UnimodularMatrix], signs: Sequence[int]) -> UnimodularMatrix:
    """Blocks first along the diagonal, then the 1x1 entries ``signs``."""
    n = 2 * len(blocks) + len(signs)
    m = [[0] * n for _ in range(n)]
    inv = [[0] * n for _ in range(n)]
    pos = 0
    for b in blocks:
        for i in range(2):
            for j in range(2):
                m[pos + i][pos + j] = b.matrix[i][j]
                inv[pos + i][pos + j] = b.inverse[i][j]
        pos += 2
    for s in signs:
        m[pos][pos] = inv[pos][pos] = s
        pos += 1
    return UnimodularMatrix(tuple(map(tuple, m)), tuple(map(tuple, inv)))


def gen_block_diagonal(n: int, alpha: int, beta: int, rng: Rng) -> UnimodularMatrix:
    """``alpha`` random 2x2 unimodular blocks plus ``n - 2*alpha`` entries ``±1``.

    Blocks are full-support when ``beta >= 2`` so that m̄ = 1 + 2α/n exactly.
    Repeated blocks are redrawn a bounded number of times.
    """
    if alpha < 0 or 2 * alpha > n:
        raise ValueError(f"need 0 <= 2*alpha <= n, got alpha={alpha}, n={n}")
    blocks: list[UnimodularMatrix] = []
    for _ in range(alpha):
        delta = rng.sign()
        for _attempt in range(32):
            b = gen_unimodular_2x2(beta, delta, rng, full_support=beta >= 2)
            if all(b.matrix != other.matrix for other in blocks):
                break
        blocks.append(b)
    signs = [rng.sign() for _ in range(n - 2 * alpha)]
    return block_diagonal(blocks, signs)


def _draw_alpha(n: int, mu_bar: Fraction, rng: Rng) -> int:
    # binomial on [0, n//2] with mean n(μ̄-1)/2, clipped when that mean is unreachable
    slots = n // 2
    if slots == 0:
        return 0
    p = Fraction(n) * (Fraction(mu_bar) - 1) / (2 * slots)
    return sum(rng.bernoulli(p) for _ in range(slots))


def _permuted(delta: UnimodularMatrix, rng: Rng) -> UnimodularMatrix:
    n = delta.n
    p1 = permutation_matrix(rng.permutation(n))
    p2 = permutation_matrix(rng.permutation(n))
    m = matmul(matmul(p1, delta.matrix), p2)
    inv = matmul(matmul(transpose(p2), delta.inverse), transpose(p1))
    return UnimodularMatrix(m, inv)


def gen_unimodular_n(n: int, beta: int, mu_bar, rng: Rng) -> UnimodularMatrix:
    """``P1 Δ P2`` with random permutations and a random block-diagonal Δ."""
    mu_bar = Fraction(mu_bar)
    if not 1 < mu_bar < 2:
        raise ValueError(f"mu_bar must lie in (1, 2), got {mu_bar}")
    if beta < 1:
        raise ValueError("beta must be >= 1")
    alpha = _draw_alpha(n, mu_bar, rng)
    return _permuted(gen_block_diagonal(n, alpha, beta, rng), rng)


# -- affine maps ----------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    """``x -> M x + c`` with ``M`` unimodular; the inverse is ``y -> M⁻¹(y - c)``."""

    matrix: Matrix
    inverse_matrix: Matrix
    offset: tuple[int, ...]

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]], offset: Sequence[int] | None = None) -> AffineMap:
        matrix = tuple(tuple(int(x) for x in row) for row in matrix)
        offset = tuple(offset) if offset is not None else (0,) * len(matrix)
        return cls(matrix, inverse_unimodular(matrix), offset)

    @property
    def n(self) -> int:
        return len(self.matrix)

    @property
    def determinant(self) -> int:
        return determinant(self.matrix)

    @property
    def inverse_offset(self) -> tuple[int, ...]:
        return tuple(-v for v in matvec(self.inverse_matrix, self.offset))

    @property
    def forward(self) -> PolyMap:
        return PolyMap.linear(self.matrix, self.offset)

    @property
    def inverse(self) -> PolyMap:
        return PolyMap.linear(self.inverse_matrix, self.inverse_offset)


def _factor_count(beta: int, row_budget: int) -> int:
    if row_budget < 2:
        return 0
    nu = row_budget.bit_length() - 1  # floor(log2)
    # with unit-size factors the product can still reach 2^(ν-1)
    return min(nu, beta.bit_length())


def gen_affine(n: int, beta: int, mu: int, mu_bar, rng: Rng, *, offset: bool = True) -> AffineMap:
    """Sparse small affine automorphism with ``|A|, |A⁻¹| <= beta`` and ``m(A) <= mu``.

    The linear part is a product of ``ν = floor(log2 μ')`` permuted
    block-diagonal factors, where ``μ'`` is ``mu`` minus one slot reserved for
    the translation when ``offset`` is on.  Each factor gets coefficient bound
    ``floor((beta/mu)^(1/ν))`` (at least 1) and m̄ target ``mu_bar^(1/ν)``.
    With ``ν = 0`` the linear part is a random signed permutation.
    """
    if beta < 1 or mu < 1:
        raise ValueError("beta and mu must be >= 1")
    use_offset = offset and mu >= 2
    row_budget = mu - 1 if use_offset else mu
    nu = _factor_count(beta, row_budget)
    mu_bar = Fraction(mu_bar)
    if nu == 0:
        m = _permuted(gen_block_diagonal(n, 0, 1, rng), rng)
    else:
        beta_f = max(1, iroot(beta // mu, nu))
        assert 2 ** (nu - 1) * beta_f**nu <= beta
        mbar_f = Fraction(float(mu_bar) ** (1 / nu)).limit_denominator(1000) if mu_bar > 1 else Fraction(1)
        m = UnimodularMatrix(identity(n), identity(n))
        for _ in range(nu):
            alpha = _draw_alpha(n, min(mbar_f, Fraction(2)), rng)
            f = _permuted(gen_block_diagonal(n, alpha, beta_f, rng), rng)
            m = UnimodularMatrix(matmul(m.matrix, f.matrix), matmul(f.inverse, m.inverse))
    c = (0,) * n
    if use_offset:
        bound = beta // max(1, inf_norm(m.inverse))
        c = tuple(rng.randint(-bound, bound) for _ in range(n))
    return AffineMap(m.matrix, m.inverse, c)

