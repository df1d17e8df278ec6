"""Block confluent Vandermonde matrices built from binomial blocks.

``binomial_block(n, k, b, h, alpha)`` is the ``(n-k) x (b-h)`` matrix with
entries ``C(i+k-1, j+h-1) * alpha^((i+k)-(j+h))`` (1-based ``i, j``), i.e. the
lower-triangular Pascal-type matrix with the top ``k`` rows and left ``h``
columns removed.
"""

from __future__ import annotations

from math import comb, factorial
from typing import List, Sequence

from polyfiber.exact import GaussianRational, exact_determinant, gr

__all__ = ["binomial_block", "confluent_matrix", "confluent_block_determinant", "confluent_closed_form"]


def binomial_block(n: int, k: int, b: int, h: int, alpha) -> List[List[GaussianRational]]:
    alpha = gr(alpha)
    rows = []
    for i in range(1, n - k + 1):
        row = []
        for j in range(1, b - h + 1):
            top, bottom = i + k - 1, j + h - 1
            c = comb(top, bottom) if bottom <= top else 0
            row.append(alpha ** (top - bottom) * c if c else GaussianRational(0))
        rows.append(row)
    return rows


def confluent_matrix(block_sizes: Sequence[int], alphas: Sequence) -> List[List[GaussianRational]]:
    """Side-by-side blocks ``binomial_block(r+1, 1, r_u+1, 1, alpha_u)``,
    ``r = sum r_u``; a square ``r x r`` matrix."""
    if len(block_sizes) != len(alphas):
        raise ValueError("one alpha per block")
    if any(r < 1 for r in block_sizes):
        raise ValueError("block sizes must be positive")
    r = sum(block_sizes)
    blocks = [binomial_block(r + 1, 1, ru + 1, 1, a) for ru, a in zip(block_sizes, alphas)]
    return [sum((blk[i] for blk in blocks), []) for i in range(r)]


def confluent_block_determinant(block_sizes: Sequence[int], alphas: Sequence) -> GaussianRational:
    """Exact determinant of :func:`confluent_matrix`."""
    return exact_determinant(confluent_matrix(block_sizes, alphas))


def confluent_closed_form(block_sizes: Sequence[int], alphas: Sequence) -> GaussianRational:
    """``r!/(r_1!...r_l!) * prod_{v<u} (alpha_u - alpha_v)^(r_v r_u)``."""
    alphas = [gr(a) for a in alphas]
    coeff = factorial(sum(block_sizes))
    for r in block_sizes:
        coeff //= factorial(r)
    out = GaussianRational(coeff)
    for u in range(len(alphas)):
        for v in range(u):
            out = out * (alphas[u] - alphas[v]) ** (block_sizes[v] * block_sizes[u])
    return out
