"""LU factorization with partial pivoting and a deterministic condition estimate."""

from __future__ import annotations

import numpy as np

_COND_ITERATIONS = 5
ILL_CONDITIONED_THRESHOLD = 1e12


class SingularMatrixError(Exception):
    pass


def lu_factor(a: np.ndarray) -> tuple[np.ndarray, list[int], int]:
    """In-place Doolittle LU with partial pivoting.

    Returns (packed LU, pivot rows, permutation sign).  A zero pivot raises
    SingularMatrixError; callers that only need the determinant catch it.
    """
    lu = np.array(a, dtype=float)
    n = lu.shape[0]
    piv = list(range(n))
    sign = 1
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if p != k:
            lu[[k, p], :] = lu[[p, k], :]
            piv[k], piv[p] = piv[p], piv[k]
            sign = -sign
        pivot = lu[k, k]
        if pivot == 0.0:
            raise SingularMatrixError(f"zero pivot at column {k}")
        for i in range(k + 1, n):
            lu[i, k] /= pivot
            lu[i, k + 1 :] -= lu[i, k] * lu[k, k + 1 :]
    return lu, piv, sign


def lu_determinant(a: np.ndarray) -> float:
    try:
        lu, _piv, sign = lu_factor(a)
    except SingularMatrixError:
        return 0.0
    det = float(sign)
    for k in range(lu.shape[0]):
        det *= float(lu[k, k])
    return det


def lu_solve(lu: np.ndarray, piv: list[int], b: np.ndarray) -> np.ndarray:
    n = lu.shape[0]
    x = np.array([b[p] for p in piv], dtype=float)
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1 :] @ x[i + 1 :]) / lu[i, i]
    return x


def lu_solve_transpose(lu: np.ndarray, piv: list[int], b: np.ndarray) -> np.ndarray:
    # A = P^T L U  =>  A^T x = b  solves  U^T y = b, L^T z = y, x = P^T z
    n = lu.shape[0]
    y = np.array(b, dtype=float)
    for i in range(n):
        y[i] = (y[i] - lu[:i, i] @ y[:i]) / lu[i, i]
    for i in range(n - 1, -1, -1):
        y[i] -= lu[i + 1 :, i] @ y[i + 1 :]
    x = np.zeros(n)
    for i, p in enumerate(piv):
        x[p] = y[i]
    return x


def condition_estimate_1norm(a: np.ndarray, lu: np.ndarray, piv: list[int]) -> float:
    """1-norm condition estimate via a fixed-iteration Hager-style power scheme."""
    n = a.shape[0]
    anorm = float(np.max(np.abs(a).sum(axis=0))) if n else 0.0
    x = np.full(n, 1.0 / n)
    gamma = 0.0
    for _ in range(_COND_ITERATIONS):
        y = lu_solve(lu, piv, x)
        gamma = max(gamma, float(np.abs(y).sum()))
        xi = np.where(y >= 0.0, 1.0, -1.0)
        z = lu_solve_transpose(lu, piv, xi)
        j = int(np.argmax(np.abs(z)))
        x = np.zeros(n)
        x[j] = 1.0
    return max(1.0, gamma * anorm)
