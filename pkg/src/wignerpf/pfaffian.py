"""Pfaffians of skew-symmetric matrices, plus a polynomial-definition oracle.

Two independent O(n^3) routes are provided for skew input — unitary
Householder tridiagonalization and a Parlett–Reid LTL^T elimination with
partial pivoting — together with :func:`pf_polynomial`, a brute-force sum
over perfect matchings that accepts arbitrary square matrices and serves as
the ground-truth oracle in the tests.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .linalg import as_square_matrix

#: ||A + A^T|| <= SKEW_RTOL * (1 + ||A||) is required of skew input.
SKEW_RTOL = 1e-12

#: pf_polynomial refuses matrices larger than this (the matching count is
#: (dim - 1)!! and grows too fast to be useful as an oracle beyond it).
MAX_POLYNOMIAL_DIM = 12

#: A Parlett-Reid pivot below PIVOT_RTOL * ||A|| declares the matrix singular.
PIVOT_RTOL = 1e-13


def as_skew_matrix(a) -> np.ndarray:
    """Validate ``a`` as skew-symmetric (A = -A^T) within :data:`SKEW_RTOL`."""
    m = as_square_matrix(a)
    defect = float(np.linalg.norm(m + m.T))
    if defect > SKEW_RTOL * (1.0 + float(np.linalg.norm(m))):
        raise InputError(
            f"matrix is not skew-symmetric: ||A + A^T|| = {defect:.3e}"
        )
    return m


def _householder(x: np.ndarray) -> tuple[np.ndarray, float, complex]:
    """Unitary reflection data for a column vector.

    Returns ``(v, tau, alpha)`` such that ``(1 - tau v v^H) x = alpha e_1``
    with ``||v|| = 1``.  ``tau == 0`` means x needs no reflection.
    """
    norm_x = np.linalg.norm(x)
    if norm_x == 0.0 or np.linalg.norm(x[1:]) == 0.0:
        return np.zeros_like(x), 0.0, complex(x[0])
    phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0 + 0j
    alpha = phase * norm_x
    v = x.copy()
    v[0] += alpha
    v /= np.linalg.norm(v)
    return v, 2.0, complex(-alpha)


def pf_skew_householder(a) -> complex:
    """Pfaffian of a skew-symmetric matrix via Householder tridiagonalization.

    The matrix is reduced to skew tridiagonal form T by a sequence of unitary
    congruences P A P^T; the Pfaffian is the product of the even-position
    superdiagonal entries of T times the accumulated determinant of the
    transformations (each reflection contributes ``1 - tau``).
    Odd-dimensional input returns 0.
    """
    m = as_skew_matrix(a).copy()
    n = m.shape[0]
    if n % 2:
        return 0j
    pf = 1.0 + 0j
    for i in range(n - 2):
        v, tau, alpha = _householder(m[i + 1:, i])
        m[i + 1, i] = alpha
        m[i, i + 1] = -alpha
        m[i + 2:, i] = 0.0
        m[i, i + 2:] = 0.0
        if tau:
            # congruence of the trailing block: B <- B + v w^T - w v^T
            # with w = tau * B conj(v) (the v v^H ... v* v^T cross term
            # vanishes because conj(v)^T B conj(v) = 0 for skew B)
            block = m[i + 1:, i + 1:]
            w = tau * (block @ v.conj())
            block += np.outer(v, w) - np.outer(w, v)
            pf *= 1.0 - tau  # det of the reflection
        if i % 2 == 0:
            pf *= -alpha  # tridiagonal entry T[i, i+1]
    pf *= m[n - 2, n - 1]
    return complex(pf)


def pf_skew_parlett_reid(a) -> complex:
    """Pfaffian of a skew-symmetric matrix via Parlett-Reid elimination.

    Computes an L T L^T factorization with partial pivoting (the pivot is the
    largest entry in the working column; each row/column interchange flips
    the sign).  A pivot smaller than ``PIVOT_RTOL * ||A||`` declares the
    matrix numerically singular and returns 0 exactly.  Odd-dimensional
    input returns 0.
    """
    m = as_skew_matrix(a).copy()
    n = m.shape[0]
    if n % 2:
        return 0j
    floor = PIVOT_RTOL * float(np.linalg.norm(m))
    pf = 1.0 + 0j
    for k in range(0, n - 1, 2):
        kp = k + 1 + int(np.argmax(np.abs(m[k + 1:, k])))
        if abs(m[kp, k]) <= floor:
            return 0j
        if kp != k + 1:
            m[[k + 1, kp], :] = m[[kp, k + 1], :]
            m[:, [k + 1, kp]] = m[:, [kp, k + 1]]
            pf = -pf
        pf *= m[k, k + 1]
        if k + 2 < n:
            gauss = m[k, k + 2:] / m[k, k + 1]
            col = m[k + 2:, k + 1]
            m[k + 2:, k + 2:] += np.outer(gauss, col) - np.outer(col, gauss)
    return complex(pf)


def pf_polynomial(a) -> complex:
    """Pfaffian of an arbitrary square matrix from its polynomial definition.

    Evaluates ``(1 / (2^n n!)) sum_pi sgn(pi) prod_i a[pi(2i-1), pi(2i)]``
    over all permutations of 2n indices, collapsed exactly to a sum over the
    (2n-1)!! perfect matchings: for a matched pair (i, j) the two orders of
    the pair are the only difference between permutations mapped to the same
    matching, which yields a factor ``(a[i, j] - a[j, i]) / 2`` per pair.
    The collapse is a combinatorial identity, so this equals the permutation
    sum exactly while staying computable.

    Odd-dimensional input returns 0 (no perfect matchings).  Input larger
    than :data:`MAX_POLYNOMIAL_DIM` is refused.
    """
    m = as_square_matrix(a)
    n = m.shape[0]
    if n % 2:
        return 0j
    if n > MAX_POLYNOMIAL_DIM:
        raise InputError(
            f"polynomial pfaffian limited to dimension {MAX_POLYNOMIAL_DIM}, got {n}"
        )
    half = (m - m.T) / 2.0

    def matchings(indices: tuple[int, ...]) -> complex:
        # pair the smallest free index with every other free index; crossing
        # pos-1 remaining indices contributes sign (-1)**(pos-1)
        if not indices:
            return 1.0 + 0j
        first = indices[0]
        total = 0j
        for pos in range(1, len(indices)):
            rest = indices[1:pos] + indices[pos + 1:]
            term = half[first, indices[pos]] * matchings(rest)
            total += -term if pos % 2 == 0 else term
        return total

    return complex(matchings(tuple(range(n))))
