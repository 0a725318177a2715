"""The Hermitian symplectic structure on C^n + C^n.

Convention: the inner product is conjugate-linear in the first slot, so
the symplectic form is ``omega(u, v) = u* J v`` with the block matrix
``J = [[0, I], [-I, 0]]``.  A map S is symplectic when ``S* J S = J`` and
anti-symplectic when ``S* J S = -J``.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import ValidationError
from .hermitian import DEFAULT_TOL, TolerancePolicy, random_hermitian


def standard_form(n: int) -> np.ndarray:
    """Matrix J of the symplectic form on C^n + C^n."""
    if n < 1:
        raise ValidationError(f"half-dimension must be at least 1, got {n}")
    j = np.zeros((2 * n, 2 * n), dtype=complex)
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


def omega(u, v) -> complex:
    """Symplectic pairing <x1, y2> - <x2, y1> of two vectors in C^2n."""
    uu = np.asarray(u, dtype=complex).ravel()
    vv = np.asarray(v, dtype=complex).ravel()
    if uu.shape != vv.shape or uu.size % 2:
        raise ValidationError(f"omega needs two vectors of equal even length, got {uu.size} and {vv.size}")
    n = uu.size // 2
    return complex(np.vdot(uu[:n], vv[n:]) - np.vdot(uu[n:], vv[:n]))


def _check_even_square(s) -> tuple[np.ndarray, int]:
    m = np.asarray(s, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ValidationError(f"expected a square even-dimensional matrix, got shape {m.shape}")
    return m, m.shape[0] // 2


def is_symplectic(s, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """True when ||S* J S - J|| <= residual_tol * ||J||."""
    m, n = _check_even_square(s)
    j = standard_form(n)
    return np.linalg.norm(m.conj().T @ j @ m - j) <= tol.residual_tol * np.linalg.norm(j)


def is_antisymplectic(s, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """True when ||S* J S + J|| <= residual_tol * ||J||."""
    m, n = _check_even_square(s)
    j = standard_form(n)
    return np.linalg.norm(m.conj().T @ j @ m + j) <= tol.residual_tol * np.linalg.norm(j)


def random_symplectic(n: int, seed=None) -> np.ndarray:
    """Random symplectic map exp(J H) with H a random Hermitian matrix.

    The property S* J S = J holds exactly for the exponential, so the
    output passes :func:`is_symplectic` up to floating-point error.  H is
    rescaled to spectral norm <= 1.5 to keep the exponential well
    conditioned.
    """
    rng = np.random.default_rng(seed)
    h = random_hermitian(2 * n, rng)
    norm = np.linalg.norm(h, 2)
    if norm > 1.5:
        h *= 1.5 / norm
    return scipy.linalg.expm(standard_form(n) @ h)


def swap_map(n: int) -> np.ndarray:
    """The anti-symplectic involution (x, y) -> (y, x)."""
    s = np.zeros((2 * n, 2 * n), dtype=complex)
    s[:n, n:] = np.eye(n)
    s[n:, :n] = np.eye(n)
    return s


def _embedding_indices(a: int, b: int) -> np.ndarray:
    # Source positions, ordered (x1, y1, x2, y2), of each coordinate of the
    # target ordering (x1 x2, y1 y2).
    idx = np.empty(2 * (a + b), dtype=int)
    idx[0:a] = np.arange(a)
    idx[a:a + b] = 2 * a + np.arange(b)
    idx[a + b:2 * a + b] = a + np.arange(a)
    idx[2 * a + b:] = 2 * a + b + np.arange(b)
    return idx


def direct_sum_maps(s1, s2) -> np.ndarray:
    """Direct sum of maps on C^2a and C^2b as a map on C^2(a+b).

    Uses the fixed index interleaving (x1, x2, y1, y2): the x-block of
    the sum is the concatenation of the two x-blocks, same for y.
    """
    m1, a = _check_even_square(s1)
    m2, b = _check_even_square(s2)
    block = np.zeros((2 * (a + b), 2 * (a + b)), dtype=complex)
    block[:2 * a, :2 * a] = m1
    block[2 * a:, 2 * a:] = m2
    idx = _embedding_indices(a, b)
    return block[np.ix_(idx, idx)]
