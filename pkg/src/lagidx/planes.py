"""Lagrangian planes as canonicalized frames.

A plane is stored through a frame (X; Y), a 2n x n injective matrix whose
columns span the subspace; the plane is Lagrangian exactly when X*Y is
Hermitian.  Construction orthonormalizes the stacked frame, and all later
queries (intersection dimension, Robin maps, pairings) run on the
canonical frame so that frame-dependent quantities are well defined.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DualBasisFailure,
    NotInjective,
    NotLagrangian,
    SelectionFailed,
    SingularEpsilon,
    ToleranceBreakdown,
    ValidationError,
)
from .hermitian import (
    DEFAULT_TOL,
    TolerancePolicy,
    as_hermitian,
    cutoff_for,
    hermitian_part,
    inertia,
    kernel_basis,
    random_hermitian,
)
from .symplectic import random_symplectic, standard_form, swap_map


class LagrangianPlane:
    """An n-dimensional Lagrangian subspace of C^n + C^n.

    Instances hold a canonical frame: the stacked 2n x n matrix (X; Y)
    with orthonormal columns.  Use :func:`plane_from_frame` or the graph
    constructors instead of instantiating directly.
    """

    __slots__ = ("n", "x", "y")

    def __init__(self, x: np.ndarray, y: np.ndarray):
        self.x = x
        self.y = y
        self.n = x.shape[0]

    @property
    def stacked(self) -> np.ndarray:
        """The 2n x n canonical frame."""
        return np.vstack([self.x, self.y])

    def __repr__(self):  # pragma: no cover
        return f"LagrangianPlane(n={self.n})"


@dataclass(frozen=True)
class RobinMap:
    """Hermitian matrix Y (X + eps Y)^-1 of a plane at a given epsilon."""

    epsilon: float
    matrix: np.ndarray


def validate_frame(x, y, tol: TolerancePolicy = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Check the frame invariants; return the validated (X, Y) pair.

    Raises NotInjective when the stacked matrix is rank deficient and
    NotLagrangian when X*Y - Y*X is too large.
    """
    xm = np.asarray(x, dtype=complex)
    ym = np.asarray(y, dtype=complex)
    if xm.ndim != 2 or xm.shape != ym.shape or xm.shape[0] != xm.shape[1]:
        raise ValidationError(f"frame blocks must be square and matching, got {xm.shape} and {ym.shape}")
    if xm.shape[0] < 1:
        raise ValidationError("frames need dimension at least 1")
    z = np.vstack([xm, ym])
    if not np.all(np.isfinite(z.view(float))):
        raise ValidationError("frame contains non-finite entries")
    s = np.linalg.svd(z, compute_uv=False)
    if int(np.sum(s > cutoff_for(s, tol))) < xm.shape[1]:
        raise NotInjective("frame columns are numerically dependent")
    lag = xm.conj().T @ ym - ym.conj().T @ xm
    bound = tol.residual_tol * (np.linalg.norm(xm) * np.linalg.norm(ym) + 1.0)
    if np.linalg.norm(lag) > bound:
        raise NotLagrangian(f"Lagrangian residual {np.linalg.norm(lag):.3e} exceeds {bound:.3e}")
    return xm, ym


def plane_from_frame(x, y, tol: TolerancePolicy = DEFAULT_TOL) -> LagrangianPlane:
    """Validate a frame and return the spanned plane in canonical form."""
    xm, ym = validate_frame(x, y, tol)
    q, _ = np.linalg.qr(np.vstack([xm, ym]))
    n = xm.shape[0]
    return LagrangianPlane(q[:n], q[n:])


def plane_from_stacked(z, tol: TolerancePolicy = DEFAULT_TOL) -> LagrangianPlane:
    """Plane from a stacked 2n x n frame."""
    zm = np.asarray(z, dtype=complex)
    if zm.ndim != 2 or zm.shape[0] != 2 * zm.shape[1]:
        raise ValidationError(f"stacked frame must be 2n x n, got {zm.shape}")
    n = zm.shape[1]
    return plane_from_frame(zm[:n], zm[n:], tol)


def graph_plane(a, tol: TolerancePolicy = DEFAULT_TOL) -> LagrangianPlane:
    """Graph {(x, Ax)} of a Hermitian matrix."""
    am = as_hermitian(a, tol, "graph matrix")
    return plane_from_frame(np.eye(am.shape[0]), am, tol)


def horizontal_plane(n: int) -> LagrangianPlane:
    """The plane C^n + 0, the graph of the zero matrix."""
    if n < 1:
        raise ValidationError("dimension must be at least 1")
    return LagrangianPlane(np.eye(n, dtype=complex), np.zeros((n, n), dtype=complex))


def vertical_plane(n: int) -> LagrangianPlane:
    """The plane 0 + C^n (not a graph)."""
    if n < 1:
        raise ValidationError("dimension must be at least 1")
    return LagrangianPlane(np.zeros((n, n), dtype=complex), np.eye(n, dtype=complex))


def pairing_matrix(l1: LagrangianPlane, l2: LagrangianPlane) -> np.ndarray:
    """The n x n pairing X1*Y2 - Y1*X2 whose kernel represents L1 ∩ L2."""
    if l1.n != l2.n:
        raise ValidationError("planes live in different dimensions")
    return l1.x.conj().T @ l2.y - l1.y.conj().T @ l2.x


def intersection_dim(l1: LagrangianPlane, l2: LagrangianPlane, tol: TolerancePolicy = DEFAULT_TOL) -> int:
    """dim(L1 ∩ L2), computed as the nullity of the frame pairing."""
    s = np.linalg.svd(pairing_matrix(l1, l2), compute_uv=False)
    return l1.n - int(np.sum(s > cutoff_for(s, tol)))


def planes_equal(l1: LagrangianPlane, l2: LagrangianPlane, tol: TolerancePolicy = DEFAULT_TOL) -> bool:
    """Two planes are equal exactly when they intersect in full dimension."""
    return intersection_dim(l1, l2, tol) == l1.n


def principal_angles(l1: LagrangianPlane, l2: LagrangianPlane) -> np.ndarray:
    """Principal angles between the two subspaces of C^2n.

    Computed through the sines (singular values of the projection onto
    the orthogonal complement), which stays accurate for tiny angles.
    """
    z1, z2 = l1.stacked, l2.stacked
    s = np.linalg.svd(z2 - z1 @ (z1.conj().T @ z2), compute_uv=False)
    return np.arcsin(np.clip(s, 0.0, 1.0))


def intersection_basis(l1: LagrangianPlane, l2: LagrangianPlane, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal basis of L1 ∩ L2 as columns in C^2n."""
    z1, z2 = l1.stacked, l2.stacked
    pairs = kernel_basis(np.hstack([z1, -z2]), tol)
    if pairs.shape[1] == 0:
        return np.zeros((2 * l1.n, 0), dtype=complex)
    vecs = z1 @ pairs[: l1.n]
    u, s, _ = np.linalg.svd(vecs, full_matrices=False)
    k = int(np.sum(s > cutoff_for(s, tol)))
    expected = intersection_dim(l1, l2, tol)
    if k != expected:
        raise ToleranceBreakdown(f"intersection basis rank {k} does not match dimension {expected}")
    return u[:, :k]


def apply_symplectic(s, plane: LagrangianPlane, tol: TolerancePolicy = DEFAULT_TOL) -> LagrangianPlane:
    """Image of a plane under a (anti)symplectic matrix, re-canonicalized."""
    sm = np.asarray(s, dtype=complex)
    if sm.shape != (2 * plane.n, 2 * plane.n):
        raise ValidationError(f"map shape {sm.shape} does not match plane dimension {plane.n}")
    return plane_from_stacked(sm @ plane.stacked, tol)


def _condition_number(m: np.ndarray) -> float:
    s = np.linalg.svd(m, compute_uv=False)
    if s[-1] <= 0.0:
        return np.inf
    return float(s[0] / s[-1])


def epsilon_select(planes, tol: TolerancePolicy = DEFAULT_TOL, seed=None,
                   max_candidates: int = 128, avoid: tuple[float, ...] = ()) -> float:
    """Pick a positive epsilon at which every plane has a well-conditioned
    X + eps Y.

    The schedule tries eps in {1, 1/2, 1/3, ...}, each scaled by a seeded
    jitter in [0.9, 1.1]; the set of bad epsilon values is finite, so the
    schedule succeeds generically.  Candidates closer than 1e-9 to any
    value in ``avoid`` are skipped (used for independent double checks).
    """
    planes = list(planes)
    if not planes:
        raise ValidationError("epsilon_select needs at least one plane")
    rng = np.random.default_rng(seed)
    jitter = rng.uniform(0.9, 1.1, size=max_candidates)
    bound = 1.0 / tol.rank_rel_tol
    for k in range(1, max_candidates + 1):
        eps = jitter[k - 1] / k
        if any(abs(eps - a) < 1e-9 for a in avoid):
            continue
        if all(_condition_number(p.x + eps * p.y) <= bound for p in planes):
            return float(eps)
    raise SelectionFailed(f"no usable epsilon among {max_candidates} candidates")


def epsilon_small(planes, tol: TolerancePolicy = DEFAULT_TOL, max_halvings: int = 60) -> float:
    """Epsilon in the small positive regime: shrinks geometrically until
    eps^-1 I - R^eps is positive semidefinite for every given plane."""
    planes = list(planes)
    if not planes:
        raise ValidationError("epsilon_small needs at least one plane")
    eps = 0.5
    for _ in range(max_halvings):
        try:
            ok = all(
                inertia(np.eye(p.n) / eps - robin_map(p, eps, tol).matrix, tol).n_minus == 0
                for p in planes
            )
        except SingularEpsilon:
            ok = False
        if ok:
            return eps
        eps /= 2.0
    raise SelectionFailed("no small epsilon reached the positive regime")


def robin_map(plane: LagrangianPlane, epsilon: float, tol: TolerancePolicy = DEFAULT_TOL) -> RobinMap:
    """Robin map R = Y (X + eps Y)^-1 of the canonical frame.

    Hermitian for real eps outside a finite exceptional set; the result is
    symmetrized after an asymmetry check, and ill-conditioned X + eps Y
    raises SingularEpsilon.
    """
    t = plane.x + epsilon * plane.y
    if _condition_number(t) > 1.0 / tol.rank_rel_tol:
        raise SingularEpsilon(f"cond(X + {epsilon} Y) exceeds 1/rank_rel_tol")
    r = plane.y @ np.linalg.inv(t)
    asym = np.linalg.norm(r - r.conj().T)
    if asym > np.sqrt(tol.residual_tol) * max(1.0, np.linalg.norm(r)):
        raise SingularEpsilon(f"Robin map asymmetry {asym:.3e} signals a bad epsilon")
    return RobinMap(float(epsilon), hermitian_part(r))


def random_plane(n: int, seed=None, tol: TolerancePolicy = DEFAULT_TOL) -> LagrangianPlane:
    """Random Lagrangian plane: a random symplectic image of the horizontal
    plane, post-composed with the swap involution half of the time."""
    rng = np.random.default_rng(seed)
    s = random_symplectic(n, rng)
    z = s[:, :n]
    if rng.random() < 0.5:
        z = swap_map(n) @ z
    return plane_from_stacked(z, tol)


def random_plane_with_mul(n: int, mul_dim: int, seed=None, tol: TolerancePolicy = DEFAULT_TOL) -> LagrangianPlane:
    """Random plane with a multivalued part of prescribed dimension.

    Built from a random orthonormal splitting C^n = D + D^perp and a random
    Hermitian operator on D; mul_dim = dim D^perp by construction.
    """
    if not 0 <= mul_dim <= n:
        raise ValidationError(f"mul_dim must lie in [0, {n}], got {mul_dim}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    u, _ = np.linalg.qr(g)
    u_dom, u_mul = u[:, : n - mul_dim], u[:, n - mul_dim:]
    p = u_dom @ u_dom.conj().T
    op = hermitian_part(p @ random_hermitian(n, rng) @ p)
    x = np.hstack([u_dom, np.zeros((n, mul_dim))])
    y = np.hstack([op @ u_dom, u_mul])
    return plane_from_frame(x, y, tol)


def transversal_companion(planes, tol: TolerancePolicy = DEFAULT_TOL, seed=None,
                          max_attempts: int = 64) -> LagrangianPlane:
    """A plane transversal to every plane in the list (at most 3 expected).

    Samples graphs of random Hermitian matrices, alternating with their
    swapped versions; failure after the attempt budget signals genuinely
    ill-conditioned inputs and raises SelectionFailed.
    """
    planes = list(planes)
    if not planes:
        raise ValidationError("transversal_companion needs at least one plane")
    n = planes[0].n
    rng = np.random.default_rng(seed)
    for attempt in range(max_attempts):
        cand = graph_plane(random_hermitian(n, rng), tol)
        if attempt % 2:
            cand = apply_symplectic(swap_map(n), cand, tol)
        if all(intersection_dim(cand, p, tol) == 0 for p in planes):
            return cand
    raise SelectionFailed(f"no transversal companion found in {max_attempts} attempts")


def transversal_normalization(la: LagrangianPlane, lb: LagrangianPlane,
                              tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Symplectic basis matrix Z with Z(C^n + 0) = La and Z(0 + C^n) = Lb.

    The inverse of Z is the symplectic map sending La to the horizontal
    plane and Lb to the vertical one.  Requires La and Lb transversal; a
    numerically singular pairing raises DualBasisFailure.
    """
    if la.n != lb.n:
        raise ValidationError("planes live in different dimensions")
    n = la.n
    j = standard_form(n)
    a = la.stacked
    b = lb.stacked
    pairing = a.conj().T @ j @ b
    if _condition_number(pairing) > 1.0 / tol.rank_rel_tol:
        raise DualBasisFailure("pairing matrix between the planes is numerically singular")
    z = np.hstack([a, b @ np.linalg.inv(pairing)])
    residual = np.linalg.norm(z.conj().T @ j @ z - j)
    if residual > tol.residual_tol * max(1.0, np.linalg.norm(z) ** 2):
        raise DualBasisFailure(f"symplectic basis residual {residual:.3e} too large")
    return z


def direct_sum_planes(l1: LagrangianPlane, l2: LagrangianPlane,
                      tol: TolerancePolicy = DEFAULT_TOL) -> LagrangianPlane:
    """Direct sum of planes under the fixed block interleaving."""
    x = np.zeros((l1.n + l2.n, l1.n + l2.n), dtype=complex)
    y = np.zeros_like(x)
    x[: l1.n, : l1.n] = l1.x
    x[l1.n:, l1.n:] = l2.x
    y[: l1.n, : l1.n] = l1.y
    y[l1.n:, l1.n:] = l2.y
    return plane_from_frame(x, y, tol)
