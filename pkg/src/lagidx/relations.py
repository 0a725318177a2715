"""Lagrangian planes read as self-adjoint linear relations.

A plane L splits into a domain (the first-component projection), an
operator part acting on that domain, and a multivalued part equal to the
orthogonal complement of the domain.  The operator part is stored as an
n x n matrix supported on the domain, so Morse-index counts stay on C^n
with the zero padding made explicit through ``mul_dim``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RankDeficient, ValidationError
from .hermitian import (
    DEFAULT_TOL,
    TolerancePolicy,
    as_hermitian,
    cutoff_for,
    hermitian_part,
    kernel_basis,
    pinv_general,
)
from .planes import LagrangianPlane, plane_from_frame, plane_from_stacked


@dataclass(frozen=True)
class RelationParts:
    """Domain projector, operator part (supported on the domain) and the
    dimension of the multivalued part."""

    dom_projector: np.ndarray
    operator_part: np.ndarray
    mul_dim: int


def decompose(plane: LagrangianPlane, tol: TolerancePolicy = DEFAULT_TOL) -> RelationParts:
    """Split a plane into (domain projector, operator part, mul dimension).

    The domain is the column space of the X block; the operator part is
    P Y X^+ compressed to the domain and symmetrized.
    """
    u, s, _ = np.linalg.svd(plane.x)
    r = int(np.sum(s > cutoff_for(s, tol)))
    ur = u[:, :r]
    p = hermitian_part(ur @ ur.conj().T)
    op = hermitian_part(p @ (plane.y @ pinv_general(plane.x, tol)) @ p)
    return RelationParts(p, op, plane.n - r)


def reconstruct(parts: RelationParts, tol: TolerancePolicy = DEFAULT_TOL) -> LagrangianPlane:
    """Plane {(x, Lx + y) : x in dom, y in mul} rebuilt from its parts."""
    p = as_hermitian(parts.dom_projector, tol, "domain projector")
    w, v = np.linalg.eigh(p)
    if np.any(np.abs(w * (1.0 - w)) > tol.residual_tol):
        raise ValidationError("dom_projector is not a projector")
    u_mul = v[:, w < 0.5]
    u_dom = v[:, w >= 0.5]
    if u_mul.shape[1] != parts.mul_dim:
        raise ValidationError("mul_dim does not match the projector rank")
    n = p.shape[0]
    x = np.hstack([u_dom, np.zeros((n, parts.mul_dim))])
    y = np.hstack([parts.operator_part @ u_dom, u_mul])
    return plane_from_frame(x, y, tol)


def difference(l: LagrangianPlane, m: LagrangianPlane, tol: TolerancePolicy = DEFAULT_TOL) -> LagrangianPlane:
    """The relation difference {(u, vL - vM)} of two planes.

    Pairs (s, t) with X_L s = X_M t form the kernel of [X_L, -X_M]; each
    pair maps to the vector (X_L s, Y_L s - Y_M t), and the span of those
    images is the difference plane.
    """
    if l.n != m.n:
        raise ValidationError("planes live in different dimensions")
    n = l.n
    pairs = kernel_basis(np.hstack([l.x, -m.x]), tol)
    s_part, t_part = pairs[:n], pairs[n:]
    vecs = np.vstack([l.x @ s_part, l.y @ s_part - m.y @ t_part])
    u, sv, _ = np.linalg.svd(vecs, full_matrices=False)
    r = int(np.sum(sv > cutoff_for(sv, tol)))
    if r != n:
        raise RankDeficient(f"difference span has rank {r}, expected {n}")
    return plane_from_stacked(u[:, :n], tol)


def inverse(plane: LagrangianPlane) -> LagrangianPlane:
    """The relation inverse {(v, u) : (u, v) in L}: swap the frame blocks."""
    return LagrangianPlane(plane.y.copy(), plane.x.copy())


def compress(a, p, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Compression P A P of a Hermitian matrix to the range of a projector."""
    am = as_hermitian(a, tol, "matrix to compress")
    pm = as_hermitian(p, tol, "projector")
    if np.linalg.norm(pm @ pm - pm) > tol.residual_tol * max(1.0, np.linalg.norm(pm)):
        raise ValidationError("compression requires an orthogonal projector")
    return hermitian_part(pm @ am @ pm)
