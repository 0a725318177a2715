"""Regular paths of Lagrangian planes and their Maslov index.

Endpoint conventions: positive parts of the crossing form are counted for
crossings in [0, 1) and negative parts for crossings in (0, 1].  A
crossing at t = 0 therefore contributes only its positive inertia and a
crossing at t = 1 only minus its negative inertia.  These conventions
make the index additive under concatenation of paths.

Only regular paths are supported: at every crossing the restricted form
must be nondegenerate, otherwise DegenerateCrossing is raised rather than
silently perturbing the data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateCrossing,
    DualBasisFailure,
    NoCrossing,
    UnresolvedCluster,
    ValidationError,
)
from .hermitian import (
    DEFAULT_TOL,
    Inertia,
    TolerancePolicy,
    as_hermitian,
    cutoff_for,
    hermitian_part,
    inertia,
    kernel_basis,
)
from .indices import VerificationRecord, duistermaat_omega
from .planes import (
    LagrangianPlane,
    intersection_basis,
    intersection_dim,
    plane_from_frame,
    random_plane,
    validate_frame,
)
from .symplectic import standard_form

_REFINE_WIDTH = 1e-12
_CLUSTER_WIDTH = 1e-9
_ENDPOINT_TOL = 1e-9


class LinearFramePath:
    """Path with frame (X0 + t X1; Y0 + t Y1) and exact derivative."""

    def __init__(self, x0, x1, y0, y1, kind: str = "linear"):
        self.x0 = np.asarray(x0, dtype=complex)
        self.x1 = np.asarray(x1, dtype=complex)
        self.y0 = np.asarray(y0, dtype=complex)
        self.y1 = np.asarray(y1, dtype=complex)
        self.n = self.x0.shape[0]
        self.kind = kind

    def frame_at(self, t: float):
        return self.x0 + t * self.x1, self.y0 + t * self.y1

    def derivative_at(self, t: float):
        return self.x1, self.y1


class CustomPath:
    """Path from a user-supplied frame function.

    Without an explicit derivative function, central finite differences
    with the given step are used; accuracy is limited accordingly.
    """

    def __init__(self, frame_fn, n: int, derivative_fn=None, fd_step: float = 1e-6,
                 kind: str = "custom"):
        self._frame_fn = frame_fn
        self._derivative_fn = derivative_fn
        self._fd_step = fd_step
        self.n = n
        self.kind = kind

    def frame_at(self, t: float):
        x, y = self._frame_fn(t)
        return np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)

    def derivative_at(self, t: float):
        if self._derivative_fn is not None:
            x, y = self._derivative_fn(t)
            return np.asarray(x, dtype=complex), np.asarray(y, dtype=complex)
        h = self._fd_step
        lo, hi = max(0.0, t - h), min(1.0, t + h)
        xlo, ylo = self.frame_at(lo)
        xhi, yhi = self.frame_at(hi)
        return (xhi - xlo) / (hi - lo), (yhi - ylo) / (hi - lo)


class ReparametrizedPath:
    """Base path traversed along a monotone schedule phi with phi' > 0."""

    def __init__(self, base, phi, dphi):
        self.base = base
        self.phi = phi
        self.dphi = dphi
        self.n = base.n
        self.kind = f"reparametrized({base.kind})"

    def frame_at(self, t: float):
        return self.base.frame_at(self.phi(t))

    def derivative_at(self, t: float):
        xd, yd = self.base.derivative_at(self.phi(t))
        w = self.dphi(t)
        return w * xd, w * yd


def graph_segment(a, b, tol: TolerancePolicy = DEFAULT_TOL) -> LinearFramePath:
    """Straight segment of graphs from A to B: frames (I; A + t(B - A))."""
    am = as_hermitian(a, tol, "segment start")
    bm = as_hermitian(b, tol, "segment end")
    if am.shape != bm.shape:
        raise ValidationError("segment endpoints must share one dimension")
    n = am.shape[0]
    return LinearFramePath(np.eye(n), np.zeros((n, n)), am, bm - am, kind="graph_segment")


def scaled_projector_path(q, tol: TolerancePolicy = DEFAULT_TOL) -> LinearFramePath:
    """Path t -> graph of t Q for an orthogonal projector Q."""
    qm = as_hermitian(q, tol, "projector")
    if np.linalg.norm(qm @ qm - qm) > tol.residual_tol * max(1.0, np.linalg.norm(qm)):
        raise ValidationError("scaled_projector_path needs an orthogonal projector")
    n = qm.shape[0]
    return LinearFramePath(np.eye(n), np.zeros((n, n)), np.zeros((n, n)), qm,
                           kind="scaled_projector")


def custom_path(frame_fn, n: int, derivative_fn=None, fd_step: float = 1e-6) -> CustomPath:
    return CustomPath(frame_fn, n, derivative_fn, fd_step)


def reparametrize(path, phi, dphi) -> ReparametrizedPath:
    """Precompose a path with a smooth increasing bijection of [0, 1]."""
    return ReparametrizedPath(path, phi, dphi)


def validate_path(path, tol: TolerancePolicy = DEFAULT_TOL, samples: int = 16) -> None:
    """Frame validation on a coarse grid; raises on broken frames."""
    for t in np.linspace(0.0, 1.0, samples):
        validate_frame(*path.frame_at(float(t)), tol)


@dataclass(frozen=True)
class Crossing:
    """Parameter value where the path meets the reference plane."""

    t: float
    dim: int
    form_inertia: Inertia


def _pairing_at(path, m: LagrangianPlane, t: float) -> np.ndarray:
    x, y = path.frame_at(t)
    return m.x.conj().T @ y - m.y.conj().T @ x


def _pairing_samples(path, m: LagrangianPlane, ts: np.ndarray) -> np.ndarray:
    """Stack of pairing matrices K(t) over the sample grid."""
    mxh, myh = m.x.conj().T, m.y.conj().T
    if isinstance(path, LinearFramePath):
        k0 = mxh @ path.y0 - myh @ path.x0
        k1 = mxh @ path.y1 - myh @ path.x1
        return k0[None, :, :] + ts[:, None, None] * k1[None, :, :]
    if isinstance(path, ReparametrizedPath):
        mapped = np.array([path.phi(float(t)) for t in ts])
        return _pairing_samples(path.base, m, mapped)
    return np.stack([_pairing_at(path, m, float(t)) for t in ts])


def _golden_minimize(f, lo: float, hi: float, width: float = _REFINE_WIDTH) -> float:
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def crossing_form(path, t0: float, m: LagrangianPlane, tol: TolerancePolicy = DEFAULT_TOL) -> np.ndarray:
    """Crossing form at t0 restricted to the intersection with the
    reference plane, in the moving frame's kernel coordinates.

    Raises NoCrossing when the intersection is trivial at t0.
    """
    if path.n != m.n:
        raise ValidationError("path and reference plane dimensions differ")
    k = _pairing_at(path, m, t0)
    basis = kernel_basis(k, tol)
    if basis.shape[1] == 0:
        raise NoCrossing(f"no intersection with the reference plane at t={t0}")
    x, y = path.frame_at(t0)
    xd, yd = path.derivative_at(t0)
    form = hermitian_part(x.conj().T @ yd - y.conj().T @ xd)
    return hermitian_part(basis.conj().T @ form @ basis)


def find_crossings(path, m: LagrangianPlane, tol: TolerancePolicy = DEFAULT_TOL,
                   grid: int = 2048) -> list[Crossing]:
    """Locate all crossings of a regular path with the reference plane.

    The smallest singular value of the pairing K(t) is sampled on a dense
    grid; every plausible valley is refined by bracketed minimization to
    width 1e-12 and accepted as a crossing when the refined value falls
    under the rank cutoff.  Degenerate restricted forms raise
    DegenerateCrossing; two crossings closer than 1e-9 raise
    UnresolvedCluster instead of being merged.
    """
    if path.n != m.n:
        raise ValidationError("path and reference plane dimensions differ")
    ts = np.linspace(0.0, 1.0, grid)
    stack = _pairing_samples(path, m, ts)
    svals = np.linalg.svd(stack, compute_uv=False)
    sig = svals[:, -1]
    scale = max(1.0, float(svals[:, 0].max()))
    cut = tol.rank_rel_tol * scale
    step = ts[1] - ts[0]
    slope = float(np.max(np.abs(np.diff(sig)))) / step if grid > 1 else 0.0
    trigger = max(2.0 * slope * step, 64.0 * cut)

    candidates = []
    for i in range(grid):
        left = sig[i - 1] if i > 0 else np.inf
        right = sig[i + 1] if i + 1 < grid else np.inf
        if (sig[i] < left and sig[i] <= right) or (i == 0 and sig[0] <= right):
            drop = max(left - sig[i] if np.isfinite(left) else 0.0,
                       right - sig[i] if np.isfinite(right) else 0.0, 0.0)
            if sig[i] <= max(trigger, 6.0 * drop):
                candidates.append(i)

    def sigma_min(t: float) -> float:
        return float(np.linalg.svd(_pairing_at(path, m, t), compute_uv=False)[-1])

    crossings: list[Crossing] = []
    for i in candidates:
        lo = ts[i - 1] if i > 0 else ts[0]
        hi = ts[i + 1] if i + 1 < grid else ts[-1]
        t_star = float(np.clip(_golden_minimize(sigma_min, lo, hi), 0.0, 1.0))
        if sigma_min(t_star) > cut:
            continue
        restricted = crossing_form(path, t_star, m, tol)
        form_in = inertia(restricted, tol)
        if form_in.n_zero:
            raise DegenerateCrossing(
                f"restricted crossing form at t={t_star:.12f} has nullity {form_in.n_zero}")
        if crossings and abs(t_star - crossings[-1].t) < _CLUSTER_WIDTH:
            raise UnresolvedCluster(
                f"crossings at t={crossings[-1].t:.12f} and t={t_star:.12f} are unresolved")
        crossings.append(Crossing(t_star, restricted.shape[0], form_in))
    return crossings


def index_from_crossings(crossings) -> int:
    """Signed crossing count with the endpoint conventions: positive
    inertia on [0, 1), negative inertia on (0, 1]."""
    total = 0
    for c in crossings:
        at_start = c.t <= _ENDPOINT_TOL
        at_end = c.t >= 1.0 - _ENDPOINT_TOL
        if not at_end:
            total += c.form_inertia.n_plus
        if not at_start:
            total -= c.form_inertia.n_minus
    return total


def maslov_index(path, m: LagrangianPlane, tol: TolerancePolicy = DEFAULT_TOL,
                 grid: int = 2048) -> int:
    """Maslov index of a regular path with respect to a reference plane."""
    return index_from_crossings(find_crossings(path, m, tol, grid))


def is_nondecreasing(path, tol: TolerancePolicy = DEFAULT_TOL, grid: int = 256) -> bool:
    """True when the full crossing form is positive semidefinite along the
    path (checked on a grid)."""
    for t in np.linspace(0.0, 1.0, grid):
        x, y = path.frame_at(float(t))
        xd, yd = path.derivative_at(float(t))
        form = hermitian_part(x.conj().T @ yd - y.conj().T @ xd)
        w = np.linalg.eigvalsh(form)
        if w.size and w[0] < -cutoff_for(w, tol):
            return False
    return True


def _pair_normalization(l0: LagrangianPlane, l1: LagrangianPlane,
                        tol: TolerancePolicy) -> tuple[np.ndarray, np.ndarray]:
    """Symplectic basis Z and projector Q with Z(horizontal) = L0 and
    Z(graph of Q) = L1, where ker Q matches the intersection L0 ∩ L1.

    Columns are built from an intersection basis extended inside each
    plane, with the completion solved through the symplectic pairing.
    """
    n = l0.n
    j = standard_form(n)
    k = intersection_dim(l0, l1, tol)
    f = intersection_basis(l0, l1, tol)

    def complement_within(plane: LagrangianPlane) -> np.ndarray:
        resid = plane.stacked - f @ (f.conj().T @ plane.stacked)
        u, s, _ = np.linalg.svd(resid, full_matrices=False)
        r = int(np.sum(s > cutoff_for(s, tol)))
        if r != n - k:
            raise DualBasisFailure("complement inside the plane has unexpected rank")
        return u[:, : n - k]

    if k < n:
        g = complement_within(l0)
        h = complement_within(l1)
        pairing = g.conj().T @ j @ h
        s = np.linalg.svd(pairing, compute_uv=False)
        if s[-1] <= tol.rank_rel_tol * max(1.0, s[0]):
            raise DualBasisFailure("pairing between plane complements is singular")
        h_dual = h @ np.linalg.inv(pairing)
        a = np.hstack([f, g])
        b_right = h_dual - g
    else:
        a = f
        b_right = np.zeros((2 * n, 0), dtype=complex)

    if k > 0:
        known = np.hstack([a, b_right])
        system = known.conj().T @ j
        rhs = np.zeros((2 * n - k, k), dtype=complex)
        rhs[:k, :k] = np.eye(k)
        b_solve, *_ = np.linalg.lstsq(system, rhs, rcond=None)
        skew = b_solve.conj().T @ j @ b_solve
        b_left = b_solve + f @ (skew / 2.0)
        b = np.hstack([b_left, b_right])
    else:
        b = b_right

    z = np.hstack([a, b])
    residual = np.linalg.norm(z.conj().T @ j @ z - j)
    if residual > tol.residual_tol * max(1.0, np.linalg.norm(z) ** 2):
        raise DualBasisFailure(f"pair normalization residual {residual:.3e} too large")
    q = np.zeros((n, n), dtype=complex)
    q[k:, k:] = np.eye(n - k)
    return z, q


def minimal_path(l0: LagrangianPlane, l1: LagrangianPlane,
                 tol: TolerancePolicy = DEFAULT_TOL, seed=None) -> LinearFramePath:
    """Smooth non-decreasing path from L0 to L1 whose Maslov index equals
    the Duistermaat index of (L0, L1, M) for every reference plane M.

    The path is the symplectic image of t -> graph(t Q): its crossing
    form is congruent to Q, hence positive semidefinite everywhere.
    """
    if l0.n != l1.n:
        raise ValidationError("planes live in different dimensions")
    z, q = _pair_normalization(l0, l1, tol)
    n = l0.n
    z11, z12 = z[:n, :n], z[:n, n:]
    z21, z22 = z[n:, :n], z[n:, n:]
    return LinearFramePath(z11, z12 @ q, z21, z22 @ q, kind="minimal")


def zwz_check(path, m1: LagrangianPlane, m2: LagrangianPlane,
              tol: TolerancePolicy = DEFAULT_TOL, grid: int = 2048) -> VerificationRecord:
    """Difference of Maslov indices against two reference planes, compared
    with the two Duistermaat-index expressions for it (the endpoint line
    and the reference line)."""
    mas1 = maslov_index(path, m1, tol, grid)
    mas2 = maslov_index(path, m2, tol, grid)
    l0 = plane_from_frame(*path.frame_at(0.0), tol)
    l1 = plane_from_frame(*path.frame_at(1.0), tol)
    lhs = mas1 - mas2
    endpoint_line = (duistermaat_omega(l0, l1, m1, tol).value
                     - duistermaat_omega(l0, l1, m2, tol).value)
    reference_line = (duistermaat_omega(l1, m1, m2, tol).value
                      - duistermaat_omega(l0, m1, m2, tol).value)
    holds = lhs == endpoint_line == reference_line
    return VerificationRecord(
        "zhou_wu_zhu", holds, lhs, endpoint_line,
        {"maslov_m1": mas1, "maslov_m2": mas2,
         "endpoint_line": endpoint_line, "reference_line": reference_line})


def _smooth_monotone(alpha: float):
    phi = lambda t: (1.0 - alpha) * t + alpha * t * t * (3.0 - 2.0 * t)
    dphi = lambda t: (1.0 - alpha) + 6.0 * alpha * t * (1.0 - t)
    return phi, dphi


def extremal_check(l0: LagrangianPlane, l1: LagrangianPlane, m: LagrangianPlane,
                   trials: int = 10, tol: TolerancePolicy = DEFAULT_TOL, seed=None,
                   max_retries: int = 5) -> VerificationRecord:
    """Maslov index over random non-decreasing paths from L0 to L1 is
    bounded below by the Duistermaat index, with equality on the minimal
    path.

    Samples alternate between smooth reparametrizations of the minimal
    path and detours through a random waypoint (two minimal pieces, whose
    indices add under concatenation).  Degenerate samples are redrawn up
    to ``max_retries`` times.
    """
    rng = np.random.default_rng(seed)
    target = duistermaat_omega(l0, l1, m, tol).value
    base = minimal_path(l0, l1, tol)
    base_value = maslov_index(base, m, tol)
    samples = []
    for trial in range(trials):
        for attempt in range(max_retries + 1):
            try:
                if trial % 2 == 0:
                    phi, dphi = _smooth_monotone(rng.uniform(0.1, 0.9))
                    value = maslov_index(reparametrize(base, phi, dphi), m, tol)
                else:
                    mid = random_plane(l0.n, rng, tol)
                    value = (maslov_index(minimal_path(l0, mid, tol), m, tol)
                             + maslov_index(minimal_path(mid, l1, tol), m, tol))
                samples.append(value)
                break
            except (DegenerateCrossing, UnresolvedCluster):
                if attempt == max_retries:
                    raise
    holds = base_value == target and all(v >= target for v in samples)
    return VerificationRecord(
        "maslov_extremal", holds, base_value, target,
        {"samples": samples, "minimal_value": base_value, "index_value": target})
