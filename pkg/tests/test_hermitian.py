import numpy as np
import pytest

from lagidx import (
    Inertia,
    NotHermitian,
    TolerancePolicy,
    ValidationError,
    inertia,
    kernel_basis,
    pseudoinverse,
    random_hermitian,
    range_projector,
    rank,
)
from lagidx.hermitian import as_hermitian, hermitian_part, pinv_general


@pytest.mark.parametrize("matrix, expected", [
    (np.diag([1.0, -1.0, 0.0]), (1, 1, 1)),
    (np.eye(4), (0, 0, 4)),
    (np.array([[0.0, 1.0], [1.0, 0.0]]), (1, 0, 1)),
])
def test_inertia_examples(matrix, expected):
    assert inertia(matrix).as_tuple() == expected


def test_inertia_negation_swaps_counts(rng):
    for n in range(1, 7):
        h = random_hermitian(n, rng)
        h[:, 0] = 0.0
        h[0, :] = 0.0  # force a kernel direction
        h = hermitian_part(h)
        i = inertia(h)
        j = inertia(-h)
        assert (j.n_minus, j.n_zero, j.n_plus) == (i.n_plus, i.n_zero, i.n_minus)


def test_sylvester_invariance(rng):
    # Congruence by any invertible matrix preserves the inertia exactly.
    for n in range(1, 7):
        for _ in range(100):
            h = random_hermitian(n, rng)
            if rng.random() < 0.3 and n > 1:
                v, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
                w = rng.standard_normal(n)
                w[: rng.integers(1, n)] = 0.0
                h = hermitian_part(v @ np.diag(w) @ v.conj().T)
            s = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            assert inertia(hermitian_part(s.conj().T @ h @ s)).as_tuple() == inertia(h).as_tuple()


def test_kernel_basis_examples(tol):
    assert kernel_basis(np.zeros((2, 2))).shape == (2, 2)
    assert kernel_basis(np.eye(3)).shape == (3, 0)
    k = kernel_basis(np.array([[1.0, 1.0], [1.0, 1.0]]))
    assert k.shape == (2, 1)
    expected = np.array([1.0, -1.0]) / np.sqrt(2.0)
    phase = k[0, 0] / expected[0]
    assert np.allclose(k[:, 0], phase * expected)


def test_kernel_dimension_matches_inertia(rng, tol):
    for n in range(1, 7):
        h = random_hermitian(n, rng)
        v, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        w = rng.standard_normal(n)
        w[: rng.integers(0, n + 1)] = 0.0
        h = hermitian_part(v @ np.diag(w) @ v.conj().T)
        k = kernel_basis(h, tol)
        assert k.shape[1] == inertia(h, tol).n_zero
        assert np.linalg.norm(h @ k) <= tol.residual_tol * max(1.0, np.linalg.norm(h))
        assert np.allclose(k.conj().T @ k, np.eye(k.shape[1]), atol=1e-12)


def test_pseudoinverse_examples():
    assert np.allclose(pseudoinverse(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))
    assert np.allclose(pseudoinverse(np.eye(5)), np.eye(5))
    # rank one: H = v v* with |v| = 2, so H^+ = v v* / 16
    v = np.array([2.0, 0.0])
    h = np.outer(v, v.conj())
    hp = pseudoinverse(h)
    assert np.allclose(hp, h / 16.0)
    assert np.allclose(h @ hp @ h, h)


def test_penrose_identities(rng, tol):
    for n in range(1, 7):
        v, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
        w = rng.standard_normal(n)
        w[: rng.integers(0, n)] = 0.0
        h = hermitian_part(v @ np.diag(w) @ v.conj().T)
        hp = pseudoinverse(h, tol)
        assert np.linalg.norm(h @ hp @ h - h) <= tol.residual_tol * max(1.0, np.linalg.norm(h))
        assert np.linalg.norm(hp @ h @ hp - hp) <= tol.residual_tol * max(1.0, np.linalg.norm(hp))
        assert np.linalg.norm((h @ hp).conj().T - h @ hp) <= tol.residual_tol
        assert np.linalg.norm((hp @ h).conj().T - hp @ h) <= tol.residual_tol
        # involution
        assert np.allclose(pseudoinverse(hp, tol), h, atol=1e-8 * max(1.0, np.linalg.norm(h)))


def test_range_projector_examples(tol):
    assert np.allclose(range_projector(np.diag([3.0, 0.0])), np.diag([1.0, 0.0]))
    assert np.allclose(range_projector(np.zeros((3, 3))), np.zeros((3, 3)))
    v = np.array([1.0, 1.0]) / np.sqrt(2.0)
    p = np.outer(v, v.conj())
    assert np.allclose(range_projector(p), p)
    q = range_projector(np.diag([1.0, -2.0, 0.0]))
    assert np.allclose(q @ q, q)
    assert np.allclose(q, q.conj().T)


def test_pinv_general_rectangular(tol):
    m = np.array([[1.0, 0.0, 0.0], [0.0, 2.0, 0.0]])
    mp = pinv_general(m, tol)
    assert np.allclose(m @ mp @ m, m)


def test_rank(tol):
    assert rank(np.zeros((3, 3)), tol) == 0
    assert rank(np.eye(3), tol) == 3
    assert rank(np.array([[1.0, 1.0], [1.0, 1.0]]), tol) == 1


def test_tolerance_policy_validation():
    with pytest.raises(ValidationError):
        TolerancePolicy(rank_rel_tol=0.0)
    with pytest.raises(ValidationError):
        TolerancePolicy(residual_tol=2.0)


def test_rejects_bad_input():
    with pytest.raises(NotHermitian):
        inertia(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(ValidationError):
        inertia(np.array([[np.nan, 0.0], [0.0, 0.0]]))
    with pytest.raises(ValidationError):
        as_hermitian(np.ones((2, 3)))


def test_inertia_dataclass():
    i = Inertia(1, 2, 3)
    assert i.dim == 6
    assert i.signature == 2
