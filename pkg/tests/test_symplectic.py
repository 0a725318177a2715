import numpy as np
import pytest

from lagidx import (
    ValidationError,
    direct_sum_maps,
    is_antisymplectic,
    is_symplectic,
    omega,
    random_symplectic,
    standard_form,
    swap_map,
)
from lagidx.hermitian import random_hermitian


def test_omega_basis_pairs():
    assert omega([1, 0], [0, 1]) == pytest.approx(1.0)
    assert omega([0, 1], [1, 0]) == pytest.approx(-1.0)
    # real vectors pair to an exactly real form value with themselves
    u = np.array([0.3, -1.2, 0.7, 2.0])
    assert omega(u, u) == pytest.approx(0.0)


def test_omega_matches_matrix_form(rng):
    for n in range(1, 7):
        j = standard_form(n)
        for _ in range(10):
            u = rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)
            v = rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)
            assert omega(u, v) == pytest.approx(complex(u.conj() @ j @ v))


def test_omega_skew_hermitian(rng):
    for n in range(1, 7):
        for _ in range(100):
            u = rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)
            v = rng.standard_normal(2 * n) + 1j * rng.standard_normal(2 * n)
            assert abs(omega(v, u) + np.conj(omega(u, v))) <= 1e-12
    assert abs(omega(u, u).real) <= 1e-12  # diagonal values are purely imaginary


def test_omega_dimension_mismatch():
    with pytest.raises(ValidationError):
        omega([1, 0], [1, 0, 0, 0])


def test_is_symplectic_examples(rng):
    assert is_symplectic(np.eye(6))
    a = random_hermitian(3, rng)
    shear = np.block([[np.eye(3), np.zeros((3, 3))], [a, np.eye(3)]])
    assert is_symplectic(shear)
    assert not is_symplectic(np.diag([2.0, 1.0]))


def test_random_symplectic_property():
    for n in range(1, 7):
        for seed in range(100):
            s = random_symplectic(n, seed)
            assert is_symplectic(s)
    # |det S| = 1 follows from S* J S = J
    s = random_symplectic(3, 123)
    assert abs(np.linalg.det(s)) == pytest.approx(1.0, abs=1e-9)


def test_symplectic_group_closure(rng):
    for n in (1, 2, 3):
        s1 = random_symplectic(n, rng)
        s2 = random_symplectic(n, rng)
        assert is_symplectic(s1 @ s2)
        assert is_symplectic(np.linalg.inv(s1))


def test_swap_map():
    s = swap_map(2)
    assert is_antisymplectic(s)
    assert np.allclose(s @ s, np.eye(4))
    # swapping a graph frame (I; A) gives (A; I)
    a = np.diag([2.0, -1.0])
    frame = np.vstack([np.eye(2), a])
    swapped = s @ frame
    assert np.allclose(swapped[:2], a)
    assert np.allclose(swapped[2:], np.eye(2))


def test_anti_composed_with_symplectic_is_anti(rng):
    s = swap_map(3) @ random_symplectic(3, rng)
    assert is_antisymplectic(s)
    assert not is_symplectic(s)


def test_direct_sums(rng):
    assert np.allclose(direct_sum_maps(np.eye(2), np.eye(4)), np.eye(6))
    assert np.allclose(direct_sum_maps(swap_map(1), swap_map(2)), swap_map(3))
    s = direct_sum_maps(random_symplectic(2, rng), random_symplectic(3, rng))
    assert is_symplectic(s)
