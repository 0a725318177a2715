import numpy as np
import pytest

from lagidx import (
    DegenerateCrossing,
    NoCrossing,
    crossing_form,
    duistermaat_omega,
    extremal_check,
    find_crossings,
    graph_plane,
    graph_segment,
    horizontal_plane,
    inertia,
    intersection_dim,
    is_nondecreasing,
    maslov_index,
    minimal_path,
    plane_from_frame,
    random_plane,
    random_plane_with_mul,
    reparametrize,
    scaled_projector_path,
    vertical_plane,
    zwz_check,
)
from lagidx.hermitian import random_hermitian
from lagidx.maslov import custom_path, index_from_crossings


def scalar_graph(s):
    return graph_plane(np.array([[float(s)]]))


def scalar_segment(a, b):
    return graph_segment(np.array([[float(a)]]), np.array([[float(b)]]))


def test_crossing_form_scalar():
    path = scalar_segment(0, 1)
    form = crossing_form(path, 0.5, scalar_graph(0.5))
    assert form.shape == (1, 1)
    assert inertia(form).as_tuple() == (0, 0, 1)
    with pytest.raises(NoCrossing):
        crossing_form(path, 0.25, scalar_graph(0.5))


def test_crossing_form_scaled_projector():
    q = np.diag([1.0, 1.0, 0.0])
    path = scaled_projector_path(q)
    # at t=1/2 the path graph(tQ) meets graph(Q/2) in the Q-eigenspace
    m = graph_plane(q / 2)
    form = crossing_form(path, 0.5, m)
    i = inertia(form)
    assert i.n_minus == 0  # the form is <x, Qx> restricted, never negative
    assert i.n_plus >= 1


def test_find_crossings_examples():
    crossings = find_crossings(scalar_segment(0, 1), scalar_graph(0.5))
    assert len(crossings) == 1
    assert crossings[0].t == pytest.approx(0.5, abs=1e-9)
    assert crossings[0].dim == 1
    assert find_crossings(scalar_segment(0, 1), scalar_graph(2)) == []
    with pytest.raises(DegenerateCrossing):
        find_crossings(scalar_segment(0, 0), horizontal_plane(1))


def test_maslov_examples():
    assert maslov_index(scalar_segment(0, 1), scalar_graph(0.5)) == 1
    # crossing at t=0 with positive form counts, at t=1 it does not
    assert maslov_index(scalar_segment(0, 1), scalar_graph(0)) == 1
    assert maslov_index(scalar_segment(0, 1), scalar_graph(1)) == 0
    assert maslov_index(scalar_segment(0, 1), scalar_graph(2)) == 0
    # negative-direction segments: n_- counts at t=1 but not at t=0
    assert maslov_index(scalar_segment(0, -1), scalar_graph(0)) == 0
    assert maslov_index(scalar_segment(0, -1), scalar_graph(-1)) == -1


def test_multidim_crossings():
    a = np.zeros((2, 2))
    b = np.diag([2.0, 1.0])
    m = graph_plane(np.diag([1.0, 0.5]))
    crossings = find_crossings(graph_segment(a, b), m)
    assert [round(c.t, 6) for c in crossings] == [0.5]
    assert crossings[0].dim == 2  # both eigenvalue branches cross together
    assert maslov_index(graph_segment(a, b), m) == 2


def test_path_reversal_negates_interior_index():
    assert maslov_index(scalar_segment(1, 0), scalar_graph(0.5)) == -1
    assert maslov_index(scalar_segment(-1, 2), scalar_graph(0.7)) == \
        -maslov_index(scalar_segment(2, -1), scalar_graph(0.7))


def test_concatenation_additivity(rng):
    # splitting a segment at a non-crossing junction adds the pieces
    for _ in range(10):
        a = random_hermitian(2, rng)
        b = random_hermitian(2, rng)
        c = random_hermitian(2, rng)
        s = float(rng.uniform(0.2, 0.8))
        mid = a + s * (b - a)
        whole = maslov_index(graph_segment(a, b), graph_plane(c))
        left = maslov_index(graph_segment(a, mid), graph_plane(c))
        right = maslov_index(graph_segment(mid, b), graph_plane(c))
        assert whole == left + right


def test_is_nondecreasing():
    assert is_nondecreasing(graph_segment(np.zeros((2, 2)), np.eye(2)))
    assert is_nondecreasing(scaled_projector_path(np.diag([1.0, 0.0])))
    assert not is_nondecreasing(graph_segment(np.zeros((2, 2)), -np.eye(2)))


def test_reparametrization_keeps_index(rng):
    path = graph_segment(np.diag([-1.0, -0.5]), np.diag([2.0, 1.5]))
    m = graph_plane(random_hermitian(2, rng) * 0.3)
    base = maslov_index(path, m)
    phi = lambda t: t * t * (3 - 2 * t)
    dphi = lambda t: 6 * t * (1 - t)
    assert maslov_index(reparametrize(path, phi, dphi), m) == base


def test_custom_path_finite_differences():
    # custom wrapper around an analytic segment reproduces its crossings
    a, b = np.array([[0.0]]), np.array([[1.0]])
    path = custom_path(lambda t: (np.eye(1), a + t * (b - a)), 1)
    assert maslov_index(path, scalar_graph(0.5)) == 1


def test_minimal_path_examples():
    # G_0 to graph(Q): the straight projector path qualifies
    q = np.diag([1.0, 0.0])
    path = minimal_path(horizontal_plane(2), graph_plane(q))
    assert is_nondecreasing(path)
    for m in (vertical_plane(2), graph_plane(np.diag([0.5, 2.0])), graph_plane(-np.eye(2))):
        assert maslov_index(path, m) == duistermaat_omega(horizontal_plane(2), graph_plane(q), m).value
    # identical endpoints: constant path with zero index on regular data
    same = minimal_path(scalar_graph(1), scalar_graph(1))
    assert maslov_index(same, scalar_graph(0)) == 0
    # n=1 example against the vertical reference
    path = minimal_path(horizontal_plane(1), scalar_graph(1))
    assert maslov_index(path, vertical_plane(1)) == 0


def test_minimal_path_random(rng, tol):
    for trial in range(20):
        n = 1 + trial % 4
        l0 = random_plane(n, rng)
        l1 = random_plane_with_mul(n, trial % 2, rng) if trial % 3 else random_plane(n, rng)
        m = random_plane(n, rng)
        path = minimal_path(l0, l1, tol)
        assert planes_same(path, 0.0, l0) and planes_same(path, 1.0, l1)
        assert is_nondecreasing(path, tol)
        assert maslov_index(path, m, tol) == duistermaat_omega(l0, l1, m, tol).value


def planes_same(path, t, plane):
    endpoint = plane_from_frame(*path.frame_at(t))
    return intersection_dim(endpoint, plane) == plane.n


def test_zwz_identity(rng):
    rec = zwz_check(scalar_segment(0, 1), scalar_graph(0.5), scalar_graph(2))
    assert rec.holds
    assert rec.details["maslov_m1"] - rec.details["maslov_m2"] == 1
    rec = zwz_check(scalar_segment(0, 1), scalar_graph(0.5), scalar_graph(0.5))
    assert rec.holds and rec.lhs == 0
    for _ in range(10):
        a, b = random_hermitian(2, rng), random_hermitian(2, rng)
        m1, m2 = random_plane(2, rng), random_plane(2, rng)
        assert zwz_check(graph_segment(a, b), m1, m2).holds


def test_extremal_inequality(rng):
    rec = extremal_check(horizontal_plane(1), scalar_graph(1), scalar_graph(1.5),
                         trials=4, seed=2)
    assert rec.holds
    assert all(v >= rec.rhs for v in rec.details["samples"])
    # loops based at one plane have nonnegative index against any reference
    plane = random_plane(2, rng)
    rec = extremal_check(plane, plane, random_plane(2, rng), trials=2, seed=3)
    assert rec.holds and rec.rhs == 0


def test_segment_eigenvalue_oracle(rng):
    # for strictly increasing segments the index counts eigenvalues of
    # A + t(B-A) passing the reference level, an independent computation
    for _ in range(25):
        n = int(rng.integers(1, 5))
        a = random_hermitian(n, rng)
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        b = a + g @ g.conj().T / n + 0.2 * np.eye(n)
        c = random_hermitian(n, rng)
        mas = maslov_index(graph_segment(a, b), graph_plane(c))
        assert mas == inertia(a - c).n_minus - inertia(b - c).n_minus


def test_degenerate_cases_raise():
    q = np.diag([1.0, 0.0])
    # reference sharing a constant intersection with the moving path
    path = scaled_projector_path(q)
    with pytest.raises(DegenerateCrossing):
        find_crossings(path, graph_plane(np.diag([0.5, 0.0])))


def test_index_from_crossings_is_pure():
    from lagidx import Crossing, Inertia

    crossings = [
        Crossing(0.0, 1, Inertia(0, 0, 1)),
        Crossing(0.5, 2, Inertia(1, 0, 1)),
        Crossing(1.0, 1, Inertia(1, 0, 0)),
    ]
    # start: +1; interior: +1-1; end: -1
    assert index_from_crossings(crossings) == 0
