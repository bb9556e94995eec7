import math

import numpy as np
import pytest

from conftest import BASIS, EXAMPLE_MINUS, EXAMPLE_PLUS, SIGMA5, max_diff
from sp2eig.hmat import (IDENTITY, MatH2, adjoint_det, dagger, eigen_sphere_point,
                         is_left_eigenvalue, is_symplectic, mat_mul,
                         random_imaginary_unit, random_rotation_form,
                         random_symplectic, rotation_matrix, shift)
from sp2eig.quat import I, J, K, ONE, Quaternion, mul, random_unit, re_dot
from sp2eig.topology import (PathUndefinedError, cayley_path, cover_experiment,
                             never_cover_witness, omega_margin)

GRID = [n / 16 for n in range(1, 17)]


def _omega_pairs(rng, count):
    pairs = []
    while len(pairs) < count:
        A, s = random_symplectic(rng), random_unit(rng)
        if omega_margin(A, s).member:
            pairs.append((A, s))
    return pairs


def test_omega_margin_examples():
    m = omega_margin(EXAMPLE_PLUS, I)
    assert not m.member and m.margin <= 1e-10
    assert omega_margin(EXAMPLE_PLUS, SIGMA5).member
    assert omega_margin(EXAMPLE_MINUS, SIGMA5).member
    assert omega_margin(IDENTITY, I).member


def test_omega_margin_preconditions():
    with pytest.raises(ValueError):
        omega_margin(MatH2(ONE, ONE, ONE, ONE), I)
    with pytest.raises(ValueError):
        omega_margin(IDENTITY, I * 2)


def test_omega_complement_is_eigenvalue_set(rng):
    for _ in range(200):
        f = random_rotation_form(rng, min_abs_sin=0.1)
        A = rotation_matrix(f)
        on = eigen_sphere_point(f, random_imaginary_unit(rng))
        off = random_unit(rng)
        for s in (on, off):
            assert omega_margin(A, s).member == (not is_left_eigenvalue(A, s))
        assert not omega_margin(A, on).member


def test_cayley_endpoints(rng):
    for A, s in _omega_pairs(rng, 50):
        assert max_diff(cayley_path(A, s, 1.0), A) <= 1e-12
        assert cayley_path(A, s, 0.0) == MatH2.scalar(-s)
        # the formula approaches the analytic endpoint
        assert max_diff(cayley_path(A, s, 1e-9), MatH2.scalar(-s)) <= 1e-6


def test_cayley_t0_identity_of_numerator():
    # A - sigma I = -sigma (I - conj(sigma) A)
    A, s = EXAMPLE_PLUS, SIGMA5
    lhs = shift(A, s)
    rhs = (IDENTITY - A.left_scale(Quaternion(s.t, -s.x, -s.y, -s.z))).left_scale(-s)
    assert max_diff(lhs, rhs) <= 1e-15


def test_cayley_path_stays_in_omega(rng):
    for A, s in _omega_pairs(rng, 200):
        base = adjoint_det(shift(A, s))
        for t in GRID:
            At = cayley_path(A, s, t)
            assert is_symplectic(At, 1e-8)
            m = omega_margin(At, s)
            assert m.member
            # A_t - sigma I = 2 (A - sigma I) D^-1 and |det D| <= 16
            assert m.margin >= base * (1 - 1e-8)


def test_cayley_half_is_symplectic_any_sigma(rng):
    for _ in range(100):
        A, s = random_symplectic(rng), random_unit(rng)
        At = cayley_path(A, s, 0.5)
        assert max_diff(mat_mul(At, dagger(At)), IDENTITY) <= 1e-10


def test_cayley_undefined_at_zero_outside_omega():
    with pytest.raises(PathUndefinedError):
        cayley_path(EXAMPLE_PLUS, I, 0.0)
    # t > 0 is still defined off Omega
    assert is_symplectic(cayley_path(EXAMPLE_PLUS, I, 0.25), 1e-10)
    with pytest.raises(ValueError):
        cayley_path(EXAMPLE_PLUS, I, 1.5)


def test_cover_basis_misses_example():
    rep = cover_experiment(BASIS, 500, seed=0, inject=[EXAMPLE_PLUS, EXAMPLE_MINUS])
    assert rep.uncovered_indices == [0, 1]
    for (A, margins), ref in zip(rep.uncovered, (EXAMPLE_PLUS, EXAMPLE_MINUS)):
        assert A == ref and max(margins) <= 1e-8


def test_cover_five_sigmas():
    rep = cover_experiment([*BASIS, SIGMA5], 2000, seed=0, inject=[EXAMPLE_PLUS, EXAMPLE_MINUS])
    assert rep.uncovered == []
    assert rep.min_best_margin > 1e-8


def test_cover_single_sigma_identity():
    rep = cover_experiment([ONE], 0, inject=[IDENTITY])
    assert rep.uncovered_indices == [0]


def test_cover_deterministic():
    a = cover_experiment([ONE, I], 200, seed=5)
    b = cover_experiment([ONE, I], 200, seed=5)
    c = cover_experiment([ONE, I], 200, seed=6)
    assert a.to_dict() == b.to_dict()
    assert a.min_best_margin != c.min_best_margin


def test_cover_substreams_independent_of_sample_count():
    short = cover_experiment([J], 10, seed=3)
    long = cover_experiment([J], 50, seed=3)
    assert long.min_best_margin <= short.min_best_margin


def test_cover_validation():
    with pytest.raises(ValueError):
        cover_experiment([], 10)
    with pytest.raises(ValueError):
        cover_experiment([ONE * 2], 10)
    with pytest.raises(ValueError):
        cover_experiment([ONE], 0)


def test_never_cover_witness_examples():
    assert max_diff(never_cover_witness(BASIS), EXAMPLE_PLUS) <= 1e-12
    W = never_cover_witness([I, I, I, I])
    assert W.a11 == W.a22 and W.a21 == -W.a12
    assert abs(re_dot(W.a21, I)) <= 1e-15
    with pytest.raises(ValueError):
        never_cover_witness([ONE, I, J])


def test_never_cover_random(rng):
    for _ in range(100):
        sigmas = [random_unit(rng) for _ in range(4)]
        W = never_cover_witness(sigmas)
        assert max(omega_margin(W, s).margin for s in sigmas) <= 1e-8
