import numpy as np
import pytest
import scipy.linalg

from loopgerbe import liegroup as lg
from loopgerbe import sampling


def maxabs(x):
    return float(np.max(np.abs(x)))


def test_basis_orthonormal():
    for group in (lg.SU2, lg.SU3):
        for a in range(group.dim):
            for b in range(group.dim):
                want = 1.0 if a == b else 0.0
                got = lg.inner(group.basis[a], group.basis[b])
                assert abs(got - want) < 1e-12


def test_basis_skew_traceless():
    for group in (lg.SU2, lg.SU3):
        for E in group.basis:
            assert maxabs(E + E.conj().T) < 1e-12
            assert abs(np.trace(E)) < 1e-12


def test_su2_structure_constant():
    # [E1, E2] = -sqrt(2) E3 in this normalisation
    E1, E2, E3 = lg.SU2.basis
    assert maxabs(lg.bracket(E1, E2) + np.sqrt(2.0) * E3) < 1e-12


def test_coroot_length_squared_is_two():
    h = np.diag([1j, -1j])
    assert abs(lg.inner(h, h) - 2.0) < 1e-12


def test_exp_alg_half_turn():
    h = np.diag([1j, -1j])
    g = lg.exp_alg(np.pi * h)
    assert maxabs(g + np.eye(2)) < 1e-12


def test_exp_alg_matches_expm():
    rng = sampling.make_rng(11)
    for group in (lg.SU2, lg.SU3):
        for _ in range(5):
            X = sampling.random_algebra(rng, group, scale=1.3)
            assert maxabs(lg.exp_alg(X) - scipy.linalg.expm(X)) < 1e-12
            assert maxabs(lg.exp_alg(X, 0.7) - scipy.linalg.expm(0.7 * X)) < 1e-12


def test_exp_alg_batched():
    rng = sampling.make_rng(12)
    Xs = np.stack([sampling.random_algebra(rng, lg.SU3) for _ in range(7)])
    G = lg.exp_alg(Xs)
    for i in range(7):
        assert maxabs(G[i] - scipy.linalg.expm(Xs[i])) < 1e-12
        assert lg.is_group_element(lg.SU3, G[i])


def test_coeffs_roundtrip():
    rng = sampling.make_rng(13)
    for group in (lg.SU2, lg.SU3):
        c = rng.uniform(-1, 1, size=group.dim)
        X = group.from_coeffs(c)
        assert lg.is_algebra_element(group, X)
        assert maxabs(group.coeffs(X) - c) < 1e-12


def test_project_algebra():
    rng = sampling.make_rng(14)
    M = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    P = lg.project_algebra(M)
    assert lg.is_algebra_element(lg.SU3, P)
    X = sampling.random_algebra(rng, lg.SU3)
    assert maxabs(lg.project_algebra(X) - X) < 1e-12


def test_adjoint_invariance():
    rng = sampling.make_rng(15)
    g = lg.exp_alg(sampling.random_algebra(rng, lg.SU3))
    X = sampling.random_algebra(rng, lg.SU3)
    Y = sampling.random_algebra(rng, lg.SU3)
    lhs = lg.inner(lg.adjoint(g, X), lg.adjoint(g, Y))
    assert abs(lhs - lg.inner(X, Y)) < 1e-12
    assert maxabs(lg.adjoint_inv(g, lg.adjoint(g, X)) - X) < 1e-12


def test_inner_bracket_cyclic():
    rng = sampling.make_rng(16)
    X, Y, Z = (sampling.random_algebra(rng, lg.SU3) for _ in range(3))
    assert abs(lg.inner(lg.bracket(X, Y), Z) - lg.inner(X, lg.bracket(Y, Z))) < 1e-12


def test_maurer_cartan():
    rng = sampling.make_rng(17)
    g0 = lg.exp_alg(sampling.random_algebra(rng, lg.SU2))
    X = sampling.random_algebra(rng, lg.SU2)
    v = g0 @ X  # tangent of t -> g0 exp(tX) at 0
    assert maxabs(lg.maurer_cartan(g0, v) - X) < 1e-12
    assert maxabs(lg.maurer_cartan(g0, v, right=True) - lg.adjoint(g0, X)) < 1e-12
    with pytest.raises(ValueError):
        lg.maurer_cartan(g0, np.eye(2, dtype=complex))


def test_dexp_matches_finite_difference():
    rng = sampling.make_rng(18)
    X = sampling.random_algebra(rng, lg.SU3, scale=0.9)
    dX = sampling.random_algebra(rng, lg.SU3, scale=0.9)
    h = 1e-5
    fd = (scipy.linalg.expm(X + h * dX) - scipy.linalg.expm(X - h * dX)) / (2 * h)
    right = lg.dexp_right(X, dX) @ scipy.linalg.expm(X)
    left = scipy.linalg.expm(X) @ lg.dexp_left(X, dX)
    assert maxabs(right - fd) < 1e-9
    assert maxabs(left - fd) < 1e-9


def test_dexp_commuting_case():
    # when [X, dX] = 0 both variants collapse to dX
    X = lg.SU2.basis[0]
    assert maxabs(lg.dexp_left(2.0 * X, X) - X) < 1e-14
    assert maxabs(lg.dexp_right(2.0 * X, X) - X) < 1e-14
