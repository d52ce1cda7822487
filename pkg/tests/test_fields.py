import numpy as np
import pytest

from bihamso4.fields import (
    CHART_M,
    CHART_UV,
    LINE_NODES,
    PhasePoint,
    Residual,
    ScalarField,
    VectorField,
    BivectorField,
    bracket,
    fd_grad,
    fd_jac,
    grad_fd_residual,
    line_poly_coeffs,
    linear_bivector,
    schouten_residual,
    wedge,
    wedge_field,
)


def test_residual_normalization():
    r = Residual(2.0, 3.0)
    assert r.normalized == 0.5
    assert Residual(0.0, 0.0).normalized == 0.0


def test_chart_mismatch_guard():
    pt = PhasePoint(CHART_M, np.zeros(6))
    f = ScalarField(CHART_UV, lambda c: c[0], lambda c: np.eye(6)[0], name="u1")
    with pytest.raises(ValueError, match="chart mismatch"):
        grad_fd_residual(f, pt)


def test_bracket_antisymmetry():
    rng = np.random.default_rng(0)
    A = rng.uniform(-1, 1, (6, 6))
    A = A - A.T
    P = BivectorField(CHART_M, lambda c: A, lambda c: np.zeros((6, 6, 6)), name="P")
    f = ScalarField(CHART_M, lambda c: c @ c, lambda c: 2 * c, name="f")
    g = ScalarField(CHART_M, lambda c: c[0] * c[3], lambda c: np.eye(6)[0] * c[3] + np.eye(6)[3] * c[0], name="g")
    for _ in range(20):
        pt = PhasePoint(CHART_M, rng.uniform(-1, 1, 6))
        assert abs(bracket(P, f, g, pt) + bracket(P, g, f, pt)) < 1e-14


def test_schouten_constant_bivector_vanishes():
    # a constant antisymmetric matrix always satisfies Jacobi
    rng = np.random.default_rng(1)
    A = rng.uniform(-1, 1, (6, 6))
    A = A - A.T
    P = BivectorField(CHART_M, lambda c: A, lambda c: np.zeros((6, 6, 6)), name="P")
    pt = PhasePoint(CHART_M, rng.uniform(-1, 1, 6))
    assert schouten_residual(P, P, pt).raw == 0.0


def test_fd_grad_matches_hand_gradient():
    rng = np.random.default_rng(2)

    def value(c):
        return np.sin(c[0]) * c[1] + c[2] ** 3

    def grad(c):
        g = np.zeros(6)
        g[0] = np.cos(c[0]) * c[1]
        g[1] = np.sin(c[0])
        g[2] = 3 * c[2] ** 2
        return g

    f = ScalarField(CHART_M, value, grad, name="f")
    for _ in range(10):
        pt = PhasePoint(CHART_M, rng.uniform(-1, 1, 6))
        assert grad_fd_residual(f, pt).normalized < 1e-7


def test_fd_jac_linear_field_exact():
    rng = np.random.default_rng(3)
    A = rng.uniform(-1, 1, (6, 6))
    X = VectorField(CHART_M, lambda c: A @ c, lambda c: A, name="X")
    pt = PhasePoint(CHART_M, rng.uniform(-1, 1, 6))
    J = fd_jac(X.value, pt.coords)
    assert np.max(np.abs(J - A)) < 1e-9


def test_wedge_antisymmetric():
    rng = np.random.default_rng(4)
    x = rng.uniform(-1, 1, 6)
    z = rng.uniform(-1, 1, 6)
    X = VectorField(CHART_M, lambda c: x, lambda c: np.zeros((6, 6)), name="X")
    Z = VectorField(CHART_M, lambda c: z, lambda c: np.zeros((6, 6)), name="Z")
    pt = PhasePoint(CHART_M, rng.uniform(-1, 1, 6))
    W = wedge(X, Z, pt)
    assert np.max(np.abs(W + W.T)) == 0.0
    # x^z contracted with any df gives <z,df>x - <x,df>z
    df = rng.uniform(-1, 1, 6)
    expect = x * (z @ df) - z * (x @ df)
    assert np.max(np.abs(W @ df - expect)) < 1e-14


def test_wedge_field_jacobian():
    rng = np.random.default_rng(5)
    A = rng.uniform(-1, 1, (6, 6))
    B = rng.uniform(-1, 1, (6, 6))
    X = VectorField(CHART_M, lambda c: A @ c, lambda c: A, name="X")
    Z = VectorField(CHART_M, lambda c: B @ c, lambda c: B, name="Z")
    W = wedge_field(X, Z)
    pt = PhasePoint(CHART_M, rng.uniform(-1, 1, 6))
    step = 1e-6
    for l in range(6):
        e = np.zeros(6)
        e[l] = step
        plus = W.value(pt.coords + e)
        minus = W.value(pt.coords - e)
        fd = (plus - minus) / (2 * step)
        assert np.max(np.abs(W.jac(pt.coords)[:, :, l] - fd)) < 1e-8


def test_line_poly_coeffs_exact_degree_five():
    # interpolation on the fixed nodes recovers polynomial coefficients exactly
    coeffs = np.array([1.0, -2.0, 0.5, 3.0, -1.0, 0.25])
    values = np.array([np.polyval(coeffs[::-1], t) for t in LINE_NODES])
    got = line_poly_coeffs(values)
    assert np.max(np.abs(got - coeffs)) < 1e-12


def test_line_poly_coeffs_dimension_guard():
    with pytest.raises(ValueError, match="dimension mismatch"):
        line_poly_coeffs(np.zeros(5))


def test_linear_bivector_jacobian_constant():
    def value(c):
        M = np.zeros((6, 6), dtype=np.asarray(c).dtype)
        M[0, 1] = c[2]
        M[1, 0] = -c[2]
        M[2, 4] = 2.0 * c[0] - c[5]
        M[4, 2] = -M[2, 4]
        return M

    P = linear_bivector(CHART_M, value, 6, name="P")
    rng = np.random.default_rng(6)
    pt = rng.uniform(-1, 1, 6)
    J = P.jac(pt)
    assert J[0, 1, 2] == 1.0
    assert J[1, 0, 2] == -1.0
    assert J[2, 4, 0] == 2.0
    assert J[2, 4, 5] == -1.0
    # jac is exact for entries linear in the coordinates
    step = 1e-7
    for l in range(6):
        e = np.zeros(6)
        e[l] = step
        fd = (P.value(pt + e) - P.value(pt - e)) / (2 * step)
        assert np.max(np.abs(J[:, :, l] - fd)) < 1e-8
