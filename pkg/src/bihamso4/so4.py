"""Free rigid body on so(4)*: parameters, charts, Poisson pair, Lax matrices.

Coordinate orderings used everywhere:

    M chart      (m12, m13, m14, m23, m24, m34)
    SPLIT chart  (x1, y1, z1, x2, y2, z2)
    UV chart     (u1, v1, z1, u2, v2, z2)

The model is parametrized either by mu = (mu1, mu2, mu3, mu4) or by the
squared inertia spectrum jsq = (J1^2, J2^2, J3^2, J4^2); the two are related
by an orthogonal-up-to-scale linear map and the rotationally symmetric case
is mu4 = mu3, equivalently J2^2 = J3^2.  For the index pair (i, j) with
complementary pair (k, l) the quadratic form coefficients are
a_ij = J_k^2 + J_l^2 and b_ij = J_k^2 J_l^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import (
    CHART_M,
    CHART_SPLIT,
    CHART_UV,
    BivectorField,
    PhasePoint,
    Residual,
    ScalarField,
    linear_bivector,
)

Array = np.ndarray

# Index pairs of the six m-coordinates (0-based), and each pair's complement.
M_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
M_COMPLEMENT = ((2, 3), (1, 3), (1, 2), (0, 3), (0, 2), (0, 1))

# jsq = MU_TO_JSQ @ mu; the matrix has orthogonal rows of squared norm 4,
# so the inverse is the transpose over 4.
MU_TO_JSQ = np.array(
    [
        [1.0, -1.0, -1.0, -1.0],
        [1.0, 1.0, 1.0, -1.0],
        [1.0, 1.0, -1.0, 1.0],
        [1.0, -1.0, 1.0, 1.0],
    ]
)

_SQ2 = np.sqrt(2.0)

# SPLIT coords in terms of M coords (orthogonal matrix).
M_TO_SPLIT = (
    np.array(
        [
            [1.0, 0.0, 0.0, 0.0, 0.0, -1.0],
            [0.0, 1.0, 0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0, 0.0, 1.0],
            [0.0, 1.0, 0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0, 1.0, 0.0, 0.0],
        ]
    )
    / _SQ2
)

# UV coords in terms of SPLIT coords: u = x + i y, v = x - i y.
SPLIT_TO_UV = np.array(
    [
        [1.0, 1.0j, 0.0, 0.0, 0.0, 0.0],
        [1.0, -1.0j, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0, 1.0j, 0.0],
        [0.0, 0.0, 0.0, 1.0, -1.0j, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    ]
)

UV_TO_SPLIT = np.array(
    [
        [0.5, 0.5, 0.0, 0.0, 0.0, 0.0],
        [-0.5j, 0.5j, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.5, 0.5, 0.0],
        [0.0, 0.0, 0.0, -0.5j, 0.5j, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
    ]
)

_CHART_MAPS = {
    (CHART_M, CHART_SPLIT): M_TO_SPLIT,
    (CHART_SPLIT, CHART_M): M_TO_SPLIT.T,
    (CHART_SPLIT, CHART_UV): SPLIT_TO_UV,
    (CHART_UV, CHART_SPLIT): UV_TO_SPLIT,
    (CHART_M, CHART_UV): SPLIT_TO_UV @ M_TO_SPLIT,
    (CHART_UV, CHART_M): M_TO_SPLIT.T @ UV_TO_SPLIT,
}

_REAL_CHARTS = (CHART_M, CHART_SPLIT)
_REAL_TOL = 1e-10


@dataclass(frozen=True)
class ModelParams:
    """Model parameters; mu is the primary storage, jsq is derived."""

    mu: tuple

    def __post_init__(self):
        mu = tuple(float(x) for x in self.mu)
        if len(mu) != 4:
            raise ValueError("dimension mismatch")
        object.__setattr__(self, "mu", mu)

    @classmethod
    def from_mu(cls, mu1: float, mu2: float, mu3: float, mu4: float | None = None) -> "ModelParams":
        if mu4 is None:
            mu4 = mu3
        return cls((mu1, mu2, mu3, mu4))

    @classmethod
    def from_jsq(cls, jsq) -> "ModelParams":
        jsq = np.asarray(jsq, dtype=float)
        if jsq.shape != (4,):
            raise ValueError("dimension mismatch")
        return cls(tuple(MU_TO_JSQ.T @ jsq / 4.0))

    @property
    def jsq(self) -> tuple:
        return tuple(MU_TO_JSQ @ np.asarray(self.mu))

    @property
    def symmetric(self) -> bool:
        return self.mu[3] == self.mu[2]

    @property
    def a(self) -> Array:
        """Coefficients a_ij = J_k^2 + J_l^2 over the six pairs, M ordering."""
        jsq = self.jsq
        return np.array([jsq[k] + jsq[l] for (k, l) in M_COMPLEMENT])

    @property
    def b(self) -> Array:
        """Coefficients b_ij = J_k^2 J_l^2 over the six pairs, M ordering."""
        jsq = self.jsq
        return np.array([jsq[k] * jsq[l] for (k, l) in M_COMPLEMENT])


def chart_map(pt: PhasePoint, target: str, complex_ok: bool = False) -> PhasePoint:
    """Map a point between the M, SPLIT and UV charts.

    Mapping to a real chart checks that the image is real (a UV point maps to
    a real point iff v_k = conj(u_k) and z_k is real); pass complex_ok=True to
    keep complexified coordinates.
    """
    if pt.chart == target:
        return PhasePoint(target, np.array(pt.coords))
    key = (pt.chart, target)
    if key not in _CHART_MAPS:
        raise ValueError("chart mismatch")
    out = _CHART_MAPS[key] @ pt.coords
    if target in _REAL_CHARTS:
        scale = float(np.max(np.abs(out)))
        if float(np.max(np.abs(out.imag))) <= _REAL_TOL * (1.0 + scale):
            return PhasePoint(target, out.real.copy())
        if not complex_ok:
            raise ValueError("non-real point")
    return PhasePoint(target, out)


def _p1_m_value(m: Array) -> Array:
    m12, m13, m14, m23, m24, m34 = m
    zero = 0.0 * m12
    return np.array(
        [
            [zero, -m23, -m24, m13, m14, zero],
            [m23, zero, -m34, -m12, zero, m14],
            [m24, m34, zero, zero, -m12, -m13],
            [-m13, m12, zero, zero, -m34, m24],
            [-m14, zero, m12, m34, zero, -m23],
            [zero, -m14, m13, -m24, m23, zero],
        ]
    )


def p1_m() -> BivectorField:
    """Lie-Poisson structure of so(4)* in the m coordinates."""
    return linear_bivector(CHART_M, _p1_m_value, 6, name="P1")


def p2_m(params: ModelParams) -> BivectorField:
    """Second (inertia-weighted) Poisson structure in the m coordinates."""
    j1, j2, j3, j4 = params.jsq

    def value(m: Array) -> Array:
        m12, m13, m14, m23, m24, m34 = m
        zero = 0.0 * m12
        return np.array(
            [
                [zero, -j1 * m23, -j1 * m24, j2 * m13, j2 * m14, zero],
                [j1 * m23, zero, -j1 * m34, -j3 * m12, zero, j3 * m14],
                [j1 * m24, j1 * m34, zero, zero, -j4 * m12, -j4 * m13],
                [-j2 * m13, j3 * m12, zero, zero, -j2 * m34, j3 * m24],
                [-j2 * m14, zero, j4 * m12, j2 * m34, zero, -j4 * m23],
                [zero, -j3 * m14, j4 * m13, -j3 * m24, j4 * m23, zero],
            ]
        )

    return linear_bivector(CHART_M, value, 6, name="P2")


def observables_m(params: ModelParams) -> dict:
    """Scalar fields on the M chart: H0, C, HE, KE with exact gradients."""
    a = params.a
    b = params.b

    def h0_value(m):
        return m @ m

    def h0_grad(m):
        return 2.0 * m

    def c_value(m):
        m12, m13, m14, m23, m24, m34 = m
        return m12 * m34 + m14 * m23 - m13 * m24

    def c_grad(m):
        m12, m13, m14, m23, m24, m34 = m
        return np.array([m34, -m24, m23, m14, -m13, m12])

    def he_value(m):
        return 0.5 * (a * m) @ m

    def he_grad(m):
        return a * m

    def ke_value(m):
        return (b * m) @ m

    def ke_grad(m):
        return 2.0 * b * m

    return {
        "H0": ScalarField(CHART_M, h0_value, h0_grad, name="H0"),
        "C": ScalarField(CHART_M, c_value, c_grad, name="C"),
        "HE": ScalarField(CHART_M, he_value, he_grad, name="HE"),
        "KE": ScalarField(CHART_M, ke_value, ke_grad, name="KE"),
    }


def m_matrix(m: Array) -> Array:
    """Antisymmetric 4x4 matrix with upper entries (m12, m13, m14, m23, m24, m34)."""
    out = np.zeros((4, 4), dtype=np.asarray(m).dtype)
    for idx, (i, j) in enumerate(M_PAIRS):
        out[i, j] = m[idx]
        out[j, i] = -m[idx]
    return out


def lax(params: ModelParams, lam: complex, pt: PhasePoint) -> Array:
    """Lax matrix L(lambda) = lambda diag(jsq) + M at an M-chart point."""
    if pt.chart != CHART_M:
        raise ValueError("chart mismatch")
    return lam * np.diag(np.asarray(params.jsq, dtype=complex)) + m_matrix(pt.coords)


def det4(A: Array) -> complex:
    """Determinant of a 4x4 matrix by cofactor expansion along the first row."""

    def det3(b00, b01, b02, b10, b11, b12, b20, b21, b22):
        return (
            b00 * (b11 * b22 - b12 * b21)
            - b01 * (b10 * b22 - b12 * b20)
            + b02 * (b10 * b21 - b11 * b20)
        )

    a = A
    return (
        a[0, 0] * det3(a[1, 1], a[1, 2], a[1, 3], a[2, 1], a[2, 2], a[2, 3], a[3, 1], a[3, 2], a[3, 3])
        - a[0, 1] * det3(a[1, 0], a[1, 2], a[1, 3], a[2, 0], a[2, 2], a[2, 3], a[3, 0], a[3, 2], a[3, 3])
        + a[0, 2] * det3(a[1, 0], a[1, 1], a[1, 3], a[2, 0], a[2, 1], a[2, 3], a[3, 0], a[3, 1], a[3, 3])
        - a[0, 3] * det3(a[1, 0], a[1, 1], a[1, 2], a[2, 0], a[2, 1], a[2, 2], a[3, 0], a[3, 1], a[3, 2])
    )


def char_poly_residual(params: ModelParams, lam: complex, rho: complex, pt: PhasePoint) -> Residual:
    """Spectral-curve identity residual at (lambda, rho, pt).

    Det(L(lambda) - rho lambda I) must equal
    lambda^4 prod_i (J_i^2 - rho) + lambda^2 (rho^2 H0 - 2 rho HE + KE) + C^2.
    """
    obs = observables_m(params)
    m = pt.coords
    h0 = obs["H0"].value(m)
    he = obs["HE"].value(m)
    ke = obs["KE"].value(m)
    c = obs["C"].value(m)
    jsq = np.asarray(params.jsq, dtype=complex)
    det = det4(lax(params, lam, pt) - rho * lam * np.eye(4))
    p4 = np.prod(jsq - rho)
    terms = (
        lam**4 * p4,
        lam**2 * rho**2 * h0,
        -2.0 * lam**2 * rho * he,
        lam**2 * ke,
        c**2,
    )
    closed = sum(terms)
    scale = max(abs(det), max(abs(t) for t in terms))
    return Residual(abs(det - closed), float(scale))


def _vec_residual(vec: Array, *mags: float) -> Residual:
    return Residual(float(np.max(np.abs(vec))), float(max(mags)))


def _prod_mag(P: Array, g: Array) -> float:
    # Largest single summand |P_ij g_j| of the matrix-vector product.
    return float(np.max(np.abs(P) * np.abs(g)[None, :]))


def lenard_residuals_m(params: ModelParams, pt: PhasePoint) -> dict:
    """Residuals of the anchored recursion chain and the shared Casimir.

    With H1 = -2 HE and H2 = KE the chain is
    P1 dH0 = 0,  P2 dH0 = P1 dH1,  P2 dH1 = P1 dH2,  P2 dH2 = 0,
    and C is a Casimir of both structures.
    """
    obs = observables_m(params)
    m = pt.coords
    P1 = p1_m().value(m)
    P2 = p2_m(params).value(m)
    g0 = obs["H0"].grad(m)
    g1 = -2.0 * obs["HE"].grad(m)
    g2 = obs["KE"].grad(m)
    gc = obs["C"].grad(m)
    return {
        "chain_start": _vec_residual(P1 @ g0, _prod_mag(P1, g0)),
        "chain_step_1": _vec_residual(P2 @ g0 - P1 @ g1, _prod_mag(P2, g0), _prod_mag(P1, g1)),
        "chain_step_2": _vec_residual(P2 @ g1 - P1 @ g2, _prod_mag(P2, g1), _prod_mag(P1, g2)),
        "chain_end": _vec_residual(P2 @ g2, _prod_mag(P2, g2)),
        "casimir_c_p1": _vec_residual(P1 @ gc, _prod_mag(P1, gc)),
        "casimir_c_p2": _vec_residual(P2 @ gc, _prod_mag(P2, gc)),
    }


def rigid_rhs(params: ModelParams, m: Array) -> Array:
    """Energy-flow right-hand side dm/dt = P1(m) d(HE) in the M chart."""
    return _p1_m_value(m) @ (params.a * m)


def lax_energy_partner(params: ModelParams, lam: complex, pt: PhasePoint) -> Array:
    """Lax partner of the energy flow: (A∘M) + lambda diag(J_i^2 (T - J_i^2)).

    (A∘M)_ij = a_ij m_ij entrywise and T = sum_i J_i^2; with this partner
    dL/dt = [B, L] holds identically in lambda along dm/dt = P1 d(HE).
    """
    if pt.chart != CHART_M:
        raise ValueError("chart mismatch")
    jsq = np.asarray(params.jsq)
    t_sum = float(np.sum(jsq))
    am = m_matrix(params.a * pt.coords)
    return am + lam * np.diag(jsq * (t_sum - jsq)).astype(complex)


def lax_flow_residual(params: ModelParams, lam: complex, pt: PhasePoint) -> Residual:
    """Residual of dL/dt = [B, L] for the energy flow with the energy partner."""
    L = lax(params, lam, pt)
    B = lax_energy_partner(params, lam, pt)
    mdot = m_matrix(rigid_rhs(params, pt.coords))
    comm = B @ L - L @ B
    raw = float(np.max(np.abs(mdot - comm)))
    scale = max(
        float(np.max(np.abs(mdot))),
        float(np.max(np.abs(B @ L))),
        float(np.max(np.abs(L @ B))),
    )
    return Residual(raw, scale)


def angular_velocity(params: ModelParams, pt: PhasePoint) -> Array:
    """Omega_ij = m_ij / (J_i + J_j); needs a real positive inertia spectrum."""
    jsq = np.asarray(params.jsq)
    if np.any(jsq <= 0.0):
        raise ValueError("inertia spectrum not positive")
    j = np.sqrt(jsq)
    denom = j[:, None] + j[None, :]
    return m_matrix(pt.coords) / denom


def angular_velocity_commutator_residual(params: ModelParams, lam: complex, pt: PhasePoint) -> Residual:
    """Residual of [L(lambda), Omega + lambda J] = [M, Omega] (lambda-independence)."""
    jsq = np.asarray(params.jsq)
    omega = angular_velocity(params, pt)
    L = lax(params, lam, pt)
    B = omega + lam * np.diag(np.sqrt(jsq)).astype(complex)
    lhs = L @ B - B @ L
    M = m_matrix(pt.coords)
    rhs = M @ omega - omega @ M
    raw = float(np.max(np.abs(lhs - rhs)))
    scale = max(
        float(np.max(np.abs(L @ B))),
        float(np.max(np.abs(B @ L))),
        float(np.max(np.abs(rhs))),
    )
    return Residual(raw, scale)


def angular_velocity_flow_mismatch(params: ModelParams, lam: complex, pt: PhasePoint) -> float:
    """Best-case normalized mismatch of dL/dt = sigma [L, Omega + lambda J].

    Generic points give an order-one value for both signs: the commutator with
    the angular-velocity partner generates a different flow of the hierarchy
    than the energy flow.
    """
    jsq = np.asarray(params.jsq)
    omega = angular_velocity(params, pt)
    L = lax(params, lam, pt)
    B = omega + lam * np.diag(np.sqrt(jsq)).astype(complex)
    mdot = m_matrix(rigid_rhs(params, pt.coords))
    comm = L @ B - B @ L
    scale = max(float(np.max(np.abs(mdot))), float(np.max(np.abs(comm))))
    best = min(
        float(np.max(np.abs(mdot - comm))),
        float(np.max(np.abs(mdot + comm))),
    )
    return best / (1.0 + scale)
