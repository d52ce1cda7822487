"""Chart-tagged scalar/vector/bivector fields and coordinate tensor calculus.

Fields bundle exact value and derivative callables with the name of the chart
they live on.  Every operation checks chart compatibility before touching
numbers, and derivative layouts follow one convention throughout: Jacobians of
vector fields are J[i, l] = d(value_i)/d(coord_l), Jacobians of bivector
fields are J[i, j, l] = d(value_ij)/d(coord_l) (derivative index last).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

Array = np.ndarray

# Chart tags shared by the whole package.
CHART_M = "M"
CHART_SPLIT = "SPLIT"
CHART_UV = "UV"
CHART_LEAF = "LEAF"

# Degeneracy guards (absolute, coordinates are sampled at order one).
EPS_DEG = 1e-8
EPS_COLL = 1e-6

# Finite-difference step scale and agreement tolerance for gradient checks.
FD_STEP = 1e-5
FD_RTOL = 1e-6


class DegeneracyError(ValueError):
    """A guard rejected the evaluation point; samplers catch this and redraw."""


@dataclass(frozen=True)
class PhasePoint:
    """A point of one of the charts: a tag plus a coordinate array."""

    chart: str
    coords: Array

    def __post_init__(self):
        object.__setattr__(self, "coords", np.asarray(self.coords))


@dataclass(frozen=True)
class ScalarField:
    """Scalar function with exact gradient, tied to a chart."""

    chart: str
    value: Callable[[Array], complex]
    grad: Callable[[Array], Array]
    name: str = ""


@dataclass(frozen=True)
class VectorField:
    """Vector field with exact Jacobian J[i, l] = d v_i / d x_l."""

    chart: str
    value: Callable[[Array], Array]
    jac: Callable[[Array], Array]
    name: str = ""


@dataclass(frozen=True)
class BivectorField:
    """Antisymmetric matrix field with exact derivative J[i, j, l] = d P_ij / d x_l."""

    chart: str
    value: Callable[[Array], Array]
    jac: Callable[[Array], Array]
    name: str = ""


class Residual(NamedTuple):
    """Raw residual magnitude together with the scale of the terms that formed it."""

    raw: float
    scale: float

    @property
    def normalized(self) -> float:
        return self.raw / (1.0 + self.scale)


def _require_chart(chart: str, *objs) -> None:
    for obj in objs:
        if obj.chart != chart:
            raise ValueError("chart mismatch")


def bracket(P: BivectorField, f: ScalarField, g: ScalarField, pt: PhasePoint) -> complex:
    """Poisson bracket {f, g} = df . P . dg at pt."""
    _require_chart(pt.chart, P, f, g)
    return f.grad(pt.coords) @ P.value(pt.coords) @ g.grad(pt.coords)


def bracket_scale(P: BivectorField, f: ScalarField, g: ScalarField, pt: PhasePoint) -> float:
    """Largest summand magnitude |df_i P_ij dg_j| entering bracket(P, f, g, pt)."""
    _require_chart(pt.chart, P, f, g)
    gf = np.abs(f.grad(pt.coords))
    gg = np.abs(g.grad(pt.coords))
    return float(np.max(gf[:, None] * np.abs(P.value(pt.coords)) * gg[None, :]))


def ham_field(P: BivectorField, f: ScalarField, pt: PhasePoint) -> Array:
    """Hamiltonian vector field P . df evaluated at pt."""
    _require_chart(pt.chart, P, f)
    return P.value(pt.coords) @ f.grad(pt.coords)


def ham_field_scale(P: BivectorField, f: ScalarField, pt: PhasePoint) -> float:
    """Largest summand magnitude in any component of P . df at pt."""
    _require_chart(pt.chart, P, f)
    g = np.abs(f.grad(pt.coords))
    return float(np.max(np.abs(P.value(pt.coords)) * g[None, :]))


def schouten_residual(P: BivectorField, Q: BivectorField, pt: PhasePoint) -> Residual:
    """Max-norm of the Schouten bracket [P, Q] at pt, with its summand scale.

    S^ijk = sum_l (P^lj d_l Q^ik + Q^lj d_l P^ik) + cyclic(i, j, k); the
    residual is max_ijk |S^ijk|, zero iff P and Q are compatible at pt
    (Jacobi identity for Q = P).  The expression is symmetric under P <-> Q.
    """
    _require_chart(pt.chart, P, Q)
    c = pt.coords
    p = P.value(c)
    q = Q.value(c)
    if p.shape != q.shape:
        raise ValueError("dimension mismatch")
    dp = P.jac(c)
    dq = Q.jac(c)
    T = np.einsum("lj,ikl->ijk", p, dq) + np.einsum("lj,ikl->ijk", q, dp)
    S = T + T.transpose(1, 2, 0) + T.transpose(2, 0, 1)
    # Scale: largest single product |P^lj d_l Q^ik| (or mirror) over all indices.
    ap, aq, adp, adq = np.abs(p), np.abs(q), np.abs(dp), np.abs(dq)
    mag1 = ap[:, :, None, None] * adq.transpose(2, 0, 1)[:, None, :, :]
    mag2 = aq[:, :, None, None] * adp.transpose(2, 0, 1)[:, None, :, :]
    scale = float(max(mag1.max(), mag2.max()))
    return Residual(float(np.max(np.abs(S))), scale)


def lie_scalar(Z: VectorField, f: ScalarField, pt: PhasePoint) -> complex:
    """Directional derivative Z(f) = df . Z at pt."""
    _require_chart(pt.chart, Z, f)
    return f.grad(pt.coords) @ Z.value(pt.coords)


def lie_bivector(Z: VectorField, P: BivectorField, pt: PhasePoint) -> Array:
    """(Lie_Z P)^ij = Z^l d_l P^ij - P^lj d_l Z^i - P^il d_l Z^j at pt."""
    _require_chart(pt.chart, Z, P)
    c = pt.coords
    z = Z.value(c)
    zj = Z.jac(c)
    p = P.value(c)
    dp = P.jac(c)
    term1 = np.einsum("l,ijl->ij", z, dp)
    term2 = np.einsum("lj,il->ij", p, zj)
    term3 = np.einsum("il,jl->ij", p, zj)
    return term1 - term2 - term3


def lie_bivector_scale(Z: VectorField, P: BivectorField, pt: PhasePoint) -> float:
    """Largest summand magnitude entering lie_bivector(Z, P, pt)."""
    c = pt.coords
    az = np.abs(Z.value(c))
    azj = np.abs(Z.jac(c))
    ap = np.abs(P.value(c))
    adp = np.abs(P.jac(c))
    m1 = np.max(az[None, None, :] * adp)
    m2 = np.max(np.einsum("lj,il->ijl", ap, azj))
    return float(max(m1, m2))


def wedge(X: VectorField, Z: VectorField, pt: PhasePoint) -> Array:
    """Decomposable bivector (X ^ Z)^ij = X^i Z^j - X^j Z^i at pt."""
    _require_chart(pt.chart, X, Z)
    x = X.value(pt.coords)
    z = Z.value(pt.coords)
    return np.outer(x, z) - np.outer(z, x)


def wedge_field(X: VectorField, Z: VectorField) -> BivectorField:
    """X ^ Z as a BivectorField with exact derivatives from the factor Jacobians."""
    if X.chart != Z.chart:
        raise ValueError("chart mismatch")

    def value(c: Array) -> Array:
        x = X.value(c)
        z = Z.value(c)
        return np.outer(x, z) - np.outer(z, x)

    def jac(c: Array) -> Array:
        x = X.value(c)
        z = Z.value(c)
        xj = X.jac(c)
        zj = Z.jac(c)
        # d(X^i Z^j - X^j Z^i)/d x_l
        t = np.einsum("il,j->ijl", xj, z) + np.einsum("i,jl->ijl", x, zj)
        return t - t.transpose(1, 0, 2)

    name = f"{X.name}^{Z.name}" if (X.name and Z.name) else ""
    return BivectorField(X.chart, value, jac, name=name)


def fd_grad(value: Callable[[Array], complex], coords: Array, step: float = FD_STEP) -> Array:
    """Central-difference gradient; steps are real also for complex coordinates."""
    c = np.asarray(coords)
    n = c.shape[0]
    out = np.empty(n, dtype=complex)
    for i in range(n):
        h = step * (1.0 + abs(c[i]))
        e = np.zeros(n)
        e[i] = h
        out[i] = (value(c + e) - value(c - e)) / (2.0 * h)
    if not np.iscomplexobj(c) and np.max(np.abs(out.imag)) == 0.0:
        return out.real
    return out


def fd_jac(value: Callable[[Array], Array], coords: Array, step: float = FD_STEP) -> Array:
    """Central-difference Jacobian of an array-valued map, derivative index last."""
    c = np.asarray(coords)
    n = c.shape[0]
    base = np.asarray(value(c))
    out = np.empty(base.shape + (n,), dtype=complex)
    for i in range(n):
        h = step * (1.0 + abs(c[i]))
        e = np.zeros(n)
        e[i] = h
        out[..., i] = (np.asarray(value(c + e)) - np.asarray(value(c - e))) / (2.0 * h)
    return out


def grad_fd_residual(f: ScalarField, pt: PhasePoint) -> Residual:
    """Relative disagreement between the exact gradient of f and central differences."""
    _require_chart(pt.chart, f)
    exact = np.asarray(f.grad(pt.coords))
    approx = fd_grad(f.value, pt.coords)
    raw = float(np.max(np.abs(exact - approx)))
    scale = float(max(np.max(np.abs(exact)), np.max(np.abs(approx))))
    return Residual(raw, scale)


def jac_fd_residual(F: VectorField | BivectorField, pt: PhasePoint) -> Residual:
    """Relative disagreement between the exact Jacobian of F and central differences."""
    _require_chart(pt.chart, F)
    exact = np.asarray(F.jac(pt.coords))
    approx = fd_jac(F.value, pt.coords)
    raw = float(np.max(np.abs(exact - approx)))
    scale = float(max(np.max(np.abs(exact)), np.max(np.abs(approx))))
    return Residual(raw, scale)


# Interpolation nodes for Lie derivatives along straight flow lines.  A field
# W that is constant along its own flow (W(p + t W(p)) = W(p)) has straight
# integral lines, so f(p + t W(p)) is evaluated exactly and iterated Lie
# derivatives are k! times the polynomial coefficients of an exact-degree fit.
LINE_NODES = np.array([-1.0, -0.6, -0.2, 0.2, 0.6, 1.0])
_VANDER_INV = np.linalg.inv(np.vander(LINE_NODES, 6, increasing=True))


def line_poly_coeffs(values) -> Array:
    """Coefficients c_0..c_5 of the quintic through (LINE_NODES, values)."""
    values = np.asarray(values, dtype=complex)
    if values.shape != LINE_NODES.shape:
        raise ValueError("dimension mismatch")
    return _VANDER_INV @ values


def linear_bivector(chart: str, value: Callable[[Array], Array], dim: int, name: str = "") -> BivectorField:
    """Bivector field whose entries are linear in the coordinates.

    The derivative array is assembled once by evaluating at basis vectors,
    which is exact for linear entries.
    """
    cols = [np.asarray(value(np.eye(dim)[l])) for l in range(dim)]
    jac_const = np.stack(cols, axis=-1).astype(complex)

    def jac(_c: Array) -> Array:
        return jac_const

    return BivectorField(chart, value, jac, name=name)
