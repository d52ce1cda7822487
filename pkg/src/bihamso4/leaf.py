"""Symplectic-leaf restriction, Nijenhuis spectrum, DN coordinates, separation.

A generic leaf is cut out by fixing the levels (h0, c2) of the Casimirs H0
and C2; on it (u1, z1, u2, z2) serve as coordinates because v1, v2 can be
eliminated.  The restricted pair (P, Q) yields the operator N = P^{-1} Q
whose double eigenvalues lambda1 (constant) and lambda2 (coordinate) organize
everything else: the conjugate coordinates (zeta1, xi1) and (lambda2, xi2),
and the two separation relations tying them to H0, C2, H1, H2.

Sign conventions fixed here (each enforced numerically elsewhere):
  * xi2 carries the sign that makes {lambda2, xi2}_P = +1, which is the
    Lie-derivative ratio value +L/(mu3 u1 u2 G F); the closed form with the
    opposite sign fails canonicity.
  * the quadratic separation relation is p xi2^2 + lambda2 H1 + H2 + Psi = 0
    with Psi = lambda2^2 H0 - mu3 F G C2; the same relation with -Psi leaves
    a reproducible nonzero residual and is rejected by the test suite.
  * xi1 uses the principal branch of the complex logarithm; assertions about
    xi1 go through its gradient, which is branch-independent.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .fields import (
    CHART_UV,
    EPS_COLL,
    EPS_DEG,
    DegeneracyError,
    PhasePoint,
    Residual,
    ScalarField,
    bracket,
    bracket_scale,
    line_poly_coeffs,
    LINE_NODES,
)
from .so4 import ModelParams
from .xxz import p1_uv, q_uv, require_symmetric, uv_observables

Array = np.ndarray

# Leaf coordinate indices inside the uv chart: (u1, z1, u2, z2).
LEAF_IN_UV = (0, 2, 3, 5)


@dataclass(frozen=True)
class LeafChart:
    """Leaf coordinates (u1, z1, u2, z2) with fixed Casimir levels (h0, c2)."""

    coords: Array
    levels: tuple

    def __post_init__(self):
        coords = np.asarray(self.coords, dtype=complex)
        if coords.shape != (4,):
            raise ValueError("dimension mismatch")
        if abs(coords[0]) <= EPS_DEG or abs(coords[2]) <= EPS_DEG:
            raise DegeneracyError("degenerate point")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "levels", (complex(self.levels[0]), complex(self.levels[1])))


@dataclass(frozen=True)
class AuxFunctions:
    """The five scalars steering the DN construction."""

    G: complex
    F: complex
    L: complex
    theta1: complex
    p1sum: complex


@dataclass(frozen=True)
class DNChart:
    """Darboux-Nijenhuis coordinates on a leaf."""

    zeta1: complex
    xi1: complex
    lambda2: complex
    xi2: complex


def embed(leaf: LeafChart) -> PhasePoint:
    """Embed a leaf point into the uv chart by eliminating v1, v2."""
    u1, z1, u2, z2 = leaf.coords
    h0, c2 = leaf.levels
    v1 = 0.5 * (h0 - c2 - 2.0 * z1**2) / u1
    v2 = 0.5 * (h0 + c2 - 2.0 * z2**2) / u2
    return PhasePoint(CHART_UV, np.array([u1, v1, z1, u2, v2, z2]))


def project(pt: PhasePoint) -> LeafChart:
    """Drop a uv point onto its own leaf (levels read off the Casimirs)."""
    if pt.chart != CHART_UV:
        raise ValueError("chart mismatch")
    c = pt.coords
    u1, v1, z1, u2, v2, z2 = c
    h0 = u1 * v1 + u2 * v2 + z1**2 + z2**2
    c2 = u2 * v2 + z2**2 - u1 * v1 - z1**2
    return LeafChart(c[list(LEAF_IN_UV)], (h0, c2))


def embed_jacobian(leaf: LeafChart) -> Array:
    """d(uv)/d(leaf), a 6x4 matrix; rows (u1,v1,z1,u2,v2,z2), cols (u1,z1,u2,z2)."""
    u1, z1, u2, z2 = leaf.coords
    uv = embed(leaf).coords
    v1, v2 = uv[1], uv[4]
    J = np.zeros((6, 4), dtype=complex)
    J[0, 0] = 1.0
    J[1, 0] = -v1 / u1
    J[1, 1] = -2.0 * z1 / u1
    J[2, 1] = 1.0
    J[3, 2] = 1.0
    J[4, 2] = -v2 / u2
    J[4, 3] = -2.0 * z2 / u2
    J[5, 3] = 1.0
    return J


def restrict_grad(field, leaf: LeafChart) -> Array:
    """Gradient of a uv scalar field restricted to the leaf, in leaf coordinates."""
    uv = embed(leaf)
    return embed_jacobian(leaf).T @ field.grad(uv.coords)


def restricted_tensors(params: ModelParams, leaf: LeafChart) -> tuple:
    """Closed-form restrictions (P, Q) of the uv pair to the leaf."""
    require_symmetric(params)
    mu1, mu2, mu3, _ = params.mu
    u1, _, u2, _ = leaf.coords
    zero = 0.0j
    P = np.array(
        [
            [zero, -u1, zero, zero],
            [u1, zero, zero, zero],
            [zero, zero, zero, u2],
            [zero, zero, -u2, zero],
        ]
    )
    q01 = -(mu3 * u2 + mu1 * u1)
    q03 = mu2 * u1 - mu3 * u2
    q12 = mu2 * u2 - mu3 * u1
    q23 = mu1 * u2 + mu3 * u1
    Q = np.array(
        [
            [zero, q01, zero, q03],
            [-q01, zero, q12, zero],
            [zero, -q12, zero, q23],
            [-q03, zero, -q23, zero],
        ]
    )
    return P, Q


def restricted_oracle_residuals(params: ModelParams, leaf: LeafChart, q_field=None, p_field=None) -> dict:
    """Printed restricted tensors against sub-brackets of the ambient tensors.

    Valid because H0 and C2 are Casimirs of both p1_uv and q_uv, so brackets
    of leaf coordinate functions close on the leaf.
    """
    if p_field is None:
        p_field = p1_uv()
    if q_field is None:
        q_field = q_uv(params)
    uv = embed(leaf)
    out = {}
    for key, ambient, printed in (
        ("P", p_field, restricted_tensors(params, leaf)[0]),
        ("Q", q_field, restricted_tensors(params, leaf)[1]),
    ):
        amb = ambient.value(uv.coords)
        sub = amb[np.ix_(LEAF_IN_UV, LEAF_IN_UV)]
        raw = float(np.max(np.abs(sub - printed)))
        scale = float(max(np.max(np.abs(sub)), np.max(np.abs(printed))))
        out[key] = Residual(raw, scale)
    return out


def nijenhuis(params: ModelParams, leaf: LeafChart) -> tuple:
    """Closed-form operator N* = P^{-1} Q and its two eigenvalues.

    Returns (N, lambda1, lambda2) with N acting on gradient 4-vectors in the
    ordering (u1, z1, u2, z2).
    """
    require_symmetric(params)
    mu1, mu2, mu3, _ = params.mu
    u1, _, u2, _ = leaf.coords
    r12 = u1 / u2
    r21 = u2 / u1
    N = np.array(
        [
            [mu3 * r21 + mu1, 0.0, mu2 * r21 - mu3, 0.0],
            [0.0, mu3 * r21 + mu1, 0.0, mu3 * r21 - mu2],
            [mu2 * r12 - mu3, 0.0, mu3 * r12 + mu1, 0.0],
            [0.0, mu3 * r12 - mu2, 0.0, mu3 * r12 + mu1],
        ],
        dtype=complex,
    )
    lam1 = complex(mu1 + mu2)
    lam2 = mu1 - mu2 + mu3 * (r12 + r21)
    if abs(lam2 - lam1) < EPS_COLL:
        raise DegeneracyError("eigenvalue collision")
    return N, lam1, lam2


def nijenhuis_closed_form_residual(params: ModelParams, leaf: LeafChart) -> Residual:
    """Printed N* against the numerical product P^{-1} Q."""
    P, Q = restricted_tensors(params, leaf)
    N, _, _ = nijenhuis(params, leaf)
    numeric = np.linalg.solve(P, Q)
    raw = float(np.max(np.abs(N - numeric)))
    scale = float(max(np.max(np.abs(N)), np.max(np.abs(numeric))))
    return Residual(raw, scale)


def nijenhuis_spectrum_residual(params: ModelParams, leaf: LeafChart) -> Residual:
    """Numerically computed spectrum of N* against the multiset {l1, l1, l2, l2}."""
    N, lam1, lam2 = nijenhuis(params, leaf)
    computed = np.linalg.eigvals(N)
    expected = np.array([lam1, lam1, lam2, lam2])
    best = min(
        max(abs(computed[p[i]] - expected[i]) for i in range(4))
        for p in permutations(range(4))
    )
    return Residual(float(best), float(max(abs(lam1), abs(lam2))))


def aux(params: ModelParams, leaf: LeafChart) -> AuxFunctions:
    """The scalars G, F, L, theta1 and the eigenvalue sum p1."""
    require_symmetric(params)
    mu1, mu2, mu3, _ = params.mu
    u1, z1, u2, z2 = leaf.coords
    r = u1 / u2 + u2 / u1
    G = u2 / u1 - u1 / u2
    F = mu3 * r - 2.0 * mu2
    L = mu3 * (z2 * u1**2 + z1 * u2**2) - mu2 * u1 * u2 * (z1 + z2)
    theta1 = 0.5 * mu3 * u1**2 - mu2 * u1 * u2 + 0.5 * mu3 * u2**2
    p1sum = 2.0 * mu1 + mu3 * r
    return AuxFunctions(complex(G), complex(F), complex(L), complex(theta1), complex(p1sum))


def _p1sum_grad(params: ModelParams, leaf: LeafChart) -> Array:
    mu3 = params.mu[2]
    u1, _, u2, _ = leaf.coords
    return np.array(
        [
            mu3 * (1.0 / u2 - u2 / u1**2),
            0.0,
            mu3 * (1.0 / u1 - u1 / u2**2),
            0.0,
        ],
        dtype=complex,
    )


def deformation_field(params: ModelParams, leaf: LeafChart) -> tuple:
    """Y = -P d(p1sum) as a leaf 4-vector, with its match to mu3 G (dz1 + dz2).

    Returns (y, Residual): y is computed from the generic recipe; the residual
    compares it with the printed form, which has components only along z1, z2.
    """
    P, _ = restricted_tensors(params, leaf)
    y = -P @ _p1sum_grad(params, leaf)
    a = aux(params, leaf)
    mu3 = params.mu[2]
    printed = np.array([0.0, mu3 * a.G, 0.0, mu3 * a.G], dtype=complex)
    raw = float(np.max(np.abs(y - printed)))
    scale = float(max(np.max(np.abs(y)), np.max(np.abs(printed))))
    return y, Residual(raw, scale)


def _leaf_h_poly(params: ModelParams, rho: complex, leaf: LeafChart) -> complex:
    obs = uv_observables(params)
    uv = embed(leaf)
    return (
        rho**2 * obs["H0"].value(uv.coords)
        + rho * obs["H1"].value(uv.coords)
        + obs["H2"].value(uv.coords)
    )


def deformation_tower(params: ModelParams, rho: complex, leaf: LeafChart) -> dict:
    """Iterated Lie derivatives of H(rho) = rho^2 H0 + rho H1 + H2 along Y.

    Y is constant along its own flow (it depends only on u and points along
    z), so its integral curves are straight lines and the restriction of
    H(rho) to one is an exact low-degree polynomial; an exact-degree fit
    yields Lie_Y^k H = k! c_k.  The self-parallelism precondition is asserted
    numerically before the fit is trusted.
    """
    y, _ = deformation_field(params, leaf)
    coords = leaf.coords
    far = LeafChart(coords + LINE_NODES[-1] * y, leaf.levels)
    y_shifted = -restricted_tensors(params, far)[0] @ _p1sum_grad(params, far)
    y_scale = float(np.max(np.abs(y)))
    if float(np.max(np.abs(y_shifted - y))) > 1e-12 * (1.0 + y_scale):
        raise RuntimeError("deformation field is not self-parallel")
    vals = [
        _leaf_h_poly(params, rho, LeafChart(coords + t * y, leaf.levels))
        for t in LINE_NODES
    ]
    coeffs = line_poly_coeffs(vals)
    scale = float(np.max(np.abs(vals)))
    lie1 = coeffs[1]
    lie2 = 2.0 * coeffs[2]
    lie3_and_up = max(6.0 * abs(coeffs[3]), 24.0 * abs(coeffs[4]), 120.0 * abs(coeffs[5]))
    return {
        "coeffs": coeffs,
        "scale": scale,
        "lie1": lie1,
        "lie2": lie2,
        "termination": Residual(float(lie3_and_up), scale),
    }


def deformation_factorization_residual(params: ModelParams, rho: complex, leaf: LeafChart) -> Residual:
    """Lie_Y H against (4 mu3 (rho - mu1 - mu2)/(u1 u2)) G L."""
    mu1, mu2, mu3, _ = params.mu
    u1, _, u2, _ = leaf.coords
    a = aux(params, leaf)
    tower = deformation_tower(params, rho, leaf)
    closed = 4.0 * mu3 * (rho - mu1 - mu2) / (u1 * u2) * a.G * a.L
    raw = abs(tower["lie1"] - closed)
    scale = max(abs(tower["lie1"]), abs(closed), tower["scale"])
    return Residual(float(raw), float(scale))


def deformation_second_residual(params: ModelParams, rho: complex, leaf: LeafChart) -> Residual:
    """Lie_Y^2 H against 4 mu3^2 (rho - mu1 - mu2) G^2 F."""
    mu1, mu2, mu3, _ = params.mu
    a = aux(params, leaf)
    tower = deformation_tower(params, rho, leaf)
    closed = 4.0 * mu3**2 * (rho - mu1 - mu2) * a.G**2 * a.F
    raw = abs(tower["lie2"] - closed)
    scale = max(abs(tower["lie2"]), abs(closed), tower["scale"])
    return Residual(float(raw), float(scale))


def _check_gf(a: AuxFunctions) -> None:
    if abs(a.G) <= EPS_DEG or abs(a.F) <= EPS_DEG:
        raise DegeneracyError("separation chart degenerate")


def xi2_closed_form(params: ModelParams, leaf: LeafChart) -> complex:
    """xi2 = L / (mu3 u1 u2 G F); the sign making {lambda2, xi2}_P = +1."""
    mu3 = params.mu[2]
    if abs(mu3) <= EPS_DEG:
        raise DegeneracyError("degenerate deformation parameter")
    a = aux(params, leaf)
    _check_gf(a)
    u1, _, u2, _ = leaf.coords
    return a.L / (mu3 * u1 * u2 * a.G * a.F)


def deformation_xi2(params: ModelParams, leaf: LeafChart) -> complex:
    """DN coordinate conjugate to lambda2 via the deformation algorithm.

    Computes both the closed form and the Lie-derivative ratio
    (Lie_Y H / Lie_Y^2 H) at rho = lambda2 and insists they agree to 1e-10
    relative; a persistent disagreement means the build is broken.
    """
    closed = xi2_closed_form(params, leaf)
    _, _, lam2 = nijenhuis(params, leaf)
    tower = deformation_tower(params, lam2, leaf)
    if tower["termination"].normalized > 1e-10:
        raise RuntimeError("deformation did not terminate")
    algorithmic = tower["lie1"] / tower["lie2"]
    if abs(algorithmic - closed) > 1e-10 * (1.0 + max(abs(algorithmic), abs(closed))):
        raise RuntimeError("deformation paths disagree")
    return complex(closed)


def dn_chart(params: ModelParams, leaf: LeafChart) -> DNChart:
    """The four DN coordinates (zeta1, xi1, lambda2, xi2) at a leaf point."""
    _, _, lam2 = nijenhuis(params, leaf)
    a = aux(params, leaf)
    if abs(a.theta1) <= EPS_DEG:
        raise DegeneracyError("theta degenerate")
    _, z1, _, z2 = leaf.coords
    zeta1 = z2 - z1
    xi1 = -0.5 * np.log(complex(a.theta1))
    xi2 = deformation_xi2(params, leaf)
    return DNChart(complex(zeta1), complex(xi1), complex(lam2), complex(xi2))


def dn_gradients(params: ModelParams, leaf: LeafChart) -> Array:
    """Rows: gradients of (zeta1, xi1, lambda2, xi2) wrt (u1, z1, u2, z2)."""
    require_symmetric(params)
    _, mu2, mu3, _ = params.mu
    if abs(mu3) <= EPS_DEG:
        raise DegeneracyError("degenerate deformation parameter")
    u1, z1, u2, z2 = leaf.coords
    a = aux(params, leaf)
    if abs(a.theta1) <= EPS_DEG:
        raise DegeneracyError("theta degenerate")
    _check_gf(a)

    d_zeta1 = np.array([0.0, -1.0, 0.0, 1.0], dtype=complex)

    d_theta1 = np.array([mu3 * u1 - mu2 * u2, 0.0, mu3 * u2 - mu2 * u1, 0.0], dtype=complex)
    d_xi1 = -d_theta1 / (2.0 * a.theta1)

    d_lam2 = np.array(
        [
            mu3 * (1.0 / u2 - u2 / u1**2),
            0.0,
            mu3 * (1.0 / u1 - u1 / u2**2),
            0.0,
        ],
        dtype=complex,
    )

    # xi2 = L / D with D = mu3 (u2^2 - u1^2) F, via u1 u2 G = u2^2 - u1^2.
    Lval = a.L
    D = mu3 * (u2**2 - u1**2) * a.F
    dL = np.array(
        [
            2.0 * mu3 * z2 * u1 - mu2 * u2 * (z1 + z2),
            mu3 * u2**2 - mu2 * u1 * u2,
            2.0 * mu3 * z1 * u2 - mu2 * u1 * (z1 + z2),
            mu3 * u1**2 - mu2 * u1 * u2,
        ],
        dtype=complex,
    )
    dF_du1 = mu3 * (u1**2 - u2**2) / (u1**2 * u2)
    dF_du2 = mu3 * (u2**2 - u1**2) / (u1 * u2**2)
    dD = np.array(
        [
            mu3 * (-2.0 * u1 * a.F + (u2**2 - u1**2) * dF_du1),
            0.0,
            mu3 * (2.0 * u2 * a.F + (u2**2 - u1**2) * dF_du2),
            0.0,
        ],
        dtype=complex,
    )
    d_xi2 = (dL * D - Lval * dD) / D**2

    return np.stack([d_zeta1, d_xi1, d_lam2, d_xi2])


_CANONICAL_4 = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)


def dn_bracket_matrix(params: ModelParams, leaf: LeafChart, structure: str = "P") -> Array:
    """Mutual brackets of the DN coordinates under the restricted P or Q."""
    P, Q = restricted_tensors(params, leaf)
    T = {"P": P, "Q": Q}.get(structure)
    if T is None:
        raise ValueError("structure must be 'P' or 'Q'")
    grads = dn_gradients(params, leaf)
    return grads @ T @ grads.T


def canonical_bracket_target(lam1: complex, lam2: complex, structure: str = "P") -> Array:
    """Expected DN bracket table: canonical under P, eigenvalue-weighted under Q."""
    if structure == "P":
        return _CANONICAL_4.astype(complex)
    if structure == "Q":
        return np.array(
            [
                [0.0, lam1, 0.0, 0.0],
                [-lam1, 0.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, lam2],
                [0.0, 0.0, -lam2, 0.0],
            ],
            dtype=complex,
        )
    raise ValueError("structure must be 'P' or 'Q'")


def dn_bracket_residuals(params: ModelParams, leaf: LeafChart) -> dict:
    """Canonicity under P, and eigenvalue-weighted canonical form under Q.

    Target brackets: {zeta1, xi1}_P = {lambda2, xi2}_P = 1 with vanishing
    cross terms; under Q the same pattern weighted by lambda1 and lambda2.
    """
    _, lam1, lam2 = nijenhuis(params, leaf)
    out = {}
    for structure in ("P", "Q"):
        target = canonical_bracket_target(lam1, lam2, structure)
        B = dn_bracket_matrix(params, leaf, structure)
        raw = float(np.max(np.abs(B - target)))
        scale = float(max(np.max(np.abs(B)), np.max(np.abs(target))))
        out[structure] = Residual(raw, scale)
    return out


def dn_eigenform_residuals(params: ModelParams, leaf: LeafChart) -> Residual:
    """N* applied to each DN gradient against eigenvalue times the gradient."""
    N, lam1, lam2 = nijenhuis(params, leaf)
    grads = dn_gradients(params, leaf)
    eigs = (lam1, lam1, lam2, lam2)
    worst = Residual(0.0, 0.0)
    for g, lam in zip(grads, eigs):
        image = N @ g
        raw = float(np.max(np.abs(image - lam * g)))
        scale = float(max(np.max(np.abs(image)), abs(lam) * np.max(np.abs(g))))
        if raw / (1.0 + scale) > worst.normalized:
            worst = Residual(raw, scale)
    return worst


def theta_bracket_residual(params: ModelParams, leaf: LeafChart) -> Residual:
    """{zeta1, theta1}_P = -2 theta1, the relation fixing xi1."""
    require_symmetric(params)
    _, mu2, mu3, _ = params.mu
    u1, _, u2, _ = leaf.coords
    P, _ = restricted_tensors(params, leaf)
    a = aux(params, leaf)
    d_zeta1 = np.array([0.0, -1.0, 0.0, 1.0], dtype=complex)
    d_theta1 = np.array([mu3 * u1 - mu2 * u2, 0.0, mu3 * u2 - mu2 * u1, 0.0], dtype=complex)
    br = d_zeta1 @ P @ d_theta1
    target = -2.0 * a.theta1
    return Residual(float(abs(br - target)), float(max(abs(br), abs(target))))


def generalized_lenard_fit(params: ModelParams, leaf: LeafChart) -> dict:
    """Least-squares fit of c in Q dH1 = P dH2 + c P dH1 on the leaf.

    Diagnostic only: reports the fitted coefficient (empirically the
    eigenvalue sum p1), the post-fit residual, and the mismatch with p1.
    """
    obs = uv_observables(params)
    P, Q = restricted_tensors(params, leaf)
    g1 = restrict_grad(obs["H1"], leaf)
    g2 = restrict_grad(obs["H2"], leaf)
    lhs = Q @ g1 - P @ g2
    col = P @ g1
    denom = np.vdot(col, col)
    if abs(denom) == 0.0:
        raise DegeneracyError("degenerate point")
    c = complex(np.vdot(col, lhs) / denom)
    resid = float(np.max(np.abs(lhs - c * col)))
    scale = float(max(np.max(np.abs(lhs)), np.max(np.abs(c * col))))
    a = aux(params, leaf)
    return {
        "c": c,
        "residual": Residual(resid, scale),
        "p1_mismatch": abs(c - a.p1sum),
    }


def q_extra_casimir_residuals(params: ModelParams, leaf: LeafChart) -> dict:
    """How Q acts on the restricted Hamiltonians: H0-level direction is exact 0.

    On the leaf H0 and C2 are constants, so the interesting quantities are
    Q dH1 and Q dH2 against the chain built from P: Q dH2 = -lambda1 lambda2
    P dH1 holds, while Q dH1 is NOT zero (H1 is not a Casimir of Q).
    """
    obs = uv_observables(params)
    P, Q = restricted_tensors(params, leaf)
    _, lam1, lam2 = nijenhuis(params, leaf)
    g1 = restrict_grad(obs["H1"], leaf)
    g2 = restrict_grad(obs["H2"], leaf)
    chain = Q @ g2 + lam1 * lam2 * (P @ g1)
    chain_scale = float(max(np.max(np.abs(Q @ g2)), np.max(np.abs(lam1 * lam2 * (P @ g1)))))
    h1_image = Q @ g1
    h1_scale = float(np.max(np.abs(Q)) * np.max(np.abs(g1)))
    return {
        "qdh2_chain": Residual(float(np.max(np.abs(chain))), chain_scale),
        "qdh1_norm": Residual(float(np.max(np.abs(h1_image))), h1_scale),
    }


def zeta1_involution_residuals(params: ModelParams, pt: PhasePoint) -> dict:
    """zeta1 = z2 - z1 commutes with H1 and H2 under the ambient first structure."""
    if pt.chart != CHART_UV:
        raise ValueError("chart mismatch")
    obs = uv_observables(params)
    zeta = ScalarField(
        CHART_UV,
        lambda c: c[5] - c[2],
        lambda c: np.array([0.0, 0.0, -1.0, 0.0, 0.0, 1.0], dtype=complex),
        name="zeta1",
    )
    P = p1_uv()
    out = {}
    for name in ("H1", "H2"):
        br = bracket(P, obs[name], zeta, pt)
        out[name] = Residual(float(abs(br)), bracket_scale(P, obs[name], zeta, pt))
    return out


def _separation_guard(params: ModelParams, pt: PhasePoint) -> None:
    require_symmetric(params)
    mu1, mu2 = params.mu[0], params.mu[1]
    if abs(mu1 + mu2) <= EPS_DEG:
        raise ValueError("degenerate constant eigenvalue")
    if pt.chart != CHART_UV:
        raise ValueError("chart mismatch")


def phi1_residual(params: ModelParams, pt: PhasePoint) -> Residual:
    """First separation relation at any uv point (no degeneracy guard needed).

    Phi1 = alpha zeta1^2 + H1 + beta H2 + gamma1 H0 with
    alpha = 2 (mu3^2 - mu2^2)/(mu1 + mu2), beta = 1/(mu1 + mu2),
    gamma1 = mu1 + mu2; the C2 coefficient vanishes.
    """
    _separation_guard(params, pt)
    mu1, mu2, mu3, _ = params.mu
    obs = uv_observables(params)
    c = pt.coords
    zeta1 = c[5] - c[2]
    alpha = 2.0 * (mu3**2 - mu2**2) / (mu1 + mu2)
    beta = 1.0 / (mu1 + mu2)
    gamma1 = mu1 + mu2
    terms = (
        alpha * zeta1**2,
        obs["H1"].value(c),
        beta * obs["H2"].value(c),
        gamma1 * obs["H0"].value(c),
    )
    return Residual(abs(sum(terms)), float(max(abs(t) for t in terms)))


def phi2_residual(params: ModelParams, pt: PhasePoint) -> Residual:
    """Second separation relation at a nondegenerate uv point.

    Phi2 = p xi2^2 + lambda2 H1 + H2 + Psi with p = -2 mu3^2 F^2 G^2 and
    Psi = lambda2^2 H0 - mu3 F G C2; lambda2, F, G, xi2 all come from the
    point's own (u1, z1, u2, z2).
    """
    _separation_guard(params, pt)
    mu1, mu2, mu3, _ = params.mu
    obs = uv_observables(params)
    c = pt.coords
    leaf = project(pt)
    a = aux(params, leaf)
    _check_gf(a)
    _, _, lam2 = nijenhuis(params, leaf)
    xi2 = xi2_closed_form(params, leaf)
    p = -2.0 * mu3**2 * a.F**2 * a.G**2
    terms = (
        p * xi2**2,
        lam2 * obs["H1"].value(c),
        obs["H2"].value(c),
        lam2**2 * obs["H0"].value(c),
        -mu3 * a.F * a.G * obs["C2"].value(c),
    )
    return Residual(abs(sum(terms)), float(max(abs(t) for t in terms)))


def separation_residuals(params: ModelParams, pt: PhasePoint) -> tuple:
    """Residuals of the two Jacobi separation relations at a uv point."""
    return phi1_residual(params, pt), phi2_residual(params, pt)
