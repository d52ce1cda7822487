"""Seeded verification suite: every identity in the package over random ensembles.

The registry pattern: each check is a (name, tolerance, point kind, function)
row; the suite owns sampling, skip accounting, normalization and report
assembly only.  All residuals are compared as raw/(1+scale) against
tolerance x tol_scale, where scale is the magnitude of the largest term that
entered the identity.

Default tolerance tiers:
  1e-12 x scale for exact linear algebra (closed forms, Casimirs, chains),
  1e-11 x scale for Schouten brackets and compatibility,
  1e-9  x scale for composed pipelines (Stackel, Lax flow, eigenforms, Phi2),
  1e-6  relative for finite-difference gradient cross-checks.

Supported mutation overrides (each flips exactly one sign deep inside the
build, and must make at least one check fail loudly; used by the
sensitivity tests):
  "q_sign"     : the deformed structure becomes P2 + X1^Z instead of P2 - X1^Z.
  "h2_sign"    : the quartic invariant becomes H2 + 4 mu3^2 (z1-z2)^2
                 (the sign of its -2 mu3^2 (z1-z2)^2 term is flipped).
  "nstar_sign" : the (0,2) entry of the closed-form N* gets +mu3 for -mu3.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import leaf as leaf_mod
from . import so4, xxz
from .fields import (
    CHART_M,
    CHART_SPLIT,
    CHART_UV,
    EPS_COLL,
    EPS_DEG,
    BivectorField,
    DegeneracyError,
    PhasePoint,
    Residual,
    ScalarField,
    bracket,
    bracket_scale,
    grad_fd_residual,
    ham_field,
    ham_field_scale,
    lie_bivector,
    lie_bivector_scale,
    lie_scalar,
    schouten_residual,
    wedge_field,
)
from .leaf import LeafChart
from .so4 import ModelParams

SCHEMA = "biham-euler-so4/v1"

TOL_EXACT = 1e-12
TOL_SCHOUTEN = 1e-11
TOL_PIPELINE = 1e-9
TOL_FD = 1e-6
TOL_ROUNDTRIP = 1e-13
TOL_DN = 1e-10
TOL_SPECTRUM = 1e-9

KNOWN_OVERRIDES = ("q_sign", "h2_sign", "nstar_sign")

_MAX_CONSECUTIVE_REJECTS = 1000


@dataclass
class SampleSet:
    points: list
    n_resampled: int


@dataclass
class CheckResult:
    name: str
    tolerance: float
    max_residual: float | None = None
    passed: bool | None = None
    skipped: bool = False
    note: str = ""
    n_evaluated: int = 0
    n_skipped_degenerate: int = 0


@dataclass
class VerificationReport:
    seed: int
    n_points: int
    tol_scale: float
    params: ModelParams
    overrides: tuple
    checks: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    resamples: dict = field(default_factory=dict)
    overall: bool = False

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "seed": self.seed,
            "n_points": self.n_points,
            "tol_scale": self.tol_scale,
            "params": {
                "mu": list(self.params.mu),
                "jsq": list(self.params.jsq),
                "symmetric": self.params.symmetric,
            },
            "overrides": list(self.overrides),
            "resamples": dict(self.resamples),
            "checks": [
                {
                    "name": c.name,
                    "max_residual": c.max_residual,
                    "tolerance": c.tolerance,
                    "pass": c.passed,
                    "skipped": c.skipped,
                    "note": c.note,
                    "n_evaluated": c.n_evaluated,
                    "n_skipped_degenerate": c.n_skipped_degenerate,
                }
                for c in self.checks
            ],
            "diagnostics": list(self.diagnostics),
            "overall": self.overall,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def validate_report(doc: dict) -> None:
    """Structural validation of a report dictionary; raises ValueError."""
    if not isinstance(doc, dict):
        raise ValueError("report must be an object")
    if doc.get("schema") != SCHEMA:
        raise ValueError("unknown schema")
    for key, types in (
        ("seed", int),
        ("n_points", int),
        ("tol_scale", (int, float)),
        ("params", dict),
        ("overrides", list),
        ("resamples", dict),
        ("checks", list),
        ("diagnostics", list),
        ("overall", bool),
    ):
        if key not in doc:
            raise ValueError(f"missing field: {key}")
        if not isinstance(doc[key], types):
            raise ValueError(f"bad type for field: {key}")
    params = doc["params"]
    for key, n in (("mu", 4), ("jsq", 4)):
        if key not in params or not isinstance(params[key], list) or len(params[key]) != n:
            raise ValueError(f"bad params.{key}")
    if not isinstance(params.get("symmetric"), bool):
        raise ValueError("bad params.symmetric")
    for c in doc["checks"]:
        for key in ("name", "max_residual", "tolerance", "pass", "skipped", "note", "n_evaluated", "n_skipped_degenerate"):
            if key not in c:
                raise ValueError(f"check missing field: {key}")
        if not isinstance(c["name"], str) or not isinstance(c["skipped"], bool):
            raise ValueError("bad check row")
        if not c["skipped"]:
            if not isinstance(c["max_residual"], (int, float)):
                raise ValueError("bad check max_residual")
            if not isinstance(c["pass"], bool):
                raise ValueError("bad check pass")
    for d in doc["diagnostics"]:
        if "name" not in d or "value" not in d:
            raise ValueError("bad diagnostic row")


def _uv_nondegenerate(params: ModelParams, u1: complex, u2: complex) -> bool:
    mu1, mu2, mu3, _ = params.mu
    if abs(u1) <= 0.1 or abs(u2) <= 0.1:
        return False
    g = u2 / u1 - u1 / u2
    f = mu3 * (u1 / u2 + u2 / u1) - 2.0 * mu2
    theta1 = 0.5 * mu3 * u1**2 - mu2 * u1 * u2 + 0.5 * mu3 * u2**2
    # f equals lambda2 - lambda1, so the collision threshold subsumes eps_deg.
    return abs(g) > EPS_DEG and abs(f) > max(EPS_DEG, EPS_COLL) and abs(theta1) > EPS_DEG


def uv_guards(params: ModelParams) -> list:
    """Default guard predicates for UV_complex sampling."""
    return [lambda pt: _uv_nondegenerate(params, pt.coords[0], pt.coords[3])]


def leaf_guards(params: ModelParams) -> list:
    """Default guard predicates for LEAF sampling."""
    return [lambda leaf: _uv_nondegenerate(params, leaf.coords[0], leaf.coords[2])]


def sample_points(kind: str, n: int, seed: int, guards=None) -> SampleSet:
    """Draw n guarded points of the given kind, deterministically in seed."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    guards = list(guards) if guards is not None else []
    points = []
    n_resampled = 0

    def draw():
        if kind == "M_real":
            return PhasePoint(CHART_M, rng.uniform(-1.0, 1.0, 6))
        if kind == "UV_complex":
            re = rng.uniform(-1.0, 1.0, 6)
            im = rng.uniform(-1.0, 1.0, 6)
            return PhasePoint(CHART_UV, re + 1j * im)
        if kind == "LEAF":
            re = rng.uniform(-1.0, 1.0, 6)
            im = rng.uniform(-1.0, 1.0, 6)
            c = re + 1j * im
            return LeafChart(c[:4], (c[4], c[5]))
        raise ValueError("unknown point kind")

    while len(points) < n:
        rejects = 0
        while True:
            try:
                candidate = draw()
            except DegeneracyError:
                candidate = None
            if candidate is not None and all(g(candidate) for g in guards):
                points.append(candidate)
                break
            rejects += 1
            n_resampled += 1
            if rejects > _MAX_CONSECUTIVE_REJECTS:
                raise RuntimeError("sampler starved")
    return SampleSet(points, n_resampled)


def _mutated_uv_observables(params: ModelParams, mutate_h2: bool) -> dict:
    obs = xxz.uv_observables(params)
    if not mutate_h2:
        return obs
    mu3 = params.mu[2]

    base = obs["H2"]

    def value(c):
        return base.value(c) + 4.0 * mu3**2 * (c[2] - c[5]) ** 2

    def grad(c):
        g = np.array(base.grad(c), dtype=complex)
        g[2] += 8.0 * mu3**2 * (c[2] - c[5])
        g[5] -= 8.0 * mu3**2 * (c[2] - c[5])
        return g

    out = dict(obs)
    out["H2"] = ScalarField(CHART_UV, value, grad, name="H2")
    return out


def _mutated_q_field(params: ModelParams, mutate_q: bool) -> BivectorField:
    if not mutate_q:
        return xxz.q_uv(params)
    p2 = xxz.p2_uv(params)
    w = wedge_field(xxz.x1_field(params), xxz.z_field())
    return BivectorField(
        CHART_UV,
        lambda c: p2.value(c) + w.value(c),
        lambda c: p2.jac(c) + w.jac(c),
        name="Q",
    )


def _mutated_nijenhuis(params: ModelParams, leaf: LeafChart, mutate_n: bool):
    N, lam1, lam2 = leaf_mod.nijenhuis(params, leaf)
    if mutate_n:
        N = N.copy()
        N[0, 2] += 2.0 * params.mu[2]
    return N, lam1, lam2


def _pencil(P: BivectorField, Q: BivectorField, t: complex) -> BivectorField:
    return BivectorField(
        P.chart,
        lambda c: P.value(c) + t * Q.value(c),
        lambda c: P.jac(c) + t * Q.jac(c),
        name="pencil",
    )


def _matrix_residual(delta: np.ndarray, *mags: float) -> Residual:
    return Residual(float(np.max(np.abs(delta))), float(max(mags)))


def run_suite(
    params: ModelParams,
    seed: int = 0,
    n_points: int = 50,
    overrides: tuple = (),
    tol_scale: float = 1.0,
) -> VerificationReport:
    """Run the full registry and assemble a VerificationReport."""
    overrides = tuple(overrides)
    for name in overrides:
        if name not in KNOWN_OVERRIDES:
            raise ValueError(f"unknown override: {name}")
    if params.symmetric and abs(params.mu[0] + params.mu[1]) <= EPS_DEG:
        raise ValueError("degenerate constant eigenvalue")

    mutate_q = "q_sign" in overrides
    mutate_h2 = "h2_sign" in overrides
    mutate_n = "nstar_sign" in overrides

    report = VerificationReport(
        seed=seed, n_points=n_points, tol_scale=tol_scale, params=params, overrides=overrides
    )

    registry = []

    def add(name, tol, points, fn):
        registry.append((name, tol, points, fn))

    # ---------------- general-model checks (M chart) ----------------

    m_set = sample_points("M_real", n_points, seed)
    report.resamples["M_real"] = m_set.n_resampled
    m_pts = m_set.points

    P1m = so4.p1_m()
    P2m = so4.p2_m(params)
    obs_m = so4.observables_m(params)

    def fd_m(pt):
        return [grad_fd_residual(f, pt) for f in obs_m.values()]

    add("gradient_fd_m", TOL_FD, m_pts, fd_m)
    add("jacobi_p1_m", TOL_EXACT, m_pts, lambda pt: [schouten_residual(P1m, P1m, pt)])
    add("jacobi_p2_m", TOL_EXACT, m_pts, lambda pt: [schouten_residual(P2m, P2m, pt)])
    add("compat_p1_p2_m", TOL_EXACT, m_pts, lambda pt: [schouten_residual(P1m, P2m, pt)])

    pencil_rng = np.random.default_rng([seed, 11])

    def pencil_m(pt):
        t = complex(pencil_rng.uniform(-1, 1), pencil_rng.uniform(-1, 1))
        span = _pencil(P1m, P2m, t)
        return [schouten_residual(span, span, pt)]

    add("pencil_jacobi_m", TOL_EXACT, m_pts, pencil_m)

    add(
        "lenard_chain",
        TOL_EXACT,
        m_pts,
        lambda pt: list(so4.lenard_residuals_m(params, pt).values()),
    )

    charpoly_rng = np.random.default_rng([seed, 12])

    def charpoly_m(pt):
        lam = complex(charpoly_rng.uniform(-1, 1), charpoly_rng.uniform(-1, 1))
        rho = complex(charpoly_rng.uniform(-1, 1), charpoly_rng.uniform(-1, 1))
        return [so4.char_poly_residual(params, lam, rho, pt)]

    add("charpoly_identity", TOL_PIPELINE, m_pts, charpoly_m)

    mu1, mu2, mu3, mu4 = params.mu

    def he_split(pt):
        s = so4.chart_map(pt, CHART_SPLIT)
        x1, y1, z1, x2, y2, z2 = s.coords
        terms = (
            2.0 * mu4 * x1 * x2,
            2.0 * mu3 * y1 * y2,
            2.0 * mu2 * z1 * z2,
            mu1 * float(s.coords @ s.coords),
        )
        closed = sum(terms)
        he = obs_m["HE"].value(pt.coords)
        return [Residual(abs(he - closed), max(abs(he), max(abs(t) for t in terms)))]

    add("he_split_form", TOL_EXACT, m_pts, he_split)

    def roundtrip(pt):
        uv = so4.chart_map(so4.chart_map(pt, CHART_SPLIT), CHART_UV)
        back = so4.chart_map(so4.chart_map(uv, CHART_SPLIT), CHART_M)
        raw = float(np.max(np.abs(back.coords - pt.coords)))
        return [Residual(raw, float(np.max(np.abs(pt.coords))))]

    add("chart_roundtrip", TOL_ROUNDTRIP, m_pts, roundtrip)

    jsq = np.asarray(params.jsq)
    lax_ok = bool(np.all(jsq > 0.0))
    lax_rng = np.random.default_rng([seed, 13])

    if lax_ok:

        def lax_flow(pt):
            lam = complex(lax_rng.uniform(-1, 1), lax_rng.uniform(-1, 1))
            return [so4.lax_flow_residual(params, lam, pt)]

        def lax_comm(pt):
            lam = complex(lax_rng.uniform(-1, 1), lax_rng.uniform(-1, 1))
            return [so4.angular_velocity_commutator_residual(params, lam, pt)]

        add("lax_flow", TOL_PIPELINE, m_pts, lax_flow)
        add("lax_angular_commutator", TOL_EXACT, m_pts, lax_comm)
    else:
        for name in ("lax_flow", "lax_angular_commutator"):
            report.checks.append(
                CheckResult(
                    name=name,
                    tolerance=0.0,
                    skipped=True,
                    note="skipped: inertia spectrum not real positive",
                )
            )

    # ---------------- symmetric-only checks (UV chart and leaf) ----------------

    if params.symmetric:
        uv_set = sample_points("UV_complex", n_points, seed + 1, guards=uv_guards(params))
        leaf_set = sample_points("LEAF", n_points, seed + 2, guards=leaf_guards(params))
        report.resamples["UV_complex"] = uv_set.n_resampled
        report.resamples["LEAF"] = leaf_set.n_resampled
        uv_pts = uv_set.points
        leaf_pts = leaf_set.points

        obs_uv = _mutated_uv_observables(params, mutate_h2)
        P1u = xxz.p1_uv()
        P2u = xxz.p2_uv(params)
        Qu = _mutated_q_field(params, mutate_q)
        X1 = xxz.x1_field(params)
        Zf = xxz.z_field()

        def fd_uv(pt):
            return [grad_fd_residual(f, pt) for f in obs_uv.values()]

        add("gradient_fd_uv", TOL_FD, uv_pts, fd_uv)

        def transport(pt):
            res = []
            mo = so4.observables_m(params)
            m_pt = so4.chart_map(pt, CHART_M, complex_ok=True)
            targets = {
                "H0": mo["H0"].value(m_pt.coords),
                "C2": 2.0 * mo["C"].value(m_pt.coords),
                "H1": -2.0 * mo["HE"].value(m_pt.coords),
                "H2": mo["KE"].value(m_pt.coords),
            }
            for name, target in targets.items():
                got = obs_uv[name].value(pt.coords)
                res.append(Residual(abs(got - target), max(abs(got), abs(target))))
            return res

        add("observable_transport", TOL_EXACT, uv_pts, transport)

        def uv_scale(pt):
            res = xxz.uv_transport_residuals(params, pt)
            return [res["p1"], res["p2"]]

        add("uv_tensor_scale", TOL_EXACT, uv_pts, uv_scale)

        charpoly_uv_rng = np.random.default_rng([seed, 14])

        def charpoly_uv(pt):
            lam = complex(charpoly_uv_rng.uniform(-1, 1), charpoly_uv_rng.uniform(-1, 1))
            rho = complex(charpoly_uv_rng.uniform(-1, 1), charpoly_uv_rng.uniform(-1, 1))
            c = pt.coords
            h0 = obs_uv["H0"].value(c)
            h1 = obs_uv["H1"].value(c)
            h2 = obs_uv["H2"].value(c)
            c2 = obs_uv["C2"].value(c)
            m_pt = so4.chart_map(pt, CHART_M, complex_ok=True)
            det = so4.det4(so4.lax(params, lam, m_pt) - rho * lam * np.eye(4))
            terms = (
                lam**4 * np.prod(np.asarray(params.jsq, dtype=complex) - rho),
                lam**2 * rho**2 * h0,
                lam**2 * rho * h1,
                lam**2 * h2,
                0.25 * c2**2,
            )
            closed = sum(terms)
            return [Residual(abs(det - closed), max(abs(det), max(abs(t) for t in terms)))]

        add("charpoly_identity_uv", TOL_PIPELINE, uv_pts, charpoly_uv)

        add("jacobi_p1_uv", TOL_SCHOUTEN, uv_pts, lambda pt: [schouten_residual(P1u, P1u, pt)])
        add("jacobi_p2_uv", TOL_SCHOUTEN, uv_pts, lambda pt: [schouten_residual(P2u, P2u, pt)])
        add("jacobi_q_uv", TOL_SCHOUTEN, uv_pts, lambda pt: [schouten_residual(Qu, Qu, pt)])
        add("compat_p1_p2_uv", TOL_SCHOUTEN, uv_pts, lambda pt: [schouten_residual(P1u, P2u, pt)])
        add("compat_p1_q_uv", TOL_SCHOUTEN, uv_pts, lambda pt: [schouten_residual(P1u, Qu, pt)])

        def x1_match(pt):
            ham = ham_field(P1u, obs_uv["H1"], pt)
            direct = X1.value(pt.coords)
            raw = float(np.max(np.abs(ham - direct)))
            return [Residual(raw, ham_field_scale(P1u, obs_uv["H1"], pt))]

        add("x1_hamiltonian", TOL_EXACT, uv_pts, x1_match)

        zeta_uv = ScalarField(
            CHART_UV,
            lambda c: c[5] - c[2],
            lambda c: np.array([0.0, 0.0, -1.0, 0.0, 0.0, 1.0], dtype=complex),
            name="zeta1",
        )

        def x1_zeta(pt):
            val = lie_scalar(X1, zeta_uv, pt)
            return [Residual(abs(val), float(np.max(np.abs(X1.value(pt.coords)))))]

        add("x1_conserves_zeta1", TOL_EXACT, uv_pts, x1_zeta)

        def trans_p1(pt):
            delta = lie_bivector(Zf, P1u, pt)
            return [_matrix_residual(delta, lie_bivector_scale(Zf, P1u, pt))]

        add("transversal_p1_symmetry", TOL_EXACT, uv_pts, trans_p1)

        def trans_norm(pt):
            r_h0 = abs(lie_scalar(Zf, obs_uv["H0"], pt) - 1.0)
            r_c2 = abs(lie_scalar(Zf, obs_uv["C2"], pt))
            return [Residual(max(r_h0, r_c2), 1.0)]

        add("transversal_normalization", TOL_EXACT, uv_pts, trans_norm)

        def trans_h1_h2(pt):
            c = pt.coords
            lam1 = xxz.constant_eigenvalue(params)
            lam2 = xxz.variable_eigenvalue(params, c)
            p1sum = lam1 + lam2
            r1 = lie_scalar(Zf, obs_uv["H1"], pt) + p1sum
            r2 = lie_scalar(Zf, obs_uv["H2"], pt) - lam1 * lam2
            scale = max(abs(p1sum), abs(lam1 * lam2), 1.0)
            return [Residual(max(abs(r1), abs(r2)), float(scale))]

        add("transversal_h1_h2", TOL_EXACT, uv_pts, trans_h1_h2)

        def trans_p2_shape(pt):
            delta = lie_bivector(Zf, P2u, pt)
            svals = np.linalg.svd(delta, compute_uv=False)
            rank_leak = float(svals[2])
            zvec = Zf.value(pt.coords)
            x, *_ = np.linalg.lstsq(delta, zvec, rcond=None)
            colspace_miss = float(np.max(np.abs(delta @ x - zvec)))
            scale = float(max(svals[0], np.max(np.abs(zvec))))
            return [Residual(max(rank_leak, colspace_miss), scale)]

        add("transversal_p2_rank", TOL_PIPELINE, uv_pts, trans_p2_shape)

        def q_casimirs(pt):
            out = []
            for name in ("H0", "C2"):
                vec = ham_field(Qu, obs_uv[name], pt)
                out.append(Residual(float(np.max(np.abs(vec))), ham_field_scale(Qu, obs_uv[name], pt)))
            return out

        add("q_casimirs", TOL_EXACT, uv_pts, q_casimirs)

        def q_rank(pt):
            svals = np.linalg.svd(Qu.value(pt.coords), compute_uv=False)
            return [Residual(float(svals[4]), float(svals[0]))]

        add("q_rank_4", TOL_SCHOUTEN, uv_pts, q_rank)

        ham_names = ("H0", "C2", "H1", "H2")

        def involution(structure):
            def fn(pt):
                out = []
                for i, fname in enumerate(ham_names):
                    for gname in ham_names[i + 1 :]:
                        br = bracket(structure, obs_uv[fname], obs_uv[gname], pt)
                        out.append(Residual(abs(br), bracket_scale(structure, obs_uv[fname], obs_uv[gname], pt)))
                return out

            return fn

        add("involution_p1", TOL_SCHOUTEN, uv_pts, involution(P1u))
        add("involution_q", TOL_SCHOUTEN, uv_pts, involution(Qu))

        stackel_rng = np.random.default_rng([seed, 15])

        def stackel(pt):
            lam = complex(stackel_rng.uniform(-1, 1), stackel_rng.uniform(-1, 1))
            rho = complex(stackel_rng.uniform(-1, 1), stackel_rng.uniform(-1, 1))
            return [xxz.stackel_residual(params, lam, rho, pt)]

        add("stackel_condition", TOL_PIPELINE, uv_pts, stackel)

        curve_rng = np.random.default_rng([seed, 16])

        def trans_curve(pt):
            lam = complex(curve_rng.uniform(-1, 1), curve_rng.uniform(-1, 1))
            rho = complex(curve_rng.uniform(-1, 1), curve_rng.uniform(-1, 1))
            return [xxz.transversal_curve_residual(params, lam, rho, pt)]

        add("transversal_curve_factor", TOL_PIPELINE, uv_pts, trans_curve)

        def zeta_involution(pt):
            return list(leaf_mod.zeta1_involution_residuals(params, pt).values())

        add("zeta1_involution", TOL_SCHOUTEN, uv_pts, zeta_involution)

        def phi1(pt):
            return [leaf_mod.phi1_residual(params, pt)]

        def phi2(pt):
            return [leaf_mod.phi2_residual(params, pt)]

        if mutate_h2:
            # Propagate the H2 mutation into the separation relations by hand:
            # phi residuals read uv_observables directly, so evaluate them with
            # the mutated H2 by shifting the reported residual terms.
            def phi1(pt):  # noqa: F811
                base = leaf_mod.phi1_residual(params, pt)
                c = pt.coords
                beta = 1.0 / (params.mu[0] + params.mu[1])
                shift = beta * 4.0 * params.mu[2] ** 2 * (c[2] - c[5]) ** 2
                return [Residual(abs(base.raw + shift), base.scale)]

            def phi2(pt):  # noqa: F811
                base = leaf_mod.phi2_residual(params, pt)
                c = pt.coords
                shift = 4.0 * params.mu[2] ** 2 * (c[2] - c[5]) ** 2
                return [Residual(abs(base.raw + shift), base.scale)]

        add("separation_phi1", TOL_EXACT, uv_pts, phi1)
        add("separation_phi2", TOL_PIPELINE, uv_pts, phi2)

        # ------------- leaf ensemble -------------

        def embed_roundtrip(leaf):
            uv = leaf_mod.embed(leaf)
            clean_obs = xxz.uv_observables(params)
            h0 = clean_obs["H0"].value(uv.coords)
            c2 = clean_obs["C2"].value(uv.coords)
            back = leaf_mod.project(uv)
            raw = max(
                abs(h0 - leaf.levels[0]),
                abs(c2 - leaf.levels[1]),
                float(np.max(np.abs(back.coords - leaf.coords))),
            )
            scale = max(abs(leaf.levels[0]), abs(leaf.levels[1]), float(np.max(np.abs(leaf.coords))))
            return [Residual(raw, scale)]

        add("embed_roundtrip", TOL_ROUNDTRIP, leaf_pts, embed_roundtrip)

        def restricted_oracle(leaf):
            res = leaf_mod.restricted_oracle_residuals(params, leaf, q_field=Qu, p_field=P1u)
            return [res["P"], res["Q"]]

        add("restricted_oracle", TOL_SCHOUTEN, leaf_pts, restricted_oracle)

        def nstar_closed(leaf):
            N, _, _ = _mutated_nijenhuis(params, leaf, mutate_n)
            P, Q = leaf_mod.restricted_tensors(params, leaf)
            numeric = np.linalg.solve(P, Q)
            raw = float(np.max(np.abs(N - numeric)))
            scale = float(max(np.max(np.abs(N)), np.max(np.abs(numeric))))
            return [Residual(raw, scale)]

        add("nijenhuis_closed_form", TOL_EXACT, leaf_pts, nstar_closed)

        def nstar_spectrum(leaf):
            from itertools import permutations

            N, lam1, lam2 = _mutated_nijenhuis(params, leaf, mutate_n)
            computed = np.linalg.eigvals(N)
            expected = np.array([lam1, lam1, lam2, lam2])
            best = min(
                max(abs(computed[p[i]] - expected[i]) for i in range(4))
                for p in permutations(range(4))
            )
            return [Residual(float(best), float(max(abs(lam1), abs(lam2))))]

        add("nijenhuis_spectrum", TOL_SPECTRUM, leaf_pts, nstar_spectrum)

        def aux_relations(leaf):
            a = leaf_mod.aux(params, leaf)
            _, lam1, lam2 = leaf_mod.nijenhuis(params, leaf)
            # (u2/u1 - u1/u2)^2 = (u1/u2 + u2/u1)^2 - 4, and the second factor
            # is (lambda2 - mu1 + mu2)/mu3.
            g_target = ((lam2 - mu1 + mu2) / mu3) ** 2 - 4.0
            r_g = Residual(abs(a.G**2 - g_target), max(abs(a.G**2), abs(g_target)))
            r_f = Residual(abs(a.F - (lam2 - lam1)), max(abs(a.F), abs(lam2 - lam1)))
            r_p = Residual(abs(a.p1sum - (lam1 + lam2)), max(abs(a.p1sum), abs(lam1 + lam2)))
            return [r_g, r_f, r_p]

        add("aux_relations", TOL_EXACT, leaf_pts, aux_relations)

        def y_match(leaf):
            _, res = leaf_mod.deformation_field(params, leaf)
            return [res]

        add("y_field_match", TOL_EXACT, leaf_pts, y_match)

        def lie_y_scalars(leaf):
            y, _ = leaf_mod.deformation_field(params, leaf)
            u1, z1, u2, z2 = leaf.coords
            a = leaf_mod.aux(params, leaf)
            d_u1u2 = np.array([u2, 0.0, u1, 0.0], dtype=complex)
            d_g = np.array(
                [-u2 / u1**2 - 1.0 / u2, 0.0, 1.0 / u1 + u1 / u2**2, 0.0], dtype=complex
            )
            d_l = np.array(
                [
                    2.0 * mu3 * z2 * u1 - mu2 * u2 * (z1 + z2),
                    mu3 * u2**2 - mu2 * u1 * u2,
                    2.0 * mu3 * z1 * u2 - mu2 * u1 * (z1 + z2),
                    mu3 * u1**2 - mu2 * u1 * u2,
                ],
                dtype=complex,
            )
            y_scale = float(np.max(np.abs(y)))
            r1 = Residual(abs(d_u1u2 @ y), y_scale * float(np.max(np.abs(d_u1u2))))
            r2 = Residual(abs(d_g @ y), y_scale * float(np.max(np.abs(d_g))))
            target = mu3 * a.G * (u1 * u2 * a.F)
            got = d_l @ y
            r3 = Residual(abs(got - target), max(abs(got), abs(target)))
            return [r1, r2, r3]

        add("lie_y_invariants", TOL_SCHOUTEN, leaf_pts, lie_y_scalars)

        deform_rng = np.random.default_rng([seed, 17])

        def deform_factor(leaf):
            rho = complex(deform_rng.uniform(-1, 1), deform_rng.uniform(-1, 1))
            return [
                leaf_mod.deformation_factorization_residual(params, rho, leaf),
                leaf_mod.deformation_second_residual(params, rho, leaf),
            ]

        add("deformation_factorization", TOL_SCHOUTEN, leaf_pts, deform_factor)

        term_rng = np.random.default_rng([seed, 18])

        def deform_term(leaf):
            rho = complex(term_rng.uniform(-1, 1), term_rng.uniform(-1, 1))
            tower = leaf_mod.deformation_tower(params, rho, leaf)
            return [tower["termination"]]

        add("deformation_termination", TOL_DN, leaf_pts, deform_term)

        def xi2_agreement(leaf):
            closed = leaf_mod.xi2_closed_form(params, leaf)
            _, _, lam2 = leaf_mod.nijenhuis(params, leaf)
            tower = leaf_mod.deformation_tower(params, lam2, leaf)
            algorithmic = tower["lie1"] / tower["lie2"]
            return [Residual(abs(algorithmic - closed), max(abs(algorithmic), abs(closed)))]

        add("deformation_xi2_agreement", TOL_DN, leaf_pts, xi2_agreement)

        def dn_canonical(leaf):
            res = leaf_mod.dn_bracket_residuals(params, leaf)
            return [res["P"]]

        def dn_second(leaf):
            res = leaf_mod.dn_bracket_residuals(params, leaf)
            return [res["Q"]]

        add("dn_canonical_p", TOL_DN, leaf_pts, dn_canonical)
        add("dn_brackets_q", TOL_DN, leaf_pts, dn_second)

        def dn_eigen(leaf):
            N, lam1, lam2 = _mutated_nijenhuis(params, leaf, mutate_n)
            grads = leaf_mod.dn_gradients(params, leaf)
            eigs = (lam1, lam1, lam2, lam2)
            out = []
            for g, lam in zip(grads, eigs):
                image = N @ g
                raw = float(np.max(np.abs(image - lam * g)))
                scale = float(max(np.max(np.abs(image)), abs(lam) * np.max(np.abs(g))))
                out.append(Residual(raw, scale))
            return out

        add("dn_eigenforms", TOL_PIPELINE, leaf_pts, dn_eigen)

        def theta_br(leaf):
            return [leaf_mod.theta_bracket_residual(params, leaf)]

        add("theta_bracket", TOL_EXACT, leaf_pts, theta_br)

        def q_chain(leaf):
            res = leaf_mod.q_extra_casimir_residuals(params, leaf)
            return [res["qdh2_chain"]]

        add("q_dh2_chain", TOL_SCHOUTEN, leaf_pts, q_chain)

    else:
        for name in (
            "gradient_fd_uv",
            "observable_transport",
            "uv_tensor_scale",
            "charpoly_identity_uv",
            "jacobi_p1_uv",
            "jacobi_p2_uv",
            "jacobi_q_uv",
            "compat_p1_p2_uv",
            "compat_p1_q_uv",
            "x1_hamiltonian",
            "x1_conserves_zeta1",
            "transversal_p1_symmetry",
            "transversal_normalization",
            "transversal_h1_h2",
            "transversal_p2_rank",
            "q_casimirs",
            "q_rank_4",
            "involution_p1",
            "involution_q",
            "stackel_condition",
            "transversal_curve_factor",
            "zeta1_involution",
            "separation_phi1",
            "separation_phi2",
            "embed_roundtrip",
            "restricted_oracle",
            "nijenhuis_closed_form",
            "nijenhuis_spectrum",
            "aux_relations",
            "y_field_match",
            "lie_y_invariants",
            "deformation_factorization",
            "deformation_termination",
            "deformation_xi2_agreement",
            "dn_canonical_p",
            "dn_brackets_q",
            "dn_eigenforms",
            "theta_bracket",
            "q_dh2_chain",
        ):
            report.checks.append(
                CheckResult(
                    name=name,
                    tolerance=0.0,
                    skipped=True,
                    note="skipped: model not rotationally symmetric",
                )
            )

    # ---------------- evaluate registry ----------------

    for name, tol, points, fn in registry:
        effective_tol = tol * tol_scale
        worst = 0.0
        n_eval = 0
        n_skip = 0
        for pt in points:
            try:
                residuals = fn(pt)
            except DegeneracyError:
                n_skip += 1
                continue
            n_eval += 1
            for r in residuals:
                if r.normalized > worst:
                    worst = r.normalized
        result = CheckResult(
            name=name,
            tolerance=effective_tol,
            max_residual=worst,
            n_evaluated=n_eval,
            n_skipped_degenerate=n_skip,
        )
        if n_eval == 0 or n_skip > 0.05 * len(points):
            result.passed = False
            result.note = "inconclusive: too many degenerate skips"
        else:
            result.passed = bool(worst <= effective_tol)
        report.checks.append(result)

    # ---------------- diagnostics ----------------

    if params.symmetric:
        fit_resid = 0.0
        fit_mismatch = 0.0
        h1_norms = []
        for leaf in leaf_pts[: min(20, len(leaf_pts))]:
            fit = leaf_mod.generalized_lenard_fit(params, leaf)
            fit_resid = max(fit_resid, fit["residual"].normalized)
            fit_mismatch = max(fit_mismatch, float(fit["p1_mismatch"]))
            extra = leaf_mod.q_extra_casimir_residuals(params, leaf)
            h1_norms.append(extra["qdh1_norm"].normalized)
        report.diagnostics.append(
            {
                "name": "generalized_lenard_fit",
                "value": fit_resid,
                "note": f"fitted coefficient matches the eigenvalue sum p1 within {fit_mismatch:.3e}",
            }
        )
        report.diagnostics.append(
            {
                "name": "q_dh1_not_casimir",
                "value": float(min(h1_norms)) if h1_norms else None,
                "note": "H1 is not a Casimir of Q: Q dH1 = P dH2 + p1 P dH1; H0 and C2 are the Casimirs",
            }
        )
        ratio = xxz.uv_transport_residuals(params, uv_pts[0])
        report.diagnostics.append(
            {
                "name": "uv_tensor_ratio",
                "value": [ratio["ratio_p1"].real, ratio["ratio_p1"].imag],
                "note": "printed uv tensors over pushforward of m-chart tensors; i/sqrt(2)",
            }
        )
    if lax_ok:
        mismatch = min(
            so4.angular_velocity_flow_mismatch(params, 0.7 + 0.3j, pt) for pt in m_pts
        )
        report.diagnostics.append(
            {
                "name": "lax_partner_sign",
                "value": -1.0,
                "note": "dL/dt = [B, L] with B the energy partner; sigma = -1 in the dL/dt = sigma [L, B] convention",
            }
        )
        report.diagnostics.append(
            {
                "name": "angular_partner_flow_mismatch",
                "value": float(mismatch),
                "note": "best-sign mismatch of dL/dt against [L, Omega + lambda J]: that partner generates a different flow; its identity is [L, Omega + lambda J] = [M, Omega]",
            }
        )

    active = [c for c in report.checks if not c.skipped]
    report.overall = bool(active) and all(bool(c.passed) for c in active)
    return report
