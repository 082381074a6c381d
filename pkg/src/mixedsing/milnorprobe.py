"""Milnor-set scans, singularity residuals, and tube/Thom verdict routing.

Two scalar certificates drive the numerics:

* sing_residual: with a = conj(dF)(z) and b = dbarF(z), the value
  (|a||b| - |<a,b>|) + (|a| - |b|)^2 vanishes exactly when a = lam*b for
  some unimodular lam (including a = b = 0), i.e. exactly at singular
  points of the mixed polynomial.

* milnor_residual: distance from the unit radial direction z/|z| to its
  projection onto the normal 2-plane; zero exactly at rho-nonregular
  points (sphere tangent to the fibre), the Milnor set.

milnor_scan descends the residual on spheres of decreasing radius to hunt
for Milnor-set points away from the zero fibre; the evidence it produces
(per-shell minima of distance-to-fibre) supports or undermines the tube
condition without ever claiming a proof.

tube_verdict combines the exact routes (separate variables, asserted ICIS
with clean discriminant, polar weights, discriminant lines) with probe
evidence into a single classification that never overclaims.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._numeric import compile_frame, compile_poly, realify
from .core import MixedPolynomial, complex_point
from .polar import PolarSolution, solve_polar
from .thomprobe import ProbeResult

__all__ = [
    "SingResidual",
    "MilnorResidual",
    "ShellEvidence",
    "ScanResult",
    "TubeVerdict",
    "sing_residual",
    "milnor_residual",
    "milnor_scan",
    "tube_verdict",
]

DEFAULT_SHELLS = (0.2, 0.1, 0.05, 0.025)
DEFAULT_SAMPLES = 200
NEAR_ZERO_TOL = 1e-6
OFF_FIBRE_TOL = 1e-6
RATIO_FLOOR = 0.01


@dataclass(frozen=True)
class SingResidual:
    """Vanishes exactly on the singular locus of the mixed polynomial."""

    value: float
    point: tuple[complex, ...]


@dataclass(frozen=True)
class MilnorResidual:
    """Distance in [0, 1] from the radial direction to the normal plane."""

    value: float
    point: tuple[complex, ...]
    degenerate: bool = False


def sing_residual(F: MixedPolynomial, z) -> SingResidual:
    """Scalar singularity certificate at z (exact zero iff singular)."""
    pt = complex_point(z, F.n_vars)
    grad = F.wirtinger()
    a = np.array([np.conj(p.evaluate(pt)) for p in grad.dF])
    b = np.array([p.evaluate(pt) for p in grad.dbarF])
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    inner = abs(complex(np.vdot(b, a)))  # |<a, b>| hermitian
    # Cauchy-Schwarz guarantees na*nb >= inner; rounding can dip below by ~eps
    value = max(0.0, na * nb - inner) + (na - nb) ** 2
    return SingResidual(value=value, point=pt)


def milnor_residual(F: MixedPolynomial, z) -> MilnorResidual:
    """rho-nonregularity certificate at z != 0 (zero iff z in the Milnor set)."""
    pt = complex_point(z, F.n_vars)
    x = np.array(pt)
    norm = float(np.linalg.norm(realify(x)))
    if norm == 0.0:
        raise ValueError("milnor_residual is undefined at the origin")
    frame = compile_frame(F)
    a, b = frame(x[None, :])
    a, b = a[0], b[0]
    scale = max(float(np.abs(a).max(initial=0.0)), float(np.abs(b).max(initial=0.0)))
    if scale == 0.0:
        return MilnorResidual(value=1.0, point=pt, degenerate=True)
    n1 = realify((a + b) / scale)
    ni = realify(1j * (a - b) / scale)
    radial = realify(x) / norm
    # orthonormalize the frame (rank may drop to 1 on the singular locus)
    q1n = float(np.linalg.norm(n1))
    basis = []
    if q1n > 0:
        q1 = n1 / q1n
        basis.append(q1)
        w = ni - (ni @ q1) * q1
        wn = float(np.linalg.norm(w))
        if wn > 1e-12 * float(np.linalg.norm(ni)):
            basis.append(w / wn)
    elif float(np.linalg.norm(ni)) > 0:
        basis.append(ni / float(np.linalg.norm(ni)))
    degenerate = len(basis) < 2
    proj = sum((radial @ q) * q for q in basis) if basis else np.zeros_like(radial)
    return MilnorResidual(
        value=float(np.linalg.norm(radial - proj)), point=pt, degenerate=degenerate
    )


@dataclass(frozen=True)
class ShellEvidence:
    radius: float
    count: int
    min_distance: float | None


@dataclass(frozen=True)
class ScanResult:
    """Milnor-set points found off the zero fibre, shell by shell."""

    shells: tuple[ShellEvidence, ...]
    points: tuple[tuple[complex, ...], ...]
    fitted_c: float | None
    supports_transversality: bool
    seed: int
    samples_per_shell: int
    params: dict = field(default_factory=dict)


def _batch_residual(frame, Z: np.ndarray) -> np.ndarray:
    """Vectorized milnor_residual over rows of Z (N, n); degenerate rows -> 2."""
    a, b = frame(Z)
    scale = np.maximum(np.abs(a).max(axis=1), np.abs(b).max(axis=1))
    ok = scale > 0
    scale_safe = np.where(ok, scale, 1.0)
    n1 = realify((a + b) / scale_safe[:, None])
    ni = realify(1j * (a - b) / scale_safe[:, None])
    radial = realify(Z)
    radial = radial / np.linalg.norm(radial, axis=1, keepdims=True)
    q1n = np.linalg.norm(n1, axis=1, keepdims=True)
    q1ok = q1n[:, 0] > 0
    q1 = np.where(q1n > 0, n1 / np.where(q1n > 0, q1n, 1.0), 0.0)
    w = ni - (ni * q1).sum(axis=1, keepdims=True) * q1
    wn = np.linalg.norm(w, axis=1, keepdims=True)
    rank2 = (wn[:, 0] > 1e-12 * np.linalg.norm(ni, axis=1)) & q1ok
    q2 = np.where(wn > 0, w / np.where(wn > 0, wn, 1.0), 0.0)
    proj = (radial * q1).sum(axis=1, keepdims=True) * q1 + np.where(
        rank2[:, None], (radial * q2).sum(axis=1, keepdims=True) * q2, 0.0
    )
    vals = np.linalg.norm(radial - proj, axis=1)
    vals = np.where(ok & rank2, vals, 2.0)  # degenerate frames cannot certify
    return vals


def _fibre_distance(F: MixedPolynomial, pair, Z: np.ndarray) -> np.ndarray:
    """First-order distance estimate from rows of Z to the zero fibre."""
    if pair is not None:
        f, g = pair
        ef, eg = compile_poly(f), compile_poly(g)
        dfs = [compile_poly(p) for p in f.wirtinger().dF]
        dgs = [compile_poly(p) for p in g.wirtinger().dF]
        ndf = np.sqrt(sum(np.abs(e(Z)) ** 2 for e in dfs))
        ndg = np.sqrt(sum(np.abs(e(Z)) ** 2 for e in dgs))
        df_safe = np.where(ndf > 0, ndf, np.inf)
        dg_safe = np.where(ndg > 0, ndg, np.inf)
        return np.minimum(np.abs(ef(Z)) / df_safe, np.abs(eg(Z)) / dg_safe)
    ev = compile_poly(F)
    frame = compile_frame(F)
    a, b = frame(Z)
    g = np.sqrt((np.abs(a) ** 2 + np.abs(b) ** 2).sum(axis=1))
    g_safe = np.where(g > 0, g, np.inf)
    return np.abs(ev(Z)) / g_safe


def milnor_scan(
    F: MixedPolynomial,
    shells=DEFAULT_SHELLS,
    samples_per_shell: int = DEFAULT_SAMPLES,
    *,
    seed: int = 2026,
    pair=None,
    steps: int = 160,
    near_zero_tol: float = NEAR_ZERO_TOL,
    off_fibre_tol: float = OFF_FIBRE_TOL,
    ratio_floor: float = RATIO_FLOOR,
) -> ScanResult:
    """Hunt for Milnor-set points off the zero fibre on shrinking spheres.

    Derivative-free descent: seeded random sphere points take accepted
    Gaussian steps (re-projected to the sphere) with an annealed step size.
    A point counts when its residual drops below near_zero_tol while
    |F| > off_fibre_tol.  Evidence per shell: count and minimum estimated
    distance to the fibre.  Deterministic for a fixed seed.
    """
    n = F.n_vars
    rng = np.random.default_rng(seed)
    frame = compile_frame(F)
    ev = compile_poly(F)
    shell_rows: list[ShellEvidence] = []
    found_points: list[tuple[complex, ...]] = []
    ratios: list[float] = []
    for r in shells:
        X = rng.normal(size=(samples_per_shell, 2 * n))
        X /= np.linalg.norm(X, axis=1, keepdims=True)
        X *= r
        Z = X[:, :n] + 1j * X[:, n:]
        vals = _batch_residual(frame, Z)
        # staged annealing: a residual that grows linearly with the distance
        # to the Milnor set needs positioning ~tol*r, far below what a single
        # 0.35r -> 0.97^steps schedule can reach
        for start in (0.35, 0.02, 1e-3, 5e-5, 2e-6):
            step = start * r
            for _ in range(steps):
                prop = X + rng.normal(size=X.shape) * step
                prop *= r / np.linalg.norm(prop, axis=1, keepdims=True)
                Zp = prop[:, :n] + 1j * prop[:, n:]
                pvals = _batch_residual(frame, Zp)
                better = pvals < vals
                X = np.where(better[:, None], prop, X)
                vals = np.where(better, pvals, vals)
                step *= 0.97
        Z = X[:, :n] + 1j * X[:, n:]
        fv = np.abs(ev(Z))
        hits = (vals < near_zero_tol) & (fv > off_fibre_tol)
        count = int(hits.sum())
        if count:
            dists = _fibre_distance(F, pair, Z[hits])
            min_d = float(dists.min())
            shell_rows.append(ShellEvidence(radius=float(r), count=count, min_distance=min_d))
            ratios.append(min_d / float(r))
            order = np.argsort(dists)[:3]
            for idx in order:
                found_points.append(tuple(Z[hits][idx]))
        else:
            shell_rows.append(ShellEvidence(radius=float(r), count=0, min_distance=None))
    fitted_c = min(ratios) if ratios else None
    supports = (not ratios) or fitted_c >= ratio_floor
    return ScanResult(
        shells=tuple(shell_rows),
        points=tuple(found_points),
        fitted_c=fitted_c,
        supports_transversality=bool(supports),
        seed=seed,
        samples_per_shell=samples_per_shell,
        params={
            "steps": steps,
            "near_zero_tol": near_zero_tol,
            "off_fibre_tol": off_fibre_tol,
            "ratio_floor": ratio_floor,
            "shells": [float(r) for r in shells],
        },
    )


# verdict routing ---------------------------------------------------------------


@dataclass(frozen=True)
class RouteRecord:
    name: str
    conclusion: str
    detail: str = ""


@dataclass(frozen=True)
class TubeVerdict:
    """Joint tube/Thom classification with route provenance.

    tube_status in {"yes", "no", "unknown"}; thom_status in {"regular",
    "fail", "unknown"}.  Every definite answer names its route; probe
    evidence rides along and a probe summary distinguishes "no failure
    found" from genuine unknowns.  Never reports tube "no" together with
    thom "regular".
    """

    tube_status: str
    tube_route: str | None
    thom_status: str
    thom_route: str | None
    probe_summary: str
    routes: tuple[RouteRecord, ...]
    polar: PolarSolution | None = None
    isolated: object = None
    probes: tuple[ProbeResult, ...] = ()
    witness: dict | None = None


def _separate_variables(f: MixedPolynomial, g: MixedPolynomial) -> bool:
    uf, ug = f.variables_used(), g.variables_used()
    return bool(uf) and bool(ug) and not (uf & ug)


def tube_verdict(
    F: MixedPolynomial,
    *,
    pair=None,
    assert_icis: bool = False,
    isolated=None,
    polar: PolarSolution | None = None,
    probes: tuple[ProbeResult, ...] = (),
) -> TubeVerdict:
    """Route-ordered classification: exact criteria first, probes after.

    Route order: separate-variables, icis-flag, polar, disc-lines; then the
    probe-witness route may resolve Thom failure.  pair is (f, g) when F
    was built as f * conj(g); isolated is a discgeom verdict object when
    available; probes are stratified thom_test results.
    """
    routes: list[RouteRecord] = []
    tube_status, tube_route = "unknown", None
    thom_status, thom_route = "unknown", None
    witness = None

    if isolated is None and pair is not None:
        from .discgeom import DegenerateEliminationError, DegreeBoundError, isolated_value_verdict

        try:
            isolated = isolated_value_verdict(*pair)
        except (DegenerateEliminationError, DegreeBoundError) as exc:
            routes.append(RouteRecord("disc-lines", "unavailable", str(exc)))

    if pair is not None and _separate_variables(*pair):
        routes.append(
            RouteRecord(
                "separate-variables",
                "tube yes; thom regular",
                "factors depend on disjoint variable sets",
            )
        )
        tube_status, tube_route = "yes", "separate-variables"
        thom_status, thom_route = "regular", "separate-variables"

    iso_status = getattr(isolated, "status", None)
    if (
        thom_status == "unknown"
        and assert_icis
        and pair is not None
        and iso_status == "isolated"
    ):
        routes.append(
            RouteRecord(
                "icis-flag",
                "tube yes; thom regular",
                "user-asserted regular pair and no non-axis discriminant lines",
            )
        )
        tube_status, tube_route = "yes", "icis-flag"
        thom_status, thom_route = "regular", "icis-flag"

    if polar is None:
        polar = solve_polar(F)
    if tube_status == "unknown" and polar.status == "found":
        routes.append(
            RouteRecord(
                "polar",
                "tube yes",
                f"polar weights p={list(polar.canonical.p)}, k={polar.canonical.k}",
            )
        )
        tube_status, tube_route = "yes", "polar"

    if tube_status == "unknown" and iso_status == "not-isolated":
        routes.append(
            RouteRecord(
                "disc-lines",
                "tube no",
                "discriminant contains a non-axis line; critical values leave the origin",
            )
        )
        tube_status, tube_route = "no", "disc-lines"

    fail_probe = next((p for p in probes if p.verdict == "fail-witness"), None)
    if thom_status == "unknown" and fail_probe is not None:
        routes.append(
            RouteRecord(
                "probe-witness",
                "thom fail",
                f"failure witness on {fail_probe.witness['curve']}",
            )
        )
        thom_status, thom_route = "fail", "probe-witness"
        witness = fail_probe.witness

    if probes:
        if any(p.verdict == "fail-witness" for p in probes):
            probe_summary = "fail-witness"
        elif all(p.verdict == "compatible" for p in probes):
            probe_summary = "no-failure-found"
        else:
            probe_summary = "inconclusive"
    else:
        probe_summary = "not-probed"

    # soundness guard: tube no and thom regular must never co-occur
    assert not (tube_status == "no" and thom_status == "regular")

    return TubeVerdict(
        tube_status=tube_status,
        tube_route=tube_route,
        thom_status=thom_status,
        thom_route=thom_route,
        probe_summary=probe_summary,
        routes=tuple(routes),
        polar=polar,
        isolated=isolated,
        probes=tuple(probes),
        witness=witness,
    )
