"""Numeric probes for Thom-type regularity along strata.

At a regular point z of a mixed polynomial F the fibre's normal space is
the real 2-plane

    n_mu(z) = mu * conj(dF)(z) + conj(mu) * dbarF(z),   |mu| = 1,

spanned over R by the frame n_1 = a + b and n_i = i(a - b), where
a = conj(dF)(z), b = dbarF(z).  A stratum S is Thom-compatible with a
family of curves approaching it when limits of these normal planes
annihilate the stratum tangents; a unit tangent vector with a large
projection onto a converged limit plane is a concrete failure witness.

Probes are evidence, not proofs: the verdict vocabulary is "compatible",
"fail-witness", "inconclusive", and reports never say more than the
numerics support.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._numeric import compile_frame, grassmann_distance, real_span_basis, realify, unrealify
from .core import MixedPolynomial, complex_point, from_pair

__all__ = [
    "NormalFamily",
    "NormalFrame",
    "CurveGerm",
    "Stratum",
    "ProbeResult",
    "normal_family_symbolic",
    "pair_normal_family",
    "normal_family",
    "default_curve_battery",
    "limit_normal_plane",
    "thom_test",
]

DEFAULT_T0 = 0.1
DEFAULT_RHO = 0.5
DEFAULT_MAX_SHELLS = 60
DEFAULT_CONV_TOL = 1e-6
CONV_RUN = 3
FAIL_TOL = 1e-4
COMPAT_TOL = 1e-8
THOM_CONV_TOL = 1e-9  # tighter than standalone probes so compatible-verdict
                      # planes carry residual well below COMPAT_TOL
RANK_RTOL = 1e-13  # frame vectors are exact products, so rank detection can sit
                   # far below conv_tol; at 1e-9 the rank cut would collapse the
                   # plane exactly when an asymmetric frame (|a| >> |b|) converges


@dataclass(frozen=True)
class NormalFamily:
    """Symbolic halves of the normal family: n_mu = mu*a + conj(mu)*b."""

    a: tuple[MixedPolynomial, ...]  # conj of the z-gradient, as polynomials
    b: tuple[MixedPolynomial, ...]  # the zbar-gradient

    @property
    def n_vars(self) -> int:
        return len(self.a)

    def frame_at(self, z) -> "NormalFrame":
        pt = complex_point(z, self.n_vars)
        av = np.array([p.evaluate(pt) for p in self.a])
        bv = np.array([p.evaluate(pt) for p in self.b])
        return NormalFrame(
            point=pt,
            n_one=tuple(av + bv),
            n_i=tuple(1j * (av - bv)),
        )

    def n_mu_at(self, z, mu: complex) -> tuple[complex, ...]:
        mu = complex(mu)
        if abs(abs(mu) - 1.0) > 1e-12:
            raise ValueError("mu must lie on the unit circle")
        pt = complex_point(z, self.n_vars)
        av = np.array([p.evaluate(pt) for p in self.a])
        bv = np.array([p.evaluate(pt) for p in self.b])
        return tuple(mu * av + np.conj(mu) * bv)


@dataclass(frozen=True)
class NormalFrame:
    """The two frame vectors spanning the normal 2-plane at a point."""

    point: tuple[complex, ...]
    n_one: tuple[complex, ...]
    n_i: tuple[complex, ...]


def normal_family_symbolic(F: MixedPolynomial) -> NormalFamily:
    """Exact normal family of any mixed polynomial."""
    grad = F.wirtinger()
    return NormalFamily(
        a=tuple(p.conjugate() for p in grad.dF),
        b=grad.dbarF,
    )


def pair_normal_family(f: MixedPolynomial, g: MixedPolynomial) -> NormalFamily:
    """Normal family of f * conj(g) computed the pair way.

    a = g * conj(df) and b = f * conj(dg); agrees exactly with
    normal_family_symbolic(from_pair(f, g)).
    """
    F = from_pair(f, g)  # reuses the holomorphy/arity validation
    del F
    df = f.wirtinger().dF
    dg = g.wirtinger().dF
    return NormalFamily(
        a=tuple(g * p.conjugate() for p in df),
        b=tuple(f * p.conjugate() for p in dg),
    )


def normal_family(F: MixedPolynomial, z) -> NormalFrame:
    """Numeric frame of the normal 2-plane of F at z."""
    return normal_family_symbolic(F).frame_at(z)


@dataclass(frozen=True)
class CurveGerm:
    """Real-analytic probe curve t -> C^n with polynomial components.

    Each component is a tuple of (coefficient, exponent) pairs in a real
    parameter t; the curve is approached along shells t_j = t0 * rho^j.
    """

    components: tuple[tuple[tuple[complex, int], ...], ...]
    t0: float = DEFAULT_T0
    rho: float = DEFAULT_RHO
    label: str = ""

    def __post_init__(self):
        if not (0 < self.rho < 1):
            raise ValueError("rho must lie in (0, 1)")
        if not self.t0 > 0:
            raise ValueError("t0 must be positive")

    @property
    def n_vars(self) -> int:
        return len(self.components)

    def at(self, t: float) -> np.ndarray:
        return np.array(
            [sum(c * t ** e for c, e in comp) for comp in self.components],
            dtype=complex,
        )

    def base_point(self) -> tuple[complex, ...]:
        return tuple(
            complex(sum(c for c, e in comp if e == 0)) for comp in self.components
        )

    @classmethod
    def from_polynomials(cls, polys, t0: float = DEFAULT_T0, rho: float = DEFAULT_RHO,
                         label: str = "") -> "CurveGerm":
        """Build from univariate MixedPolynomial components in one variable t."""
        comps = []
        for p in polys:
            if p.n_vars != 1 or not p.is_holomorphic:
                raise ValueError("curve components must be holomorphic in a single variable t")
            comps.append(tuple((complex(c), pair.nu[0]) for pair, c in p.sorted_terms()))
        return cls(tuple(comps), t0=t0, rho=rho, label=label)


@dataclass(frozen=True)
class Stratum:
    """A candidate stratum germ: base point plus real-independent tangents."""

    base_point: tuple[complex, ...]
    tangent: tuple[tuple[complex, ...], ...]
    label: str = ""

    def __post_init__(self):
        base = complex_point(self.base_point)
        object.__setattr__(self, "base_point", base)
        tang = tuple(complex_point(v, len(base)) for v in self.tangent)
        object.__setattr__(self, "tangent", tang)
        if not tang:
            raise ValueError("stratum needs at least one tangent vector")
        basis = real_span_basis(tang)
        if basis.shape[0] != len(tang):
            raise ValueError("tangent vectors must be linearly independent over R")

    def tangent_basis(self) -> np.ndarray:
        return real_span_basis(self.tangent)


@dataclass(frozen=True)
class ProbeResult:
    """Outcome of a normal-plane limit probe (optionally against a stratum).

    verdict is "compatible", "fail-witness" or "inconclusive".  For a
    stratified test, witness carries the offending curve label, the unit mu
    selecting the failing normal direction, and that direction itself.
    """

    verdict: str
    limit_plane: tuple[tuple[complex, ...], ...] | None
    convergence: tuple[float, ...]
    plane_dims: tuple[int, ...]
    reason: str = ""
    witness: dict | None = None
    per_curve: tuple["ProbeResult", ...] = field(default=())
    projection: float | None = None


def _shell_schedule(curve: CurveGerm, max_shells: int) -> np.ndarray:
    return curve.t0 * curve.rho ** np.arange(max_shells)


def limit_normal_plane(
    F: MixedPolynomial,
    curve: CurveGerm,
    *,
    max_shells: int = DEFAULT_MAX_SHELLS,
    conv_tol: float = DEFAULT_CONV_TOL,
    conv_run: int = CONV_RUN,
) -> ProbeResult:
    """Track the normal 2-plane along a curve and report its limit.

    Convergence is declared when the Grassmann distance between consecutive
    shell planes stays below conv_tol for conv_run consecutive steps (with
    stable dimension); otherwise the probe is inconclusive.
    """
    if curve.n_vars != F.n_vars:
        raise ValueError("curve arity does not match the polynomial")
    frame = compile_frame(F)
    ts = _shell_schedule(curve, max_shells)
    planes: list[np.ndarray] = []
    dists: list[float] = []
    dims: list[int] = []
    run = 0
    for j, t in enumerate(ts):
        z = curve.at(float(t))
        a, b = frame(z[None, :])
        a, b = a[0], b[0]
        scale = max(np.abs(a).max(initial=0.0), np.abs(b).max(initial=0.0))
        if scale == 0.0 or not np.isfinite(scale):
            return ProbeResult(
                verdict="inconclusive",
                limit_plane=None,
                convergence=tuple(dists),
                plane_dims=tuple(dims),
                reason=f"frame degenerate at shell {j} (t={t:.3e})",
            )
        n1 = (a + b) / scale
        ni = 1j * (a - b) / scale
        Q = real_span_basis([n1, ni], rtol=RANK_RTOL)
        dims.append(Q.shape[0])
        planes.append(Q)
        if len(planes) >= 2:
            prev = planes[-2]
            if prev.shape[0] != Q.shape[0]:
                run = 0
                dists.append(float("nan"))
            else:
                d = grassmann_distance(prev, Q)
                dists.append(d)
                run = run + 1 if d < conv_tol else 0
        if run >= conv_run:
            return ProbeResult(
                verdict="compatible",
                limit_plane=tuple(tuple(v) for v in unrealify(Q)),
                convergence=tuple(dists),
                plane_dims=tuple(dims),
                reason=f"converged at shell {j}",
            )
    return ProbeResult(
        verdict="inconclusive",
        limit_plane=None,
        convergence=tuple(dists),
        plane_dims=tuple(dims),
        reason=f"no convergence within {max_shells} shells"
        + ("; plane dimension unstable" if len(set(dims)) > 1 else ""),
    )


def default_curve_battery(
    base_point,
    *,
    seed: int = 2026,
    max_exponent: int = 3,
    t0: float = DEFAULT_T0,
    rho: float = DEFAULT_RHO,
) -> tuple[CurveGerm, ...]:
    """Monomial curves base + (w_1 t^{a_1}, ..., w_n t^{a_n}), a in {1..3}^n.

    Directions w_j are random unit complex numbers from a seeded generator;
    at most 27 curves (n <= 3 grids).
    """
    base = complex_point(base_point)
    n = len(base)
    rng = np.random.default_rng(seed)
    grids: list[tuple[int, ...]] = [()]
    for _ in range(n):
        grids = [g + (e,) for g in grids for e in range(1, max_exponent + 1)]
    if len(grids) > 27:
        grids = grids[:27]
    curves = []
    for exps in grids:
        phases = rng.uniform(0.0, 2.0 * np.pi, size=n)
        comps = []
        for j in range(n):
            w = complex(np.cos(phases[j]), np.sin(phases[j]))
            terms: list[tuple[complex, int]] = [(w, exps[j])]
            if base[j] != 0:
                terms.append((base[j], 0))
            comps.append(tuple(terms))
        curves.append(
            CurveGerm(tuple(comps), t0=t0, rho=rho, label="t^" + ",".join(map(str, exps)))
        )
    return tuple(curves)


def thom_test(
    F: MixedPolynomial,
    stratum: Stratum,
    curves=None,
    *,
    max_shells: int = DEFAULT_MAX_SHELLS,
    conv_tol: float = THOM_CONV_TOL,
    conv_run: int = CONV_RUN,
    fail_tol: float = FAIL_TOL,
    compat_tol: float = COMPAT_TOL,
    seed: int = 2026,
) -> ProbeResult:
    """Probe whether limit normal planes along curves annihilate a stratum.

    For each converged curve the score is the largest projection norm of a
    unit stratum tangent onto the limit plane.  Any score above fail_tol is
    a failure witness; all curves converged with scores below compat_tol is
    "compatible" (evidence only); anything else is inconclusive.
    """
    if len(stratum.base_point) != F.n_vars:
        raise ValueError("stratum arity does not match the polynomial")
    if curves is None:
        curves = default_curve_battery(stratum.base_point, seed=seed)
    T = stratum.tangent_basis()
    per: list[ProbeResult] = []
    worst_proj = 0.0
    all_converged = True
    witness = None
    for idx, curve in enumerate(curves):
        probe = limit_normal_plane(
            F, curve, max_shells=max_shells, conv_tol=conv_tol, conv_run=conv_run
        )
        if probe.limit_plane is None:
            all_converged = False
            per.append(probe)
            continue
        Q = np.stack([realify(np.asarray(v)) for v in probe.limit_plane])
        M = Q @ T.T
        u, s, _ = np.linalg.svd(M)
        proj = float(s[0]) if s.size else 0.0
        worst_proj = max(worst_proj, proj)
        cur_witness = None
        if proj > fail_tol:
            w_real = u[:, 0] @ Q
            w = unrealify(w_real)
            # express the witness direction in the last-shell frame to recover mu
            frame = compile_frame(F)
            t_last = curve.t0 * curve.rho ** max(
                0, len(probe.convergence)
            )
            z = curve.at(float(t_last))
            a, b = frame(z[None, :])
            n1 = realify((a[0] + b[0]))
            ni = realify(1j * (a[0] - b[0]))
            A = np.stack([n1, ni], axis=1)
            coef, *_ = np.linalg.lstsq(A, w_real, rcond=None)
            mu = complex(coef[0], coef[1])
            mu = mu / abs(mu) if abs(mu) > 0 else 1.0 + 0j
            cur_witness = {
                "curve": curve.label or f"curve[{idx}]",
                "mu": mu,
                "direction": tuple(w),
                "projection": proj,
            }
            if witness is None:
                witness = cur_witness
        per.append(
            ProbeResult(
                verdict=probe.verdict if cur_witness is None else "fail-witness",
                limit_plane=probe.limit_plane,
                convergence=probe.convergence,
                plane_dims=probe.plane_dims,
                reason=probe.reason,
                witness=cur_witness,
                projection=proj,
            )
        )
    if witness is not None:
        verdict, reason = "fail-witness", "a limit normal direction lies in the stratum tangent"
    elif all_converged and worst_proj < compat_tol and per:
        verdict, reason = "compatible", "all limit planes annihilate the stratum tangent"
    else:
        verdict = "inconclusive"
        reason = "not all curves converged" if not all_converged else \
            f"worst projection {worst_proj:.3e} between thresholds"
    return ProbeResult(
        verdict=verdict,
        limit_plane=None,
        convergence=(),
        plane_dims=(),
        reason=reason,
        witness=witness,
        per_curve=tuple(per),
        projection=worst_proj if per else None,
    )
