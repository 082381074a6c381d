"""Discriminant geometry for holomorphic pairs (f, g).

The product f * conj(g) has isolated critical value exactly when the
discriminant of the pair map (f, g): C^2 -> C^2 contains no line through
the origin other than the coordinate axes; each extra line contributes a
real half-line of critical values.  This module computes that discriminant
exactly, detects its line components, decides the branch criterion (the
restriction of u * conj(v) to a curve germ is non-submersive iff the germ
is a line), and provides the shear (f + lam * g^k, g) that removes
non-axis lines for large k.

Elimination works per irreducible factor of the Jacobian over the Gaussian
rationals: the ideal (J_i, f - u, g - v) is prime, so its elimination
ideal in (u, v) is either principal (a curve component, exactly one
reduced Groebner element) or maximal (a point component).  No extraneous
factors can arise, and point components or components missing the origin
are flagged rather than silently dropped.

Everything here is exact; floats never decide a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import sympy as sp

from .core import ComplexRational, ExponentPair, MixedPolynomial
from .parsing import format_mixed, parse

__all__ = [
    "DegreeBoundError",
    "DegenerateEliminationError",
    "ShearSearchExhausted",
    "PlaneCurve",
    "LineComponent",
    "LineReport",
    "PuiseuxBranch",
    "SingDecomposition",
    "IsolatedVerdict",
    "ShearResult",
    "jacobian_det",
    "discriminant_curve",
    "line_components",
    "branch_restriction_singular",
    "isolated_value_verdict",
    "sing_decomposition",
    "axis_shear",
    "shear_search",
    "parse_branch",
]

DEGREE_BOUND = 8


class DegreeBoundError(ValueError):
    """Input degree beyond the desk-scale bound."""


class DegenerateEliminationError(RuntimeError):
    """The elimination is degenerate (e.g. identically singular Jacobian)."""


class ShearSearchExhausted(RuntimeError):
    """No shear exponent in the searched range produced an isolated value."""


# sympy bridge ------------------------------------------------------------------


def _require_plane_pair(f: MixedPolynomial, g: MixedPolynomial, op: str):
    if f.n_vars != g.n_vars:
        raise ValueError(f"{op}: variable counts differ ({f.n_vars} != {g.n_vars})")
    if not (f.is_holomorphic and g.is_holomorphic):
        raise ValueError(f"{op}: both inputs must be holomorphic")


def _cr_to_sympy(c: ComplexRational):
    return sp.Rational(c.re.numerator, c.re.denominator) + sp.I * sp.Rational(
        c.im.numerator, c.im.denominator
    )


def _holo_to_sympy(F: MixedPolynomial, syms):
    if len(syms) != F.n_vars:
        raise ValueError("symbol count mismatch")
    total = sp.Integer(0)
    for pair, c in F.terms.items():
        mon = sp.Integer(1)
        for j, e in enumerate(pair.nu):
            if e:
                mon *= syms[j] ** e
        total += _cr_to_sympy(c) * mon
    return sp.expand(total)


def _sympy_to_cr(expr) -> ComplexRational:
    re_part, im_part = sp.simplify(expr).as_real_imag()
    re_q = sp.Rational(re_part)
    im_q = sp.Rational(im_part)
    return ComplexRational(
        Fraction(int(re_q.p), int(re_q.q)), Fraction(int(im_q.p), int(im_q.q))
    )


def _sympy_to_holo(expr, syms) -> MixedPolynomial:
    n = len(syms)
    poly = sp.Poly(sp.expand(expr), *syms, domain="QQ_I")
    terms = {}
    zeros = (0,) * n
    for monom, coeff in poly.terms():
        c = _sympy_to_cr(coeff)
        terms[ExponentPair(tuple(int(e) for e in monom), zeros)] = c
    return MixedPolynomial(n, terms)


def _normalize_monic(h: MixedPolynomial) -> MixedPolynomial:
    lead = h.sorted_terms()[0][1]
    inv = ComplexRational(Fraction(1)) / lead
    return MixedPolynomial(h.n_vars, {p: c * inv for p, c in h.terms.items()})


# jacobian and discriminant ------------------------------------------------------


def jacobian_det(f: MixedPolynomial, g: MixedPolynomial) -> MixedPolynomial:
    """Holomorphic Jacobian determinant of a plane pair, exact."""
    _require_plane_pair(f, g, "jacobian_det")
    if f.n_vars != 2:
        raise ValueError(f"jacobian_det needs exactly 2 variables, got {f.n_vars}")
    df = f.wirtinger().dF
    dg = g.wirtinger().dF
    return df[0] * dg[1] - df[1] * dg[0]


@dataclass(frozen=True)
class PlaneCurve:
    """Discriminant curve germ at (0, 0) in critical-value coordinates (u, v).

    h is the squarefree defining polynomial (canonical z1 = u, z2 = v in the
    serialization), or None with origin_only=True when the critical set maps
    into the origin alone.  Components that miss the origin are excluded
    from the germ but reported in off_origin_components.
    """

    h: MixedPolynomial | None
    origin_only: bool
    components: tuple[MixedPolynomial, ...] = ()
    off_origin_components: tuple[str, ...] = ()

    def __post_init__(self):
        if (self.h is None) != self.origin_only:
            raise ValueError("exactly one of h / origin_only must be set")


def discriminant_curve(
    f: MixedPolynomial, g: MixedPolynomial, *, degree_bound: int = DEGREE_BOUND
) -> PlaneCurve:
    """Exact closure of the critical values of (f, g): C^2 -> C^2 at (0,0)."""
    _require_plane_pair(f, g, "discriminant_curve")
    if f.n_vars != 2:
        raise ValueError("discriminant_curve handles plane pairs (n = 2) only")
    if max(f.total_degree(), g.total_degree()) > degree_bound:
        raise DegreeBoundError(
            f"total degree beyond the desk-scale bound {degree_bound}"
        )
    J = jacobian_det(f, g)
    if J.is_zero:
        raise DegenerateEliminationError(
            "jacobian determinant vanishes identically; the pair has generic rank < 2"
        )
    if J.total_degree() == 0:
        return PlaneCurve(h=None, origin_only=True)

    x, y, u, v = sp.symbols("x y u v")
    fs = _holo_to_sympy(f, (x, y))
    gs = _holo_to_sympy(g, (x, y))
    Js = _holo_to_sympy(J, (x, y))
    _, factors = sp.factor_list(Js, x, y, gaussian=True)

    kept: list[MixedPolynomial] = []
    off_origin: list[str] = []
    for fac, _mult in factors:
        if not fac.free_symbols & {x, y}:
            continue
        G = sp.groebner([fs - u, gs - v, fac], x, y, u, v, order="lex", domain="QQ_I")
        elim = [e for e in G.exprs if not e.free_symbols & {x, y}]
        if not elim:
            raise DegenerateEliminationError(
                f"elimination produced no relation for factor {fac}"
            )
        if len(elim) == 1:
            h_i = _normalize_monic(_sympy_to_holo(elim[0], (u, v)))
            if h_i.total_degree() == 0:
                raise DegenerateEliminationError(
                    f"elimination collapsed to a unit for factor {fac}"
                )
            if h_i.constant_term().is_zero:
                if h_i not in kept:
                    kept.append(h_i)
            else:
                off_origin.append(format_mixed(h_i))
        else:
            # zero-dimensional image: a point component
            if G.contains(u) and G.contains(v):
                continue  # the origin itself; nothing to add to the germ
            off_origin.append(
                "point component: " + "; ".join(str(e) for e in elim)
            )

    kept.sort(key=format_mixed)
    if not kept:
        return PlaneCurve(
            h=None, origin_only=True, off_origin_components=tuple(off_origin)
        )
    h = MixedPolynomial.one(2)
    for comp in kept:
        h = h * comp
    return PlaneCurve(
        h=h,
        origin_only=False,
        components=tuple(kept),
        off_origin_components=tuple(off_origin),
    )


# line components -----------------------------------------------------------------


@dataclass(frozen=True)
class LineComponent:
    """A line through the origin contained in the discriminant curve.

    kind "axis-u" is the line {v = 0}, "axis-v" is {u = 0}, "slope" is
    {v = a*u} with a != 0.  Slopes from linear factors are exact Gaussian
    rationals; degree 2..4 factors get deterministic numeric roots with
    their minimal polynomial recorded.  halfline_direction is the direction
    of the critical-value half-line the component contributes.
    """

    kind: str
    slope: complex | None = None
    slope_exact: ComplexRational | None = None
    exact: bool = True
    minpoly: str | None = None
    halfline_direction: complex | None = None

    def __post_init__(self):
        if self.kind not in ("axis-u", "axis-v", "slope"):
            raise ValueError(f"unknown line kind {self.kind!r}")
        if (self.kind == "slope") != (self.slope is not None):
            raise ValueError("slope value present exactly for slope components")


@dataclass(frozen=True)
class LineReport:
    """All line components plus exact existence data for slope lines.

    has_slope_lines is decided exactly (degree of the coefficient gcd),
    independent of root isolation; unresolved_slope_factors lists degree > 4
    factors whose individual roots were not isolated.
    """

    components: tuple[LineComponent, ...]
    has_slope_lines: bool
    unresolved_slope_factors: tuple[str, ...] = ()

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)


def _slope_coefficient_polys(h: MixedPolynomial, a):
    """Coefficients c_j(a) of u^j in h(u, a*u), as sympy expressions."""
    by_total: dict[int, object] = {}
    for pair, c in h.terms.items():
        eu, ev = pair.nu
        j = eu + ev
        by_total[j] = by_total.get(j, sp.Integer(0)) + _cr_to_sympy(c) * a ** ev
    return [sp.expand(e) for e in by_total.values() if sp.expand(e) != 0]


def line_components(curve: PlaneCurve) -> LineReport:
    """Exact line detection in a discriminant curve."""
    if curve.origin_only:
        return LineReport(components=(), has_slope_lines=False)
    h = curve.h
    comps: list[LineComponent] = []
    # axis tests: u | h <=> h(0, v) == 0 (the v-axis), v | h <=> h(u, 0) == 0
    if all(p.nu[1] > 0 for p in h.terms):
        comps.append(LineComponent(kind="axis-u"))
    if all(p.nu[0] > 0 for p in h.terms):
        comps.append(LineComponent(kind="axis-v"))

    a = sp.Symbol("a")
    coeffs = _slope_coefficient_polys(h, a)
    g = sp.Integer(0)
    for c in coeffs:
        g = sp.gcd(g, c, gaussian=True) if g != 0 else c
    g = sp.expand(g)
    has_slopes = False
    unresolved: list[str] = []
    slope_comps: list[LineComponent] = []
    if g.free_symbols and sp.Poly(g, a, domain="QQ_I").degree() >= 1:
        _, factors = sp.factor_list(g, a, gaussian=True)
        for fac, _mult in factors:
            p = sp.Poly(fac, a, domain="QQ_I")
            deg = p.degree()
            if deg == 0:
                continue
            if deg == 1:
                c1, c0 = p.all_coeffs()
                root = sp.simplify(-c0 / c1)
                cr = _sympy_to_cr(root)
                if cr.is_zero:
                    continue  # the a = 0 root is the u-axis, not a slope line
                has_slopes = True
                slope_comps.append(
                    LineComponent(
                        kind="slope",
                        slope=complex(cr),
                        slope_exact=cr,
                        exact=True,
                        halfline_direction=_halfline(complex(cr)),
                    )
                )
            elif deg <= 4:
                # irreducible of degree >= 2 over QQ_I never has the root 0
                has_slopes = True
                for root in p.nroots(n=20):
                    rv = complex(root)
                    slope_comps.append(
                        LineComponent(
                            kind="slope",
                            slope=rv,
                            exact=False,
                            minpoly=str(fac),
                            halfline_direction=_halfline(rv),
                        )
                    )
            else:
                has_slopes = True
                unresolved.append(str(fac))
        slope_comps.sort(key=lambda c: (c.slope.real, c.slope.imag))
        comps.extend(slope_comps)
    return LineReport(
        components=tuple(comps),
        has_slope_lines=has_slopes,
        unresolved_slope_factors=tuple(unresolved),
    )


def _halfline(slope: complex) -> complex:
    """Critical values along {v = a*u} sweep the half-line R+ * conj(a)."""
    w = slope.conjugate()
    return w / abs(w)


# branch criterion -----------------------------------------------------------------


@dataclass(frozen=True)
class PuiseuxBranch:
    """Parametrized curve germ u = t^p, v = sum a_i t^{q_i} in target space."""

    p: int
    terms: tuple[tuple[ComplexRational, int], ...]

    def __post_init__(self):
        if not (isinstance(self.p, int) and self.p >= 1):
            raise ValueError("p must be a positive integer")
        terms = tuple(self.terms)
        object.__setattr__(self, "terms", terms)
        if not terms:
            raise ValueError("branch needs at least one v-term")
        exps = [e for _, e in terms]
        if any(e < 1 for e in exps) or sorted(set(exps)) != exps:
            raise ValueError("exponents must be strictly increasing positive integers")
        if any(
            (c.is_zero if isinstance(c, ComplexRational) else complex(c) == 0)
            for c, _ in terms
        ):
            raise ValueError("branch coefficients must be nonzero")


def branch_restriction_singular(branch: PuiseuxBranch) -> bool:
    """Is u * conj(v) restricted to this branch non-submersive near 0?

    True exactly when the branch is a line: a single v-term with the same
    exponent as u (leading-order balance forces equal exponents, and any
    second term breaks the required identity).
    """
    return len(branch.terms) == 1 and branch.terms[0][1] == branch.p


def parse_branch(text: str) -> PuiseuxBranch:
    """Parse 'u = t^p; v = a1*t^q1 + a2*t^q2 + ...' into a branch."""
    parts = [p.strip() for p in text.split(";")]
    if len(parts) != 2:
        raise ValueError(f"branch must have exactly two clauses: {text!r}")
    u_side, v_side = parts
    if not u_side.replace(" ", "").startswith("u="):
        raise ValueError(f"first clause must define u: {u_side!r}")
    if not v_side.replace(" ", "").startswith("v="):
        raise ValueError(f"second clause must define v: {v_side!r}")
    u_rhs = u_side.split("=", 1)[1].strip()
    u_poly = parse(u_rhs, ("t",))
    u_terms = u_poly.sorted_terms()
    if len(u_terms) != 1 or u_terms[0][1] != ComplexRational(Fraction(1)):
        raise ValueError(f"u must be a plain power t^p: {u_rhs!r}")
    p = u_terms[0][0].nu[0]
    v_poly = parse(v_side.split("=", 1)[1].strip(), ("t",))
    terms = sorted(
        ((c, pair.nu[0]) for pair, c in v_poly.terms.items()), key=lambda t: t[1]
    )
    return PuiseuxBranch(p=p, terms=tuple(terms))


# verdicts -------------------------------------------------------------------------


@dataclass(frozen=True)
class IsolatedVerdict:
    """Whether 0 is an isolated critical value of f * conj(g)."""

    status: str  # "isolated" | "not-isolated" | "unknown"
    route: str  # "discriminant-curve" | "containment" | "supplied-branches" | "none"
    witnesses: tuple[LineComponent, ...] = ()
    discriminant: PlaneCurve | None = None
    notes: tuple[str, ...] = ()


def _jacobian_minors(f: MixedPolynomial, g: MixedPolynomial) -> list[MixedPolynomial]:
    df = f.wirtinger().dF
    dg = g.wirtinger().dF
    n = f.n_vars
    minors = []
    for i in range(n):
        for j in range(i + 1, n):
            m = df[i] * dg[j] - df[j] * dg[i]
            if not m.is_zero:
                minors.append(m)
    return minors


def _vanishes_on_critical_set(target: MixedPolynomial, minors, syms) -> bool:
    """Radical membership: does target vanish wherever all minors do?"""
    w = sp.Symbol("w_rabinowitsch")
    gens = [_holo_to_sympy(m, syms) for m in minors]
    t = _holo_to_sympy(target, syms)
    G = sp.groebner([*gens, 1 - w * t], *syms, w, order="grevlex", domain="QQ_I")
    return list(G.exprs) == [sp.Integer(1)]


def isolated_value_verdict(
    f: MixedPolynomial, g: MixedPolynomial, *, branches=None
) -> IsolatedVerdict:
    """Decide isolation of the critical value 0 of f * conj(g).

    Plane pairs get the exact discriminant route.  In higher dimension the
    exact containment check (f and g vanish on the critical set of the
    pair, hence the discriminant is the origin) is tried first, then
    user-supplied discriminant branches (asserted complete) are classified
    by the line criterion; otherwise the verdict is unknown.
    """
    _require_plane_pair(f, g, "isolated_value_verdict")
    if f.n_vars == 2:
        disc = discriminant_curve(f, g)
        report = line_components(disc)
        slope_witnesses = tuple(c for c in report if c.kind == "slope")
        if disc.origin_only or not report.has_slope_lines:
            return IsolatedVerdict(
                status="isolated", route="discriminant-curve", discriminant=disc
            )
        return IsolatedVerdict(
            status="not-isolated",
            route="discriminant-curve",
            witnesses=slope_witnesses,
            discriminant=disc,
            notes=("each non-axis line yields a half-line of critical values",),
        )
    minors = _jacobian_minors(f, g)
    if not minors:
        raise DegenerateEliminationError(
            "pair Jacobian has rank < 2 everywhere; no meaningful discriminant"
        )
    syms = sp.symbols(f"x1:{f.n_vars + 1}")
    if _vanishes_on_critical_set(f, minors, syms) and _vanishes_on_critical_set(
        g, minors, syms
    ):
        return IsolatedVerdict(
            status="isolated",
            route="containment",
            notes=("critical set of the pair lies in {f = g = 0}",),
        )
    if branches is not None:
        lines = tuple(b for b in branches if branch_restriction_singular(b))
        if lines:
            witnesses = tuple(
                LineComponent(
                    kind="slope",
                    slope=complex(b.terms[0][0]),
                    slope_exact=b.terms[0][0]
                    if isinstance(b.terms[0][0], ComplexRational)
                    else None,
                    exact=isinstance(b.terms[0][0], ComplexRational),
                    halfline_direction=_halfline(complex(b.terms[0][0])),
                )
                for b in lines
            )
            return IsolatedVerdict(
                status="not-isolated",
                route="supplied-branches",
                witnesses=witnesses,
                notes=("verdict relies on user-supplied branch list",),
            )
        return IsolatedVerdict(
            status="isolated",
            route="supplied-branches",
            notes=("verdict relies on user-supplied branch list being complete",),
        )
    return IsolatedVerdict(status="unknown", route="none")


# singular locus decomposition ------------------------------------------------------


@dataclass(frozen=True)
class SingDecomposition:
    """Generators describing Sing(f * conj(g)) inside the zero fibre V.

    On V the singular set is {f = g = 0} union Sing f union Sing g; off V
    it embeds into the critical set of the pair map, witnessed by the
    Jacobian minors (off_v_minors).
    """

    common_zero: tuple[MixedPolynomial, ...]
    sing_f: tuple[MixedPolynomial, ...]
    sing_g: tuple[MixedPolynomial, ...]
    off_v_minors: tuple[MixedPolynomial, ...]
    simplified: dict = field(default_factory=dict)


def _reduced_basis(gens, syms) -> tuple[MixedPolynomial, ...]:
    nonzero = [g for g in gens if not g.is_zero]
    if not nonzero:
        return ()
    exprs = [_holo_to_sympy(g, syms) for g in nonzero]
    G = sp.groebner(exprs, *syms, order="grevlex", domain="QQ_I")
    out = []
    for e in G.exprs:
        h = _sympy_to_holo(e, syms)
        if h.total_degree() == 0:
            return (MixedPolynomial.one(len(syms)),)  # unit ideal: empty set
        out.append(_normalize_monic(h))
    out.sort(key=format_mixed)
    return tuple(out)


def sing_decomposition(f: MixedPolynomial, g: MixedPolynomial) -> SingDecomposition:
    """Symbolic decomposition of the singular set of f * conj(g) on V."""
    _require_plane_pair(f, g, "sing_decomposition")
    df = f.wirtinger().dF
    dg = g.wirtinger().dF
    syms = sp.symbols(f"x1:{f.n_vars + 1}")
    common = (f, g)
    sing_f = tuple(p for p in df)
    sing_g = tuple(p for p in dg)
    minors = tuple(_jacobian_minors(f, g))
    simplified = {
        "common_zero": [format_mixed(h) for h in _reduced_basis(common, syms)],
        "sing_f": [format_mixed(h) for h in _reduced_basis(sing_f, syms)],
        "sing_g": [format_mixed(h) for h in _reduced_basis(sing_g, syms)],
        "off_v_minors": [format_mixed(h) for h in _reduced_basis(minors, syms)],
    }
    return SingDecomposition(
        common_zero=common,
        sing_f=sing_f,
        sing_g=sing_g,
        off_v_minors=minors,
        simplified=simplified,
    )


# shear -----------------------------------------------------------------------------


@dataclass(frozen=True)
class ShearResult:
    f_sheared: MixedPolynomial
    g: MixedPolynomial
    k: int
    verdict: IsolatedVerdict


def axis_shear(f: MixedPolynomial, g: MixedPolynomial, k: int, lam=1):
    """The sheared pair (f + lam * g^k, g)."""
    _require_plane_pair(f, g, "axis_shear")
    if not (isinstance(k, int) and k >= 1):
        raise ValueError("shear exponent k must be a positive integer")
    lam_c = lam if isinstance(lam, ComplexRational) else ComplexRational(Fraction(lam))
    return (f + lam_c * g ** k, g)


def shear_search(
    f: MixedPolynomial,
    g: MixedPolynomial,
    *,
    lam=1,
    k_min: int = 2,
    k_max: int = 8,
) -> ShearResult:
    """Increase k until the sheared pair has isolated critical value."""
    for k in range(k_min, k_max + 1):
        fs, gs = axis_shear(f, g, k, lam)
        verdict = isolated_value_verdict(fs, gs)
        if verdict.status == "isolated":
            return ShearResult(f_sheared=fs, g=gs, k=k, verdict=verdict)
    raise ShearSearchExhausted(
        f"no shear exponent in [{k_min}, {k_max}] yields an isolated critical value"
    )
