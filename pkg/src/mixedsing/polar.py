"""Polar weighted-homogeneity: exact detection of S^1-symmetry weights.

A mixed polynomial F is polar weighted-homogeneous for nonzero integer
weights p_1..p_n and nonzero degree k when every term satisfies

    sum_j p_j * (nu_j - mu_j) = k,       gcd(|p_1|, ..., |p_n|) = 1.

Then the circle action  lam . z = (lam^{p_1} z_1, ..., lam^{p_n} z_n)
multiplies F by lam^k, which is what makes the Milnor tube fibration work.

Detection is exact: the admissible (p, k) form a sublattice of Z^{n+1}
(kernel of the term-difference matrix), computed by unimodular integer row
reduction.  The canonical representative is searched inside a bounded ball
sum |p_j| <= bound; failure to find one there is reported as "unknown",
never as a false "no".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .core import MixedPolynomial, complex_point

__all__ = ["PolarWeights", "PolarSolution", "solve_polar", "orbit_check", "integer_kernel"]

DEFAULT_BOUND = 64
_ENUM_CAP = 5_000_000


@dataclass(frozen=True)
class PolarWeights:
    """Validated weight vector p (all nonzero, gcd 1) with polar degree k."""

    p: tuple[int, ...]
    k: int

    def __post_init__(self):
        p = tuple(int(x) for x in self.p)
        object.__setattr__(self, "p", p)
        if not p:
            raise ValueError("empty weight vector")
        if any(x == 0 for x in p):
            raise ValueError(f"weights must be nonzero: {p}")
        g = 0
        for x in p:
            g = gcd(g, abs(x))
        if g != 1:
            raise ValueError(f"weights must have gcd 1: {p}")
        if not isinstance(self.k, int):
            raise ValueError("polar degree k must be an integer")


@dataclass(frozen=True)
class PolarSolution:
    """Outcome of solve_polar.

    status is "found", "none" (certified absence) or "unknown" (bounded
    search exhausted without certificate).  lattice_basis spans every
    integer solution (p, k) of the linear system, before the nonzero/gcd
    side conditions.
    """

    canonical: PolarWeights | None
    lattice_basis: tuple[tuple[int, ...], ...]
    status: str
    bound_used: int
    reason: str = ""

    def as_report(self) -> dict:
        verdict = {"found": "yes", "none": "no", "unknown": "unknown"}[self.status]
        return {
            "polar": verdict,
            "p": list(self.canonical.p) if self.canonical else None,
            "k": self.canonical.k if self.canonical else None,
            "bound_used": self.bound_used,
        }


def integer_kernel(rows: list[list[int]], width: int) -> list[list[int]]:
    """Saturated basis of {x in Z^width : M x = 0} for integer matrix M.

    Row-reduces M^T with unimodular row operations while tracking them in
    an identity block; tracker rows matching zeroed rows of the echelon
    form span the kernel.
    """
    m = len(rows)
    # T = [M^T | I], width rows of length m + width
    T = [[rows[r][c] for r in range(m)] + [1 if j == c else 0 for j in range(width)]
         for c in range(width)]
    row = 0
    for col in range(m):
        while True:
            pivots = [r for r in range(row, width) if T[r][col] != 0]
            if not pivots:
                break
            best = min(pivots, key=lambda r: abs(T[r][col]))
            T[row], T[best] = T[best], T[row]
            done = True
            for r in range(row + 1, width):
                if T[r][col] != 0:
                    q = T[r][col] // T[row][col]
                    if q:
                        T[r] = [a - q * b for a, b in zip(T[r], T[row])]
                    if T[r][col] != 0:
                        done = False
            if done:
                row += 1
                break
        if row == width:
            break
    kernel = []
    for r in range(width):
        if all(T[r][c] == 0 for c in range(m)):
            kernel.append(T[r][m:])
    return kernel


def _difference_vectors(F: MixedPolynomial) -> list[tuple[int, ...]]:
    seen = set()
    for pair in F.terms:
        d = tuple(a - b for a, b in zip(pair.nu, pair.mu))
        seen.add(d)
    return sorted(seen)


def _rational_pinv_colmax(basis: list[list[int]]) -> list[Fraction]:
    """Column maxima of B^T (B B^T)^{-1}, exact; used to bound coefficients."""
    r = len(basis)
    w = len(basis[0])
    # G = B B^T (r x r), invert over Fraction by Gauss-Jordan
    G = [[Fraction(sum(basis[i][t] * basis[j][t] for t in range(w))) for j in range(r)]
         for i in range(r)]
    inv = [[Fraction(1 if i == j else 0) for j in range(r)] for i in range(r)]
    for col in range(r):
        piv = next(i for i in range(col, r) if G[i][col] != 0)  # G is PD, pivot exists
        G[col], G[piv] = G[piv], G[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        s = G[col][col]
        G[col] = [x / s for x in G[col]]
        inv[col] = [x / s for x in inv[col]]
        for i in range(r):
            if i != col and G[i][col]:
                f = G[i][col]
                G[i] = [a - f * b for a, b in zip(G[i], G[col])]
                inv[i] = [a - f * b for a, b in zip(inv[i], inv[col])]
    # P = B^T * inv  (w x r); we only need per-column maxima of |P|
    colmax = []
    for i in range(r):
        best = Fraction(0)
        for j in range(w):
            entry = sum(Fraction(basis[t][j]) * inv[t][i] for t in range(r))
            if abs(entry) > best:
                best = abs(entry)
        colmax.append(best)
    return colmax


def _candidate_key(p: tuple[int, ...], k: int):
    # minimize sum|p|, then |k|, prefer k > 0, then lexicographically largest p
    return (sum(abs(x) for x in p), abs(k), 0 if k > 0 else 1, tuple(-x for x in p))


def solve_polar(
    F: MixedPolynomial,
    *,
    bound: int = DEFAULT_BOUND,
    require_nonzero_k: bool = True,
) -> PolarSolution:
    """Find canonical polar weights for F, or certify/report their absence."""
    if F.is_zero:
        raise ValueError("the zero polynomial has no meaningful polar weights")
    n = F.n_vars
    diffs = _difference_vectors(F)
    rows = [list(d) + [-1] for d in diffs]
    basis = integer_kernel(rows, n + 1)
    basis_t = tuple(tuple(v) for v in basis)
    if not basis:
        return PolarSolution(None, basis_t, "none", bound, "solution lattice is trivial")
    for j in range(n):
        if all(v[j] == 0 for v in basis):
            return PolarSolution(
                None, basis_t, "none", bound, f"weight p_{j+1} is forced to zero"
            )
    k_always_zero = all(v[n] == 0 for v in basis)
    if k_always_zero and require_nonzero_k:
        return PolarSolution(None, basis_t, "none", bound, "polar degree k is forced to zero")

    # bounded enumeration of the lattice ball sum|p| <= bound
    dmax = max((max(abs(x) for x in d) for d in diffs if any(d)), default=0)
    v1_bound = bound * (1 + dmax)  # |k| <= sum|p| * dmax
    colmax = _rational_pinv_colmax(basis)
    boxes = [int(v1_bound * c) for c in colmax]
    total = 1
    for b in boxes:
        total *= 2 * b + 1
        if total > _ENUM_CAP:
            return PolarSolution(
                None, basis_t, "unknown", bound,
                "enumeration box exceeds cap; no certificate either way",
            )

    best: tuple | None = None
    best_pk: tuple[tuple[int, ...], int] | None = None
    r = len(basis)

    def rec(i: int, acc: list[int]):
        nonlocal best, best_pk
        if i == r:
            p = tuple(acc[:n])
            k = acc[n]
            if any(x == 0 for x in p):
                return
            if k == 0 and require_nonzero_k:
                return
            if sum(abs(x) for x in p) > bound:
                return
            g = 0
            for x in p:
                g = gcd(g, abs(x))
            g = gcd(g, abs(k))
            if g > 1:
                p = tuple(x // g for x in p)
                k //= g
            key = _candidate_key(p, k)
            if best is None or key < best:
                best, best_pk = key, (p, k)
            return
        for c in range(-boxes[i], boxes[i] + 1):
            nxt = [a + c * b for a, b in zip(acc, basis[i])] if i else [c * b for b in basis[i]]
            rec(i + 1, nxt)

    rec(0, [0] * (n + 1))
    if best_pk is None:
        return PolarSolution(
            None, basis_t, "unknown", bound,
            f"no admissible weights with sum|p| <= {bound}",
        )
    p, k = best_pk
    return PolarSolution(PolarWeights(p, k), basis_t, "found", bound)


def orbit_check(F: MixedPolynomial, weights: PolarWeights, lam: complex, z) -> float:
    """Residual |F(lam . z) - lam^k F(z)| for the weighted circle action."""
    if len(weights.p) != F.n_vars:
        raise ValueError("weight vector length does not match polynomial arity")
    lam = complex(lam)
    if abs(abs(lam) - 1.0) > 1e-12:
        raise ValueError(f"lam must lie on the unit circle, |lam| = {abs(lam)!r}")
    pt = complex_point(z, F.n_vars)
    moved = tuple(lam ** w * zj for w, zj in zip(weights.p, pt))
    return abs(F.evaluate(moved) - lam ** weights.k * F.evaluate(pt))
