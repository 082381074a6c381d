"""Shared numeric helpers: compiled evaluators and real 2-plane geometry.

Complex n-vectors are identified with R^{2n} by stacking real parts then
imaginary parts; "real span" always means span over R in that picture.
"""

from __future__ import annotations

import numpy as np

from .core import MixedPolynomial

__all__ = [
    "compile_poly",
    "compile_frame",
    "realify",
    "unrealify",
    "real_span_basis",
    "grassmann_distance",
]


def compile_poly(F: MixedPolynomial):
    """Vectorized evaluator: Z with shape (..., n) complex -> values (...)."""
    n = F.n_vars
    pairs = list(F.terms.items())
    if not pairs:
        def ev_zero(Z):
            Z = np.asarray(Z, dtype=complex)
            return np.zeros(Z.shape[:-1], dtype=complex)
        return ev_zero
    nu = np.array([p.nu for p, _ in pairs], dtype=np.int64)      # (T, n)
    mu = np.array([p.mu for p, _ in pairs], dtype=np.int64)
    coeffs = np.array([complex(c) for _, c in pairs], dtype=complex)

    def ev(Z):
        Z = np.asarray(Z, dtype=complex)
        Zc = np.conj(Z)
        # (..., T, n) powers; 0**0 == 1 holds for complex numpy
        zp = Z[..., None, :] ** nu
        wp = Zc[..., None, :] ** mu
        return (zp * wp).prod(axis=-1) @ coeffs

    return ev


def compile_frame(F: MixedPolynomial):
    """Evaluator for the Wirtinger data: Z (..., n) -> (a, b) each (..., n).

    a = conj(dF) evaluated (conjugate of the z-gradient values) and
    b = dbarF evaluated; the normal 2-plane at z is span_R{a+b, i(a-b)}.
    """
    grad = F.wirtinger()
    d_evs = [compile_poly(p) for p in grad.dF]
    b_evs = [compile_poly(p) for p in grad.dbarF]

    def ev(Z):
        Z = np.asarray(Z, dtype=complex)
        a = np.stack([np.conj(e(Z)) for e in d_evs], axis=-1)
        b = np.stack([e(Z) for e in b_evs], axis=-1)
        return a, b

    return ev


def realify(v: np.ndarray) -> np.ndarray:
    """C^n -> R^{2n}, stacking (Re v, Im v) along the last axis."""
    v = np.asarray(v, dtype=complex)
    return np.concatenate([v.real, v.imag], axis=-1)


def unrealify(r: np.ndarray) -> np.ndarray:
    """Inverse of realify on the last axis."""
    r = np.asarray(r, dtype=float)
    n = r.shape[-1] // 2
    return r[..., :n] + 1j * r[..., n:]


def real_span_basis(vectors, rtol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis (rows, R^{2n}) of the real span of complex vectors.

    Rank is decided by singular values relative to the largest; an all-zero
    input yields a (0, 2n) basis.
    """
    M = np.stack([realify(np.asarray(v, dtype=complex)) for v in vectors])
    scale = np.abs(M).max()
    if scale == 0.0 or not np.isfinite(scale):
        return np.zeros((0, M.shape[1]))
    _, s, vt = np.linalg.svd(M / scale, full_matrices=False)
    rank = int((s > s[0] * rtol).sum()) if s.size and s[0] > 0 else 0
    return vt[:rank]


def grassmann_distance(Q1: np.ndarray, Q2: np.ndarray) -> float:
    """Geodesic distance on the Grassmannian: l2 norm of principal angles.

    Both arguments must be orthonormal row bases of equal dimension; planes
    of different dimension are incomparable and raise ValueError.
    """
    Q1 = np.asarray(Q1, dtype=float)
    Q2 = np.asarray(Q2, dtype=float)
    if Q1.shape != Q2.shape:
        raise ValueError(f"incomparable subspace dimensions {Q1.shape[0]} != {Q2.shape[0]}")
    if Q1.shape[0] == 0:
        return 0.0
    M = Q1 @ Q2.T
    # cosines alone lose ~sqrt(eps) accuracy near angle 0 (arccos of 1 - eps),
    # so pair them with sines of the projection residual and use atan2
    cos = np.sort(np.clip(np.linalg.svd(M, compute_uv=False), 0.0, 1.0))[::-1]
    resid = Q2 - M.T @ Q1
    sin = np.sort(np.clip(np.linalg.svd(resid, compute_uv=False), 0.0, 1.0))
    return float(np.linalg.norm(np.arctan2(sin, cos)))
