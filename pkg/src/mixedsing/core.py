"""Exact arithmetic for mixed polynomials in z and conj(z).

A mixed polynomial in n complex variables is a finite sum

    F(z, zbar) = sum_{(nu, mu)} c_{nu,mu} * z^nu * zbar^mu

with complex-rational coefficients and multi-indices nu, mu of length n.
Treating z and zbar as independent coordinates makes F a polynomial map
R^{2n} -> R^2, and the two Wirtinger gradients (d/dz_j and d/dzbar_j)
carry all first-order real information.

All values here are immutable; arithmetic returns fresh objects in
canonical form (zero coefficients dropped, exponents validated).  Exact
coefficients survive every symbolic operation; floats only appear when
`evaluate` is called.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "ComplexRational",
    "ExponentPair",
    "MixedPolynomial",
    "WirtingerGradient",
    "complex_point",
    "from_pair",
]

_RationalLike = Union[int, Fraction]


def _as_fraction(x: _RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


@dataclass(frozen=True)
class ComplexRational:
    """A Gaussian rational re + im*i with auto-reduced Fraction parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _as_fraction(self.re))
        object.__setattr__(self, "im", _as_fraction(self.im))

    @property
    def is_zero(self) -> bool:
        return not self.re and not self.im

    @property
    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def __add__(self, other):
        other = _coerce_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other):
        other = _coerce_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _coerce_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        return ComplexRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce_scalar(other)
        if other is NotImplemented:
            return NotImplemented
        d = other.re * other.re + other.im * other.im
        if not d:
            raise ZeroDivisionError("division by zero ComplexRational")
        return self * ComplexRational(other.re / d, -other.im / d)

    def __complex__(self) -> complex:
        return complex(self.re) + 1j * complex(self.im)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __repr__(self) -> str:
        return f"ComplexRational({self.re!s}, {self.im!s})"


def _coerce_scalar(x) -> ComplexRational:
    if isinstance(x, ComplexRational):
        return x
    if isinstance(x, (int, Fraction)):
        return ComplexRational(_as_fraction(x))
    return NotImplemented


CR_ZERO = ComplexRational()
CR_ONE = ComplexRational(Fraction(1))
CR_I = ComplexRational(Fraction(0), Fraction(1))


@dataclass(frozen=True)
class ExponentPair:
    """Multi-index pair (nu, mu): exponents of z and of conj(z)."""

    nu: tuple[int, ...]
    mu: tuple[int, ...]

    def __post_init__(self):
        nu, mu = tuple(self.nu), tuple(self.mu)
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "mu", mu)
        if len(nu) != len(mu):
            raise ValueError(f"nu and mu must have equal length, got {len(nu)} != {len(mu)}")
        if any(e < 0 or not isinstance(e, int) for e in nu + mu):
            raise ValueError(f"exponents must be nonnegative integers: nu={nu} mu={mu}")

    @property
    def n_vars(self) -> int:
        return len(self.nu)

    @property
    def degree(self) -> int:
        return sum(self.nu) + sum(self.mu)

    def swap(self) -> "ExponentPair":
        return ExponentPair(self.mu, self.nu)

    def key(self) -> tuple:
        # graded lexicographic on the concatenated (nu, mu)
        return (self.degree, self.nu + self.mu)


@dataclass(frozen=True)
class WirtingerGradient:
    """Both Wirtinger gradients of a mixed polynomial, componentwise."""

    dF: tuple["MixedPolynomial", ...]
    dbarF: tuple["MixedPolynomial", ...]

    @property
    def n_vars(self) -> int:
        return len(self.dF)


class MixedPolynomial:
    """Immutable sparse mixed polynomial keyed by ExponentPair.

    The term map never stores a zero coefficient; the zero polynomial is
    the empty map together with an explicit n_vars.
    """

    __slots__ = ("n_vars", "_terms")

    def __init__(self, n_vars: int, terms: Mapping[ExponentPair, ComplexRational] | Iterable = ()):
        if not isinstance(n_vars, int) or n_vars < 1:
            raise ValueError(f"n_vars must be a positive integer, got {n_vars!r}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[ExponentPair, ComplexRational] = {}
        for pair, coeff in items:
            if not isinstance(pair, ExponentPair):
                pair = ExponentPair(*pair)
            if pair.n_vars != n_vars:
                raise ValueError(
                    f"exponent pair over {pair.n_vars} variables in a {n_vars}-variable polynomial"
                )
            c = _coerce_scalar(coeff)
            if c is NotImplemented:
                raise TypeError(f"bad coefficient {coeff!r}")
            c = acc.get(pair, CR_ZERO) + c
            if c.is_zero:
                acc.pop(pair, None)
            else:
                acc[pair] = c
        object.__setattr__(self, "n_vars", n_vars)
        object.__setattr__(self, "_terms", acc)

    def __setattr__(self, name, value):  # pragma: no cover - guard
        raise AttributeError("MixedPolynomial is immutable")

    # -- construction helpers -------------------------------------------------

    @classmethod
    def zero(cls, n_vars: int) -> "MixedPolynomial":
        return cls(n_vars)

    @classmethod
    def constant(cls, c, n_vars: int) -> "MixedPolynomial":
        zeros = (0,) * n_vars
        return cls(n_vars, {ExponentPair(zeros, zeros): c})

    @classmethod
    def one(cls, n_vars: int) -> "MixedPolynomial":
        return cls.constant(1, n_vars)

    @classmethod
    def variable(cls, j: int, n_vars: int) -> "MixedPolynomial":
        """The coordinate z_j (0-based j)."""
        if not 0 <= j < n_vars:
            raise ValueError(f"variable index {j} out of range for n_vars={n_vars}")
        nu = tuple(1 if i == j else 0 for i in range(n_vars))
        return cls(n_vars, {ExponentPair(nu, (0,) * n_vars): CR_ONE})

    @classmethod
    def conj_variable(cls, j: int, n_vars: int) -> "MixedPolynomial":
        """The coordinate conj(z_j) (0-based j)."""
        if not 0 <= j < n_vars:
            raise ValueError(f"variable index {j} out of range for n_vars={n_vars}")
        mu = tuple(1 if i == j else 0 for i in range(n_vars))
        return cls(n_vars, {ExponentPair((0,) * n_vars, mu): CR_ONE})

    @classmethod
    def monomial(cls, nu: Sequence[int], mu: Sequence[int], coeff=1) -> "MixedPolynomial":
        pair = ExponentPair(tuple(nu), tuple(mu))
        return cls(pair.n_vars, {pair: coeff})

    # -- structure ------------------------------------------------------------

    @property
    def terms(self) -> Mapping[ExponentPair, ComplexRational]:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list[tuple[ExponentPair, ComplexRational]]:
        """Terms in canonical order: descending graded lex on (nu, mu)."""
        return sorted(self._terms.items(), key=lambda t: t[0].key(), reverse=True)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_holomorphic(self) -> bool:
        return all(not any(p.mu) for p in self._terms)

    def total_degree(self) -> int:
        """Degree of the zero polynomial is -1 by convention here."""
        return max((p.degree for p in self._terms), default=-1)

    def variables_used(self) -> frozenset[int]:
        used = set()
        for p in self._terms:
            for j in range(self.n_vars):
                if p.nu[j] or p.mu[j]:
                    used.add(j)
        return frozenset(used)

    def constant_term(self) -> ComplexRational:
        zeros = (0,) * self.n_vars
        return self._terms.get(ExponentPair(zeros, zeros), CR_ZERO)

    def coefficient(self, nu: Sequence[int], mu: Sequence[int]) -> ComplexRational:
        return self._terms.get(ExponentPair(tuple(nu), tuple(mu)), CR_ZERO)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MixedPolynomial):
            return NotImplemented
        return self.n_vars == other.n_vars and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.n_vars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        body = ", ".join(
            f"{p.nu}|{p.mu}: {c.re}{'+' if c.im >= 0 else ''}{c.im}i"
            for p, c in self.sorted_terms()
        )
        return f"MixedPolynomial(n={self.n_vars}, {{{body}}})"

    # -- ring operations -------------------------------------------------------

    def _check_same_space(self, other: "MixedPolynomial"):
        if self.n_vars != other.n_vars:
            raise ValueError(
                f"mixed polynomials over different variable counts: {self.n_vars} != {other.n_vars}"
            )

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_same_space(other)
        acc = dict(self._terms)
        for pair, c in other._terms.items():
            s = acc.get(pair, CR_ZERO) + c
            if s.is_zero:
                acc.pop(pair, None)
            else:
                acc[pair] = s
        return MixedPolynomial(self.n_vars, acc)

    __radd__ = __add__

    def __neg__(self) -> "MixedPolynomial":
        return MixedPolynomial(self.n_vars, {p: -c for p, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        self._check_same_space(other)
        acc: dict[ExponentPair, ComplexRational] = {}
        for p1, c1 in self._terms.items():
            for p2, c2 in other._terms.items():
                pair = ExponentPair(
                    tuple(a + b for a, b in zip(p1.nu, p2.nu)),
                    tuple(a + b for a, b in zip(p1.mu, p2.mu)),
                )
                s = acc.get(pair, CR_ZERO) + c1 * c2
                if s.is_zero:
                    acc.pop(pair, None)
                else:
                    acc[pair] = s
        return MixedPolynomial(self.n_vars, acc)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "MixedPolynomial":
        if not isinstance(e, int) or e < 0:
            raise ValueError(f"exponent must be a nonnegative integer, got {e!r}")
        out = MixedPolynomial.one(self.n_vars)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def _coerce(self, x):
        if isinstance(x, MixedPolynomial):
            return x
        c = _coerce_scalar(x)
        if c is NotImplemented:
            return NotImplemented
        return MixedPolynomial.constant(c, self.n_vars)

    # -- the operations that matter --------------------------------------------

    def conjugate(self) -> "MixedPolynomial":
        """Complex conjugate: swaps nu <-> mu and conjugates coefficients."""
        return MixedPolynomial(
            self.n_vars, {p.swap(): c.conjugate() for p, c in self._terms.items()}
        )

    def wirtinger(self) -> WirtingerGradient:
        """Both Wirtinger gradients, treating z and conj(z) as independent."""
        n = self.n_vars
        dF = []
        dbarF = []
        for j in range(n):
            dj: dict[ExponentPair, ComplexRational] = {}
            bj: dict[ExponentPair, ComplexRational] = {}
            for p, c in self._terms.items():
                if p.nu[j]:
                    q = ExponentPair(
                        p.nu[:j] + (p.nu[j] - 1,) + p.nu[j + 1:], p.mu
                    )
                    dj[q] = dj.get(q, CR_ZERO) + c * p.nu[j]
                if p.mu[j]:
                    q = ExponentPair(
                        p.nu, p.mu[:j] + (p.mu[j] - 1,) + p.mu[j + 1:]
                    )
                    bj[q] = bj.get(q, CR_ZERO) + c * p.mu[j]
            dF.append(MixedPolynomial(n, dj))
            dbarF.append(MixedPolynomial(n, bj))
        return WirtingerGradient(tuple(dF), tuple(dbarF))

    def evaluate(self, z: Sequence[complex]) -> complex:
        """Evaluate at a point; exact coefficients are complexified last."""
        pt = complex_point(z, self.n_vars)
        zb = tuple(w.conjugate() for w in pt)
        total = 0j
        for p, c in self._terms.items():
            m = 1 + 0j
            for j in range(self.n_vars):
                if p.nu[j]:
                    m *= pt[j] ** p.nu[j]
                if p.mu[j]:
                    m *= zb[j] ** p.mu[j]
            total += complex(c) * m
        return total


def complex_point(coords: Sequence[complex], n_vars: int | None = None) -> tuple[complex, ...]:
    """Validate and normalize a point of C^n: finite complex entries."""
    pt = tuple(complex(w) for w in coords)
    if n_vars is not None and len(pt) != n_vars:
        raise ValueError(f"point has {len(pt)} coordinates, expected {n_vars}")
    for w in pt:
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            raise ValueError(f"non-finite coordinate {w!r}")
    return pt


def from_pair(f: MixedPolynomial, g: MixedPolynomial) -> MixedPolynomial:
    """Build the mixed product f * conj(g) from two holomorphic inputs."""
    if not isinstance(f, MixedPolynomial) or not isinstance(g, MixedPolynomial):
        raise TypeError("from_pair expects two MixedPolynomial values")
    if f.n_vars != g.n_vars:
        raise ValueError(f"variable counts differ: {f.n_vars} != {g.n_vars}")
    if not f.is_holomorphic:
        raise ValueError("f must be holomorphic (no conj factors)")
    if not g.is_holomorphic:
        raise ValueError("g must be holomorphic (no conj factors)")
    return f * g.conjugate()
