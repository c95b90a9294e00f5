"""Analytic functions on the unit disk.

Functions are immutable trees built from four leaves and two combinators:

* :class:`Series`       -- a polynomial / truncated power series ``sum a_k z^k``
* :class:`PowerKernel`  -- ``c * (1 - conj(a) z) ** (-gamma)``
* :class:`LogKernel`    -- ``c * log(2 / (1 - conj(a) z)) ** m``
* :class:`Sum`, :class:`Product`

Every node evaluates in closed form on numpy arrays, has an exact symbolic
derivative, and can produce Taylor coefficients at the origin.  Operations
that need a plain power series (antiderivatives, truncated products) say so
and truncate explicitly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import PoleOnPath, SlowDecayWarning, TruncationOverflow

DEFAULT_DEGREE = 512
MAX_DEGREE = 1 << 16
TAIL_RADIUS = 0.9
TAIL_TOL = 1e-8

_LOG2 = math.log(2.0)


def _as_complex_array(z):
    arr = np.asarray(z, dtype=complex)
    return arr


def _finish(z_in, out):
    if np.ndim(z_in) == 0:
        return complex(out)
    return out


class AnalyticFn:
    """Base class.  Subclasses are frozen dataclasses."""

    def __call__(self, z):
        return evaluate(self, z)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return add(self, scale(_coerce(other), -1.0))

    def __rsub__(self, other):
        return add(_coerce(other), scale(self, -1.0))

    def __neg__(self):
        return scale(self, -1.0)

    def __mul__(self, other):
        if np.isscalar(other):
            return scale(self, other)
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        if np.isscalar(other):
            return scale(self, other)
        return mul(_coerce(other), self)

    # -- interface implemented by subclasses ------------------------------
    def _eval(self, z: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def derivative(self) -> "AnalyticFn":
        raise NotImplementedError

    def taylor(self, n: int) -> np.ndarray:
        """Taylor coefficients ``a_0 .. a_n`` at the origin."""
        raise NotImplementedError

    def bases(self) -> tuple[complex, ...]:
        """Kernel base points occurring in the tree."""
        return ()

    @property
    def is_zero(self) -> bool:
        return False

    def to_symbol(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Series(AnalyticFn):
    coeffs: np.ndarray
    tail: float = 0.0
    tail_radius: float = TAIL_RADIUS

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size == 0:
            c = np.zeros(1, dtype=complex)
        if not np.all(np.isfinite(c)):
            raise ValueError("series coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def _eval(self, z):
        if np.any(np.abs(z) > 1.0):
            raise ValueError("series evaluated outside the closed unit disk")
        if self.tail > 0 and np.any(np.abs(z) > self.tail_radius):
            warnings.warn(
                f"truncated series evaluated beyond r={self.tail_radius}; "
                "tail bound does not apply",
                SlowDecayWarning,
                stacklevel=3,
            )
        out = np.zeros(z.shape, dtype=complex)
        for c in self.coeffs[::-1]:
            out = out * z + c
        return out

    def derivative(self):
        if self.degree == 0:
            return Series([0.0])
        k = np.arange(1, self.degree + 1)
        return Series(self.coeffs[1:] * k)

    def taylor(self, n):
        out = np.zeros(n + 1, dtype=complex)
        m = min(n, self.degree)
        out[: m + 1] = self.coeffs[: m + 1]
        return out

    def to_symbol(self):
        return "poly(" + ",".join(_fmt(c) for c in self.coeffs) + ")"


@dataclass(frozen=True, eq=False)
class PowerKernel(AnalyticFn):
    """``c * (1 - conj(a) z) ** (-gamma)`` with ``|a| <= 1``."""

    a: complex
    gamma: float
    c: complex = 1.0

    def __post_init__(self):
        a = complex(self.a)
        if abs(a) > 1.0 + 1e-14:
            raise ValueError("kernel base must lie in the closed unit disk")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "c", complex(self.c))

    @property
    def is_zero(self):
        return self.c == 0

    def _eval(self, z):
        d = 1.0 - np.conj(self.a) * z
        if np.any(d == 0):
            raise PoleOnPath(f"1 - conj(a) z vanishes for a={self.a}")
        return self.c * np.power(d, -self.gamma)

    def derivative(self):
        if self.gamma == 0 or self.a == 0 or self.c == 0:
            return Series([0.0])
        return PowerKernel(self.a, self.gamma + 1.0, self.c * self.gamma * np.conj(self.a))

    def taylor(self, n):
        out = np.empty(n + 1, dtype=complex)
        ab = np.conj(self.a)
        cur = self.c
        for k in range(n + 1):
            out[k] = cur
            cur = cur * (self.gamma + k) / (k + 1) * ab
        return out

    def bases(self):
        return (self.a,) if self.gamma > 0 else ()

    def to_symbol(self):
        return f"pow(a={_fmt(self.a)},gamma={_fmt(self.gamma)},c={_fmt(self.c)})"


@dataclass(frozen=True, eq=False)
class LogKernel(AnalyticFn):
    """``c * log(2 / (1 - conj(a) z)) ** m`` with ``m >= 0`` an integer."""

    a: complex
    m: int
    c: complex = 1.0

    def __post_init__(self):
        a = complex(self.a)
        if abs(a) > 1.0 + 1e-14:
            raise ValueError("kernel base must lie in the closed unit disk")
        if int(self.m) != self.m or self.m < 0:
            raise ValueError("log power must be a non-negative integer")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "c", complex(self.c))

    @property
    def is_zero(self):
        return self.c == 0

    def _eval(self, z):
        d = 1.0 - np.conj(self.a) * z
        if np.any(d == 0):
            raise PoleOnPath(f"1 - conj(a) z vanishes for a={self.a}")
        return self.c * (_LOG2 - np.log(d)) ** self.m

    def derivative(self):
        if self.m == 0 or self.a == 0 or self.c == 0:
            return Series([0.0])
        ab = np.conj(self.a)
        if self.m == 1:
            return PowerKernel(self.a, 1.0, self.c * ab)
        return Product((LogKernel(self.a, self.m - 1, self.c * self.m * ab), PowerKernel(self.a, 1.0)))

    def taylor(self, n):
        ab = np.conj(self.a)
        base = np.zeros(n + 1, dtype=complex)
        base[0] = _LOG2
        if n >= 1:
            k = np.arange(1, n + 1)
            base[1:] = ab ** k / k
        out = np.zeros(n + 1, dtype=complex)
        out[0] = 1.0
        for _ in range(self.m):
            out = np.convolve(out, base)[: n + 1]
        return self.c * out

    def bases(self):
        return (self.a,) if self.m > 0 else ()

    def to_symbol(self):
        return f"log(a={_fmt(self.a)},m={self.m},c={_fmt(self.c)})"


@dataclass(frozen=True, eq=False)
class Sum(AnalyticFn):
    terms: tuple

    def _eval(self, z):
        out = np.zeros(z.shape, dtype=complex)
        for t in self.terms:
            out = out + t._eval(z)
        return out

    def derivative(self):
        out: AnalyticFn = Series([0.0])
        for t in self.terms:
            out = add(out, t.derivative())
        return out

    def taylor(self, n):
        return sum((t.taylor(n) for t in self.terms), np.zeros(n + 1, dtype=complex))

    def bases(self):
        return tuple(b for t in self.terms for b in t.bases())

    def to_symbol(self):
        return "+".join(t.to_symbol() for t in self.terms)


@dataclass(frozen=True, eq=False)
class Product(AnalyticFn):
    factors: tuple

    def _eval(self, z):
        out = np.ones(z.shape, dtype=complex)
        for f in self.factors:
            out = out * f._eval(z)
        return out

    def derivative(self):
        out: AnalyticFn = Series([0.0])
        for i, f in enumerate(self.factors):
            df = f.derivative()
            if df.is_zero:
                continue
            rest = [g for j, g in enumerate(self.factors) if j != i]
            term = df
            for g in rest:
                term = mul(term, g)
            out = add(out, term)
        return out

    def taylor(self, n):
        out = np.zeros(n + 1, dtype=complex)
        out[0] = 1.0
        for f in self.factors:
            out = np.convolve(out, f.taylor(n))[: n + 1]
        return out

    def bases(self):
        return tuple(b for f in self.factors for b in f.bases())

    def to_symbol(self):
        return "*".join(_paren(f) for f in self.factors)


def _paren(f):
    s = f.to_symbol()
    return f"({s})" if isinstance(f, Sum) else s


def _fmt(x) -> str:
    x = complex(x)
    if x.imag == 0:
        return repr(float(x.real))
    return repr(x).strip("()")


# -- constructors -------------------------------------------------------------

def series(coeffs: Iterable[complex]) -> Series:
    return Series(np.asarray(list(coeffs), dtype=complex))


def constant(c: complex) -> Series:
    return Series([c])


def monomial(n: int, c: complex = 1.0) -> Series:
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = c
    return Series(coeffs)


def _coerce(x) -> AnalyticFn:
    if isinstance(x, AnalyticFn):
        return x
    if np.isscalar(x):
        return constant(x)
    raise TypeError(f"cannot combine AnalyticFn with {type(x).__name__}")


def scale(f: AnalyticFn, c: complex) -> AnalyticFn:
    c = complex(c)
    if c == 1:
        return f
    if c == 0 or f.is_zero:
        return Series([0.0])
    if isinstance(f, Series):
        return Series(f.coeffs * c, tail=f.tail * abs(c), tail_radius=f.tail_radius)
    if isinstance(f, PowerKernel):
        return PowerKernel(f.a, f.gamma, f.c * c)
    if isinstance(f, LogKernel):
        return LogKernel(f.a, f.m, f.c * c)
    if isinstance(f, Sum):
        return Sum(tuple(scale(t, c) for t in f.terms))
    return Product((scale(f.factors[0], c),) + f.factors[1:])


def add(f: AnalyticFn, g: AnalyticFn) -> AnalyticFn:
    terms = []
    for h in (f, g):
        terms.extend(h.terms if isinstance(h, Sum) else (h,))
    poly = [t for t in terms if isinstance(t, Series)]
    rest = [t for t in terms if not isinstance(t, Series) and not t.is_zero]
    if poly:
        deg = max(t.degree for t in poly)
        coeffs = sum((t.taylor(deg) for t in poly), np.zeros(deg + 1, dtype=complex))
        combined = Series(coeffs, tail=sum(t.tail for t in poly))
        if not combined.is_zero or not rest:
            rest = [combined] + rest
    if len(rest) == 1:
        return rest[0]
    return Sum(tuple(rest))


def mul(f: AnalyticFn, g: AnalyticFn) -> AnalyticFn:
    if f.is_zero or g.is_zero:
        return Series([0.0])
    if isinstance(f, Series) and f.degree == 0:
        return scale(g, f.coeffs[0])
    if isinstance(g, Series) and g.degree == 0:
        return scale(f, g.coeffs[0])
    if isinstance(f, Series) and isinstance(g, Series):
        return Series(np.convolve(f.coeffs, g.coeffs))
    if isinstance(f, PowerKernel) and isinstance(g, PowerKernel) and f.a == g.a:
        return PowerKernel(f.a, f.gamma + g.gamma, f.c * g.c)
    factors = []
    for h in (f, g):
        factors.extend(h.factors if isinstance(h, Product) else (h,))
    return Product(tuple(factors))


def power_kernel(a: complex, gamma: float, c: complex = 1.0) -> PowerKernel:
    return PowerKernel(a, gamma, c)


def log_kernel(a: complex, m: int, c: complex = 1.0) -> LogKernel:
    return LogKernel(a, m, c)


# -- operations -----------------------------------------------------------------

def evaluate(f: AnalyticFn, z):
    """Evaluate ``f`` at a point or an array of points."""
    arr = _as_complex_array(z)
    return _finish(z, f._eval(arr))


def differentiate(f: AnalyticFn) -> AnalyticFn:
    return f.derivative()


def _check_degree(n: int):
    if n < 0:
        raise ValueError("truncation degree must be non-negative")
    if n > MAX_DEGREE:
        raise TruncationOverflow(f"degree {n} exceeds maximum {MAX_DEGREE}")


def tail_bound(f: AnalyticFn, n: int, radius: float = TAIL_RADIUS) -> float:
    """Estimate ``sup_{|z|<=radius} |f - T_n f|`` for the degree-``n`` Taylor polynomial.

    Sums coefficient moduli up to ``4n`` and closes the remainder with the
    geometric ratio of the last two terms.
    """
    if isinstance(f, Series) and f.degree <= n:
        return float(f.tail)
    m = max(4 * n, n + 256)
    c = np.abs(f.taylor(m))
    k = np.arange(m + 1)
    terms = c[n + 1:] * radius ** k[n + 1:]
    total = float(terms.sum())
    if terms.size >= 2 and terms[-2] > 0:
        rho = terms[-1] / terms[-2]
        total += float(terms[-1] * rho / (1 - rho)) if rho < 1 else math.inf
    return total


def truncate(f: AnalyticFn, n: int, radius: float = TAIL_RADIUS,
             tol: float = TAIL_TOL) -> tuple[Series, float]:
    """Degree-``n`` Taylor polynomial of ``f`` and an estimate of the tail at ``radius``."""
    _check_degree(n)
    if isinstance(f, Series) and f.degree <= n:
        return f, float(f.tail)
    bound = tail_bound(f, n, radius)
    if bound > tol:
        warnings.warn(
            f"Taylor tail {bound:.3g} at r={radius} exceeds {tol:g} for degree {n}",
            SlowDecayWarning,
            stacklevel=2,
        )
    return Series(f.taylor(n), tail=bound, tail_radius=radius), bound


def antidifferentiate(f: AnalyticFn, n: int | None = None) -> Series:
    """Primitive vanishing at the origin.

    Closed forms are truncated to degree ``n`` (default ``DEFAULT_DEGREE``)
    first, so the result has degree ``n + 1``.
    """
    if n is not None:
        _check_degree(n + 1)
    if isinstance(f, Series) and (n is None or f.degree <= n):
        s = f
    else:
        deg = DEFAULT_DEGREE if n is None else n
        _check_degree(deg + 1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SlowDecayWarning)
            s, _ = truncate(f, deg)
    coeffs = np.zeros(s.degree + 2, dtype=complex)
    coeffs[1:] = s.coeffs / np.arange(1, s.degree + 2)
    return Series(coeffs, tail=s.tail, tail_radius=s.tail_radius)


def multiply(f: AnalyticFn, g: AnalyticFn, n: int) -> Series:
    """Cauchy product of the Taylor expansions, truncated to degree ``n``."""
    _check_degree(n)
    c = np.convolve(f.taylor(n), g.taylor(n))[: n + 1]
    return Series(c)


def singular_angles(f: AnalyticFn, min_modulus: float = 0.5) -> tuple[float, ...]:
    """Arguments of kernel bases close enough to the circle to shape integrands."""
    angles = {round(float(np.angle(b)) % (2 * np.pi), 12)
              for b in f.bases() if abs(b) >= min_modulus}
    return tuple(sorted(angles))


def coefficients(f: AnalyticFn, n: int) -> np.ndarray:
    return f.taylor(n)


def sum_of(fns: Sequence[AnalyticFn]) -> AnalyticFn:
    out: AnalyticFn = Series([0.0])
    for f in fns:
        out = add(out, f)
    return out
