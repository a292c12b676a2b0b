"""Exact truncated Laurent series in the formal variable h, with q = e^h.

Coefficients are arbitrary-precision rationals (``fractions.Fraction``);
no floating point exists anywhere in this package.  Every series carries
its own truncation cap, so arithmetic between series of different
precision degrades explicitly instead of silently: the result's cap is
the largest order at which the result is still fully determined by the
inputs.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

Rational = Fraction

#: Deepest pole any series may carry.  Intermediate data in the
#: perturbative-invariant computation is polar of depth 2 * (number of
#: positive roots) before prefactor multiplication; 64 leaves ample room
#: at desk scale.  Reassign the module attribute to reconfigure.
POLE_CAP = 64


class PoleError(ArithmeticError):
    """A series developed a pole deeper than POLE_CAP."""


class SeriesError(ValueError):
    """Malformed series operation (bad cap, polar exponential, ...)."""


def _as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class HSeries:
    """A Laurent series in h, known exactly on exponents [min_exp, cap].

    ``coeffs`` holds the nonzero coefficients; exponents below ``min_exp``
    are known to be zero, exponents above ``cap`` are unknown (never
    silently zero).
    """

    __slots__ = ("coeffs", "cap", "min_exp")

    def __init__(self, coeffs: Mapping[int, Fraction | int | str], cap: int,
                 min_exp: int | None = None):
        clean: dict[int, Fraction] = {}
        for k, v in coeffs.items():
            v = _as_rational(v)
            if v != 0:
                clean[int(k)] = v
        if any(k > cap for k in clean):
            raise SeriesError("coefficient beyond declared cap")
        if min_exp is None:
            min_exp = min(min(clean, default=0), 0)
        if any(k < min_exp for k in clean):
            raise SeriesError("coefficient below declared min_exp")
        if clean and min(clean) < -POLE_CAP:
            raise PoleError(f"pole deeper than {POLE_CAP}")
        self.coeffs = clean
        self.cap = int(cap)
        self.min_exp = max(int(min_exp), -POLE_CAP)
        if self.min_exp > self.cap:
            self.min_exp = self.cap

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, cap: int) -> "HSeries":
        return cls({}, cap, min_exp=-POLE_CAP)

    @classmethod
    def one(cls, cap: int) -> "HSeries":
        return cls({0: Fraction(1)}, cap, min_exp=-POLE_CAP)

    @classmethod
    def const(cls, c, cap: int) -> "HSeries":
        return cls({0: _as_rational(c)}, cap, min_exp=-POLE_CAP)

    @classmethod
    def monomial(cls, c, exp: int, cap: int) -> "HSeries":
        return cls({exp: _as_rational(c)}, cap, min_exp=min(exp, 0))

    # -- basic queries ------------------------------------------------

    def coeff(self, k: int) -> Fraction:
        """Coefficient of h^k.  Raises beyond the cap: unknown, not zero."""
        if k > self.cap:
            raise SeriesError(f"h^{k} is beyond the cap {self.cap}")
        return self.coeffs.get(k, Fraction(0))

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int | None:
        """Lowest exponent with nonzero coefficient, or None for zero."""
        return min(self.coeffs) if self.coeffs else None

    def support(self) -> list[int]:
        return sorted(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: "HSeries") -> "HSeries":
        cap = min(self.cap, other.cap)
        me = min(self.min_exp, other.min_exp)
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + v
        out = {k: v for k, v in out.items() if v != 0 and k <= cap}
        return HSeries(out, cap, min_exp=me)

    def __neg__(self) -> "HSeries":
        return HSeries({k: -v for k, v in self.coeffs.items()}, self.cap,
                       min_exp=self.min_exp)

    def __sub__(self, other: "HSeries") -> "HSeries":
        return self + (-other)

    def __mul__(self, other: "HSeries") -> "HSeries":
        # The product is determined at order k only while unknown tail
        # coefficients of one factor cannot meet the support of the other.
        va = self.valuation()
        vb = other.valuation()
        va = self.cap + 1 if va is None else va
        vb = other.cap + 1 if vb is None else vb
        cap = min(self.cap + vb, other.cap + va)
        me = self.min_exp + other.min_exp
        out: dict[int, Fraction] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if k > cap:
                    continue
                out[k] = out.get(k, Fraction(0)) + a * b
        out = {k: v for k, v in out.items() if v != 0}
        return HSeries(out, cap, min_exp=me)

    def scale(self, c) -> "HSeries":
        c = _as_rational(c)
        if c == 0:
            return HSeries.zero(self.cap)
        return HSeries({k: c * v for k, v in self.coeffs.items()}, self.cap,
                       min_exp=self.min_exp)

    def shift(self, n: int) -> "HSeries":
        """Exact multiplication by h^n (n may be negative)."""
        return HSeries({k + n: v for k, v in self.coeffs.items()},
                       self.cap + n, min_exp=self.min_exp + n)

    def truncate(self, cap: int) -> "HSeries":
        if cap > self.cap:
            raise SeriesError("cannot raise a cap by truncation")
        return HSeries({k: v for k, v in self.coeffs.items() if k <= cap},
                       cap, min_exp=self.min_exp)

    def pow(self, n: int) -> "HSeries":
        if n < 0:
            return self.inverse().pow(-n)
        out = HSeries.one(self.cap)
        for _ in range(n):
            out = out * self
        return out

    def exp(self) -> "HSeries":
        """exp of a series with no constant or polar part."""
        v = self.valuation()
        if v is None:
            return HSeries.one(self.cap)
        if v < 1:
            raise SeriesError("exp requires valuation >= 1")
        out = HSeries.one(self.cap)
        term = HSeries.one(self.cap)
        k = 0
        while True:
            k += 1
            if k * v > self.cap:
                break
            term = (term * self).scale(Fraction(1, k))
            if term.is_zero():
                break
            out = out + term
        return out

    def inverse(self) -> "HSeries":
        """Multiplicative inverse; needs a nonzero leading coefficient."""
        v = self.valuation()
        if v is None:
            raise ZeroDivisionError("inverse of the zero series")
        lead = self.coeffs[v]
        # u = self / (lead * h^v) - 1 has valuation >= 1
        u = HSeries({k - v: c / lead for k, c in self.coeffs.items()},
                    self.cap - v, min_exp=0) - HSeries.one(self.cap - v)
        geo = HSeries.one(self.cap - v)
        term = HSeries.one(self.cap - v)
        uv = u.valuation()
        if uv is not None:
            k = 0
            while (k + 1) * uv <= self.cap - v:
                k += 1
                term = term * (-u)
                if term.is_zero():
                    break
                geo = geo + term
        out = geo.scale(1 / lead).shift(-v)
        # knowledge range of the inverse: [-v, cap - 2v]
        return HSeries(out.coeffs, self.cap - 2 * v, min_exp=-v)

    # -- comparison / io ----------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, HSeries):
            return NotImplemented
        if self.cap != other.cap:
            return False
        lo = max(self.min_exp, other.min_exp)
        for k in set(self.coeffs) | set(other.coeffs):
            if k < lo:
                continue
            if self.coeffs.get(k, 0) != other.coeffs.get(k, 0):
                return False
        return True

    def __hash__(self):
        return hash((self.cap, tuple(sorted(self.coeffs.items()))))

    def agrees_with(self, other: "HSeries", upto: int) -> bool:
        """Exact coefficient equality on every exponent <= upto."""
        if upto > self.cap or upto > other.cap:
            raise SeriesError("comparison order exceeds a cap")
        for k in set(self.coeffs) | set(other.coeffs):
            if k <= upto and self.coeffs.get(k, 0) != other.coeffs.get(k, 0):
                return False
        return True

    def __repr__(self) -> str:
        if not self.coeffs:
            return f"HSeries(0; cap={self.cap})"
        parts = [f"({v})h^{k}" if k else f"({v})"
                 for k, v in sorted(self.coeffs.items())]
        return f"HSeries({' + '.join(parts)}; cap={self.cap})"

    def to_json(self) -> dict:
        tight = min(self.coeffs) if self.coeffs else 0
        return {
            "min_exp": max(self.min_exp, min(tight, 0)),
            "coeffs": {str(k): f"{v.numerator}/{v.denominator}"
                       for k, v in sorted(self.coeffs.items())},
            "cap": self.cap,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HSeries":
        return cls({int(k): Fraction(v) for k, v in obj["coeffs"].items()},
                   int(obj["cap"]), min_exp=int(obj["min_exp"]))


def q_power(c, cap: int) -> HSeries:
    """q^c = exp(c*h) as a truncated series, for exact rational c."""
    return HSeries.monomial(c, 1, cap).exp()


def sinh_ratio(c, cap: int) -> HSeries:
    """sinh(c*h/2) / (c*h/2); equals 1 for c = 0 and is even in c."""
    c = _as_rational(c)
    if c == 0:
        return HSeries.one(cap)
    out: dict[int, Fraction] = {}
    k = 0
    while 2 * k <= cap:
        out[2 * k] = c ** (2 * k) / (4 ** k * math.factorial(2 * k + 1))
        k += 1
    return HSeries(out, cap, min_exp=0)


def _sinh_ratio_x(cap: int) -> HSeries:
    # sinh(x/2)/(x/2) with the series variable read as x instead of h.
    return sinh_ratio(1, cap)


@lru_cache(maxsize=None)
def _half_log_sinh_ratio(cap: int) -> HSeries:
    s = _sinh_ratio_x(cap)
    w = s - HSeries.one(cap)
    out = HSeries.zero(cap)
    term = HSeries.one(cap)
    k = 0
    while (k + 1) * 2 <= cap:  # w has valuation 2
        k += 1
        term = term * w
        out = out + term.scale(Fraction((-1) ** (k + 1), k))
    return out.scale(Fraction(1, 2))


def modified_bernoulli(m: int) -> Fraction:
    """Coefficient of x^(2m) in (1/2) log(sinh(x/2)/(x/2)), m >= 1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return _half_log_sinh_ratio(2 * m).coeff(2 * m)
