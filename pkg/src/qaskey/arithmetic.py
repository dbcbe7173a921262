"""Interchangeable scalar backends and integer-power utilities.

Two scalar types realize the same abstract complex field:

* exact backend -- :class:`GaussianRational`, a complex number with
  ``fractions.Fraction`` real and imaginary parts.  Every ring identity
  holds bit-exactly, so it serves as the ground-truth oracle: a verified
  identity either cancels to zero or it does not.
* float backend -- the builtin ``complex``.  Fast, but a failed check may
  be cancellation rather than a genuine discrepancy, so comparisons are
  scale-aware (see :func:`approx_eq`).

All higher modules use ordinary Python operators only, which keeps them
generic over the two backends.  Values are immutable after construction
and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Library-wide numeric policy knobs (all overridable per call site).
REL_TOL = 1e-10
ABS_TOL = 1e-12
POLE_EPS = 1e-9
EPSILON_UNIT = 1e-8
COND_CAP = 1e8


class QError(Exception):
    """Base class for every error raised by this package."""


class GuardViolation(QError):
    """An admissibility guard failed (pole, zero parameter, bad modulus).

    Sweeps treat these as SKIPPED, never as identity failure.
    """


class ZeroToNegativePower(QError):
    """Raised by :func:`pow_int` for 0**k with k < 0."""


class ZeroQ(GuardViolation):
    """The base q is zero."""


class UnitModulusQ(GuardViolation):
    """The base q sits on (or, in floats, too close to) the unit circle."""


_EXACT_PARTS = (int, Fraction)


class GaussianRational:
    """Exact complex scalar ``re + im*i`` with rational components.

    Supports +, -, *, /, ** (integer exponents) and mixes freely with
    ``int`` and ``Fraction``.  Mixing with ``float``/``complex`` is a
    deliberate TypeError: the exact backend must never silently absorb
    rounding error.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @staticmethod
    def _coerce(x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, _EXACT_PARTS):
            return GaussianRational(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(o.re - self.re, o.im - self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero scalar")
        return GaussianRational((self.re * o.re + self.im * o.im) / d,
                                (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o.__truediv__(self)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return pow_int(self, k)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        """Exact squared modulus."""
        return self.re * self.re + self.im * self.im

    def __abs__(self) -> float:
        a2 = self.abs2()
        try:
            return math.sqrt(a2.numerator / a2.denominator)
        except OverflowError:
            return math.inf

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        return format_scalar(self)


def is_exact(x) -> bool:
    """True for scalars of the exact backend (including plain rationals)."""
    return isinstance(x, (GaussianRational, *_EXACT_PARTS))


def as_scalar(x, exact: bool):
    """Coerce ``x`` into the canonical scalar type of a backend.

    Exact backend refuses floats: there is no faithful representation.
    """
    if exact:
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, _EXACT_PARTS):
            return GaussianRational(x)
        raise TypeError(f"cannot represent {type(x).__name__} exactly; "
                        "pass int, Fraction or GaussianRational")
    if isinstance(x, GaussianRational):
        return complex(x)
    return complex(x)


def one_like(x):
    return GaussianRational(1) if is_exact(x) else complex(1.0)


def zero_like(x):
    return GaussianRational(0) if is_exact(x) else complex(0.0)


def is_zero(x) -> bool:
    """Exact zero test (floats: literal 0; tolerances live elsewhere)."""
    if isinstance(x, GaussianRational):
        return not bool(x)
    return x == 0


def abs_float(x) -> float:
    """|x| as a machine float, robust against huge exact values."""
    if isinstance(x, GaussianRational):
        return abs(x)
    return abs(x)


def pow_int(x, k: int):
    """x**k for signed integer k by repeated squaring.

    Bit-exact in the exact backend.  Raises ZeroToNegativePower for
    0**k with k < 0.
    """
    if k < 0:
        if is_zero(x):
            raise ZeroToNegativePower("0 cannot be raised to a negative power")
        x = one_like(x) / x
        k = -k
    result = one_like(x)
    base = x
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


def binom2(n: int) -> int:
    """n*(n-1)/2, the exponent weight attached to term index n."""
    if n < 0:
        raise ValueError("binom2 requires a nonnegative integer")
    return n * (n - 1) // 2


def approx_eq(x, y, scale: float = 1.0, *, rel_tol: float = REL_TOL,
              abs_tol: float = ABS_TOL) -> bool:
    """Backend-aware equality.

    Exact backend: literal equality.  Float backend: ``|x-y|`` within
    ``rel_tol * max(scale, |x|, |y|) + abs_tol``, where ``scale`` is the
    caller's cancellation scale (typically the summed term magnitudes of
    the series that produced the values).
    """
    if is_exact(x) and is_exact(y):
        gx = GaussianRational._coerce(x)
        gy = GaussianRational._coerce(y)
        return gx == gy
    x = complex(x)
    y = complex(y)
    bound = rel_tol * max(scale, abs(x), abs(y)) + abs_tol
    return abs(x - y) <= bound


@dataclass(frozen=True)
class QBase:
    """The deformation base q with its validity guards: q != 0, |q| != 1.

    In the float backend the unit-circle guard uses ``epsilon_unit``:
    ``||q| - 1| > epsilon_unit`` must hold.
    """

    q: object
    epsilon_unit: float = EPSILON_UNIT

    def __post_init__(self):
        q = self.q
        if isinstance(q, _EXACT_PARTS):
            q = GaussianRational(q)
        elif not isinstance(q, GaussianRational):
            q = complex(q)
        object.__setattr__(self, "q", q)
        if is_zero(q):
            raise ZeroQ("q must be nonzero")
        if isinstance(q, GaussianRational):
            if q.abs2() == 1:
                raise UnitModulusQ("|q| = 1 is not allowed")
        else:
            if abs(abs(q) - 1.0) <= self.epsilon_unit:
                raise UnitModulusQ(
                    f"| |q| - 1 | <= {self.epsilon_unit:g}: q too close to the unit circle")

    @property
    def exact(self) -> bool:
        return isinstance(self.q, GaussianRational)

    def inverse(self) -> "QBase":
        return QBase(one_like(self.q) / self.q, self.epsilon_unit)

    def squared(self) -> "QBase":
        return QBase(self.q * self.q, self.epsilon_unit)

    def pow(self, k: int):
        return pow_int(self.q, k)

    def one(self):
        return one_like(self.q)


@dataclass(frozen=True)
class Backend:
    """A named scalar backend; mostly a convenience for the CLI and sampler."""

    name: str
    exact: bool

    def scalar(self, re, im=0):
        if self.exact:
            return GaussianRational(re, im)
        return complex(float(re), float(im))

    def convert(self, x):
        return as_scalar(x, self.exact)

    def parse(self, text: str):
        return parse_scalar(text, exact=self.exact)

    def format(self, x) -> str:
        return format_scalar(x)


RATIONAL = Backend("rational", True)
FLOAT = Backend("float", False)
_BACKENDS = {"rational": RATIONAL, "float": FLOAT}


def get_backend(name: str) -> Backend:
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown backend {name!r}; choose rational or float") from None


def backend_of(x) -> Backend:
    return RATIONAL if is_exact(x) else FLOAT


def _format_part(v) -> str:
    if isinstance(v, Fraction):
        return str(v)
    return f"{v:.17g}"


def format_scalar(x) -> str:
    """Lossless wire format: rationals as ``p/q+r/s i``, floats with 17
    significant digits.  Pure reals omit the imaginary term."""
    if isinstance(x, GaussianRational):
        re, im = x.re, x.im
    else:
        c = complex(x)
        re, im = c.real, c.imag
    if im == 0:
        return _format_part(re)
    sign = "+" if im >= 0 else "-"
    return f"{_format_part(re)}{sign}{_format_part(abs(im))} i"


def _parse_part(token: str, exact: bool):
    token = token.strip()
    if not token or token in "+-":
        token += "1"
    if exact:
        return Fraction(token)
    return float(Fraction(token)) if "/" in token else float(token)


def parse_scalar(text: str, exact: bool):
    """Parse the wire format back into a scalar.

    Accepted forms: ``3/4``, ``-3/4+1/2 i``, ``0.5``, ``1.5e-3-2 i``,
    ``2/7 i``.  Whitespace around the components is ignored.
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    re_tok, im_tok = s, None
    if s.endswith(("i", "I", "j", "J")):
        body = s[:-1]
        # split at the last sign that is not a leading sign or an exponent sign
        split = -1
        for idx in range(len(body) - 1, 0, -1):
            if body[idx] in "+-" and body[idx - 1] not in "eE/":
                split = idx
                break
        if split > 0:
            re_tok, im_tok = body[:split], body[split:]
        else:
            re_tok, im_tok = "0", body
    try:
        re = _parse_part(re_tok, exact)
        im = _parse_part(im_tok, exact) if im_tok is not None else 0
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse scalar {text!r}: {exc}") from None
    if exact:
        return GaussianRational(re, im)
    return complex(re, im)
