"""Terminating basic hypergeometric series and their transformations.

Two evaluators are kept deliberately independent:

* :func:`eval_phi` / :func:`eval_w` walk the sum with an O(n) term-ratio
  recurrence (the production path);
* :func:`eval_phi_direct` / :func:`eval_w_direct` rebuild every term from
  fresh Pochhammer products (the anti-bug oracle used by the tests).

A very-well-poised series is evaluated radical-free: the classical
``+-q sqrt(b)`` over ``+-sqrt(b)`` pair contributes the exact per-term
factor ``(1 - b q^{2k}) / (1 - b)``, so the exact backend never sees a
square root.  Every evaluation returns a :class:`TermTrace` whose
``abs_scale`` (the summed term magnitudes) is the cancellation scale that
tolerance-aware comparisons should use.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .arithmetic import (
    GuardViolation,
    POLE_EPS,
    QBase,
    QError,
    abs_float,
    as_scalar,
    binom2,
    is_zero,
    one_like,
    pow_int,
)
from .qpochhammer import omega_contains, poch, poch_list


class DenominatorPole(GuardViolation):
    """A denominator parameter hit Omega_q^n (or a prefactor vanished)."""


class BEqualsOne(GuardViolation):
    """The very-well-poised special parameter equals 1: the series is singular."""


class ZeroParameter(GuardViolation):
    """A transformation requires every involved parameter to be nonzero."""


class ShapeMismatch(QError):
    """The spec does not have the r+1 phi r (or 4 phi 3) shape required here."""


class NotBalanced(QError):
    """The balance condition of the requested transformation fails."""


@dataclass(frozen=True)
class TermTrace:
    """Per-term record of a series evaluation.

    ``abs_scale`` is the sum of the term magnitudes; identity checks scale
    their tolerance by it to distinguish failure from cancellation.
    """

    terms: tuple
    partial_sums: tuple
    abs_scale: float

    def scaled(self, factor) -> "TermTrace":
        return TermTrace(
            tuple(factor * t for t in self.terms),
            tuple(factor * s for s in self.partial_sums),
            abs_float(factor) * self.abs_scale,
        )


def _coerce_all(q: QBase, values):
    return tuple(as_scalar(v, q.exact) for v in values)


@dataclass(frozen=True)
class SeriesSpec:
    """A terminating series: numerator list (the q^{-n} slot is implicit),
    denominator list, argument z, base q and termination degree n.

    With r = 1 + len(num) and s = len(den), each term k carries the factor
    ``((-1)^k q^{binom(k,2)})^{1+s-r}``.  Denominator entries must avoid
    Omega_q^n; violations raise DenominatorPole at construction.
    """

    num: tuple
    den: tuple
    z: object
    q: QBase
    n: int
    pole_eps: float = field(default=POLE_EPS, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("termination degree n must be >= 0")
        object.__setattr__(self, "num", _coerce_all(self.q, self.num))
        object.__setattr__(self, "den", _coerce_all(self.q, self.den))
        object.__setattr__(self, "z", as_scalar(self.z, self.q.exact))
        for b in self.den:
            if omega_contains(b, self.q, self.n, pole_eps=self.pole_eps):
                raise DenominatorPole(
                    "denominator parameter lies in Omega_q^n")

    @property
    def r(self) -> int:
        return 1 + len(self.num)

    @property
    def s(self) -> int:
        return len(self.den)

    @property
    def sign_exponent(self) -> int:
        return 1 + self.s - self.r

    def with_base(self, q: QBase) -> "SeriesSpec":
        return SeriesSpec(self.num, self.den, self.z, q, self.n, self.pole_eps)


@dataclass(frozen=True)
class VwpSpec:
    """A terminating very-well-poised series: special parameter b, the
    lower parameter list beyond the q^{-n} slot, argument z, base q, n.

    Guards: b nonzero and not 1; q^{n+1} b and q b / a_k outside
    Omega_q^n and nonzero.
    """

    b: object
    lower: tuple
    z: object
    q: QBase
    n: int
    pole_eps: float = field(default=POLE_EPS, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("termination degree n must be >= 0")
        object.__setattr__(self, "b", as_scalar(self.b, self.q.exact))
        object.__setattr__(self, "lower", _coerce_all(self.q, self.lower))
        object.__setattr__(self, "z", as_scalar(self.z, self.q.exact))
        b, q, n = self.b, self.q, self.n
        one = q.one()
        if is_zero(b):
            raise ZeroParameter("special parameter b must be nonzero")
        d = b - one
        if is_zero(d) or (not q.exact and abs_float(d) <= self.pole_eps):
            raise BEqualsOne("special parameter b = 1 makes the series singular")
        for a in self.lower:
            if is_zero(a):
                raise ZeroParameter("lower parameters must be nonzero")
        if omega_contains(q.pow(n + 1) * b, q, n, pole_eps=self.pole_eps):
            raise DenominatorPole("q^{n+1} b lies in Omega_q^n")
        for a in self.lower:
            if omega_contains(q.q * b / a, q, n, pole_eps=self.pole_eps):
                raise DenominatorPole("q b / a_k lies in Omega_q^n")

    @property
    def r(self) -> int:
        # the series is an (r+1) phi r with this r
        return len(self.lower) + 3


def _trace(terms):
    partial = []
    total = None
    for t in terms:
        total = t if total is None else total + t
        partial.append(total)
    scale = sum(abs_float(t) for t in terms)
    return total, TermTrace(tuple(terms), tuple(partial), scale)


def eval_phi(spec: SeriesSpec):
    """Evaluate a terminating series by term-ratio recurrence.

    Returns (value, TermTrace).
    """
    q = spec.q.q
    one = one_like(q)
    n = spec.n
    qmn = pow_int(q, -n)
    e = spec.sign_exponent
    term = one
    terms = [term]
    qk = one
    for _ in range(n):
        rnum = one - qmn * qk
        for a in spec.num:
            rnum = rnum * (one - a * qk)
        rden = one - q * qk
        for b in spec.den:
            rden = rden * (one - b * qk)
        if is_zero(rden):
            raise DenominatorPole("pole encountered inside the summation")
        factor = rnum / rden * spec.z
        if e:
            factor = factor * pow_int(-qk, e)
        term = term * factor
        terms.append(term)
        qk = qk * q
    return _trace(terms)


def eval_phi_direct(spec: SeriesSpec):
    """Oracle evaluator: every term from fresh Pochhammer products."""
    q = spec.q.q
    n = spec.n
    qmn = pow_int(q, -n)
    e = spec.sign_exponent
    terms = []
    for k in range(n + 1):
        den = poch(q, q, k) * poch_list(spec.den, q, k)
        if is_zero(den):
            raise DenominatorPole("pole encountered inside the summation")
        t = poch(qmn, q, k) * poch_list(spec.num, q, k) / den
        if e:
            t = t * pow_int(-one_like(q), k * e) * pow_int(q, binom2(k) * e)
        t = t * pow_int(spec.z, k)
        terms.append(t)
    return _trace(terms)


def eval_w(spec: VwpSpec):
    """Evaluate a terminating very-well-poised series (radical-free).

    The +-pair contributes (1 - b q^{2k})/(1 - b) per term; the remaining
    factors advance by a term-ratio recurrence.  Returns (value, TermTrace).
    """
    q = spec.q.q
    one = one_like(q)
    n = spec.n
    b = spec.b
    qmn = pow_int(q, -n)
    qn1b = pow_int(q, n + 1) * b
    ratios_den = tuple(q * b / a for a in spec.lower)
    inv_1mb = one / (one - b)
    base = one
    q2k = one
    qk = one
    terms = [one]
    for _ in range(n):
        rnum = (one - b * qk) * (one - qmn * qk)
        for a in spec.lower:
            rnum = rnum * (one - a * qk)
        rden = (one - q * qk) * (one - qn1b * qk)
        for c in ratios_den:
            rden = rden * (one - c * qk)
        if is_zero(rden):
            raise DenominatorPole("pole encountered inside the summation")
        base = base * rnum / rden * spec.z
        qk = qk * q
        q2k = q2k * q * q
        terms.append(base * (one - b * q2k) * inv_1mb)
    return _trace(terms)


def eval_w_direct(spec: VwpSpec):
    """Oracle evaluator for the very-well-poised series."""
    q = spec.q.q
    one = one_like(q)
    n = spec.n
    b = spec.b
    qmn = pow_int(q, -n)
    terms = []
    for k in range(n + 1):
        den = poch(q, q, k) * poch(pow_int(q, n + 1) * b, q, k)
        den = den * poch_list([q * b / a for a in spec.lower], q, k)
        if is_zero(den):
            raise DenominatorPole("pole encountered inside the summation")
        t = poch(b, q, k) * poch(qmn, q, k) * poch_list(spec.lower, q, k) / den
        t = t * (one - b * pow_int(q, 2 * k)) / (one - b)
        t = t * pow_int(spec.z, k)
        terms.append(t)
    return _trace(terms)


def vwp_as_phi(spec: VwpSpec, sqrt_b) -> SeriesSpec:
    """The explicit (r+1) phi r expansion of a very-well-poised series.

    Needs an explicit square root of b, so it exists in the exact backend
    only when b is a perfect square; used for cross-checks.
    """
    q = spec.q.q
    sb = as_scalar(sqrt_b, spec.q.exact)
    if not is_zero(sb * sb - spec.b):
        raise ValueError("sqrt_b is not a square root of the special parameter")
    num = [spec.b, q * sb, -(q * sb)] + list(spec.lower)
    den = [sb, -sb, pow_int(q, spec.n + 1) * spec.b] + [q * spec.b / a for a in spec.lower]
    return SeriesSpec(num, den, spec.z, spec.q, spec.n, spec.pole_eps)


def _require_nonzero(values, what: str):
    for v in values:
        if is_zero(v):
            raise ZeroParameter(f"{what} must be nonzero")


def _product(values, one):
    out = one
    for v in values:
        out = out * v
    return out


def invert_series(spec: SeriesSpec):
    """Reverse the order of summation of an (r+1) phi r series.

    Returns (prefactor, reversed_spec) with
    prefactor = (-z/q)^n q^{-binom(n,2)} (num;q)_n / (den;q)_n
    and reversed parameters q^{1-n}/den over q^{1-n}/num at argument
    (q^{n+1}/z) * prod(den)/prod(num).  Contract:
    eval_phi(spec) == prefactor * eval_phi(reversed_spec).

    For a balanced spec with z = q the reversed argument is q^2/z.
    """
    if len(spec.num) != len(spec.den):
        raise ShapeMismatch("summation reversal needs the (r+1) phi r shape")
    _require_nonzero(spec.num + spec.den + (spec.z,), "series parameters and argument")
    q = spec.q.q
    one = one_like(q)
    n = spec.n
    pref = pow_int(-spec.z / q, n) * pow_int(q, -binom2(n))
    pref = pref * poch_list(spec.num, q, n) / poch_list(spec.den, q, n)
    q1n = pow_int(q, 1 - n)
    new_num = [q1n / b for b in spec.den]
    new_den = [q1n / a for a in spec.num]
    z2 = pow_int(q, n + 1) / spec.z * _product(spec.den, one) / _product(spec.num, one)
    return pref, SeriesSpec(new_num, new_den, z2, spec.q, n, spec.pole_eps)


def invert_w(spec: VwpSpec):
    """Summation reversal for a terminating very-well-poised series.

    Works for any width (lower lists of length r-3); the classical case
    is four lower parameters.  Returns (prefactor, reversed_spec) with
    reversed special parameter q^{-2n}/b, lower parameters q^{-n} a_k / b
    and argument q^{2n+r-3} b^{r-3} / ((a_5 ... a_{r+1})^2 z).  Contract:
    eval_w(spec) == prefactor * eval_w(reversed_spec).
    """
    _require_nonzero((spec.z,), "argument z")
    q = spec.q.q
    one = one_like(q)
    n = spec.n
    b = spec.b
    r = spec.r
    pair_ratio = (one - b * pow_int(q, 2 * n)) / (one - b)
    pref = pow_int(q, -binom2(n)) * pow_int(-spec.z / q, n) * pair_ratio
    pref = pref * poch(b, q, n) * poch_list(spec.lower, q, n)
    pref = pref / (poch(pow_int(q, n + 1) * b, q, n)
                   * poch_list([q * b / a for a in spec.lower], q, n))
    new_b = pow_int(q, -2 * n) / b
    new_lower = [pow_int(q, -n) * a / b for a in spec.lower]
    prod_sq = _product(spec.lower, one)
    z2 = pow_int(q, 2 * n + r - 3) * pow_int(b, r - 3) / (prod_sq * prod_sq * spec.z)
    return pref, VwpSpec(new_b, new_lower, z2, spec.q, n, spec.pole_eps)


def watson_whipple(spec: SeriesSpec):
    """Map a balanced terminating 4 phi 3 at argument q to an 8 W 7.

    Writing the spec as (a, b, c; d, e, f) with the balance condition
    q^{1-n} a b c = d e f, the result is

        prefactor (de/(ab), de/(ac);q)_n / (de/a, de/(abc);q)_n
        series    W(de/(qa); d/a, e/a, b, c; q, qa/f).

    The Pochhammer index of the prefactor is n (pinned against the direct
    summation oracle).  Contract: eval_phi(spec) == prefactor * eval_w(w).
    """
    if len(spec.num) != 3 or len(spec.den) != 3:
        raise ShapeMismatch("need a 4 phi 3 spec")
    _require_nonzero(spec.num + spec.den, "parameters")
    q = spec.q.q
    n = spec.n
    a, b, c = spec.num
    d, e, f = spec.den
    zq = spec.z - q
    bal = pow_int(q, 1 - n) * a * b * c - d * e * f
    if spec.q.exact:
        if not is_zero(zq):
            raise NotBalanced("argument must equal q")
        if not is_zero(bal):
            raise NotBalanced("balance condition q^{1-n} a b c = d e f fails")
    else:
        scale = abs_float(d * e * f) + abs_float(pow_int(q, 1 - n) * a * b * c)
        if abs_float(zq) > 1e-9 * max(abs_float(q), 1.0):
            raise NotBalanced("argument must equal q")
        if abs_float(bal) > 1e-9 * max(scale, 1.0):
            raise NotBalanced("balance condition q^{1-n} a b c = d e f fails")
    de = d * e
    pref_den = poch(de / a, q, n) * poch(de / (a * b * c), q, n)
    if is_zero(pref_den):
        raise DenominatorPole("prefactor pole: (de/a, de/(abc);q)_n = 0")
    pref = poch(de / (a * b), q, n) * poch(de / (a * c), q, n) / pref_den
    w = VwpSpec(de / (q * a), [d / a, e / a, b, c], q * a / f, spec.q, n, spec.pole_eps)
    return pref, w


def connect_qinv(spec: SeriesSpec):
    """Both rewrites of an (r+1) phi r against the inverted base.

    Returns (base_inverted_spec, (prefactor, reversed_spec)) where the
    three expressions agree:

        eval_phi(spec) == eval_phi(base_inverted_spec)
                       == prefactor * eval_phi(reversed_spec)

    The base-inverted spec lives on base 1/q with reciprocal parameters
    and argument prod(num)/prod(den) * z / q^{n+1}; the reversed form is
    exactly :func:`invert_series`.
    """
    if len(spec.num) != len(spec.den):
        raise ShapeMismatch("base connection needs the (r+1) phi r shape")
    _require_nonzero(spec.num + spec.den + (spec.z,), "series parameters and argument")
    q = spec.q.q
    one = one_like(q)
    n = spec.n
    z_inv = (_product(spec.num, one) / _product(spec.den, one)
             * spec.z / pow_int(q, n + 1))
    inv_spec = SeriesSpec([one / a for a in spec.num], [one / b for b in spec.den],
                          z_inv, spec.q.inverse(), n, spec.pole_eps)
    return inv_spec, invert_series(spec)


def qinvert_f(spec: SeriesSpec, multiplier=None):
    """Rewrite a series on base q as one on base 1/q (and vice versa).

    Given a spec on base Q, returns (g, spec2) with spec2 on base 1/Q,
    reciprocal parameter lists and argument
    (1/Q)^{n+1} * prod(num) * z / prod(den), such that

        eval_phi(spec) == eval_phi(spec2).

    The series itself needs no correction factor; a caller tracking a
    multiplier function g(base) gets it back evaluated at the new base.
    Applying the map twice returns an equivalent spec.
    """
    _require_nonzero(spec.num + spec.den, "series parameters")
    q = spec.q.q
    one = one_like(q)
    n = spec.n
    new_base = spec.q.inverse()
    z2 = (pow_int(new_base.q, n + 1) * _product(spec.num, one) * spec.z
          / _product(spec.den, one))
    spec2 = SeriesSpec([one / a for a in spec.num], [one / b for b in spec.den],
                       z2, new_base, n, spec.pole_eps)
    g = multiplier(new_base) if callable(multiplier) else one
    return g, spec2
