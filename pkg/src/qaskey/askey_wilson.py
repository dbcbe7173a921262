"""The four-parameter symmetric polynomial family and its seven
terminating series representations, plus the base-inverted family.

Parameters are carried as (a1, a2, a3, a4), the base q and the spectral
point w; the polynomial argument is x = (w + 1/w)/2, i.e. w plays the
role of the unit-circle exponential and both w and 1/w enter every
formula.  Carrying w instead of x keeps the exact backend radical-free
and extends evaluation off the real segment.

Three representations are plain terminating 4 phi 3 sums, four are
very-well-poised series.  All seven agree wherever their pole guards
admit the parameters; representations whose guard fails report the
violated constraint instead of a value.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .arithmetic import (
    GuardViolation,
    QBase,
    QError,
    abs_float,
    as_scalar,
    binom2,
    is_zero,
    one_like,
    pow_int,
)
from .qpochhammer import poch, poch_list
from .qseries import SeriesSpec, TermTrace, VwpSpec, ZeroParameter, eval_phi, eval_w


class PoleGuard(GuardViolation):
    """A representation-specific admissibility constraint failed."""


class InvalidIndices(QError):
    """The role indices (p, r, t, u) are not a permutation of 1..4."""


class RepTag(str, Enum):
    """The seven representation shapes, in catalogue order."""

    PHI_STD = "phi-std"
    PHI_INV = "phi-inv"
    PHI_MIXED = "phi-mixed"
    W_DEF6 = "w-def6"
    W_DEF7 = "w-def7"
    W_DEF5 = "w-def5"
    W_DEF4 = "w-def4"


@dataclass(frozen=True)
class RepId:
    """A representation tag plus its role indices.

    PHI_STD and PHI_INV use only p; the mixed and very-well-poised shapes
    use all four roles.  Unspecified roles are filled with the unused
    indices in ascending order.
    """

    tag: RepTag
    p: int = 1
    r: int | None = None
    t: int | None = None
    u: int | None = None

    def __post_init__(self):
        given = [v for v in (self.p, self.r, self.t, self.u) if v is not None]
        if any(v not in (1, 2, 3, 4) for v in given) or len(set(given)) != len(given):
            raise InvalidIndices("roles must be distinct members of {1,2,3,4}")
        free = [k for k in (1, 2, 3, 4) if k not in given]
        for name in ("r", "t", "u"):
            if getattr(self, name) is None:
                object.__setattr__(self, name, free.pop(0))

    @property
    def roles(self) -> tuple[int, int, int, int]:
        return (self.p, self.r, self.t, self.u)


ALL_REPS = tuple(RepId(tag) for tag in RepTag)


@dataclass(frozen=True)
class AWParams:
    """The four nonzero parameters, the base, the spectral point w and
    the degree n."""

    a: tuple
    q: QBase
    w: object
    n: int

    def __post_init__(self):
        if len(self.a) != 4:
            raise ValueError("exactly four parameters required")
        if self.n < 0:
            raise ValueError("degree n must be >= 0")
        object.__setattr__(self, "a",
                           tuple(as_scalar(v, self.q.exact) for v in self.a))
        object.__setattr__(self, "w", as_scalar(self.w, self.q.exact))
        for v in self.a:
            if is_zero(v):
                raise ZeroParameter("all four parameters must be nonzero")
        if is_zero(self.w):
            raise ZeroParameter("the spectral point w must be nonzero")

    def ak(self, k: int):
        return self.a[k - 1]

    @property
    def a1234(self):
        return self.a[0] * self.a[1] * self.a[2] * self.a[3]

    @property
    def x(self):
        return (self.w + one_like(self.w) / self.w) / 2

    def with_w(self, w) -> "AWParams":
        return AWParams(self.a, self.q, w, self.n)

    def permuted(self, perm) -> "AWParams":
        """New params with a_k := a_{perm[k]} (perm is 1-based, length 4)."""
        if sorted(perm) != [1, 2, 3, 4]:
            raise InvalidIndices("perm must be a permutation of 1..4")
        return AWParams(tuple(self.a[j - 1] for j in perm), self.q, self.w, self.n)

    def reciprocal(self) -> "AWParams":
        one = one_like(self.w)
        return AWParams(tuple(one / v for v in self.a), self.q, self.w, self.n)


def _guarded_poch(base, q, n, constraint: str):
    v = poch(base, q, n)
    if is_zero(v):
        raise PoleGuard(f"pole guard failed: ({constraint};q)_n = 0")
    return v


def _build(params: AWParams, rep: RepId):
    """(prefactor, series spec) for one representation."""
    q = params.q.q
    n = params.n
    w = params.w
    one = one_like(q)
    wi = one / w
    p, r, t, u = rep.roles
    ap, ar, at, au = (params.ak(k) for k in rep.roles)
    a1234 = params.a1234
    others = (r, t, u)
    aps = [ap * params.ak(s) for s in others]
    tag = rep.tag

    if tag is RepTag.PHI_STD:
        pref = pow_int(ap, -n) * poch_list(aps, q, n)
        spec = SeriesSpec([pow_int(q, n - 1) * a1234, ap * w, ap * wi],
                          aps, q, params.q, n)
        return pref, spec

    if tag is RepTag.PHI_INV:
        # (a1234/q;q)_{2n} / (a1234/q;q)_n collapses to (a1234 q^{n-1};q)_n
        pref = (pow_int(q, -binom2(n)) * pow_int(-ap, -n)
                * poch(a1234 * pow_int(q, n - 1), q, n)
                * poch(ap * w, q, n) * poch(ap * wi, q, n))
        q1n = pow_int(q, 1 - n)
        spec = SeriesSpec([q1n / x for x in aps],
                          [pow_int(q, 2 - 2 * n) / a1234, q1n * w / ap, q1n * wi / ap],
                          q, params.q, n)
        return pref, spec

    if tag is RepTag.PHI_MIXED:
        q1n = pow_int(q, 1 - n)
        pref = (pow_int(w, n) * poch(ap * ar, q, n)
                * poch(at * wi, q, n) * poch(au * wi, q, n))
        spec = SeriesSpec([ap * w, ar * w, q1n / (at * au)],
                          [ap * ar, q1n * w / at, q1n * w / au], q, params.q, n)
        return pref, spec

    if tag is RepTag.W_DEF6:
        # trailing quotient collapses to 1 / (a1234 q^{n-1} / (ap w);q)_n
        den = _guarded_poch(a1234 * pow_int(q, n - 1) / (ap * w), q, n,
                            "q^{n-1} a1234 / (a_p w)")
        pref = (pow_int(w, n) * poch(a1234 * pow_int(q, n - 1), q, n)
                * poch_list([params.ak(s) * wi for s in others], q, n) / den)
        spec = VwpSpec(pow_int(q, 1 - 2 * n) * ap * w / a1234,
                       [pow_int(q, 1 - n) * x / a1234 for x in aps] + [ap * w],
                       q * w / ap, params.q, n)
        return pref, spec

    if tag is RepTag.W_DEF7:
        den = _guarded_poch(a1234 * w / ap, q, n, "a1234 w / a_p")
        pref = (pow_int(w, n) * poch(ap * wi, q, n)
                * poch_list([a1234 / x for x in aps], q, n) / den)
        spec = VwpSpec(a1234 * w / (q * ap),
                       [params.ak(s) * w for s in others] + [pow_int(q, n - 1) * a1234],
                       q * wi / ap, params.q, n)
        return pref, spec

    if tag is RepTag.W_DEF5:
        den = _guarded_poch(ar / ap, q, n, "a_r / a_p")
        pref = (pow_int(ap, -n) * poch(ap * at, q, n) * poch(ap * au, q, n)
                * poch(ar * w, q, n) * poch(ar * wi, q, n) / den)
        q1n = pow_int(q, 1 - n)
        spec = VwpSpec(pow_int(q, -n) * ap / ar,
                       [q1n / (ar * at), q1n / (ar * au), ap * w, ap * wi],
                       pow_int(q, n) * at * au, params.q, n)
        return pref, spec

    if tag is RepTag.W_DEF4:
        den = _guarded_poch(wi * wi, q, n, "1/w^2")
        pref = (pow_int(w, n)
                * poch_list([v * wi for v in params.a], q, n) / den)
        spec = VwpSpec(pow_int(q, -n) * w * w, [v * w for v in params.a],
                       pow_int(q, 2 - n) / a1234, params.q, n)
        return pref, spec

    raise InvalidIndices(f"unknown representation tag {tag!r}")


def _build_qinv(params: AWParams, rep: RepId):
    """(prefactor, series spec) for one base-inverted representation.

    These evaluate the polynomial at base 1/q using series on base q with
    reciprocal parameters; each tag mirrors its sibling in :func:`_build`.
    """
    q = params.q.q
    n = params.n
    w = params.w
    one = one_like(q)
    wi = one / w
    ap, ar, at, au = (params.ak(k) for k in rep.roles)
    a1234 = params.a1234
    others = rep.roles[1:]
    aps = [ap * params.ak(s) for s in others]
    c3 = pow_int(q, -3 * binom2(n))
    tag = rep.tag

    if tag is RepTag.PHI_STD:
        pref = c3 * pow_int(-ap * a1234, n) * poch_list([one / x for x in aps], q, n)
        spec = SeriesSpec([pow_int(q, n - 1) / a1234, w / ap, wi / ap],
                          [one / x for x in aps], q, params.q, n)
        return pref, spec

    if tag is RepTag.PHI_INV:
        pref = (pow_int(q, -4 * binom2(n)) * pow_int(ap * a1234, n)
                * poch(pow_int(q, n - 1) / a1234, q, n)
                * poch(w / ap, q, n) * poch(wi / ap, q, n))
        q1n = pow_int(q, 1 - n)
        spec = SeriesSpec([q1n * x for x in aps],
                          [pow_int(q, 2 - 2 * n) * a1234, q1n * ap * w, q1n * ap * wi],
                          q, params.q, n)
        return pref, spec

    if tag is RepTag.PHI_MIXED:
        q1n = pow_int(q, 1 - n)
        pref = (c3 * pow_int(-a1234 * wi, n) * poch(one / (ap * ar), q, n)
                * poch(w / at, q, n) * poch(w / au, q, n))
        spec = SeriesSpec([wi / ap, wi / ar, q1n * at * au],
                          [one / (ap * ar), q1n * at * wi, q1n * au * wi],
                          q, params.q, n)
        return pref, spec

    if tag is RepTag.W_DEF6:
        den = _guarded_poch(ap * w * pow_int(q, n - 1) / a1234, q, n,
                            "q^{n-1} a_p w / a1234")
        pref = (c3 * pow_int(-a1234 * wi, n)
                * poch(pow_int(q, n - 1) / a1234, q, n)
                * poch_list([w / params.ak(s) for s in others], q, n) / den)
        spec = VwpSpec(pow_int(q, 1 - 2 * n) * a1234 * wi / ap,
                       [pow_int(q, 1 - n) * a1234 / x for x in aps] + [wi / ap],
                       q * ap * wi, params.q, n)
        return pref, spec

    if tag is RepTag.W_DEF7:
        den = _guarded_poch(ap * wi / a1234, q, n, "a_p / (w a1234)")
        pref = (c3 * pow_int(-a1234 * wi, n) * poch(w / ap, q, n)
                * poch_list([x / a1234 for x in aps], q, n) / den)
        spec = VwpSpec(ap * wi / (q * a1234),
                       [wi / params.ak(s) for s in others] + [pow_int(q, n - 1) / a1234],
                       q * ap * w, params.q, n)
        return pref, spec

    if tag is RepTag.W_DEF5:
        den = _guarded_poch(ap / ar, q, n, "a_p / a_r")
        pref = (c3 * pow_int(-ap * a1234, n)
                * poch(one / (ap * at), q, n) * poch(one / (ap * au), q, n)
                * poch(w / ar, q, n) * poch(wi / ar, q, n) / den)
        q1n = pow_int(q, 1 - n)
        spec = VwpSpec(pow_int(q, -n) * ar / ap,
                       [q1n * ar * at, q1n * ar * au, w / ap, wi / ap],
                       pow_int(q, n) / (at * au), params.q, n)
        return pref, spec

    if tag is RepTag.W_DEF4:
        den = _guarded_poch(w * w, q, n, "w^2")
        pref = (c3 * pow_int(-a1234 * wi, n)
                * poch_list([w / v for v in params.a], q, n) / den)
        spec = VwpSpec(pow_int(q, -n) * wi * wi, [wi / v for v in params.a],
                       pow_int(q, 2 - n) * a1234, params.q, n)
        return pref, spec

    raise InvalidIndices(f"unknown representation tag {tag!r}")


def _as_rep(rep) -> RepId:
    if isinstance(rep, RepId):
        return rep
    return RepId(RepTag(rep))


def _evaluate(params, rep, builder):
    rep = _as_rep(rep)
    try:
        pref, spec = builder(params, rep)
    except PoleGuard:
        raise
    except GuardViolation as exc:
        raise PoleGuard(f"{rep.tag.value}: {exc}") from exc
    if isinstance(spec, VwpSpec):
        value, trace = eval_w(spec)
    else:
        value, trace = eval_phi(spec)
    return pref * value, trace.scaled(pref)


def rep_series(params: AWParams, rep):
    """(prefactor, raw series spec) of one representation, unevaluated.

    Useful for structural arguments, e.g. applying a series transformation
    to a representation and recognizing the result as another one.
    """
    return _build(params, _as_rep(rep))


def qinv_rep_series(params: AWParams, rep):
    """(prefactor, raw series spec) of one base-inverted representation."""
    return _build_qinv(params, _as_rep(rep))


def eval_rep(params: AWParams, rep) -> tuple[object, TermTrace]:
    """Evaluate one representation; all seven return the same value on
    admissible parameters."""
    return _evaluate(params, rep, _build)


def eval_qinv_rep(params: AWParams, rep) -> tuple[object, TermTrace]:
    """Evaluate one representation of the polynomial at base 1/q."""
    return _evaluate(params, rep, _build_qinv)


@dataclass(frozen=True)
class EvalReport:
    """Outcome of evaluating several representations on one draw."""

    values: dict
    skipped: dict
    max_deviation: float
    scale: float
    exact: bool
    all_agree: bool

    @property
    def rel_deviation(self) -> float:
        if not self.values:
            return 0.0
        m = max(abs_float(v) for v in self.values.values())
        return self.max_deviation / m if m > 0 else self.max_deviation


def _report(params, reps, evaluator) -> EvalReport:
    values = {}
    skipped = {}
    scale = 0.0
    for rep in reps:
        rep = _as_rep(rep)
        try:
            value, trace = evaluator(params, rep)
        except PoleGuard as exc:
            skipped[rep.tag.value] = str(exc)
            continue
        values[rep.tag.value] = value
        scale = max(scale, trace.abs_scale)
    vals = list(values.values())
    max_dev = 0.0
    all_agree = True
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            d = vals[i] - vals[j]
            if not is_zero(d):
                all_agree = False
                max_dev = max(max_dev, abs_float(d))
    return EvalReport(values, skipped, max_dev, scale, params.q.exact, all_agree)


def eval_all(params: AWParams, reps=ALL_REPS) -> EvalReport:
    """Evaluate every admissible representation and report the values,
    the maximum pairwise deviation and the combined cancellation scale.

    Representations whose guard fails are reported as skipped with the
    violated constraint; the remaining subset is still evaluated."""
    return _report(params, reps, eval_rep)


def eval_qinv_all(params: AWParams, reps=ALL_REPS) -> EvalReport:
    """Seven-way report for the base-inverted family."""
    return _report(params, reps, eval_qinv_rep)


def eval_qinv_direct(params: AWParams) -> tuple[object, TermTrace]:
    """Independent oracle for the base-inverted value: substitute 1/q
    directly into the standard representation and evaluate on base 1/q."""
    qi = params.q.inverse()
    q = qi.q
    n = params.n
    w = params.w
    ap = params.ak(1)
    aps = [ap * params.ak(s) for s in (2, 3, 4)]
    pref = pow_int(ap, -n) * poch_list(aps, q, n)
    spec = SeriesSpec([pow_int(q, n - 1) * params.a1234, ap * w, ap / w],
                      aps, q, qi, n)
    value, trace = eval_phi(spec)
    return pref * value, trace.scaled(pref)


def check_symmetry(params: AWParams, perm):
    """Difference p(params) - p(permuted params); contract: zero."""
    v1, _ = eval_rep(params, RepId(RepTag.PHI_STD))
    v2, _ = eval_rep(params.permuted(perm), RepId(RepTag.PHI_STD))
    return v1 - v2


def check_theta_flip(params: AWParams):
    """Difference between the value at w and at 1/w; contract: zero."""
    v1, _ = eval_rep(params, RepId(RepTag.PHI_STD))
    v2, _ = eval_rep(params.with_w(one_like(params.w) / params.w),
                     RepId(RepTag.PHI_STD))
    return v1 - v2


def check_qinv_scaling(params: AWParams):
    """Both equalities of the reciprocal-parameter scaling law.

    Returns the pair of differences

        p(w; a | 1/q) - q^{-3 binom(n,2)} (-a1234)^n p(w;    1/a | q)
        p(w; a | 1/q) - q^{-3 binom(n,2)} (-a1234)^n p(1/w; 1/a | q)

    both of which are zero on admissible draws.
    """
    q = params.q.q
    n = params.n
    lhs, _ = eval_qinv_rep(params, RepId(RepTag.PHI_STD))
    factor = pow_int(q, -3 * binom2(n)) * pow_int(-params.a1234, n)
    recip = params.reciprocal()
    v1, _ = eval_rep(recip, RepId(RepTag.PHI_STD))
    v2, _ = eval_rep(recip.with_w(one_like(params.w) / params.w),
                     RepId(RepTag.PHI_STD))
    return lhs - factor * v1, lhs - factor * v2
