"""Command-line front end.

Subcommands: eval (polynomial values, single representation or the
seven-way comparison), eval-series (raw terminating series), verify
(randomized identity sweeps with a JSON report), list (the identity
catalogue) and table (value grids over the orthogonality segment).

Exit codes: 0 success, 1 an identity check FAILed, 2 parse/usage error,
3 an admissibility guard (pole) rejected the inputs, 4 the sampler could
not find an admissible draw.

Every flag can also be supplied from a ``key = value`` config file via
--config; explicit flags win over the file.
"""

from __future__ import annotations

import argparse
import cmath
import csv
import io
import json
import math
import re
import sys

from .arithmetic import (
    FLOAT,
    GuardViolation,
    QBase,
    QError,
    get_backend,
    format_scalar,
)
from .askey_wilson import AWParams, RepId, RepTag, eval_all, eval_rep
from .identity_catalog import catalog
from .qseries import SeriesSpec, VwpSpec, eval_phi, eval_w
from .sampler_verifier import (
    DrawConfig,
    SamplerExhausted,
    UnknownTarget,
    run_sweep,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_PARSE = 2
EXIT_POLE = 3
EXIT_SAMPLER = 4

_REP_CHOICES = [tag.value for tag in RepTag] + ["all"]


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _die(code: int, message: str):
    raise _CliError(code, message)


# ---------------------------------------------------------------------------
# config file support: key = value lines mirroring the flags
# ---------------------------------------------------------------------------

def _load_config(path: str) -> dict:
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    _die(EXIT_PARSE, f"{path}:{lineno}: expected key = value")
                key, _, val = line.partition("=")
                values[key.strip().replace("-", "_")] = val.strip()
    except OSError as exc:
        _die(EXIT_PARSE, f"cannot read config file: {exc}")
    return values


_TRUE = {"1", "true", "yes", "on"}


def _resolve(args, defaults: dict) -> dict:
    """Merge CLI values, config-file values and defaults (in that order)."""
    config = _load_config(args.config) if getattr(args, "config", None) else {}
    out = {}
    for key, fallback in defaults.items():
        cli_val = getattr(args, key, None)
        if cli_val is not None:
            out[key] = cli_val
            continue
        if key in config:
            raw = config[key]
            if isinstance(fallback, bool):
                out[key] = raw.lower() in _TRUE
            elif isinstance(fallback, int) and not isinstance(fallback, bool):
                out[key] = int(raw)
            elif isinstance(fallback, float):
                out[key] = float(raw)
            else:
                out[key] = raw
            continue
        out[key] = fallback
    unknown = set(config) - set(defaults)
    if unknown:
        _die(EXIT_PARSE, f"unknown config keys: {', '.join(sorted(unknown))}")
    return out


def _require(opts: dict, *names):
    for name in names:
        if opts[name] is None:
            _die(EXIT_PARSE, f"missing required option --{name.replace('_', '-')}")


def _parse_scalar(backend, text: str, what: str):
    try:
        return backend.parse(text)
    except ValueError as exc:
        _die(EXIT_PARSE, f"bad {what}: {exc}")


def _scalar_list(backend, text: str, what: str):
    items = [t for t in text.split(",") if t.strip()]
    return [_parse_scalar(backend, t, what) for t in items]


# ---------------------------------------------------------------------------
# eval
# ---------------------------------------------------------------------------

_EVAL_DEFAULTS = {
    "a1": None, "a2": None, "a3": None, "a4": None, "q": None,
    "w": None, "theta": None, "x": None, "n": None,
    "rep": "all", "backend": "rational", "format": "text",
}


def _spectral_point(opts, backend):
    picks = [k for k in ("w", "theta", "x") if opts[k] is not None]
    if len(picks) != 1:
        _die(EXIT_PARSE, "exactly one of --w / --theta / --x is required")
    kind = picks[0]
    if kind == "w":
        return _parse_scalar(backend, opts["w"], "--w")
    if backend.exact:
        _die(EXIT_PARSE, f"--{kind} needs the float backend; "
                         "rational runs require --w")
    if kind == "theta":
        # the value is invariant under theta -> -theta; normalize the sign
        # so both spellings print byte-identical output
        theta = abs(float(opts["theta"]))
        return cmath.exp(1j * theta)
    x = float(opts["x"])
    if abs(x) <= 1.0:
        return complex(x, math.sqrt(1.0 - x * x))
    return complex(x + math.copysign(math.sqrt(x * x - 1.0), x), 0.0)


def cmd_eval(args) -> int:
    opts = _resolve(args, _EVAL_DEFAULTS)
    _require(opts, "a1", "a2", "a3", "a4", "q", "n")
    backend = get_backend(opts["backend"])
    a = [_parse_scalar(backend, opts[k], f"--{k}") for k in ("a1", "a2", "a3", "a4")]
    qval = _parse_scalar(backend, opts["q"], "--q")
    w = _spectral_point(opts, backend)
    params = AWParams(a, QBase(qval), w, int(opts["n"]))
    as_json = opts["format"] == "json"

    if opts["rep"] != "all":
        value, trace = eval_rep(params, RepId(RepTag(opts["rep"])))
        if as_json:
            print(json.dumps({"rep": opts["rep"], "value": format_scalar(value),
                              "abs_scale": trace.abs_scale}, sort_keys=True))
        else:
            print(format_scalar(value))
        return EXIT_OK

    report = eval_all(params)
    if not report.values:
        guard = next(iter(report.skipped.values()), "no representation admissible")
        _die(EXIT_POLE, guard)
    if as_json:
        print(json.dumps({
            "values": {k: format_scalar(v) for k, v in sorted(report.values.items())},
            "skipped": dict(sorted(report.skipped.items())),
            "max_deviation": report.max_deviation,
            "rel_deviation": report.rel_deviation,
            "scale": report.scale,
            "all_agree": report.all_agree,
        }, sort_keys=True))
        return EXIT_OK
    for tag in (t.value for t in RepTag):
        if tag in report.values:
            print(f"{tag:<10} {format_scalar(report.values[tag])}")
        else:
            print(f"{tag:<10} SKIPPED ({report.skipped[tag]})")
    print(f"max deviation      {report.max_deviation:.3e}")
    print(f"relative deviation {report.rel_deviation:.3e}")
    print(f"condition scale    {report.scale:.3e}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# eval-series
# ---------------------------------------------------------------------------

_SERIES_DEFAULTS = {
    "kind": "phi", "num": None, "den": None, "b": None, "lower": None,
    "z": None, "q": None, "n": None, "backend": "rational", "format": "text",
}


def cmd_eval_series(args) -> int:
    opts = _resolve(args, _SERIES_DEFAULTS)
    _require(opts, "z", "q", "n")
    backend = get_backend(opts["backend"])
    qbase = QBase(_parse_scalar(backend, opts["q"], "--q"))
    z = _parse_scalar(backend, opts["z"], "--z")
    n = int(opts["n"])
    if opts["kind"] == "phi":
        _require(opts, "num", "den")
        spec = SeriesSpec(_scalar_list(backend, opts["num"], "--num"),
                          _scalar_list(backend, opts["den"], "--den"),
                          z, qbase, n)
        value, trace = eval_phi(spec)
    elif opts["kind"] == "w":
        _require(opts, "b", "lower")
        spec = VwpSpec(_parse_scalar(backend, opts["b"], "--b"),
                       _scalar_list(backend, opts["lower"], "--lower"),
                       z, qbase, n)
        value, trace = eval_w(spec)
    else:
        _die(EXIT_PARSE, f"unknown series kind {opts['kind']!r}")
    if opts["format"] == "json":
        print(json.dumps({"value": format_scalar(value),
                          "abs_scale": trace.abs_scale}, sort_keys=True))
    else:
        print(format_scalar(value))
        print(f"abs_scale {trace.abs_scale:.6e}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

_VERIFY_DEFAULTS = {
    "targets": "*", "draws": 100, "seed": 20260808, "backend": "rational",
    "n_max": 6, "q_big": False, "json": None,
}


def cmd_verify(args) -> int:
    opts = _resolve(args, _VERIFY_DEFAULTS)
    cfg = DrawConfig(seed=int(opts["seed"]),
                     draws_per_record=int(opts["draws"]),
                     n_range=(0, int(opts["n_max"])),
                     backend=opts["backend"],
                     q_big=bool(opts["q_big"]))
    patterns = [p.strip() for p in opts["targets"].split(",") if p.strip()]
    report = run_sweep(cfg, patterns)
    for line in report.summary_lines():
        print(line)
    total_fail = sum(e.failed for e in report.entries)
    total_inc = sum(e.inconclusive for e in report.entries)
    print(f"targets={len(report.entries)} fail={total_fail} "
          f"inconclusive={total_inc} wall={report.wall_time_s:.2f}s")
    if opts["json"]:
        with open(opts["json"], "w", encoding="utf-8") as fh:
            fh.write(report.to_json())
        print(f"report written to {opts['json']}")
    return EXIT_FAIL if report.any_fail else EXIT_OK


# ---------------------------------------------------------------------------
# list
# ---------------------------------------------------------------------------

_LIST_DEFAULTS = {"format": "text"}


def cmd_list(args) -> int:
    opts = _resolve(args, _LIST_DEFAULTS)
    records = catalog()
    if opts["format"] == "json":
        payload = [{
            "id": rec.id,
            "ref": rec.ref,
            "constraints": rec.constraint_summary,
            "lhs": rec.lhs.describe(),
            "rhs": rec.rhs.describe(),
            "quarantined": rec.quarantine is not None,
        } for rec in records]
        print(json.dumps(payload, indent=2, sort_keys=True))
        return EXIT_OK
    print(f"{'id':<18} {'ref':<28} constraints")
    for rec in records:
        flag = " [QUARANTINED]" if rec.quarantine else ""
        print(f"{rec.id:<18} {rec.ref:<28} {rec.constraint_summary}{flag}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# table
# ---------------------------------------------------------------------------

_TABLE_DEFAULTS = {
    "a1": None, "a2": None, "a3": None, "a4": None, "q": None,
    "n_max": 4, "x_grid": None, "format": "csv", "out": None,
}


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        _die(EXIT_PARSE, "grid spec must be lo:hi:count")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        _die(EXIT_PARSE, f"malformed grid spec {text!r}")
    if count < 1 or not -1.0 <= lo <= hi <= 1.0:
        _die(EXIT_PARSE, "grid requires -1 <= lo <= hi <= 1 and count >= 1")
    if count == 1:
        return [lo]
    step = (hi - lo) / (count - 1)
    return [lo + i * step for i in range(count)]


def cmd_table(args) -> int:
    opts = _resolve(args, _TABLE_DEFAULTS)
    _require(opts, "a1", "a2", "a3", "a4", "q", "x_grid")
    a = [_parse_scalar(FLOAT, opts[k], f"--{k}") for k in ("a1", "a2", "a3", "a4")]
    qbase = QBase(_parse_scalar(FLOAT, opts["q"], "--q"))
    n_max = int(opts["n_max"])
    xs = _parse_grid(opts["x_grid"])
    rows = []
    for x in xs:
        w = complex(x, math.sqrt(max(0.0, 1.0 - x * x)))
        for n in range(n_max + 1):
            value, _ = eval_rep(AWParams(a, qbase, w, n), RepTag.PHI_STD)
            rows.append((x, n, value.real, value.imag))
    if opts["format"] == "json":
        payload = [{"x": x, "n": n, "value_re": re, "value_im": im}
                   for x, n, re, im in rows]
        text = json.dumps(payload, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "n", "value_re", "value_im"])
        for x, n, re, im in rows:
            writer.writerow([f"{x:.17g}", n, f"{re:.17g}", f"{im:.17g}"])
        text = buf.getvalue()
    if opts["out"]:
        with open(opts["out"], "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------

def _add_common(p):
    p.add_argument("--config", help="key = value file mirroring the flags")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qaskey",
        description="terminating basic hypergeometric series and the "
                    "four-parameter symmetric polynomial family, with a "
                    "randomized identity verifier")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate the polynomial family")
    for k in ("a1", "a2", "a3", "a4"):
        p.add_argument(f"--{k}")
    p.add_argument("--q")
    p.add_argument("--w", help="spectral point w (any nonzero scalar)")
    p.add_argument("--theta", help="angle; w = e^{i|theta|} (float backend)")
    p.add_argument("--x", help="polynomial argument in [-1,1] (float backend)")
    p.add_argument("--n", type=int)
    p.add_argument("--rep", choices=_REP_CHOICES)
    p.add_argument("--backend", choices=["rational", "float"])
    p.add_argument("--format", choices=["text", "json"])
    _add_common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("eval-series", help="evaluate a terminating series")
    p.add_argument("--kind", choices=["phi", "w"])
    p.add_argument("--num", help="comma-separated numerator parameters")
    p.add_argument("--den", help="comma-separated denominator parameters")
    p.add_argument("--b", help="special parameter of the very-well-poised shape")
    p.add_argument("--lower", help="comma-separated lower parameters")
    p.add_argument("--z")
    p.add_argument("--q")
    p.add_argument("--n", type=int)
    p.add_argument("--backend", choices=["rational", "float"])
    p.add_argument("--format", choices=["text", "json"])
    _add_common(p)
    p.set_defaults(func=cmd_eval_series)

    p = sub.add_parser("verify", help="run randomized identity sweeps")
    p.add_argument("--targets", help="comma-separated id globs (default *)")
    p.add_argument("--draws", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--backend", choices=["rational", "float", "both"])
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--q-big", action="store_true", default=None, dest="q_big",
                   help="use the mirrored |q| > 1 regime")
    p.add_argument("--json", help="write the full report to this file")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("list", help="list the identity catalogue")
    p.add_argument("--format", choices=["text", "json"])
    _add_common(p)
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("table", help="tabulate polynomial values over a grid")
    for k in ("a1", "a2", "a3", "a4"):
        p.add_argument(f"--{k}")
    p.add_argument("--q")
    p.add_argument("--n-max", type=int, dest="n_max")
    p.add_argument("--x-grid", dest="x_grid", help="lo:hi:count with x in [-1,1]")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--out", help="output file (default stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_table)

    # let scalar values like -1/3 or -0.5+2i pass as option values; set
    # after add_argument so registered options keep the stock matcher
    matcher = re.compile(r"^-[\d.]")
    for sp in sub.choices.values():
        sp._negative_number_matcher = matcher
    parser._negative_number_matcher = matcher

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except SamplerExhausted as exc:
        print(f"error: sampler exhausted: {exc}", file=sys.stderr)
        return EXIT_SAMPLER
    except UnknownTarget as exc:
        print(f"error: unknown target: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GuardViolation as exc:
        print(f"error: pole guard: {exc}", file=sys.stderr)
        return EXIT_POLE
    except QError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


def app() -> None:
    raise SystemExit(main())
