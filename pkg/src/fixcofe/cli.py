"""Command-line front end.

Exit codes: 0 success/pass, 1 counterexample, 2 parse or usage error,
3 runtime error (overflow, enumeration cap), 4 unknown demo.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Any, Callable

from . import checkers
from .checkers import Sampler
from .dsl import ParseError, compile_def, load_def, parse_def
from .errors import FixcofeError
from .fixpoint import fix, iterate
from .instances import (NATFUN, STREAM, VALUE_MAX, NatFun, const_fn, identity_fn,
                        natfun_from_table, zero_fn)
from .ofe import coherence_check, coherent_of_cauchy, limit
from .operators import fib_operator, naturals_operator

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_PARSE, EXIT_RUNTIME, EXIT_UNKNOWN_DEMO = range(5)

NESTED_ZERO_SOURCE = "f(x) = if x = 0 then 0 else f(f(x - 1))"


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    definition: str | None = None
    depth: int = 8
    seed_fn: str = "zero"
    rng_seed: int = 0
    samples: int = 1000
    fmt: str = "text"
    enum_len: int = 4
    enum_max: int = 3
    kind: str | None = None
    demo: str | None = None
    replay: str | None = None

    def validate(self) -> None:
        if self.depth < 0:
            raise UsageError("--depth must be >= 0")
        if self.command == "check" and self.samples < 1:
            raise UsageError("--samples must be >= 1")
        if self.enum_len < 0 or self.enum_max < 0:
            raise UsageError("enumeration bounds must be >= 0")
        parse_seed_fn(self.seed_fn)


def parse_seed_fn(spec: str) -> NatFun:
    if spec == "zero":
        return zero_fn()
    if spec == "id":
        return identity_fn()
    if spec.startswith("const:"):
        try:
            c = int(spec[len("const:"):])
        except ValueError:
            raise UsageError(f"bad seed function {spec!r}") from None
        if not 0 <= c <= VALUE_MAX:
            raise UsageError(f"constant {c} outside 0..2^64-1")
        return const_fn(c)
    raise UsageError(f"bad seed function {spec!r}; use zero, id or const:C")


# -- output -------------------------------------------------------------------

def _emit(cfg: RunConfig, payload: dict[str, Any], lines: list[str],
          rows: list[tuple] | None = None) -> None:
    if cfg.fmt == "json":
        print(json.dumps(payload))
    elif cfg.fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if rows is None:
            writer.writerow(["key", "value"])
            rows = [(k, json.dumps(v) if isinstance(v, (dict, list)) else v)
                    for k, v in payload.items()]
        else:
            writer.writerow(["index", "value"])
        writer.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        print("\n".join(lines))


def _report_lines(report) -> list[str]:
    out = [f"{report.name}: {report.verdict}",
           f"  samples: {report.samples}  premise hits: {report.premise_hits}"]
    if not report.passed:
        out.append(f"  level: {report.level}")
        out.append(f"  witness: {json.dumps(report.to_dict()['witness'])}")
        for k, v in report.observations.items():
            out.append(f"  {k} @ {v.level}: {list(v.payload) if isinstance(v.payload, tuple) else v.payload}")
    elif report.note:
        out.append(f"  {report.note}")
    return out


# -- solve --------------------------------------------------------------------

def cmd_solve(cfg: RunConfig) -> int:
    d = load_def(cfg.definition)
    op = compile_def(d)
    handle = fix(op, parse_seed_fn(cfg.seed_fn), override=True)
    prefix = list(handle.query(cfg.depth).payload)
    stabilized = handle.stabilized_at(cfg.depth)
    payload = {"name": d.name, "depth": cfg.depth, "prefix": prefix,
               "seed": cfg.seed_fn, "stabilized_at": stabilized}
    lines = [f"{d.name}: {cfg.depth} iterations from seed {cfg.seed_fn}",
             "prefix: " + " ".join(map(str, prefix)),
             f"prefix stabilized at iteration {stabilized} (informational)",
             f"caveat: {handle.caveat}"]
    _emit(cfg, payload, lines, list(enumerate(prefix)))
    return EXIT_OK


# -- check --------------------------------------------------------------------

def _load_operator(cfg: RunConfig):
    if cfg.definition is None:
        raise UsageError(f"check {cfg.kind} needs --def")
    d = load_def(cfg.definition)
    return d, compile_def(d)


def _decode_element(desc: dict, op) -> NatFun:
    if "iterations" in desc:
        return iterate(op, _decode_element(desc["seed"], op), int(desc["iterations"]))
    if "entries" in desc:
        return NATFUN.decode(desc)
    raise UsageError(f"witness {desc!r} cannot be rebuilt")


def _replay(cfg: RunConfig, op) -> int:
    with open(cfg.replay, encoding="utf-8") as fh:
        stored = json.load(fh)
    if stored.get("check") != cfg.kind:
        raise UsageError(f"report is for {stored.get('check')!r}, not {cfg.kind!r}")
    if stored.get("verdict") == "pass":
        _emit(cfg, {"check": cfg.kind, "replay": "nothing to replay"}, ["report passed; nothing to replay"])
        return EXIT_OK
    w = stored["witness"]
    n = int(w["n"])
    if cfg.kind == "ofe-laws":
        a, b, c = (NATFUN.decode(w[k]) for k in "abc")
        failed = checkers.law_fails(NATFUN, w["law"], n, a, b, c)
    elif cfg.kind == "lemma":
        failed = checkers.lemma_violation(op, n, _decode_element(w["g"], op))
    else:
        a, b = _decode_element(w["a"], op), _decode_element(w["b"], op)
        violation = (checkers.contractive_violation if cfg.kind == "contractive"
                     else checkers.cfp_violation)
        failed = violation(op, n, a, b)
    status = "reproduced" if failed else "not reproduced"
    _emit(cfg, {"check": cfg.kind, "replay": status, "level": n},
          [f"replay {cfg.kind}: counterexample {status} at level {n}"])
    return EXIT_COUNTEREXAMPLE if failed else EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    kind = cfg.kind
    name = None
    op = None
    if kind != "ofe-laws" or cfg.definition is not None:
        d, op = _load_operator(cfg)
        name = d.name
    if cfg.replay:
        return _replay(cfg, op)
    N = cfg.depth
    if N < 1 and kind != "lemma":
        raise UsageError("--depth must be >= 1 for checks")
    sampler = Sampler(NATFUN, cfg.rng_seed, prefix_len=max(8, N), max_value=4)
    enum = (cfg.enum_len, cfg.enum_max) if cfg.enum_len > 0 else None
    if kind == "ofe-laws":
        report = checkers.check_ofe_laws(NATFUN, sampler, N, cfg.samples)
    elif kind == "contractive":
        report = checkers.check_contractive(op, sampler, N, cfg.samples, exhaustive=enum)
    elif kind == "cfp":
        report = checkers.check_cfp(op, sampler, N, cfg.samples, exhaustive=enum,
                                    seeds=[zero_fn(), identity_fn()])
    elif kind == "lemma":
        if N > cfg.enum_len:
            raise UsageError(f"--depth {N} exceeds --enum-len {cfg.enum_len}")
        report = checkers.check_partial_fixpoint_lemma(op, cfg.enum_len, cfg.enum_max, N)
    else:
        raise UsageError(f"unknown check {kind!r}")
    payload = {"definition": name, "depth": N, "rng_seed": cfg.rng_seed,
               "samples_requested": cfg.samples,
               "enumeration": {"L": cfg.enum_len, "Vmax": cfg.enum_max}, **report.to_dict()}
    lines = [f"check {kind} on {name or 'NatFun'} (depth {N}, rng seed {cfg.rng_seed})"]
    lines += _report_lines(report)
    _emit(cfg, payload, lines)
    return EXIT_OK if report.passed else EXIT_COUNTEREXAMPLE


# -- demos --------------------------------------------------------------------

def _demo_nested_zero(depth: int):
    op = compile_def(parse_def(NESTED_ZERO_SOURCE))
    prefix = list(fix(op, identity_fn(), override=True).query(depth).payload)
    cfp = checkers.check_cfp(op, Sampler(NATFUN, 0), min(max(depth, 1), 8), samples=300,
                             seeds=[zero_fn(), identity_fn()], exhaustive=(3, 3))
    contractive = checkers.check_contractive(op, None, 4, exhaustive=(4, 3))
    ok = prefix == [0] * depth and cfp.passed and not contractive.passed
    payload = {"prefix": prefix, "cfp": cfp.to_dict(), "contractive": contractive.to_dict()}
    lines = [f"definition: {NESTED_ZERO_SOURCE}",
             "fixed point prefix: " + " ".join(map(str, prefix))]
    lines += _report_lines(cfp) + _report_lines(contractive)
    return ok, payload, lines, list(enumerate(prefix))


def _stream_demo(op, depth: int, expected: list[int]):
    prefix = list(fix(op).query(depth).payload)
    contractive = checkers.check_contractive(op, Sampler(STREAM, 0), 8, samples=300)
    ok = prefix == expected and contractive.passed
    payload = {"prefix": prefix, "contractive": contractive.to_dict()}
    lines = ["prefix: " + " ".join(map(str, prefix))] + _report_lines(contractive)
    return ok, payload, lines, list(enumerate(prefix))


def _fib(n: int) -> list[int]:
    out, a, b = [], 0, 1
    for _ in range(n):
        out.append(a)
        a, b = b, a + b
    return out


def cauchy_example():
    """A Cauchy, non-coherent sequence of tables with an explicit modulus.

    ``s(i)`` is zero below ``i // 2`` and 9 elsewhere; ``m(n) = 2n``.
    """
    s = lambda i: natfun_from_table({k: 0 for k in range(i // 2)}, 9)  # noqa: E731
    m = lambda n: 2 * n  # noqa: E731
    return s, m


def _demo_cauchy(depth: int):
    N = max(depth, 1)
    s, m = cauchy_example()
    raw = coherence_check(NATFUN, s, N)
    y = coherent_of_cauchy(NATFUN, s, m)
    coherent = coherence_check(NATFUN, y, N)
    lim = limit(NATFUN, y)
    agrees = all(NATFUN.approx_eq(n, s(i), lim)
                 for n in range(N + 1) for i in range(m(n), m(n) + 4))
    ok = coherent.passed and agrees
    payload = {"raw_sequence": raw.to_dict(), "coherent_subsequence": coherent.to_dict(),
               "limit_prefix": list(NATFUN.truncate(N, lim).payload), "limits_agree": agrees}
    lines = ["raw sequence " + _report_lines(raw)[0],
             "subsequence " + _report_lines(coherent)[0],
             "limit prefix: " + " ".join(map(str, payload["limit_prefix"])),
             f"limit agrees with the Cauchy sequence up to level {N}: {agrees}"]
    return ok, payload, lines, list(enumerate(payload["limit_prefix"]))


DEMOS: dict[str, Callable[[int], tuple]] = {
    "nested-zero": _demo_nested_zero,
    "naturals-stream": lambda d: _stream_demo(naturals_operator(), d, list(range(d))),
    "fib-stream": lambda d: _stream_demo(fib_operator(), d, _fib(d)),
    "cauchy-coherent": _demo_cauchy,
}


def cmd_demo(cfg: RunConfig) -> int:
    run = DEMOS.get(cfg.demo)
    if run is None:
        print(f"unknown demo {cfg.demo!r}; choose from {', '.join(DEMOS)}", file=sys.stderr)
        return EXIT_UNKNOWN_DEMO
    ok, payload, lines, rows = run(cfg.depth)
    _emit(cfg, {"demo": cfg.demo, "depth": cfg.depth, "ok": ok, **payload},
          [f"demo {cfg.demo} (depth {cfg.depth})"] + lines, rows)
    return EXIT_OK if ok else EXIT_COUNTEREXAMPLE


# -- entry point --------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fixcofe",
                                     description="Step-indexed fixed points of recursive definitions")
    sub = parser.add_subparsers(dest="command", required=True)

    def fmt(p):
        p.add_argument("--format", dest="fmt", choices=["text", "json", "csv"], default="text")

    solve = sub.add_parser("solve", help="observe the fixed point of a definition")
    solve.add_argument("--def", dest="definition", required=True)
    solve.add_argument("--depth", type=int, required=True)
    solve.add_argument("--seed-fn", default="zero", help="zero | id | const:C")
    fmt(solve)

    check = sub.add_parser("check", help="run a property checker")
    check.add_argument("kind", choices=["ofe-laws", "contractive", "cfp", "lemma"])
    check.add_argument("--def", dest="definition")
    check.add_argument("--depth", type=int, default=8)
    check.add_argument("--samples", type=int, default=1000)
    check.add_argument("--rng-seed", type=int, default=0)
    check.add_argument("--enum-len", type=int, default=4, help="0 disables enumeration")
    check.add_argument("--enum-max", type=int, default=3)
    check.add_argument("--replay", metavar="REPORT", help="re-verify a stored JSON report")
    fmt(check)

    demo = sub.add_parser("demo", help="run a built-in scenario")
    demo.add_argument("demo", metavar="NAME", help=", ".join(DEMOS))
    demo.add_argument("--depth", type=int, default=10)
    fmt(demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__})
    # Nested definitions recurse through every earlier approximant.
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000 + 200 * cfg.depth))
    try:
        cfg.validate()
        if cfg.command == "solve":
            return cmd_solve(cfg)
        if cfg.command == "check":
            return cmd_check(cfg)
        return cmd_demo(cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UsageError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (FixcofeError, RecursionError, ValueError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
