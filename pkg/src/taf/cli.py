"""Command line interface: ``taf analyze|compare|verify|point|witness``.

Configurations and machine reports are JSON.  Every rational is rendered
as the string ``"num/den"`` in lowest terms so nothing is lost in transit.
"""

from __future__ import annotations

import argparse
import dataclasses
import enum
import json
import logging
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from . import autgroup, checks
from .autgroup import ExponentVector, SearchBounds
from .cantor import CantorSpace, Point, parse_point
from .errors import InvalidProfile, ParseError, TafError, UnknownCommand
from .matrixalg import TriElement
from .supernat import SequenceProfile, finitely_equivalent, from_profile

log = logging.getLogger("taf")

COMMANDS = ("analyze", "compare", "verify", "point", "witness")
POINT_QUERIES = ("nu", "gap", "alpha", "cocycle")


@dataclass(frozen=True)
class Config:
    r: SequenceProfile
    s: SequenceProfile
    options: dict = field(default_factory=dict)

    @property
    def space(self) -> CantorSpace:
        return CantorSpace(self.r, self.s)

    @property
    def level(self) -> int:
        return self.options.get("level", 2)

    @property
    def bounds(self) -> SearchBounds:
        search = self.options.get("search", {})
        return SearchBounds.from_env(SearchBounds(**search))


def _profile(data: Any, name: str) -> SequenceProfile:
    if not isinstance(data, dict):
        raise ParseError(f"field {name!r}: expected an object with preamble and cycle")
    unknown = set(data) - {"preamble", "cycle"}
    if unknown:
        raise ParseError(f"field {name!r}: unknown keys {sorted(unknown)}")
    seqs = {}
    for key in ("preamble", "cycle"):
        value = data.get(key, [])
        if not isinstance(value, list) or not all(type(v) is int for v in value):
            raise ParseError(f"field {name}.{key}: expected a list of integers")
        seqs[key] = value
    try:
        return SequenceProfile(tuple(seqs["preamble"]), tuple(seqs["cycle"]))
    except InvalidProfile as exc:
        raise InvalidProfile(f"field {name}: {exc}") from None


def _options(data: Any) -> dict:
    if not isinstance(data, dict):
        raise ParseError("field 'options': expected an object")
    out = dict(data)
    if "level" in out:
        if type(out["level"]) is not int or out["level"] < 1:
            raise ParseError("field options.level: expected an integer >= 1")
    if "search" in out:
        search = out["search"]
        allowed = {f.name for f in dataclasses.fields(SearchBounds)}
        if not isinstance(search, dict) or set(search) - allowed:
            raise ParseError(f"field options.search: expected an object with keys {sorted(allowed)}")
        for k, v in search.items():
            if type(v) is not int or v < 1:
                raise ParseError(f"field options.search.{k}: expected an integer >= 1")
    return out


def parse_config(text: str) -> Config:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError("line 1: top level must be an object")
    for key in ("r", "s"):
        if key not in data:
            raise ParseError(f"field {key!r}: missing")
    return Config(_profile(data["r"], "r"), _profile(data["s"], "s"),
                  _options(data.get("options", {})))


def config_to_text(config: Config) -> str:
    return json.dumps({"r": config.r.to_dict(), "s": config.s.to_dict(),
                       "options": config.options}, sort_keys=True, indent=2)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {text!r}") from None


def parse_exponents(text: str) -> ExponentVector:
    """``"2:-1,3:2"`` or a JSON object ``{"2": -1}``."""
    text = text.strip()
    try:
        if text.startswith("{"):
            return ExponentVector.of({int(p): int(a) for p, a in json.loads(text).items()})
        pairs = [item.split(":") for item in text.split(",") if item]
        return ExponentVector.of({int(p): int(a) for p, a in pairs})
    except (ValueError, json.JSONDecodeError, AttributeError):
        raise ParseError(f"bad exponent vector {text!r}; use p:a,p:a") from None


def read_point(space: CantorSpace, text: str) -> Point:
    try:
        left, right, tail = parse_point(json.loads(text))
    except (json.JSONDecodeError, ValueError) as exc:
        raise ParseError(f"bad point literal: {exc}") from None
    try:
        x = space.point(left, right, tail)
    except ValueError as exc:
        raise ParseError(f"bad point literal: {exc}") from None
    if (list(x.left), list(x.right)) != (left, right):
        log.warning("point %s canonicalized to %s", text, json.dumps(x.to_dict()))
    return x


# -- reports --------------------------------------------------------------


def jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (Point, SequenceProfile, ExponentVector)):
        return obj.to_dict()
    if isinstance(obj, TriElement):
        return obj.to_records()
    if dataclasses.is_dataclass(obj):
        return {f.name: jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        return [jsonable(v) for v in sorted(obj)]
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return str(obj)


@dataclass
class Report:
    command: str
    results: dict = field(default_factory=dict)
    checks: list[checks.Check] = field(default_factory=list)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        out = {"command": self.command, "results": jsonable(self.results),
               "checks": [{"name": c.name, "status": c.status, "detail": c.detail}
                          for c in self.checks],
               "status": "PASS" if self.ok else "FAIL"}
        if self.error:
            out["error"] = self.error
        return out


def _text_value(value: Any) -> str:
    return value if isinstance(value, str) else json.dumps(value, sort_keys=True, ensure_ascii=False)


def emit_report(report: Report, fmt: str = "text") -> str:
    data = report.to_dict()
    if fmt == "json":
        return json.dumps(data, sort_keys=True, indent=2)
    lines = [f"command: {data['command']}"]
    results = data["results"]
    if results:
        width = max(len(k) for k in results)
        lines += [f"  {k.ljust(width)}  {_text_value(results[k])}" for k in sorted(results)]
    if report.command == "verify" and not report.checks:
        lines.append("no checks run")
    if report.checks:
        width = max(len(c.name) for c in report.checks)
        lines += [f"  {c.status}  {c.name.ljust(width)}  {c.detail}" for c in report.checks]
    if report.error:
        lines.append(f"error: {report.error}")
    lines.append(f"status: {data['status']}")
    return "\n".join(lines)


# -- commands -------------------------------------------------------------


def _analyze(config: Config, args) -> Report:
    d, primes = autgroup.out_rank(config.r, config.s)
    return Report("analyze", {
        "r": config.r, "s": config.s,
        "r_supernatural": str(from_profile(config.r)),
        "s_supernatural": str(from_profile(config.s)),
        "primes": primes, "d": d, "group": f"Out ≅ Z^{d}",
        "generators": [{"prime": p, "scaling": Fraction(1, p),
                        "r_refactored": autgroup.refactor_products(config.r, p),
                        "s_refactored": autgroup.refactor_products(config.s, p)}
                       for p in primes],
    })


def _compare(config: Config, args) -> Report:
    if not args.other:
        raise ParseError("compare needs a second config file")
    other = load_config(args.other)
    pairs = {"r": (config.r, other.r), "s": (config.s, other.s)}
    results = {}
    for name, (a, b) in pairs.items():
        sa, sb = from_profile(a), from_profile(b)
        results[f"{name}_supernaturals"] = [str(sa), str(sb)]
        results[f"{name}_finitely_equivalent"] = finitely_equivalent(sa, sb)
    return Report("compare", results)


def _verify(config: Config, args) -> Report:
    level = args.level or config.level
    return Report("verify", {"level": level}, checks.run_all(config.space, level))


def _point(config: Config, args) -> Report:
    space = config.space
    if not args.point:
        raise ParseError("point queries need --point")
    pts = [read_point(space, text) for text in args.point]
    x = pts[0]
    results: dict[str, Any] = {"query": args.query, "point": x}
    if args.query == "nu":
        results["nu"] = space.nu(x)
    elif args.query == "gap":
        results["is_gap_point"] = space.is_gap_point(x)
        if space.is_gap_point(x):
            xp = space.gap_successor(x)
            results["successor"] = xp
            results["nu"] = space.nu(x)
    elif args.query == "alpha":
        c = parse_exponents(args.exp or "")
        y = autgroup.alpha_on_point(space, c, x)
        results.update(exponents=c, scaling=c.scaling, image=y,
                       nu=space.nu(x), image_nu=space.nu(y))
    elif args.query == "cocycle":
        if len(pts) != 2:
            raise ParseError("cocycle needs two --point arguments")
        y = pts[1]
        results.update(other=y, cocycle=space.cocycle(x, y), in_R=space.in_R(x, y))
    return Report("point", results)


def _witness(config: Config, args) -> Report:
    if args.c is None:
        raise ParseError("witness needs --c num/den")
    space = config.space
    c = parse_rational(args.c)
    x = read_point(space, args.point[0]) if args.point else space.all_ones
    found = autgroup.density_witness(space, c, x, args.j, config.bounds)
    results: dict[str, Any] = {"c": c, "base_point": x}
    if isinstance(found, autgroup.DensityWitness):
        results.update(found=True, j=found.j, k=found.k, m=found.m, value=found.value,
                       interval=[c * found.k * space.s.term(1),
                                 c * found.k * space.s.term(1) + c])
    else:
        results.update(found=False, depths=list(found.depths), bounds=found.bounds)
    return Report("witness", results)


HANDLERS = {"analyze": _analyze, "compare": _compare, "verify": _verify,
            "point": _point, "witness": _witness}


def run_command(config: Config, command: str, args: argparse.Namespace | None = None) -> Report:
    if command not in HANDLERS:
        raise UnknownCommand(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}")
    args = args or build_parser().parse_args([command])
    try:
        return HANDLERS[command](config, args)
    except ParseError:
        raise
    except TafError as exc:
        return Report(command, error=f"{type(exc).__name__}: {exc}")


def load_config(path: str) -> Config:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_config(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="taf", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("query", nargs="?", help="for point: nu, gap, alpha or cocycle")
    parser.add_argument("other", nargs="?", help="for compare: the second config file")
    parser.add_argument("--config", help="JSON config with r, s and options")
    parser.add_argument("--level", type=int)
    parser.add_argument("--c", help="scaling factor num/den for witness")
    parser.add_argument("--j", type=int, help="fixed depth for witness")
    parser.add_argument("--point", action="append", help="point literal (JSON); repeat for cocycle")
    parser.add_argument("--exp", help="exponent vector p:a,... for point alpha")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    logging.basicConfig(format="%(levelname)s: %(message)s", stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_intermixed_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    if args.command == "compare" and args.query and not args.other:
        args.other, args.query = args.query, None
    try:
        if args.command == "point" and args.query not in POINT_QUERIES:
            raise ParseError(f"point query must be one of {', '.join(POINT_QUERIES)}")
        if args.level is not None and args.level < 1:
            raise ParseError("--level must be at least 1")
        if not args.config:
            raise ParseError("--config is required")
        config = load_config(args.config)
        report = run_command(config, args.command, args)
    except (ParseError, InvalidProfile) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(emit_report(report, args.format))
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
