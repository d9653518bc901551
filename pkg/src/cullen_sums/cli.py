"""Command-line front end: ``cullen-sums {bound,reduce,search,verify-counterexample}``.

Exit codes: 0 ok, 1 bad input, 2 hypotheses fail, 3 precision exhausted,
4 lattice reduction hit its scale cap, 5 expectation mismatch.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .baker import MODES, REPLAY, ProblemInstance, prebounds, general_bound_chain, fibonacci_bound_chain
from .errors import HypothesisFailure, MissingAValues, PrecisionExhausted, ScaleCapExceeded
from .intervals import DEFAULT_PRECISION, MAX_PRECISION
from .lattice import fibonacci_reduction_campaign
from .polynomials import IntegerPolynomial
from .recurrence import RecurrenceSpec, load_spec
from .search import SolutionTuple, search_fibonacci, search_general, verify_counterexample

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESES, EXIT_PRECISION, EXIT_REDUCTION, EXIT_MISMATCH = range(6)
MIN_PRECISION = 64


class InputError(ValueError):
    """Malformed command-line or file input (exit code 1)."""


@dataclass
class RunConfig:
    command: str
    target: str | None = None
    spec_path: str | None = None
    mode: str = REPLAY
    precision: int = DEFAULT_PRECISION
    ell_max: int | None = None
    n1_max: int | None = None
    k_max: int = 10**4
    x: int = 2
    k: int = 1
    q: str = "+1"
    stage: int = 1
    gap: int | None = None
    expect_path: str | None = None
    output: str | None = None
    as_json: bool = False
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not MIN_PRECISION <= self.precision <= MAX_PRECISION:
            raise InputError(f"field 'precision' must lie in [{MIN_PRECISION}, {MAX_PRECISION}], got {self.precision}")
        if self.workers < 1:
            raise InputError(f"field 'workers' must be at least 1, got {self.workers}")
        for name in ("ell_max", "n1_max", "gap"):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise InputError(f"field '{name}' must be non-negative, got {value}")
        if self.k_max < 0:
            raise InputError(f"field 'k_max' must be non-negative, got {self.k_max}")


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*(\*?\s*x(?:\s*\^\s*(\d+))?)?")


def parse_shift(text: str) -> IntegerPolynomial:
    """Parse ``Q``: ``"+c"``/``"-c"``, an ascending coefficient list, or ``"x+1"``-style text."""
    raw = text.strip()
    if not raw:
        raise InputError("field 'q' is empty")
    if raw.startswith("["):
        try:
            coeffs = json.loads(raw)
            return IntegerPolynomial(tuple(int(str(c)) for c in coeffs))
        except (ValueError, TypeError) as exc:
            raise InputError(f"field 'q' is not a list of integers: {exc}") from None
    if re.search(r"[\dx]\s+[\dx]", raw):
        raise InputError(f"field 'q' has terms without an operator between them: {raw!r}")
    body = re.sub(r"\s+", "", raw)
    if "," in body:
        try:
            return IntegerPolynomial(tuple(int(c) for c in body.split(",")))
        except ValueError:
            raise InputError(f"field 'q' is not a list of integers: {raw!r}") from None
    coeffs: dict[int, int] = {}
    pos = 0
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise InputError(f"field 'q' has an unparsable term at {body[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        if pos > 0 and not m.group(1):
            raise InputError(f"field 'q' is missing an operator before {body[pos:]!r}")
        coefficient = int(m.group(2)) if m.group(2) else 1
        power = 0 if not m.group(3) else int(m.group(4) or 1)
        coeffs[power] = coeffs.get(power, 0) + sign * coefficient
        pos = m.end()
    top = max(coeffs)
    return IntegerPolynomial(tuple(coeffs.get(i, 0) for i in range(top + 1)))


def _load_spec(path: str | None) -> RecurrenceSpec:
    if path is None:
        raise InputError("field 'spec' is required for general instances")
    try:
        return load_spec(path)
    except FileNotFoundError:
        raise InputError(f"field 'spec': no such file {path}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"field 'spec': {path} is not valid JSON ({exc})") from None
    except ValueError as exc:
        raise InputError(f"field 'spec': {exc}") from None


def _instance(config: RunConfig) -> ProblemInstance:
    spec = _load_spec(config.spec_path)
    try:
        return ProblemInstance(spec, parse_shift(config.q), config.x, config.k)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"instance: {exc}") from None


def _emit(config: RunConfig, payload: dict, table: str) -> None:
    text = json.dumps(payload, indent=2)
    if config.output:
        Path(config.output).write_text(text + "\n", encoding="utf-8")
    print(text if config.as_json else table)


# -- commands --------------------------------------------------------------------

def cmd_bound(config: RunConfig) -> int:
    if config.target == "fib":
        ledger = fibonacci_bound_chain(config.mode, config.precision)
    else:
        instance = _instance(config)
        if config.mode == REPLAY:
            raise MissingAValues("replay mode needs hand-picked A-values, which exist only for the fib preset")
        ledger = general_bound_chain(instance, config.precision)
    _emit(config, ledger.to_json(), ledger.table())
    return EXIT_OK


def cmd_reduce(config: RunConfig) -> int:
    if config.stage == 2 and config.gap is None:
        raise InputError("field 'gap' is required for stage 2 (run stage 1 first)")
    bounds = prebounds(fibonacci_bound_chain(config.mode, config.precision))
    if config.n1_max is not None:
        bounds["n1_max"] = config.n1_max
    if config.ell_max is not None:
        bounds["ell_max"] = config.ell_max
    started = time.perf_counter()
    report = fibonacci_reduction_campaign(bounds, config.stage, config.gap, workers=config.workers)
    payload = report.to_json()
    payload["seconds"] = f"{time.perf_counter() - started:.3f}"
    _emit(config, payload, report.summary())
    return EXIT_OK


def _read_expected(path: str) -> list[SolutionTuple]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        items = data["solutions"] if isinstance(data, dict) else data
        x = int(data.get("x", 2)) if isinstance(data, dict) else 2
        return sorted({SolutionTuple(tuple(int(v) for v in t[:-1]), int(t[-1]), x) for t in items}, key=lambda s: s.key)
    except FileNotFoundError:
        raise InputError(f"field 'expect': no such file {path}") from None
    except (ValueError, KeyError, TypeError, IndexError) as exc:
        raise InputError(f"field 'expect': malformed solution list ({exc})") from None


def cmd_search(config: RunConfig) -> int:
    ell_max = 135 if config.ell_max is None else config.ell_max
    n1_max = 200 if config.n1_max is None else config.n1_max
    if config.target == "fib":
        solutions = search_fibonacci(ell_max, n1_max, config.workers)
        x = 2
    else:
        instance = _instance(config)
        solutions = search_general(instance, n1_max, ell_max, config.workers)
        x = instance.x
    payload = {
        "box": {"ell_max": str(ell_max), "n1_max": str(n1_max)},
        "x": str(x),
        "solutions": [s.to_json() for s in solutions],
        "note": "complete within the searched box only",
    }
    table = "\n".join(
        [f"searched ell <= {ell_max}, n_1 <= {n1_max}: {len(solutions)} solution(s)  (n_1, ..., n_k, ell)"]
        + [f"  {tuple(s.as_list())}" for s in solutions]
    )
    _emit(config, payload, table)
    if config.expect_path is not None:
        expected = _read_expected(config.expect_path)
        if expected != solutions:
            missing = [s.as_list() for s in expected if s not in solutions]
            extra = [s.as_list() for s in solutions if s not in expected]
            print(f"expectation mismatch: missing {missing}, unexpected {extra}", file=sys.stderr)
            return EXIT_MISMATCH
    return EXIT_OK


def cmd_verify_counterexample(config: RunConfig) -> int:
    spec = _load_spec(config.spec_path) if config.spec_path else None
    cert = verify_counterexample(config.k_max, spec) if spec else verify_counterexample(config.k_max)
    payload = cert.to_json()
    lines = [f"G_(n+6) = G_n for n = 0, 1, 2: {cert.periodic}"]
    lines += [f"  G_{c['n'] + 6} = {c['G_n_plus_6']}, G_{c['n']} = {c['G_n']}" for c in cert.base_period_checks]
    lines.append(f"dominant coefficient exactly 0: {cert.dominant_coefficient_zero}  ({cert.coefficient_witness})")
    if cert.factorization:
        lines.append(f"characteristic polynomial = ({cert.factorization[0]})({cert.factorization[1]})")
    lines.append(f"G_(6k+1) = G_(6k+2) = 1 for k <= {cert.verified_k_range}: {not cert.family_failures}")
    lines.append(f"certificate complete: {cert.complete}")
    _emit(config, payload, "\n".join(lines))
    return EXIT_OK if cert.complete else EXIT_MISMATCH


COMMANDS = {
    "bound": cmd_bound,
    "reduce": cmd_reduce,
    "search": cmd_search,
    "verify-counterexample": cmd_verify_counterexample,
}


# -- argument parsing ------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped onto the input exit code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, default=DEFAULT_PRECISION, help="working precision in bits")
    common.add_argument("--output", "-o", help="write the JSON report here")
    common.add_argument("--json", dest="as_json", action="store_true", help="print JSON instead of a table")
    common.add_argument("--workers", type=int, default=1)

    instance = argparse.ArgumentParser(add_help=False)
    instance.add_argument("--spec", dest="spec_path", help="recurrence spec JSON")
    instance.add_argument("--x", type=int, default=2)
    instance.add_argument("--k", type=int, default=1, help="number of recurrence terms in the sum")
    instance.add_argument("--q", default="+1", help='shift Q(x): "+c", "-c", "[c0, c1, ...]" or "x+1"')

    parser = _Parser(prog="cullen-sums", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common, instance], help="effective upper bounds (ledger)")
    p.add_argument("target", choices=["fib", "general"])
    p.add_argument("--mode", choices=MODES, default=REPLAY)

    p = sub.add_parser("reduce", parents=[common], help="lattice reduction of the fib bounds")
    p.add_argument("target", choices=["fib"])
    p.add_argument("--stage", type=int, choices=[1, 2], default=1)
    p.add_argument("--gap", type=int, help="stage-1 bound on n_1 - n_2 (required for stage 2)")
    p.add_argument("--mode", choices=MODES, default=REPLAY, help="which chain supplies the prebounds")
    p.add_argument("--n1-max", type=int, help="override the prebound on n_1")
    p.add_argument("--ell-max", type=int, help="override the prebound on ell")

    p = sub.add_parser("search", parents=[common, instance], help="exhaustive search in a box")
    p.add_argument("target", choices=["fib", "general"])
    p.add_argument("--ell-max", type=int)
    p.add_argument("--n1-max", type=int)
    p.add_argument("--expect", dest="expect_path", help="JSON list of expected tuples; mismatch exits 5")

    p = sub.add_parser("verify-counterexample", parents=[common], help="certify the order-3 counterexample")
    p.add_argument("--k-max", type=int, default=10**4)
    p.add_argument("--spec", dest="spec_path", help="alternative recurrence spec JSON")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {k: v for k, v in vars(args).items() if k in RunConfig.__dataclass_fields__ and v is not None}
    return RunConfig(**values)


def run(config: RunConfig) -> int:
    try:
        return COMMANDS[config.command](config)
    except (InputError, MissingAValues) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except HypothesisFailure as exc:
        report = exc.report.to_json() if exc.report is not None else None
        print(f"hypotheses fail: {exc}", file=sys.stderr)
        print(json.dumps({"hypotheses": report}, indent=2))
        return EXIT_HYPOTHESES
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except ScaleCapExceeded as exc:
        print(f"reduction failed: {exc}", file=sys.stderr)
        if exc.report is not None:
            payload = exc.report.to_json()
            if config.output:
                Path(config.output).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
            print(json.dumps(payload, indent=2) if config.as_json else exc.report.summary())
        return EXIT_REDUCTION


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
