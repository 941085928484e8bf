"""
Command-line front end

    python -m nap "space nat factorial; prob prog(7,0)"
    python -m nap --format=json --file lotteries.nap

Exit status: 0 on success, 1 when a verification or axiom check fails,
2 when a query or engine error stops the run.
"""

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, replace
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, TextIO, Tuple

from . import engine, oracle
from .config import get_settings, load_settings, set_settings
from .errors import NAPError, NotFiniteError, UndeterminedMagnitudeError
from .eventual import DirectedFamily, LimitResult
from .hyperreal import HyperReal, standard_part
from .query import Command, Query, parse

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED_CHECK, EXIT_ERROR = 0, 1, 2


@dataclass(frozen=True)
class ResultRecord:
    command: str
    kind: str
    values: Tuple[str, ...]
    standard: Tuple[str, ...] = ()
    decimals: Tuple[str, ...] = ()
    provenance: str = 'symbolic'
    ok: bool = True

    def to_json(self) -> dict:
        record = asdict(self)
        record['values'] = list(self.values)
        record['standard'] = list(self.standard)
        record['decimals'] = list(self.decimals)
        return record

    def text(self) -> str:
        lines = [f"> {self.command}"]
        if self.kind == 'report':
            lines.extend(f"  {line}" for line in self.values)
            lines.append(f"  {'✅ passed' if self.ok else '❌ failed'} ({self.provenance})")
        else:
            lines.append(f"  {self.kind}: {', '.join(self.values)}")
            if self.standard:
                lines.append(f"  st: {', '.join(self.standard)} ~ {', '.join(self.decimals)}")
        return '\n'.join(lines)


def _shadows(values: Sequence[HyperReal], digits: int) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
    """Standard parts of finite values; nothing when some value is infinite"""
    try:
        parts = sorted({standard_part(v) for v in values})
    except (NotFiniteError, UndeterminedMagnitudeError):
        return (), ()
    return tuple(str(p) for p in parts), tuple(engine.decimal_text(p, digits) for p in parts)


def _value_record(command: Command, value, digits: int) -> ResultRecord:
    if isinstance(value, engine.ProbabilityValue):
        kind, values = value.kind.value, value.values
    elif isinstance(value, LimitResult):
        kind = 'exact' if value.is_determined else 'candidates'
        values = value.candidates
    else:
        fraction = Fraction(value)
        return ResultRecord(command.render(), 'rational', (str(fraction),), (str(fraction),),
                            (engine.decimal_text(fraction, digits),))
    standard, decimals = _shadows(values, digits)
    return ResultRecord(command.render(), kind, tuple(str(v) for v in values), standard, decimals)


def _arch_record(command: Command, value: engine.ArchValue, digits: int) -> ResultRecord:
    texts = tuple(str(v) for v in value.values)
    decimals = tuple(engine.decimal_text(v, digits) for v in value.values)
    return ResultRecord(command.render(), value.kind.value, texts, texts, decimals)


def _verification_indices(command: Command):
    family = command.space.family
    if command.indices is None or family is not DirectedFamily.COIN_CT:
        return command.indices
    return oracle.coin_indices(command.indices, [command.space.adopt(e) for e in command.events])


def _run_command(command: Command, digits: int) -> ResultRecord:
    space = command.space
    events = [space.adopt(e) for e in command.events]
    name = command.name

    if name == 'numerosity':
        return _value_record(command, engine.numerosity(space, events[0]), digits)
    if name == 'prob':
        return _value_record(command, engine.probability(space, events[0]), digits)
    if name == 'cond':
        return _value_record(command, engine.conditional(space, events[0], events[1]), digits)
    if name == 'condfin':
        return _value_record(command, engine.conditional_given_finite(space, events[0], events[1]), digits)
    if name == 'sum':
        return _value_record(command, engine.infinite_sum(space, command.function, events[0]), digits)
    if name == 'st':
        return _arch_record(command, engine.arch_probability(space, events[0]), digits)
    if name == 'density':
        return _value_record(command, engine.asymptotic_density(command.events[0]), digits)
    if name == 'eps':
        return _value_record(command, engine.epsilon0(space), digits)
    if name == 'point':
        return _value_record(command, engine.point_probability(space, command.point), digits)

    if name == 'axioms':
        report = engine.axiom_report(space, events, command.partition or None)
        lines = tuple(f"{c.status} {c.name}: {c.subject}" for c in report.checks)
        return ResultRecord(command.render(), 'report', lines, ok=report.passed)

    # verify
    indices = _verification_indices(command)
    counts = oracle.verify_counts(events[0], space.family, indices, weight=space.weight)
    shares = oracle.verify_conditional(events[0], space.family, indices, weight=space.weight)
    lines = tuple(counts.lines() + shares.lines())
    summary = {key: counts.summary()[key] + shares.summary()[key] for key in counts.summary()}
    lines += (f"summary {json.dumps(summary, sort_keys=True)}",)
    return ResultRecord(command.render(), 'report', lines, provenance='oracle-verified',
                        ok=counts.passed and shares.passed)


def iter_results(query: Query, digits: int = 6) -> Iterator[ResultRecord]:
    for command in query.commands:
        logger.debug("running %s on %s", command.render(), command.space)
        yield _run_command(command, digits)


def execute(query: Query, digits: int = 6) -> List[ResultRecord]:
    return list(iter_results(query, digits))


def _write(record: ResultRecord, fmt: str, out: TextIO):
    if fmt == 'json':
        out.write(json.dumps(record.to_json(), sort_keys=True, ensure_ascii=False) + '\n')
    else:
        out.write(record.text() + '\n')


def run_program(text: str, fmt: str = 'text', digits: int = 6, out: Optional[TextIO] = None) -> int:
    """Parse and execute a program, writing each result as it is produced"""
    out = out or sys.stdout
    status = EXIT_OK
    try:
        for record in iter_results(parse(text), digits):
            _write(record, fmt, out)
            if not record.ok:
                status = EXIT_FAILED_CHECK
    except NAPError as exc:
        out.write(f"❌ {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR
    return status


def _positive_int(value: str) -> int:
    try:
        number = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected integer, got: {value!r}") from exc
    if number <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got: {number}")
    return number


def _digits(value: str) -> int:
    try:
        number = int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected integer, got: {value!r}") from exc
    if number < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got: {number}")
    return number


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog='nap',
        description="Exact non-Archimedean probabilities for fair and weighted lotteries",
        formatter_class=argparse.RawTextHelpFormatter,
    )
    p.add_argument('program', nargs='?',
                   help="query program, e.g. 'space nat factorial; prob prog(2,0)'\n"
                        "(read from --file or standard input when omitted)")
    p.add_argument('-f', '--file', help="read the program from a file")
    p.add_argument('--format', choices=('text', 'json'), default='text',
                   help="human text (default) or JSON lines")
    p.add_argument('--digits', type=_digits, default=6,
                   help="decimal digits of the standard-part shadows (default 6)")
    p.add_argument('--max-m', type=_positive_int, help="largest factorial index the oracle enumerates")
    p.add_argument('--max-n', type=_positive_int, help="largest rational/real grid size the oracle enumerates")
    p.add_argument('--max-N', dest='max_N', type=_positive_int, help="largest coin prefix length")
    p.add_argument('--log-level', help="logging level (default from NAP_LOG_LEVEL or WARNING)")
    return p


def _read_program(args: argparse.Namespace) -> str:
    if args.program is not None:
        return args.program
    if args.file:
        with open(args.file, encoding='utf-8') as handle:
            return handle.read()
    return sys.stdin.read()


def run(args: argparse.Namespace) -> int:
    settings = load_settings()
    caps = settings.caps.override(max_m=args.max_m, max_n=args.max_n, max_N=args.max_N)
    level = (args.log_level or settings.log_level).upper()
    set_settings(replace(settings, caps=caps, log_level=level))
    logging.basicConfig(level=getattr(logging, level, logging.WARNING),
                        format='%(levelname)s %(name)s: %(message)s')
    logger.debug("oracle caps: %s", get_settings().caps)

    try:
        text = _read_program(args)
    except OSError as exc:
        print(f"❌ cannot read program: {exc}")
        return EXIT_ERROR
    return run_program(text, args.format, args.digits)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return run(args)


if __name__ == '__main__':
    sys.exit(main())
