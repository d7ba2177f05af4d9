"""
Parser for the .cvq circuit language

    modes 2
    Squeezed(2) | q[0]
    Rgate(-pi/2) | q[0]
    BSgate(pi/4, 0) | q[0], q[1]
    MeasureX | q[0]       # parentheses are optional without arguments

Arguments are a decimal literal or `pi`, with an optional leading minus and an
optional `/ decimal` divisor. Every diagnostic carries a 1-based line and column.
"""
import logging
import math
import re
from pathlib import Path
from typing import List, Tuple

from scripts.circuit.ir import DISPLACED_SQUEEZED, GATES, Circuit, GateOp, GateSpec, make_op, validate_ops
from scripts.utils.errors import ConfigurationError, ContractError, ParseError

logger = logging.getLogger(__name__)

_DECIMAL = r'(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?'
_EXPRESSION = re.compile(
    rf'^(?P<neg>-)?\s*(?P<value>pi|{_DECIMAL})\s*(?:/\s*(?P<divisor>{_DECIMAL}))?$'
)
_HEADER = re.compile(r'^modes\s+(?P<count>\S+)\s*$')
_STATEMENT = re.compile(
    r'^(?P<name>[A-Za-z_]\w*)\s*(?:\((?P<args>[^()]*)\))?\s*\|\s*(?P<targets>.*?)\s*$'
)
_TARGET = re.compile(r'^q\[(?P<index>\d+)\]$')


def _strip_comment(line: str) -> str:
    cut = line.find('#')
    return line if cut < 0 else line[:cut]


def parse_expression(text: str, line: int = 1, column: int = 1) -> float:
    stripped = text.strip()
    match = _EXPRESSION.match(stripped)
    if match is None:
        raise ParseError(f"malformed expression {stripped!r}", line, column)
    value = math.pi if match['value'] == 'pi' else float(match['value'])
    if match['divisor'] is not None:
        divisor = float(match['divisor'])
        if divisor == 0.0:
            raise ParseError("division by zero", line, column)
        value /= divisor
    return -value if match['neg'] else value


def _split_fields(text: str, start_column: int) -> List[Tuple[str, int]]:
    """Comma-separated fields with the column each one starts at"""
    fields = []
    column = start_column
    for raw in text.split(','):
        offset = len(raw) - len(raw.lstrip())
        fields.append((raw.strip(), column + offset))
        column += len(raw) + 1
    return fields


def _parse_targets(text: str, start_column: int, line: int) -> Tuple[int, ...]:
    body = text
    column = start_column
    if body.startswith('(') and body.endswith(')'):
        body = body[1:-1]
        column += 1
    targets = []
    for field, col in _split_fields(body, column):
        match = _TARGET.match(field)
        if match is None:
            raise ParseError(f"expected a target like q[0], got {field!r}", line, col)
        targets.append(int(match['index']))
    return tuple(targets)


def _parse_args(spec: GateSpec, args_text: str, start_column: int, line: int, name_column: int) -> Tuple[float, ...]:
    fields = _split_fields(args_text, start_column) if args_text.strip() else []
    n = len(fields)
    if not spec.min_params <= n <= len(spec.params):
        if spec.min_params == len(spec.params):
            expected = f"{len(spec.params)}"
        else:
            expected = f"{spec.min_params} to {len(spec.params)}"
        raise ParseError(f"{spec.name} takes {expected} argument(s), got {n}", line, name_column)
    return tuple(parse_expression(text, line, col) for text, col in fields)


def _parse_statement(text: str, line: int, indent: int) -> List[Tuple[GateOp, int]]:
    match = _STATEMENT.match(text)
    if match is None:
        raise ParseError("expected a statement `Name(args) | q[i]`", line, indent + 1)
    name = match['name']
    name_column = indent + match.start('name') + 1
    spec = DISPLACED_SQUEEZED if name == DISPLACED_SQUEEZED.name else GATES.get(name)
    if spec is None:
        raise ParseError(f"unknown gate {name!r}", line, name_column)

    args_text = match['args'] or ''
    args_column = indent + (match.start('args') if match['args'] is not None else match.end('name')) + 1
    params = _parse_args(spec, args_text, args_column, line, name_column)
    targets_column = indent + match.start('targets') + 1
    targets = _parse_targets(match['targets'], targets_column, line)
    if len(targets) != spec.targets:
        raise ParseError(f"{name} acts on {spec.targets} mode(s), got {len(targets)}", line, targets_column)

    if spec is DISPLACED_SQUEEZED:
        a, phi_a, r, phi_r = params
        return [(make_op('Dgate', a, phi_a, targets=targets), name_column),
                (make_op('Sgate', r, phi_r, targets=targets), name_column)]
    try:
        return [(make_op(name, *params, targets=targets), name_column)]
    except ContractError as exc:
        raise ParseError(str(exc), line, name_column) from exc


def parse(source: str) -> Circuit:
    """Parse .cvq text into a Circuit"""
    mode_count = None
    ops: List[GateOp] = []
    positions: List[Tuple[int, int]] = []

    for line_no, raw in enumerate(source.splitlines(), start=1):
        text = _strip_comment(raw).rstrip()
        if not text.strip():
            continue
        indent = len(text) - len(text.lstrip())
        text = text.strip()

        header = _HEADER.match(text)
        if header is not None:
            if mode_count is not None:
                raise ParseError("duplicate `modes` header", line_no, indent + 1)
            count_column = indent + header.start('count') + 1
            if not header['count'].isdigit() or int(header['count']) < 1:
                raise ParseError(f"mode count must be a positive integer, got {header['count']!r}",
                                 line_no, count_column)
            mode_count = int(header['count'])
            continue
        parsed = _parse_statement(text, line_no, indent)
        if mode_count is None:
            raise ParseError("expected `modes N` before the first statement", line_no, indent + 1)
        for op, column in parsed:
            ops.append(op)
            positions.append((line_no, column))

    if mode_count is None:
        raise ParseError("missing `modes N` header", 1, 1)

    for index, problem in validate_ops(mode_count, tuple(ops)):
        line_no, column = positions[index]
        raise ParseError(problem, line_no, column)

    logger.debug("parsed %d ops on %d mode(s)", len(ops), mode_count)
    return Circuit(mode_count, tuple(ops))


def parse_file(path) -> Circuit:
    """Parse a listing from disk; unreadable files are configuration errors, undecodable ones parse errors"""
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise ConfigurationError(f"cannot read circuit file {path}: {exc.strerror or exc}") from exc
    try:
        text = data.decode('utf-8')
    except UnicodeDecodeError as exc:
        head = data[:exc.start]
        line = head.count(b'\n') + 1
        column = exc.start - (head.rfind(b'\n') + 1) + 1
        raise ParseError(f"circuit file is not UTF-8 text ({exc.reason})", line, column) from exc
    return parse(text)
