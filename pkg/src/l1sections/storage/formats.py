# src/l1sections/storage/formats.py
"""
Text formats, LF endings, 0-based indices:

GRAPH N n D d          then n lines: the d ascending left neighbours of right vertex j
CHECK k N nnz          then nnz lines `row col sign`, sign in {+1, -1}, sorted by (row, col);
                       each row block is announced by `# <label> rows=[start,stop)`
key=value              analysis / construction reports, REPORT_KEYS first
# s trials successes rate   recovery curves
"""
import logging
import re
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Tuple, Union

import numpy as np

from ..constants import REPORT_KEYS
from ..exceptions import DomainError, ParsingError
from ..expanders.graphs import BipartiteGraph
from ..tanner.check_matrix import RowBlock, SignCheckMatrix
from ..types import CurvePoint

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CURVE_HEADER = "# s trials successes rate"
_BLOCK_LINE = re.compile(r"^# (?P<label>.*) rows=\[(?P<start>\d+),(?P<stop>\d+)\)$")
_HEADER_FIELDS = {"GRAPH": ("N", "n", "D", "d"), "CHECK": ("k", "N", "nnz")}


def _parse_int(token: str, line: int, field: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParsingError(f"expected an integer, got '{token}'", line=line, field=field) from None


def _parse_header(lines: List[str], magic: str) -> Tuple[int, ...]:
    names = _HEADER_FIELDS[magic]
    if not lines:
        raise ParsingError(f"empty file, expected a {magic} header", line=1, field="header")
    tokens = lines[0].split()
    if not tokens or tokens[0] != magic:
        raise ParsingError(f"expected header starting with '{magic}'", line=1, field="magic")
    if len(tokens) != len(names) + 1:
        missing = names[len(tokens) - 1] if len(tokens) - 1 < len(names) else "header"
        raise ParsingError(f"{magic} header needs fields {' '.join(names)}", line=1, field=missing)
    values = tuple(_parse_int(tok, 1, name) for tok, name in zip(tokens[1:], names))
    for value, name in zip(values, names):
        if value < 0:
            raise ParsingError(f"header field {name} must be non-negative", line=1, field=name)
    return values


def _split_lines(text: str) -> List[str]:
    if "\r" in text:
        raise ParsingError("CR line endings are not accepted", line=text[: text.index("\r")].count("\n") + 1,
                           field="line-ending")
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return lines


# GRAPH

def format_graph(G: BipartiteGraph) -> str:
    out = [f"GRAPH {G.N} {G.n} {G.D} {G.d}"]
    out.extend(" ".join(str(int(v)) for v in row) for row in G.adjacency)
    return "\n".join(out) + "\n"


def parse_graph(text: str) -> BipartiteGraph:
    lines = _split_lines(text)
    N, n, D, d = _parse_header(lines, "GRAPH")
    body = lines[1:]
    if len(body) != n:
        raise ParsingError(f"expected {n} neighbourhood lines, found {len(body)}", line=len(lines) + 1, field="n")
    adjacency = np.zeros((n, d), dtype=np.int64)
    for j, raw in enumerate(body):
        line = j + 2
        tokens = raw.split()
        if len(tokens) != d:
            raise ParsingError(f"right vertex {j} lists {len(tokens)} neighbours, expected {d}", line=line, field="d")
        row = [_parse_int(tok, line, "left") for tok in tokens]
        if any(v < 0 or v >= N for v in row):
            raise ParsingError(f"left index outside [0, {N})", line=line, field="left")
        if any(b <= a for a, b in zip(row, row[1:])):
            raise ParsingError("neighbours must be strictly ascending", line=line, field="left")
        adjacency[j] = row
    try:
        return BipartiteGraph(N=N, n=n, D=D, d=d, adjacency=adjacency)
    except DomainError as e:
        raise ParsingError(str(e), line=1, field="D") from e


# CHECK

def format_check(matrix: SignCheckMatrix) -> str:
    out = [f"CHECK {matrix.rows} {matrix.cols} {matrix.nnz}"]
    starts = {block.start: block for block in matrix.blocks}
    previous = -1
    for r, c, s in zip(matrix.row_index.tolist(), matrix.col_index.tolist(), matrix.signs.tolist()):
        if r != previous and r in starts:
            block = starts[r]
            out.append(f"# {block.label} rows=[{block.start},{block.stop})")
        previous = r
        out.append(f"{r} {c} {'+1' if s > 0 else '-1'}")
    return "\n".join(out) + "\n"


def _parse_sign(token: str, line: int) -> int:
    if token in ("+1", "1"):
        return 1
    if token == "-1":
        return -1
    raise ParsingError(f"sign must be +1 or -1, got '{token}'", line=line, field="sign")


def parse_check(text: str) -> SignCheckMatrix:
    lines = _split_lines(text)
    k, N, nnz = _parse_header(lines, "CHECK")
    if N < 1:
        raise ParsingError("N must be positive", line=1, field="N")
    rows: List[int] = []
    cols: List[int] = []
    signs: List[int] = []
    blocks: List[RowBlock] = []
    for i, raw in enumerate(lines[1:], start=2):
        if raw.startswith("#"):
            match = _BLOCK_LINE.match(raw)
            if match is None:
                raise ParsingError("block comment must end with rows=[start,stop)", line=i, field="block")
            blocks.append(RowBlock(int(match["start"]), int(match["stop"]), match["label"]))
            continue
        tokens = raw.split()
        if len(tokens) != 3:
            raise ParsingError(f"expected 'row col sign', got {len(tokens)} fields", line=i, field="entry")
        r = _parse_int(tokens[0], i, "row")
        c = _parse_int(tokens[1], i, "col")
        if not 0 <= r < k:
            raise ParsingError(f"row {r} outside [0, {k})", line=i, field="row")
        if not 0 <= c < N:
            raise ParsingError(f"column {c} outside [0, {N})", line=i, field="col")
        if rows and (r, c) <= (rows[-1], cols[-1]):
            raise ParsingError("entries must be strictly sorted by (row, col)", line=i, field="entry")
        rows.append(r)
        cols.append(c)
        signs.append(_parse_sign(tokens[2], i))
    if len(signs) != nnz:
        raise ParsingError(f"header announces {nnz} entries, found {len(signs)}", line=1, field="nnz")
    try:
        return SignCheckMatrix(k, N, np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
                               np.array(signs, dtype=np.int8), tuple(blocks))
    except DomainError as e:
        raise ParsingError(str(e), line=1, field="k") from e


# reports

def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (tuple, list)):
        return " ; ".join(_format_value(v) for v in value)
    if hasattr(value, "value") and not isinstance(value, (int, np.integer)):
        return str(value.value)
    return str(value)


def format_report(values: Mapping[str, object]) -> str:
    """REPORT_KEYS in their fixed order, then any other keys in insertion order."""
    ordered = [key for key in REPORT_KEYS if key in values]
    ordered += [key for key in values if key not in REPORT_KEYS]
    lines = []
    for key in ordered:
        text = _format_value(values[key])
        if "\n" in text or "=" in key:
            raise DomainError(f"report entry '{key}' cannot be written on one line")
        lines.append(f"{key}={text}")
    return "\n".join(lines) + "\n"


def parse_report(text: str) -> Dict[str, str]:
    report: Dict[str, str] = {}
    for i, raw in enumerate(_split_lines(text), start=1):
        if not raw or raw.startswith("#"):
            continue
        key, sep, value = raw.partition("=")
        if not sep or not key:
            raise ParsingError("expected key=value", line=i, field=key or "key")
        if key in report:
            raise ParsingError(f"duplicate key '{key}'", line=i, field=key)
        report[key] = value
    return report


# curves

def format_curve(points: Iterable[CurvePoint]) -> str:
    lines = [CURVE_HEADER]
    lines.extend(f"{p.s} {p.trials} {p.successes} {p.rate:.6f}" for p in points)
    return "\n".join(lines) + "\n"


def parse_curve(text: str) -> List[CurvePoint]:
    lines = _split_lines(text)
    if not lines or lines[0] != CURVE_HEADER:
        raise ParsingError(f"expected '{CURVE_HEADER}'", line=1, field="header")
    points = []
    for i, raw in enumerate(lines[1:], start=2):
        tokens = raw.split()
        if len(tokens) != 4:
            raise ParsingError("expected 's trials successes rate'", line=i, field="entry")
        s, trials, successes = (_parse_int(t, i, name) for t, name in zip(tokens, ("s", "trials", "successes")))
        if trials < 1 or not 0 <= successes <= trials or s < 0:
            raise ParsingError("inconsistent counts", line=i, field="successes")
        try:
            rate = float(tokens[3])
        except ValueError:
            raise ParsingError(f"rate '{tokens[3]}' is not a number", line=i, field="rate") from None
        if abs(rate - successes / trials) > 5e-7:
            raise ParsingError("rate does not equal successes / trials", line=i, field="rate")
        points.append(CurvePoint(s=s, trials=trials, successes=successes))
    return points


# files

def write_text(path: PathLike, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    logger.debug(f"Wrote {len(text)} bytes to {path}")
    return path


def read_text(path: PathLike) -> str:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8", newline="") as handle:
            return handle.read()
    except FileNotFoundError:
        raise ParsingError(f"file not found: {path}", line=0, field="path") from None
    except UnicodeDecodeError as e:
        raise ParsingError(f"{path} is not UTF-8 text: {e}", line=0, field="encoding") from e


def read_graph(path: PathLike) -> BipartiteGraph:
    return parse_graph(read_text(path))


def read_check(path: PathLike) -> SignCheckMatrix:
    return parse_check(read_text(path))


def read_report(path: PathLike) -> Dict[str, str]:
    return parse_report(read_text(path))


def read_curve(path: PathLike) -> List[CurvePoint]:
    return parse_curve(read_text(path))
