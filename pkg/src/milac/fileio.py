"""Plain-text matrix and vector files.

Matrix file: a header line "rows cols", then one line per row holding
2*cols whitespace-separated decimal numbers (real and imaginary part of each
entry, in order). Vector file: a header "len", then one "re im" line per
entry. Lines starting with '#' are comments; blank lines are ignored.
Writers emit shortest round-trip decimals, so parse(write(x)) == x bit-exactly.
"""

from __future__ import annotations

import os

import numpy as np

from .numerics import ComplexMatrix, ComplexVector

MAX_ENTRIES = 4_000_000


class ParseError(Exception):
    """Malformed input file; carries the file path and 1-based line number."""

    def __init__(self, path: str, line: int | None, message: str):
        self.path = path
        self.line = line
        where = f"{path}:{line}" if line is not None else path
        super().__init__(f"{where}: {message}")


def _content_lines(path: str) -> list[tuple[int, str]]:
    try:
        with open(path, "r", encoding="utf-8", errors="strict") as fh:
            raw = fh.readlines()
    except OSError as exc:
        raise ParseError(path, None, f"cannot read file ({exc.strerror})") from exc
    except UnicodeDecodeError as exc:
        raise ParseError(path, None, f"not a text file ({exc.reason})") from exc
    lines = []
    for idx, line in enumerate(raw, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        lines.append((idx, stripped))
    return lines


def _parse_header(path: str, lines: list[tuple[int, str]], want: int) -> tuple[int, list[int]]:
    if not lines:
        raise ParseError(path, None, "empty file: missing header line")
    lineno, text = lines[0]
    tokens = text.split()
    if len(tokens) != want:
        raise ParseError(path, lineno, f"header must hold {want} integer(s), found {len(tokens)} token(s)")
    dims = []
    for tok in tokens:
        if not tok.isdigit() or int(tok) < 1:
            raise ParseError(path, lineno, f"header token '{tok}' is not a positive integer")
        dims.append(int(tok))
    return lineno, dims


def _parse_pair_tokens(path: str, lineno: int, tokens: list[str], count: int) -> np.ndarray:
    if len(tokens) != 2 * count:
        raise ParseError(
            path, lineno, f"expected {2 * count} numbers ({count} re/im pairs), found {len(tokens)}"
        )
    values = np.empty(count, dtype=np.complex128)
    for k in range(count):
        try:
            re = float(tokens[2 * k])
            im = float(tokens[2 * k + 1])
        except ValueError:
            bad = tokens[2 * k] if _is_bad_float(tokens[2 * k]) else tokens[2 * k + 1]
            raise ParseError(path, lineno, f"token '{bad}' (entry {k + 1}) is not a number") from None
        if not (np.isfinite(re) and np.isfinite(im)):
            raise ParseError(path, lineno, f"entry {k + 1} is not finite")
        values[k] = complex(re, im)
    return values


def _is_bad_float(tok: str) -> bool:
    try:
        float(tok)
        return False
    except ValueError:
        return True


def parse_matrix(path: str) -> ComplexMatrix:
    lines = _content_lines(path)
    header_line, (rows, cols) = _parse_header(path, lines, 2)
    if rows * cols > MAX_ENTRIES:
        raise ParseError(path, header_line, f"dimension overflow: {rows}x{cols} exceeds {MAX_ENTRIES} entries")
    data_lines = lines[1:]
    if len(data_lines) != rows:
        raise ParseError(
            path,
            data_lines[rows][0] if len(data_lines) > rows else None,
            f"expected {rows} data line(s), found {len(data_lines)}",
        )
    out = np.empty((rows, cols), dtype=np.complex128)
    for r, (lineno, text) in enumerate(data_lines):
        out[r] = _parse_pair_tokens(path, lineno, text.split(), cols)
    return ComplexMatrix(out)


def parse_vector(path: str) -> ComplexVector:
    lines = _content_lines(path)
    header_line, (length,) = _parse_header(path, lines, 1)
    if length > MAX_ENTRIES:
        raise ParseError(path, header_line, f"dimension overflow: {length} exceeds {MAX_ENTRIES} entries")
    data_lines = lines[1:]
    if len(data_lines) != length:
        raise ParseError(
            path,
            data_lines[length][0] if len(data_lines) > length else None,
            f"expected {length} entry line(s), found {len(data_lines)}",
        )
    out = np.empty(length, dtype=np.complex128)
    for k, (lineno, text) in enumerate(data_lines):
        out[k] = _parse_pair_tokens(path, lineno, text.split(), 1)[0]
    return ComplexVector(out)


def _fmt(value: float) -> str:
    return repr(float(value))


def format_matrix(m: ComplexMatrix) -> str:
    rows = [f"{m.rows} {m.cols}"]
    for r in range(m.rows):
        rows.append(" ".join(f"{_fmt(z.real)} {_fmt(z.imag)}" for z in m.data[r]))
    return "\n".join(rows) + "\n"


def format_vector(v: ComplexVector) -> str:
    rows = [str(v.len)]
    rows.extend(f"{_fmt(z.real)} {_fmt(z.imag)}" for z in v.data)
    return "\n".join(rows) + "\n"


def write_matrix(path: str, m: ComplexMatrix) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(format_matrix(m))


def write_vector(path: str, v: ComplexVector) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(format_vector(v))


def list_observation_files(directory: str) -> list[str]:
    """Observation files of a trajectory directory, in lexicographic order."""
    try:
        names = sorted(os.listdir(directory))
    except OSError as exc:
        raise ParseError(directory, None, f"cannot list directory ({exc.strerror})") from exc
    return [os.path.join(directory, n) for n in names if n.endswith(".cvec")]
