"""Plain-text complex matrix files.

Layout::

    # optional comments, "# key: value" lines are kept as metadata
    qmx 1 <rows> <cols>
    re im re im ...     (one matrix row per line, row-major)

Numbers are written with 17 significant digits, which round-trips every
finite double exactly.
"""

from pathlib import Path

import numpy as np

from .errors import ParseError

MAGIC = "qmx"
VERSION = 1


def _num(x: float) -> str:
    return "%.17g" % x


def emit(M, meta: dict | None = None) -> str:
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise ValueError("only 2-d arrays can be written")
    lines = [f"# {k}: {v}" for k, v in (meta or {}).items()]
    rows, cols = M.shape
    lines.append(f"{MAGIC} {VERSION} {rows} {cols}")
    for row in M:
        lines.append(" ".join(f"{_num(z.real)} {_num(z.imag)}" for z in row))
    return "\n".join(lines) + "\n"


def parse_with_meta(text: str) -> tuple[np.ndarray, dict]:
    meta: dict = {}
    tokens: list[str] = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line, _, comment = raw.partition("#")
        if comment and not line.strip() and ":" in comment:
            key, _, value = comment.partition(":")
            meta[key.strip()] = value.strip()
        line = line.strip()
        if not line:
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 4 or parts[0] != MAGIC:
                raise ParseError(f"line {lineno}: expected 'qmx 1 <rows> <cols>'")
            try:
                version, rows, cols = (int(p) for p in parts[1:])
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer header field") from None
            if version != VERSION:
                raise ParseError(f"unsupported qmx version {version}")
            if rows < 0 or cols < 0:
                raise ParseError("negative matrix size")
            header = (rows, cols)
            continue
        tokens.extend(line.split())
    if header is None:
        raise ParseError("missing qmx header")
    rows, cols = header
    if len(tokens) != 2 * rows * cols:
        raise ParseError(f"expected {2 * rows * cols} numbers, found {len(tokens)}")
    try:
        vals = np.array([float(t) for t in tokens], dtype=float)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    # assign parts separately: re + 1j * im would turn -0.0 into 0.0
    M = np.empty(rows * cols, dtype=complex)
    M.real, M.imag = vals[0::2], vals[1::2]
    M = M.reshape(rows, cols)
    return M, meta


def parse(text: str) -> np.ndarray:
    return parse_with_meta(text)[0]


def read(path) -> tuple[np.ndarray, dict]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_with_meta(text)


def write(path, M, meta: dict | None = None) -> None:
    Path(path).write_text(emit(M, meta))
