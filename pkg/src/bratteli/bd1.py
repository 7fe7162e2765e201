"""BD1: a line-based text format for labelled leveled diagrams.

Grammar (ASCII; '#' comments and blank lines are ignored everywhere):

    BD1
    levels N
    level n k          # for each n in 1..N, then one line of k labels
    <k positive integers>
    matrix n           # for each n in 1..N-1
    <k_n lines of k_{n+1} nonnegative integers>
    mark n i           # zero or more; vertex i of level n is marked
    end

The writer emits the canonical form: LF line endings, single spaces, no
trailing whitespace, marks sorted, one trailing newline.  Parsing the
canonical form reproduces the diagram exactly, and writing a parsed
canonical document reproduces its bytes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagram import BratteliDiagram, InvalidDiagramError, VertexId, validate


class BD1ParseError(Exception):
    """Parse failure with 1-based line and column of the offending token."""

    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
        self.message = message


@dataclass(frozen=True)
class _Line:
    number: int
    tokens: tuple[tuple[str, int], ...]  # (token, 1-based column)


def _logical_lines(text: str) -> list[_Line]:
    lines: list[_Line] = []
    for number, raw in enumerate(text.split("\n"), start=1):
        raw = raw.rstrip("\r")
        if "\t" in raw:
            raise BD1ParseError(number, raw.index("\t") + 1, "tab characters are not allowed")
        tokens: list[tuple[str, int]] = []
        col = 1
        for part in raw.split(" "):
            if part.startswith("#"):
                break
            if part:
                tokens.append((part, col))
            col += len(part) + 1
        if tokens:
            lines.append(_Line(number, tuple(tokens)))
    return lines


class _Cursor:
    def __init__(self, lines: list[_Line]):
        self.lines = lines
        self.pos = 0
        self.last_line = lines[-1].number if lines else 1

    def take(self, expected: str) -> _Line:
        if self.pos >= len(self.lines):
            raise BD1ParseError(self.last_line, 1, f"unexpected end of input, expected {expected}")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def done(self) -> bool:
        return self.pos >= len(self.lines)


def _int_token(line: _Line, idx: int, what: str, minimum: int | None = None) -> int:
    if idx >= len(line.tokens):
        last_tok, last_col = line.tokens[-1]
        raise BD1ParseError(line.number, last_col + len(last_tok), f"missing {what}")
    tok, col = line.tokens[idx]
    try:
        value = int(tok)
    except ValueError:
        raise BD1ParseError(line.number, col, f"expected integer for {what}, got '{tok}'") from None
    if minimum is not None and value < minimum:
        if what == "label":
            raise BD1ParseError(line.number, col, "label must be positive")
        raise BD1ParseError(line.number, col, f"{what} must be at least {minimum}, got {value}")
    return value


def _expect_width(line: _Line, width: int, what: str) -> None:
    if len(line.tokens) > width:
        tok, col = line.tokens[width]
        raise BD1ParseError(line.number, col, f"expected {width} {what} on this line, got more")
    if len(line.tokens) < width:
        last_tok, last_col = line.tokens[-1]
        raise BD1ParseError(
            line.number,
            last_col + len(last_tok),
            f"expected {width} {what} on this line, got {len(line.tokens)}",
        )


def parse_bd1(text: str) -> BratteliDiagram:
    """Parse a BD1 document; diagnostics carry exact line and column."""
    cur = _Cursor(_logical_lines(text))

    line = cur.take("magic 'BD1'")
    tok, col = line.tokens[0]
    if tok != "BD1" or len(line.tokens) != 1:
        raise BD1ParseError(line.number, col, f"expected magic 'BD1', got '{tok}'")

    line = cur.take("'levels N'")
    tok, col = line.tokens[0]
    if tok != "levels":
        raise BD1ParseError(line.number, col, f"expected 'levels', got '{tok}'")
    num_levels = _int_token(line, 1, "level count", minimum=1)
    _expect_width(line, 2, "tokens")

    labels: list[tuple[int, ...]] = []
    for n in range(1, num_levels + 1):
        line = cur.take(f"'level {n} k'")
        tok, col = line.tokens[0]
        if tok != "level":
            raise BD1ParseError(line.number, col, f"expected 'level', got '{tok}'")
        got_n = _int_token(line, 1, "level number")
        if got_n != n:
            if got_n < n:
                raise BD1ParseError(line.number, line.tokens[1][1], f"duplicate section 'level {got_n}'")
            raise BD1ParseError(line.number, line.tokens[1][1], f"expected level {n}, got {got_n}")
        width = _int_token(line, 2, "level size", minimum=1)
        _expect_width(line, 3, "tokens")
        row_line = cur.take(f"{width} labels for level {n}")
        if row_line.tokens[0][0] in ("level", "matrix", "mark", "end"):
            raise BD1ParseError(
                row_line.number, row_line.tokens[0][1], f"expected {width} labels for level {n}"
            )
        _expect_width(row_line, width, "labels")
        labels.append(tuple(_int_token(row_line, i, "label", minimum=1) for i in range(width)))

    adjacency: list[tuple[tuple[int, ...], ...]] = []
    for n in range(1, num_levels):
        line = cur.take(f"'matrix {n}'")
        tok, col = line.tokens[0]
        if tok != "matrix":
            raise BD1ParseError(line.number, col, f"expected 'matrix', got '{tok}'")
        got_n = _int_token(line, 1, "matrix number")
        if got_n != n:
            if got_n < n:
                raise BD1ParseError(line.number, line.tokens[1][1], f"duplicate section 'matrix {got_n}'")
            raise BD1ParseError(line.number, line.tokens[1][1], f"expected matrix {n}, got {got_n}")
        _expect_width(line, 2, "tokens")
        rows: list[tuple[int, ...]] = []
        for _ in range(len(labels[n - 1])):
            row_line = cur.take(f"row of matrix {n}")
            if row_line.tokens[0][0] in ("level", "matrix", "mark", "end"):
                raise BD1ParseError(
                    row_line.number,
                    row_line.tokens[0][1],
                    f"expected {len(labels[n - 1])} rows for matrix {n}",
                )
            _expect_width(row_line, len(labels[n]), "entries")
            rows.append(
                tuple(
                    _int_token(row_line, i, "multiplicity", minimum=0)
                    for i in range(len(labels[n]))
                )
            )
        adjacency.append(tuple(rows))

    marks: set[VertexId] = set()
    while True:
        line = cur.take("'mark n i' or 'end'")
        tok, col = line.tokens[0]
        if tok == "end":
            _expect_width(line, 1, "tokens")
            break
        if tok != "mark":
            raise BD1ParseError(line.number, col, f"expected 'mark' or 'end', got '{tok}'")
        level = _int_token(line, 1, "mark level")
        index = _int_token(line, 2, "mark index")
        _expect_width(line, 3, "tokens")
        if not (1 <= level <= num_levels) or not (0 <= index < len(labels[level - 1])):
            raise BD1ParseError(line.number, line.tokens[1][1], "mark out of range")
        v = VertexId(level, index)
        if v in marks:
            raise BD1ParseError(line.number, line.tokens[1][1], f"duplicate mark {v}")
        marks.add(v)

    if not cur.done():
        line = cur.take("nothing")
        raise BD1ParseError(line.number, line.tokens[0][1], "unexpected content after 'end'")

    return BratteliDiagram(
        labels=tuple(labels), adjacency=tuple(adjacency), marks=frozenset(marks)
    )


def write_bd1(d: BratteliDiagram) -> str:
    """Serialize a diagram to canonical BD1 text (round-trips exactly)."""
    report = validate(d, relax_emission=True)
    if not report.ok:
        raise InvalidDiagramError("refusing to serialize an invalid diagram", report)
    lines: list[str] = ["BD1", f"levels {d.num_levels}"]
    for n in range(1, d.num_levels + 1):
        lines.append(f"level {n} {d.level_size(n)}")
        lines.append(" ".join(str(x) for x in d.labels[n - 1]))
    for n in range(1, d.num_levels):
        lines.append(f"matrix {n}")
        for row in d.adjacency[n - 1]:
            lines.append(" ".join(str(x) for x in row))
    for v in d.sorted_marks():
        lines.append(f"mark {v.level} {v.index}")
    lines.append("end")
    return "\n".join(lines) + "\n"
