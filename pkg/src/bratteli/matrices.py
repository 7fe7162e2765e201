"""Exact sparse integer matrices and rational rank by integer elimination.

The matrices arising from path spaces are 0/1 and extremely sparse, so
entries live in a dict keyed by (row, col); only nonzero values are
stored.  Instances are immutable by convention: every operation returns a
new matrix.  Rank works over the rationals but runs fraction-free: rows
are cross-multiplied with exact integers and reduced by their gcd, so no
precision is ever lost.
"""

from __future__ import annotations

from math import gcd
from typing import Iterable, Iterator


class IntMatrix:
    """Immutable sparse matrix with arbitrary-precision integer entries."""

    __slots__ = ("nrows", "ncols", "entries")

    def __init__(self, nrows: int, ncols: int, entries: dict[tuple[int, int], int] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries: dict[tuple[int, int], int] = {
            k: v for k, v in (entries or {}).items() if v != 0
        }

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in range(n)})

    @classmethod
    def diagonal(cls, n: int, ones_at: Iterable[int]) -> "IntMatrix":
        return cls(n, n, {(i, i): 1 for i in ones_at})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return (
            self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.entries == other.entries
        )

    def __hash__(self) -> int:
        return hash((self.nrows, self.ncols, frozenset(self.entries.items())))

    def __repr__(self) -> str:
        return f"IntMatrix({self.nrows}x{self.ncols}, nnz={len(self.entries)})"

    def __getitem__(self, pos: tuple[int, int]) -> int:
        return self.entries.get(pos, 0)

    @property
    def nnz(self) -> int:
        return len(self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        return iter(self.entries.items())

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.ncols, self.nrows, {(c, r): v for (r, c), v in self.entries.items()}
        )

    def add(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        out = dict(self.entries)
        for pos, v in other.entries.items():
            out[pos] = out.get(pos, 0) + v
        return IntMatrix(self.nrows, self.ncols, out)

    def sub(self, other: "IntMatrix") -> "IntMatrix":
        self._check_same_shape(other)
        out = dict(self.entries)
        for pos, v in other.entries.items():
            out[pos] = out.get(pos, 0) - v
        return IntMatrix(self.nrows, self.ncols, out)

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.nrows, self.ncols, {p: k * v for p, v in self.entries.items()})

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(
                f"shape mismatch: {self.nrows}x{self.ncols} times {other.nrows}x{other.ncols}"
            )
        rows_of_other: dict[int, list[tuple[int, int]]] = {}
        for (r, c), v in other.entries.items():
            rows_of_other.setdefault(r, []).append((c, v))
        out: dict[tuple[int, int], int] = {}
        for (r, k), a in self.entries.items():
            for c, b in rows_of_other.get(k, ()):
                pos = (r, c)
                out[pos] = out.get(pos, 0) + a * b
        return IntMatrix(self.nrows, other.ncols, out)

    def flatten(self) -> dict[int, int]:
        """Row-major sparse vector view, for rank computations."""
        return {r * self.ncols + c: v for (r, c), v in self.entries.items()}

    def to_dense(self) -> list[list[int]]:
        rows = [[0] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def _check_same_shape(self, other: "IntMatrix") -> None:
        if self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError(
                f"shape mismatch: {self.nrows}x{self.ncols} vs {other.nrows}x{other.ncols}"
            )


def _reduced(row: dict[int, int]) -> dict[int, int]:
    """Divide by the gcd and normalize the leading sign."""
    g = 0
    for v in row.values():
        g = gcd(g, v)
    if g == 0:
        return {}
    lead = min(row)
    if row[lead] < 0:
        g = -g
    return {c: v // g for c, v in row.items()}


def rank_of_rows(rows: Iterable[dict[int, int]]) -> int:
    """Rank over the rationals of sparse integer row vectors.

    Incremental fraction-free elimination: each candidate row is reduced
    against the stored pivot rows by exact cross-multiplication, with a
    gcd reduction after every step to keep entries small.
    """
    pivots: dict[int, dict[int, int]] = {}
    rank = 0
    for row in rows:
        r = {c: v for c, v in row.items() if v != 0}
        while r:
            lead = min(r)
            p = pivots.get(lead)
            if p is None:
                pivots[lead] = _reduced(r)
                rank += 1
                break
            a, b = p[lead], r[lead]
            merged = {c: v * a for c, v in r.items()}
            for c, v in p.items():
                merged[c] = merged.get(c, 0) - v * b
            r = _reduced({c: v for c, v in merged.items() if v != 0})
    return rank


def rank_of_matrices(matrices: Iterable[IntMatrix]) -> int:
    """Dimension of the span of a family of equal-shaped matrices."""
    return rank_of_rows(m.flatten() for m in matrices)
