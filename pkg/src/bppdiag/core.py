"""Boxed plane partitions: domain types, validation, diagonal sums and contours.

Cells are addressed 1-based as ``(r, j)`` with ``r`` the row (1..a) and ``j``
the column (1..b).  Cell ``(r, j)`` lies on diagonal ``i = j - r``.  Every
per-diagonal vector in this package is indexed by ``i`` in ``[-a, b]``; the two
end positions ``-a`` and ``b`` are empty diagonals and always hold 0.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "BppError",
    "InvalidPartition",
    "OutOfRange",
    "MonotonicityViolation",
    "ShapeMismatch",
    "IndexOutOfRange",
    "CapExceeded",
    "BudgetExceeded",
    "BoxDims",
    "PlanePartition",
    "DiagonalSums",
    "CenteredSums",
    "ContourSet",
    "Violation",
    "find_violations",
    "validate",
    "diagonal_length",
    "diagonal_cells",
    "diagonal_sums",
    "centered_sums",
    "contour_heights",
    "transpose",
    "complement",
    "bottom",
    "top",
    "parse_text",
    "format_text",
    "parse_json",
    "format_json",
    "to_dict",
    "from_dict",
]

# c must fit a machine word; keeps numpy kernels in int64.
MAX_C = 2**31 - 1


class BppError(Exception):
    """Base class for every error raised by this package."""


class InvalidPartition(BppError, ValueError):
    """An integer matrix is not a boxed plane partition.

    ``violations`` lists every problem found, not just the first one.
    """

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        shown = "; ".join(str(v) for v in self.violations[:5])
        more = len(self.violations) - 5
        if more > 0:
            shown += f"; ... ({more} more)"
        super().__init__(shown)


class OutOfRange(InvalidPartition):
    pass


class MonotonicityViolation(InvalidPartition):
    pass


class ShapeMismatch(InvalidPartition):
    pass


class IndexOutOfRange(BppError, IndexError):
    pass


class CapExceeded(BppError):
    def __init__(self, message: str, predicted: int | None = None):
        super().__init__(message)
        self.predicted = predicted


class BudgetExceeded(BppError):
    pass


@dataclass(frozen=True)
class BoxDims:
    a: int
    b: int
    c: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                raise TypeError(f"{name} must be an integer, got {v!r}")
            object.__setattr__(self, name, int(v))
        if self.a < 1 or self.b < 1:
            raise ValueError(f"a and b must be >= 1, got a={self.a}, b={self.b}")
        if self.c < 0:
            raise ValueError(f"c must be >= 0, got {self.c}")
        if self.c > MAX_C:
            raise ValueError(f"c={self.c} does not fit a machine word")

    @classmethod
    def parse(cls, text: str) -> "BoxDims":
        """Parse ``"a,b,c"`` (commas or whitespace)."""
        parts = text.replace(",", " ").split()
        if len(parts) != 3:
            raise ValueError(f"expected three integers a,b,c, got {text!r}")
        return cls(*(int(p) for p in parts))

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __str__(self):
        return f"{self.a}x{self.b}x{self.c}"

    @property
    def diagonals(self) -> range:
        """All diagonal indices including the two empty end positions."""
        return range(-self.a, self.b + 1)

    @property
    def interior(self) -> range:
        return range(-self.a + 1, self.b)

    def check_index(self, i: int) -> None:
        if not -self.a <= i <= self.b:
            raise IndexOutOfRange(f"diagonal index {i} outside [{-self.a}, {self.b}]")


def diagonal_length(dims: BoxDims, i: int) -> int:
    """Number of cells on diagonal ``i``; 0 at the end positions."""
    return max(0, min(dims.a, dims.b, dims.a + i, dims.b - i))


def diagonal_cells(dims: BoxDims, i: int) -> list[tuple[int, int]]:
    """Cells ``(r, j)`` of diagonal ``i``, top row first."""
    r0 = max(1, 1 - i)
    return [(r0 + m, r0 + m + i) for m in range(diagonal_length(dims, i))]


@dataclass(frozen=True)
class Violation:
    kind: str  # "shape" | "range" | "row" | "column"
    cell: tuple[int, int] | None
    detail: str

    def __str__(self):
        where = f" at {self.cell}" if self.cell else ""
        return f"{self.kind}{where}: {self.detail}"


def find_violations(z: Sequence[Sequence[int]], dims: BoxDims) -> list[Violation]:
    """Every constraint ``z`` breaks as a partition in the ``dims`` box."""
    a, b, c = dims
    rows = list(z)
    if len(rows) != a or any(len(row) != b for row in rows):
        got = f"{len(rows)} rows with lengths {[len(row) for row in rows]}"
        return [Violation("shape", None, f"expected {a}x{b}, got {got}")]
    out = []
    for r, row in enumerate(rows, 1):
        for j, v in enumerate(row, 1):
            if not 0 <= v <= c:
                out.append(Violation("range", (r, j), f"{v} not in [0, {c}]"))
            if j < b and v < row[j]:
                out.append(Violation("row", (r, j), f"{v} < {row[j]} at ({r},{j + 1})"))
            if r < a and v < rows[r][j - 1]:
                out.append(
                    Violation("column", (r, j), f"{v} < {rows[r][j - 1]} at ({r + 1},{j})")
                )
    return out


@dataclass(frozen=True)
class PlanePartition:
    """A validated a x b matrix with entries in [0, c], weakly decreasing
    along rows and columns.  ``z`` is a tuple of row tuples, stored 0-based.

    Construct through :func:`validate` (or the parsers); the constructor
    itself trusts its input.
    """

    dims: BoxDims
    z: tuple[tuple[int, ...], ...]

    def __getitem__(self, cell: tuple[int, int]) -> int:
        r, j = cell
        return self.z[r - 1][j - 1]

    def to_array(self) -> np.ndarray:
        return np.array(self.z, dtype=np.int64).reshape(self.dims.a, self.dims.b)

    @property
    def total(self) -> int:
        return sum(map(sum, self.z))

    def __str__(self):
        return format_text(self).rstrip("\n")


def validate(z, dims: BoxDims) -> PlanePartition:
    """Check ``z`` and return it as a :class:`PlanePartition`.

    Raises :class:`ShapeMismatch`, :class:`OutOfRange` or
    :class:`MonotonicityViolation`; the exception carries all violations.
    """
    if isinstance(z, np.ndarray):
        z = z.tolist()
    rows = [[int(v) for v in row] for row in z]
    bad = find_violations(rows, dims)
    if bad:
        kinds = {v.kind for v in bad}
        if "shape" in kinds:
            raise ShapeMismatch(bad)
        if "range" in kinds:
            raise OutOfRange(bad)
        raise MonotonicityViolation(bad)
    return PlanePartition(dims, tuple(tuple(row) for row in rows))


class _DiagonalVector:
    """Shared indexing for vectors over diagonals ``-a..b``."""

    dims: BoxDims

    def _values(self) -> tuple:
        raise NotImplementedError

    def __getitem__(self, i: int):
        self.dims.check_index(i)
        return self._values()[i + self.dims.a]

    def items(self):
        return zip(self.dims.diagonals, self._values())

    def interior(self) -> list:
        return list(self._values()[1:-1])


@dataclass(frozen=True)
class DiagonalSums(_DiagonalVector):
    dims: BoxDims
    s: tuple[int, ...]

    def _values(self):
        return self.s

    @property
    def total(self) -> int:
        return sum(self.s)


@dataclass(frozen=True)
class CenteredSums(_DiagonalVector):
    """``y[i] = mean(i) - s[i]``, with ``mean`` the closed-form expectation."""

    dims: BoxDims
    y: tuple[Fraction, ...]

    def _values(self):
        return self.y


@dataclass(frozen=True)
class ContourSet:
    """``h[k][i]``: number of cells on diagonal ``i`` with value >= k.

    Levels run 1..c; ``levels()[k - 1]`` is the row for level ``k``.
    """

    dims: BoxDims
    h: tuple[tuple[int, ...], ...]

    def __getitem__(self, key: tuple[int, int]) -> int:
        k, i = key
        if not 1 <= k <= self.dims.c:
            raise IndexOutOfRange(f"level {k} outside [1, {self.dims.c}]")
        self.dims.check_index(i)
        return self.h[k - 1][i + self.dims.a]

    def level(self, k: int) -> tuple[int, ...]:
        return self.h[k - 1]


def diagonal_sums(p: PlanePartition) -> DiagonalSums:
    a, b, _ = p.dims
    s = [0] * (a + b + 1)
    for r, row in enumerate(p.z):
        for j, v in enumerate(row):
            s[j - r + a] += v
    return DiagonalSums(p.dims, tuple(s))


def centered_sums(p: PlanePartition) -> CenteredSums:
    from .formulas import mean_diagonal_sum

    s = diagonal_sums(p)
    return CenteredSums(
        p.dims, tuple(mean_diagonal_sum(p.dims, i) - v for i, v in s.items())
    )


def contour_heights(p: PlanePartition) -> ContourSet:
    a, b, c = p.dims
    h = [[0] * (a + b + 1) for _ in range(c)]
    for r, row in enumerate(p.z):
        for j, v in enumerate(row):
            for k in range(v):
                h[k][j - r + a] += 1
    return ContourSet(p.dims, tuple(tuple(level) for level in h))


def transpose(p: PlanePartition) -> PlanePartition:
    a, b, c = p.dims
    return PlanePartition(BoxDims(b, a, c), tuple(zip(*p.z)))


def complement(p: PlanePartition) -> PlanePartition:
    c = p.dims.c
    return PlanePartition(p.dims, tuple(tuple(c - v for v in reversed(row)) for row in reversed(p.z)))


def bottom(dims: BoxDims) -> PlanePartition:
    return PlanePartition(dims, tuple((0,) * dims.b for _ in range(dims.a)))


def top(dims: BoxDims) -> PlanePartition:
    return PlanePartition(dims, tuple((dims.c,) * dims.b for _ in range(dims.a)))


# -- serialization -----------------------------------------------------------

def format_text(p: PlanePartition) -> str:
    lines = [f"{p.dims.a} {p.dims.b} {p.dims.c}"]
    lines.extend(" ".join(map(str, row)) for row in p.z)
    return "\n".join(lines) + "\n"


def parse_text(text: str) -> PlanePartition:
    lines = [line.split() for line in text.splitlines() if line.strip()]
    if not lines or len(lines[0]) != 3:
        raise ValueError("first line must be 'a b c'")
    dims = BoxDims(*(int(t) for t in lines[0]))
    return validate([[int(t) for t in line] for line in lines[1:]], dims)


def to_dict(p: PlanePartition) -> dict:
    return {"a": p.dims.a, "b": p.dims.b, "c": p.dims.c, "z": [list(row) for row in p.z]}


def from_dict(d: dict) -> PlanePartition:
    missing = {"a", "b", "c", "z"} - set(d)
    if missing:
        raise ValueError(f"missing keys: {sorted(missing)}")
    return validate(d["z"], BoxDims(d["a"], d["b"], d["c"]))


def format_json(p: PlanePartition) -> str:
    return json.dumps(to_dict(p)) + "\n"


def parse_json(text: str) -> PlanePartition:
    return from_dict(json.loads(text))


def diag_matrix(dims: BoxDims) -> np.ndarray:
    """0/1 matrix ``D`` of shape (a*b, a+b+1) with flattened-cell ``x @ D``
    giving the diagonal sums vector over ``-a..b``."""
    a, b, _ = dims
    d = np.zeros((a * b, a + b + 1), dtype=np.int64)
    for r in range(a):
        for j in range(b):
            d[r * b + j, j - r + a] = 1
    return d


def partitions_from_array(arr: np.ndarray, dims: BoxDims) -> Iterable[PlanePartition]:
    """Wrap rows of an (N, a, b) array of known-valid matrices."""
    for m in arr:
        yield PlanePartition(dims, tuple(tuple(int(v) for v in row) for row in m))
