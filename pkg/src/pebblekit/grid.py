"""Grid/torus geometry and the pebble distribution data model.

Coordinates are (col, row) with row 0 at the top in serialized form.
All types are immutable value objects; distributions store counts
sparsely (vertices with zero pebbles are absent).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping, NamedTuple, Union

PLANE = "plane"
TORUS = "torus"


class GridError(ValueError):
    """Invalid grid, vertex, or distribution input."""


class ParseError(GridError):
    """Malformed distribution file."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class Vertex(NamedTuple):
    col: int
    row: int


@dataclass(frozen=True)
class GridSpec:
    """A finite rectangular grid, optionally with wrap-around (torus) edges."""

    width: int
    height: int
    topology: str = PLANE

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise GridError(f"grid dimensions must be >= 1, got {self.width}x{self.height}")
        if self.topology not in (PLANE, TORUS):
            raise GridError(f"unknown topology {self.topology!r}")

    @property
    def size(self) -> int:
        return self.width * self.height

    def contains(self, v: Vertex) -> bool:
        return 0 <= v[0] < self.width and 0 <= v[1] < self.height

    def check(self, v) -> Vertex:
        v = Vertex(*v)
        if not self.contains(v):
            raise GridError(f"vertex {tuple(v)} out of bounds for {self.width}x{self.height} grid")
        return v

    def vertices(self) -> Iterator[Vertex]:
        for row in range(self.height):
            for col in range(self.width):
                yield Vertex(col, row)

    def distance(self, u, v) -> int:
        """Manhattan distance; on a torus each axis may wrap."""
        u = self.check(u)
        v = self.check(v)
        dc = abs(u[0] - v[0])
        dr = abs(u[1] - v[1])
        if self.topology == TORUS:
            dc = min(dc, self.width - dc)
            dr = min(dr, self.height - dr)
        return dc + dr

    def neighbors(self, v) -> list[Vertex]:
        v = self.check(v)
        out = []
        for dc, dr in ((0, -1), (-1, 0), (1, 0), (0, 1)):
            c, r = v[0] + dc, v[1] + dr
            if self.topology == TORUS:
                c %= self.width
                r %= self.height
            elif not (0 <= c < self.width and 0 <= r < self.height):
                continue
            u = Vertex(c, r)
            if u != v:
                out.append(u)
        return sorted(set(out))

    def ball(self, center, radius: int) -> frozenset[Vertex]:
        """All vertices at distance <= radius from center."""
        center = self.check(center)
        if radius < 0:
            raise GridError("radius must be non-negative")
        out = set()
        for dc in range(-radius, radius + 1):
            rem = radius - abs(dc)
            for dr in range(-rem, rem + 1):
                c, r = center[0] + dc, center[1] + dr
                if self.topology == TORUS:
                    c %= self.width
                    r %= self.height
                elif not (0 <= c < self.width and 0 <= r < self.height):
                    continue
                out.add(Vertex(c, r))
        return frozenset(out)


def _validate_counts(grid: GridSpec, counts: Mapping, integral: bool) -> dict:
    clean = {}
    for v, c in counts.items():
        v = grid.check(v)
        if integral:
            if not isinstance(c, int) or isinstance(c, bool):
                raise GridError(f"pebble count at {tuple(v)} must be an integer, got {c!r}")
        else:
            c = Fraction(c)
        if c < 0:
            raise GridError(f"negative pebble count at {tuple(v)}")
        if c > 0:
            if v in clean:
                raise GridError(f"duplicate vertex {tuple(v)}")
            clean[v] = c
    return clean


@dataclass(frozen=True)
class Distribution:
    """Sparse non-negative integer pebble counts on a grid."""

    grid: GridSpec
    counts: Mapping[Vertex, int]
    _key: frozenset = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        clean = _validate_counts(self.grid, self.counts, integral=True)
        object.__setattr__(self, "counts", clean)
        object.__setattr__(self, "_key", frozenset(clean.items()))

    @property
    def size(self) -> int:
        return sum(self.counts.values())

    @property
    def support(self) -> frozenset[Vertex]:
        """The units: vertices carrying at least one pebble."""
        return frozenset(self.counts)

    def get(self, v) -> int:
        return self.counts.get(Vertex(*v), 0)

    def items(self):
        return self.counts.items()

    def __eq__(self, other):
        return (
            isinstance(other, Distribution)
            and self.grid == other.grid
            and self._key == other._key
        )

    def __hash__(self):
        return hash((self.grid, self._key))

    def with_pebbles(self, v, k: int) -> "Distribution":
        """A copy with k extra pebbles at v (k may be negative down to zero)."""
        v = self.grid.check(v)
        counts = dict(self.counts)
        counts[v] = counts.get(v, 0) + k
        if counts[v] < 0:
            raise GridError(f"cannot remove {-k} pebbles from {tuple(v)}")
        if counts[v] == 0:
            del counts[v]
        return Distribution(self.grid, counts)

    def without_unit(self, v) -> "Distribution":
        v = self.grid.check(v)
        counts = {u: c for u, c in self.counts.items() if u != v}
        return Distribution(self.grid, counts)

    def combined(self, other: "Distribution") -> "Distribution":
        if self.grid != other.grid:
            raise GridError("cannot combine distributions on different grids")
        counts = dict(self.counts)
        for v, c in other.counts.items():
            counts[v] = counts.get(v, 0) + c
        return Distribution(self.grid, counts)

    def dominates(self, other: "Distribution") -> bool:
        """True iff this distribution has >= other's pebbles at every vertex."""
        if self.grid != other.grid:
            raise GridError("cannot compare distributions on different grids")
        return all(self.counts.get(v, 0) >= c for v, c in other.counts.items())


@dataclass(frozen=True)
class ContinuousDistribution:
    """Sparse exact-rational pebble amounts on a grid (all stored values > 0)."""

    grid: GridSpec
    counts: Mapping[Vertex, Fraction]
    _key: frozenset = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        clean = _validate_counts(self.grid, self.counts, integral=False)
        object.__setattr__(self, "counts", clean)
        object.__setattr__(self, "_key", frozenset(clean.items()))

    @property
    def size(self) -> Fraction:
        return sum(self.counts.values(), Fraction(0))

    @property
    def support(self) -> frozenset[Vertex]:
        return frozenset(self.counts)

    def get(self, v) -> Fraction:
        return self.counts.get(Vertex(*v), Fraction(0))

    def items(self):
        return self.counts.items()

    def __eq__(self, other):
        return (
            isinstance(other, ContinuousDistribution)
            and self.grid == other.grid
            and self._key == other._key
        )

    def __hash__(self):
        return hash((self.grid, self._key))


AnyDistribution = Union[Distribution, ContinuousDistribution]


def parse_distribution(text: str) -> AnyDistribution:
    """Parse the line-oriented distribution format.

    Line 1: ``grid <width> <height> <plane|torus> [continuous]``
    Then:   ``pebble <col> <row> <count>`` where count is a positive integer,
            or a ``p/q`` rational when the header carries the ``continuous`` flag.
    ``#`` starts a comment; blank lines are ignored.
    """
    grid = None
    continuous = False
    counts: dict = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if grid is None:
            if parts[0] != "grid":
                raise ParseError("expected 'grid <width> <height> <plane|torus>' header", line_no)
            if len(parts) not in (4, 5):
                raise ParseError("grid header needs width, height and topology", line_no)
            try:
                width, height = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError("grid dimensions must be integers", line_no) from None
            if len(parts) == 5:
                if parts[4] != "continuous":
                    raise ParseError(f"unknown header flag {parts[4]!r}", line_no)
                continuous = True
            try:
                grid = GridSpec(width, height, parts[3])
            except GridError as e:
                raise ParseError(str(e), line_no) from None
            continue
        if parts[0] != "pebble":
            raise ParseError(f"unknown directive {parts[0]!r}", line_no)
        if len(parts) != 4:
            raise ParseError("expected 'pebble <col> <row> <count>'", line_no)
        try:
            v = Vertex(int(parts[1]), int(parts[2]))
        except ValueError:
            raise ParseError("vertex coordinates must be integers", line_no) from None
        if not grid.contains(v):
            raise ParseError(f"vertex {tuple(v)} out of bounds", line_no)
        if v in counts:
            raise ParseError(f"duplicate vertex {tuple(v)}", line_no)
        if continuous:
            try:
                c = Fraction(parts[3])
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad rational count {parts[3]!r}", line_no) from None
        else:
            try:
                c = int(parts[3])
            except ValueError:
                raise ParseError(f"bad integer count {parts[3]!r}", line_no) from None
        if c <= 0:
            raise ParseError("pebble count must be positive", line_no)
        counts[v] = c
    if grid is None:
        raise ParseError("missing grid header")
    if continuous:
        return ContinuousDistribution(grid, counts)
    return Distribution(grid, counts)


def serialize_distribution(d: AnyDistribution) -> str:
    """Canonical text form: header then pebble lines sorted by (row, col)."""
    continuous = isinstance(d, ContinuousDistribution)
    header = f"grid {d.grid.width} {d.grid.height} {d.grid.topology}"
    if continuous:
        header += " continuous"
    lines = [header]
    for v in sorted(d.support, key=lambda v: (v.row, v.col)):
        c = d.counts[v]
        lines.append(f"pebble {v.col} {v.row} {c}")
    return "\n".join(lines) + "\n"
