"""Alternating sign matrices, their six-vertex images, and exact brute-force oracles.

Lattice conventions (used everywhere in the package)::

    column j = 0 .. N-1 from the LEFT, row i = 0 .. N-1 from the TOP.
    "position r from the right" means column j = N - r.

    horizontal edge (i, k), k = 0 .. N, sits left of column k in row i
    (k = 0 is the left boundary, k = N the right boundary);
    vertical edge (k, j), k = 0 .. N, sits above row k in column j
    (k = 0 is the top boundary, k = N the bottom boundary).

            k=0   k=1         k=N
             <-- (0,0) --  ... -- (0,N-1) -->     row 0
                   |                 |
             <-- (1,0) --  ... -- (1,N-1) -->     row 1
                   ^                 ^

    In the emptiness event F(r, s) the horizontal edges k = N - r of rows
    0 .. s-1 (the gap between vertical lines r and r+1 counted from the right)
    all point LEFT.

The arrow on a horizontal edge points right iff the row partial sum of ASM
entries to its left is 1; a vertical arrow points up iff the column partial
sum above it is 1. That fixes the six vertex types as below.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterator, List, Sequence, Tuple

import numpy as np

__all__ = [
    "AsmValidationError", "ConfigValidationError", "EnumerationBoundError",
    "Asm", "SixVertexConfig", "VertexType", "ModelParams",
    "asm_to_sixvertex", "sixvertex_to_asm", "enumerate_asms", "max_enumeration_n",
    "weighted_count", "partition_function", "boundary_correlation",
    "efp_oracle", "efp_oracle_block", "minus_count", "minus_histogram",
]

DEFAULT_MAX_N = 8

LEFT, RIGHT = 0, 1
DOWN, UP = 0, 1


class AsmValidationError(ValueError):
    """Matrix is not an alternating sign matrix."""


class ConfigValidationError(ValueError):
    """Arrow configuration violates the ice rule or the domain-wall boundary."""


class EnumerationBoundError(ValueError):
    """Requested size exceeds the enumeration bound."""


class VertexType(Enum):
    """The six vertex types, in the usual a1, a2, b1, b2, c1, c2 order."""

    A1 = "a1"  # right, right / up, up
    A2 = "a2"  # left, left / down, down
    B1 = "b1"  # right, right / down, down
    B2 = "b2"  # left, left / up, up
    C1 = "c1"  # horizontal in, vertical out: entry -1
    C2 = "c2"  # horizontal out, vertical in: entry +1

    @property
    def weight_class(self) -> str:
        return self.value[0]

    @property
    def asm_entry(self) -> int:
        return {"c1": -1, "c2": 1}.get(self.value, 0)

    @classmethod
    def from_arrows(cls, west: int, east: int, north: int, south: int) -> "VertexType | None":
        """Classify a vertex by its four arrows, or None if the ice rule fails.

        ``west``/``east`` are LEFT/RIGHT, ``north``/``south`` are UP/DOWN.
        """
        return _ARROWS_TO_TYPE.get((west, east, north, south))


_ARROWS_TO_TYPE = {
    (RIGHT, RIGHT, UP, UP): VertexType.A1,
    (LEFT, LEFT, DOWN, DOWN): VertexType.A2,
    (RIGHT, RIGHT, DOWN, DOWN): VertexType.B1,
    (LEFT, LEFT, UP, UP): VertexType.B2,
    (RIGHT, LEFT, UP, DOWN): VertexType.C1,
    (LEFT, RIGHT, DOWN, UP): VertexType.C2,
}


def _as_rational(v, name: str) -> Fraction:
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, Rational):
        return Fraction(v)
    raise TypeError(f"{name} must be rational, got {v!r}")


@dataclass(frozen=True)
class ModelParams:
    """Six-vertex parameters: anisotropy ``delta``, ratio ``t = b/a``, weight ``q``.

    For the q-enumeration (``a = b = 1``, ``c**2 = q``) use :meth:`from_q`.
    """

    delta: Fraction
    t: Fraction = Fraction(1)
    q: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "delta", _as_rational(self.delta, "delta"))
        object.__setattr__(self, "t", _as_rational(self.t, "t"))
        if self.q is not None:
            q = _as_rational(self.q, "q")
            object.__setattr__(self, "q", q)
            if self.t == 1 and self.delta != 1 - q / 2:
                raise ValueError(f"delta={self.delta} inconsistent with q={q} at t=1")

    @classmethod
    def from_q(cls, q) -> "ModelParams":
        q = _as_rational(q, "q")
        return cls(delta=1 - q / 2, t=Fraction(1), q=q)

    @classmethod
    def from_weights(cls, a, b, c_squared) -> "ModelParams":
        """Parameters from weights ``a, b`` and ``c**2`` (all rational)."""
        a, b, c2 = (_as_rational(v, n) for v, n in ((a, "a"), (b, "b"), (c_squared, "c^2")))
        delta = (a * a + b * b - c2) / (2 * a * b)
        q = c2 if a == b == 1 else None
        return cls(delta=delta, t=b / a, q=q)


class Asm:
    """An N x N alternating sign matrix (validated on construction)."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=np.int8)
        if arr.ndim == 1 and arr.size == 1:
            arr = arr.reshape(1, 1)
        _validate_asm(arr)
        arr.setflags(write=False)
        self.entries = arr

    @classmethod
    def _trusted(cls, arr: np.ndarray) -> "Asm":
        obj = object.__new__(cls)
        arr.setflags(write=False)
        obj.entries = arr
        return obj

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def minus_count(self) -> int:
        return int(np.count_nonzero(self.entries == -1))

    def first_row_position(self) -> int:
        """Position r (1-based, counted from the right) of the 1 in the first row."""
        j = int(np.flatnonzero(self.entries[0] == 1)[0])
        return self.n - j

    def to_list(self) -> List[List[int]]:
        return self.entries.tolist()

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    @classmethod
    def from_json(cls, text: str) -> "Asm":
        return cls(json.loads(text))

    def __eq__(self, other) -> bool:
        return isinstance(other, Asm) and np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash(self.entries.tobytes())

    def __repr__(self) -> str:
        return f"Asm({self.to_list()})"


def _validate_asm(arr: np.ndarray) -> None:
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise AsmValidationError(f"expected a nonempty square matrix, got shape {arr.shape}")
    if not np.isin(arr, (-1, 0, 1)).all():
        raise AsmValidationError("entries must be -1, 0 or 1")
    for kind, lines in (("row", arr), ("column", arr.T)):
        for idx, line in enumerate(lines):
            partial = np.cumsum(line)
            if partial.min() < 0 or partial.max() > 1 or partial[-1] != 1:
                raise AsmValidationError(
                    f"{kind} {idx} does not alternate in sign starting and ending with +1: "
                    f"{line.tolist()}")


class SixVertexConfig:
    """Arrow configuration on the N x N lattice with domain-wall boundaries.

    ``horizontal[i, k]`` (shape N x (N+1)) is LEFT/RIGHT, ``vertical[k, j]``
    (shape (N+1) x N) is DOWN/UP; see the module docstring for indexing.
    """

    __slots__ = ("horizontal", "vertical")

    def __init__(self, horizontal, vertical):
        h = np.array(horizontal, dtype=np.int8)
        v = np.array(vertical, dtype=np.int8)
        n = h.shape[0]
        if h.shape != (n, n + 1) or v.shape != (n + 1, n) or n == 0:
            raise ConfigValidationError(f"bad arrow array shapes {h.shape}, {v.shape}")
        h.setflags(write=False)
        v.setflags(write=False)
        self.horizontal = h
        self.vertical = v
        self._validate()

    @property
    def n(self) -> int:
        return self.horizontal.shape[0]

    def _validate(self) -> None:
        h, v, n = self.horizontal, self.vertical, self.n
        for i in range(n):
            if h[i, 0] != LEFT or h[i, n] != RIGHT:
                raise ConfigValidationError(f"row {i}: horizontal boundary arrows must point outward")
        for j in range(n):
            if v[0, j] != DOWN or v[n, j] != UP:
                raise ConfigValidationError(f"column {j}: vertical boundary arrows must point inward")
        for i in range(n):
            for j in range(n):
                if self.vertex_type(i, j) is None:
                    raise ConfigValidationError(f"ice rule violated at vertex ({i}, {j})")

    def vertex_type(self, i: int, j: int) -> "VertexType | None":
        h, v = self.horizontal, self.vertical
        return VertexType.from_arrows(int(h[i, j]), int(h[i, j + 1]), int(v[i, j]), int(v[i + 1, j]))

    def vertex_types(self) -> List[List[VertexType]]:
        return [[self.vertex_type(i, j) for j in range(self.n)] for i in range(self.n)]

    def __eq__(self, other) -> bool:
        return (isinstance(other, SixVertexConfig)
                and np.array_equal(self.horizontal, other.horizontal)
                and np.array_equal(self.vertical, other.vertical))

    def __hash__(self) -> int:
        return hash((self.horizontal.tobytes(), self.vertical.tobytes()))


def asm_to_sixvertex(m: Asm | Sequence[Sequence[int]]) -> SixVertexConfig:
    """Six-vertex configuration corresponding to an ASM."""
    if not isinstance(m, Asm):
        m = Asm(m)
    e = m.entries.astype(np.int64)
    n = m.n
    horizontal = np.zeros((n, n + 1), dtype=np.int8)
    horizontal[:, 1:] = np.cumsum(e, axis=1)  # RIGHT == 1 iff row partial sum is 1
    vertical = np.zeros((n + 1, n), dtype=np.int8)
    vertical[1:, :] = np.cumsum(e, axis=0)    # UP == 1 iff column partial sum is 1
    return SixVertexConfig(horizontal, vertical)


def sixvertex_to_asm(c: SixVertexConfig) -> Asm:
    """Inverse of :func:`asm_to_sixvertex`."""
    if not isinstance(c, SixVertexConfig):
        raise TypeError("expected a SixVertexConfig")
    n = c.n
    entries = [[c.vertex_type(i, j).asm_entry for j in range(n)] for i in range(n)]
    return Asm(entries)


def minus_count(m: Asm) -> int:
    return m.minus_count()


def max_enumeration_n() -> int:
    """Enumeration bound; raise it with the ASM_MAX_N environment variable."""
    raw = os.environ.get("ASM_MAX_N")
    if raw is None:
        return DEFAULT_MAX_N
    try:
        return int(raw)
    except ValueError:
        raise EnumerationBoundError(f"ASM_MAX_N={raw!r} is not an integer") from None


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise EnumerationBoundError(f"n must be a positive integer, got {n!r}")
    bound = max_enumeration_n()
    if n > bound:
        raise EnumerationBoundError(
            f"n={n} exceeds the enumeration bound {bound} (set ASM_MAX_N to override)")


def _interlacing_successors(prev: Tuple[int, ...], n: int) -> Iterator[Tuple[int, ...]]:
    """All (k+1)-subsets b of range(n) with b_0 <= a_0 <= b_1 <= ... <= a_{k-1} <= b_k."""
    k = len(prev)
    lows = [0] + list(prev)
    highs = list(prev) + [n - 1]

    def rec(idx: int, last: int, acc: List[int]):
        if idx == k + 1:
            yield tuple(acc)
            return
        lo = max(lows[idx], last + 1)
        for b in range(lo, highs[idx] + 1):
            acc.append(b)
            yield from rec(idx + 1, b, acc)
            acc.pop()

    yield from rec(0, -1, [])


def _monotone_triangles(n: int) -> Iterator[List[Tuple[int, ...]]]:
    """Monotone triangles as lists of rows; row k is the set of columns whose
    column partial sum over the first k+1 ASM rows equals 1."""
    full = tuple(range(n))

    def rec(rows: List[Tuple[int, ...]]):
        if len(rows) == n:
            if rows[-1] == full:
                yield list(rows)
            return
        prev = rows[-1] if rows else ()
        for nxt in _interlacing_successors(prev, n):
            rows.append(nxt)
            yield from rec(rows)
            rows.pop()

    yield from rec([])


def enumerate_asms(n: int) -> Iterator[Asm]:
    """Yield every n x n ASM exactly once (monotone-triangle backtracking)."""
    _check_n(n)
    for rows in _monotone_triangles(n):
        arr = np.zeros((n, n), dtype=np.int8)
        prev: Tuple[int, ...] = ()
        for i, row in enumerate(rows):
            arr[i, list(row)] += 1
            if prev:
                arr[i, list(prev)] -= 1
            prev = row
        yield Asm._trusted(arr)


@lru_cache(maxsize=None)
def _asm_table(n: int) -> Tuple[Asm, ...]:
    return tuple(enumerate_asms(n))


def _q(q) -> Fraction:
    q = _as_rational(q, "q")
    if q <= 0:
        raise ValueError(f"q must be positive, got {q}")
    return q


@lru_cache(maxsize=None)
def _row_transfer(n: int, first: int) -> Tuple[int, ...]:
    """Histogram over -1 counts of ASMs whose first-row 1 is in column ``first``.

    Transfer over monotone-triangle rows: each state is the set of columns
    with column partial sum 1; a step removing ``d`` columns adds ``d``
    entries equal to -1.
    """
    layer = {(first,): {0: 1}}
    for _ in range(n - 1):
        nxt: dict = {}
        for prev, hist in layer.items():
            for row in _interlacing_successors(prev, n):
                d = len(set(prev) - set(row))
                slot = nxt.setdefault(row, {})
                for k, c in hist.items():
                    slot[k + d] = slot.get(k + d, 0) + c
        layer = nxt
    hist = layer.get(tuple(range(n)), {})
    top = max(hist, default=0)
    return tuple(hist.get(k, 0) for k in range(top + 1))


def minus_histogram(n: int) -> Tuple[int, ...]:
    """``hist[k]`` = number of n x n ASMs with exactly k entries equal to -1."""
    _check_n(n)
    total: dict = {}
    for j in range(n):
        for k, c in enumerate(_row_transfer(n, j)):
            total[k] = total.get(k, 0) + c
    return tuple(total.get(k, 0) for k in range(max(total) + 1))


def weighted_count(n: int, q=1) -> Fraction:
    """Sum over n x n ASMs of q**(number of -1 entries)."""
    q = _q(q)
    return sum((c * q**k for k, c in enumerate(minus_histogram(n))), Fraction(0))


def partition_function(n: int, q=1) -> Fraction:
    """Pure ``sum q**k`` over ASMs (equal to :func:`weighted_count`).

    With ``a = b = 1`` and ``c = sqrt(q)`` the six-vertex partition function is
    ``Z = c**n * sum q**k``, because the c-vertices are the n forced ``+1``
    entries plus one ``(+1, -1)`` pair per ``-1``. That ``c**n`` is not applied.
    """
    return weighted_count(n, q)


def boundary_correlation(n: int, q=1) -> List[Fraction]:
    """``H[r-1]``: probability that the first-row 1 sits at position r from the right."""
    _check_n(n)
    q = _q(q)
    acc = [Fraction(0)] * n
    for j in range(n):
        acc[n - j - 1] = sum((c * q**k for k, c in enumerate(_row_transfer(n, j))), Fraction(0))
    z = sum(acc)
    return [a / z for a in acc]


@lru_cache(maxsize=None)
def _sixvertex_table(n: int) -> Tuple[SixVertexConfig, ...]:
    return tuple(asm_to_sixvertex(m) for m in _asm_table(n))


def _check_rs(n: int, r: int, s: int) -> None:
    if not (1 <= r <= n and 1 <= s <= n):
        raise IndexError(f"need 1 <= r, s <= n={n}, got r={r}, s={s}")


def efp_oracle(n: int, r: int, s: int, q=1) -> Fraction:
    """Emptiness formation probability by full enumeration, on arrows.

    Weighted probability that the horizontal arrows of rows ``0 .. s-1`` on the
    edge between vertical lines r and r+1 (counted from the right) all point left.
    """
    _check_n(n)
    _check_rs(n, r, s)
    q = _q(q)
    k = n - r
    hit = Fraction(0)
    total = Fraction(0)
    for m, c in zip(_asm_table(n), _sixvertex_table(n)):
        w = q ** m.minus_count()
        total += w
        if not c.horizontal[:s, k].any():  # LEFT == 0
            hit += w
    return hit / total


def efp_oracle_block(n: int, r: int, s: int, q=1) -> Fraction:
    """Same probability via the all-zero top-left ``s x (n-r)`` ASM block."""
    _check_n(n)
    _check_rs(n, r, s)
    q = _q(q)
    hit = Fraction(0)
    total = Fraction(0)
    for m in _asm_table(n):
        w = q ** m.minus_count()
        total += w
        if not m.entries[:s, : n - r].any():
            hit += w
    return hit / total


def oracle_record(n: int, r: int, s: int, q, value: Fraction) -> dict:
    """JSON-ready record ``{n, r, s, q_num, q_den, value_num, value_den}``."""
    q = Fraction(q)
    return {"n": n, "r": r, "s": s, "q_num": q.numerator, "q_den": q.denominator,
            "value_num": value.numerator, "value_den": value.denominator}
