"""Metropolis sampling of domain-wall six-vertex configurations with weight q^(#-1).

States are height functions on the (n+1) x (n+1) grid of lattice faces::

    h[i, j] = i + j - 2 * sum_{i' < i, j' < j} m[i', j']

so ``h`` is fixed on the boundary (``h[0, j] = j``, ``h[i, 0] = i``,
``h[n, j] = n - j``, ``h[i, n] = n - i``) and neighbours differ by exactly 1.
The elementary move raises or lowers one interior height by 2, which is
allowed only when all four neighbours sit at the intermediate value. On the
matrix it adds ``[[-1, +1], [+1, -1]]`` (or its negative) to the 2 x 2 block
whose corners share that face.

Each sweep proposes ``(n-1)^2`` moves: a uniform interior face and a uniform
direction, accepted with probability ``min(1, q^dk)`` where ``dk`` is the
change in the number of -1 entries. Random numbers come from numpy's
counter-based Philox generator, seeded per chain.
"""
from __future__ import annotations

import json
import math
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from numba import njit

from .arctic import ScaledCoords, curve_sample
from .conventions import Case
from .sixvertex import Asm, SixVertexConfig, asm_to_sixvertex

__all__ = [
    "HeightState", "ChainConfig", "DensityField", "Boundary", "EfpEstimate",
    "make_rng", "step", "proposals", "acceptance_probability", "transition_matrix",
    "run_chain", "sample_density", "sample_states", "run_chains", "profile_crossing", "reachable",
    "empirical_boundary", "mean_curve_distance", "efp_estimate", "efp_profile_estimate",
    "save_snapshot", "load_snapshot", "density_csv", "MAX_N",
]

MAX_N = 512
_BLOCK_SWEEPS = 16


class HeightState:
    """Height function of a domain-wall configuration (validated on construction)."""

    __slots__ = ("heights",)

    def __init__(self, heights):
        h = np.array(heights, dtype=np.int64)
        _validate_heights(h)
        self.heights = h

    @property
    def n(self) -> int:
        return self.heights.shape[0] - 1

    @classmethod
    def from_asm(cls, m: Asm) -> "HeightState":
        e = m.entries.astype(np.int64)
        n = m.n
        corner = np.zeros((n + 1, n + 1), dtype=np.int64)
        corner[1:, 1:] = e.cumsum(0).cumsum(1)
        i, j = np.indices((n + 1, n + 1))
        return cls(i + j - 2 * corner)

    @classmethod
    def minimal(cls, n: int) -> "HeightState":
        """Identity permutation matrix: ``h = |i - j|``."""
        i, j = np.indices((n + 1, n + 1))
        return cls(np.abs(i - j))

    @classmethod
    def maximal(cls, n: int) -> "HeightState":
        """Anti-diagonal permutation matrix: ``h = min(i + j, 2n - i - j)``."""
        i, j = np.indices((n + 1, n + 1))
        return cls(np.minimum(i + j, 2 * n - i - j))

    def entries(self) -> np.ndarray:
        h = self.heights
        return (h[:-1, 1:] + h[1:, :-1] - h[1:, 1:] - h[:-1, :-1]) // 2

    def to_asm(self) -> Asm:
        return Asm(self.entries())

    def to_sixvertex(self) -> SixVertexConfig:
        return asm_to_sixvertex(self.to_asm())

    def minus_count(self) -> int:
        return int(np.count_nonzero(self.entries() == -1))

    def key(self) -> bytes:
        return self.heights.astype(np.int16).tobytes()

    def copy(self) -> "HeightState":
        obj = object.__new__(HeightState)
        obj.heights = self.heights.copy()
        return obj

    def __eq__(self, other) -> bool:
        return isinstance(other, HeightState) and np.array_equal(self.heights, other.heights)

    def __hash__(self) -> int:
        return hash(self.key())


def _validate_heights(h: np.ndarray) -> None:
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] < 2:
        raise ValueError(f"height array must be (n+1) x (n+1) with n >= 1, got {h.shape}")
    n = h.shape[0] - 1
    k = np.arange(n + 1)
    if not (np.array_equal(h[0], k) and np.array_equal(h[:, 0], k)
            and np.array_equal(h[n], n - k) and np.array_equal(h[:, n], n - k)):
        raise ValueError("boundary heights do not match domain-wall boundary conditions")
    if not ((np.abs(np.diff(h, axis=0)) == 1).all() and (np.abs(np.diff(h, axis=1)) == 1).all()):
        raise ValueError("adjacent heights must differ by exactly 1")


# ---------------------------------------------------------------- move rules

@njit(cache=True, nogil=True)
def _entry(h, i, j):
    return (h[i, j + 1] + h[i + 1, j] - h[i + 1, j + 1] - h[i, j]) // 2


@njit(cache=True, nogil=True)
def _minus_delta(h, a, b, d):
    """Change in the number of -1 entries when h[a, b] moves by 2*d."""
    e1 = _entry(h, a - 1, b - 1)
    e2 = _entry(h, a - 1, b)
    e3 = _entry(h, a, b - 1)
    e4 = _entry(h, a, b)
    before = (e1 == -1) + (e2 == -1) + (e3 == -1) + (e4 == -1)
    after = (e1 - d == -1) + (e2 + d == -1) + (e3 + d == -1) + (e4 - d == -1)
    return after - before


@njit(cache=True, nogil=True)
def _try_move(h, a, b, d, u, weights):
    """One proposal at face (a, b), direction d = +-1; returns 1 if accepted."""
    nb = h[a, b] + d
    if h[a - 1, b] != nb or h[a + 1, b] != nb or h[a, b - 1] != nb or h[a, b + 1] != nb:
        return 0
    w = weights[_minus_delta(h, a, b, d) + 4]
    if w >= 1.0 or u < w:
        h[a, b] += 2 * d
        return 1
    return 0


@njit(cache=True, nogil=True)
def _run_moves(h, sites, dirs, us, weights):
    k = h.shape[0] - 2
    accepted = 0
    for t in range(sites.shape[0]):
        s = sites[t]
        accepted += _try_move(h, s // k + 1, s % k + 1, 2 * dirs[t] - 1, us[t], weights)
    return accepted


@njit(cache=True, nogil=True)
def _accumulate(h, plus, minus, empty):
    n = h.shape[0] - 1
    for i in range(n):
        for j in range(n):
            e = _entry(h, i, j)
            if e == 1:
                plus[i, j] += 1
            elif e == -1:
                minus[i, j] += 1
    for s in range(n + 1):
        for k in range(n + 1):
            if h[s, k] == s + k:
                empty[s, k] += 1


def _weights(q) -> np.ndarray:
    q = float(q)
    if not q > 0:
        raise ValueError(f"q must be positive, got {q}")
    return np.array([min(1.0, q**dk) for dk in range(-4, 5)], dtype=np.float64)


def acceptance_probability(q, dk: int):
    """``min(1, q**dk)``, exact for rational q."""
    q = Fraction(q)
    return min(Fraction(1), q**dk)


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox stream for one chain."""
    return np.random.Generator(np.random.Philox(seed))


def _draw_moves(rng: np.random.Generator, n: int, count: int):
    k2 = (n - 1) ** 2
    sites = rng.integers(0, k2, size=count, dtype=np.int64)
    dirs = rng.integers(0, 2, size=count, dtype=np.int64)
    us = rng.random(count)
    return sites, dirs, us


def step(state: HeightState, q, rng: np.random.Generator) -> HeightState:
    """One Metropolis proposal; returns a new state, equal to the old one if rejected."""
    n = state.n
    if n < 2:
        return state
    sites, dirs, us = _draw_moves(rng, n, 1)
    new = state.copy()
    _run_moves(new.heights, sites, dirs, us, _weights(q))
    return new


def proposals(state: HeightState) -> List[Tuple[Tuple[int, int, int], HeightState, int]]:
    """Admissible moves ``((a, b, d), new_state, dk)`` from ``state``."""
    h = state.heights
    n = state.n
    out = []
    for a in range(1, n):
        for b in range(1, n):
            for d in (-1, 1):
                nb = h[a, b] + d
                if all(v == nb for v in (h[a - 1, b], h[a + 1, b], h[a, b - 1], h[a, b + 1])):
                    dk = int(_minus_delta(h, a, b, d))
                    new = state.copy()
                    new.heights[a, b] += 2 * d
                    out.append(((a, b, d), new, dk))
    return out


def transition_matrix(states: Sequence[HeightState], q) -> List[List[Fraction]]:
    """Exact one-proposal transition matrix of the chain on ``states``."""
    index = {s.key(): i for i, s in enumerate(states)}
    size = len(states)
    n = states[0].n
    n_prop = 2 * (n - 1) ** 2
    P = [[Fraction(0)] * size for _ in range(size)]
    for i, s in enumerate(states):
        stay = Fraction(1)
        for _, new, dk in proposals(s):
            p = acceptance_probability(q, dk) / n_prop
            P[i][index[new.key()]] += p
            stay -= p
        P[i][i] += stay
    return P


# ---------------------------------------------------------------- chains

@dataclass(frozen=True)
class ChainConfig:
    n: int
    q: Fraction
    seed: int
    sweeps_burnin: int = 1000
    sweeps_between: int = 10
    n_samples: int = 1000
    batches: int = 20
    start: str = "minimal"
    allow_large: bool = False

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.n > MAX_N and not self.allow_large:
            raise ValueError(f"n={self.n} exceeds {MAX_N}; pass allow_large=True to override")
        if self.sweeps_burnin < 0 or self.sweeps_between < 1 or self.n_samples < 1 or self.batches < 1:
            raise ValueError("burn-in must be non-negative and other counts positive")
        if self.start not in ("minimal", "maximal"):
            raise ValueError(f"unknown start state {self.start!r}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def experimental(self) -> bool:
        return self.q not in (1, 2, 3)

    def as_dict(self) -> dict:
        return {"n": self.n, "q": f"{self.q.numerator}/{self.q.denominator}", "seed": self.seed,
                "sweeps_burnin": self.sweeps_burnin, "sweeps_between": self.sweeps_between,
                "n_samples": self.n_samples, "batches": self.batches, "start": self.start}


@dataclass
class DensityField:
    """Per-vertex counts of +1 and -1 entries, and per-batch emptiness counts.

    ``empty[b, s, k]`` counts snapshots in batch ``b`` whose first ``s`` rows
    have no nonzero entry in columns ``< k`` (equivalently ``h[s, k] == s + k``).
    """

    n: int
    plus: np.ndarray
    minus: np.ndarray
    empty: np.ndarray
    batch_samples: np.ndarray
    config: Optional[dict] = None
    trace: List[int] = field(default_factory=list)

    @classmethod
    def zeros(cls, n: int, batches: int) -> "DensityField":
        return cls(n, np.zeros((n, n), np.int64), np.zeros((n, n), np.int64),
                   np.zeros((batches, n + 1, n + 1), np.int64), np.zeros(batches, np.int64))

    @property
    def samples(self) -> int:
        return int(self.batch_samples.sum())

    @property
    def plus_density(self) -> np.ndarray:
        return self.plus / self.samples

    @property
    def minus_density(self) -> np.ndarray:
        return self.minus / self.samples

    @property
    def c_density(self) -> np.ndarray:
        return (self.plus + self.minus) / self.samples

    def efp(self, r: int, s: int) -> "EfpEstimate":
        if not (1 <= r <= self.n and 1 <= s <= self.n):
            raise IndexError(f"need 1 <= r, s <= n={self.n}")
        return self._efp_at(s, self.n - r)

    def _efp_at(self, s: int, k: int) -> "EfpEstimate":
        per_batch = self.empty[:, s, k] / np.maximum(self.batch_samples, 1)
        used = self.batch_samples > 0
        value = self.empty[:, s, k].sum() / self.samples
        nb = int(used.sum())
        stderr = float(per_batch[used].std(ddof=1) / math.sqrt(nb)) if nb > 1 else math.nan
        return EfpEstimate(float(value), stderr, self.samples)

    def merge(self, other: "DensityField") -> "DensityField":
        """Pool two independent fields; batches are concatenated."""
        if other.n != self.n:
            raise ValueError("cannot merge fields of different size")
        return DensityField(
            self.n, self.plus + other.plus, self.minus + other.minus,
            np.concatenate([self.empty, other.empty]),
            np.concatenate([self.batch_samples, other.batch_samples]))

    def symmetry_deviation(self) -> float:
        """Largest deviation of the c-density from its images under the square's symmetries.

        The weighted ASM ensemble is invariant under all eight symmetries of the square.
        """
        c = self.c_density
        images = [np.rot90(c, k) for k in range(4)]
        images += [im.T for im in images]
        return float(max(np.abs(c - im).max() for im in images))


class EfpEstimate(NamedTuple):
    value: float
    stderr: float
    samples: int


def _start_state(cfg: ChainConfig) -> HeightState:
    return HeightState.minimal(cfg.n) if cfg.start == "minimal" else HeightState.maximal(cfg.n)


def _advance(h: np.ndarray, rng, n: int, sweeps: int, weights: np.ndarray) -> int:
    per_sweep = (n - 1) ** 2
    accepted = 0
    while sweeps > 0:
        chunk = min(sweeps, _BLOCK_SWEEPS)
        sites, dirs, us = _draw_moves(rng, n, chunk * per_sweep)
        accepted += _run_moves(h, sites, dirs, us, weights)
        sweeps -= chunk
    return accepted


def run_chain(cfg: ChainConfig, observer=None) -> DensityField:
    """Run one chain; ``observer(sample_index, heights)`` is called on each snapshot."""
    n = cfg.n
    rng = make_rng(cfg.seed)
    state = _start_state(cfg)
    h = state.heights
    weights = _weights(cfg.q)
    fld = DensityField.zeros(n, cfg.batches)
    fld.config = cfg.as_dict()
    if n >= 2:
        _advance(h, rng, n, cfg.sweeps_burnin, weights)
    empty_batch = np.zeros((n + 1, n + 1), np.int64)
    for t in range(cfg.n_samples):
        if n >= 2:
            _advance(h, rng, n, cfg.sweeps_between, weights)
        b = t * cfg.batches // cfg.n_samples
        empty_batch[:] = 0
        _accumulate(h, fld.plus, fld.minus, empty_batch)
        fld.empty[b] += empty_batch
        fld.batch_samples[b] += 1
        fld.trace.append(int(np.count_nonzero(
            (h[:-1, 1:] + h[1:, :-1] - h[1:, 1:] - h[:-1, :-1]) == -2)))
        if observer is not None:
            observer(t, h)
    return fld


def sample_density(cfg: ChainConfig) -> DensityField:
    """Density field of one chain; deterministic given the config (seed included)."""
    return run_chain(cfg)


def sample_states(cfg: ChainConfig) -> List[bytes]:
    """Snapshot keys (see :meth:`HeightState.key`) for small-n distribution checks."""
    keys: List[bytes] = []
    run_chain(cfg, observer=lambda t, h: keys.append(h.astype(np.int16).tobytes()))
    return keys


def run_chains(cfgs: Iterable[ChainConfig], threads: int = 1) -> DensityField:
    """Run independent chains (threads share nothing but the merged result)."""
    cfgs = list(cfgs)
    if threads <= 1:
        fields = [run_chain(c) for c in cfgs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            fields = list(pool.map(run_chain, cfgs))
    out = fields[0]
    for f in fields[1:]:
        out = out.merge(f)
    return out


# ---------------------------------------------------------------- observables

class Boundary(NamedTuple):
    points: List[ScaledCoords]
    skipped_rows: int


def empirical_boundary(fld: DensityField, threshold: float = 0.05,
                       observable: str = "c") -> Boundary:
    """Edge of the frozen top-left corner, one point per row of the top half.

    Scans each row from the left edge to the middle for the first cell whose
    density reaches ``threshold`` and interpolates linearly between cell
    centres. ``observable`` is ``"c"`` (nonzero entries) or ``"minus"``.
    """
    if not 0 < threshold < 1:
        raise ValueError("threshold must lie in (0, 1)")
    dens = {"c": fld.c_density, "minus": fld.minus_density}.get(observable)
    if dens is None:
        raise ValueError(f"unknown observable {observable!r}")
    n = fld.n
    pts: List[ScaledCoords] = []
    skipped = 0
    for i in range(n):
        y = (i + 0.5) / n
        if y > 0.5:
            break
        row = dens[i, : (n + 1) // 2 + 1]
        hits = np.flatnonzero(row >= threshold)
        if hits.size == 0:
            skipped += 1
            continue
        j = int(hits[0])
        if j == 0:
            pos = 0.0
        else:
            lo, hi = row[j - 1], row[j]
            pos = j - 1 + (threshold - lo) / (hi - lo)
        pts.append(ScaledCoords((pos + 0.5) / n, y))
    return Boundary(pts, skipped)


def mean_curve_distance(points: Sequence[ScaledCoords], case, resolution: int = 4001) -> float:
    """Mean Euclidean distance from ``points`` to the analytic quarter curve."""
    curve = np.array([[p.x, p.y] for p in curve_sample(Case.parse(case), resolution)])
    pts = np.array([[p.x, p.y] for p in points], dtype=float)
    if pts.size == 0:
        raise ValueError("no boundary points")
    d = np.sqrt(((pts[:, None, :] - curve[None, :, :]) ** 2).sum(-1)).min(axis=1)
    return float(d.mean())


def efp_estimate(cfg: ChainConfig, r: int, s: int) -> EfpEstimate:
    """Monte Carlo estimate of F(r, s) with a batch-means standard error."""
    return sample_density(cfg).efp(r, s)


def efp_profile_estimate(fld: DensityField, s: int) -> List[EfpEstimate]:
    """``[F(r, s) for r = 1 .. n]`` from an existing field."""
    return [fld.efp(r, s) for r in range(1, fld.n + 1)]


def profile_crossing(values: Sequence[float], level: float = 0.5) -> float:
    """Scaled ``x = (n - r)/n`` where the profile ``values[r-1]`` first drops below ``level``.

    Walks from ``r = n`` (x = 0, where F = 1) towards ``r = 1`` and
    interpolates linearly between the two bracketing points.
    """
    n = len(values)
    prev_x, prev_v = 0.0, float(values[n - 1])
    if prev_v < level:
        raise ValueError("profile starts below the level")
    for r in range(n - 1, 0, -1):
        x, v = (n - r) / n, float(values[r - 1])
        if v < level:
            return prev_x + (prev_v - level) / (prev_v - v) * (x - prev_x)
        prev_x, prev_v = x, v
    raise ValueError("profile never drops below the level")


# ---------------------------------------------------------------- persistence

def _rle_row(row: np.ndarray) -> str:
    steps = np.diff(row)
    out = []
    i = 0
    while i < steps.size:
        j = i
        while j < steps.size and steps[j] == steps[i]:
            j += 1
        out.append(("+" if steps[i] > 0 else "-") + str(j - i))
        i = j
    return f"{int(row[0])}:" + "".join(out)


def _unrle_row(text: str) -> List[int]:
    start, _, body = text.partition(":")
    vals = [int(start)]
    i = 0
    while i < len(body):
        sign = 1 if body[i] == "+" else -1
        j = i + 1
        while j < len(body) and body[j].isdigit():
            j += 1
        for _ in range(int(body[i + 1:j])):
            vals.append(vals[-1] + sign)
        i = j
    return vals


def save_snapshot(path, state: HeightState, q, seed: int, sweep: int) -> None:
    """Header line of JSON, then one run-length encoded row of heights per line."""
    q = Fraction(q)
    header = {"n": state.n, "q": f"{q.numerator}/{q.denominator}", "seed": seed, "sweep": sweep}
    with open(path, "w") as fh:
        fh.write(json.dumps(header) + "\n")
        for row in state.heights:
            fh.write(_rle_row(row) + "\n")


def load_snapshot(path) -> Tuple[dict, HeightState]:
    with open(path) as fh:
        header = json.loads(fh.readline())
        rows = [_unrle_row(line.strip()) for line in fh if line.strip()]
    return header, HeightState(rows)


def density_csv(fld: DensityField) -> str:
    lines = ["i,j,c_density,minus_density"]
    c, m = fld.c_density, fld.minus_density
    for i in range(fld.n):
        for j in range(fld.n):
            lines.append(f"{i},{j},{float(c[i, j])!r},{float(m[i, j])!r}")
    return "\n".join(lines) + "\n"


def reachable(start: HeightState) -> Dict[bytes, int]:
    """Breadth-first flip distances from ``start`` over all admissible moves."""
    dist = {start.key(): 0}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for _, new, _ in proposals(s):
            k = new.key()
            if k not in dist:
                dist[k] = dist[s.key()] + 1
                queue.append(new)
    return dist
