"""Exactly uniform sampling by monotone coupling from the past, and plain
heat-bath MCMC.

Partitions in a box form a distributive lattice under the cellwise order,
with the all-0 matrix at the bottom and the all-c matrix at the top.  The
heat-bath update ``lo + floor(u * (hi - lo + 1))`` is monotone in the
neighbour bounds, so coupled chains started at the two extremes sandwich
every other chain; once they meet, the common state is an exact draw.

The update at tick ``t`` (time ``-t`` for CFTP) depends only on
``(seed, t)``, so replaying earlier epochs needs no stored randomness.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import floor

import numpy as np

from . import _kernels as K
from .core import (
    BoxDims,
    BppError,
    PlanePartition,
    ShapeMismatch,
    Violation,
    bottom,
    partitions_from_array,
    top,
)

__all__ = [
    "DEFAULT_T_MAX",
    "CoalescenceError",
    "UpdateEvent",
    "parse_seed",
    "update_event",
    "heat_bath_step",
    "dominance",
    "cftp_sample",
    "cftp_arrays",
    "cftp_many",
    "mcmc_chain",
    "mcmc_arrays",
    "derive_seeds",
    "thread_count",
]

DEFAULT_T_MAX = 2**30
_MASK = 2**64 - 1


class CoalescenceError(BppError, RuntimeError):
    """The top and bottom chains did not meet by the maximum epoch."""


def parse_seed(text) -> int:
    """Accept an int or a decimal / ``0x`` hex string; returns a uint64."""
    seed = int(text, 0) if isinstance(text, str) else int(text)
    if not 0 <= seed <= _MASK:
        raise ValueError(f"seed {seed} is not a 64-bit unsigned integer")
    return seed


def thread_count() -> int:
    env = os.environ.get("BPP_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# -- pure-Python mirror of the update stream --------------------------------

def _mix(x: int) -> int:
    x ^= x >> 30
    x = (x * 0xBF58476D1CE4E5B9) & _MASK
    x ^= x >> 27
    x = (x * 0x94D049BB133111EB) & _MASK
    return x ^ (x >> 31)


def _draw53(key: int, t: int) -> int:
    return _mix((key + t * int(K.GOLDEN)) & _MASK) >> 11


@dataclass(frozen=True)
class UpdateEvent:
    time: int  # negative: the CFTP time of this tick
    site: tuple[int, int]  # 1-based (r, j)
    u: float  # in [0, 1), 53-bit resolution


def update_event(dims: BoxDims, seed: int, tick: int) -> UpdateEvent:
    """The update applied at ``tick`` (time ``-tick``) for this seed."""
    if tick < 1:
        raise ValueError("ticks are numbered from 1")
    seed = parse_seed(seed)
    key_u = _mix(seed ^ int(K.SALT_U))
    key_s = _mix(seed ^ int(K.SALT_SITE))
    cell = (_draw53(key_s, tick) * (dims.a * dims.b)) >> 53
    u = _draw53(key_u, tick) / 2.0**53
    return UpdateEvent(-tick, (cell // dims.b + 1, cell % dims.b + 1), u)


def heat_bath_step(state: PlanePartition, site: tuple[int, int], u: float) -> PlanePartition:
    """Resample one cell uniformly between its neighbour bounds."""
    a, b, c = state.dims
    r, j = site
    z = state.z
    lo = max([0] + ([z[r][j - 1]] if r < a else []) + ([z[r - 1][j]] if j < b else []))
    hi = min([c] + ([z[r - 2][j - 1]] if r > 1 else []) + ([z[r - 1][j - 2]] if j > 1 else []))
    # exact: u is a dyadic rational, so this is the true floor
    value = lo + floor(Fraction(u) * (hi - lo + 1))
    row = z[r - 1][: j - 1] + (value,) + z[r - 1][j:]
    return PlanePartition(state.dims, z[: r - 1] + (row,) + z[r:])


def dominance(x: PlanePartition, y: PlanePartition) -> bool:
    """True iff ``x <= y`` in every cell."""
    if x.dims != y.dims:
        raise ShapeMismatch([Violation("shape", None, f"{x.dims} vs {y.dims}")])
    return all(u <= v for rx, ry in zip(x.z, y.z) for u, v in zip(rx, ry))


# -- compiled samplers --------------------------------------------------------

def _check_t(t_start: int, t_max: int) -> None:
    if t_start < 1 or t_start & (t_start - 1):
        raise ValueError("t_start must be a power of two")
    if t_max < t_start:
        raise ValueError("t_max must be >= t_start")


def _split(seeds: np.ndarray, fn):
    """Run ``fn`` on contiguous seed blocks across threads; results are
    concatenated in seed order, so the thread count never changes them."""
    n_threads = min(thread_count(), max(1, len(seeds) // 256))
    if n_threads <= 1:
        return [fn(seeds)]
    blocks = np.array_split(seeds, n_threads)
    with ThreadPoolExecutor(n_threads) as pool:
        return list(pool.map(fn, blocks))


def cftp_arrays(dims: BoxDims, seeds, t_start: int = 1, t_max: int = DEFAULT_T_MAX,
                return_times: bool = False):
    """One exact sample per seed as an ``(N, a, b)`` array.

    With ``return_times`` also returns the coalescence epoch of each seed.
    """
    _check_t(t_start, t_max)
    seeds = np.asarray([parse_seed(s) for s in np.atleast_1d(seeds).tolist()], dtype=np.uint64)
    a, b, c = dims
    parts = _split(seeds, lambda blk: K.cftp_batch(a, b, c, blk, t_start, t_max))
    arr = np.concatenate([p[0] for p in parts]) if parts else np.empty((0, a, b), np.int64)
    times = np.concatenate([p[1] for p in parts]) if parts else np.empty(0, np.int64)
    if (times < 0).any():
        k = int(np.argmax(times < 0))
        raise CoalescenceError(
            f"seed {int(seeds[k])} on {dims}: no coalescence by T={-int(times[k])}"
        )
    return (arr, times) if return_times else arr


def cftp_sample(dims: BoxDims, seed, t_start: int = 1, t_max: int = DEFAULT_T_MAX) -> PlanePartition:
    """One exactly uniform partition, determined by ``(dims, seed)``."""
    arr = cftp_arrays(dims, [seed], t_start, t_max)
    return next(partitions_from_array(arr, dims))


def cftp_many(dims: BoxDims, seeds, **kw) -> list[PlanePartition]:
    return list(partitions_from_array(cftp_arrays(dims, seeds, **kw), dims))


def _start_array(dims: BoxDims, start) -> np.ndarray:
    if isinstance(start, str):
        if start == "bottom":
            start = bottom(dims)
        elif start == "top":
            start = top(dims)
        else:
            raise ValueError(f"start must be 'bottom', 'top' or a partition, got {start!r}")
    if not isinstance(start, PlanePartition) or start.dims != dims:
        got = getattr(start, "dims", type(start).__name__)
        raise ShapeMismatch([Violation("shape", None, f"start {got} does not match {dims}")])
    return start.to_array()


def mcmc_arrays(dims: BoxDims, seeds, sweeps: int, start="bottom") -> np.ndarray:
    if sweeps < 0:
        raise ValueError("sweeps must be >= 0")
    z0 = _start_array(dims, start)
    seeds = np.asarray([parse_seed(s) for s in np.atleast_1d(seeds).tolist()], dtype=np.uint64)
    n_ticks = sweeps * dims.a * dims.b
    parts = _split(seeds, lambda blk: K.mcmc_batch(z0, dims.c, blk, n_ticks))
    return np.concatenate(parts)


def mcmc_chain(dims: BoxDims, seed, sweeps: int, start="bottom") -> PlanePartition:
    """``sweeps * a * b`` random-scan heat-bath updates from ``start``,
    using ticks 1, 2, ... of the seed's update stream."""
    arr = mcmc_arrays(dims, [seed], sweeps, start)
    return next(partitions_from_array(arr, dims))


def derive_seeds(seed, n: int) -> np.ndarray:
    """Per-sample seeds: a keyed function of (seed, index), never a shared
    sequential stream."""
    return K.derive_seeds(np.uint64(parse_seed(seed)), n)
