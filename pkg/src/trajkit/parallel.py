"""Per-trajectory execution over a process pool.

All parallelism in the package lives here.  A frame is partitioned into
per-trajectory segments, an operation runs on each segment (possibly across
worker processes), and results are reassembled by segment index so output
never depends on scheduling.  Randomized operations must derive their RNG
from :func:`segment_rng`, which hashes (global_seed, traj_id); that is what
keeps them reproducible under any worker count.
"""

from __future__ import annotations

import multiprocessing as mp
import os
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import ConfigError, SegmentFailure
from .frame import ColumnMapping, ColumnSpec, TrajectoryFrame, TrajectorySegment, merge, partition

ENV_THREADS = "TRAJKIT_THREADS"

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def default_worker_count() -> int:
    return os.cpu_count() or 1


def resolve_worker_count(flag: int | None = None, config: int | None = None) -> int:
    """Pick the worker count: CLI flag, then config file, then env, then CPUs."""
    for value, label in ((flag, "--threads"), (config, "config field 'threads'")):
        if value is not None:
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(f"{label} must be a positive integer, got {value!r}")
            return value
    env = os.environ.get(ENV_THREADS)
    if env is not None and env.strip() != "":
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(
                f"environment variable {ENV_THREADS} must be an integer, got {env!r}"
            ) from None
        if n < 1:
            raise ConfigError(f"environment variable {ENV_THREADS} must be >= 1, got {n}")
        return n
    return default_worker_count()


@dataclass(frozen=True)
class ExecConfig:
    """Worker count and global seed shared by every pipeline step."""

    worker_count: int = field(default_factory=default_worker_count)
    global_seed: int = 0

    def __post_init__(self):
        if not isinstance(self.worker_count, int) or self.worker_count < 1:
            raise ConfigError(f"worker_count must be >= 1, got {self.worker_count!r}")
        if not isinstance(self.global_seed, int) or not (0 <= self.global_seed < 2**64):
            raise ConfigError(
                f"global_seed must be an unsigned 64-bit integer, got {self.global_seed!r}"
            )


def fnv1a64(data: bytes) -> int:
    """FNV-1a 64-bit hash."""
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _MASK64
    return h


def segment_seed(global_seed: int, traj_id: str) -> int:
    """Stable per-trajectory seed: FNV-1a over the seed's 8 little-endian
    bytes followed by the UTF-8 id bytes."""
    payload = int(global_seed).to_bytes(8, "little") + traj_id.encode("utf-8")
    return fnv1a64(payload)


def segment_rng(global_seed: int, traj_id: str) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(segment_seed(global_seed, traj_id)))


# Worker-side state, filled by the pool initializer.  Under the fork start
# method the arguments are inherited without pickling.
_WORKER_STATE: dict = {}


def _init_worker(segments, op, params) -> None:
    _WORKER_STATE["segments"] = segments
    _WORKER_STATE["op"] = op
    _WORKER_STATE["params"] = params


def _apply_op(op, seg: TrajectorySegment, params: Mapping):
    try:
        return op(seg, **params)
    except SegmentFailure:
        raise
    except Exception as exc:
        raise SegmentFailure(seg.traj_id, f"{type(exc).__name__}: {exc}") from exc


def _run_batch(indices: Sequence[int]) -> list:
    segments = _WORKER_STATE["segments"]
    op = _WORKER_STATE["op"]
    params = _WORKER_STATE["params"]
    return [(i, _apply_op(op, segments[i], params)) for i in indices]


def _pool_context():
    methods = mp.get_all_start_methods()
    return mp.get_context("fork" if "fork" in methods else "spawn")


def _execute(
    frame: TrajectoryFrame,
    op: Callable,
    cfg: ExecConfig,
    params: Mapping | None,
) -> tuple[list[str], list]:
    """Run op on every segment; return (traj_ids, results) in traj_id order."""
    params = dict(params or {})
    segments = partition(frame)
    ids = [seg.traj_id for seg in segments]
    n = len(segments)
    if n == 0:
        return ids, []
    workers = min(cfg.worker_count, n)
    if workers == 1:
        return ids, [_apply_op(op, seg, params) for seg in segments]

    # Several small batches per worker so stragglers balance out.
    batch_count = min(n, workers * 4)
    batches = [b for b in np.array_split(np.arange(n), batch_count) if len(b)]
    results: list = [None] * n
    ctx = _pool_context()
    with ProcessPoolExecutor(
        max_workers=workers,
        mp_context=ctx,
        initializer=_init_worker,
        initargs=(segments, op, params),
    ) as pool:
        futures = [pool.submit(_run_batch, [int(i) for i in batch]) for batch in batches]
        try:
            for fut in as_completed(futures):
                for i, value in fut.result():
                    results[i] = value
        except BaseException:
            for other in futures:
                other.cancel()
            raise
    return results


def map_segments(
    frame: TrajectoryFrame,
    op: Callable,
    cfg: ExecConfig | None = None,
    params: Mapping | None = None,
) -> TrajectoryFrame:
    """Apply a pure segment-to-segment op to every trajectory.

    The op may return None to drop its trajectory entirely.  Output equals
    sequential partition/op/merge regardless of worker count; a failing
    segment aborts the call with a SegmentFailure naming the trajectory.
    """
    cfg = cfg or ExecConfig()
    results = _execute(frame, op, cfg, params)
    kept = [seg for seg in results if seg is not None and len(seg) > 0]
    if not kept:
        return merge([], schema=frame.schema, core=frame.core)
    return merge(kept)


def reduce_segments(
    frame: TrajectoryFrame,
    op: Callable,
    cfg: ExecConfig | None = None,
    params: Mapping | None = None,
) -> dict:
    """Compute a per-trajectory summary; returns {traj_id: value} in id order."""
    cfg = cfg or ExecConfig()
    segments = partition(frame)
    results = _execute(frame, op, cfg, params)
    return {seg.traj_id: value for seg, value in zip(segments, results)}
