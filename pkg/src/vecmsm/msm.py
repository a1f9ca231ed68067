"""Pippenger multi-scalar multiplication over the lazy-reduction adders.

Scalars are sliced into w-bit windows (ceil(253/w) groups for the BLS12-377
scalar field).  Bucket accumulation adds stream points into per-group
buckets with the mixed adder; bucket aggregation folds each group with two
sequential running sums and group aggregation combines groups Horner-style
with w doublings per step, both built only on the complete adder since
every step depends on the previous one.

schedule_accumulation models the accumulation pipeline: one adder issue
per cycle with a fixed occupancy L per bucket, one arrival per cycle, and
a deferral window (FIFO) holding arrivals whose bucket is still busy; the
oldest deferred operation whose bucket is free issues first.
"""

from collections import defaultdict, deque
from dataclasses import dataclass
from heapq import heappop, heappush

from . import curve as cv
from .oracle import AffinePoint

SCALAR_BITS = 253


@dataclass(frozen=True)
class MsmConfig:
    window_bits: int = 13
    scalar_bits: int = SCALAR_BITS
    pipeline_latency: int = 260

    def __post_init__(self):
        if self.window_bits < 1:
            raise ValueError("window_bits must be >= 1")

    @property
    def groups(self) -> int:
        return -(-self.scalar_bits // self.window_bits)

    @property
    def buckets_per_group(self) -> int:
        return (1 << self.window_bits) - 1


def slice_scalars(s: int, cfg: MsmConfig) -> list[int]:
    """Little-endian w-bit digits; they recompose to s exactly."""
    if not 0 <= s < (1 << cfg.scalar_bits):
        raise ValueError("scalar out of range")
    w = cfg.window_bits
    mask = (1 << w) - 1
    return [(s >> (w * g)) & mask for g in range(cfg.groups)]


class Engine:
    """Adder operation table; 'int' is the fast path, 'limb' the vector model."""

    def __init__(self, name: str, ctx: cv.PaddContext):
        self.name = name
        self.ctx = ctx
        if name == "int":
            self.identity = lambda: cv.identity_ext_int(ctx)
            self.from_affine = lambda pt: cv.input_from_affine_int(pt, ctx)
            self.mixed = lambda p, q: cv.mixed_padd_int(p, q, ctx)
            self.complete = lambda p, q: cv.complete_padd_int(p, q, ctx)
            self.to_affine = lambda p: cv.to_affine_int(p, ctx)
        elif name == "limb":
            self.identity = cv.identity_ext
            self.from_affine = lambda pt: cv.input_from_affine(pt, ctx)
            self.mixed = lambda p, q: cv.mixed_padd(p, q, ctx)
            self.complete = lambda p, q: cv.complete_padd(p, q, ctx)
            self.to_affine = lambda p: cv.to_affine(p, ctx)
        else:
            raise ValueError(f"unknown engine {name!r}")


def _promote(entry, q, eng: "Engine"):
    """Add a stream point into a bucket; empty buckets start at identity."""
    return eng.mixed(eng.identity() if entry is None else entry, q)


def bucket_accumulate(points, digit_rows, cfg: MsmConfig, eng: Engine):
    """buckets[g][d-1] = sum of points whose group-g digit equals d."""
    buckets = [[None] * cfg.buckets_per_group for _ in range(cfg.groups)]
    for q, digits in zip(points, digit_rows):
        for g, d in enumerate(digits):
            if d:
                buckets[g][d - 1] = _promote(buckets[g][d - 1], q, eng)
    return buckets


def bucket_aggregate(bucket_row, eng: Engine):
    """sum(d * bucket[d]) by two chained running sums (complete adds only)."""
    running = eng.identity()
    total = eng.identity()
    for entry in reversed(bucket_row):
        if entry is not None:
            running = eng.complete(running, entry)
        total = eng.complete(total, running)
    return total


def group_aggregate(group_results, cfg: MsmConfig, eng: Engine):
    """Horner combination: w doublings between successive groups."""
    acc = group_results[-1]
    for res in reversed(group_results[:-1]):
        for _ in range(cfg.window_bits):
            acc = eng.complete(acc, acc)
        acc = eng.complete(acc, res)
    return acc


def msm(scalars, points, cfg: MsmConfig, ctx: cv.PaddContext | None = None,
        engine: str = "int") -> AffinePoint:
    """Full Pippenger pipeline; result canonicalized to affine."""
    if len(scalars) != len(points):
        raise ValueError("scalars and points must have equal length")
    ctx = ctx or cv.make_context()
    eng = Engine(engine, ctx)
    if not scalars:
        return AffinePoint.identity()
    r = ctx.curve.r
    for s in scalars:
        if not 0 <= s < r:
            raise ValueError("scalar exceeds the group order")
    stream = [eng.from_affine(pt) for pt in points]
    digit_rows = [slice_scalars(s, cfg) for s in scalars]
    buckets = bucket_accumulate(stream, digit_rows, cfg, eng)
    per_group = [bucket_aggregate(row, eng) for row in buckets]
    return eng.to_affine(group_aggregate(per_group, cfg, eng))


# -- accumulation pipeline schedule ----------------------------------------

@dataclass(frozen=True)
class ScheduleReport:
    total_cycles: int
    stalls: int
    max_fifo_depth: int
    issues: int

    @property
    def issue_utilization(self) -> float:
        return self.issues / self.total_cycles if self.total_cycles else 1.0


def schedule_accumulation(arrivals, cfg: MsmConfig, eng: Engine | None = None,
                          ctx: cv.PaddContext | None = None,
                          nbuckets: int | None = None):
    """Simulate one-issue-per-cycle accumulation with a collision FIFO.

    arrivals: ordered (bucket_index, stream_point) pairs, one arriving per
    cycle.  An arrival whose bucket is occupied (busy until a later cycle)
    waits in the deferral window; each cycle the oldest waiting operation
    with a free bucket issues.  Returns (report, buckets); bucket contents
    equal bucket_accumulate on the same multiset regardless of order.
    """
    if eng is None:
        eng = Engine("int", ctx or cv.make_context())
    L = cfg.pipeline_latency
    if L <= 0:
        raise ValueError("pipeline latency must be positive")
    n = len(arrivals)
    nbuckets = nbuckets if nbuckets is not None else cfg.buckets_per_group
    buckets = [None] * nbuckets
    if n == 0:
        return ScheduleReport(0, 0, 0, 0), buckets
    pending: dict[int, deque] = defaultdict(deque)
    ready: list = []       # heap of (arrival_seq, bucket), lazily invalidated
    frees: list = []       # heap of (cycle, bucket)
    busy: dict[int, int] = {}
    t = i = issued = stalls = depth = max_depth = last_issue = 0
    while issued < n:
        while frees and frees[0][0] <= t:
            _, b = heappop(frees)
            if pending[b]:
                heappush(ready, (pending[b][0][0], b))
        if i < n:
            b, op = arrivals[i]
            pending[b].append((i, op))
            if busy.get(b, 0) <= t and len(pending[b]) == 1:
                heappush(ready, (i, b))
            i += 1
            depth += 1
        fired = False
        while ready:
            seq, b = heappop(ready)
            if not pending[b] or pending[b][0][0] != seq or busy.get(b, 0) > t:
                continue
            _, op = pending[b].popleft()
            buckets[b] = _promote(buckets[b], op, eng)
            busy[b] = t + L
            heappush(frees, (t + L, b))
            last_issue = t
            issued += 1
            depth -= 1
            fired = True
            break
        if not fired:
            stalls += 1
        if depth > max_depth:
            max_depth = depth
        t += 1
    return ScheduleReport(last_issue + L + 1, stalls, max_depth, issued), buckets


def schedule_accumulation_naive(arrivals, cfg: MsmConfig, eng: Engine | None = None,
                                ctx: cv.PaddContext | None = None,
                                nbuckets: int | None = None):
    """Independent re-simulation with a plain scanned list; oracle for tests."""
    if eng is None:
        eng = Engine("int", ctx or cv.make_context())
    L = cfg.pipeline_latency
    n = len(arrivals)
    nbuckets = nbuckets if nbuckets is not None else cfg.buckets_per_group
    buckets = [None] * nbuckets
    if n == 0:
        return ScheduleReport(0, 0, 0, 0), buckets
    window: list = []
    busy = defaultdict(int)
    t = i = issued = stalls = max_depth = last_issue = 0
    while issued < n:
        if i < n:
            window.append((i, arrivals[i]))
            i += 1
        for j, (seq, (b, op)) in enumerate(window):
            if busy[b] <= t:
                window.pop(j)
                buckets[b] = _promote(buckets[b], op, eng)
                busy[b] = t + L
                last_issue = t
                issued += 1
                break
        else:
            stalls += 1
        max_depth = max(max_depth, len(window))
        t += 1
    return ScheduleReport(last_issue + L + 1, stalls, max_depth, issued), buckets
