"""Emulated 8-lane vector machine with seven-way VLIW slot accounting.

Kernels written against VectorMachine compute exact integer results and,
when recording is on, leave a trace of typed operations.  A greedy
in-order packer folds the trace into VLIW bundles under a per-bundle slot
capacity table; the default models one vector op, one scalar op, two
loads, one store and one stream access per direction, seven slots total.
Counts are structural lower bounds: no software pipelining or compiler
scheduling is modeled, so comparisons should use orderings and ratios.
"""

from collections import Counter
from dataclasses import dataclass, field

VECTOR, SCALAR, LOAD, STORE = "vector", "scalar", "load", "store"
STREAM_R, STREAM_W = "stream_read", "stream_write"

DEFAULT_CAPACITIES = {VECTOR: 1, SCALAR: 1, LOAD: 2, STORE: 1,
                      STREAM_R: 1, STREAM_W: 1}


@dataclass(frozen=True)
class SlotPolicy:
    capacities: tuple = tuple(sorted(DEFAULT_CAPACITIES.items()))
    width: int = 7

    def capacity(self, slot_class: str) -> int:
        return dict(self.capacities).get(slot_class, 0)


DEFAULT_POLICY = SlotPolicy()


@dataclass(frozen=True)
class VecOp:
    opcode: str
    slot_class: str
    dest: int
    srcs: tuple
    region: str


@dataclass
class VecTrace:
    ops: list = field(default_factory=list)

    @property
    def operations(self) -> int:
        return len(self.ops)

    def instructions(self, policy: SlotPolicy = DEFAULT_POLICY) -> int:
        return pack_vliw(self.ops, policy)

    def class_counts(self) -> Counter:
        return Counter(op.slot_class for op in self.ops)

    def region_ops(self, prefix: str) -> list:
        return [op for op in self.ops if op.region.startswith(prefix)]

    def regions(self) -> list:
        seen = []
        for op in self.ops:
            if op.region not in seen:
                seen.append(op.region)
        return seen

    def vliw_utilization(self, policy: SlotPolicy = DEFAULT_POLICY) -> float:
        instr = self.instructions(policy)
        return self.operations / instr if instr else 0.0

    def summary(self, policy: SlotPolicy = DEFAULT_POLICY) -> dict:
        instr = self.instructions(policy)
        out = {"instructions": instr, "operations": self.operations,
               "vliw_utilization": round(self.operations / instr, 4) if instr else 0.0}
        for cls, cnt in sorted(self.class_counts().items()):
            out[f"ops_{cls}"] = cnt
        return out

    def to_text(self) -> str:
        """One op per line: opcode, slot class, dest, operand ids, region."""
        lines = [f"{op.opcode} {op.slot_class} d{op.dest} "
                 f"[{','.join(f'd{s}' for s in op.srcs)}] {op.region}"
                 for op in self.ops]
        return "\n".join(lines) + ("\n" if lines else "")


def pack_vliw(ops, policy: SlotPolicy = DEFAULT_POLICY) -> int:
    """Greedy in-order bundle packing under slot capacities and RAW deps.

    An op joins the current bundle unless its slot class is exhausted, the
    bundle is full, or one of its sources is produced inside the bundle.
    Deterministic by construction.
    """
    bundles = 0
    used: Counter = Counter()
    produced: set = set()
    slots = 0
    for op in ops:
        cap = policy.capacity(op.slot_class)
        fits = (slots < policy.width and used[op.slot_class] < cap
                and not any(s in produced for s in op.srcs))
        if not fits:
            bundles += 1
            used.clear()
            produced.clear()
            slots = 0
        used[op.slot_class] += 1
        produced.add(op.dest)
        slots += 1
    return bundles + (1 if slots else 0)


class ProgramError(ValueError):
    pass


class VectorMachine:
    """Executes lane arithmetic; optionally records a VecTrace.

    Values are immutable tuples of signed ints (8 or 16 lanes) or scalar
    ints, addressed by the integer ids the op methods return alongside the
    payload.  Recording changes nothing about the numerics, so traced and
    direct runs of a kernel are bit-identical by construction.
    """

    def __init__(self, record: bool = False):
        self.record = record
        self.trace = VecTrace()
        self._values: dict[int, object] = {}
        self._next = 0
        self._region = "main"

    # region labelling: nested regions build dotted paths -------------------
    def region(self, name: str):
        vm = self

        class _Region:
            def __enter__(self):
                self.saved = vm._region
                vm._region = name if vm._region == "main" else f"{vm._region}.{name}"
                return vm

            def __exit__(self, *exc):
                vm._region = self.saved
                return False

        return _Region()

    # plumbing --------------------------------------------------------------
    def _emit(self, opcode, slot_class, payload, srcs):
        vid = self._next
        self._next += 1
        self._values[vid] = payload
        if self.record:
            self.trace.ops.append(VecOp(opcode, slot_class, vid, tuple(srcs),
                                        self._region))
        return vid

    def value(self, vid: int):
        if vid not in self._values:
            raise ProgramError(f"undefined value id {vid}")
        return self._values[vid]

    def _lanes(self, vid):
        v = self.value(vid)
        if not isinstance(v, tuple):
            raise ProgramError("expected a vector value")
        return v

    def _scalar(self, vid):
        v = self.value(vid)
        if isinstance(v, tuple):
            raise ProgramError("expected a scalar value")
        return v

    # loads / stores / streams ----------------------------------------------
    def vload(self, lanes):
        return self._emit("vload", LOAD, tuple(lanes), ())

    def sload(self, x: int):
        return self._emit("sload", LOAD, int(x), ())

    def vstore(self, vid):
        self._lanes(vid)
        return self._emit("vstore", STORE, None, (vid,))

    def stream_read(self, lanes):
        return self._emit("stream_read", STREAM_R, tuple(lanes), ())

    def stream_write(self, vid):
        return self._emit("stream_write", STREAM_W, None, (vid,))

    def cascade_read(self, lanes):
        return self._emit("cascade_read", STREAM_R, tuple(lanes), ())

    def cascade_write(self, vid):
        return self._emit("cascade_write", STREAM_W, None, (vid,))

    # vector unit ------------------------------------------------------------
    def _buffer(self, src):
        """A MAC data buffer: one vector id or a tuple of ids, concatenated."""
        ids = src if isinstance(src, tuple) else (src,)
        lanes: list = []
        for vid in ids:
            lanes.extend(self._lanes(vid))
        return ids, lanes

    def vmac8(self, acc, a, select, b, b_lane):
        """acc[i] += a[select[i]] * b[b_lane]; None selects a zero operand.

        a and b may be single vectors or tuples of vectors forming a wider
        selection buffer, mirroring the wide MAC input registers.
        """
        a_ids, av = self._buffer(a)
        b_ids, bv = self._buffer(b)
        accv = self._lanes(acc)
        mul = bv[b_lane]
        out = tuple(accv[i] + (av[s] * mul if s is not None else 0)
                    for i, s in enumerate(select))
        return self._emit("vmac8", VECTOR, out, (acc,) + a_ids + b_ids)

    def vmul8(self, a, b):
        av, bv = self._lanes(a), self._lanes(b)
        return self._emit("vmul8", VECTOR, tuple(x * y for x, y in zip(av, bv)), (a, b))

    def vadd8(self, a, b):
        av, bv = self._lanes(a), self._lanes(b)
        return self._emit("vadd8", VECTOR, tuple(x + y for x, y in zip(av, bv)), (a, b))

    def vsub8(self, a, b):
        av, bv = self._lanes(a), self._lanes(b)
        return self._emit("vsub8", VECTOR, tuple(x - y for x, y in zip(av, bv)), (a, b))

    def vshr8(self, a, k: int):
        av = self._lanes(a)
        return self._emit("vshift8", VECTOR, tuple(x >> k for x in av), (a,))

    def vshl8(self, a, k: int):
        av = self._lanes(a)
        return self._emit("vshift8", VECTOR, tuple(x << k for x in av), (a,))

    def vshuffle(self, picks, *sources):
        """out[i] = sources[si][lane] for picks[i] = (si, lane); None -> 0."""
        vals = [self.value(s) for s in sources]
        out = []
        for pick in picks:
            if pick is None:
                out.append(0)
                continue
            si, lane = pick
            v = vals[si]
            out.append(v[lane] if isinstance(v, tuple) else v)
        return self._emit("vselect8", VECTOR, tuple(out), tuple(sources))

    def vinsert(self, a, lane: int, scalar):
        av = list(self._lanes(a))
        av[lane] = self._scalar(scalar)
        return self._emit("vselect8", VECTOR, tuple(av), (a, scalar))

    # scalar unit ------------------------------------------------------------
    def vextract(self, a, lane: int):
        return self._emit("scalar_alu", SCALAR, self._lanes(a)[lane], (a,))

    def sadd(self, a, b):
        return self._emit("scalar_alu", SCALAR, self._scalar(a) + self._scalar(b), (a, b))

    def ssub(self, a, b):
        return self._emit("scalar_alu", SCALAR, self._scalar(a) - self._scalar(b), (a, b))

    def sshr(self, a, k: int):
        return self._emit("scalar_alu", SCALAR, self._scalar(a) >> k, (a,))

    def sshl(self, a, k: int):
        return self._emit("scalar_alu", SCALAR, self._scalar(a) << k, (a,))
