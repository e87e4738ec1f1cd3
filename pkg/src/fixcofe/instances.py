"""Concrete instances: prefix-equality functions on naturals, streams,
discrete sets, binary products and the one-step later shift."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Any, Callable, Hashable, Mapping, Sequence

from .errors import ValueOverflow
from .ofe import Instance, Seq

VALUE_MAX = 2**64 - 1


def check_value(v: Any) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise TypeError(f"values must be naturals, got {v!r}")
    if v < 0 or v > VALUE_MAX:
        raise ValueOverflow(f"value {v} outside 0..2^64-1")
    return v


@dataclass(frozen=True)
class SampleBounds:
    prefix_len: int = 8
    max_value: int = 4


class _Memo:
    """Argument -> value cache; concurrent recomputation is harmless."""

    __slots__ = ("_memo", "_lock")

    def __init__(self):
        self._memo: dict[int, int] = {}
        self._lock = threading.Lock()

    def get(self, k: int, compute: Callable[[int], int]) -> int:
        try:
            return self._memo[k]
        except KeyError:
            pass
        v = check_value(compute(k))
        with self._lock:
            return self._memo.setdefault(k, v)


# ---------------------------------------------------------------------------
# Functions N -> N with prefix equality

class NatFun:
    """A total function on naturals, memoized per argument.

    ``table``/``default`` are kept when the function was built from a finite
    table so it can be described and rebuilt exactly.
    """

    __slots__ = ("_fn", "_memo", "table", "default", "name")

    def __init__(self, fn: Callable[[int], int], *, table: Mapping[int, int] | None = None,
                 default: int | None = None, name: str | None = None):
        self._fn = fn
        self._memo = _Memo()
        self.table = dict(table) if table is not None else None
        self.default = default
        self.name = name

    def __call__(self, k: int) -> int:
        return self._memo.get(k, self._fn)

    def prefix(self, n: int) -> tuple[int, ...]:
        return tuple(self(k) for k in range(n))

    def __repr__(self) -> str:
        if self.table is not None:
            return f"NatFun({self.table}, default={self.default})"
        return f"NatFun({self.name or '<fn>'})"


def natfun_from_table(entries: Mapping[int, int], default: int = 0) -> NatFun:
    table = {}
    for k, v in entries.items():
        if isinstance(k, bool) or not isinstance(k, int) or k < 0:
            raise ValueError(f"table keys must be naturals, got {k!r}")
        table[k] = check_value(v)
    default = check_value(default)
    return NatFun(lambda k: table.get(k, default), table=table, default=default)


def natfun_from_prefix(values: Sequence[int], default: int = 0) -> NatFun:
    return natfun_from_table(dict(enumerate(values)), default)


def natfun(fn: Callable[[int], int], name: str | None = None) -> NatFun:
    return NatFun(fn, name=name)


def zero_fn() -> NatFun:
    return natfun_from_table({}, 0)


def identity_fn() -> NatFun:
    return NatFun(lambda k: k, name="id")


def const_fn(c: int) -> NatFun:
    return natfun_from_table({}, c)


class NatFunSpace(Instance):
    """``f ≡n g`` iff ``f(k) = g(k)`` for every ``k < n``."""

    name = "NatFun"
    element_types = (NatFun,)

    def observe(self, n, f):
        return f.prefix(n)

    def restrict_payload(self, payload, n, m):
        return payload[:m]

    def limit(self, seq: Seq) -> NatFun:
        return NatFun(lambda k: seq(k + 1)(k), name=f"lim {seq.name}")

    def default_seed(self) -> NatFun:
        return zero_fn()

    def sample(self, rng, bounds: SampleBounds) -> NatFun:
        values = [rng.randint(0, bounds.max_value) for _ in range(bounds.prefix_len)]
        return natfun_from_prefix(values, rng.randint(0, bounds.max_value))

    def splice(self, rng, a: NatFun, n: int, bounds: SampleBounds) -> NatFun:
        entries = {k: a(k) for k in range(n)}
        for k in range(n, max(n, bounds.prefix_len)):
            entries[k] = rng.randint(0, bounds.max_value)
        return natfun_from_table(entries, rng.randint(0, bounds.max_value))

    def describe(self, f: NatFun):
        if f.table is None:
            return {"name": f.name}
        return {"entries": sorted([k, v] for k, v in f.table.items()), "default": f.default}

    def decode(self, desc: Mapping[str, Any]) -> NatFun:
        return natfun_from_table({int(k): int(v) for k, v in desc["entries"]},
                                 int(desc.get("default", 0)))


NATFUN = NatFunSpace()


# ---------------------------------------------------------------------------
# Streams of naturals

class Stream:
    """Infinite stream given by an index -> value procedure."""

    __slots__ = ("_at", "_memo", "name")

    def __init__(self, at: Callable[[int], int], name: str | None = None):
        self._at = at
        self._memo = _Memo()
        self.name = name

    def __getitem__(self, i: int) -> int:
        return self._memo.get(i, self._at)

    def take(self, n: int) -> tuple[int, ...]:
        return tuple(self[i] for i in range(n))

    def __repr__(self) -> str:
        return f"Stream({self.name or '<gen>'})"


def stream_from_list(values: Sequence[int], default: int = 0) -> Stream:
    vals = tuple(check_value(v) for v in values)
    default = check_value(default)
    return Stream(lambda i: vals[i] if i < len(vals) else default,
                  name=f"{list(vals)}++{default}...")


def constant_stream(c: int) -> Stream:
    return stream_from_list((), c)


def zeros() -> Stream:
    return constant_stream(0)


def ones() -> Stream:
    return constant_stream(1)


def naturals() -> Stream:
    return Stream(lambda i: i, name="naturals")


def stream_cons(h: int, t: Stream) -> Stream:
    h = check_value(h)
    return Stream(lambda i: h if i == 0 else t[i - 1], name="cons")


def stream_tail(s: Stream) -> Stream:
    return Stream(lambda i: s[i + 1], name="tail")


def stream_map(g: Callable[[int], int], s: Stream) -> Stream:
    return Stream(lambda i: g(s[i]), name="map")


def stream_zip(g: Callable[[int, int], int], s: Stream, t: Stream) -> Stream:
    return Stream(lambda i: g(s[i], t[i]), name="zip")


class StreamSpace(Instance):
    """Streams compared on their first ``n`` values."""

    name = "Stream"
    element_types = (Stream,)

    def observe(self, n, s):
        return s.take(n)

    def restrict_payload(self, payload, n, m):
        return payload[:m]

    def limit(self, seq: Seq) -> Stream:
        return Stream(lambda i: seq(i + 1)[i], name=f"lim {seq.name}")

    def default_seed(self) -> Stream:
        return zeros()

    def sample(self, rng, bounds: SampleBounds) -> Stream:
        values = [rng.randint(0, bounds.max_value) for _ in range(bounds.prefix_len)]
        return stream_from_list(values, rng.randint(0, bounds.max_value))

    def splice(self, rng, a: Stream, n: int, bounds: SampleBounds) -> Stream:
        values = list(a.take(n))
        values += [rng.randint(0, bounds.max_value) for _ in range(max(0, bounds.prefix_len - n))]
        return stream_from_list(values, rng.randint(0, bounds.max_value))

    def describe(self, s: Stream):
        return {"name": s.name}


STREAM = StreamSpace()


# ---------------------------------------------------------------------------
# Discrete sets

@dataclass(frozen=True)
class DiscreteElem:
    value: Hashable


class Discrete(Instance):
    """Equal at every positive level exactly when the values are equal.

    ``universe`` is only needed for sampling; without it samples are drawn
    from ``0..max_value``.
    """

    element_types = (DiscreteElem,)

    def __init__(self, universe: Sequence[Hashable] | None = None, name: str = "Discrete"):
        self.universe = tuple(universe) if universe is not None else None
        self.name = name

    def observe(self, n, a):
        return (a.value,)

    def restrict_payload(self, payload, n, m):
        return payload

    def limit(self, seq: Seq) -> DiscreteElem:
        # Coherence makes seq(1), seq(2), ... all equal.
        return seq(1)

    def sample(self, rng, bounds: SampleBounds) -> DiscreteElem:
        if self.universe is not None:
            return DiscreteElem(rng.choice(self.universe))
        return DiscreteElem(rng.randint(0, bounds.max_value))

    def splice(self, rng, a, n, bounds):
        return self.sample(rng, bounds) if n == 0 else a

    def describe(self, a):
        return {"value": a.value}


def discrete(value: Hashable) -> DiscreteElem:
    return DiscreteElem(value)


# ---------------------------------------------------------------------------
# Products and the later shift

@dataclass(frozen=True, eq=False)
class ProductElem:
    left: Any
    right: Any


class Product(Instance):
    element_types = (ProductElem,)

    def __init__(self, left: Instance, right: Instance):
        self.left = left
        self.right = right
        self.name = f"{left.name} x {right.name}"

    def contains(self, a):
        if isinstance(a, ProductElem):
            return self.left.contains(a.left) and self.right.contains(a.right)
        return super().contains(a)

    def observe(self, n, a):
        return (self.left.truncate(n, a.left).payload, self.right.truncate(n, a.right).payload)

    def restrict_payload(self, payload, n, m):
        pl, pr = payload
        return (self.left.restrict_payload(pl, n, m), self.right.restrict_payload(pr, n, m))

    def limit(self, seq: Seq) -> ProductElem:
        return ProductElem(self.left.limit(Seq(lambda n: seq(n).left, name="fst")),
                           self.right.limit(Seq(lambda n: seq(n).right, name="snd")))

    def default_seed(self):
        return ProductElem(self.left.default_seed(), self.right.default_seed())

    def sample(self, rng, bounds):
        return ProductElem(self.left.sample(rng, bounds), self.right.sample(rng, bounds))

    def splice(self, rng, a, n, bounds):
        return ProductElem(self.left.splice(rng, a.left, n, bounds),
                           self.right.splice(rng, a.right, n, bounds))

    def describe(self, a):
        return {"left": self.left.describe(a.left), "right": self.right.describe(a.right)}


def product_pair(a: Any, b: Any) -> ProductElem:
    return ProductElem(a, b)


@dataclass(frozen=True, eq=False)
class LaterElem:
    wrapped: Any


class Later(Instance):
    """``next a ≡(n+1) next b`` iff ``a ≡n b``."""

    element_types = (LaterElem,)

    def __init__(self, inner: Instance):
        self.inner = inner
        self.name = f"Later({inner.name})"

    def contains(self, a):
        if isinstance(a, LaterElem):
            return self.inner.contains(a.wrapped)
        return super().contains(a)

    def observe(self, n, a):
        return (self.inner.truncate(n - 1, a.wrapped).payload,)

    def restrict_payload(self, payload, n, m):
        (inner,) = payload
        if m == 1:
            return ((),)
        return (self.inner.restrict_payload(inner, n - 1, m - 1),)

    def limit(self, seq: Seq) -> LaterElem:
        return LaterElem(self.inner.limit(Seq(lambda n: seq(n + 1).wrapped, name="unshift")))

    def default_seed(self):
        return LaterElem(self.inner.default_seed())

    def sample(self, rng, bounds):
        return LaterElem(self.inner.sample(rng, bounds))

    def splice(self, rng, a, n, bounds):
        if n == 0:
            return self.sample(rng, bounds)
        return LaterElem(self.inner.splice(rng, a.wrapped, n - 1, bounds))

    def describe(self, a):
        return {"next": self.inner.describe(a.wrapped)}


def later_next(a: Any) -> LaterElem:
    return LaterElem(a)
