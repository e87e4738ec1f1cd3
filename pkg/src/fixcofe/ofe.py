"""Step-indexed equality: observations, instances, sequences and limits.

Every instance decides ``a ≡n b`` by comparing canonical finite observations
of the two elements at level ``n``. Level 0 always observes the empty tuple,
so ``≡0`` is total everywhere.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable

from .report import CheckReport

EMPTY: tuple = ()


def check_level(n: int) -> int:
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"level must be a natural number, got {n!r}")
    return n


@dataclass(frozen=True)
class Obs:
    """Level-``level`` observation of an element."""

    level: int
    payload: Any = EMPTY


class Instance:
    """A complete ordered family of equivalences, decided by observation.

    Subclasses implement :meth:`observe` (levels >= 1), :meth:`restrict_payload`
    and usually :meth:`limit`, plus the sampling hooks used by the checkers.
    """

    name = "instance"
    element_types: tuple[type, ...] = ()

    def __repr__(self) -> str:
        return self.name

    def contains(self, a: Any) -> bool:
        return isinstance(a, (LazyLimit,) + self.element_types)

    def _require(self, a: Any) -> None:
        if not self.contains(a):
            raise TypeError(f"{a!r} is not an element of {self.name}")

    # -- observation -----------------------------------------------------
    def observe(self, n: int, a: Any) -> Any:
        raise NotImplementedError

    def restrict_payload(self, payload: Any, n: int, m: int) -> Any:
        """Restrict a level-``n`` payload to level ``m`` (1 <= m <= n)."""
        raise NotImplementedError

    def truncate(self, n: int, a: Any) -> Obs:
        check_level(n)
        if isinstance(a, LazyLimit):
            return self.truncate(n, a.seq(n))
        self._require(a)
        if n == 0:
            return Obs(0)
        return Obs(n, self.observe(n, a))

    def restrict(self, obs: Obs, m: int) -> Obs:
        check_level(m)
        if m > obs.level:
            raise ValueError(f"cannot restrict a level-{obs.level} observation to level {m}")
        if m == 0:
            return Obs(0)
        if m == obs.level:
            return obs
        return Obs(m, self.restrict_payload(obs.payload, obs.level, m))

    def approx_eq(self, n: int, a: Any, b: Any) -> bool:
        if check_level(n) == 0:
            return True
        return self.truncate(n, a) == self.truncate(n, b)

    # -- completeness ----------------------------------------------------
    def limit(self, seq: "Seq") -> Any:
        return LazyLimit(seq)

    # -- hooks for seeds and sampling -------------------------------------
    def default_seed(self) -> Any:
        raise NotImplementedError(f"{self.name} has no default seed; pass one explicitly")

    def sample(self, rng, bounds) -> Any:
        raise NotImplementedError

    def splice(self, rng, a: Any, n: int, bounds) -> Any:
        """Random element sharing ``a``'s level-``n`` observation."""
        raise NotImplementedError

    def describe(self, a: Any) -> Any:
        return {"observation": repr(a)}


class Seq:
    """A total sequence ``n -> element``; entries are computed once."""

    def __init__(self, gen: Callable[[int], Any], name: str = "s"):
        self._gen = gen
        self.name = name
        self._memo: dict[int, Any] = {}
        self._lock = threading.Lock()

    def __call__(self, n: int) -> Any:
        check_level(n)
        try:
            return self._memo[n]
        except KeyError:
            pass
        value = self._gen(n)
        with self._lock:
            return self._memo.setdefault(n, value)

    def __repr__(self) -> str:
        return f"Seq({self.name})"


class LazyLimit:
    """Observation-only limit: level ``n`` forces exactly ``seq(n)``."""

    __slots__ = ("seq",)

    def __init__(self, seq: Seq):
        self.seq = seq

    def __repr__(self) -> str:
        return f"lim {self.seq!r}"


class Modulus:
    """Cauchy modulus, made monotone by a running maximum."""

    def __init__(self, k: Callable[[int], int]):
        self._k = k
        self._prefix_max: list[int] = []

    def raw(self, n: int) -> int:
        value = self._k(check_level(n))
        return check_level(value)

    def __call__(self, n: int) -> int:
        check_level(n)
        while len(self._prefix_max) <= n:
            i = len(self._prefix_max)
            prev = self._prefix_max[-1] if self._prefix_max else 0
            self._prefix_max.append(max(prev, self.raw(i)))
        return self._prefix_max[n]


@dataclass(frozen=True)
class DyadicDistance:
    """``2**-exponent``, either exactly or as an upper bound."""

    exact: bool
    exponent: int

    @classmethod
    def Exact(cls, exponent: int) -> "DyadicDistance":
        return cls(True, exponent)

    @classmethod
    def AtMost(cls, exponent: int) -> "DyadicDistance":
        return cls(False, exponent)

    @property
    def value(self) -> Fraction:
        return Fraction(1, 2 ** self.exponent)

    def __str__(self) -> str:
        rel = "=" if self.exact else "<="
        return f"d {rel} 2^-{self.exponent}"


# Module-level operations taking the instance explicitly.

def truncate(inst: Instance, n: int, a: Any) -> Obs:
    return inst.truncate(n, a)


def approx_eq(inst: Instance, n: int, a: Any, b: Any) -> bool:
    return inst.approx_eq(n, a, b)


def distance_at(inst: Instance, a: Any, b: Any, res: int) -> DyadicDistance:
    """Distance between ``a`` and ``b`` resolved up to level ``res``."""
    if check_level(res) < 1:
        raise ValueError("resolution must be at least 1")
    for m in range(1, res + 1):
        if not inst.approx_eq(m, a, b):
            return DyadicDistance.Exact(m - 1)
    return DyadicDistance.AtMost(res)


def limit(inst: Instance, s: Seq | Callable[[int], Any]) -> Any:
    if not isinstance(s, Seq):
        s = Seq(s)
    return inst.limit(s)


def lazy_limit(s: Seq | Callable[[int], Any]) -> LazyLimit:
    return LazyLimit(s if isinstance(s, Seq) else Seq(s))


def coherence_check(inst: Instance, s: Seq | Callable[[int], Any], N: int) -> CheckReport:
    """Check ``s(n) ≡n s(n+1)`` for every ``n < N``."""
    if check_level(N) < 1:
        raise ValueError("N must be at least 1")
    for n in range(N):
        a, b = s(n), s(n + 1)
        if not inst.approx_eq(n, a, b):
            return CheckReport(
                "coherence", False, level=n,
                witnesses={"s(n)": a, "s(n+1)": b},
                observations={"s(n)": inst.truncate(n, a), "s(n+1)": inst.truncate(n, b)},
                provenance={"index": n},
                samples=n + 1,
                predicate=lambda a=a, b=b, n=n: not inst.approx_eq(n, a, b),
            )
    return CheckReport.ok("coherence", samples=N, depth=N)


def coherent_of_cauchy(inst: Instance, s: Seq | Callable[[int], Any],
                       m: Modulus | Callable[[int], int]) -> Seq:
    """Coherent subsequence ``y(n) = s(max(m(0), ..., m(n+1)))``."""
    if not isinstance(m, Modulus):
        m = Modulus(m)
    return Seq(lambda n: s(m(n + 1)), name="coherent")


def observations(inst: Instance, a: Any, levels: Iterable[int]) -> list[Obs]:
    return [inst.truncate(n, a) for n in levels]
