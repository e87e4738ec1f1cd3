"""Fixed points as limits of iterates.

For an operator that is contractive, or merely contractive on fixed points,
the iterates ``f^n(x)`` form a coherent sequence whose limit is the unique
fixed point. The level-``n`` observation of that fixed point is therefore
``truncate(n, f^n(x))`` for any seed ``x``; no search for stabilization is
needed.
"""

from __future__ import annotations

import enum
import itertools
import threading
from dataclasses import dataclass, replace
from typing import Any, Callable, Sequence

from .errors import FixcofeError, UnverifiedOperatorError
from .ofe import Instance, Obs, Seq, check_level
from .report import CheckReport


class Mode(enum.Enum):
    CONTRACTIVE = "contractive"
    CFP = "cfp"
    UNVERIFIED = "unverified"


@dataclass(frozen=True)
class Operator:
    """A total endomap on one instance, with a declared contractiveness mode."""

    apply: Callable[[Any], Any]
    instance: Instance
    mode: Mode = Mode.UNVERIFIED
    name: str = "f"

    def __call__(self, a: Any) -> Any:
        return self.apply(a)

    def declare(self, mode: Mode) -> "Operator":
        return replace(self, mode=mode)


def iterate(f: Operator, x0: Any, n: int) -> Any:
    """``f`` applied ``n`` times to ``x0``."""
    x = x0
    for _ in range(check_level(n)):
        x = f(x)
    return x


class FixHandle:
    """Lazily observable fixed point of ``operator`` reached from ``seed``.

    Iterates are computed once and shared between queries and threads.
    """

    def __init__(self, operator: Operator, seed: Any, caveat: str | None = None):
        self.operator = operator
        self.seed = seed
        self.caveat = caveat
        self._iterates = [seed]
        self._lock = threading.Lock()

    @property
    def instance(self) -> Instance:
        return self.operator.instance

    def iterate(self, n: int) -> Any:
        check_level(n)
        with self._lock:
            while len(self._iterates) <= n:
                self._iterates.append(self.operator(self._iterates[-1]))
            return self._iterates[n]

    def query(self, n: int) -> Obs:
        return self.instance.truncate(n, self.iterate(n))

    def as_seq(self) -> Seq:
        return Seq(self.iterate, name=f"{self.operator.name}^n")

    def limit(self) -> Any:
        """The fixed point as an element of the instance."""
        return self.instance.limit(self.as_seq())

    def stabilized_at(self, n: int) -> int | None:
        """Least ``k`` such that every ``f^j`` with ``k <= j <= n`` observes
        like ``f^n`` at level ``n``. Informational only."""
        target = self.query(n)
        k = n
        try:
            while k > 0 and self.instance.truncate(n, self.iterate(k - 1)) == target:
                k -= 1
        except FixcofeError:
            return None
        return k


def fix(f: Operator, x0: Any = None, *, override: bool = False) -> FixHandle:
    """Fixed point of ``f`` reached by iteration from ``x0``.

    Operators declared ``UNVERIFIED`` need ``override=True``; the handle then
    carries a caveat.
    """
    if x0 is None:
        x0 = f.instance.default_seed()
    caveat = None
    if f.mode is Mode.UNVERIFIED:
        if not override:
            raise UnverifiedOperatorError(
                f"operator {f.name!r} is not declared contractive or c.f.p.; "
                "run a checker or pass override=True")
        caveat = f"operator {f.name!r} unverified: observations are iterates, not a proven fixed point"
    return FixHandle(f, x0, caveat)


def iterate_coherence_probe(f: Operator, x0: Any, N: int) -> CheckReport:
    """Check ``f^n(x0) ≡n f^(n+1)(x0)`` for all ``n < N``."""
    if check_level(N) < 1:
        raise ValueError("N must be at least 1")
    inst = f.instance
    handle = FixHandle(f, x0)
    for n in range(N):
        a, b = handle.iterate(n), handle.iterate(n + 1)
        if not inst.approx_eq(n, a, b):
            return CheckReport(
                "iterate-coherence", False, level=n,
                witnesses={"f^n(x)": a, "f^(n+1)(x)": b},
                observations={"f^n(x)": inst.truncate(n, a), "f^(n+1)(x)": inst.truncate(n, b)},
                provenance={"seed": inst.describe(x0), "iterations": n},
                samples=n + 1,
                note=f"f is not contractive on fixed points: iterates split at level {n}",
                predicate=lambda: not inst.approx_eq(n, iterate(f, x0, n), iterate(f, x0, n + 1)),
            )
    return CheckReport.ok("iterate-coherence", samples=N, depth=N)


def seed_independence_probe(f: Operator, seeds: Sequence[Any], N: int) -> CheckReport:
    """Check that all seeds give the same level-``n`` observation of ``f^n``."""
    if len(seeds) < 2:
        raise ValueError("need at least two seeds")
    check_level(N)
    inst = f.instance
    handles = [FixHandle(f, s) for s in seeds]
    for n in range(N + 1):
        obs = [h.query(n) for h in handles]
        for i, j in itertools.combinations(range(len(seeds)), 2):
            if obs[i] != obs[j]:
                return CheckReport(
                    "seed-independence", False, level=n,
                    witnesses={"x": seeds[i], "y": seeds[j]},
                    observations={"f^n(x)": obs[i], "f^n(y)": obs[j]},
                    provenance={"x": inst.describe(seeds[i]), "y": inst.describe(seeds[j]),
                                "iterations": n},
                    samples=n + 1,
                    predicate=lambda i=i, j=j, n=n: (
                        inst.truncate(n, iterate(f, seeds[i], n))
                        != inst.truncate(n, iterate(f, seeds[j], n))),
                )
    return CheckReport.ok("seed-independence", samples=(N + 1) * len(seeds), depth=N,
                          prefix=handles[0].query(N).payload)
