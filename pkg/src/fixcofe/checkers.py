"""Finite-depth falsifiers for the step-indexed hypotheses.

A counterexample is a genuine refutation and replays on its own; a pass is
evidence up to the explored depth and nothing more. Every report counts how
often a conditional property's premise actually held, so vacuous passes are
visible.
"""

from __future__ import annotations

import itertools
import os
import random
from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Sequence

from .errors import EnumerationCapExceeded
from .fixpoint import FixHandle, Operator
from .instances import NATFUN, NatFun, SampleBounds, natfun_from_prefix
from .ofe import Instance, check_level
from .report import CheckReport

DEFAULT_ENUM_CAP = 10**6


def enumeration_cap() -> int:
    raw = os.environ.get("FIXCOFE_ENUM_CAP")
    return int(raw) if raw else DEFAULT_ENUM_CAP


@dataclass
class Sampler:
    """Deterministic source of elements and correlated pairs for one instance.

    Each generator method restarts from ``seed``, so the same call always
    yields the same sample stream.
    """

    instance: Instance
    seed: int = 0
    prefix_len: int = 8
    max_value: int = 4
    bounds: SampleBounds = field(init=False)

    def __post_init__(self):
        self.bounds = SampleBounds(self.prefix_len, self.max_value)

    def _rng(self, salt: int = 0) -> random.Random:
        return random.Random((self.seed << 8) ^ salt)

    def elements(self, count: int) -> Iterator[Any]:
        rng = self._rng(1)
        for _ in range(count):
            yield self.instance.sample(rng, self.bounds)

    def pairs(self, count: int, max_level: int) -> Iterator[tuple[Any, Any, int]]:
        """``(a, b, n)`` with ``b`` spliced from ``a`` at level ``n``."""
        rng = self._rng(2)
        for _ in range(count):
            a = self.instance.sample(rng, self.bounds)
            n = rng.randint(0, max_level)
            yield a, self.instance.splice(rng, a, n, self.bounds), n

    def triples(self, count: int, max_level: int) -> Iterator[tuple[Any, Any, Any]]:
        rng = self._rng(3)
        inst, bounds = self.instance, self.bounds
        for _ in range(count):
            a = inst.sample(rng, bounds)
            b = inst.splice(rng, a, rng.randint(0, max_level), bounds)
            c = inst.splice(rng, b, rng.randint(0, max_level), bounds)
            yield a, b, c


# ---------------------------------------------------------------------------
# Predicates shared by the checkers and by replay

def contractive_violation(f: Operator, n: int, a: Any, b: Any) -> bool:
    inst = f.instance
    return inst.approx_eq(n, a, b) and not inst.approx_eq(n + 1, f(a), f(b))


def cfp_premise(f: Operator, n: int, a: Any, b: Any) -> bool:
    if n == 0:
        return True
    inst = f.instance
    oa = inst.truncate(n, a)
    return (oa == inst.truncate(n, b) == inst.truncate(n, f(a)) == inst.truncate(n, f(b)))


def cfp_violation(f: Operator, n: int, a: Any, b: Any) -> bool:
    return cfp_premise(f, n, a, b) and not f.instance.approx_eq(n + 1, f(a), f(b))


def lemma_premise(T: Operator, n: int, g: NatFun) -> bool:
    return NATFUN.approx_eq(n, T(g), g)


def lemma_violation(T: Operator, n: int, g: NatFun) -> bool:
    return lemma_premise(T, n, g) and any(g(k) != 0 for k in range(n))


def _pair_failure(name: str, f: Operator, n: int, a, b, prov_a, prov_b, violation,
                  samples: int, hits: int, **info) -> CheckReport:
    inst = f.instance
    fa, fb = f(a), f(b)
    return CheckReport(
        name, False, level=n,
        witnesses={"a": a, "b": b},
        observations={"a": inst.truncate(n, a), "b": inst.truncate(n, b),
                      "f(a)": inst.truncate(n + 1, fa), "f(b)": inst.truncate(n + 1, fb)},
        provenance={"a": prov_a, "b": prov_b, "n": n},
        samples=samples, premise_hits=hits,
        info={"conclusion_level": n + 1, **info},
        predicate=lambda: violation(f, n, a, b),
    )


# ---------------------------------------------------------------------------
# OFE laws

LAWS = ("totality", "reflexivity", "symmetry", "transitivity", "nesting", "restriction")


def law_fails(inst: Instance, law: str, n: int, a: Any, b: Any, c: Any) -> bool:
    eq = inst.approx_eq
    if law == "totality":
        return n == 0 and not eq(0, a, b)
    if law == "reflexivity":
        return not eq(n, a, a)
    if law == "symmetry":
        return eq(n, a, b) != eq(n, b, a)
    if law == "transitivity":
        return eq(n, a, b) and eq(n, b, c) and not eq(n, a, c)
    if law == "nesting":
        return eq(n + 1, a, b) and not eq(n, a, b)
    if law == "restriction":
        return inst.restrict(inst.truncate(n + 1, a), n) != inst.truncate(n, a)
    raise ValueError(f"unknown law {law!r}")


def _law_premise(inst: Instance, law: str, n: int, a, b, c) -> bool:
    if law == "transitivity":
        return inst.approx_eq(n, a, b) and inst.approx_eq(n, b, c)
    if law == "nesting":
        return inst.approx_eq(n + 1, a, b)
    return True


def check_ofe_laws(inst: Instance, s: Sampler, N: int, samples: int = 1000) -> CheckReport:
    """Totality at 0, per-level equivalence laws, nesting and restriction.

    Laws are checked one at a time over the whole sample set, in the order
    of ``LAWS``, so the reported law is the first one that breaks anywhere.
    """
    if check_level(N) < 1:
        raise ValueError("N must be at least 1")
    triples = list(s.triples(samples, N))
    hits = 0
    for law in LAWS:
        levels = [0] if law == "totality" else range(N + 1) if law in (
            "reflexivity", "symmetry", "transitivity") else range(N)
        for i, (a, b, c) in enumerate(triples):
            for n in levels:
                if _law_premise(inst, law, n, a, b, c):
                    hits += 1
                if law_fails(inst, law, n, a, b, c):
                    return CheckReport(
                        "ofe-laws", False, level=n,
                        witnesses={"a": a, "b": b, "c": c},
                        observations={k: inst.truncate(n + 1, v)
                                      for k, v in (("a", a), ("b", b), ("c", c))},
                        provenance={"law": law, "n": n, "a": inst.describe(a),
                                    "b": inst.describe(b), "c": inst.describe(c)},
                        samples=i + 1, premise_hits=hits, info={"law": law},
                        predicate=lambda law=law, n=n, a=a, b=b, c=c: law_fails(inst, law, n, a, b, c),
                    )
    return CheckReport.ok("ofe-laws", samples=len(triples), premise_hits=hits, depth=N,
                          laws=list(LAWS))


# ---------------------------------------------------------------------------
# Exhaustive table enumeration

def enumerate_natfun_tables(L: int, Vmax: int, cap: int | None = None) -> Iterator[NatFun]:
    """All tables with ``f(k) <= Vmax`` for ``k < L`` and default 0, in
    lexicographic order of the prefix."""
    check_level(L)
    check_level(Vmax)
    cap = enumeration_cap() if cap is None else cap
    count = (Vmax + 1) ** L
    if count > cap:
        raise EnumerationCapExceeded(f"{count} tables (L={L}, Vmax={Vmax}) exceeds cap {cap}")
    return (natfun_from_prefix(values, 0)
            for values in itertools.product(range(Vmax + 1), repeat=L))


def _exhaustive_pairs(name: str, f: Operator, N: int, L: int, Vmax: int, *,
                      partial_fixpoints_only: bool, violation, cap: int | None):
    """Group enumerated tables by their level-``n`` observation and compare
    images inside each group; returns (failure or None, premise hits)."""
    tables = list(enumerate_natfun_tables(L, Vmax, cap))
    images = [f(t) for t in tables]
    hits = 0
    for n in range(N):
        groups: dict[Any, list[int]] = {}
        for i, (t, ft) in enumerate(zip(tables, images)):
            key = t.prefix(n)
            if partial_fixpoints_only and ft.prefix(n) != key:
                continue
            groups.setdefault(key, []).append(i)
        for members in groups.values():
            hits += len(members) * (len(members) - 1) // 2
        for members in groups.values():
            first = members[0]
            target = images[first].prefix(n + 1)
            for j in members[1:]:
                if images[j].prefix(n + 1) != target:
                    a, b = tables[first], tables[j]
                    return _pair_failure(name, f, n, a, b, NATFUN.describe(a), NATFUN.describe(b),
                                         violation, hits, hits, source="exhaustive",
                                         tables=len(tables)), hits
    return None, hits


# ---------------------------------------------------------------------------
# Contractiveness

def check_contractive(f: Operator, s: Sampler | None, N: int, samples: int = 1000, *,
                      exhaustive: tuple[int, int] | None = None,
                      pairs: Iterable[tuple[Any, Any]] | None = None,
                      cap: int | None = None) -> CheckReport:
    """Falsify ``a ≡n b ⟹ f(a) ≡(n+1) f(b)`` for ``n < N``.

    Candidates come from explicit ``pairs``, then exhaustive NatFun tables
    ``(L, Vmax)``, then prefix-spliced samples from ``s``.
    """
    if check_level(N) < 1:
        raise ValueError("N must be at least 1")
    inst = f.instance
    hits = tried = 0
    for a, b in pairs or ():
        tried += 1
        for n in range(N):
            if inst.approx_eq(n, a, b):
                hits += 1
                if contractive_violation(f, n, a, b):
                    return _pair_failure("contractive", f, n, a, b, inst.describe(a),
                                         inst.describe(b), contractive_violation, tried, hits,
                                         source="explicit")
    if exhaustive is not None:
        failure, ex_hits = _exhaustive_pairs("contractive", f, N, *exhaustive,
                                             partial_fixpoints_only=False,
                                             violation=contractive_violation, cap=cap)
        if failure is not None:
            return failure
        hits += ex_hits
        tried += ex_hits
    if s is not None:
        for a, b, _ in s.pairs(samples, N):
            tried += 1
            for n in range(N):
                if inst.approx_eq(n, a, b):
                    hits += 1
                    if contractive_violation(f, n, a, b):
                        return _pair_failure("contractive", f, n, a, b, inst.describe(a),
                                             inst.describe(b), contractive_violation, tried, hits,
                                             source="sampled")
    return CheckReport.ok("contractive", samples=tried, premise_hits=hits, depth=N)


def check_cfp(f: Operator, s: Sampler | None, N: int, samples: int = 1000, *,
              iterate_seeds: int = 16,
              exhaustive: tuple[int, int] | None = None,
              pairs: Iterable[tuple[Any, Any]] | None = None,
              seeds: Sequence[Any] | None = None,
              cap: int | None = None) -> CheckReport:
    """Falsify contractiveness on fixed points for ``n < N``.

    Besides explicit and spliced pairs, this compares iterates ``f^n(x)``
    and ``f^n(y)`` of sampled seeds (and spliced neighbours of them), which
    meet the partial-fixed-point premise whenever ``f`` really is c.f.p.
    """
    if check_level(N) < 1:
        raise ValueError("N must be at least 1")
    inst = f.instance
    hits = tried = 0

    def test(n, a, b, prov_a, prov_b, source):
        nonlocal hits
        if cfp_premise(f, n, a, b):
            hits += 1
            if not inst.approx_eq(n + 1, f(a), f(b)):
                return _pair_failure("cfp", f, n, a, b, prov_a, prov_b, cfp_violation,
                                     tried, hits, source=source)
        return None

    for a, b in pairs or ():
        tried += 1
        for n in range(N):
            if (r := test(n, a, b, inst.describe(a), inst.describe(b), "explicit")) is not None:
                return r

    seed_list = list(seeds) if seeds is not None else []
    if s is not None and iterate_seeds:
        seed_list += list(s.elements(iterate_seeds))
    if seed_list:
        handles = [FixHandle(f, x) for x in seed_list]
        rng = random.Random(s.seed if s is not None else 0)
        for n in range(N):
            for i, j in itertools.combinations(range(len(handles)), 2):
                tried += 1
                a, b = handles[i].iterate(n), handles[j].iterate(n)
                prov_a = {"seed": inst.describe(seed_list[i]), "iterations": n}
                prov_b = {"seed": inst.describe(seed_list[j]), "iterations": n}
                if (r := test(n, a, b, prov_a, prov_b, "iterate-pairs")) is not None:
                    return r
            if s is not None:
                for i, h in enumerate(handles):
                    tried += 1
                    a = h.iterate(n)
                    b = inst.splice(rng, a, n, s.bounds)
                    prov_a = {"seed": inst.describe(seed_list[i]), "iterations": n}
                    if (r := test(n, a, b, prov_a, inst.describe(b), "iterate-splice")) is not None:
                        return r

    if exhaustive is not None:
        failure, ex_hits = _exhaustive_pairs("cfp", f, N, *exhaustive,
                                             partial_fixpoints_only=True,
                                             violation=cfp_violation, cap=cap)
        if failure is not None:
            return failure
        hits += ex_hits
        tried += ex_hits

    if s is not None:
        for a, b, _ in s.pairs(samples, N):
            tried += 1
            for n in range(N):
                if (r := test(n, a, b, inst.describe(a), inst.describe(b), "sampled")) is not None:
                    return r
    return CheckReport.ok("cfp", samples=tried, premise_hits=hits, depth=N)


# ---------------------------------------------------------------------------
# Partial fixed points of the nested-zero operator

def check_partial_fixpoint_lemma(T: Operator, L: int, Vmax: int, N: int,
                                 cap: int | None = None) -> CheckReport:
    """Exhaustively check ``T(g) ≡n g ⟹ g(k) = 0 for all k < n`` over every
    table of length ``L`` with values ``<= Vmax`` and every ``n <= N``.

    Tables are visited in lexicographic order with ``n`` ascending, so the
    first counterexample returned is the least one.
    """
    if N > L:
        raise ValueError(f"N={N} must not exceed the table length L={L}")
    hits = tried = 0
    for g in enumerate_natfun_tables(L, Vmax, cap):
        tried += 1
        Tg = T(g)
        for n in range(N + 1):
            if NATFUN.approx_eq(n, Tg, g):
                hits += 1
                if any(g(k) != 0 for k in range(n)):
                    return CheckReport(
                        "lemma", False, level=n,
                        witnesses={"g": g},
                        observations={"g": NATFUN.truncate(n, g), "T(g)": NATFUN.truncate(n, Tg)},
                        provenance={"g": NATFUN.describe(g), "n": n},
                        samples=tried, premise_hits=hits,
                        predicate=lambda n=n, g=g: lemma_violation(T, n, g),
                    )
    return CheckReport.ok("lemma", samples=tried, premise_hits=hits, depth=N, L=L, Vmax=Vmax)
