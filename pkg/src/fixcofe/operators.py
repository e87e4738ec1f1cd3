"""Hand-written operators used by the demos, the checkers' tests and as
oracles for compiled definitions."""

from __future__ import annotations

from .fixpoint import Mode, Operator
from .instances import (NATFUN, STREAM, Discrete, DiscreteElem, NatFun, check_value,
                        stream_cons, stream_map, stream_tail, stream_zip)
from .ofe import Instance


def _succ(v: int) -> int:
    return check_value(v + 1)


def _add(a: int, b: int) -> int:
    return check_value(a + b)


def nested_zero_operator() -> Operator:
    """``T g = λx. if x = 0 then 0 else g(g(x - 1))``."""

    def apply(g: NatFun) -> NatFun:
        return NatFun(lambda x: 0 if x == 0 else g(g(x - 1)), name="T g")

    return Operator(apply, NATFUN, Mode.UNVERIFIED, "T")


def naturals_operator() -> Operator:
    """``s -> cons(0, map(+1, s))``; its fixed point is 0, 1, 2, ..."""
    return Operator(lambda s: stream_cons(0, stream_map(_succ, s)), STREAM,
                    Mode.CONTRACTIVE, "nat")


def fib_operator() -> Operator:
    """``s -> cons(0, cons(1, zip(+, s, tail s)))``."""
    return Operator(lambda s: stream_cons(0, stream_cons(1, stream_zip(_add, s, stream_tail(s)))),
                    STREAM, Mode.CONTRACTIVE, "fib")


SWAP_SPACE = Discrete((0, 1), name="Discrete{0,1}")


def swap_operator() -> Operator:
    """0 <-> 1 on a two-point discrete set; has no fixed point."""
    return Operator(lambda a: DiscreteElem(1 - a.value), SWAP_SPACE, Mode.UNVERIFIED, "swap")


def identity_operator(inst: Instance) -> Operator:
    return Operator(lambda a: a, inst, Mode.UNVERIFIED, "id")
