"""Unique fixed points of step-indexed operators, computed by iteration."""

from .checkers import (Sampler, check_cfp, check_contractive, check_ofe_laws,
                       check_partial_fixpoint_lemma, enumerate_natfun_tables)
from .dsl import ParseError, compile_def, eval_expr, load_def, parse_def, print_def
from .errors import EnumerationCapExceeded, FixcofeError, UnverifiedOperatorError, ValueOverflow
from .fixpoint import FixHandle, Mode, Operator, fix, iterate, iterate_coherence_probe, seed_independence_probe
from .instances import (NATFUN, STREAM, Discrete, Later, NatFun, Product, Stream, later_next,
                        natfun_from_table, product_pair, stream_cons, stream_map, stream_zip)
from .ofe import (DyadicDistance, Instance, Modulus, Obs, Seq, approx_eq, coherence_check,
                  coherent_of_cauchy, distance_at, limit, truncate)
from .report import CheckReport

__all__ = [
    "CheckReport", "Discrete", "DyadicDistance", "EnumerationCapExceeded", "FixHandle",
    "FixcofeError", "Instance", "Later", "Mode", "Modulus", "NATFUN", "NatFun", "Obs",
    "Operator", "ParseError", "Product", "STREAM", "Sampler", "Seq", "Stream",
    "UnverifiedOperatorError", "ValueOverflow", "approx_eq", "check_cfp", "check_contractive",
    "check_ofe_laws", "check_partial_fixpoint_lemma", "coherence_check", "coherent_of_cauchy",
    "compile_def", "distance_at", "enumerate_natfun_tables", "eval_expr", "fix", "iterate",
    "iterate_coherence_probe", "later_next", "limit", "load_def", "natfun_from_table",
    "parse_def", "print_def", "product_pair", "seed_independence_probe", "stream_cons",
    "stream_map", "stream_zip", "truncate",
]
