"""Shared strategies and an independent reference evaluator.

The naive evaluator here is deliberately written from scratch against the
connective semantics (including sugar) rather than reusing the package's
desugaring pipeline, so differential tests compare two genuinely separate
routes to the same truth value.
"""

import hypothesis.strategies as st

from modalkit.kripke import KripkeModel
from modalkit.syntax import (And, Atom, Bot, Box, Dia, Implies, Not, Or,
                             Signature, Top)

SIG_P = Signature(("p",))
SIG_PQ = Signature(("p", "q"))


def formulas(sig=SIG_PQ, max_leaves=10, core_only=False):
    atoms = st.sampled_from([Atom(a) for a in sig.atoms])
    if core_only:
        leaves = atoms
        unary = [Not, Box]
        binary = [Implies]
    else:
        leaves = st.one_of(atoms, st.just(Top()), st.just(Bot()))
        unary = [Not, Box, Dia]
        binary = [Implies, And, Or]

    def extend(children):
        return st.one_of(
            st.builds(lambda f, c: f(c), st.sampled_from(unary), children),
            st.builds(lambda f, a, b: f(a, b), st.sampled_from(binary),
                      children, children),
        )

    return st.recursive(leaves, extend, max_leaves=max_leaves)


@st.composite
def models(draw, sig=SIG_PQ, max_worlds=3, full_designated=False):
    n = draw(st.integers(min_value=1, max_value=max_worlds))
    dom = st.integers(min_value=0, max_value=n - 1)
    if full_designated:
        worlds = frozenset(range(n))
    else:
        worlds = frozenset(draw(st.sets(dom, min_size=1)))
    rel = draw(st.sets(st.tuples(dom, dom)))
    val = {a: draw(st.sets(dom)) for a in sig.atoms}
    return KripkeModel(n, worlds, rel, val, sig)


def naive_eval(m: KripkeModel, w: int, f) -> bool:
    """Straight recursive semantics over all connectives, sugar included."""
    succ = [v for v in sorted(m.worlds) if (w, v) in m.rel]
    if isinstance(f, Atom):
        return w in m.val[f.name]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Not):
        return not naive_eval(m, w, f.body)
    if isinstance(f, Implies):
        return not naive_eval(m, w, f.left) or naive_eval(m, w, f.right)
    if isinstance(f, And):
        return naive_eval(m, w, f.left) and naive_eval(m, w, f.right)
    if isinstance(f, Or):
        return naive_eval(m, w, f.left) or naive_eval(m, w, f.right)
    if isinstance(f, Box):
        return all(naive_eval(m, v, f.body) for v in succ)
    if isinstance(f, Dia):
        return any(naive_eval(m, v, f.body) for v in succ)
    raise TypeError(f"unknown node {f!r}")
