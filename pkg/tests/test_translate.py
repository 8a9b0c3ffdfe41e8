"""Translations into the explicit first-order core and the faithfulness grid."""

import pytest
from hypothesis import given, settings

from modalkit.kripke import KripkeModel, eval_deep
from modalkit.syntax import Signature, desugar, parse
from modalkit.translate import (
    CHECK_NAMES,
    CHECK_TRUTH_DEEP_MAX,
    CHECK_TRUTH_DEEP_MIN,
    CHECK_TRUTH_MAX_MIN,
    CHECK_VALIDITY_DEEP_MAX,
    CImp,
    CNot,
    CoreEnv,
    ForallWorld,
    PredR,
    PredV,
    PredW,
    check_faithfulness,
    eval_core,
    print_core,
    translate_max,
    translate_min,
)

from conftest import SIG_P, SIG_PQ, formulas, models


def _core(text, sig=SIG_P):
    return desugar(parse(text, sig), sig)


def test_max_translation_of_box_is_doubly_guarded():
    c = translate_max(_core("box p"))
    assert c == ForallWorld("v0", CImp(PredW("v0"), CImp(PredR("w", "v0"), PredV("p", "v0"))))
    assert print_core(c) == "∀v0. W(v0) -> (R(w,v0) -> V(p,v0))"


def test_min_translation_of_box_has_no_worlds_guard():
    c = translate_min(_core("box p"))
    assert c == ForallWorld("v0", CImp(PredR("w", "v0"), PredV("p", "v0")))
    assert print_core(c) == "∀v0. R(w,v0) -> V(p,v0)"


def test_atom_and_negation_translate_homomorphically():
    assert translate_max(_core("p")) == PredV("p", "w")
    assert translate_max(_core("~p")) == CNot(PredV("p", "w"))
    assert translate_min(_core("q", SIG_PQ)) == PredV("q", "w")


def test_nested_boxes_get_fresh_variables():
    c = translate_min(_core("box box p"))
    assert print_core(c) == "∀v0. R(w,v0) -> (∀v1. R(v0,v1) -> V(p,v1))"


def _count_nodes(c, kind):
    t = type(c)
    n = 1 if t is kind else 0
    if t is CNot:
        return n + _count_nodes(c.body, kind)
    if t is CImp:
        return n + _count_nodes(c.left, kind) + _count_nodes(c.right, kind)
    if t is ForallWorld:
        return n + _count_nodes(c.body, kind)
    return n


@given(formulas(core_only=True))
def test_one_quantifier_per_box(f):
    from modalkit.syntax import Box

    def boxes(g):
        t = type(g)
        if t is Box:
            return 1 + boxes(g.body)
        if hasattr(g, "body"):
            return boxes(g.body)
        if hasattr(g, "left"):
            return boxes(g.left) + boxes(g.right)
        return 0

    assert _count_nodes(translate_max(f), ForallWorld) == boxes(f)
    assert _count_nodes(translate_min(f), PredW) == 0


def test_sugared_input_is_rejected():
    with pytest.raises(ValueError):
        translate_max(parse("dia p", SIG_P))
    with pytest.raises(ValueError):
        translate_min(parse("p & q", SIG_PQ))


# --- core evaluation ---------------------------------------------------------


@pytest.fixture
def loop_model():
    return KripkeModel(
        3,
        worlds=[0, 1, 2],
        rel=[(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (2, 0)],
        val={"p": [0, 2]},
        sig=SIG_P,
    )


def test_min_route_on_loop_model(loop_model):
    c = translate_min(_core("box p"))
    assert eval_core(c, CoreEnv(loop_model, {"w": 2})) is True


def test_max_route_reproduces_falsification(loop_model):
    c = translate_max(_core("box p -> box box p"))
    assert eval_core(c, CoreEnv(loop_model, {"w": 2})) is False


def test_atom_predicate_lookup(loop_model):
    assert eval_core(PredV("p", "w"), CoreEnv(loop_model, {"w": 1})) is False
    assert eval_core(PredV("p", "w"), CoreEnv(loop_model, {"w": 0})) is True


def test_unbound_variable_raises(loop_model):
    with pytest.raises(ValueError):
        eval_core(PredV("p", "z"), CoreEnv(loop_model, {"w": 0}))


def test_unknown_atom_raises(loop_model):
    with pytest.raises(ValueError):
        eval_core(PredV("q", "w"), CoreEnv(loop_model, {"w": 0}))


@given(models(max_worlds=3), formulas(max_leaves=6))
def test_max_route_agrees_with_structural_evaluation(m, f):
    c = translate_max(desugar(f, m.sig))
    for w in sorted(m.worlds):
        assert eval_core(c, CoreEnv(m, {"w": w})) == eval_deep(m, w, f)


@given(models(max_worlds=3, full_designated=True), formulas(max_leaves=6))
def test_min_route_agrees_when_every_world_is_designated(m, f):
    c = translate_min(desugar(f, m.sig))
    for w in sorted(m.worlds):
        assert eval_core(c, CoreEnv(m, {"w": w})) == eval_deep(m, w, f)


# --- the faithfulness grid ---------------------------------------------------

# For one atom at depth 2 there are 25 formulas.  Model slabs up to two
# worlds: n=1 holds 4 models; each of the three designated subsets of n=2
# holds 64.  Truth instances therefore come to
#   25*(1*4 + 1*64 + 1*64 + 2*64) = 6500,
# validity instances to 25*(4 + 3*64) = 4900, and the two minimal-route
# checks each see the fully designated slabs only: 25*(1*4 + 2*64) = 3300.
_EXPECTED_INSTANCES = {
    CHECK_TRUTH_DEEP_MAX: 6500,
    CHECK_VALIDITY_DEEP_MAX: 4900,
    CHECK_TRUTH_DEEP_MIN: 3300,
    CHECK_TRUTH_MAX_MIN: 3300,
}


def test_small_grid_is_clean():
    report = check_faithfulness(SIG_P, 2, 2)
    assert report.ok
    for name in CHECK_NAMES:
        check = report.by_name(name)
        assert check.violation_count == 0
        assert check.instances == _EXPECTED_INSTANCES[name]
        assert check.examples == []


def test_two_atom_grid_is_clean():
    report = check_faithfulness(SIG_PQ, 2, 2)
    assert report.ok


def test_report_render_lists_every_check():
    report = check_faithfulness(SIG_P, 1, 1)
    text = report.render()
    for name in CHECK_NAMES:
        assert name in text
    with pytest.raises(KeyError):
        report.by_name("no-such-check")


def _unguarded_min(f):
    """Deliberately broken minimal translation: drops the R guard."""
    from modalkit.syntax import Atom, Box, Implies, Not

    def go(g, cur, counter):
        t = type(g)
        if t is Atom:
            return PredV(g.name, cur)
        if t is Not:
            return CNot(go(g.body, cur, counter))
        if t is Implies:
            return CImp(go(g.left, cur, counter), go(g.right, cur, counter))
        v = f"v{counter[0]}"
        counter[0] += 1
        return ForallWorld(v, go(g.body, v, counter))

    return go(f, "w", [0])


def test_dropping_the_r_guard_is_caught():
    report = check_faithfulness(SIG_P, 2, 2, translate_min_fn=_unguarded_min)
    assert not report.ok
    assert report.by_name(CHECK_TRUTH_DEEP_MIN).violation_count > 0
    assert report.by_name(CHECK_TRUTH_MAX_MIN).violation_count > 0
    # the max route is untouched
    assert report.by_name(CHECK_TRUTH_DEEP_MAX).violation_count == 0
    assert report.by_name(CHECK_VALIDITY_DEEP_MAX).violation_count == 0
    ex = report.by_name(CHECK_TRUTH_DEEP_MIN).examples[0]
    assert ex.check == CHECK_TRUTH_DEEP_MIN and ex.formula


def test_swapping_max_for_min_is_caught():
    report = check_faithfulness(SIG_P, 2, 2, translate_max_fn=translate_min)
    assert not report.ok
    # only partially designated slabs can tell the two routes apart, so the
    # damage is confined to the checks that visit them
    assert report.by_name(CHECK_TRUTH_DEEP_MAX).violation_count == 166
    assert report.by_name(CHECK_VALIDITY_DEEP_MAX).violation_count > 0
    assert report.by_name(CHECK_TRUTH_DEEP_MIN).violation_count == 0
    assert report.by_name(CHECK_TRUTH_MAX_MIN).violation_count == 0


def test_parallel_grid_matches_serial():
    serial = check_faithfulness(SIG_P, 2, 2)
    parallel = check_faithfulness(SIG_P, 2, 2, jobs=2)
    for name in CHECK_NAMES:
        assert serial.by_name(name).instances == parallel.by_name(name).instances
        assert serial.by_name(name).violation_count == parallel.by_name(name).violation_count
