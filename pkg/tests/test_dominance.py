import pytest

from linsys.dominance import (
    dominance_of,
    dominant_reduce,
    dominant_subsystems,
    lower_bound_strong,
    lower_bound_weak,
    reduction_sequence,
    render_standard,
    standard_form,
)
from linsys.eqsys import ZEquation, parse_system, render_system
from linsys.errors import GuardExceeded
from linsys.systems import builtin


def test_dominance_of_single_sided():
    sw = builtin("SW")
    assert dominance_of(sw.equations[0]) is None  # x1 - x2 - x3 + x4
    d = dominance_of(sw.equations[1])             # x1 - 2x3 + x5
    assert d.indices == (2,) and d.coefficient == 2


def test_dominance_of_two_sided():
    eq = ZEquation((0, 3, 0, 0, -3))
    d = dominance_of(eq)
    assert d.indices == (1, 4) and d.coefficient == 3


def test_dominance_of_requires_balance():
    with pytest.raises(ValueError):
        dominance_of(ZEquation((1, 1)))


def test_standard_form_and_render():
    sw = builtin("SW")
    sf = standard_form(sw.equations[1])
    assert sf.index == 2 and sf.coefficient == 2
    assert sf.rhs == ((0, 1), (4, 1))
    names = tuple(f"x{i}" for i in range(1, 6))
    assert render_standard(sf, names) == "2x3 = x1 + x5"
    # two-sided tie resolves to the smaller index
    sf2 = standard_form(ZEquation((0, 1, 0, 0, -1)))
    assert sf2.index == 1
    assert render_standard(sf2, names) == "x2 = x5"


def test_standard_form_rejects_non_dominant():
    with pytest.raises(ValueError):
        standard_form(builtin("SW").equations[0])


def test_dominant_subsystems_s2():
    rep = dominant_subsystems(builtin("S2"))
    assert rep.dominant_equations == (0, 2)
    assert rep.table[1] is None
    assert rep.table[0].coefficient == 4 and rep.table[2].coefficient == 2
    # only the full pair covers all seven variables and stays connected
    assert rep.irreducible_subsystems == (((0, 2), 4),)
    assert rep.subset_enumeration_complete


def test_dominant_subsystems_sw_and_spp():
    rep = dominant_subsystems(builtin("SW"))
    assert rep.dominant_equations == (1,)
    assert rep.irreducible_subsystems == ()  # x1 - 2x3 + x5 misses x2, x4
    rep = dominant_subsystems(builtin("SPP"))
    assert rep.dominant_equations == ()
    assert rep.table == (None, None)


def test_greedy_reduction_s3_frozen_trace():
    tr = reduction_sequence(builtin("S3"), "greedy")
    assert tr.terminated and tr.b_tilde == 2
    assert [st.subsystem for st in tr.steps] == [(2,), (0,), (0,)]
    assert render_system(tr.steps[0].result) == (
        "-x3 + x4 = 0\nx_{1_2_6} - x3 - x4 + x5 = 0"
    )
    assert render_system(tr.steps[1].result) == "x_{1_2_6} - 2x_{3_4} + x5 = 0"
    terminal = tr.terminal
    assert terminal.r == 1 and terminal.L == 0


def test_dominant_reduce_matches_first_greedy_step():
    s3 = builtin("S3")
    reduced = dominant_reduce(s3, (2,))
    assert render_system(reduced) == "-x3 + x4 = 0\nx_{1_2_6} - x3 - x4 + x5 = 0"


def test_greedy_vs_exhaustive_s2():
    s2 = builtin("S2")
    greedy = reduction_sequence(s2, "greedy")
    assert len(greedy.steps) == 1 and greedy.b_tilde == 4
    assert greedy.steps[0].subsystem == (0, 2)
    best = reduction_sequence(s2, "exhaustive")
    assert best.b_tilde == 3 and len(best.steps) == 3
    assert [st.subsystem for st in best.steps] == [(2,), (1,), (0,)]
    assert [st.coefficient for st in best.steps] == [2, 1, 3]
    # middle step leaves the 4-variable row 3x_j = x + y + z
    assert [e.coeffs for e in best.steps[1].result.equations] == [(1, -3, 1, 1)]


@pytest.mark.parametrize("workers", [1, 2, 4, 8])
def test_exhaustive_is_worker_count_invariant(workers):
    tr = reduction_sequence(builtin("S2"), "exhaustive", workers=workers)
    assert tr.b_tilde == 3
    assert [st.subsystem for st in tr.steps] == [(2,), (1,), (0,)]
    assert [st.merge_map for st in tr.steps] == [
        st.merge_map for st in reduction_sequence(builtin("S2"), "exhaustive").steps
    ]


def test_exhaustive_guard():
    lines = "\n".join(f"x{i} - x{i + 1} = 0" for i in range(1, 14))
    s = parse_system(lines)
    assert s.L == 13
    with pytest.raises(GuardExceeded):
        reduction_sequence(s, "exhaustive")


def test_reduction_none_when_stuck():
    assert reduction_sequence(builtin("SW"), "greedy") is None
    assert reduction_sequence(builtin("SW"), "exhaustive") is None
    assert reduction_sequence(builtin("SPP"), "greedy") is None


def test_reduction_strategy_validation():
    with pytest.raises(ValueError):
        reduction_sequence(builtin("S3"), "fastest")


def test_lower_bound_strong_s3():
    tr = reduction_sequence(builtin("S3"), "greedy")
    rep = lower_bound_strong(tr, 3)
    assert rep.kind == "strong" and rep.asymptotic
    assert rep.b == 2 and rep.floor_term == 2
    assert rep.base == pytest.approx((1 - 1 / 16) * 2)
    assert rep.simple_base == 1.5
    rep7 = lower_bound_strong(tr, 7, epsilon=1 / 8)
    assert rep7.floor_term == 4 and rep7.base == pytest.approx(3.5)


def test_lower_bound_strong_validation():
    tr = reduction_sequence(builtin("S3"), "greedy")
    with pytest.raises(ValueError):
        lower_bound_strong(tr, 4)          # not prime
    with pytest.raises(ValueError):
        lower_bound_strong(tr, 2)          # p <= b~
    with pytest.raises(ValueError):
        lower_bound_strong(tr, 3, epsilon=0.0)
    with pytest.raises(ValueError):
        lower_bound_strong(tr, 3, epsilon=1.0)
    # a trace that never terminates cannot feed the bound
    from linsys.dominance import ReductionTrace
    with pytest.raises(ValueError):
        lower_bound_strong(ReductionTrace(builtin("SW"), ()), 3)


def test_lower_bound_weak():
    rep = lower_bound_weak(builtin("SW"), 5)
    assert rep.kind == "weak" and rep.b == 2 and rep.base == 2.5
    assert rep.asymptotic and rep.epsilon is None
    assert lower_bound_weak(builtin("SPP"), 3) is None
    # b = 2 requires p > 2
    assert lower_bound_weak(builtin("SW"), 2) is None
