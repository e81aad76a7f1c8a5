"""Interpreter semantics pinned by hand-worked traces, plus property checks."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lockstep.core import (
    Declare,
    Flip,
    FlipNotIn,
    Oscillate,
    PrisonerState,
    Program,
    Repeat,
    See,
    initial_state,
    visit,
)
from lockstep.errors import ConstructionError


def test_flip_waits_on_wrong_config():
    prog = Program("p", (Flip(0, 1),))
    state = initial_state(prog)
    new, out = visit(state, prog, 1)
    assert new == state
    assert (out.new_config, out.fired, out.declared) == (1, False, False)


def test_flip_fires_and_advances():
    prog = Program("p", (Flip(0, 1), Flip(1, 0)))
    state = initial_state(prog)
    new, out = visit(state, prog, 0)
    assert (out.new_config, out.fired, out.declared) == (1, True, False)
    assert new == PrisonerState(cursor=1)


def test_see_fires_without_writing():
    prog = Program("p", (See(2), Flip(0, 1)))
    state, out = visit(initial_state(prog), prog, 2)
    assert (out.new_config, out.fired) == (2, True)
    assert state.cursor == 1


def test_flip_not_in_rewrites_anything_outside_excluded():
    prog = Program("p", (FlipNotIn(frozenset({0, 1}), 1),))
    state = initial_state(prog)
    same, out = visit(state, prog, 1)
    assert not out.fired and same == state
    new, out = visit(state, prog, 3)
    assert out.fired and out.new_config == 1 and new.cursor == 1


def test_trailing_declare_happens_in_the_firing_visit():
    prog = Program("p", (Flip(0, 1), Declare()))
    new, out = visit(initial_state(prog), prog, 0)
    assert (out.new_config, out.fired, out.declared) == (1, True, True)
    assert new.declared and new.cursor == 2


def test_leading_declare_fires_on_any_config():
    prog = Program("p", (Declare(),))
    new, out = visit(initial_state(prog), prog, 7)
    assert (out.new_config, out.fired, out.declared) == (7, False, True)
    assert new.declared


def test_declared_state_is_absorbing():
    prog = Program("p", (Declare(), Flip(0, 1)))
    state, _ = visit(initial_state(prog), prog, 0)
    after, out = visit(state, prog, 0)
    assert after == state and not out.fired and not out.declared


def test_past_end_is_absorbing():
    prog = Program("p", (Flip(0, 1),))
    state, _ = visit(initial_state(prog), prog, 0)
    assert state.cursor == 1
    after, out = visit(state, prog, 0)
    assert after == state and not out.fired and out.new_config == 0


def test_oscillate_counts_net_and_completes_at_quota():
    prog = Program("p", (Oscillate(0, 1, 2), See(0)))
    state = initial_state(prog)
    assert state.osc_net == 0

    state, out = visit(state, prog, 0)  # +1
    assert out.fired and out.new_config == 1 and state.osc_net == 1
    state, out = visit(state, prog, 1)  # -1
    assert out.fired and out.new_config == 0 and state.osc_net == 0
    state, out = visit(state, prog, 0)  # +1
    state, out = visit(state, prog, 0)  # +1 -> quota met
    assert out.fired and out.new_config == 1
    assert state.cursor == 1 and state.osc_net is None


def test_oscillate_waits_on_unrelated_config():
    prog = Program("p", (Oscillate(0, 1, 1),))
    state = initial_state(prog)
    same, out = visit(state, prog, 2)
    assert same == state and not out.fired


def test_oscillate_net_can_go_negative_indefinitely():
    prog = Program("p", (Oscillate(0, 1, 1),))
    state = initial_state(prog)
    for k in range(1, 4):
        state, out = visit(state, prog, 1)
        assert out.new_config == 0 and state.osc_net == -k and state.cursor == 0


def test_repeat_zero_is_skipped_in_flattening():
    prog = Program("p", (Repeat(0, (Flip(0, 1),)), See(1)))
    assert prog.steps == (See(1),)


def test_repeat_flattens_in_order():
    prog = Program("p", (Repeat(3, (Flip(0, 1), Flip(1, 0))),))
    assert prog.steps == (Flip(0, 1), Flip(1, 0)) * 3


@pytest.mark.parametrize(
    "body",
    [
        (Oscillate(0, 1, 0),),
        (Oscillate(1, 1, 1),),
        (Repeat(-1, (Flip(0, 1),)),),
        (Repeat(2, ()),),
        (Flip(0, 5),),
        (See(9),),
    ],
)
def test_validation_rejects_malformed_programs(body):
    with pytest.raises(ConstructionError):
        Program("p", body).validate(3)


def test_initial_state_arms_oscillate_net_only_when_needed():
    assert initial_state(Program("p", (Oscillate(0, 1, 1),))).osc_net == 0
    assert initial_state(Program("p", (Flip(0, 1),))).osc_net is None
    assert initial_state(Program("p", ())).cursor == 0


# -- cursor graphs ----------------------------------------------------------


def test_cursor_graph_of_counting_leader():
    # Repeat(2, Flip(1,0)); Declare -> cursors 0, 1, skipped-Declare slot, done.
    prog = Program("p", (Repeat(2, (Flip(1, 0),)), Declare()))
    graph = prog.cursor_graph(2)
    assert len(graph.nodes) == 4
    assert graph.can_ever_act(graph.initial)
    done = PrisonerState(cursor=3, declared=True)
    assert done in graph.nodes
    assert not graph.can_ever_act(done)


def test_cursor_graph_of_bare_declare():
    graph = Program("p", (Declare(),)).cursor_graph(2)
    assert len(graph.nodes) == 2
    assert graph.can_ever_act(graph.initial)


def test_cursor_graph_clamps_oscillate_nets():
    graph = Program("p", (Oscillate(1, 0, 2),)).cursor_graph(2)
    nets = {node.osc_net for node in graph.nodes if node.cursor == 0}
    assert nets == {-1, 0, 1}
    end = PrisonerState(cursor=1)
    assert end in graph.nodes and not graph.can_ever_act(end)
    assert all(graph.can_ever_act(n) for n in graph.nodes if n.cursor == 0)
    # States below the floor answer like the floor state.
    assert graph.can_ever_act(PrisonerState(cursor=0, osc_net=-40))


def test_watch_only_program_can_never_act():
    # See fires but never reconfigures or declares.
    graph = Program("p", (See(1), See(0))).cursor_graph(2)
    assert not graph.can_ever_act(graph.initial)


def test_cursor_graph_is_cached():
    prog = Program("p", (Flip(0, 1),))
    assert prog.cursor_graph(2) is prog.cursor_graph(2)
    assert prog.cursor_graph(2) is not prog.cursor_graph(3)


# -- properties -------------------------------------------------------------

CONFIGS = st.integers(min_value=0, max_value=2)

_primitive = st.one_of(
    st.builds(Flip, CONFIGS, CONFIGS),
    st.builds(See, CONFIGS),
    st.builds(FlipNotIn, st.frozensets(CONFIGS, max_size=2), CONFIGS),
    st.sampled_from([Oscillate(0, 1, 1), Oscillate(2, 0, 2), Oscillate(1, 2, 1)]),
    st.just(Declare()),
)

_instruction = st.one_of(
    _primitive,
    st.builds(Repeat, st.integers(0, 2), st.lists(_primitive, min_size=1, max_size=2).map(tuple)),
)

programs = st.lists(_instruction, max_size=5).map(lambda body: Program("p", tuple(body)))
observations = st.lists(CONFIGS, max_size=30)


@given(programs, observations)
@settings(max_examples=300)
def test_visit_invariants(prog, obs):
    prog.validate(3)
    state = initial_state(prog)
    for config in obs:
        new, out = visit(state, prog, config)
        if not out.fired and not out.declared:
            assert new == state
            assert out.new_config == config
        assert new.cursor >= state.cursor
        if state.declared:
            assert new == state
        if out.declared:
            assert new.declared
        assert 0 <= out.new_config < 3
        state = new


@given(programs, observations)
@settings(max_examples=200)
def test_can_ever_act_covers_everything_that_acts(prog, obs):
    prog.validate(3)
    graph = prog.cursor_graph(3)
    state = initial_state(prog)
    trail = [state]
    acted = False
    for config in obs:
        state, out = visit(state, prog, config)
        if out.new_config != config or out.declared:
            acted = True
            break
        trail.append(state)
    if acted:
        for node in trail:
            assert graph.can_ever_act(node)
