"""Shift-scheduling model construction and small-instance optimality."""

import pytest

from conftest import desk_instance_paths
from wcfg import files, oracle
from wcfg.scheduling import (DEFAULT_RESTRICTIONS, ScheduleInstance,
                             build_schedule_grammar, build_schedule_model,
                             oracle_min_cost, scaled_restrictions,
                             solve_instance, validate_instance)


def tiny_instance():
    return ScheduleInstance(
        n=6, m=1, activities=["a"], open=[True] * 6,
        demand={"a": [0, 0, 1, 0, 0, 0]},
        restrictions={"P": (3, 4), "F": (6, 6), "L": (1, 1), "W": (1, None)})


def test_default_instance_shape():
    inst = ScheduleInstance()
    assert inst.n == 96 and inst.m == 1
    assert inst.open == [True] * 96
    assert inst.restrictions == DEFAULT_RESTRICTIONS
    assert validate_instance(inst) == []


def test_validate_instance_diagnostics():
    inst = ScheduleInstance(
        n=4, m=1, activities=["a", "b"], open=[True, False, True],
        demand={"a": [1, 0, 0, 0, 0], "q": [0, 0, 0, 0]},
        restrictions={"P": (1, 2), "X": (1, 1)})
    diags = validate_instance(inst)
    assert any("collides with a reserved symbol" in d for d in diags)
    assert any("open mask has length" in d for d in diags)
    assert any("demand row for 'a' has length" in d for d in diags)
    assert any("unknown activity 'q'" in d for d in diags)
    assert any("unknown restriction 'X'" in d for d in diags)

    closed = ScheduleInstance(n=2, m=1, activities=["a"],
                              open=[True, False], demand={"a": [0, 1]})
    assert any("slot 2 is closed" in d for d in validate_instance(closed))


def test_scaled_restrictions():
    assert scaled_restrictions(96) == DEFAULT_RESTRICTIONS
    small = scaled_restrictions(12)
    assert small["L"] == (1, 1)
    assert small["W"][1] is None
    assert all(lo >= 1 for lo, _ in small.values())


def test_schedule_language_texture():
    grammar = build_schedule_grammar(tiny_instance())
    table = oracle.language_of_length(grammar, 6)
    assert table
    for s, w in table.items():
        # rest-padded single shift, and weight counts worked slots
        assert s[0] == "r" and s[-1] == "r"
        assert w == sum(1 for c in s if c == "a")
        assert "l" not in s   # F:(6,6) cannot fit beside the rests


def test_open_mask_gates_work():
    inst = tiny_instance()
    inst.open = [True, True, True, False, True, True]
    inst.demand = {}
    grammar = build_schedule_grammar(inst)
    for s in oracle.language_of_length(grammar, 6):
        assert s[3] != "a"


def test_model_construction_counts():
    inst = ScheduleInstance()    # n=96, m=1, one activity
    sm = build_schedule_model(inst)
    assert len(sm.rows) == 1 and len(sm.z_vars) == 1
    assert len(sm.bool_vars) == 96
    kinds = {}
    for c in sm.model.constraints:
        kinds[type(c).__name__] = kinds.get(type(c).__name__, 0) + 1
    assert kinds["WcfgConstraint"] == 1
    assert kinds["ChannelConstraint"] == 96
    assert "DemandConstraint" not in kinds
    assert kinds["ObjectiveBound"] == 1


def test_model_rejects_invalid_instance():
    inst = ScheduleInstance(n=2, m=1, activities=["r"], open=[True, True])
    with pytest.raises(ValueError):
        build_schedule_model(inst)


def test_instance_file_roundtrip():
    inst = tiny_instance()
    text = files.format_instance(inst)
    back = files.parse_instance(text)
    assert back.n == inst.n and back.m == inst.m
    assert back.activities == inst.activities
    assert back.open == inst.open
    assert back.demand == inst.demand
    assert back.restrictions == inst.restrictions


def test_tiny_instance_optimal_matches_oracle():
    inst = tiny_instance()
    opt = oracle_min_cost(inst)
    result = solve_instance(inst)
    assert result.status == "Optimal"
    assert result.best.cost == opt == 2


def test_desk_instances_exist_and_validate():
    paths = desk_instance_paths()
    assert len(paths) == 10
    for path in paths:
        with open(path) as f:
            inst = files.parse_instance(f.read())
        assert validate_instance(inst) == []
        assert inst.m <= 2 and inst.n <= 16 and len(inst.activities) <= 2
