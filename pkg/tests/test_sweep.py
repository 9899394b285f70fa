import numpy as np
import pytest

from drrquanta import FlowSpec, SystemSpec, is_feasible_exact, is_feasible_modified
from drrquanta.errors import GridTooLarge
from drrquanta.sweep import SweepGrid, classify, format_cells, midpoint_audit, parse_grid

COUNTER = SystemSpec(40, 3, (FlowSpec(10, 1, 1), FlowSpec(10, 1, 1)))
THREE_FLOW = SystemSpec(100, 1, (FlowSpec(10, 1, 1), FlowSpec(15, 2, 1), FlowSpec(10, 1, 0.5)))


def test_parse_grid():
    g = parse_grid("0,1,1,3,2,4,0.5")
    assert (g.i, g.j, g.step) == (0, 1, 0.5)
    assert g.axis(g.lo_i, g.hi_i) == [1.0, 1.5, 2.0, 2.5, 3.0]
    assert g.size == 25
    with pytest.raises(ValueError):
        parse_grid("0,1,1,3")
    with pytest.raises(ValueError):
        parse_grid("0,0,1,3,1,3,1")
    with pytest.raises(ValueError):
        parse_grid("0,1,1,3,1,3,0")


def test_classify_matches_library():
    grid = parse_grid("0,1,1,15,1,15,1")
    cells = classify(COUNTER, grid)
    assert len(cells) == 225
    for c in cells:
        q = (c.q_i, c.q_j)
        assert c.exact_feasible == is_feasible_exact(COUNTER, q)
        assert c.modified_feasible == is_feasible_modified(COUNTER, q)
        expected = "h2" if c.linear_term_sign > 0 else "h1"
        assert c.active_branch == expected


def test_exact_set_nonconvex_modified_convex():
    grid = parse_grid("0,1,1,15,1,15,1")
    cells = classify(COUNTER, grid)
    audit = midpoint_audit(COUNTER, grid, cells)
    assert audit.exhaustive
    assert audit.exact_violations > 0
    assert audit.modified_violations == 0


def test_sampled_audit_is_seeded():
    grid = parse_grid("0,1,1,15,1,15,1")
    cells = classify(COUNTER, grid)
    a = midpoint_audit(COUNTER, grid, cells, max_pairs=50, seed=3)
    b = midpoint_audit(COUNTER, grid, cells, max_pairs=50, seed=3)
    assert a == b and not a.exhaustive and a.modified_violations == 0


def test_three_flow_sweep_needs_fixed():
    with pytest.raises(ValueError):
        classify(THREE_FLOW, parse_grid("0,2,1,2,1,2,1"))
    cells = classify(THREE_FLOW, parse_grid("0,2,1,2,1,2,1", [1, 5, 1]))
    assert len(cells) == 4


def test_grid_too_large_and_bad_index():
    with pytest.raises(GridTooLarge):
        classify(COUNTER, parse_grid("0,1,1,100,1,100,1"), max_cells=100)
    with pytest.raises(ValueError):
        classify(COUNTER, parse_grid("0,2,1,2,1,2,1"))


def test_format():
    grid = parse_grid("0,1,5,6,9,9,1")
    cells = classify(COUNTER, grid)
    text = format_cells(cells, midpoint_audit(COUNTER, grid, cells))
    lines = text.splitlines()
    assert lines[0].startswith("# midpoint audit")
    assert lines[1].split("\t")[0] == "q_i"
    assert lines[2].split("\t")[:4] == ["5.0", "9.0", "true", "false"]
    assert format_cells([], None) == ""
    assert classify(COUNTER, SweepGrid(0, 1, 5, 4, 1, 2, 1)) == []
