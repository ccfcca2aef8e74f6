import math

import numpy as np
import pytest

from csitdmt import oracle
from csitdmt.dmt import dmt_causal
from csitdmt.model import ChannelConfig
from csitdmt.oracle import (GridSpec, brute_force_min,
                            exact_outage_rayleigh_siso)


def _scalar_spec(budget, step=0.01):
    return GridSpec(
        bounds=[(0.0, 2.0, step)],
        objective=lambda X: X[:, 0],
        budget=budget,
        pos_terms=lambda X: 1.0 - X,
    )


def test_scalar_program_minimum():
    # min a  s.t. (1 - a)_+ <= 0.5, a >= 0  ->  a = 0.5
    res = brute_force_min(_scalar_spec(0.5))
    assert res.feasible
    assert abs(res.value - 0.5) < 1e-9
    assert abs(res.argmin[0] - 0.5) < 1e-9


def test_negative_budget_reports_infeasible_on_grid():
    res = brute_force_min(_scalar_spec(-1.0))
    assert not res.feasible
    assert math.isinf(res.value)


def test_grid_cap_enforced():
    g = _scalar_spec(0.5)
    g.cap = 10
    with pytest.raises(ValueError):
        brute_force_min(g)
    with pytest.raises(ValueError):
        brute_force_min(GridSpec(bounds=[(0.0, 1.0, -0.1)],
                                 objective=lambda X: X[:, 0]))


def test_grid_refinement_never_worsens_beyond_lipschitz():
    coarse = brute_force_min(_scalar_spec(0.5, step=0.1)).value
    fine = brute_force_min(_scalar_spec(0.5, step=0.05)).value
    # objective has Lipschitz constant 1 in the scanned variable
    assert fine <= coarse + 1e-12
    assert coarse - fine <= 1.0 * 0.1


def test_exact_siso_outage_values():
    v = exact_outage_rayleigh_siso(100.0, 1.0)
    assert abs(v - (1.0 - math.exp(-0.01))) < 1e-15
    assert abs(v - 0.00995016625) < 1e-9
    assert exact_outage_rayleigh_siso(1e12, 1.0) < 1e-11
    assert exact_outage_rayleigh_siso(100.0, 1e-12) < 1e-13
    with pytest.raises(ValueError):
        exact_outage_rayleigh_siso(0.0, 1.0)
    with pytest.raises(ValueError):
        exact_outage_rayleigh_siso(1.0, 0.0)


def test_causal_grid_matches_lp_on_reference_point():
    step = 0.05
    val = oracle.causal_dmt_grid(0.0, 1.0, 1, 1, 1, 2, step)
    lp = dmt_causal(0.0, 1.0, 1, ChannelConfig(1, 1, 2))
    assert abs(val - lp) <= step * 2  # tolerance: step x variable count


def test_causal_grid_zero_quality_collapses_to_uniform():
    from csitdmt.model import dmt_uniform
    step = 0.05
    cfg = ChannelConfig(1, 2, 2)
    for r in (0.0, 0.5):
        val = oracle.causal_dmt_grid(r, 0.0, 1, 1, 2, 2, step)
        assert abs(val - dmt_uniform(r, cfg)) <= step * 2


def test_vector_grid_agrees_with_general_grid():
    # two independent transcriptions of the same scalar-channel program
    step = 0.05
    for (r, delta, u, n, B) in [(0.0, 1.0, 1, 1, 2), (0.5, 0.5, 1, 2, 2)]:
        a = oracle.causal_vector_dmt_grid(r, delta, u, n, B, step)
        nt, nr = (1, n)
        b = oracle.causal_dmt_grid(r, delta, u, nt, nr, B, step)
        assert abs(a - b) <= 2 * step * B


def test_rdt_grids_match_closed_forms_spot():
    from csitdmt.rdt import rdt_causal, rdt_predictive
    cfg = ChannelConfig(1, 1, 2)
    step = 0.05
    grid = oracle.rdt_causal_grid(1.0, 2, 0.5, 1, 1, 1, 2, step)
    assert abs(grid - rdt_causal(1.0, 2, 0.5, 1, cfg)) <= step * 2
    grid = oracle.rdt_predictive_grid(1.0, 2, 0.5, 0, 1, 1, 2, step)
    assert abs(grid - rdt_predictive(1.0, 2, 0.5, 0, cfg)) <= step * 2
