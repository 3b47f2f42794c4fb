import numpy as np
import pytest

from lmcflab.annulus import (evaluate_clauses, implication_admissible,
                             dichotomy_admissible, rate_gap)
from lmcflab.errors import ParameterError


def norms_of(ws, gs):
    return np.sqrt([np.sum(np.asarray(ws) * np.exp(2.0 * np.asarray(gs)
                                                   * t))
                    for t in (0, 1, 2)])


def test_single_growing_mode_clause():
    rep = evaluate_clauses(norms_of([1.0], [0.5]), [0.5], 0.0, 0.05, 0.1)
    assert rep.growth_hypothesis and rep.growth_conclusion
    assert not rep.decay_hypothesis


def test_single_decaying_mode_clause():
    rep = evaluate_clauses(norms_of([1.0], [-1.0]), [-1.0], 0.0, 0.05, 0.1)
    assert rep.decay_hypothesis and rep.decay_conclusion
    assert not rep.growth_hypothesis


def test_admissibility_gates():
    # mode inside the lam2 band: not admissible for anything
    assert not implication_admissible([0.05], 0.0, 0.02, 0.1)
    assert not dichotomy_admissible([0.3], 0.0, 0.1)
    # comfortable gap: both admissible
    assert implication_admissible([1.0, -1.0], 0.0, 0.05, 0.1)
    assert dichotomy_admissible([1.0, -1.0], 0.0, 0.1)
    assert rate_gap([1.0, -0.7], 0.0) == 0.7


def test_randomized_dichotomy_never_violated():
    rng = np.random.default_rng(21)
    tested = 0
    for _ in range(3000):
        d = rng.uniform(-2.0, 2.0)
        k = rng.integers(2, 5)
        gs = np.concatenate([d - rng.uniform(0.4, 2.0, 1),
                             d + rng.uniform(0.4, 2.0, 1),
                             rng.uniform(-4.0, 4.0, k - 2)])
        gap = rate_gap(gs, d)
        if gap < 1e-3:
            continue
        lam2 = max((gap - 0.5 * np.log(2.0)) * rng.uniform(0.1, 0.99), 0.0)
        if lam2 <= 1e-6:
            continue
        lam1 = lam2 * rng.uniform(0.1, 0.9)
        ws = rng.uniform(1e-4, 1.0, k) ** 2
        rep = evaluate_clauses(norms_of(ws, gs), gs, d, lam1, lam2)
        tested += 1
        assert not rep.violations(), (d, gs.tolist(), lam1, lam2)
    assert tested > 1500


def test_parameter_validation():
    with pytest.raises(ParameterError):
        evaluate_clauses([1.0, 1.0], [0.0], 0.0, 0.05, 0.1)
    with pytest.raises(ParameterError):
        evaluate_clauses([1.0, 1.0, 1.0], [0.0], 0.0, 0.2, 0.1)
