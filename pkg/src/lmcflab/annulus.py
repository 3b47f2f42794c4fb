"""Shared growth/decay clause evaluation for the three-annulus dichotomies.

Both the elliptic (annulus norms of a harmonic 1-form across three geometric
scales) and the parabolic (Gaussian norms of a drift-heat solution at three
unit-spaced times) lemmas reduce to the same picture: a norm sequence
N_0, N_1, N_2 with N_t^2 = sum_j w_j exp(2 g_j t) for per-step log rates g_j,
compared against a target rate d with margins 0 < lam1 < lam2:

  growth clause: if log(N_1/N_0) >= d + lam1 then log(N_2/N_1) >= d + lam2
  decay clause:  if log(N_2/N_1) <= d - lam1 then log(N_1/N_0) <= d - lam2

and, when no mode sits exactly at rate d, the dichotomy: the growth
conclusion or the decay conclusion holds outright. Validity needs the rates
to avoid a band around d. With gap the smallest |g_j - d| over modes off d,
the extremal configuration is all low mass at rate d - gap against all high
mass at rate d + gap; eliminating the mass ratio from the hypothesis and
conclusion thresholds gives the closed-form sufficient condition

    alpha^2 (E - 1) + alpha - E >= F E (alpha - 1),
    alpha = e^{4 gap},   F = e^{2(gap + lam2)},

with E = e^{2(gap + lam1)} for the growth/decay implications and
E = e^{2(gap - lam2)} for the dichotomy (plus lam1, lam2 < gap). The
evaluator reports admissibility so certificates state what they certify.
"""

import numpy as np
from dataclasses import dataclass

from .errors import ParameterError

_EVAL_SLACK = 1e-13


@dataclass
class ClauseReport:
    norms: np.ndarray               # N_0, N_1, N_2
    log_ratios: np.ndarray          # log(N_1/N_0), log(N_2/N_1)
    growth_hypothesis: bool
    growth_conclusion: bool
    decay_hypothesis: bool
    decay_conclusion: bool
    has_degree_d: bool
    implication_admissible: bool
    dichotomy_admissible: bool

    @property
    def growth_implication_holds(self):
        return (not self.growth_hypothesis) or self.growth_conclusion

    @property
    def decay_implication_holds(self):
        return (not self.decay_hypothesis) or self.decay_conclusion

    @property
    def dichotomy_asserted(self):
        """The no-degree-d alternative is claimed only when applicable."""
        return (not self.has_degree_d) and self.dichotomy_admissible

    @property
    def dichotomy_holds(self):
        return self.growth_conclusion or self.decay_conclusion

    def violations(self):
        out = []
        if self.implication_admissible:
            if not self.growth_implication_holds:
                out.append("growth implication")
            if not self.decay_implication_holds:
                out.append("decay implication")
        if self.dichotomy_asserted and not self.dichotomy_holds:
            out.append("dichotomy")
        return out


def rate_gap(step_rates, d_eff):
    gaps = np.abs(np.asarray(step_rates, float) - d_eff)
    gaps = gaps[gaps > 1e-12]
    return float(np.min(gaps)) if gaps.size else np.inf


def _two_point_slack(gap, E, lam2):
    alpha = np.exp(4.0 * gap)
    F = np.exp(2.0 * (gap + lam2))
    return alpha * alpha * (E - 1.0) + alpha - E \
        >= F * E * (alpha - 1.0) - 1e-12


def implication_admissible(step_rates, d_eff, lam1, lam2):
    gap = rate_gap(step_rates, d_eff)
    if not np.isfinite(gap):
        return True
    if lam2 >= gap:
        return False
    return bool(_two_point_slack(gap, np.exp(2.0 * (gap + lam1)), lam2))


def dichotomy_admissible(step_rates, d_eff, lam2):
    gap = rate_gap(step_rates, d_eff)
    if not np.isfinite(gap):
        return True
    if lam2 >= gap:
        return False
    return bool(_two_point_slack(gap, np.exp(2.0 * (gap - lam2)), lam2))


def suggest_lambdas(step_rates, d_eff, fraction=0.5):
    """Largest admissible (lam1, lam2) pair with lam1 = lam2/2, found by
    bisection below fraction * gap; None when the gap is degenerate."""
    gap = rate_gap(step_rates, d_eff)
    if not np.isfinite(gap) or gap <= 1e-9:
        return None
    lo, hi = 0.0, fraction * gap

    def ok(lam2):
        return (dichotomy_admissible(step_rates, d_eff, lam2)
                and implication_admissible(step_rates, d_eff, lam2 / 2.0,
                                           lam2))
    if not ok(hi * 1e-3):
        return None
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            lo = mid
        else:
            hi = mid
    lam2 = 0.9 * lo
    return (lam2 / 2.0, lam2) if lam2 > 0 else None


def evaluate_clauses(norms, step_rates, d_eff, lam1, lam2,
                     has_degree_d=False):
    """Evaluate the growth/decay clauses on a norm triple.

    norms: (N_0, N_1, N_2); step_rates: per-mode log growth per step, used
    only for the admissibility accounting; d_eff, lam1, lam2 in the same
    per-step log units.
    """
    norms = np.asarray(norms, float)
    if norms.shape != (3,):
        raise ParameterError("need exactly three norms")
    if np.any(norms < 0):
        raise ParameterError("norms must be nonnegative")
    if not (0 < lam1 < lam2):
        raise ParameterError("need 0 < lam1 < lam2")
    with np.errstate(divide="ignore", invalid="ignore"):
        r01 = np.log(norms[1] / norms[0]) if norms[0] > 0 else np.inf
        r12 = np.log(norms[2] / norms[1]) if norms[1] > 0 else np.inf
    return ClauseReport(
        norms=norms,
        log_ratios=np.array([r01, r12]),
        growth_hypothesis=bool(r01 >= d_eff + lam1 - _EVAL_SLACK),
        growth_conclusion=bool(r12 >= d_eff + lam2 - _EVAL_SLACK),
        decay_hypothesis=bool(r12 <= d_eff - lam1 + _EVAL_SLACK),
        decay_conclusion=bool(r01 <= d_eff - lam2 + _EVAL_SLACK),
        has_degree_d=has_degree_d,
        implication_admissible=implication_admissible(step_rates, d_eff,
                                                      lam1, lam2),
        dichotomy_admissible=dichotomy_admissible(step_rates, d_eff, lam2),
    )
