"""Two-stage Stackelberg game between the D2D network and the adversary.

Lower stage: for a transmit power p_s the adversary picks the threshold
tau that minimizes its detection error (FA + MD). Upper stage: the network
picks (p_s, rho) to maximize u_C * P_SINR - u_P * rho * p_s subject to the
harvested-power outage and covertness constraints, anticipating tau*(p_s).
"""

from __future__ import annotations

import bisect
import logging
import math
import threading
from dataclasses import dataclass

import numpy as np

from .analytics import DetectionModel, ph_prob, sinr_prob
from .core import NetworkConfig, Scheme, Strategy, check
from .solvers import (Bound, GaSpec, InfeasibleProblemError, MaxIterationsError,
                      RosenbrockSpec, ga_maximize, rosenbrock_minimize)

log = logging.getLogger(__name__)

__all__ = [
    "BracketError", "EquilibriumResult", "InfeasibleProblemError", "LowerStageSolution",
    "best_response_tau", "clear_tau_cache", "constraints", "lower_stage_interval",
    "network_utility", "solve_equilibrium", "strategy_bounds",
]

# a detection error this close to 1 everywhere means the hypotheses are indistinguishable
_DEGENERATE_GAP = 1e-7
_MAX_DOUBLINGS = 200


class BracketError(ArithmeticError):
    """The upper end of the threshold search interval could not be bracketed."""


@dataclass(frozen=True)
class LowerStageSolution:
    tau_star: float
    error_star: float
    degenerate: bool = False
    interval: tuple[float, float] = (math.nan, math.nan)


@dataclass(frozen=True)
class EquilibriumResult:
    strategy: Strategy
    utility: float
    lower: LowerStageSolution
    slack_power: float
    slack_covert: float
    sinr: float = math.nan
    ph: float = math.nan
    evaluations: int = 0


def lower_stage_interval(model: DetectionModel, config: NetworkConfig, start=None):
    """[N_a (1 + 1e-9), tau_hi] with tau_hi doubled until D stops decreasing.

    Doubling begins at ``start`` (default: N_a plus the bulk scale of the
    received power); unimodality puts the minimizer below the final tau_hi.
    """
    lo = config.noise_adv * (1.0 + 1e-9)
    hi = start if start is not None else config.noise_adv + model.typical_scale()
    prev = model.error(hi)
    for _ in range(_MAX_DOUBLINGS):
        nxt = model.error(2.0 * hi)
        hi *= 2.0
        if nxt >= prev:
            return lo, hi
        prev = nxt
    raise BracketError(f"detection error still decreasing at tau={hi:.3g}")


def _rosenbrock(model, p_s, lo, hi, x0, step):
    spec = RosenbrockSpec((lo, hi), initial_step=step, x0=float(x0))
    try:
        tau, err, _ = rosenbrock_minimize(model.error, spec)
    except MaxIterationsError as exc:
        log.warning("lower stage at p_s=%g stopped early: %s", p_s, exc)
        tau, err = exc.x, exc.fx
    return LowerStageSolution(float(tau), float(err), False, (lo, hi))


def _solve_lower(p_s, config, hint: tuple[float, LowerStageSolution] | None = None):
    """Lower-stage solve; ``hint`` = (p, solution) at a nearby power warm-starts it."""
    model = DetectionModel(p_s, config)
    if hint is not None and not hint[1].degenerate:
        # tau* grows roughly like sqrt(p_s); start the bracket there
        guess = config.noise_adv + (hint[1].tau_star - config.noise_adv) * math.sqrt(p_s / hint[0])
        if 1.0 - model.error(guess) >= _DEGENERATE_GAP:
            lo, hi = lower_stage_interval(model, config, start=guess)
            x0 = min(guess, hi)
            return _rosenbrock(model, p_s, lo, hi, x0, 0.01 * (x0 - lo))
    lo, hi = lower_stage_interval(model, config)
    grid = np.linspace(lo, hi, 9)[1:]
    probe = [model.error(t) for t in grid]
    if 1.0 - min(probe) < _DEGENERATE_GAP:
        mid = 0.5 * (lo + hi)
        return LowerStageSolution(mid, model.error(mid), True, (lo, hi))
    # start at the best probe, with steps of a few grid cells
    x0 = grid[int(np.argmin(probe))]
    return _rosenbrock(model, p_s, lo, hi, x0, 0.02 * (hi - lo))


# tau* depends only on p_s and the fields below, never on rho, R or the scheme
_DETECTION_FIELDS = ("lambda_d", "lambda_a", "lambda_b", "p_active_d", "p_active_b",
                     "p_cell", "alpha", "noise_adv")
_WARM_RATIO = math.log(1.5)
_tau_cache: dict = {}
_tau_sorted: dict = {}   # detection fields -> sorted [(log p_s, p_s, solution)]
_tau_lock = threading.Lock()


def _detection_key(config):
    return tuple(getattr(config, f) for f in _DETECTION_FIELDS)


def _cache_key(p_s, config):
    return (round(math.log(p_s) / 1e-6),) + _detection_key(config)


def clear_tau_cache():
    with _tau_lock:
        _tau_cache.clear()
        _tau_sorted.clear()


def _nearest(p_s, config):
    entries = _tau_sorted.get(_detection_key(config))
    if not entries:
        return None
    lp = math.log(p_s)
    i = bisect.bisect_left(entries, (lp,))
    near = [entries[j] for j in (i - 1, i) if 0 <= j < len(entries)]
    best = min(near, key=lambda e: abs(e[0] - lp))
    return (best[1], best[2]) if abs(best[0] - lp) < _WARM_RATIO else None


def best_response_tau(p_s, config: NetworkConfig, memo=True) -> LowerStageSolution:
    """Adversary's optimal threshold for transmit power ``p_s`` (mW).

    With ``memo`` the result is cached per p_s (on a 1e-6 relative grid) and
    nearby cached solutions warm-start new solves.
    """
    if not p_s > 0:
        raise ValueError("p_s must be positive")
    if not memo:
        return _solve_lower(p_s, config)
    key = _cache_key(p_s, config)
    with _tau_lock:
        hit = _tau_cache.get(key)
        hint = None if hit is not None else _nearest(p_s, config)
    if hit is None:
        hit = _solve_lower(p_s, config, hint)
        with _tau_lock:
            if key not in _tau_cache:
                _tau_cache[key] = hit
                bisect.insort(_tau_sorted.setdefault(_detection_key(config), []),
                              (math.log(p_s), p_s, hit))
            hit = _tau_cache[key]
    return hit


def network_utility(strategy: Strategy, config: NetworkConfig, sinr: float | None = None) -> float:
    """u_C * P_SINR - u_P * rho * p_s, with p_s in units of ``utility_power_scale``."""
    if sinr is None:
        sinr = sinr_prob(strategy, config) if config.u_reward != 0 else 0.0
    cost = config.u_price * strategy.rho * strategy.p_s * config.utility_power_scale
    return config.u_reward * sinr - cost


def _covert_slack(lower: LowerStageSolution, config) -> float:
    if lower.degenerate:
        return config.eps_covert
    return lower.error_star - (1.0 - config.eps_covert)


def constraints(strategy: Strategy, config: NetworkConfig):
    """(slack_power, slack_covert); the strategy is feasible iff both are >= 0."""
    slack_power = ph_prob(strategy, config) - (1.0 - config.eps_power)
    slack_covert = _covert_slack(best_response_tau(strategy.p_s, config), config)
    return slack_power, slack_covert


def strategy_bounds(config: NetworkConfig):
    """GA genes: p_s on a dB (log) scale and rho on a linear scale."""
    return [Bound(config.ps_min, config.ps_max, log=True), Bound(config.rho_min, 1.0)]


def _polish(scheme, x, value, objective, feasible, config, rounds=40):
    """Pattern search from the GA optimum; accepts only feasible improvements."""
    bounds = strategy_bounds(config)
    u = np.array([b.encode(xi) for b, xi in zip(bounds, x)])
    step = 0.02
    candidates = [np.array([u[0], 0.0])]  # the lower bound of rho is a natural optimum
    for _ in range(rounds):
        improved = False
        trials = candidates + [u + d for d in (np.array([step, 0]), np.array([-step, 0]),
                                              np.array([0, step]), np.array([0, -step]))]
        candidates = []
        for t in trials:
            t = np.clip(t, 0.0, 1.0)
            xt = tuple(float(b.decode(ti)) for b, ti in zip(bounds, t))
            if all(s >= 0 for s in feasible(xt)):
                vt = objective(xt)
                if vt > value:
                    u, x, value, improved = t, xt, vt, True
        if not improved:
            step *= 0.5
            if step < 1e-5:
                break
    return x, value


def solve_equilibrium(scheme, config: NetworkConfig, ga_spec: GaSpec = GaSpec(),
                      polish=True) -> EquilibriumResult:
    """Stackelberg equilibrium of the game for the given SWIPT scheme.

    Raises :class:`InfeasibleProblemError` (with the least-violating strategy
    found in its diagnostics) if no strategy meets both constraints.
    """
    scheme = Scheme(scheme)
    check(config)
    evaluations = 0
    least = {"violation": math.inf}

    def feasible(x):
        nonlocal evaluations
        evaluations += 1
        st = Strategy(scheme, *x)
        slack_power = ph_prob(st, config) - (1.0 - config.eps_power)
        if slack_power < 0:
            out = [slack_power]
        else:
            out = [slack_power, _covert_slack(best_response_tau(st.p_s, config), config)]
        viol = sum(max(0.0, -s) for s in out)
        if viol < least["violation"]:
            least.update(violation=viol, p_s=x[0], rho=x[1], slacks=out)
        return out

    def objective(x):
        return network_utility(Strategy(scheme, *x), config)

    try:
        best, value, _ = ga_maximize(objective, feasible, strategy_bounds(config), ga_spec)
    except InfeasibleProblemError as exc:
        raise InfeasibleProblemError(
            f"no feasible {scheme.value} strategy: power outage or covertness cannot be met",
            dict(exc.diagnostics, **least)) from None
    if polish:
        best, value = _polish(scheme, best, value, objective, feasible, config)
    strategy = Strategy(scheme, *best)
    lower = best_response_tau(strategy.p_s, config)
    sinr = sinr_prob(strategy, config)
    slack_power, slack_covert = constraints(strategy, config)
    return EquilibriumResult(
        strategy=strategy,
        utility=network_utility(strategy, config, sinr=sinr),
        lower=lower,
        slack_power=slack_power,
        slack_covert=slack_covert,
        sinr=sinr,
        ph=slack_power + 1.0 - config.eps_power,
        evaluations=evaluations,
    )

