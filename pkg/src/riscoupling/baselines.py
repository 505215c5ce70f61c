"""Reference methods: naive optimizer, exhaustive grid oracle, and the two
no-coupling comparison baselines used in the experiment sweeps."""

from __future__ import annotations

import enum

import numpy as np

from .channel import (
    ImpedanceChannel,
    RisState,
    Scenario,
    build_los_scenario,
    channel_gain,
    evaluate_channel,
    loading_matrix,
)
from .elementwise import (
    SISO_GAIN,
    OptimizeResult,
    OptimizerConfig,
    optimal_theta_siso,
    theta_to_delta_x,
)
from .decoupling import EffectiveChannel
from .errors import ChangeOfVariablesError, InvalidArgumentError, NumericallySingularError


class MethodId(str, enum.Enum):
    DECOUPLED = "Decoupled"
    ELEMENT_WISE = "ElementWise"
    ELEMENT_WISE_NAIVE = "ElementWiseNaive"
    NO_COUPLING = "NoCoupling"
    IGNORE_MC = "IgnoreMC"
    GRID_ORACLE = "GridOracle"


def naive_elementwise(ch: ImpedanceChannel, x0: RisState,
                      cfg: OptimizerConfig | None = None) -> OptimizeResult:
    """Element-wise optimizer that re-inverts the loading matrix at every update.

    O(N^4) per sweep; identical contract (and trajectory) to optimize, used as
    the trajectory oracle for the rank-one-update implementation.
    """
    cfg = cfg or OptimizerConfig()
    if cfg.objective != SISO_GAIN:
        raise InvalidArgumentError("naive reference implements the siso_gain objective only")
    if ch.k != 1 or ch.m != 1:
        raise InvalidArgumentError("siso_gain objective requires K = M = 1")
    x = x0.x.copy()
    obj = channel_gain(evaluate_channel(ch, RisState(x)))
    trace = [obj]
    saturations = 0
    converged = False
    sweeps = 0
    for sweep in range(cfg.max_sweeps):
        sweeps = sweep + 1
        prev = obj
        for n in range(ch.n):
            z_inv = np.linalg.inv(loading_matrix(ch, RisState(x)))
            z_bar = ch.z_ds - ch.z_dr @ z_inv @ ch.z_rs
            a = complex((ch.z_dr @ z_inv[:, n])[0])
            b_prime = complex((z_inv[n, :] @ ch.z_rs)[0])
            g = complex(z_inv[n, n])
            if g.real <= 0:
                raise ChangeOfVariablesError(f"Re(g) <= 0 for element {n}")
            b = np.conj(b_prime) / (2.0 * g.real)
            z0 = complex(z_bar[0, 0]) + a * np.conj(b)
            res = optimal_theta_siso(z0, a, b)
            if res.no_effect:
                trace.append(obj)
                continue
            dx, saturated = theta_to_delta_x(res.theta, g, cfg.x_max)
            saturations += int(saturated)
            x[n] += dx
            obj = channel_gain(evaluate_channel(ch, RisState(x)))
            trace.append(obj)
        if abs(obj - prev) <= cfg.tol * max(abs(prev), 1e-300):
            converged = True
            break
    return OptimizeResult(
        state=RisState(x),
        trace=np.asarray(trace),
        sweeps=sweeps,
        converged=converged,
        saturation_events=saturations,
    )


def grid_search_phase(eff: EffectiveChannel, points_per_element: int | None = None) -> float:
    """Exhaustive SISO gain maximum over a uniform per-element phase grid.

    Lower bound on the true optimum within grid resolution.  Refused for
    N > 3 (the grid is exponential in N).  Defaults: 3600 points for N = 1,
    72 otherwise.
    """
    n = eff.n
    if n > 3:
        raise InvalidArgumentError(f"full phase grid refused for N = {n} > 3")
    if eff.z_ds.shape != (1, 1):
        raise InvalidArgumentError("grid search is SISO only")
    if points_per_element is None:
        points_per_element = 3600 if n == 1 else 72
    zdr = eff.z_dr_eff[0, :]
    zrs = eff.z_rs_eff[:, 0]
    prod = zdr * zrs / (2.0 * eff.R)
    direct = complex(eff.z_ds[0, 0]) - prod.sum()
    phases = np.exp(2j * np.pi * np.arange(points_per_element) / points_per_element)
    z = np.full((points_per_element,) * n, direct, dtype=complex)
    for i in range(n):
        shape = [1] * n
        shape[i] = points_per_element
        z = z + prod[i] * phases.reshape(shape)
    return float(np.max(np.abs(z) ** 2))


def _single_element_gain(s: Scenario) -> float:
    # Normalization constant of the array gain: SISO gain of one lossless element.
    return s.gamma_dr * s.gamma_rs * s.R**2


def no_coupling_gain(s: Scenario) -> float:
    """Array gain of the purely theoretical model with Z_R = R I (no coupling, no loss)."""
    a_dr = np.exp(-1j * np.arange(s.n) * 2 * np.pi * s.spacing * np.cos(s.alpha_rx))
    a_rs = np.exp(-1j * np.arange(s.n) * 2 * np.pi * s.spacing * np.cos(s.alpha_tx))
    return float(abs(a_dr @ a_rs) + s.n) ** 2 / 4.0


def ignore_mc_gain(s: Scenario) -> float:
    """Array gain when the no-coupling solution (x = 0, i.e. Theta' = -I) is
    applied blindly to the true coupled channel."""
    ch = build_los_scenario(s)
    z = evaluate_channel(ch, RisState.zeros(s.n))
    return channel_gain(z) / _single_element_gain(s)
