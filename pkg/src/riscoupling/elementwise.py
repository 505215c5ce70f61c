"""Coordinate-descent reactance optimizer with cached rank-one inverse updates.

Each element update is a closed-form maximizer of the objective given all
other reactances fixed.  The inverse of the loading matrix is maintained by
the matrix inversion lemma, so one full sweep over N elements costs O(N^3)
instead of the O(N^4) of dense re-inversion per element.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import (
    CONDITION_LIMIT,
    ImpedanceChannel,
    RisState,
    channel_gain,
    loading_matrix,
    spectral_efficiency,
)
from .errors import (
    ChangeOfVariablesError,
    DegenerateUpdateError,
    InvalidArgumentError,
    NumericallySingularError,
)

# Reactance clamp used when the phase-to-reactance map hits its pole.
X_MAX = 1e9

SISO_GAIN = "siso_gain"
SPECTRAL_EFFICIENCY = "spectral_efficiency"


@dataclass
class OptimizerConfig:
    max_sweeps: int = 500
    tol: float = 1e-10
    refactor_every: int = 10
    objective: str = SISO_GAIN
    x_max: float = X_MAX

    def __post_init__(self):
        if self.max_sweeps < 1 or self.refactor_every < 1:
            raise InvalidArgumentError("max_sweeps and refactor_every must be >= 1")
        if self.tol < 0:
            raise InvalidArgumentError("tol must be nonnegative")
        if self.objective not in (SISO_GAIN, SPECTRAL_EFFICIENCY):
            raise InvalidArgumentError(f"unknown objective {self.objective!r}")


@dataclass
class RankOneContext:
    """Cached inverse of the loading matrix and the current channel.

    z_inv tracks (Z_R + j diag(x))^{-1}; z_bar the corresponding end-to-end
    channel.  Both are kept in sync by apply_update.
    """

    ch: ImpedanceChannel
    z_inv: np.ndarray
    z_bar: np.ndarray
    x: np.ndarray


class ElementParams(NamedTuple):
    """Per-element update parameters: Z = Z0 + a b^H theta over unit-modulus theta."""

    a: np.ndarray       # K-vector, Z_DR zinv e_n
    b: np.ndarray       # M-vector, already scaled by 1/(2 Re g)
    g: complex          # [zinv]_nn
    z0: np.ndarray      # K x M


class ThetaResult(NamedTuple):
    theta: complex
    value: float        # achievable objective (amplitude |z| for SISO, SE in bits)
    no_effect: bool


def init_context(ch: ImpedanceChannel, state: RisState) -> RankOneContext:
    """Dense-inverse initialization of the update cache."""
    z_load = loading_matrix(ch, state)
    cond = np.linalg.cond(z_load, 1)
    if not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise NumericallySingularError(
            f"loading matrix condition estimate {cond:.3e} exceeds {CONDITION_LIMIT:.0e}",
            condition=cond,
        )
    z_inv = np.linalg.inv(z_load)
    z_bar = ch.z_ds - ch.z_dr @ z_inv @ ch.z_rs
    return RankOneContext(ch=ch, z_inv=z_inv, z_bar=z_bar, x=state.x.copy())


def element_params(ctx: RankOneContext, n: int) -> ElementParams:
    """Parameters of the rank-one channel parametrization for element n.

    Costs O(N max(M, K)) given the cached inverse; no matrix inversion.
    Raises ChangeOfVariablesError when Re(g) <= 0, where the phase change of
    variables is undefined.
    """
    a = ctx.ch.z_dr @ ctx.z_inv[:, n]
    b_prime_h = ctx.z_inv[n, :] @ ctx.ch.z_rs   # row vector e_n^T zinv Z_RS
    g = complex(ctx.z_inv[n, n])
    if g.real <= 0.0:
        raise ChangeOfVariablesError(
            f"Re(g) = {g.real:.3e} <= 0 for element {n}; phase parametrization undefined"
        )
    b = b_prime_h.conj() / (2.0 * g.real)
    z0 = ctx.z_bar + np.outer(a, b.conj())
    return ElementParams(a=a, b=b, g=g, z0=z0)


def optimal_theta_siso(z0: complex, a: complex, b: complex) -> ThetaResult:
    """Unit-modulus theta maximizing |z0 + a conj(b) theta| (scalars only)."""
    if a == 0 or b == 0:
        return ThetaResult(1.0 + 0.0j, abs(z0), True)
    phi = np.angle(z0) + np.angle(b) - np.angle(a)
    return ThetaResult(complex(np.exp(1j * phi)), abs(z0) + abs(a) * abs(b), False)


def gram_factors(p: ElementParams) -> tuple[np.ndarray, np.ndarray]:
    """A = I + Z0 (I - b b^H/|b|^2) Z0^H and F = [a |b|, Z0 b/|b|].

    Z Z^H = (A - I) + F thetabar thetabar^H F^H with thetabar = [theta, 1]^T.
    """
    bnorm = np.linalg.norm(p.b)
    if bnorm == 0:
        raise InvalidArgumentError("b = 0: element has no effect, Gram split undefined")
    bu = p.b / bnorm
    k = p.z0.shape[0]
    proj = p.z0 @ (np.eye(p.b.size) - np.outer(bu, bu.conj())) @ p.z0.conj().T
    a_mat = np.eye(k) + proj
    f = np.column_stack([p.a * bnorm, p.z0 @ bu])
    return a_mat, f


def optimal_theta_se(a_mat: np.ndarray, f: np.ndarray) -> ThetaResult:
    """Unit-modulus theta maximizing log2 det(A + F thetabar thetabar^H F^H)."""
    c = f.conj().T @ np.linalg.solve(a_mat, f)
    c12 = complex(c[0, 1])
    sign, logdet = np.linalg.slogdet(a_mat)
    base = logdet / math.log(2.0)
    if abs(c12) == 0.0:
        se = base + math.log2(1.0 + c[0, 0].real + c[1, 1].real)
        return ThetaResult(1.0 + 0.0j, float(se), True)
    theta = c12 / abs(c12)
    se = base + math.log2(1.0 + c[0, 0].real + c[1, 1].real + 2.0 * abs(c12))
    return ThetaResult(complex(theta), float(se), False)


def theta_to_delta_x(theta: complex, g: complex, x_max: float = X_MAX) -> tuple[float, bool]:
    """Recover the reactance step from the optimal phase.

    Returns (delta_x, saturated).  theta = -1 maps to delta_x = 0 exactly (the
    update leaves the channel unchanged); a vanishing denominator means the
    optimum sits at the open-circuit limit and is clamped to +-x_max.
    """
    phi = float(np.angle(theta))
    if np.isclose(abs(phi), np.pi, atol=1e-15):
        return 0.0, False
    denom = g.real * math.tan(phi / 2.0) + g.imag
    if denom == 0.0:
        return x_max, True
    dx = 1.0 / denom
    if abs(dx) > x_max:
        return math.copysign(x_max, dx), True
    return dx, False


def apply_update(ctx: RankOneContext, n: int, dx: float) -> None:
    """Rank-one update of the cached inverse and channel after x_n += dx. O(N^2)."""
    if dx == 0.0:
        return
    g = ctx.z_inv[n, n]
    denom = 1.0 + 1j * dx * g
    if abs(denom) < 1e-14:
        raise DegenerateUpdateError(
            f"rank-one denominator |1 + j dx g| = {abs(denom):.3e} for element {n}"
        )
    factor = 1j * dx / denom
    col = ctx.z_inv[:, n].copy()
    row = ctx.z_inv[n, :].copy()
    a = ctx.ch.z_dr @ col
    b_prime_h = row @ ctx.ch.z_rs
    ctx.z_inv -= factor * np.outer(col, row)
    ctx.z_bar = ctx.z_bar + factor * np.outer(a, b_prime_h)
    ctx.x[n] += dx


def refactor(ctx: RankOneContext) -> None:
    """Dense re-inversion to contain rank-one roundoff drift."""
    fresh = init_context(ctx.ch, RisState(ctx.x))
    ctx.z_inv = fresh.z_inv
    ctx.z_bar = fresh.z_bar


@dataclass
class OptimizeResult:
    state: RisState
    trace: np.ndarray           # objective after each element update; trace[0] is the start value
    sweeps: int
    converged: bool
    saturation_events: int = 0


def _objective(cfg: OptimizerConfig, z: np.ndarray) -> float:
    if cfg.objective == SISO_GAIN:
        return channel_gain(z)
    return spectral_efficiency(z)


def optimize(ch: ImpedanceChannel, x0: RisState, cfg: OptimizerConfig | None = None) -> OptimizeResult:
    """Sweep elements 1..N with closed-form per-element updates until converged.

    The per-element update is exact, so the objective trace is non-decreasing.
    Stops when the relative per-sweep improvement drops below cfg.tol.
    """
    cfg = cfg or OptimizerConfig()
    if cfg.objective == SISO_GAIN and (ch.k != 1 or ch.m != 1):
        raise InvalidArgumentError("siso_gain objective requires K = M = 1")
    ctx = init_context(ch, x0)
    obj = _objective(cfg, ctx.z_bar)
    trace = [obj]
    saturations = 0
    converged = False
    sweeps = 0
    for sweep in range(cfg.max_sweeps):
        sweeps = sweep + 1
        prev = obj
        for n in range(ch.n):
            p = element_params(ctx, n)
            if cfg.objective == SISO_GAIN:
                res = optimal_theta_siso(complex(p.z0[0, 0]), complex(p.a[0]), complex(p.b[0]))
            else:
                if np.linalg.norm(p.b) == 0:
                    res = ThetaResult(1.0 + 0.0j, obj, True)
                else:
                    res = optimal_theta_se(*gram_factors(p))
            if res.no_effect:
                trace.append(obj)
                continue
            dx, saturated = theta_to_delta_x(res.theta, p.g, cfg.x_max)
            saturations += int(saturated)
            apply_update(ctx, n, dx)
            obj = _objective(cfg, ctx.z_bar)
            trace.append(obj)
        if (sweep + 1) % cfg.refactor_every == 0:
            refactor(ctx)
            obj = _objective(cfg, ctx.z_bar)
        if abs(obj - prev) <= cfg.tol * max(abs(prev), 1e-300):
            converged = True
            break
    return OptimizeResult(
        state=RisState(ctx.x.copy()),
        trace=np.asarray(trace),
        sweeps=sweeps,
        converged=converged,
        saturation_events=saturations,
    )
