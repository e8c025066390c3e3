"""
Classical Pendulum
==================

Kapitza pendulum with a real or purely imaginary pivot amplitude A:

    theta'' = (sin(theta) / l) * (g - A omega^2 cos(omega t))

theta = 0 is the inverted position. Angles are complex and never wrapped.
"""

import math
from typing import List, Tuple

import numpy as np
import structlog
from scipy.optimize import brentq

from kapitza.config import get_settings
from kapitza.errors import DivergedTrajectory, InvalidParameter, NonRealEffectivePotential
from kapitza.models.results import ClassicalState, Trajectory
from kapitza.models.schemas import PendulumParams
from kapitza.services.numerics import rk4_step

logger = structlog.get_logger(__name__)


def eom_rhs(state: ClassicalState, p: PendulumParams) -> Tuple[complex, complex]:
    """(theta_dot, theta_ddot) with complex sine."""
    a = p.complex_amplitude
    drive = p.g - a * p.omega ** 2 * math.cos(p.omega * state.t)
    return state.theta_dot, np.sin(state.theta) / p.l * drive


def stability_parameter(p: PendulumParams) -> float:
    """Signed A^2 omega^2 / (2 g l); negative for an imaginary amplitude."""
    a2 = p.complex_amplitude ** 2
    return float((a2 * p.omega ** 2).real / (2.0 * p.g * p.l))


def effective_potential_classical(theta, p: PendulumParams):
    """
    Averaged potential in units of m g l:

        cos(theta) + (A^2 omega^2 / (4 g l)) sin^2(theta)

    Raises:
        NonRealEffectivePotential: if A^2 has an imaginary part.
    """
    coupling = p.complex_amplitude ** 2 * p.omega ** 2 / (4.0 * p.g * p.l)
    value = np.cos(theta) + coupling * np.sin(theta) ** 2
    if np.max(np.abs(np.imag(value))) > 1e-12:
        raise NonRealEffectivePotential(
            "effective potential is not real",
            {"amplitude": str(p.complex_amplitude)},
        )
    return np.real(value)


def stable_points(p: PendulumParams) -> List[float]:
    """
    Minima of the effective potential in (-pi, pi].

    Above threshold (|A^2| omega^2 > 2 g l) a real drive stabilizes 0 and pi,
    an imaginary drive moves the minima to +-arccos(2 g l / (A^2 omega^2)).
    At or below threshold only the hanging position pi remains.
    """
    kappa = stability_parameter(p)
    if abs(kappa) <= 1.0:
        return [math.pi]
    if kappa > 0:
        return [0.0, math.pi]
    angle = math.acos(1.0 / kappa)
    return [-angle, angle]


def turning_points(theta0: float, p: PendulumParams) -> Tuple[float, float]:
    """
    The two angles bracketing the nearest stable point on the level set of
    the effective potential through theta0.
    """
    level = float(effective_potential_classical(theta0, p))
    center = min(stable_points(p), key=lambda m: abs(m - theta0))
    if abs(theta0 - center) < 1e-12:
        return theta0, theta0

    # walk away from the minimum on the side opposite theta0
    direction = -math.copysign(1.0, theta0 - center)
    sweep = center + direction * np.linspace(0.0, math.pi, 2001)
    excess = effective_potential_classical(sweep, p) - level
    crossing = np.nonzero(excess >= 0)[0]
    if crossing.size == 0:
        partner = float(sweep[-1])
    else:
        i = max(int(crossing[0]), 1)
        partner = brentq(
            lambda theta: float(effective_potential_classical(theta, p)) - level,
            sweep[i - 1],
            sweep[i],
        )
    low, high = sorted((theta0, float(partner)))
    return low, high


def fast_component(state: ClassicalState, p: PendulumParams) -> complex:
    """xi = (A / l) sin(theta) cos(omega t), the rapidly oscillating part of theta."""
    return p.complex_amplitude / p.l * np.sin(state.theta) * math.cos(p.omega * state.t)


def slow_to_full(init: ClassicalState, p: PendulumParams) -> ClassicalState:
    """
    Full state whose slow part is init: theta = theta0 + xi and
    theta_dot = theta_dot0 + d(xi)/dt, both evaluated at init.t.
    """
    a_over_l = p.complex_amplitude / p.l
    phase = p.omega * init.t
    sin0, cos0 = np.sin(init.theta), np.cos(init.theta)
    xi = a_over_l * sin0 * math.cos(phase)
    xi_dot = a_over_l * (cos0 * init.theta_dot * math.cos(phase) - p.omega * sin0 * math.sin(phase))
    return ClassicalState(theta=init.theta + xi, theta_dot=init.theta_dot + xi_dot, t=init.t)


def simulate_trajectory(
    p: PendulumParams,
    init: ClassicalState,
    t_end: float,
    dt: float,
    sample_every: int = 1,
    slow_start: bool = False,
) -> Trajectory:
    """
    RK4 integration of the complex equation of motion.

    With slow_start the initial state is read as the slow variable theta0 and
    the fast component xi is added before stepping, so a real init starts the
    averaged motion on the real axis.

    Raises:
        InvalidParameter: if dt does not resolve the drive (dt > 2 pi / (50 omega)).
        DivergedTrajectory: if |theta| exceeds the configured limit.
    """
    if dt > p.period / 50.0 * (1 + 1e-12):
        raise InvalidParameter(
            "time step does not resolve the drive period",
            {"dt": dt, "max_dt": p.period / 50.0},
        )
    if slow_start:
        init = slow_to_full(init, p)
    limit = get_settings().trajectory_divergence_limit
    a = p.complex_amplitude
    g, l, omega = p.g, p.l, p.omega

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        return np.array([y[1], np.sin(y[0]) / l * (g - a * omega ** 2 * math.cos(omega * t))])

    steps = int(round((t_end - init.t) / dt))
    y = np.array([init.theta, init.theta_dot], dtype=complex)
    t = init.t
    times, thetas, rates = [t], [y[0]], [y[1]]
    for step in range(1, steps + 1):
        y = rk4_step(y, t, dt, rhs)
        t = init.t + step * dt
        if abs(y[0]) > limit:
            raise DivergedTrajectory("pendulum angle diverged", {"t": t, "theta": str(y[0])})
        if step % sample_every == 0:
            times.append(t)
            thetas.append(y[0])
            rates.append(y[1])

    logger.info("trajectory simulated", steps=steps, samples=len(times), kind=p.kind.value)
    return Trajectory(
        t=np.array(times),
        theta=np.array(thetas, dtype=complex),
        theta_dot=np.array(rates, dtype=complex),
    )


def cycle_average(trajectory: Trajectory, p: PendulumParams) -> np.ndarray:
    """
    Re(theta) averaged over a window of one drive period centered on each
    sample. Samples closer than half a period to either end are dropped,
    so the result has len(trajectory) - window + 1 entries.
    """
    if len(trajectory) < 2:
        return np.real(trajectory.theta).copy()
    sample_dt = float(trajectory.t[1] - trajectory.t[0])
    window = max(1, int(round(p.period / sample_dt)))
    if window > len(trajectory):
        raise InvalidParameter("trajectory shorter than one drive period")
    kernel = np.full(window, 1.0 / window)
    return np.convolve(np.real(trajectory.theta), kernel, mode="valid")
