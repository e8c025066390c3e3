"""
Classical Command
=================

Integrate the driven pendulum and write trajectory.csv.
"""

from pathlib import Path

import numpy as np

from kapitza.commands.base import CommandResult
from kapitza.models.results import ClassicalState
from kapitza.models.schemas import RunConfig
from kapitza.services.artifacts import write_table
from kapitza.services.classical import (
    simulate_trajectory,
    stability_parameter,
    stable_points,
    turning_points,
)

TRAJECTORY_COLUMNS = ["t", "re_theta", "im_theta", "re_theta_dot", "im_theta_dot"]


def run_classical(config: RunConfig, out_dir: Path) -> CommandResult:
    p = config.pendulum
    section = config.trajectory
    dt = p.period / section.steps_per_period
    t_end = section.periods * p.period

    trajectory = simulate_trajectory(
        p,
        ClassicalState(theta=section.theta0, theta_dot=section.theta_dot0),
        t_end=t_end,
        dt=dt,
        sample_every=section.sample_every,
        slow_start=section.slow_start,
    )
    rows = zip(
        trajectory.t,
        trajectory.theta.real,
        trajectory.theta.imag,
        trajectory.theta_dot.real,
        trajectory.theta_dot.imag,
    )
    filename = write_table(out_dir, "trajectory", TRAJECTORY_COLUMNS, rows, config.format)

    late = trajectory.t >= 0.5 * t_end
    low, high = turning_points(section.theta0, p)
    return CommandResult(
        artifacts=[filename],
        results={
            "stability_parameter": stability_parameter(p),
            "stable_points": stable_points(p),
            "turning_points": [low, high],
            "mean_re_theta_final_half": float(np.mean(trajectory.theta.real[late])),
            "samples": len(trajectory),
        },
        provenance={"dt": dt, "steps_per_period": section.steps_per_period, "slow_start": section.slow_start},
    )
