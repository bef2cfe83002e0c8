"""Average-cost evaluation of closed loops, analytic and simulated.

The criterion is the long-run time average of F = alpha e_phi^2 + beta e_psi^2
+ gamma1 u1^2 + gamma2 u2^2.  For a stable loop under a polyharmonic
disturbance the average is a finite frequency sum: each positive frequency
contributes (y* F_y y + u* F_u u) / 2 from its complex response, the zero
frequency contributes without the 1/2 (a constant offset, not an oscillation
in quadrature).  The simulated route integrates the same F over [T0, T] by
trapezoid on an exactly discretized trace and must converge to the analytic
value as the window grows; the pair is a two-sided check on both derivations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from . import baselines, ouc
from .baselines import BaselineDesignError, LqrController, NotchController
from .lti import StateSpace, feedback_interconnect, is_stable, simulate
from .ouc import CostWeights, OucController, controller_realization
from .vessel import PlantModel, realize_plant
from .waves import DisturbanceSpec, polyharmonic_signal


@dataclass(frozen=True)
class CostReport:
    """One controller's cost breakdown under one disturbance."""

    controller: str
    J_total: float
    J_roll: float
    J_yaw: float
    J_u1: float
    J_u2: float
    method: str
    stable: bool

    def csv_row(self) -> str:
        return ", ".join([
            self.controller, repr(self.J_total), repr(self.J_roll),
            repr(self.J_yaw), repr(self.J_u1), repr(self.J_u2),
            self.method, str(self.stable).lower(),
        ])


def closed_loop_system(plant: PlantModel, controller,
                       plant_ss: Optional[StateSpace] = None) -> StateSpace:
    """Disturbance-driven closed loop with outputs (y, u) for any controller kind."""
    if plant_ss is None:
        plant_ss = realize_plant(plant)
    if isinstance(controller, OucController):
        return feedback_interconnect(
            plant_ss, controller_realization(controller, plant_ss))
    if isinstance(controller, (LqrController, NotchController)):
        return controller.closed_loop(plant_ss)
    raise TypeError(f"unknown controller type {type(controller).__name__}")


def control_response(plant: PlantModel, controller, s: complex,
                     plant_ss: Optional[StateSpace] = None) -> np.ndarray:
    """2x3 closed-loop disturbance-to-control response at one point."""
    if isinstance(controller, OucController):
        return controller.disturbance_to_control(plant, s)
    if isinstance(controller, LqrController):
        if plant_ss is None:
            plant_ss = realize_plant(plant)
        return controller.disturbance_to_control(plant_ss, s)
    if isinstance(controller, NotchController):
        return controller.disturbance_to_control(plant, s)
    raise TypeError(f"unknown controller type {type(controller).__name__}")


def frequency_terms(plant: PlantModel, controller, weights: CostWeights,
                    spec: DisturbanceSpec,
                    plant_ss: Optional[StateSpace] = None) -> np.ndarray:
    """Per-frequency cost contributions, one row (roll, yaw, u1, u2) each."""
    if plant_ss is None:
        plant_ss = realize_plant(plant)
    rows = []
    for j, w in enumerate(spec.frequencies):
        d = spec.amplitudes[:, j]
        s = 1j * float(w)
        u = control_response(plant, controller, s, plant_ss) @ d
        y = plant.W_yu0(s) @ u + plant.W_yd0(s) @ d
        share = 1.0 if w == 0.0 else 0.5
        rows.append(share * np.array([
            weights.alpha * abs(y[0]) ** 2,
            weights.beta * abs(y[1]) ** 2,
            weights.gamma1 * abs(u[0]) ** 2,
            weights.gamma2 * abs(u[1]) ** 2,
        ]))
    return np.array(rows)


def analytic_cost(plant: PlantModel, controller, weights: CostWeights,
                  spec: DisturbanceSpec, label: str = "",
                  plant_ss: Optional[StateSpace] = None) -> CostReport:
    """Exact long-run average cost from the frequency responses.

    An unstable loop has no finite average: the report carries inf and
    stable = False rather than the (meaningless) frequency sum.
    """
    if plant_ss is None:
        plant_ss = realize_plant(plant)
    name = label or type(controller).__name__
    try:
        stable, _ = is_stable(closed_loop_system(plant, controller, plant_ss))
    except BaselineDesignError:
        stable = False
    if not stable:
        inf = math.inf
        return CostReport(name, inf, inf, inf, inf, inf, "analytic", False)
    terms = frequency_terms(plant, controller, weights, spec, plant_ss)
    roll, yaw, u1, u2 = terms.sum(axis=0)
    return CostReport(name, float(roll + yaw + u1 + u2), float(roll),
                      float(yaw), float(u1), float(u2), "analytic", True)


def simulated_cost(plant: PlantModel, controller, weights: CostWeights,
                   spec: DisturbanceSpec, T: float, T0: float, h: float,
                   label: str = "",
                   plant_ss: Optional[StateSpace] = None) -> CostReport:
    """Trapezoid average of F over [T0, T] on an exactly discretized trace.

    T0 discards the stability transient.  Raises DivergenceError if the loop
    blows up (it should have been caught as unstable first).
    """
    if not 0.0 <= T0 < T:
        raise ValueError("need 0 <= T0 < T")
    if plant_ss is None:
        plant_ss = realize_plant(plant)
    name = label or type(controller).__name__
    cl = closed_loop_system(plant, controller, plant_ss)
    stable, _ = is_stable(cl)
    trace = simulate(cl, polyharmonic_signal(spec), T=T, h=h, n_y=2)
    keep = trace.t >= T0 - 1e-12
    t = trace.t[keep]
    y = trace.y[keep]
    u = trace.u[keep]
    parts = [
        weights.alpha * y[:, 0] ** 2,
        weights.beta * y[:, 1] ** 2,
        weights.gamma1 * u[:, 0] ** 2,
        weights.gamma2 * u[:, 1] ** 2,
    ]
    span = t[-1] - t[0]
    vals = [float(np.trapezoid(p, t) / span) for p in parts]
    return CostReport(name, float(sum(vals)), vals[0], vals[1], vals[2],
                      vals[3], "simulated", bool(stable))


def compare(plant: PlantModel, controllers: Dict[str, object],
            weights: CostWeights, spec: DisturbanceSpec,
            method: str = "analytic", T: float = 600.0, T0: float = 100.0,
            h: float = 0.01,
            plant_ss: Optional[StateSpace] = None) -> List[CostReport]:
    """Cost reports for several controllers under one disturbance."""
    if plant_ss is None:
        plant_ss = realize_plant(plant)
    out = []
    for name, ctrl in controllers.items():
        if method == "analytic":
            out.append(analytic_cost(plant, ctrl, weights, spec, name, plant_ss))
        elif method == "simulated":
            out.append(simulated_cost(plant, ctrl, weights, spec, T, T0, h,
                                      name, plant_ss))
        else:
            raise ValueError(f"unknown method {method!r}")
    return out


CSV_HEADER = "controller, J_total, J_roll, J_yaw, J_u1, J_u2, method, stable"


def reports_to_csv(reports: Sequence[CostReport]) -> str:
    return "\n".join([CSV_HEADER] + [r.csv_row() for r in reports]) + "\n"


def perturbation_gaps(plant: PlantModel, controller, weights: CostWeights,
                      omega: float, amplitude: np.ndarray, n_trials: int,
                      seed: int, scale: float = 0.1,
                      plant_ss: Optional[StateSpace] = None) -> np.ndarray:
    """Cost increases from random deviations of the control response at omega.

    Evaluates the full per-frequency cost (not its quadratic model) at the
    controller's response u0 and at u0 + delta for seeded random complex
    deviations; a per-frequency-optimal controller makes every gap strictly
    positive.  At omega = 0 the deviations are real (a real frequency line has
    a real response there).
    """
    if plant_ss is None:
        plant_ss = realize_plant(plant)
    d = np.asarray(amplitude, dtype=complex).reshape(3)
    s = 1j * float(omega)
    Wu = plant.W_yu0(s)
    Wd = plant.W_yd0(s)
    share = 1.0 if omega == 0.0 else 0.5

    def cost_at(u):
        y = Wu @ u + Wd @ d
        return share * float(
            (y.conj() @ weights.F_y @ y + u.conj() @ weights.F_u @ u).real)

    u0 = control_response(plant, controller, s, plant_ss) @ d
    base = cost_at(u0)
    rng = np.random.default_rng(seed)
    gaps = np.empty(n_trials)
    for k in range(n_trials):
        delta = rng.standard_normal(2) * scale
        if omega != 0.0:
            delta = delta + 1j * rng.standard_normal(2) * scale
        gaps[k] = cost_at(u0 + delta) - base
    return gaps


# -- controller file round trip -------------------------------------------------


def controller_to_json(controller) -> str:
    """Kind-tagged JSON for any supported controller."""
    if isinstance(controller, OucController):
        return ouc.controller_to_json(controller)
    return baselines.baseline_to_json(controller)


def controller_from_json(text: str):
    kind = json.loads(text).get("kind")
    if kind == "ouc":
        return ouc.controller_from_json(text)
    return baselines.baseline_from_json(text)
