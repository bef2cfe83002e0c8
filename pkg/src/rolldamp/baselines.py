"""Comparison controllers: LQR state feedback and a rudder notch filter.

Both are conventional designs for the same roll-damping problem.  The LQR
solves the disturbance-free Riccati problem on the minimal plant realization
and feeds back the full state; the notch filter injects a band-stop-shaped
roll correction through one actuator at the dominant wave frequency.  Neither
is frequency-universal: their disturbance rejection at any particular
frequency is whatever the design happens to give.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .lti import StateSpace, feedback_interconnect, is_stable, realize, solve_care
from .polyalg import MatrixPolynomial, Polynomial, RationalMatrix
from .vessel import PlantModel

LQR_BENCHMARK_WEIGHTS = (100.0, 1.0, 0.1, 0.01)


class BaselineDesignError(RuntimeError):
    """Baseline controller design failed (Riccati or stability)."""


@dataclass(frozen=True)
class LqrController:
    """Static state feedback u = -K x in the coordinates of a plant realization.

    The gain is meaningless without the realization it was designed against;
    q_weights records the quadratic design weights (roll, yaw, rudder, fin)
    so the design can be reproduced against a freshly realized plant.
    """

    K: np.ndarray
    q_weights: Tuple[float, float, float, float]

    def closed_loop(self, plant_ss: StateSpace) -> StateSpace:
        """Disturbance-driven closed loop with stacked outputs (y, u)."""
        if plant_ss.E is None:
            raise ValueError("plant realization must carry disturbance channels")
        if self.K.shape != (plant_ss.n_inputs, plant_ss.n_states):
            raise ValueError("gain shape does not match the plant realization")
        A_cl = plant_ss.A - plant_ss.B @ self.K
        C_cl = np.vstack([plant_ss.C - plant_ss.D @ self.K, -self.K])
        G_cl = np.vstack([plant_ss.G, np.zeros((plant_ss.n_inputs,
                                                plant_ss.G.shape[1]))])
        n = plant_ss.n_states
        return StateSpace(A_cl, np.zeros((n, 0)), C_cl,
                          np.zeros((C_cl.shape[0], 0)),
                          E=plant_ss.E, G=G_cl)

    def disturbance_to_control(self, plant_ss: StateSpace, s: complex) -> np.ndarray:
        """u(s) / d(s) = -K (sI - A + BK)^-1 E."""
        n = plant_ss.n_states
        X = np.linalg.solve(s * np.eye(n) - plant_ss.A + plant_ss.B @ self.K,
                            plant_ss.E)
        return -self.K @ X


def design_lqr(plant_ss: StateSpace,
               q_weights: Tuple[float, float, float, float] = LQR_BENCHMARK_WEIGHTS
               ) -> LqrController:
    """Riccati state feedback minimizing int (q1 e_phi^2 + q2 e_psi^2 + q3 u1^2
    + q4 u2^2) dt for the undisturbed plant.

    Raises:
        BaselineDesignError: Riccati solve failed or the loop is not strictly
            stable.
    """
    if min(q_weights) <= 0.0:
        raise BaselineDesignError("LQR weights must be positive")
    Qy = np.diag(q_weights[:2])
    R = np.diag(q_weights[2:])
    Q = plant_ss.C.T @ Qy @ plant_ss.C
    try:
        P = solve_care(plant_ss.A, plant_ss.B, Q, R)
    except Exception as exc:
        raise BaselineDesignError(f"Riccati solve failed: {exc}") from exc
    K = np.linalg.solve(R, plant_ss.B.T @ P)
    stable, margin = is_stable(StateSpace(
        plant_ss.A - plant_ss.B @ K, plant_ss.B, plant_ss.C, plant_ss.D))
    if not stable:
        raise BaselineDesignError(f"LQR loop not stable (margin {margin:.3e})")
    return LqrController(K=K, q_weights=tuple(float(q) for q in q_weights))


@dataclass(frozen=True)
class NotchController:
    """One-channel roll feedback u_drive = W_c(s) e_phi.

    The classical shape is an inverted band amplifier centered at the design
    frequency: W_c(s) = gain (s^2 + 2 zeta w0 s + w0^2) / (s + w0)^2.  drive
    selects the actuator: 0 orders extra rudder, 1 moves the fins.
    """

    numerator: Polynomial
    denominator: Polynomial
    drive: int = 0

    def __post_init__(self):
        if self.drive not in (0, 1):
            raise ValueError("drive must be 0 (rudder) or 1 (fin)")
        if self.numerator.degree > self.denominator.degree:
            raise ValueError("notch filter must be proper")

    def transfer_matrix(self) -> RationalMatrix:
        """H with u = H y: the single nonzero entry reads the roll error."""
        zero = Polynomial([0.0])
        rows = [[zero, zero], [zero, zero]]
        rows[self.drive][0] = self.numerator
        return RationalMatrix(MatrixPolynomial(rows), self.denominator)

    def closed_loop(self, plant_ss: StateSpace) -> StateSpace:
        cl = feedback_interconnect(plant_ss, realize(self.transfer_matrix()))
        stable, margin = is_stable(cl)
        if not stable:
            raise BaselineDesignError(f"notch loop unstable (margin {margin:.3e})")
        return cl

    def disturbance_to_control(self, plant: PlantModel, s: complex) -> np.ndarray:
        """u(s)/d(s) = H (I - W_yu0 H)^-1 W_yd0."""
        H = self.transfer_matrix()(s)
        y = np.linalg.solve(np.eye(2) - plant.W_yu0(s) @ H, plant.W_yd0(s))
        return H @ y


def notch_controller(omega: float = 1.15, gain: float = -10.0,
                     zeta: float = 0.1, drive: int = 0) -> NotchController:
    """The benchmark notch: gain (s^2 + 2 zeta w0 s + w0^2) / (s + w0)^2."""
    if omega <= 0.0:
        raise ValueError("center frequency must be positive")
    num = Polynomial([omega ** 2, 2.0 * zeta * omega, 1.0]).scaled(gain)
    den = Polynomial([omega ** 2, 2.0 * omega, 1.0])
    return NotchController(numerator=num, denominator=den, drive=drive)


# -- serialization -------------------------------------------------------------


def baseline_to_json(ctrl) -> str:
    """Kind-tagged JSON for either baseline controller."""
    if isinstance(ctrl, LqrController):
        payload = {"kind": "lqr", "K": ctrl.K.tolist(),
                   "q_weights": list(ctrl.q_weights)}
    elif isinstance(ctrl, NotchController):
        payload = {"kind": "notch", "numerator": list(ctrl.numerator.coeffs),
                   "denominator": list(ctrl.denominator.coeffs),
                   "drive": ctrl.drive}
    else:
        raise TypeError(f"not a baseline controller: {type(ctrl).__name__}")
    return json.dumps(payload, indent=2, sort_keys=True)


def baseline_from_json(text: str):
    d = json.loads(text)
    kind = d.get("kind")
    if kind == "lqr":
        return LqrController(K=np.asarray(d["K"], dtype=float),
                             q_weights=tuple(float(q) for q in d["q_weights"]))
    if kind == "notch":
        return NotchController(numerator=Polynomial(d["numerator"]),
                               denominator=Polynomial(d["denominator"]),
                               drive=int(d["drive"]))
    raise ValueError(f"not a baseline controller payload: kind={kind!r}")
