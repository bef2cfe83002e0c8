"""Synthesis of the universal polyharmonic-optimal controller N u = M y.

Given the stabilized plant (W_yu0, W_yd0 over Hurwitz Delta), quadratic
weights, and the disturbance frequencies, the controller is fixed by three
requirements: internal stability for some realization, properness of N^-1 M,
and matching the disturbance-to-control response W_ud at every disturbance
frequency to the per-frequency optimum

    R(w) = -Pi(iw)^-1 W_yu0(iw)* F_y W_yd0(iw),
    Pi(iw) = W_yu0(iw)* F_y W_yu0(iw) + F_u.

Universality: R does not depend on the (unknown) disturbance amplitudes and
phases, only on the frequencies, so one controller is optimal for the whole
class.  The construction here takes M = Delta r and N = r P_u + rho I with r a
2x2 polynomial of degree 2p interpolating r(iw_j) P_d(iw_j) = rho(iw_j) R_j,
and rho a Hurwitz scalar denominator; then W_ud = r P_d / rho hits R_j exactly
and u = N^-1 M y is proper whenever deg rho >= deg M.

The zero frequency (heading setpoint channel) is always a member of the
frequency set.  Where W_yd0(iw) loses row rank the interpolation conditions
become underdetermined; the pseudoinverse target keeps them consistent because
R_j lies in the row space of W_yd0(iw_j) by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.polynomial.polynomial as npoly

from .lti import StateSpace, feedback_interconnect
from .polyalg import (
    MatrixPolynomial,
    Polynomial,
    is_hurwitz,
    poly_divmod,
    poly_from_roots,
    solve_complex_linear,
    taylor_coeffs_at,
)
from .vessel import PlantModel, realize_plant

DEFAULT_MU = 1.7
# interpolation and cancellation identities are linear-algebra exact; anything
# above this is an implementation bug, not roundoff
RESIDUAL_TOL = 1e-9


class SynthesisError(RuntimeError):
    """Controller synthesis refused (infeasible data or broken invariant)."""


@dataclass(frozen=True)
class CostWeights:
    """Diagonal weights of the mean quadratic criterion on (e_phi, e_psi, u1, u2)."""

    alpha: float
    beta: float
    gamma1: float
    gamma2: float

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma1, self.gamma2) <= 0.0:
            raise ValueError("all four weights must be positive")

    @property
    def F_y(self) -> np.ndarray:
        return np.diag([self.alpha, self.beta])

    @property
    def F_u(self) -> np.ndarray:
        return np.diag([self.gamma1, self.gamma2])

    @property
    def F_full(self) -> np.ndarray:
        return np.diag([self.alpha, self.beta, self.gamma1, self.gamma2])


BENCHMARK_WEIGHTS = CostWeights(alpha=2.0, beta=1.0, gamma1=10.0, gamma2=2.0)


@dataclass(frozen=True)
class InterpolationTarget:
    """Per-frequency optimal response and its curvature.

    response is the 2x3 optimal W_ud(iw); pi is the 2x2 Hermitian curvature of
    the cost in the control deviation at that frequency (any deviation du
    raises the average cost by du* pi du / 2).
    """

    omega: float
    response: np.ndarray
    pi: np.ndarray


@dataclass(frozen=True)
class Certificate:
    """Optimality evidence attached to a synthesized controller.

    status is "OPTIMAL" only when every check passed; each failed check
    appends a note.  similarity_residual measures how exactly the closed-loop
    matrix matches its block-triangular error-coordinate form; the spectrum
    claim (stability_margin) is certified through that similarity.
    """

    status: str
    stability_margin: float
    interpolation_residuals: Tuple[Tuple[float, float], ...]
    frequency_condition_min: float
    similarity_residual: float
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "stability_margin": self.stability_margin,
            "interpolation_residuals": [list(t) for t in self.interpolation_residuals],
            "frequency_condition_min": self.frequency_condition_min,
            "similarity_residual": self.similarity_residual,
            "notes": list(self.notes),
        }

    @staticmethod
    def from_dict(d: dict) -> "Certificate":
        return Certificate(
            status=str(d["status"]),
            stability_margin=float(d["stability_margin"]),
            interpolation_residuals=tuple(
                (float(w), float(r)) for w, r in d["interpolation_residuals"]),
            frequency_condition_min=float(d["frequency_condition_min"]),
            similarity_residual=float(d["similarity_residual"]),
            notes=tuple(str(n) for n in d.get("notes", [])),
        )


@dataclass(frozen=True)
class OucController:
    """Polynomial controller N(d/dt) u = M(d/dt) y with scalar denominator rho.

    M = Delta r and N = r P_u + rho I, so N - M W_yu0 = rho I identically and
    the controller acts on measurements as u = (M / rho)(y - W_yu0 u).
    """

    M: MatrixPolynomial
    N: MatrixPolynomial
    rho: Polynomial
    r: MatrixPolynomial
    certificate: Optional[Certificate] = None

    def disturbance_to_control(self, plant: PlantModel, s: complex) -> np.ndarray:
        """Closed-loop W_ud(s) = r(s) P_d(s) / rho(s)."""
        return self.r(s) @ plant.W_yd0.numerators(s) / self.rho(s)


def compute_pi(plant: PlantModel, weights: CostWeights, omega: float) -> np.ndarray:
    """Hermitian curvature Pi(iw) = W_yu0* F_y W_yu0 + F_u at one frequency."""
    W = plant.W_yu0(1j * float(omega))
    P = W.conj().T @ weights.F_y @ W + weights.F_u
    return (P + P.conj().T) / 2.0


def frequency_condition_check(plant: PlantModel, weights: CostWeights,
                              frequencies: Sequence[float] = (),
                              grid: Optional[np.ndarray] = None) -> float:
    """Smallest eigenvalue of Pi over a validation grid plus the target set.

    Positive return means the per-frequency optima are well defined
    everywhere sampled; synthesize() refuses nonpositive values.
    """
    if grid is None:
        grid = np.logspace(-3.0, 3.0, 200)
    pts = np.unique(np.concatenate([np.asarray(grid, dtype=float),
                                    np.asarray(list(frequencies), dtype=float)]))
    low = np.inf
    for w in pts:
        low = min(low, float(np.linalg.eigvalsh(compute_pi(plant, weights, w))[0]))
    return low


def compute_targets(plant: PlantModel, weights: CostWeights,
                    frequencies: Sequence[float]) -> List[InterpolationTarget]:
    """Per-frequency optimal responses R_j = -Pi^-1 W_yu0* F_y W_yd0.

    At w = 0 everything is real; imaginary residue above roundoff is an error.
    """
    out = []
    for omega in frequencies:
        omega = float(omega)
        s = 1j * omega
        Wu = plant.W_yu0(s)
        Wd = plant.W_yd0(s)
        Pi = compute_pi(plant, weights, omega)
        R = solve_complex_linear(Pi, -(Wu.conj().T @ weights.F_y @ Wd))
        if omega == 0.0:
            if np.max(np.abs(R.imag)) > 1e-10 * (1.0 + np.max(np.abs(R.real))):
                raise SynthesisError("zero-frequency optimum came out complex")
            R = R.real.astype(complex)
        out.append(InterpolationTarget(omega=omega, response=R, pi=Pi))
    return out


def make_rho(mu: float, degree: int) -> Polynomial:
    """(s + mu)^degree / mu^degree: Hurwitz, rho(0) = 1."""
    if mu <= 0.0:
        raise ValueError("mu must be positive")
    if degree < 1:
        raise ValueError("rho must have degree at least 1")
    return poly_from_roots([-float(mu)] * int(degree)).scaled(float(mu) ** -int(degree))


def _ordered_frequencies(frequencies: Sequence[float]) -> List[float]:
    freqs = sorted({float(w) for w in frequencies} | {0.0})
    if freqs[0] < 0.0:
        raise ValueError("frequencies must be nonnegative")
    return freqs


def solve_r(plant: PlantModel, targets: Sequence[InterpolationTarget],
            rho: Polynomial) -> MatrixPolynomial:
    """The unique 2x2 real polynomial r of degree 2p with r(iw_j) = T_j.

    T_j = rho(iw_j) R_j P_d(iw_j)^+ pulls the interpolation data back through
    the disturbance numerator matrix P_d = Delta W_yd0; the pseudoinverse keeps
    the pullback consistent at rank drops.  Each of the four entry positions
    contributes 2p+1 real linear conditions (one at w = 0, a conjugate pair
    elsewhere) on 2p+1 real coefficients; the shared Vandermonde system is
    solved once in frequency-scaled variables.

    Raises:
        SynthesisError: interpolation residual above RESIDUAL_TOL.
    """
    freqs = [t.omega for t in targets]
    if freqs != sorted(freqs) or freqs[0] != 0.0:
        raise ValueError("targets must be sorted with a zero-frequency member")
    Pd = plant.W_yd0.numerators
    T = {}
    for tgt in targets:
        pinv = np.linalg.pinv(Pd(1j * tgt.omega), rcond=1e-10)
        T[tgt.omega] = complex(rho(1j * tgt.omega)) * (tgt.response @ pinv)

    n_unknown = 2 * len(freqs) - 1
    w_scale = max(freqs[-1], 1.0)
    rows, rhs_rows = [], []
    rows.append([1.0] + [0.0] * (n_unknown - 1))
    rhs_rows.append([T[0.0][i, j].real for i in range(2) for j in range(2)])
    for w in freqs[1:]:
        powers = (1j * w / w_scale) ** np.arange(n_unknown)
        rows.append(powers.real)
        rows.append(powers.imag)
        rhs_rows.append([T[w][i, j].real for i in range(2) for j in range(2)])
        rhs_rows.append([T[w][i, j].imag for i in range(2) for j in range(2)])
    coeffs = np.linalg.solve(np.asarray(rows), np.asarray(rhs_rows))
    coeffs = coeffs / w_scale ** np.arange(n_unknown)[:, None]

    r = MatrixPolynomial([[Polynomial(coeffs[:, 2 * i + j]) for j in range(2)]
                          for i in range(2)])
    worst = 0.0
    for w in freqs:
        err = np.max(np.abs(r(1j * w) - T[w])) / (1.0 + np.max(np.abs(T[w])))
        worst = max(worst, err)
    if worst > RESIDUAL_TOL:
        raise SynthesisError(f"interpolation solve residual {worst:.3e}")
    return r


def assemble_controller(plant: PlantModel, r: MatrixPolynomial,
                        rho: Polynomial) -> OucController:
    """M = Delta r, N = r P_u + rho I, with properness and cancellation checks.

    N - M W_yu0 = rho I must hold identically (it is how the closed loop stays
    governed by Delta rho^2); it is spot-checked on the imaginary axis at
    RESIDUAL_TOL.  Properness of N^-1 M needs deg rho >= deg M with the leading
    coefficient matrix of N invertible.

    Raises:
        SynthesisError: improper controller or broken cancellation.
    """
    M = r.scale(plant.Delta)
    N = (r @ plant.W_yu0.numerators) + MatrixPolynomial.identity(2, rho)
    q = rho.degree
    if N.degree > q:
        raise SynthesisError(
            f"r P_u has degree {N.degree} above deg rho = {q}; N^-1 M is improper")
    if M.degree > q:
        raise SynthesisError(
            f"deg M = {M.degree} exceeds deg rho = {q}; N^-1 M is improper")
    lead = np.array([[N[i, j].coeffs[q] if N[i, j].degree == q else 0.0
                      for j in range(2)] for i in range(2)])
    if abs(np.linalg.det(lead)) < 1e-12 * max(np.max(np.abs(lead)) ** 2, 1e-300):
        raise SynthesisError("leading coefficient matrix of N is singular")

    for w in (0.0, 0.37, 2.13, 8.9):
        s = 1j * w
        gap = N(s) - (M(s) @ plant.W_yu0(s) + complex(rho(s)) * np.eye(2))
        scale = 1.0 + abs(rho(s)) + np.max(np.abs(M(s))) * np.max(np.abs(plant.W_yu0(s)))
        if np.max(np.abs(gap)) > RESIDUAL_TOL * scale:
            raise SynthesisError(
                f"cancellation N - M W_yu0 = rho I fails at w = {w} "
                f"(residual {np.max(np.abs(gap)) / scale:.3e})")
    return OucController(M=M, N=N, rho=rho, r=r)


# -- realization and the closed-loop spectrum ---------------------------------


def _repeated_root(rho: Polynomial) -> Optional[float]:
    """The root lam when rho = lead (s - lam)^q, else None."""
    q = rho.degree
    if q < 1:
        return None
    lead = rho.coeffs[-1]
    lam = -rho.coeffs[-2] / (q * lead)
    rebuilt = poly_from_roots([lam] * int(q)).scaled(lead)
    if np.max(np.abs(rebuilt.coeffs - rho.coeffs)) <= 1e-9 * np.max(np.abs(rho.coeffs)):
        return float(lam)
    return None


def _filter_realization(ctrl: OucController
                        ) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray,
                                   np.ndarray]:
    """State-space (A_f, B_f, C_f, D_f) of the filter M / rho, plus its spectrum.

    For the default rho = lead (s + mu)^q each input drives a shifted
    integrator chain: A_f is lower triangular with the root on the diagonal,
    so the filter spectrum is known exactly even though the root is defective.
    Taps come from the Taylor expansion of each M entry about the root.  A
    general Hurwitz rho falls back to companion blocks per input (spectrum
    from the companion eigenvalues, exact only for well-separated roots).
    """
    rho, M = ctrl.rho, ctrl.M
    q = int(rho.degree)
    if q < 1:
        raise SynthesisError("rho must have positive degree to realize M / rho")
    lead = rho.coeffs[-1]
    k, m = M.shape
    lam = _repeated_root(rho)

    A_f = np.zeros((m * q, m * q))
    B_f = np.zeros((m * q, m))
    C_f = np.zeros((k, m * q))
    D_f = np.zeros((k, m))
    if lam is not None:
        for j in range(m):
            base = j * q
            block = A_f[base:base + q, base:base + q]
            np.fill_diagonal(block, lam)
            for i in range(1, q):
                block[i, i - 1] = 1.0
            B_f[base, j] = 1.0
            for i in range(k):
                taps = taylor_coeffs_at(M[i, j], lam)
                for t, coeff in enumerate(taps):
                    if t == q:
                        D_f[i, j] = coeff / lead
                    else:
                        C_f[i, base + q - t - 1] = coeff / lead
        eigs = np.full(m * q, complex(lam))
        return A_f, B_f, C_f, D_f, eigs

    den = rho.monic()
    eig_blocks = []
    for j in range(m):
        base = j * q
        block = A_f[base:base + q, base:base + q]
        if q > 1:
            block[:-1, 1:] = np.eye(q - 1)
        block[-1, :] = -den.coeffs[:-1]
        B_f[base + q - 1, j] = 1.0
        for i in range(k):
            quot, rem = poly_divmod(M[i, j].scaled(1.0 / lead), den)
            if quot.degree > 0:
                raise SynthesisError("M / rho is improper")
            D_f[i, j] = 0.0 if quot.is_zero else quot.coeffs[0]
            C_f[i, base:base + rem.coeffs.size] = rem.coeffs
        eig_blocks.append(np.linalg.eigvals(block))
    return A_f, B_f, C_f, D_f, np.concatenate(eig_blocks)


def controller_realization(ctrl: OucController, plant_ss: StateSpace) -> StateSpace:
    """Observer-form realization of u = N^-1 M y around the plant model copy.

    The identity N - M W_yu0 = rho I turns N u = M y into
    rho u = M (y - W_yu0 u): the controller runs a copy (A, B, C) of the plant
    control channel, subtracts its predicted output, and filters the residue
    by M / rho.  The copy must be the very realization used for the plant so
    that the closed loop block-triangularizes exactly in error coordinates.

    Raises:
        SynthesisError: the plant model copy has feedthrough (the subtraction
            u -> y would then close an algebraic loop).
    """
    if np.any(plant_ss.D != 0.0):
        raise SynthesisError("plant control channel must be strictly proper")
    A0, B0, C0 = plant_ss.A, plant_ss.B, plant_ss.C
    A_f, B_f, C_f, D_f, _ = _filter_realization(ctrl)
    n, nf = A0.shape[0], A_f.shape[0]
    A_K = np.block([[A0 - B0 @ D_f @ C0, B0 @ C_f],
                    [-B_f @ C0, A_f]])
    B_K = np.vstack([B0 @ D_f, B_f])
    C_K = np.hstack([-D_f @ C0, C_f])
    return StateSpace(A_K, B_K, C_K, D_f.copy())


def closed_loop_spectrum(plant_ss: StateSpace, ctrl: OucController
                         ) -> Tuple[np.ndarray, float]:
    """Certified spectrum of the closed loop plant + controller.

    In coordinates (x - x0, x_f, x0) the closed-loop matrix is block lower
    triangular with diagonal blocks (A, A_f, A): the model-copy error evolves
    autonomously, so the spectrum is eig(A), the filter spectrum, and eig(A)
    again.  The returned residual ||T A_cl - A_tri T|| / ||A_cl|| measures how
    exactly the actual interconnection matches that triangular form (zero up
    to roundoff when the controller shares the plant realization arrays).
    """
    ctrl_ss = controller_realization(ctrl, plant_ss)
    cl = feedback_interconnect(plant_ss, ctrl_ss)
    A, B, C = plant_ss.A, plant_ss.B, plant_ss.C
    A_f, B_f, C_f, D_f, f_eigs = _filter_realization(ctrl)
    n, nf = A.shape[0], A_f.shape[0]

    T = np.zeros((2 * n + nf, 2 * n + nf))
    T[:n, :n] = np.eye(n)
    T[:n, n:2 * n] = -np.eye(n)
    T[n:n + nf, 2 * n:] = np.eye(nf)
    T[n + nf:, n:2 * n] = np.eye(n)
    A_tri = np.zeros_like(T)
    A_tri[:n, :n] = A
    A_tri[n:n + nf, :n] = B_f @ C
    A_tri[n:n + nf, n:n + nf] = A_f
    A_tri[n + nf:, :n] = B @ D_f @ C
    A_tri[n + nf:, n:n + nf] = B @ C_f
    A_tri[n + nf:, n + nf:] = A

    residual = float(np.linalg.norm(T @ cl.A - A_tri @ T) / np.linalg.norm(cl.A))
    plant_eigs = np.linalg.eigvals(A)
    eigs = np.concatenate([plant_eigs, f_eigs, plant_eigs])
    return eigs, residual


def closed_loop_determinant(plant_ss: StateSpace, ctrl: OucController,
                    radius: float = 2.0) -> Polynomial:
    """Closed-loop characteristic polynomial det [sI - A, -B; -M C, N - M D].

    Sampled on a circle of the given radius at a power-of-two point count and
    recovered by inverse FFT; exact for the true degree n + 2 deg rho.  With
    the plant realization matching W_yu0 this equals chi_A(s) rho(s)^2 up to
    roundoff.
    """
    A, B = plant_ss.A, plant_ss.B
    C, D = plant_ss.C, plant_ss.D
    n = A.shape[0]
    deg = n + 2 * int(ctrl.rho.degree)
    K = 1
    while K < deg + 2:
        K *= 2
    s_pts = radius * np.exp(2j * np.pi * np.arange(K) / K)
    vals = np.empty(K, dtype=complex)
    for k, s in enumerate(s_pts):
        Ms = ctrl.M(s)
        top = np.hstack([s * np.eye(n) - A, -B])
        bottom = np.hstack([-Ms @ C, ctrl.N(s) - Ms @ D])
        vals[k] = np.linalg.det(np.vstack([top, bottom]).astype(complex))
    # coefficient t needs sum_k v_k e^(-2 pi i k t / K), which is numpy's
    # forward transform (up to 1/K)
    raw = np.fft.fft(vals) / K / radius ** np.arange(K)
    coeffs = raw[:deg + 1]
    if np.max(np.abs(coeffs.imag)) > 1e-8 * max(np.max(np.abs(coeffs.real)), 1e-300):
        raise SynthesisError("determinant interpolation left an imaginary residue")
    return Polynomial(coeffs.real)


# -- certification and the public synthesis entry point -----------------------


def verify_certificate(plant: PlantModel, weights: CostWeights, ctrl: OucController,
                       frequencies: Sequence[float],
                       plant_ss: Optional[StateSpace] = None) -> Certificate:
    """Re-derive the optimality evidence for a controller from scratch.

    Checks: certified stability margin above 1e-6, interpolation residuals at
    every frequency within 1e-8, positive frequency condition, and the
    block-triangular similarity that underwrites the spectrum claim.
    """
    freqs = _ordered_frequencies(frequencies)
    if plant_ss is None:
        plant_ss = realize_plant(plant)
    notes = []

    fc_min = frequency_condition_check(plant, weights, freqs)
    if fc_min <= 0.0:
        notes.append(f"frequency condition violated (min eig Pi = {fc_min:.3e})")

    targets = compute_targets(plant, weights, freqs)
    residuals = []
    for tgt in targets:
        got = ctrl.disturbance_to_control(plant, 1j * tgt.omega)
        res = float(np.max(np.abs(got - tgt.response)) /
                    (1.0 + np.max(np.abs(tgt.response))))
        residuals.append((tgt.omega, res))
        if res > 1e-8:
            notes.append(f"interpolation residual {res:.3e} at w = {tgt.omega}")

    eigs, sim_residual = closed_loop_spectrum(plant_ss, ctrl)
    margin = float(-np.max(eigs.real))
    if sim_residual > 1e-10:
        notes.append(f"spectrum similarity residual {sim_residual:.3e}")
    if margin <= 1e-6:
        notes.append(f"stability margin {margin:.3e} not positive")

    return Certificate(
        status="OPTIMAL" if not notes else "FAILED",
        stability_margin=margin,
        interpolation_residuals=tuple(residuals),
        frequency_condition_min=fc_min,
        similarity_residual=sim_residual,
        notes=tuple(notes),
    )


def synthesize(plant: PlantModel, weights: CostWeights,
               frequencies: Sequence[float], rho: Optional[Polynomial] = None,
               mu: float = DEFAULT_MU) -> OucController:
    """Build and certify the universal controller for the given frequency set.

    The zero frequency is always included.  rho defaults to
    (s + mu)^(deg Delta + 2p + 1) normalized to rho(0) = 1, one degree above
    the properness bound so the filter M / rho is strictly proper.

    Raises:
        SynthesisError: non-Hurwitz rho, violated frequency condition, or a
            broken synthesis invariant.  A returned controller always carries
            a certificate; inspect certificate.status for "OPTIMAL".
    """
    freqs = _ordered_frequencies(frequencies)
    p = len(freqs) - 1
    if rho is None:
        rho = make_rho(mu, int(plant.Delta.degree) + 2 * p + 1)
    stable, _ = is_hurwitz(rho)
    if not stable:
        raise SynthesisError("rho must be Hurwitz")
    if rho.degree < plant.Delta.degree + 2 * p:
        raise SynthesisError(
            f"deg rho = {rho.degree} below properness bound "
            f"{plant.Delta.degree + 2 * p}")

    fc_min = frequency_condition_check(plant, weights, freqs)
    if fc_min <= 0.0:
        raise SynthesisError(f"frequency condition violated: min eig Pi = {fc_min:.3e}")

    targets = compute_targets(plant, weights, freqs)
    r = solve_r(plant, targets, rho)
    ctrl = assemble_controller(plant, r, rho)
    cert = verify_certificate(plant, weights, ctrl, freqs)
    return replace(ctrl, certificate=cert)


# -- serialization -------------------------------------------------------------


def _matrix_to_lists(mp: MatrixPolynomial) -> list:
    return [[list(mp[i, j].coeffs) for j in range(mp.shape[1])]
            for i in range(mp.shape[0])]


def _matrix_from_lists(rows: list) -> MatrixPolynomial:
    return MatrixPolynomial([[Polynomial(c) for c in row] for row in rows])


def controller_to_json(ctrl: OucController) -> str:
    """Lossless JSON form: ascending coefficient lists for N, M, rho, r."""
    payload = {
        "kind": "ouc",
        "N": _matrix_to_lists(ctrl.N),
        "M": _matrix_to_lists(ctrl.M),
        "rho": list(ctrl.rho.coeffs),
        "r": _matrix_to_lists(ctrl.r),
        "certificate": ctrl.certificate.to_dict() if ctrl.certificate else None,
    }
    return json.dumps(payload, indent=2, sort_keys=True)


def controller_from_json(text: str) -> OucController:
    d = json.loads(text)
    if d.get("kind") != "ouc":
        raise ValueError(f"not a universal controller payload: kind={d.get('kind')!r}")
    cert = d.get("certificate")
    return OucController(
        M=_matrix_from_lists(d["M"]),
        N=_matrix_from_lists(d["N"]),
        rho=Polynomial(d["rho"]),
        r=_matrix_from_lists(d["r"]),
        certificate=Certificate.from_dict(cert) if cert else None,
    )
