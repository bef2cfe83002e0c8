"""Real polynomial and rational-matrix arithmetic for frequency-domain synthesis.

Coefficients are stored ascending by degree (c[0] + c[1]*s + ...), the same
layout numpy.polynomial uses.  Trailing coefficients are trimmed at a relative
tolerance so that degree bookkeeping (deg rho >= deg Delta + 2p and friends)
stays deterministic.  Complex matrices are plain numpy arrays of dtype complex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

# relative threshold for treating a trailing coefficient as zero
TRIM_RTOL = 1e-12


class PoleError(ValueError):
    """Rational-matrix evaluation hit (a neighborhood of) a denominator root."""

    def __init__(self, s):
        super().__init__(f"evaluation at s = {s} is at or near a pole")
        self.s = s


class IllConditionedError(ValueError):
    """Linear solve refused: singular or condition number beyond 1e12."""


def _trim(coeffs: np.ndarray) -> np.ndarray:
    coeffs = np.atleast_1d(np.asarray(coeffs, dtype=float))
    scale = np.max(np.abs(coeffs)) if coeffs.size else 0.0
    if scale == 0.0:
        return np.zeros(1)
    keep = coeffs.size
    while keep > 1 and abs(coeffs[keep - 1]) <= TRIM_RTOL * scale:
        keep -= 1
    return coeffs[:keep].copy()


@dataclass(frozen=True)
class Polynomial:
    """Real-coefficient polynomial, ascending-degree storage.

    The zero polynomial has degree -inf (sentinel) so that degree arithmetic
    like deg(p*q) = deg p + deg q stays honest.
    """

    coeffs: np.ndarray

    def __init__(self, coeffs: Sequence[float]):
        object.__setattr__(self, "coeffs", _trim(np.asarray(coeffs, dtype=float)))

    @property
    def degree(self) -> Union[int, float]:
        if self.is_zero:
            return -math.inf
        return self.coeffs.size - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs.size == 1 and self.coeffs[0] == 0.0

    def __call__(self, s: complex) -> complex:
        return poly_eval(self, s)

    def __add__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(npoly.polyadd(self.coeffs, _coeffs_of(other)))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(npoly.polysub(self.coeffs, _coeffs_of(other)))

    def __mul__(self, other: Union["Polynomial", float, int]) -> "Polynomial":
        if isinstance(other, Polynomial):
            return Polynomial(npoly.polymul(self.coeffs, other.coeffs))
        return Polynomial(self.coeffs * float(other))

    __rmul__ = __mul__

    def __neg__(self) -> "Polynomial":
        return Polynomial(-self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"

    def scaled(self, factor: float) -> "Polynomial":
        return Polynomial(self.coeffs * float(factor))

    def monic(self) -> "Polynomial":
        if self.is_zero:
            raise ValueError("zero polynomial has no monic form")
        return Polynomial(self.coeffs / self.coeffs[-1])

    def roots(self) -> np.ndarray:
        """Roots via companion-matrix eigenvalues (empty for degree <= 0)."""
        if self.is_zero:
            raise ValueError("zero polynomial")
        if self.coeffs.size == 1:
            return np.array([], dtype=complex)
        return npoly.polyroots(self.coeffs)


def _coeffs_of(p) -> np.ndarray:
    if isinstance(p, Polynomial):
        return p.coeffs
    return _trim(np.asarray(p, dtype=float))


def poly_eval(p: Polynomial, s: complex) -> complex:
    """Horner evaluation of p at a complex point."""
    return complex(npoly.polyval(complex(s), _coeffs_of(p)))


def poly_add(p: Polynomial, q: Polynomial) -> Polynomial:
    return p + q


def poly_mul(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def poly_scale(p: Polynomial, factor: float) -> Polynomial:
    return p.scaled(factor)


def poly_from_roots(roots: Sequence[complex], gain: float = 1.0) -> Polynomial:
    """Real polynomial gain * prod (s - r_i) from a conjugate-closed root set.

    Complex roots are paired with their conjugates and expanded through real
    quadratic factors, so no imaginary residue can leak into the coefficients.

    Raises:
        ValueError: if some complex root has no conjugate partner.
    """
    remaining = [complex(r) for r in roots]
    scale = max([1.0] + [abs(r) for r in remaining])
    out = Polynomial([float(gain)])
    while remaining:
        r = remaining.pop()
        if abs(r.imag) <= 1e-12 * scale:
            out = out * Polynomial([-r.real, 1.0])
            continue
        match = None
        for k, c in enumerate(remaining):
            if abs(c - r.conjugate()) <= 1e-9 * scale:
                match = k
                break
        if match is None:
            raise ValueError(f"root set not closed under conjugation: {r} unpaired")
        remaining.pop(match)
        # (s - r)(s - conj r) = s^2 - 2 Re(r) s + |r|^2
        out = out * Polynomial([abs(r) ** 2, -2.0 * r.real, 1.0])
    return out


def poly_divmod(p: Polynomial, d: Polynomial) -> Tuple[Polynomial, Polynomial]:
    """Quotient and remainder of p / d."""
    if d.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    q, r = npoly.polydiv(_coeffs_of(p), _coeffs_of(d))
    return Polynomial(q), Polynomial(r)


def taylor_coeffs_at(p: Polynomial, s0: float) -> np.ndarray:
    """Coefficients m_t with p(s) = sum_t m_t (s - s0)^t, by repeated synthetic division."""
    work = _coeffs_of(p).astype(float).copy()
    n = work.size
    out = np.zeros(n)
    for t in range(n):
        # one Ruffini step: divide by (s - s0), remainder is m_t
        for k in range(n - 2, t - 1, -1):
            work[k] += s0 * work[k + 1]
        out[t] = work[t]
    return out


def is_hurwitz(p: Polynomial, margin_tol: float = 0.0) -> Tuple[bool, float]:
    """Stability of a polynomial: all roots strictly in the open left half-plane.

    Returns:
        (stable, margin) where margin = -max Re(root).  A degree-0 polynomial
        is Hurwitz by convention (no roots), with infinite margin.
    """
    if p.is_zero:
        raise ValueError("zero polynomial has no stability classification")
    rts = p.roots()
    if rts.size == 0:
        return True, math.inf
    margin = float(-np.max(rts.real))
    return margin > margin_tol, margin


@dataclass(frozen=True)
class MatrixPolynomial:
    """Rectangular matrix with Polynomial entries."""

    entries: tuple

    def __init__(self, entries):
        rows = tuple(tuple(_as_poly(e) for e in row) for row in entries)
        if not rows or any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("entries must form a nonempty rectangular matrix")
        object.__setattr__(self, "entries", rows)

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.entries), len(self.entries[0])

    @property
    def degree(self) -> Union[int, float]:
        return max(p.degree for row in self.entries for p in row)

    def __getitem__(self, idx: Tuple[int, int]) -> Polynomial:
        i, j = idx
        return self.entries[i][j]

    def __add__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return MatrixPolynomial(
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.entries, other.entries)]
        )

    def __matmul__(self, other: "MatrixPolynomial") -> "MatrixPolynomial":
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError("inner dimension mismatch")
        out = []
        for i in range(n):
            row = []
            for j in range(m):
                acc = Polynomial([0.0])
                for t in range(k):
                    acc = acc + self.entries[i][t] * other.entries[t][j]
                row.append(acc)
            out.append(row)
        return MatrixPolynomial(out)

    def scale(self, p: Union[Polynomial, float]) -> "MatrixPolynomial":
        return MatrixPolynomial([[e * p for e in row] for row in self.entries])

    def __call__(self, s: complex) -> np.ndarray:
        n, m = self.shape
        out = np.empty((n, m), dtype=complex)
        for i in range(n):
            for j in range(m):
                out[i, j] = poly_eval(self.entries[i][j], s)
        return out

    @staticmethod
    def identity(n: int, diag: Optional[Polynomial] = None) -> "MatrixPolynomial":
        d = diag if diag is not None else Polynomial([1.0])
        return MatrixPolynomial(
            [[d if i == j else Polynomial([0.0]) for j in range(n)] for i in range(n)]
        )

    @staticmethod
    def zeros(n: int, m: int) -> "MatrixPolynomial":
        return MatrixPolynomial([[Polynomial([0.0])] * m for _ in range(n)])

    @staticmethod
    def hstack(left: "MatrixPolynomial", right: "MatrixPolynomial") -> "MatrixPolynomial":
        if left.shape[0] != right.shape[0]:
            raise ValueError("row count mismatch")
        return MatrixPolynomial(
            [list(ra) + list(rb) for ra, rb in zip(left.entries, right.entries)]
        )


def _as_poly(e) -> Polynomial:
    if isinstance(e, Polynomial):
        return e
    if np.isscalar(e):
        return Polynomial([float(e)])
    return Polynomial(e)


@dataclass(frozen=True)
class RationalMatrix:
    """Matrix of rational functions in common-denominator normal form."""

    numerators: MatrixPolynomial
    common_denominator: Polynomial

    def __init__(self, numerators: MatrixPolynomial, common_denominator: Polynomial):
        if common_denominator.is_zero:
            raise ValueError("denominator must not be identically zero")
        object.__setattr__(self, "numerators", numerators)
        object.__setattr__(self, "common_denominator", common_denominator)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.numerators.shape

    def is_proper(self, strict: bool = False) -> bool:
        dd = self.common_denominator.degree
        nd = self.numerators.degree
        return nd < dd if strict else nd <= dd

    def __call__(self, s: complex) -> np.ndarray:
        return ratmat_eval(self, s)


def ratmat_eval(W: RationalMatrix, s: complex) -> np.ndarray:
    """Evaluate a rational matrix entrywise at s.

    Raises:
        PoleError: if the common denominator vanishes at s (relative 1e-12).
    """
    den = poly_eval(W.common_denominator, s)
    scale = float(np.max(np.abs(W.common_denominator.coeffs)))
    smag = max(1.0, abs(complex(s)))
    if abs(den) <= 1e-12 * scale * smag ** max(0, int(W.common_denominator.degree)):
        raise PoleError(s)
    return W.numerators(s) / den


def solve_complex_linear(A: np.ndarray, b: np.ndarray, cond_limit: float = 1e12) -> np.ndarray:
    """Solve A x = b for complex A with a condition-number guard.

    Raises:
        IllConditionedError: singular A or condition estimate above cond_limit.
    """
    A = np.asarray(A, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    cond = np.linalg.cond(A)
    if not np.isfinite(cond) or cond > cond_limit:
        raise IllConditionedError(f"condition number {cond:.3e} exceeds {cond_limit:.1e}")
    return np.linalg.solve(A, b)
