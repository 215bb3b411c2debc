"""Immersed double points of the local model at double roots of f.

Near a double root xi_0, f = (xi - xi_0)^2 h(xi) and the two sheets are
x = +-conj(g (xi - xi_0)) to first order, with g = sqrt(h(xi_0)).  In the
coordinates z_j = xi_j + i x_j the tangent plane of a sheet is U R^2 with
U = (I + iA)(I + A^2)^(-1/2), A the symmetric matrix of v -> conj(g v).  The
Kahler angles theta_j between the planes satisfy exp(2 i theta_j) = eig(W W^T)
with W = U_1^* U_2, and the degree of the intersection point is sum(theta_j) / pi.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy.linalg import sqrtm


@dataclass(frozen=True)
class ImmersedPointReport:
    location: Tuple[float, float]
    g0: complex
    angles: Tuple[float, float]
    degree: int
    degree_reverse: int

    @property
    def angle_sum(self) -> float:
        return self.angles[0] + self.angles[1]

    def to_json(self) -> dict:
        g = self.g0
        return {
            "location": list(self.location),
            "g0": g.real if g.imag == 0 else [g.real, g.imag],
            "angles": list(self.angles),
            "angle_sum": self.angle_sum,
            "degree": self.degree,
            "degree_reverse": self.degree_reverse,
        }


def conj_mult_matrix(g: complex) -> np.ndarray:
    """Real matrix of v -> conj(g v) on R^2 = C; symmetric with eigenvalues +-|g|."""
    a, b = g.real, g.imag
    return np.array([[a, -b], [-b, -a]])


def tangent_unitary(A: np.ndarray) -> np.ndarray:
    """Unitary U with U R^2 equal to the graph {(v, A v)} written in z = xi + i x."""
    n = A.shape[0]
    S = np.linalg.inv(np.real(sqrtm(np.eye(n) + A @ A)))
    return (np.eye(n) + 1j * A) @ S


def kahler_angles(U1: np.ndarray, U2: np.ndarray) -> Tuple[float, ...]:
    """Angles in [0, pi) from the eigenvalues exp(2 i theta) of W W^T, W = U1^* U2."""
    W = U1.conj().T @ U2
    ev = np.linalg.eigvals(W @ W.T)
    return tuple(sorted(float(np.mod(np.angle(e) / 2, math.pi)) for e in ev))


def angles_from_g(g: complex) -> Tuple[float, float]:
    A = conj_mult_matrix(g)
    return kahler_angles(tangent_unitary(A), tangent_unitary(-A))


def report_for(location: complex, g: complex, tol: float = 1e-9) -> ImmersedPointReport:
    th = angles_from_g(g)
    s = sum(th) / math.pi
    deg = int(round(s))
    if abs(s - deg) > tol or min(th) <= tol:
        raise ArithmeticError(f"intersection at {location} is not transversal: angles {th}")
    rev = int(round(sum(math.pi - t for t in th) / math.pi))
    return ImmersedPointReport((float(location.real), float(location.imag)), complex(g), th, deg, rev)


def immersed_points(model) -> List[ImmersedPointReport]:
    """One report per double root of the model polynomial (accepts a GluedPotential or a model)."""
    model = getattr(model, "model", model)
    coeffs = np.asarray(model.coefficients, dtype=float)
    second = np.polynomial.polynomial.polyder(coeffs, 2)
    out = []
    for z in sorted(model.double_roots, key=lambda w: (w.real, w.imag)):
        h0 = complex(np.polynomial.polynomial.polyval(z, second)) / 2
        out.append(report_for(z, cmath.sqrt(h0)))
    return out
