"""Hyperelliptic local models x^q = f(xi) and the Laurent series of their potential.

On the cylindrical end the curve is parametrized by l with xi = l^k (k = 2 for
odd d, k = 1 for even d, k = r for the rank-r model x^r = f).  Writing
f = a_d xi^d p(1/xi) with p(0) = 1, the root f^(1/q) expands as
a_d^(1/q) xi^(d/q) sum_n beta_n xi^(-n); pulling back xi by l^k and integrating
term by term gives

    phi(r, theta) = s a_d^(1/q) [ sum_n c_n r^e_n cos(e_n theta) + c_log log r ],
    e_n = k d / q + k - k n,   c_n = k beta_n / e_n,

with the log coefficient k beta_n at the (even-case) index where e_n = 0.
The branch sign s is the involution x -> -x.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np
import sympy
from scipy import integrate, optimize

from ..errors import DriftBoundViolated, InadmissiblePolynomial, WrongZeroCount


def power_series_root(p: Sequence[float], alpha: float, n_terms: int) -> np.ndarray:
    """Coefficients of p(t)^alpha for a power series p with p[0] = 1 (J.C.P. Miller's recurrence)."""
    p = np.zeros(n_terms) if len(p) == 0 else np.asarray(p, dtype=float)
    if abs(p[0] - 1.0) > 1e-15:
        raise ValueError("p(0) must be 1")
    pp = np.zeros(n_terms)
    pp[: min(len(p), n_terms)] = p[:n_terms]
    s = np.zeros(n_terms)
    s[0] = 1.0
    for n in range(1, n_terms):
        j = np.arange(1, n + 1)
        s[n] = np.sum((j * (alpha + 1.0) - n) * pp[j] * s[n - j]) / n
    return s


def _root_multiplicities(coeffs: Sequence[float]) -> List[Tuple[complex, int]]:
    """Roots with exact multiplicities via square-free factorization over Q."""
    xi = sympy.Symbol("xi")
    poly = sympy.Poly(
        [sympy.Rational(Fraction(c).limit_denominator(10**12)) for c in reversed(list(coeffs))], xi, domain="QQ"
    )
    out = []
    _, factors = sympy.sqf_list(poly)
    for fac, mult in factors:
        if fac.degree() == 0:
            continue
        for root in np.roots([float(c) for c in fac.all_coeffs()]):
            out.append((complex(root), int(mult)))
    return out


@dataclass(frozen=True)
class HyperellipticModel:
    coefficients: Tuple[float, ...]  # ascending powers of xi, leading a_d > 0
    q: int  # x^q = f
    k: int  # xi = l^k on the end
    beta: Tuple[float, ...]
    exponents: Tuple[float, ...]
    c: Tuple[float, ...]  # c_n, with 0 in the log slot
    c_log: float
    log_index: Optional[int]
    R0: float
    roots: Tuple[Tuple[complex, int], ...]
    sign: int = 1

    # ------------------------------------------------------------ basic data
    @property
    def d(self) -> int:
        return len(self.coefficients) - 1

    @property
    def a_d(self) -> float:
        return self.coefficients[-1]

    @property
    def K(self) -> int:
        return len(self.c) - 1

    @property
    def parity(self) -> str:
        return "odd" if self.d % 2 else "even"

    @property
    def e0(self) -> float:
        return self.exponents[0]

    @property
    def period(self) -> float:
        """Angular domain holding the d+2 zeros: [0, pi) for odd, [0, 2 pi) for even."""
        return 2 * math.pi / self.k if self.q == 2 else 2 * math.pi / self.k

    @property
    def double_roots(self) -> List[complex]:
        return [z for z, m in self.roots if m == 2]

    @property
    def scale(self) -> float:
        return self.sign * self.a_d ** (1.0 / self.q)

    def with_sign(self, sign: int) -> "HyperellipticModel":
        return replace(self, sign=1 if sign >= 0 else -1)

    def with_leading(self, a_d: float) -> "HyperellipticModel":
        """Same roots, new leading coefficient (the series coefficients c_n do not change)."""
        ratio = a_d / self.a_d
        return replace(self, coefficients=tuple(c * ratio for c in self.coefficients))

    def f(self, xi):
        return np.polynomial.polynomial.polyval(xi, self.coefficients)

    # ------------------------------------------------------------ evaluation
    def _sum(self, l, deriv: bool):
        """sum_n c_n l^e_n and, if deriv, its l-derivative, via Horner in z = l^-k."""
        l = np.asarray(l, dtype=complex)
        z = l ** (-self.k)
        e = np.asarray(self.exponents)
        c = np.asarray(self.c)
        acc = np.zeros_like(l)
        dacc = np.zeros_like(l)
        for n in range(len(c) - 1, -1, -1):
            acc = acc * z + c[n]
            if deriv:
                dacc = dacc * z + c[n] * e[n]
        lead = l ** e[0]
        val = lead * acc
        if not deriv:
            return val, None
        return val, lead * dacc / l

    def phi(self, r, theta):
        """The potential on the end (real part of the primitive), vectorized."""
        r = np.asarray(r, dtype=float)
        l = r * np.exp(1j * np.asarray(theta, dtype=float))
        val, _ = self._sum(l, False)
        out = val.real
        if self.log_index is not None:
            out = out + self.c_log * np.log(r)
        return self.scale * out

    def grad(self, r, theta):
        """(phi, d phi/dr, d phi/dtheta), analytic."""
        r = np.asarray(r, dtype=float)
        th = np.asarray(theta, dtype=float)
        u = np.exp(1j * th)
        l = r * u
        val, dval = self._sum(l, True)
        phi = val.real
        phi_r = (dval * u).real
        phi_t = -(dval * l).imag
        if self.log_index is not None:
            phi = phi + self.c_log * np.log(r)
            phi_r = phi_r + self.c_log / r
        s = self.scale
        return s * phi, s * phi_r, s * phi_t

    def phi_r_at_zero(self, r, theta):
        """d phi/dr on the zero set, written without the cancelling leading term."""
        r = np.asarray(r, dtype=float)
        th = np.asarray(theta, dtype=float)
        e = np.asarray(self.exponents)
        c = np.asarray(self.c)
        e0 = e[0]
        acc = np.zeros(np.broadcast(r, th).shape)
        for n in range(1, len(c)):
            if c[n] == 0.0:
                continue
            acc = acc + c[n] * (e[n] - e0) * r ** (e[n] - 1) * np.cos(e[n] * th)
        if self.log_index is not None:
            acc = acc + self.c_log * (1.0 - e0 * np.log(r)) / r
        return self.scale * acc

    def truncated(self, K: int) -> "HyperellipticModel":
        K = min(K, self.K)
        log_ok = self.log_index is not None and self.log_index <= K
        return replace(
            self,
            beta=self.beta[: K + 1],
            exponents=self.exponents[: K + 1],
            c=self.c[: K + 1],
            c_log=self.c_log if log_ok else 0.0,
            log_index=self.log_index if log_ok else None,
        )

    # ------------------------------------------------------------ the exact curve
    def root_branch(self, xi, l):
        """f(xi)^(1/q) on the branch closest to a_d^(1/q) l^(k d / q) (the series branch), times the sign."""
        xi = np.asarray(xi, dtype=complex)
        l = np.asarray(l, dtype=complex)
        w = np.asarray(self.f(xi), dtype=complex) ** (1.0 / self.q)
        ref = self.a_d ** (1.0 / self.q) * l ** (self.k * self.d / self.q)
        best = w
        best_dist = np.abs(w - ref)
        for j in range(1, self.q):
            cand = w * np.exp(2j * math.pi * j / self.q)
            dist = np.abs(cand - ref)
            pick = dist < best_dist
            best = np.where(pick, cand, best)
            best_dist = np.where(pick, dist, best_dist)
        return self.sign * best

    def to_json(self) -> dict:
        return {
            "coefficients": list(self.coefficients),
            "d": self.d,
            "q": self.q,
            "k": self.k,
            "parity": self.parity,
            "K": self.K,
            "R0": self.R0,
            "c": list(self.c),
            "c_log": self.c_log if self.log_index is not None else None,
            "double_roots": [[z.real, z.imag] for z in self.double_roots],
            "sign": self.sign,
        }


def _coeffs_from(f=None, roots=None, a_d: float = 1.0) -> Tuple[float, ...]:
    if roots is not None:
        poly = np.poly(np.asarray(roots, dtype=complex))  # descending, monic
        if np.max(np.abs(poly.imag)) > 1e-9:
            raise InadmissiblePolynomial("roots must be closed under conjugation")
        return tuple(float(x) * a_d for x in poly.real[::-1])
    return tuple(float(x) for x in f)


def series_coefficients(
    f: Optional[Sequence[float]] = None,
    K: int = 40,
    *,
    roots: Optional[Sequence[complex]] = None,
    a_d: float = 1.0,
    r: int = 2,
    strict: bool = True,
) -> HyperellipticModel:
    """Series model of x^r = f.  ``f`` lists coefficients in ascending powers of xi.

    With ``strict=False`` roots of any multiplicity are accepted; the expansion
    at infinity is still valid, but such models must not be glued.
    """
    coeffs = _coeffs_from(f, roots, a_d)
    while len(coeffs) > 1 and coeffs[-1] == 0.0:
        coeffs = coeffs[:-1]
    d = len(coeffs) - 1
    if d < 1:
        raise InadmissiblePolynomial("f must have positive degree")
    if not all(math.isfinite(c) for c in coeffs):
        raise InadmissiblePolynomial("f has non-finite coefficients")
    lead = coeffs[-1]
    if lead <= 0:
        raise InadmissiblePolynomial(f"leading coefficient must be positive, got {lead}")
    roots_m = _root_multiplicities(coeffs)
    max_mult = 1 if r > 2 else 2
    bad = [z for z, m in roots_m if m > max_mult]
    if bad and strict:
        raise InadmissiblePolynomial(f"roots of multiplicity > {max_mult}: {bad}")
    if r > 2 and math.gcd(r, d) != 1:
        raise InadmissiblePolynomial(f"rank {r} needs gcd(r, d) = 1, got d = {d}")
    if K < d + 2:
        raise InadmissiblePolynomial(f"series order K = {K} must be at least d + 2 = {d + 2}")
    q = r
    k = r if r > 2 else (2 if d % 2 else 1)
    monic_rev = np.asarray(coeffs[::-1]) / lead  # p_j = coefficient of xi^(d-j)
    beta = power_series_root(monic_rev, 1.0 / q, K + 1)
    exps, cs = [], []
    c_log, log_index = 0.0, None
    for n in range(K + 1):
        e = k * d / q + k - k * n
        exps.append(e)
        if abs(e) < 1e-12:
            c_log, log_index = k * beta[n], n
            cs.append(0.0)
        else:
            cs.append(k * beta[n] / e)
    R0 = 2.0 * (1.0 + max((abs(z) for z, _ in roots_m), default=0.0))
    return HyperellipticModel(
        tuple(coeffs), q, k, tuple(beta), tuple(exps), tuple(cs), c_log, log_index, R0, tuple(roots_m)
    )


def default_polynomial(d: int) -> Tuple[float, ...]:
    """f_d = xi (xi - 1) ... (xi - d + 1): simple real roots including 0."""
    return _coeffs_from(roots=list(range(d)))


# ---------------------------------------------------------------- quadrature oracle


def quadrature_phi(model: HyperellipticModel, r: float, theta: float, r_start: Optional[float] = None) -> float:
    """phi(r, theta) - phi(r_start, theta) by adaptive quadrature of Re(f^(1/q) dxi) along the ray."""
    r_start = model.R0 if r_start is None else r_start
    u = complex(math.cos(theta), math.sin(theta))
    k = model.k

    def integrand(rho):
        l = rho * u
        xi = l**k
        w = model.root_branch(xi, l)
        ratio = w / (model.sign * model.a_d ** (1.0 / model.q) * l ** (k * model.d / model.q))
        assert ratio.real > 0.2, "branch tracking lost"
        return (w * k * l ** (k - 1) * u).real

    val, _ = integrate.quad(integrand, r_start, r, epsabs=0.0, epsrel=1e-13, limit=500)
    return val


# ---------------------------------------------------------------- zeros


def zero_threshold(model: HyperellipticModel) -> float:
    """Radius beyond which the leading term dominates both phi and d phi/dtheta (scaled) by a factor 2."""
    c = np.abs(np.asarray(model.c))
    e = np.abs(np.asarray(model.exponents))
    c0, e0, k, R0 = c[0], e[0], model.k, model.R0
    n = np.arange(len(c))
    geo = R0 ** (-k * np.maximum(n - 1, 0).astype(float))
    C_val = float(np.sum(c[1:] * geo[1:]))
    C_der = float(np.sum(c[1:] * e[1:] * geo[1:]))
    if model.log_index is not None and e0 > k:
        C_val += abs(model.c_log) / (math.e * (e0 - k))
    # |phi/r^e0 - c0 cos| <= C r^-k; need 2 C r^-k < c0, and the derivative error below e0 c0 sqrt(3)/2
    need_val = 2 * C_val / c0
    need_der = C_der / (e0 * c0 * math.sqrt(3) / 2)
    need = max(need_val, need_der)
    return need ** (1.0 / k) if need > 0 else 0.0


def choose_R(model: HyperellipticModel) -> float:
    return max(2 * model.R0, zero_threshold(model))


def find_zeros(model: HyperellipticModel, r: float, n_grid: Optional[int] = None, xtol: float = 1e-12) -> np.ndarray:
    """The d+2 zeros of theta -> phi(r, theta) on the fundamental domain, sorted."""
    P = model.period
    n_target = model.d + 2
    n_grid = n_grid or max(4000, 400 * n_target)
    offset = P * (math.sqrt(2) - 1) / n_grid  # irrational shift keeps grid points off exact zeros
    th = offset + P * np.arange(n_grid + 1) / n_grid
    vals = model.phi(r, th)
    brackets = []
    for i in range(n_grid):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            brackets.append((th[i], th[i]))
        elif a * b < 0:
            brackets.append((th[i], th[i + 1]))
    roots = []
    f = lambda t: float(model.phi(r, t))
    for a, b in brackets:
        roots.append(a if a == b else optimize.bisect(f, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps))
    roots = np.sort(np.mod(np.asarray(roots), P))
    if len(roots) != n_target:
        raise WrongZeroCount(
            f"found {len(roots)} zeros at r = {r}, expected {n_target}", brackets=brackets
        )
    return roots


def newton_zeros(model: HyperellipticModel, r, seeds, iters: int = 30, tol: float = 1e-14) -> np.ndarray:
    """Refine zero tracks at radii r (shape (m,)) from seeds (shape (m, n) or (n,)) by safeguarded Newton."""
    r = np.asarray(r, dtype=float)
    th = np.broadcast_to(np.asarray(seeds, dtype=float), r.shape + np.shape(seeds)[-1:]).copy()
    rr = r[..., None] * np.ones_like(th)
    step_cap = 0.25 * model.period / (model.d + 2)
    for _ in range(iters):
        phi, _, phi_t = model.grad(rr, th)
        step = np.clip(phi / phi_t, -step_cap, step_cap)
        th = th - step
        if np.max(np.abs(step)) < tol:
            break
    return th


def zero_tracks(model: HyperellipticModel, radii: Sequence[float]) -> np.ndarray:
    """Zeros followed continuously across increasing radii; shape (len(radii), d+2)."""
    radii = np.asarray(radii, dtype=float)
    out = np.empty((len(radii), model.d + 2))
    out[0] = find_zeros(model, radii[0])
    for i in range(1, len(radii)):
        out[i] = newton_zeros(model, radii[i : i + 1], out[i - 1])[0]
    return out


@dataclass(frozen=True)
class DriftReport:
    radii: Tuple[float, ...]
    exponents: Tuple[float, ...]  # inf for stationary tracks
    required: float
    max_drift: Tuple[float, ...]
    ok: bool

    def to_json(self) -> dict:
        return {
            "exponents": [e if math.isfinite(e) else "stationary" for e in self.exponents],
            "required": self.required,
            "max_drift": list(self.max_drift),
            "ok": self.ok,
        }


def track_zero_drift(
    model: HyperellipticModel,
    r_range: Tuple[float, float] = (20.0, 200.0),
    n_radii: int = 60,
    tolerance: float = 0.2,
    raise_on_violation: bool = True,
) -> DriftReport:
    """Fit |d theta_i / dr| ~ r^-p per track and check p >= 3 (odd) or 2 (even) within tolerance.

    The derivative comes from the implicit function theorem with the leading
    term cancelled analytically; finite differences of the tracks fall below
    double precision once r is in the thousands.
    """
    radii = np.geomspace(r_range[0], r_range[1], n_radii)
    tracks = zero_tracks(model, radii)
    rr = radii[:, None] * np.ones_like(tracks)
    _, _, phi_t = model.grad(rr, tracks)
    drift = np.abs(model.phi_r_at_zero(rr, tracks) / phi_t)
    required = 3.0 if model.k == 2 else 2.0
    if model.q > 2:
        required = float(model.k)
    exps = []
    for j in range(tracks.shape[1]):
        y = drift[:, j]
        scale = np.abs(phi_t[:, j]).max()
        if np.all(y <= 1e-13 * np.maximum(1.0, 1.0 / radii)) or np.all(y == 0):
            exps.append(math.inf)
            continue
        good = y > 0
        slope = np.polyfit(np.log(radii[good]), np.log(y[good]), 1)[0]
        exps.append(float(-slope))
    ok = all(e >= required - tolerance for e in exps)
    rep = DriftReport(tuple(radii), tuple(exps), required, tuple(float(x) for x in drift.max(axis=0)), ok)
    if not ok and raise_on_violation:
        raise DriftBoundViolated(f"decay exponents {exps} below {required} - {tolerance}")
    return rep
