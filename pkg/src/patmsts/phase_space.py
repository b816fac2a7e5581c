"""Wigner function, characteristic function and teleportation-fidelity
quadrature for photon-added two-mode squeezed thermal states.

Phase-space convention: W(alpha, beta) = pi^-2 tr[rho D Pi D^dag] with the
two-mode parity Pi, so the vacuum is pi^-2 exp(-2|alpha|^2 - 2|beta|^2) and
W integrates to 1/4 over d^2 alpha d^2 beta.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .closed_form import normalization
from .special_poly import SourceSpec, hermite2, source_derivative
from .state_params import DerivedParams, StateParams, derive

HERMITE_SWITCH_KAPPA = 1e-8
SUM_AXES = "sum"
DIFF_AXES = "diff"


class PhasePoint(NamedTuple):
    alpha: complex
    beta: complex


class QuadratureWarning(RuntimeWarning):
    """Successive quadrature refinements disagree beyond tolerance."""


@dataclass(frozen=True)
class QuadratureSpec:
    scheme: str = "gauss-hermite"
    points_per_axis: int = 40
    box_halfwidth: float = 6.0

    def __post_init__(self):
        if self.scheme not in ("gauss-hermite", "uniform"):
            raise ValueError(f"unknown quadrature scheme {self.scheme!r}")
        if self.points_per_axis < 8:
            raise ValueError("points_per_axis must be >= 8")

    @classmethod
    def uniform(cls, points_per_axis: int = 121, box_halfwidth: float = 6.0) -> "QuadratureSpec":
        return cls("uniform", points_per_axis, box_halfwidth)


@dataclass
class WignerGrid:
    axis_kind: str
    q_values: np.ndarray
    p_values: np.ndarray
    values: np.ndarray  # values[i, j] = W at (q_values[i], p_values[j])
    params: StateParams = field(default_factory=StateParams)

    def __post_init__(self):
        if self.values.shape != (len(self.q_values), len(self.p_values)):
            raise ValueError("grid values do not match axis lengths")


def _as_arrays(alpha, beta):
    alpha = np.asarray(alpha, dtype=complex)
    beta = np.asarray(beta, dtype=complex)
    return np.broadcast_arrays(alpha, beta)


def _scalar(x):
    return x[()] if isinstance(x, np.ndarray) and x.ndim == 0 else x


def wigner_w0(dp: DerivedParams, alpha, beta):
    """Gaussian Wigner function of the squeezed thermal state."""
    alpha, beta = _as_arrays(alpha, beta)
    g = 2 * dp.nbar + 1
    radial = np.abs(alpha) ** 2 + np.abs(beta) ** 2
    cross = 2.0 * np.real(alpha * beta)
    expo = -2 * math.cosh(2 * dp.r) * radial / g + 2 * math.sinh(2 * dp.r) * cross / g
    return _scalar(np.exp(expo) / (math.pi**2 * g * g))


def _wigner_sources(dp, alpha, beta):
    r1 = 2 * (dp.k1 * alpha - dp.k3 * np.conj(beta))
    r3 = 2 * (dp.k1 * beta - dp.k3 * np.conj(alpha))
    return r1, r3


def _factor_source(m, n, dp, alpha, beta):
    # complex assembly; imaginary part is rounding residue
    r1, r3 = _wigner_sources(dp, alpha, beta)
    spec = SourceSpec(m, m, n, n, coeff_diag=dp.k1, coeff_cross=dp.k3,
                      src_tau=-np.conj(r1), src_t=r1, src_taup=-np.conj(r3), src_tp=r3)
    return (-1) ** (m + n) * source_derivative(spec) / normalization(m, n, dp)


def _factor_hermite(m, n, dp, alpha, beta):
    r1, r3 = _wigner_sources(dp, alpha, beta)
    root = 1j * math.sqrt(dp.k3)
    x, y = r1 / root, r3 / root
    total = np.zeros(np.shape(x))
    fm, fn = math.factorial(m), math.factorial(n)
    ratio = -dp.k1 / dp.k3
    for l in range(m + 1):
        for j in range(n + 1):
            w = (fm * fn) ** 2 / (
                math.factorial(l) * math.factorial(j) * (math.factorial(m - l) * math.factorial(n - j)) ** 2
            )
            total = total + w * ratio ** (l + j) * np.abs(hermite2(m - l, n - j, x, y)) ** 2
    return dp.k3 ** (m + n) * total / normalization(m, n, dp)


def wigner_factor(m: int, n: int, dp: DerivedParams, alpha, beta, method: str = "auto"):
    """Non-Gaussian factor F_{m,n} multiplying the squeezed-thermal Wigner function.

    ``method`` is "hermite" (squared two-variable Hermite sum), "source"
    (generating-function derivative, regular at K3 = 0) or "auto", which uses
    the Hermite sum unless K3 < kappa (K1 + |R1| + |R3|).
    """
    alpha, beta = _as_arrays(alpha, beta)
    if method == "source":
        return _scalar(np.real(_factor_source(m, n, dp, alpha, beta)))
    if method == "hermite":
        return _scalar(_factor_hermite(m, n, dp, alpha, beta))
    if method != "auto":
        raise ValueError(f"unknown method {method!r}")
    r1, r3 = _wigner_sources(dp, alpha, beta)
    use_source = dp.k3 < HERMITE_SWITCH_KAPPA * (dp.k1 + np.abs(r1) + np.abs(r3))
    out = np.empty(alpha.shape)
    if np.any(use_source):
        out[use_source] = np.real(_factor_source(m, n, dp, alpha[use_source], beta[use_source]))
    if not np.all(use_source):
        keep = ~use_source
        out[keep] = _factor_hermite(m, n, dp, alpha[keep], beta[keep])
    return _scalar(out)


def wigner(m: int, n: int, dp: DerivedParams, alpha, beta, method: str = "auto"):
    return wigner_w0(dp, alpha, beta) * wigner_factor(m, n, dp, alpha, beta, method=method)


def quadrature_to_amplitudes(axis_kind: str, q, p):
    """Map plotted quadratures (Q+/-, P+/-) to (alpha, beta), other pair at 0.

    alpha = (Q_a + i P_a)/sqrt2, beta = (Q_b + i P_b)/sqrt2 and
    Q_+/- = (Q_a +/- Q_b)/sqrt2, P_+/- = (P_a +/- P_b)/sqrt2.
    """
    amp = (np.asarray(q) + 1j * np.asarray(p)) / 2.0
    if axis_kind == SUM_AXES:
        return amp, amp
    if axis_kind == DIFF_AXES:
        return amp, -amp
    raise ValueError(f"axis_kind must be {SUM_AXES!r} or {DIFF_AXES!r}, got {axis_kind!r}")


def wigner_grid(m: int, n: int, params: StateParams, axis_kind: str, q_values, p_values) -> WignerGrid:
    q_values = np.atleast_1d(np.asarray(q_values, dtype=float))
    p_values = np.atleast_1d(np.asarray(p_values, dtype=float))
    if q_values.size == 0 or p_values.size == 0:
        raise ValueError("axis vectors must be nonempty")
    qq, pp = np.meshgrid(q_values, p_values, indexing="ij")
    alpha, beta = quadrature_to_amplitudes(axis_kind, qq, pp)
    values = np.asarray(wigner(m, n, derive(params), alpha, beta), dtype=float).reshape(qq.shape)
    return WignerGrid(axis_kind, q_values, p_values, values, params)


def cf_patmsts(m: int, n: int, dp: DerivedParams, alpha, beta):
    """Characteristic function chi_E(alpha, beta) = tr[D_a(alpha) D_b(beta) rho]."""
    alpha, beta = _as_arrays(alpha, beta)
    ac, bc = np.conj(alpha), np.conj(beta)
    b1, b2 = dp.b1, dp.b2
    pre = np.exp(-(b1 - 0.5) * (np.abs(alpha) ** 2 + np.abs(beta) ** 2) + b2 * (alpha * beta + ac * bc))
    spec = SourceSpec(
        m, m, n, n, coeff_diag=b1, coeff_cross=b2,
        src_tau=beta * b2 - b1 * ac,
        src_t=alpha * b1 - b2 * bc,
        src_taup=alpha * b2 - b1 * bc,
        src_tp=beta * b1 - b2 * ac,
    )
    return _scalar(pre * source_derivative(spec) / normalization(m, n, dp))


def coherent_cf(eta, gamma: complex = 0.0):
    """Characteristic function of the coherent state |gamma>."""
    eta = np.asarray(eta, dtype=complex)
    return np.exp(-np.abs(eta) ** 2 / 2 + eta * np.conj(gamma) - np.conj(eta) * gamma)


def _nodes(quad: QuadratureSpec, points: int):
    # returns nodes, weights and the Gaussian already absorbed by the weights
    if quad.scheme == "gauss-hermite":
        x, w = np.polynomial.hermite.hermgauss(points)
        return x, w, True
    x = np.linspace(-quad.box_halfwidth, quad.box_halfwidth, points)
    w = np.full(points, x[1] - x[0])
    w[[0, -1]] *= 0.5
    return x, w, False


def _fidelity_at(m, n, dp, quad, points, gamma):
    x, w, absorbed = _nodes(quad, points)
    xr, xi = np.meshgrid(x, x, indexing="ij")
    eta = xr + 1j * xi
    weight = np.outer(w, w)
    integrand = coherent_cf(eta, gamma) * coherent_cf(-eta, gamma) * cf_patmsts(m, n, dp, -np.conj(eta), -eta)
    if absorbed:
        integrand = integrand * np.exp(np.abs(eta) ** 2)
    return float(np.real(np.sum(weight * integrand)) / math.pi)


def fidelity_numeric(m: int, n: int, dp: DerivedParams, quad: QuadratureSpec | None = None,
                     gamma: complex = 0.0, refine_tol: float = 1e-5) -> float:
    """Teleportation fidelity by direct quadrature of the characteristic functions.

    F = int d^2 eta / pi  chi_in(eta) chi_in(-eta) chi_E(-eta*, -eta).
    A second evaluation on a refined rule is compared against the first; a
    disagreement above ``refine_tol`` raises a :class:`QuadratureWarning`.
    """
    quad = quad or QuadratureSpec()
    value = _fidelity_at(m, n, dp, quad, quad.points_per_axis, gamma)
    finer = quad.points_per_axis + 8 if quad.scheme == "gauss-hermite" else 2 * quad.points_per_axis - 1
    check = _fidelity_at(m, n, dp, quad, finer, gamma)
    if abs(check - value) > refine_tol:
        warnings.warn(
            f"fidelity quadrature not converged: {value!r} vs {check!r} on refinement",
            QuadratureWarning,
            stacklevel=2,
        )
    return value
