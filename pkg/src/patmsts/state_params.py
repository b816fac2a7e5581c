"""Physical inputs of the photon-added two-mode squeezed thermal state and
every auxiliary scalar derived from them, plus the Gaussian P and Q
distributions of the underlying (not photon-added) squeezed thermal state."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special_poly import ORDER_CAP

P_SINGULAR_EPS = 1e-12
CHI_SINGULAR_EPS = 1e-12


@dataclass(frozen=True)
class StateParams:
    """m, n photons added to modes a, b of a two-mode squeezed thermal state
    with squeezing r and mean thermal occupation nbar (same in both modes)."""

    m: int = 0
    n: int = 0
    r: float = 0.0
    nbar: float = 0.0

    def __post_init__(self):
        for name in ("m", "n"):
            v = getattr(self, name)
            if int(v) != v or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
        if not (math.isfinite(self.r) and self.r >= 0):
            raise ValueError(f"r must be finite and >= 0, got {self.r!r}")
        if not (math.isfinite(self.nbar) and self.nbar >= 0):
            raise ValueError(f"nbar must be finite and >= 0, got {self.nbar!r}")
        if self.m + self.n > ORDER_CAP:
            raise ValueError(f"m + n = {self.m + self.n} exceeds order cap {ORDER_CAP}")


@dataclass(frozen=True)
class DerivedParams:
    r: float
    nbar: float
    # normal-ordered form coefficients
    a1: float
    a2: float
    a3: float
    # anti-normal-ordered form coefficients (P function)
    at1: float
    at2: float
    at3: float
    b1: float
    b2: float
    omega: float
    upsilon: float
    nu: float
    mu: float
    chi: float
    k1: float
    k3: float
    p_singular: bool = False
    chi_available: bool = True


def derive(p: StateParams | None = None, *, r: float | None = None, nbar: float | None = None) -> DerivedParams:
    """Evaluate all derived scalars for ``p`` (or for explicit ``r``, ``nbar``).

    The anti-normal coefficients diverge where (nbar+1)^2 = (2 nbar + 1) cosh^2 r;
    they are still returned there (possibly infinite) with ``p_singular`` set.
    ``chi`` is NaN with ``chi_available`` False where its denominator vanishes.
    """
    if p is not None:
        r, nbar = p.r, p.nbar
    r = float(r)
    nbar = float(nbar)
    ch, sh = math.cosh(r), math.sinh(r)
    ch2, sh2 = math.cosh(2 * r), math.sinh(2 * r)
    g = 2 * nbar + 1

    nrm_den = g * ch * ch + nbar * nbar
    a1 = (1 / (ch * ch)) / ((nbar + 1) ** 2 - nbar * nbar * math.tanh(r) ** 2)
    a2 = g * sh * ch / nrm_den
    a3 = (ch * ch + nbar * ch2) / nrm_den

    p_den = (nbar + 1) ** 2 - g * ch * ch
    p_singular = abs(p_den) <= P_SINGULAR_EPS * ((nbar + 1) ** 2 + g * ch * ch)
    with np.errstate(divide="ignore", invalid="ignore"):
        pd = np.float64(p_den)
        at1 = float(np.float64(1.0) / pd)
        at2 = float(np.float64(g * sh * ch) / pd)
        at3 = float(np.float64(sh * sh + nbar * ch2) / pd)

    b1 = ch * ch + nbar * ch2
    b2 = g * sh * ch
    omega = nbar * nbar + g * ch * ch
    upsilon = nbar * (nbar + 1) * math.cosh(4 * r) + (nbar + ch * ch) * ch2
    nu = g * ch * ch + nbar * nbar
    mu = g * ch * ch - (nbar + 1) ** 2

    q = (g * sh2) ** 2
    t = 4 * nbar**2 * (nbar + 1) ** 2
    chi_available = abs(q - t) > CHI_SINGULAR_EPS * (q + t)
    chi = (q + t) / (q - t) if chi_available else math.nan

    return DerivedParams(
        r=r, nbar=nbar,
        a1=a1, a2=a2, a3=a3,
        at1=at1, at2=at2, at3=at3,
        b1=b1, b2=b2,
        omega=omega, upsilon=upsilon,
        nu=nu, mu=mu, chi=chi,
        k1=(nbar + ch * ch) / g,
        k3=sh * ch / g,
        p_singular=p_singular,
        chi_available=chi_available,
    )


def _cross(alpha, beta):
    # alpha* beta* + alpha beta, real by construction
    return 2.0 * np.real(np.asarray(alpha) * np.asarray(beta))


def _radial(alpha, beta):
    return np.abs(alpha) ** 2 + np.abs(beta) ** 2


def p_function_tmsts(dp: DerivedParams, alpha, beta):
    """Glauber-Sudarshan P function of the squeezed thermal state."""
    return dp.at1 * np.exp(dp.at2 * _cross(alpha, beta) - dp.at3 * _radial(alpha, beta))


def q_function_tmsts(dp: DerivedParams, alpha, beta):
    """Husimi Q function <alpha, beta| rho |alpha, beta> / pi^2."""
    return dp.a1 / math.pi**2 * np.exp(dp.a2 * _cross(alpha, beta) - dp.a3 * _radial(alpha, beta))
