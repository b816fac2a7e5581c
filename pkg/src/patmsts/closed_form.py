"""Scalar closed-form observables of the photon-added two-mode squeezed
thermal state.

Everything depending on the normalization N_{m,n} is assembled from the
generating-function engine in :mod:`patmsts.special_poly`.  A handful of
printed special-case expressions are kept as ``*_printed`` functions; they
serve as cross-checks only (one of them is known not to hold).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .special_poly import gen_quad_closed, jacobi, n4, _check_order
from .state_params import DerivedParams, derive

SV_BRACKET = (1e-6, 5.0)
SV_SCAN_STEP = 0.01
SV_MAX_ITER = 60
SV_TOL = 1e-6


@dataclass(frozen=True)
class PndEntry:
    ma: int
    nb: int
    prob: float


def normalization(m: int, n: int, dp: DerivedParams) -> float:
    """N_{m,n} = m! n! B1^|n-m| omega^min P_min^(0,|n-m|)(upsilon/omega)."""
    _check_order(m + n, None, "m + n")
    lo, hi = min(m, n), max(m, n)
    return (
        math.factorial(m) * math.factorial(n) * dp.b1 ** (hi - lo) * dp.omega**lo
        * float(jacobi(lo, 0.0, hi - lo, dp.upsilon / dp.omega))
    )


def mean_photons(m: int, n: int, dp: DerivedParams) -> tuple[float, float]:
    nrm = normalization(m, n, dp)
    return (normalization(m + 1, n, dp) / nrm - 1.0, normalization(m, n + 1, dp) / nrm - 1.0)


def cross_moment(m: int, n: int, dp: DerivedParams) -> float:
    """<a^dag b^dag a b>."""
    nrm = normalization(m, n, dp)
    return (normalization(m + 1, n + 1, dp) - normalization(m + 1, n, dp) - normalization(m, n + 1, dp)) / nrm + 1.0


def pair_moments(m: int, n: int, dp: DerivedParams) -> tuple[float, float]:
    """(<a^dag b^dag>, <a b>); both real for this family of states."""
    nrm = normalization(m, n, dp)
    up = n4(m + 1, m, n + 1, n, dp.b1, dp.b2) / nrm
    down = n4(m, m + 1, n, n + 1, dp.b1, dp.b2) / nrm
    return up, down


def second_moments(m: int, n: int, dp: DerivedParams) -> tuple[float, float]:
    """(<a^dag2 a^2>, <b^dag2 b^2>)."""
    nrm = normalization(m, n, dp)
    aa = normalization(m + 2, n, dp) / nrm - 4 * normalization(m + 1, n, dp) / nrm + 2
    bb = normalization(m, n + 2, dp) / nrm - 4 * normalization(m, n + 1, dp) / nrm + 2
    return aa, bb


def cross_correlation_g(m: int, n: int, dp: DerivedParams) -> float:
    """Intermode cross-correlation g_{m,n}; NaN when both occupations vanish (0/0)."""
    n00 = normalization(m, n, dp)
    n11 = normalization(m + 1, n + 1, dp)
    n01 = normalization(m, n + 1, dp)
    n10 = normalization(m + 1, n, dp)
    den = (n01 - n00) * (n10 - n00)
    if den == 0.0:
        return math.nan
    return (n11 * n00 - n01 * n10) / den


def antibunching_R(m: int, n: int, dp: DerivedParams) -> float:
    """Two-mode antibunching parameter R_ab; negative means antibunching."""
    nrm = normalization(m, n, dp)
    n10 = normalization(m + 1, n, dp)
    n01 = normalization(m, n + 1, dp)
    n11 = normalization(m + 1, n + 1, dp)
    omega_ = nrm - n10 - n01
    den = 2.0 * (n11 + omega_)
    if den == 0.0:
        return math.nan
    return (normalization(m + 2, n, dp) + normalization(m, n + 2, dp) + 2.0 * (omega_ - n11)) / den


def antibunching_R_printed_tmsts(dp: DerivedParams) -> float:
    """Printed m = n = 0 special case of R_ab.

    Kept for the discrepancy report: it does not reduce to R = 1 for two
    independent thermal fields (r = 0) and disagrees with the general
    expression assembled from N_{m,n}.
    """
    g = 2 * dp.nbar + 1
    r = dp.r
    num = g * (4 * math.cosh(2 * r) + g * math.sinh(2 * r) ** 2)
    den = g * (g * math.cosh(4 * r) - 2 * math.cosh(2 * r)) + 1
    return -num / den


def pnd_tmsts(ma: int, nb: int, dp: DerivedParams) -> float:
    """<ma, nb| rho_S |ma, nb> for the squeezed thermal state.

    Evaluated as A1/(ma! nb!) times the (ma, ma, nb, nb) derivative of the
    generating function with diagonal 1 - A3 and cross A2.
    """
    _check_order(ma, None, "ma")
    _check_order(nb, None, "nb")
    val = gen_quad_closed(1.0 - dp.a3, dp.a2, ma, nb)
    return dp.a1 * val / (math.factorial(ma) * math.factorial(nb))


def pnd_tmsts_printed(ma: int, nb: int, dp: DerivedParams, nu_power: str = "nb") -> float:
    """Printed Jacobi(chi) form of the squeezed-thermal photon distribution.

    ``nu_power="nb"`` uses nu^nb in the denominator (the reading consistent
    with the vacuum and thermal limits); ``"printed"`` uses the exponent as
    typeset, nu^ma.  Returns NaN where chi is unavailable.
    """
    if not dp.chi_available:
        return math.nan
    lo, hi = min(ma, nb), max(ma, nb)
    x = dp.nbar * (dp.nbar + 1)
    power = hi if nu_power == "nb" else ma
    return dp.a1 * x ** (hi - lo) * dp.mu**lo / dp.nu**power * float(jacobi(lo, hi - lo, 0.0, dp.chi))


def pnd_patmsts(ma: int, nb: int, m: int, n: int, dp: DerivedParams) -> float:
    if ma < m or nb < n:
        return 0.0
    ratio = (math.factorial(ma) // math.factorial(ma - m)) * (math.factorial(nb) // math.factorial(nb - n))
    return ratio * pnd_tmsts(ma - m, nb - n, dp) / normalization(m, n, dp)


def pnd_table(m: int, n: int, dp: DerivedParams, max_level: int) -> list[PndEntry]:
    return [
        PndEntry(ma, nb, pnd_patmsts(ma, nb, m, n, dp))
        for ma in range(max_level + 1)
        for nb in range(max_level + 1)
    ]


def sv_witness(m: int, n: int, dp: DerivedParams) -> float:
    """Shchukin-Vogel second-order witness; negative certifies inseparability."""
    nrm = normalization(m, n, dp)
    up, down = pair_moments(m, n, dp)
    return (normalization(m + 1, n, dp) / nrm - 1.5) * (normalization(m, n + 1, dp) / nrm - 1.5) - up * down


def sv_witness_printed(m: int, n: int, dp: DerivedParams) -> float:
    """Printed special cases (m, n) in {(0, 1), (1, 0), (1, 1)}."""
    b1, b2, w, u = dp.b1, dp.b2, dp.omega, dp.upsilon
    if (m, n) in ((0, 1), (1, 0)):
        return (u / b1 - 1.5) * (2 * b1 - 1.5) - 4 * b2**2
    if (m, n) == (1, 1):
        return (b1 * (3 - w / u) - 1.5) ** 2 - 4 * (2 * b1**2 + b2**2) ** 2 * b2**2 / u**2
    raise ValueError(f"no printed special case for (m, n) = ({m}, {n})")


def sv_threshold(m: int, n: int, nbar: float, r_max: float | None = None) -> float | None:
    """Smallest squeezing r in the bracket where the SV witness crosses zero.

    Returns ``None`` when the witness is already negative at the lower
    bracket end (always-entangled regime) or never changes sign.
    """
    lo, hi = SV_BRACKET
    if r_max is not None:
        hi = r_max

    def f(r):
        return sv_witness(m, n, derive(r=r, nbar=nbar))

    f_lo = f(lo)
    if f_lo < 0:
        return None
    grid = np.arange(lo, hi + SV_SCAN_STEP / 2, SV_SCAN_STEP)
    a, fa = lo, f_lo
    for b in grid[1:]:
        fb = f(b)
        if np.sign(fb) != np.sign(fa):
            break
        a, fa = b, fb
    else:
        return None
    for _ in range(SV_MAX_ITER):
        mid = 0.5 * (a + b)
        fm = f(mid)
        if np.sign(fm) == np.sign(fa):
            a, fa = mid, fm
        else:
            b = mid
        if b - a < SV_TOL:
            break
    return 0.5 * (a + b)


def subtraction_benchmark_rc(nbar: float) -> float:
    """Entanglement threshold of the photon-subtracted squeezed thermal state."""
    return 0.5 * math.log(2 * nbar + 1)


def fidelity_closed(m: int, n: int, dp: DerivedParams) -> float:
    """Coherent-state teleportation fidelity with this state as resource."""
    g = 2 * dp.nbar + 1
    k = m + n
    return (g * math.exp(2 * dp.r) + 1) ** k / (g * math.exp(-2 * dp.r) + 1) * math.factorial(k) / (
        4**k * normalization(m, n, dp)
    )


def fidelity_printed_vacuum(m: int, n: int, r: float) -> float:
    """Printed tanh-forms at nbar = 0 for (0,0), (1,1), (0,1)/(1,0)."""
    t = math.tanh(r)
    if (m, n) == (0, 0):
        return (1 + t) / 2
    if (m, n) == (1, 1):
        return (1 + t) ** 3 / (4 * (1 + t * t))
    if (m, n) in ((0, 1), (1, 0)):
        return (1 + t) / (4 * (1 - t)) / math.cosh(r) ** 2
    raise ValueError(f"no printed special case for (m, n) = ({m}, {n})")
