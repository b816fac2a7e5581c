"""Classical orthogonal polynomials and the four-variable source-derivative engine.

Every normalization, Wigner factor and characteristic function of the
photon-added two-mode squeezed thermal state reduces to a mixed derivative of

    exp[A (tau t + tau' t') + B (tau tau' + t t')
        + s_tau tau + s_t t + s_tau' tau' + s_t' t']

evaluated at the origin.  ``source_derivative`` computes it exactly as a
finite multinomial sum; the Jacobi closed form is kept as a second route.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

ORDER_CAP = 24
SINGULAR_EPS = 1e-10


class OrderOverflowError(ValueError):
    """Requested derivative or polynomial order exceeds the configured cap."""


def _check_order(order: int, cap: int | None, what: str = "order") -> int:
    cap = ORDER_CAP if cap is None else cap
    if int(order) != order or order < 0:
        raise ValueError(f"{what} must be a non-negative integer, got {order!r}")
    if order > cap:
        raise OrderOverflowError(f"{what} {order} exceeds cap {cap}")
    return int(order)


def _gbinom(top: float, k: int) -> float:
    # generalized binomial C(top, k) for real top, by ratio accumulation
    out = 1.0
    for i in range(1, k + 1):
        out *= (top - k + i) / i
    return out


def jacobi(m: int, alpha: float, beta: float, x, cap: int | None = None):
    """Jacobi polynomial P_m^(alpha, beta)(x) by its finite binomial sum.

    Uses the split form sum_k C(m+a, k) C(m+b, m-k) ((x-1)/2)^(m-k) ((x+1)/2)^k,
    which has no singularity at x = 1.  ``x`` may be a scalar or an array.
    """
    m = _check_order(m, cap)
    x = np.asarray(x, dtype=float) if not np.iscomplexobj(x) else np.asarray(x)
    lo = (x - 1.0) / 2.0
    hi = (x + 1.0) / 2.0
    total = np.zeros_like(x)
    for k in range(m + 1):
        total = total + _gbinom(m + alpha, k) * _gbinom(m + beta, m - k) * lo ** (m - k) * hi**k
    return total[()] if total.ndim == 0 else total


def legendre(n: int, x, cap: int | None = None):
    return jacobi(n, 0.0, 0.0, x, cap=cap)


def laguerre(n: int, x, cap: int | None = None):
    """Laguerre polynomial L_n(x) = sum_k (-1)^k C(n, k) x^k / k!."""
    n = _check_order(n, cap)
    x = np.asarray(x)
    total = np.zeros_like(x, dtype=np.result_type(x, float))
    for k in range(n + 1):
        total = total + (-1) ** k * math.comb(n, k) / math.factorial(k) * x**k
    return total[()] if total.ndim == 0 else total


def hermite2(m: int, n: int, x, y, cap: int | None = None):
    """Two-variable Hermite polynomial H_{m,n}(x, y).

    Generated by exp(-s u + x s + y u) = sum_{m,n} s^m u^n / (m! n!) H_{m,n}(x, y).
    Complex arguments are allowed.
    """
    m = _check_order(m, cap)
    n = _check_order(n, cap)
    x = np.asarray(x)
    y = np.asarray(y)
    total = np.zeros(np.broadcast(x, y).shape, dtype=np.result_type(x, y, float))
    for l in range(min(m, n) + 1):
        coef = math.factorial(m) * math.factorial(n) // (
            math.factorial(l) * math.factorial(m - l) * math.factorial(n - l)
        )
        total = total + (-1) ** l * float(coef) * x ** (m - l) * y ** (n - l)
    return total[()] if total.ndim == 0 else total


@dataclass(frozen=True)
class SourceSpec:
    """Derivative request for the four-variable exponential generating function.

    Orders refer to (tau, t, tau', t').  ``coeff_diag`` multiplies
    tau t + tau' t', ``coeff_cross`` multiplies tau tau' + t t'.  Source
    coefficients may be numpy arrays; the result then broadcasts over them.
    """

    order_tau: int = 0
    order_t: int = 0
    order_taup: int = 0
    order_tp: int = 0
    coeff_diag: Any = 0.0
    coeff_cross: Any = 0.0
    src_tau: Any = 0.0
    src_t: Any = 0.0
    src_taup: Any = 0.0
    src_tp: Any = 0.0

    @property
    def orders(self) -> tuple[int, int, int, int]:
        return (self.order_tau, self.order_t, self.order_taup, self.order_tp)


def _powers(x, top: int) -> list:
    out = [np.ones_like(x) if isinstance(x, np.ndarray) else 1.0]
    for _ in range(top):
        out.append(out[-1] * x)
    return out


def source_derivative(spec: SourceSpec, cap: int | None = None):
    """Mixed partial derivative of the generating exponential at the origin.

    Each of the eight exponential factors is expanded only as far as the
    requested orders allow.  With exponents i (tau t), j (tau' t'),
    k (tau tau'), l (t t') fixed, the linear-source exponents are forced,
    so the derivative is a four-fold finite sum whose multinomial weights
    are exact integers.
    """
    a, b, c, d = (_check_order(o, cap=10**9) for o in spec.orders)
    cap = ORDER_CAP if cap is None else cap
    if a + b + c + d > cap:
        raise OrderOverflowError(f"total order {a + b + c + d} exceeds cap {cap}")
    coeffs = [spec.coeff_diag, spec.coeff_cross, spec.src_tau, spec.src_t, spec.src_taup, spec.src_tp]
    for v in coeffs:
        if not np.all(np.isfinite(np.asarray(v))):
            raise ValueError("non-finite coefficient in SourceSpec")
    A, B, s1, s2, s3, s4 = (np.asarray(v) if np.ndim(v) else v for v in coeffs)

    pA = _powers(A, min(a, b) + min(c, d))
    pB = _powers(B, min(a, c) + min(b, d))
    p1, p2, p3, p4 = _powers(s1, a), _powers(s2, b), _powers(s3, c), _powers(s4, d)
    fact = [math.factorial(i) for i in range(max(a, b, c, d) + 1)]
    top = fact[a] * fact[b] * fact[c] * fact[d]

    total = 0.0
    for i in range(min(a, b) + 1):
        for j in range(min(c, d) + 1):
            for k in range(min(a - i, c - j) + 1):
                for l in range(min(b - i, d - j) + 1):
                    e1, e2, e3, e4 = a - i - k, b - i - l, c - j - k, d - j - l
                    den = fact[i] * fact[j] * fact[k] * fact[l] * fact[e1] * fact[e2] * fact[e3] * fact[e4]
                    w = float(top // den)
                    total = total + w * pA[i + j] * pB[k + l] * p1[e1] * p2[e2] * p3[e3] * p4[e4]
    return total


def gen_quad_closed(A: float, B: float, m: int, n: int, cap: int | None = None,
                    eps: float = SINGULAR_EPS) -> float:
    """Jacobi closed form of the (m, m, n, n) derivative with zero sources.

    m! n! A^|n-m| (B^2 - A^2)^min P_min^(|n-m|, 0)((B^2 + A^2)/(B^2 - A^2)).
    Falls back to ``source_derivative`` when |B^2 - A^2| <= eps (A^2 + B^2),
    where the Jacobi argument is singular but the limit is finite.
    """
    m = _check_order(m, cap)
    n = _check_order(n, cap)
    diff = B * B - A * A
    scale = A * A + B * B
    if scale == 0.0 or abs(diff) <= eps * scale:
        spec = SourceSpec(m, m, n, n, coeff_diag=A, coeff_cross=B)
        return float(source_derivative(spec, cap=max(2 * (m + n), ORDER_CAP if cap is None else cap)))
    lo, hi = min(m, n), max(m, n)
    y = scale / diff
    return float(
        math.factorial(m) * math.factorial(n) * A ** (hi - lo) * diff**lo * jacobi(lo, hi - lo, 0.0, y, cap=cap)
    )


def n4(l: int, p: int, q: int, s: int, B1: float, B2: float, cap: int | None = None) -> float:
    """Four-index coefficient d^(l+p+q+s)/(dtau^l dt^p dtau'^q dt'^s) of the
    zero-source generating function with diagonal B1 and cross B2."""
    if p + q != l + s:
        for o in (l, p, q, s):
            _check_order(o, cap=10**9)
        return 0.0
    return float(source_derivative(SourceSpec(l, p, q, s, coeff_diag=B1, coeff_cross=B2), cap=cap))


def n4_sum(l: int, p: int, q: int, s: int, B1: float, B2: float) -> float:
    """Same quantity as ``n4`` from the explicit single-index sum.

    The sum index k runs over every value keeping all factorial arguments
    non-negative; powers are written as B1^(l-q+2s-2k) B2^(q-s+2k) so that
    B1 = 0 needs no special case.
    """
    if p + q != l + s:
        return 0.0
    total = 0.0
    for k in range(0, s + 1):
        args = (k, q - s + k, s - k, l + s - q - k)
        if min(args) < 0:
            continue
        den = 1
        for v in args:
            den *= math.factorial(v)
        num = math.factorial(l) * math.factorial(s) * math.factorial(q) * math.factorial(p)
        total += num / den * B1 ** (l - q + 2 * s - 2 * k) * B2 ** (q - s + 2 * k)
    return total
