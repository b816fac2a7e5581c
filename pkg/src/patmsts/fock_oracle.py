"""Brute-force truncated Fock-space ground truth.

The photon-added two-mode squeezed thermal state is built by literally
squeezing a product of thermal states with a matrix exponential and
applying creation operators.  None of the closed forms are used.

Two representations are provided:

* dense D^2 x D^2 matrices (``build_patmsts_dense``), practical for D <~ 30;
* a sector form (``build_patmsts``).  Two-mode squeezing conserves
  n_a - n_b, and both thermal input and photon addition are diagonal in it,
  so rho is block diagonal over k = n_a - n_b.  Each block is built with
  its own squeeze exponential, which lets the per-mode cutoff reach several
  hundred levels.

Dense matrices are indexed row-major over n_a * D + n_b.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .state_params import StateParams

SECTOR_SKIP = 1e-24
LADDER_START = 4
DISPLACEMENT_PAD = 32


class TruncationError(RuntimeError):
    """Truncation could not meet the tail tolerance within ``max_dim``."""


def _default_max_dim() -> int:
    return int(os.environ.get("PATMSTS_MAX_DIM", "512"))


@dataclass(frozen=True)
class OracleConfig:
    trunc_tol: float = 1e-10
    max_dim: int = field(default_factory=_default_max_dim)
    expm_tol: float = 1e-13

    def __post_init__(self):
        if not 0 < self.trunc_tol < 1:
            raise ValueError("trunc_tol must lie in (0, 1)")
        if self.max_dim < 4:
            raise ValueError("max_dim must be >= 4")


# ---------------------------------------------------------------- primitives


def build_ladder(dim: int):
    """Single-mode annihilator, creator and identity on levels 0..dim-1."""
    if dim < 2:
        raise ValueError("dim must be >= 2")
    a = np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)
    return a, a.T.copy(), np.eye(dim)


def expm(M, tol: float = 1e-13):
    """Matrix exponential by scaling and squaring around a Taylor core.

    M is scaled by 2^-s so that ||M/2^s||_1 <= 1/2; the Taylor series is
    summed until the next term drops below tol / 2^s (the squaring phase
    amplifies the core error by at most that factor), then squared s times.
    """
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("expm needs a square matrix")
    if not np.all(np.isfinite(M)):
        raise ValueError("expm input has non-finite entries")
    norm = np.linalg.norm(M, 1)
    s = 0 if norm <= 0.5 else int(math.ceil(math.log2(norm / 0.5)))
    if s > 1000:
        raise OverflowError(f"scaling exponent {s} too large")
    X = M / 2.0**s
    term = np.eye(M.shape[0], dtype=M.dtype)
    out = term.copy()
    step_tol = max(tol / 2.0**s, 1e-18)
    for k in range(1, 80):
        term = term @ X / k
        out = out + term
        if np.linalg.norm(term, 1) <= step_tol * np.linalg.norm(out, 1):
            break
    else:
        raise RuntimeError("Taylor core did not converge")
    for _ in range(s):
        out = out @ out
    return out


def thermal_weights(nbar: float, dim: int) -> np.ndarray:
    """Thermal photon-number weights on 0..dim-1, renormalized on the truncation."""
    levels = np.arange(dim)
    if nbar == 0:
        return (levels == 0).astype(float)
    q = nbar / (nbar + 1)
    w = q**levels / (nbar + 1)
    return w / w.sum()


def two_mode(op_a, op_b):
    return np.kron(op_a, op_b)


def displacement(alpha: complex, dim: int, pad: int = DISPLACEMENT_PAD):
    """D(alpha) = exp(alpha a^dag - alpha* a) on dim levels, computed on a
    padded space and cropped so the truncation edge does not leak in."""
    a, ad, _ = build_ladder(dim + pad)
    return expm(alpha * ad - np.conj(alpha) * a)[:dim, :dim]


def displaced_parity(alpha: complex, dim: int, pad: int = DISPLACEMENT_PAD):
    a, ad, _ = build_ladder(dim + pad)
    d = expm(alpha * ad - np.conj(alpha) * a)
    parity = (-1.0) ** np.arange(dim + pad)
    return ((d * parity) @ d.conj().T)[:dim, :dim]


def squeeze_operator(r: float, dim: int, tol: float = 1e-13):
    """Dense two-mode squeezer exp[r (a^dag b^dag - a b)]."""
    a, ad, eye = build_ladder(dim)
    A, B = two_mode(a, eye), two_mode(eye, a)
    Ad, Bd = two_mode(ad, eye), two_mode(eye, ad)
    return expm(r * (Ad @ Bd - A @ B), tol)


# ---------------------------------------------------------------- dense route


def build_patmsts_dense(params: StateParams, dim: int, tol: float = 1e-13):
    """Dense construction on dim levels per mode: returns (rho, norm)."""
    a, ad, eye = build_ladder(dim)
    p = thermal_weights(params.nbar, dim)
    S = squeeze_operator(params.r, dim, tol)
    rho_s = (S * np.kron(p, p)) @ S.T
    add = np.linalg.matrix_power(two_mode(ad, eye), params.m) @ np.linalg.matrix_power(two_mode(eye, ad), params.n)
    unnorm = add @ rho_s @ add.T
    norm = float(np.trace(unnorm))
    return unnorm / norm, norm


# ---------------------------------------------------------------- sector route


@dataclass
class OracleState:
    """Block-diagonal density matrix over sectors k = n_a - n_b.

    ``sectors[k] = (nb, block)``: the basis of block k is |nb_i + k, nb_i>.
    ``dim`` is the number of per-mode levels the state can occupy.
    """

    sectors: dict
    dim: int
    norm: float = 1.0

    def trace(self) -> float:
        return float(sum(np.trace(blk) for _, blk in self.sectors.values()))

    def to_dense(self) -> np.ndarray:
        d = self.dim
        rho = np.zeros((d * d, d * d), dtype=np.result_type(*(b for _, b in self.sectors.values())))
        for k, (nb, blk) in self.sectors.items():
            idx = (nb + k) * d + nb
            rho[np.ix_(idx, idx)] = blk
        return rho


def _sector_levels(k: int, dim: int) -> np.ndarray:
    return np.arange(max(0, -k), dim - max(0, k))


def _sector_generator(k: int, nb: np.ndarray) -> np.ndarray:
    na = nb + k
    c = np.sqrt((na[:-1] + 1.0) * (nb[:-1] + 1.0))
    L = len(nb)
    G = np.zeros((L, L))
    i = np.arange(L - 1)
    G[i + 1, i] = c
    G[i, i + 1] = -c
    return G


@lru_cache(maxsize=6)
def _tmsts_sectors(r: float, nbar: float, dim: int, tol: float):
    p = thermal_weights(nbar, dim)
    out = {}
    for k in range(-(dim - 1), dim):
        nb = _sector_levels(k, dim)
        w = p[nb + k] * p[nb]
        if w.sum() < SECTOR_SKIP:
            continue
        keep = w > 0
        if r == 0:
            blk = np.diag(w)
        else:
            S = expm(r * _sector_generator(k, nb), tol)[:, keep]
            blk = (S * w[keep]) @ S.T
        blk.setflags(write=False)
        nb.setflags(write=False)
        out[k] = (nb, blk)
    return out


def build_tmsts(r: float, nbar: float, dim: int, tol: float = 1e-13) -> OracleState:
    """Squeezed thermal state S (rho_th x rho_th) S^dag on dim levels per mode."""
    return OracleState(dict(_tmsts_sectors(float(r), float(nbar), int(dim), float(tol))), int(dim), 1.0)


def _rising(x: np.ndarray, count: int) -> np.ndarray:
    out = np.ones_like(x, dtype=float)
    for j in range(1, count + 1):
        out = out * (x + j)
    return out


def add_photons(state: OracleState, m: int, n: int, normalize: bool = True) -> OracleState:
    """a^dag^m b^dag^n rho a^m b^n (renormalized unless ``normalize`` is False)."""
    out = {}
    for k, (nb, blk) in state.sectors.items():
        f = np.sqrt(_rising((nb + k).astype(float), m) * _rising(nb.astype(float), n))
        out[k + m - n] = (nb + n, blk * np.outer(f, f))
    new = OracleState(out, state.dim + max(m, n), 1.0)
    norm = new.trace()
    if normalize:
        new.sectors = {k: (nb, blk / norm) for k, (nb, blk) in out.items()}
    new.norm = norm
    return new


def _tail(state: OracleState, m: int, n: int, dim: int) -> float:
    # moment-weighted population in the top band of the pre-addition cutoff
    band = min(4, max(1, dim // 4))
    total = 0.0
    edge = 0.0
    for k, (nb, blk) in state.sectors.items():
        na = nb + k
        pre_a, pre_b = na - m, nb - n
        w = np.diag(blk) * (1.0 + na + nb) ** 2
        total += w.sum()
        edge += w[(pre_a >= dim - band) | (pre_b >= dim - band)].sum()
    return edge / total


def _ladder(max_dim: int):
    d = LADDER_START
    while d <= max_dim:
        yield d
        d += max(4, 4 * round(d / 16))


def truncation_select(params: StateParams, cfg: OracleConfig | None = None) -> int:
    """Smallest per-mode cutoff on the stepping ladder (4, 8, ..., growing by
    about a quarter) at which the moment-weighted edge population and the
    change of the unnormalized norm from the previous rung are both below
    ``trunc_tol``."""
    cfg = cfg or OracleConfig()
    prev = None
    for d in _ladder(cfg.max_dim):
        st = add_photons(build_tmsts(params.r, params.nbar, d, cfg.expm_tol), params.m, params.n)
        tail = _tail(st, params.m, params.n, d)
        delta = 0.0 if prev is None else abs(st.norm - prev) / st.norm
        if tail < cfg.trunc_tol and delta < cfg.trunc_tol:
            return d
        prev = st.norm
    raise TruncationError(
        f"no cutoff <= {cfg.max_dim} meets tail tolerance {cfg.trunc_tol} for {params}"
    )


def build_patmsts(params: StateParams, cfg: OracleConfig | None = None, dim: int | None = None):
    """Return (rho, norm, dim_used); ``norm`` is the oracle's N_{m,n}."""
    cfg = cfg or OracleConfig()
    if dim is None:
        dim = truncation_select(params, cfg)
    st = add_photons(build_tmsts(params.r, params.nbar, dim, cfg.expm_tol), params.m, params.n)
    return st, st.norm, dim


# ---------------------------------------------------------------- observables

_OPS = {
    "a": ("a", -1), "b": ("b", -1),
    "ad": ("a", 1), "a+": ("a", 1), "a†": ("a", 1),
    "bd": ("b", 1), "b+": ("b", 1), "b†": ("b", 1),
}


def _parse_word(word):
    try:
        return [_OPS[w] for w in word]
    except KeyError as exc:
        raise ValueError(f"unknown ladder symbol {exc.args[0]!r}") from None


def oracle_expectation(rho, op_word) -> complex:
    """tr[rho O] with O the ordered product of the listed ladder operators."""
    ops = _parse_word(op_word)
    if isinstance(rho, np.ndarray):
        d = int(round(math.sqrt(rho.shape[0])))
        a, ad, eye = build_ladder(d)
        mats = {("a", -1): two_mode(a, eye), ("a", 1): two_mode(ad, eye),
                ("b", -1): two_mode(eye, a), ("b", 1): two_mode(eye, ad)}
        O = np.eye(d * d)
        for op in ops:
            O = O @ mats[op]
        return complex(np.trace(rho @ O))
    da = sum(s for mode, s in ops if mode == "a")
    db = sum(s for mode, s in ops if mode == "b")
    if da != db:
        return 0j
    total = 0.0
    for k, (nb, blk) in rho.sectors.items():
        na_x = (nb + k).astype(float)
        nb_x = nb.astype(float)
        coef = np.ones(len(nb))
        for mode, s in reversed(ops):
            cur = na_x if mode == "a" else nb_x
            coef = coef * np.sqrt(np.maximum(cur + 1, 0)) if s > 0 else coef * np.sqrt(np.maximum(cur, 0))
            cur += s
        # O|x> = coef |x + (db, db)>; need <x| rho |x + shift>
        pos = {int(v): i for i, v in enumerate(nb)}
        for i, v in enumerate(nb):
            j = pos.get(int(v) + db)
            if j is not None and coef[i] != 0:
                total += coef[i] * blk[i, j]
    return complex(total)


def oracle_pnd(rho, ma: int, nb: int) -> float:
    if isinstance(rho, np.ndarray):
        d = int(round(math.sqrt(rho.shape[0])))
        if ma >= d or nb >= d:
            return 0.0
        return float(np.real(rho[ma * d + nb, ma * d + nb]))
    sec = rho.sectors.get(ma - nb)
    if sec is None:
        return 0.0
    levels, blk = sec
    hit = np.nonzero(levels == nb)[0]
    return float(np.real(blk[hit[0], hit[0]])) if hit.size else 0.0


def _pair_trace(rho, mat_a, mat_b) -> complex:
    # tr[rho (mat_a x mat_b)]
    if isinstance(rho, np.ndarray):
        return complex(np.trace(rho @ two_mode(mat_a, mat_b)))
    total = 0j
    for k, (nb, blk) in rho.sectors.items():
        na = nb + k
        total += np.sum(blk.T * mat_a[np.ix_(na, na)] * mat_b[np.ix_(nb, nb)])
    return complex(total)


def _state_dim(rho) -> int:
    if isinstance(rho, np.ndarray):
        return int(round(math.sqrt(rho.shape[0])))
    return rho.dim


def oracle_cf(rho, alpha: complex, beta: complex) -> complex:
    """tr[D_a(alpha) D_b(beta) rho]."""
    d = _state_dim(rho)
    return _pair_trace(rho, displacement(alpha, d), displacement(beta, d))


def oracle_wigner(rho, alpha: complex, beta: complex, imag_tol: float = 1e-10) -> float:
    """pi^-2 tr[rho D Pi D^dag], two-mode displaced parity."""
    d = _state_dim(rho)
    val = _pair_trace(rho, displaced_parity(alpha, d), displaced_parity(beta, d)) / math.pi**2
    if abs(val.imag) > imag_tol * max(1.0, abs(val.real)):
        raise ArithmeticError(f"Wigner value has imaginary residue {val.imag!r}")
    return val.real


def state_checks(rho) -> dict:
    """Hermiticity defect, smallest eigenvalue and trace deviation of rho."""
    if isinstance(rho, np.ndarray):
        blocks = [rho]
    else:
        blocks = [blk for _, blk in rho.sectors.values()]
    herm = max(float(np.max(np.abs(b - b.conj().T))) for b in blocks)
    min_eig = min(float(np.linalg.eigvalsh(0.5 * (b + b.conj().T)).min()) for b in blocks)
    trace = float(sum(np.real(np.trace(b)) for b in blocks))
    return {"hermiticity": herm, "min_eigenvalue": min_eig, "trace_deviation": abs(trace - 1.0)}
