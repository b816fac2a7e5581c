import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from patmsts.closed_form import cross_moment, normalization
from patmsts.fock_oracle import (
    OracleConfig,
    TruncationError,
    build_ladder,
    build_patmsts,
    build_patmsts_dense,
    build_tmsts,
    displaced_parity,
    displacement,
    expm,
    oracle_cf,
    oracle_expectation,
    oracle_pnd,
    oracle_wigner,
    squeeze_operator,
    state_checks,
    thermal_weights,
    truncation_select,
    two_mode,
)
from patmsts.phase_space import wigner_w0
from patmsts.state_params import StateParams, derive


def test_ladder():
    a, ad, eye = build_ladder(6)
    ket1 = np.eye(6)[1]
    np.testing.assert_allclose(a @ ket1, np.eye(6)[0])
    comm = a @ ad - ad @ a
    np.testing.assert_allclose(comm[:5, :5], np.eye(5), atol=1e-14)
    np.testing.assert_allclose(np.linalg.eigvalsh(ad @ a), np.arange(6), atol=1e-12)
    np.testing.assert_array_equal(ad, a.conj().T)
    with pytest.raises(ValueError):
        build_ladder(1)


def test_expm_basics():
    np.testing.assert_array_equal(expm(np.zeros((3, 3))), np.eye(3))
    d = np.array([0.5, -2.0, 3.0 + 1j])
    np.testing.assert_allclose(expm(np.diag(d)), np.diag(np.exp(d)), rtol=1e-13)


@given(st.integers(2, 12), st.floats(0.1, 20), st.integers(0, 2**31))
@settings(max_examples=25)
def test_expm_matches_scipy(size, scale, seed):
    rng = np.random.default_rng(seed)
    M = scale * (rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))) / size
    M = M - M.conj().T  # anti-Hermitian keeps the exponential bounded
    np.testing.assert_allclose(expm(M), scipy.linalg.expm(M), atol=1e-11)


def test_expm_errors():
    with pytest.raises(ValueError):
        expm(np.array([[np.nan]]))
    with pytest.raises(ValueError):
        expm(np.zeros((2, 3)))
    with pytest.raises(OverflowError):
        expm(np.array([[1e305]]))


@pytest.mark.parametrize("r,inner", [(0.2, 8), (0.5, 5)])
def test_squeeze_transformation(r, inner):
    # the truncation edge contaminates S by roughly tanh(r)^(dim - level)
    dim = 32
    a, ad, eye = build_ladder(dim)
    S = squeeze_operator(r, dim)
    idx = np.array([i * dim + j for i in range(inner) for j in range(inner)])
    blk = np.ix_(idx, idx)
    lhs = (S @ two_mode(ad, eye) @ S.T)[blk]
    rhs = (math.cosh(r) * two_mode(ad, eye) - math.sinh(r) * two_mode(eye, a))[blk]
    np.testing.assert_allclose(lhs, rhs, atol=1e-8)
    lhs = (S @ two_mode(eye, ad) @ S.T)[blk]
    rhs = (math.cosh(r) * two_mode(eye, ad) - math.sinh(r) * two_mode(a, eye))[blk]
    np.testing.assert_allclose(lhs, rhs, atol=1e-8)


def test_vacuum_state():
    rho, norm, dim = build_patmsts(StateParams())
    assert dim == 4 and norm == 1.0
    dense = rho.to_dense()
    ref = np.zeros_like(dense)
    ref[0, 0] = 1
    np.testing.assert_array_equal(dense, ref)


def test_squeezed_vacuum_schmidt_form():
    r = 0.3
    rho, _, _ = build_patmsts(StateParams(0, 0, r, 0.0))
    nb, blk = rho.sectors[0]
    amp = math.tanh(r) ** nb / math.cosh(r)
    np.testing.assert_allclose(blk[:12, :12], np.outer(amp, amp)[:12, :12], atol=1e-8)
    assert set(rho.sectors) == {0}


def test_zero_squeezing_is_thermal_product():
    nbar, dim = 0.4, 20
    rho = build_tmsts(0.0, nbar, dim).to_dense()
    p = thermal_weights(nbar, dim)
    np.testing.assert_array_equal(rho, np.diag(np.kron(p, p)))


def test_thermal_weights_renormalized():
    w = thermal_weights(2.0, 10)
    assert w.sum() == pytest.approx(1.0, abs=1e-15)
    assert w[1] / w[0] == pytest.approx(2 / 3)


def test_norm_matches_closed_form():
    p = StateParams(1, 1, 0.3, 0.2)
    rho, norm, _ = build_patmsts(p)
    assert norm == pytest.approx(normalization(1, 1, derive(p)), rel=1e-8)
    assert oracle_expectation(rho, ["ad", "a", "bd", "b"]).real == pytest.approx(cross_moment(1, 1, derive(p)), rel=1e-8)


def test_sector_route_matches_dense_route():
    p = StateParams(2, 1, 0.25, 0.15)
    dim = 22
    dense, dnorm = build_patmsts_dense(p, dim)
    blocks, bnorm, _ = build_patmsts(p, dim=dim)
    full = blocks.to_dense()
    keep = dim - 6
    i1 = np.array([i * blocks.dim + j for i in range(keep) for j in range(keep)])
    i2 = np.array([i * dim + j for i in range(keep) for j in range(keep)])
    np.testing.assert_allclose(full[np.ix_(i1, i1)], dense[np.ix_(i2, i2)], atol=1e-11)
    assert bnorm == pytest.approx(dnorm, rel=1e-10)
    word = ["ad", "bd", "a"]
    assert oracle_expectation(dense, ["ad", "a"]) == pytest.approx(oracle_expectation(blocks, ["ad", "a"]), rel=1e-9)
    assert oracle_expectation(blocks, word) == 0


@given(st.integers(0, 2), st.integers(0, 2), st.floats(0, 0.8), st.floats(0, 1.0))
@settings(max_examples=15)
def test_state_validity(m, n, r, nbar):
    rho, _, _ = build_patmsts(StateParams(m, n, r, nbar))
    chk = state_checks(rho)
    assert chk["hermiticity"] <= 1e-12
    assert chk["trace_deviation"] <= 1e-12
    assert chk["min_eigenvalue"] >= -1e-10


def test_truncation_select_examples(monkeypatch):
    assert truncation_select(StateParams()) == 4
    dims = [truncation_select(StateParams(0, 1, r, 0.2)) for r in (0.0, 0.2, 0.5, 0.8, 1.0)]
    assert dims == sorted(dims)
    dims = [truncation_select(StateParams(0, 1, 0.3, nb)) for nb in (0.0, 0.2, 0.6, 1.0)]
    assert dims == sorted(dims)
    with pytest.raises(TruncationError):
        truncation_select(StateParams(0, 0, 1.0, 1.0), OracleConfig(max_dim=32))
    monkeypatch.setenv("PATMSTS_MAX_DIM", "16")
    assert OracleConfig().max_dim == 16
    with pytest.raises(ValueError):
        OracleConfig(trunc_tol=0)
    with pytest.raises(ValueError):
        OracleConfig(max_dim=2)


def test_truncation_select_strong_squeezing():
    dim = truncation_select(StateParams(0, 0, 1.0, 1.0))
    rho, _, _ = build_patmsts(StateParams(0, 0, 1.0, 1.0), dim=dim)
    assert oracle_expectation(rho, ["ad", "bd"]).real == pytest.approx(derive(r=1.0, nbar=1.0).b2, rel=1e-9)


def test_expectation_examples():
    vac, _, _ = build_patmsts(StateParams())
    assert oracle_expectation(vac, ["ad", "a"]) == 0
    dp = derive(r=0.4, nbar=0.3)
    rho = build_tmsts(0.4, 0.3, 48)
    assert oracle_expectation(rho, ["ad", "bd"]).real == pytest.approx(dp.b2, rel=1e-9)
    assert oracle_expectation(rho, ["a†", "b+"]).real == pytest.approx(dp.b2, rel=1e-9)
    with pytest.raises(ValueError):
        oracle_expectation(rho, ["c"])


def test_pnd_examples():
    vac, _, _ = build_patmsts(StateParams())
    assert oracle_pnd(vac, 0, 0) == 1.0 and oracle_pnd(vac, 1, 0) == 0.0
    r = 0.5
    rho = build_tmsts(r, 0.0, 40)
    for k in range(5):
        assert oracle_pnd(rho, k, k) == pytest.approx(math.tanh(r) ** (2 * k) / math.cosh(r) ** 2, rel=1e-9)
        assert oracle_pnd(rho, k, k + 1) == 0.0


def test_wigner_and_cf_examples():
    vac, _, _ = build_patmsts(StateParams())
    assert oracle_wigner(vac, 0, 0) == pytest.approx(1 / math.pi**2)
    assert oracle_cf(vac, 0, 0) == pytest.approx(1.0)
    dp = derive(r=0.3, nbar=0.2)
    rho = build_tmsts(0.3, 0.2, 40)
    alpha, beta = 0.3 + 0.1j, -0.2 + 0.4j
    assert oracle_wigner(rho, alpha, beta) == pytest.approx(wigner_w0(dp, alpha, beta), rel=1e-8)
    ref = np.exp(-(dp.b1 - 0.5) * (abs(alpha) ** 2 + abs(beta) ** 2) + 2 * dp.b2 * (alpha * beta).real)
    assert oracle_cf(rho, alpha, beta) == pytest.approx(ref, rel=1e-8)
    # dense matrices are accepted too
    assert oracle_cf(rho.to_dense(), alpha, beta) == pytest.approx(ref, rel=1e-8)


def test_single_addition_origin_negative():
    r, nbar = 0.3, 0.2
    rho, _, _ = build_patmsts(StateParams(0, 1, r, nbar))
    c = math.cosh(r) ** 2
    ref = -((nbar + c) / (2 * nbar + 1) ** 3) / ((c + nbar * math.cosh(2 * r)) * math.pi**2)
    assert oracle_wigner(rho, 0, 0) == pytest.approx(ref, rel=1e-8)


def test_displacement_unitary_and_parity():
    rng = np.random.default_rng(3)
    for alpha in rng.normal(size=10) + 1j * rng.normal(size=10):
        d = displacement(alpha, 20, pad=0)
        np.testing.assert_allclose(d @ d.conj().T, np.eye(20), atol=1e-10)
    a, _, _ = build_ladder(12)
    par = displaced_parity(0.0, 12)
    np.testing.assert_allclose((par @ a @ par)[:11, :11], -a[:11, :11], atol=1e-14)
