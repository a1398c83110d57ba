import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jchm.hilbert import build_space
from jchm.operators import (
    ModelParams,
    build_l_diag,
    build_mean_field,
    build_mpjc,
    coupling_elements,
)

from conftest import sector_matrix


params_st = st.builds(
    ModelParams,
    l=st.integers(1, 4),
    omega=st.floats(0.2, 4.0),
    Omega=st.floats(0.2, 4.0),
    mu=st.floats(0.0, 1.5),
    kappa=st.floats(0.0, 1.0),
    z=st.integers(1, 6),
)


def test_params_validation():
    with pytest.raises(ValueError, match="kappa"):
        ModelParams(l=1, omega=1.0, Omega=1.0, kappa=-0.1)
    with pytest.raises(ValueError, match="l"):
        ModelParams(l=5, omega=1.0, Omega=1.0)
    with pytest.raises(ValueError, match="z"):
        ModelParams(l=1, omega=1.0, Omega=1.0, z=0)
    p = ModelParams(l=1, omega=2.0, Omega=1.5)
    assert p.delta == 0.5


def test_coupling_elements_values():
    # sqrt((n+l)!/n!) against the factorial ratio
    assert coupling_elements(2, 6)[0] == pytest.approx(math.sqrt(2), abs=1e-15)
    assert coupling_elements(1, 6)[3] == pytest.approx(2.0, abs=1e-15)
    assert coupling_elements(4, 6)[0] == pytest.approx(math.sqrt(24), abs=1e-15)
    for l in (1, 2, 3, 4):
        c = coupling_elements(l, 12)
        for n, value in enumerate(c):
            ratio = math.factorial(n + l) / math.factorial(n)
            assert value == pytest.approx(math.sqrt(ratio), rel=1e-14)


def test_mpjc_entries():
    params = ModelParams(l=2, omega=1.5, Omega=1.2)
    space = build_space(2, 4)
    h = build_mpjc(params, space)
    # diagonal: omega * n on |g,n>, Omega + omega * n on |e,n>
    assert h[0, 0] == 0.0
    assert h[1, 1] == pytest.approx(1.2)
    assert h[4, 4] == pytest.approx(3.0)
    assert h[5, 5] == pytest.approx(1.2 + 3.0)
    # coupling <e,n|..|g,n+2> = sqrt((n+2)!/n!)
    assert h[1, 4] == pytest.approx(math.sqrt(2))
    assert h[4, 1] == pytest.approx(math.sqrt(2))
    assert h[5, 8] == pytest.approx(math.sqrt(12))
    # |g,0> has no partner below the l-photon step: its column is all zero
    assert np.count_nonzero(h[:, 0]) == 0
    # |g,1> likewise carries only its diagonal
    assert np.count_nonzero(h[:, 2]) == 1


def test_mpjc_l_mismatch():
    params = ModelParams(l=1, omega=1.0, Omega=1.0)
    with pytest.raises(ValueError, match="l"):
        build_mpjc(params, build_space(2, 5))


def test_l_diag_values():
    assert build_l_diag(build_space(1, 1)).tolist() == [0.0, 1.0, 1.0, 2.0]
    assert build_l_diag(build_space(2, 2)).tolist() == [0.0, 2.0, 1.0, 3.0, 2.0, 4.0]


def test_mean_field_psi_zero_matches_mpjc_minus_mu_l():
    params = ModelParams(l=2, omega=1.3, Omega=1.1, mu=0.7, kappa=0.4)
    space = build_space(2, 6)
    h = build_mean_field(params, 0.0, space)
    expected = build_mpjc(params, space)
    idx = np.arange(space.dim)
    expected[idx, idx] -= params.mu * build_l_diag(space)
    assert np.array_equal(h, expected)


def test_mean_field_kappa_independent_at_psi_zero():
    space = build_space(1, 8)
    h1 = build_mean_field(ModelParams(l=1, omega=1.0, Omega=1.0, kappa=0.0), 0.0, space)
    h2 = build_mean_field(ModelParams(l=1, omega=1.0, Omega=1.0, kappa=0.9), 0.0, space)
    assert np.array_equal(h1, h2)


def test_mean_field_drive_entries():
    params = ModelParams(l=1, omega=1.0, Omega=1.0, mu=0.0, kappa=0.1, z=2)
    space = build_space(1, 3)
    psi = 0.5
    h = build_mean_field(params, psi, space)
    # -z kappa psi sqrt(n+1) between |s,n> and |s,n+1>
    assert h[0, 2] == pytest.approx(-0.1)
    assert h[1, 3] == pytest.approx(-0.1)
    assert h[2, 4] == pytest.approx(-0.1 * math.sqrt(2))
    # scalar shift on the diagonal
    assert h[0, 0] == pytest.approx(2 * 0.1 * psi ** 2)


def test_sector_block_values():
    # the embedded 2x2 block matches the explicitly written sector matrix
    l, L, omega = 2, 3, 1.7
    params = ModelParams(l=l, omega=omega, Omega=omega, mu=1.0)
    space = build_space(l, L)
    h = build_mean_field(params, 0.0, space)
    idx = [2 * (L - l) + 1, 2 * L]  # |e, L-l>, |g, L>
    block = h[np.ix_(idx, idx)]
    assert np.allclose(block, sector_matrix(l, L, omega), atol=1e-14)


@settings(max_examples=60, deadline=None)
@given(params=params_st, n_extra=st.integers(2, 12), psi=st.floats(-2.0, 2.0))
def test_exact_symmetry(params, n_extra, psi):
    space = build_space(params.l, params.l + n_extra)
    h = build_mean_field(params, psi, space)
    assert np.array_equal(h, h.T)


@settings(max_examples=40, deadline=None)
@given(params=params_st, n_extra=st.integers(2, 10))
def test_commutes_with_l_at_psi_zero(params, n_extra):
    space = build_space(params.l, params.l + n_extra)
    h = build_mean_field(params, 0.0, space)
    d = np.diag(build_l_diag(space))
    assert np.abs(h @ d - d @ h).max() <= 1e-12


@settings(max_examples=40, deadline=None)
@given(params=params_st, n_extra=st.integers(2, 10), psi=st.floats(0.0, 2.0))
def test_spectrum_even_in_psi_by_gauge(params, n_extra, psi):
    # the diagonal sign flip s_n = (-1)^n, extended by (-1)^l on excited
    # states, conjugates H(psi) into H(-psi) exactly
    space = build_space(params.l, params.l + n_extra)
    h_plus = build_mean_field(params, psi, space)
    h_minus = build_mean_field(params, -psi, space)
    n = np.arange(space.n_max + 1)
    s = np.empty(space.dim)
    s[0::2] = (-1.0) ** n
    s[1::2] = (-1.0) ** (n + space.l)
    assert np.array_equal(s[:, None] * h_plus * s[None, :], h_minus)
