"""Boundary quadrature matrix, its oracle, spectrum, and the remainder kernel.

Monomial maps z -> (sqrt(a) z^p, sqrt(b) z^q) with coprime p < q and
a + b = 1 are the exactly solvable family: the matrix is diagonal in the
monomial basis, the diagonal obeys c_m = a c_{m-p} + b c_{m-q} with c_0 = 1,
c_m -> 1 / (p a + q b), and c_m = 0 exactly on the numerical semigroup gaps
of <p, q>. Every quadrature claim below is pinned against that family.
"""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pickmult import (
    BoundaryGrid,
    ConfigError,
    GridResolutionError,
    Holomap,
    IntegrandBlowupError,
    MonomialMap,
    TransversalityError,
    boundary_symbol_values,
    c_m_oracle,
    m_kernel_matrix,
    r_matrix,
    semigroup_gaps,
    spectrum_report,
    szego_projection_coeffs,
    toeplitz_symbol,
)


def test_monomial_map_validation():
    with pytest.raises(ConfigError):
        MonomialMap(3, 2, 0.5)  # p < q required
    with pytest.raises(ConfigError):
        MonomialMap(2, 4, 0.5)  # coprime required
    with pytest.raises(ConfigError):
        MonomialMap(2, 3, 1.0)  # weight strictly inside (0, 1)
    m = MonomialMap(2, 3, 0.25)
    assert m.beta == pytest.approx(0.75)
    h = m.to_holomap()
    assert h.boundary_normalized
    assert h.max_degree == 3


def test_oracle_first_values_exact():
    m = MonomialMap(2, 3, 0.5)
    # alpha = beta = 1/2 keeps every value a dyadic rational, so exact
    expected = [1.0, 0.0, 0.5, 0.5, 0.25, 0.5, 0.375, 0.375]
    got = [c_m_oracle(m, k) for k in range(8)]
    assert got == expected


@given(
    pq=st.sampled_from([(2, 3), (2, 5), (3, 5), (3, 7), (4, 5)]),
    alpha=st.floats(min_value=0.05, max_value=0.95),
    mode=st.integers(min_value=0, max_value=40),
)
def test_oracle_recurrence_matches_binomial_sum(pq, alpha, mode):
    m = MonomialMap(pq[0], pq[1], alpha)
    total = 0.0
    for g1 in range(mode // m.p + 1):
        rem = mode - m.p * g1
        if rem % m.q:
            continue
        g2 = rem // m.q
        total += math.comb(g1 + g2, g1) * m.alpha**g1 * m.beta**g2
    assert c_m_oracle(m, mode) == pytest.approx(total, rel=1e-12, abs=1e-15)


def test_oracle_vanishes_exactly_on_gaps():
    m = MonomialMap(3, 5, 0.3)
    for g in semigroup_gaps(3, 5, 40):
        assert c_m_oracle(m, g) == 0.0
    for k in set(range(41)) - set(semigroup_gaps(3, 5, 40)):
        assert c_m_oracle(m, k) > 0.0


def test_semigroup_gaps_known_sets():
    assert semigroup_gaps(2, 3, 10) == [1]
    assert semigroup_gaps(2, 5, 10) == [1, 3]
    assert semigroup_gaps(3, 5, 20) == [1, 2, 4, 7]
    assert semigroup_gaps(3, 7, 15) == [1, 2, 4, 5, 8, 11]


def test_toeplitz_symbol_values():
    assert toeplitz_symbol(MonomialMap(2, 3, 0.5)) == 0.4
    assert toeplitz_symbol(MonomialMap(2, 5, 0.5)) == 1.0 / 3.5


def test_boundary_symbol_is_toeplitz_symbol_for_monomials(holo23):
    # ell(zeta) = 1 / (zeta <Dh, h>) collapses to the constant 1/(p a + q b)
    ell = boundary_symbol_values(holo23, BoundaryGrid.uniform(64))
    assert np.abs(ell - 0.4).max() < 1e-14
    assert ell.dtype == np.float64


def test_oracle_recurrence_relation():
    m = MonomialMap(2, 5, 0.3)

    def c(k: int) -> float:
        return 0.0 if k < 0 else c_m_oracle(m, k)

    for mode in range(1, 60):
        assert c(mode) == pytest.approx(
            m.alpha * c(mode - 2) + m.beta * c(mode - 5), rel=1e-12, abs=1e-15
        )


def test_szego_projection_picks_out_monomials():
    grid = BoundaryGrid.uniform(32)
    samples = grid.nodes**3
    coeffs = szego_projection_coeffs(grid, samples, 9)  # modes 0..8
    expected = np.zeros(9)
    expected[3] = 1.0
    assert np.abs(coeffs - expected).max() < 1e-14
    # anti-analytic content projects to zero
    anti = szego_projection_coeffs(grid, grid.nodes.conj(), 9)
    assert np.abs(anti).max() < 1e-14


def test_r_matrix_diagonal_matches_oracle(holo23, grid256):
    rm = r_matrix(holo23, grid256, 8)
    diag = np.real(np.diag(rm.entries))
    oracle = np.array([c_m_oracle(MonomialMap(2, 3, 0.5), k) for k in range(9)])
    assert np.abs(diag - oracle).max() < 1e-10
    off = rm.entries - np.diag(np.diag(rm.entries))
    assert np.abs(off).max() < 1e-12


def test_r_matrix_hermitian_exactly(holo23, grid256):
    rm = r_matrix(holo23, grid256, 6)
    assert np.array_equal(rm.entries, rm.entries.conj().T)


def test_r_matrix_scaled_identity_map():
    # h(z) = 0.9 z is not boundary-normalized; no singular correction applies
    # and the plain staggered quadrature is spectrally accurate
    h = Holomap([[0.0, 0.9]], boundary_normalized=False)
    rm = r_matrix(h, BoundaryGrid.uniform(128), 8)
    diag = np.real(np.diag(rm.entries))
    assert np.abs(diag - 0.81 ** np.arange(9)).max() < 1e-10
    off = rm.entries - np.diag(np.diag(rm.entries))
    assert np.abs(off).max() < 1e-12


def test_r_matrix_grid_too_coarse():
    h = MonomialMap(2, 3, 0.5).to_holomap()
    with pytest.raises(GridResolutionError):
        r_matrix(h, BoundaryGrid.uniform(16), 8)


def test_r_matrix_requires_transversality():
    # boundary zero at -1 kills the margin
    h = Holomap([[0.0, 0.5, 0.5]], validate=True)
    with pytest.raises(TransversalityError):
        r_matrix(h, BoundaryGrid.uniform(64), 4)


def test_r_matrix_blowup_guard():
    # hugging the sphere without being declared normalized
    h = Holomap([[0.0, 1.0 - 1e-13]], validate=True)
    with pytest.raises(IntegrandBlowupError):
        r_matrix(h, BoundaryGrid.uniform(64), 4)


def test_spectrum_single_gap(holo23, grid256):
    spectrum = spectrum_report(holo23, grid256, 8, gap_modes=semigroup_gaps(2, 3, 8))
    assert spectrum.kernel_indices == (0,)
    assert spectrum.dominant_modes == (1,)
    assert spectrum.gap_mass[0] > 0.999
    assert spectrum.min_invertible == pytest.approx(0.25, abs=1e-10)


def test_spectrum_degenerate_double_gap(mono25):
    h = mono25.to_holomap()
    grid = BoundaryGrid.uniform(512)
    spectrum = spectrum_report(h, grid, 16, gap_modes=semigroup_gaps(2, 5, 16))
    assert len(spectrum.kernel_indices) == 2
    assert set(spectrum.dominant_modes) == {1, 3}
    # the null pair can mix; only the joint mass on {1, 3} is stable
    assert min(spectrum.gap_mass) > 0.99


def test_m_kernel_constant_diagonal_for_monomial(holo23):
    mk = m_kernel_matrix(holo23, BoundaryGrid.uniform(512))
    # analytic diagonal: (a + 3b) / (2a + 3b)^2 = 0.32 for p=2, q=3, a=1/2
    assert np.abs(mk.diag_formula - 0.32).max() < 1e-13
    assert mk.diag_agreement < 1e-5
    assert mk.sup_abs < 2.0
    assert mk.hs_norm == pytest.approx(math.sqrt(mk.hs_sum))


def test_m_kernel_refinement_stability(holo23):
    hs = [
        m_kernel_matrix(holo23, BoundaryGrid.uniform(n)).hs_sum for n in (256, 512)
    ]
    assert abs(hs[1] - hs[0]) / hs[0] < 1e-6


def test_m_kernel_plain_map_diagonal():
    # non-normalized map: the diagonal limit is the kernel diagonal itself
    h = Holomap([[0.0, 0.7]], boundary_normalized=False)
    coarse = m_kernel_matrix(h, BoundaryGrid.uniform(256))
    expected = 1.0 / (1.0 - 0.49)
    assert np.abs(coarse.diag_formula - expected).max() < 1e-12
    # one-sided Richardson leaves an O(h^2) residual; halving h quarters it
    fine = m_kernel_matrix(h, BoundaryGrid.uniform(512))
    assert coarse.diag_agreement < 1e-2
    assert fine.diag_agreement < 0.3 * coarse.diag_agreement


def test_r_matrix_psd_certified(holo23, grid256):
    rm = r_matrix(holo23, grid256, 12)
    eigs = np.linalg.eigvalsh(rm.entries)
    assert eigs[0] > -1e-10 * max(rm.trace, 1.0)
