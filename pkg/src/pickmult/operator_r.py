"""Discretized composition-pullback operator R on boundary Fourier modes.

R acts on the Hardy space of the disk by integrating against the ball kernel
along the image curve: (R f)(zeta) = integral of f(eta) / (1 - <h(zeta), h(eta)>)
over the circle in normalized arclength. Its matrix in the mode basis
{eta^m, m = 0..M} is assembled by boundary quadrature.

Singularity handling. For boundary-normalized maps the integrand has a simple
pole on the diagonal (|h| = 1 there). The double quadrature is therefore taken
with the inner grid staggered to the midpoints, which computes the
principal-value part of the matrix element; the analytic boundary limit adds a
point mass of density ell(eta) / 2 on the diagonal, where
ell(eta) = 1 / (eta * <Dh(eta), h(eta)>) is the boundary limit of
(1 - zeta conj(eta)) / (1 - <h(zeta), h(eta)>). That correction is added in
closed form. For maps bounded away from the sphere the kernel is continuous,
the limit ell is identically zero, and the plain staggered quadrature is
already spectrally accurate.

The same ell is the symbol of the Toeplitz part of R: the kernel splits as
j(zeta, eta) ell(eta) plus the continuous remainder
M(zeta, eta) = j(zeta, eta) (L(zeta, eta) - L(eta, eta)) with
j the Szego kernel and L = kernel / j. m_kernel_matrix materializes M and its
discrete Hilbert-Schmidt data.

Independent verification route: for monomial maps z -> (a z^p, b z^q) the
matrix is diagonal with entries c_m given by a multi-index sum (c_m_oracle),
computed by combinatorial enumeration and never by quadrature, so the two
routes genuinely cross-check each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, sqrt

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import (
    ConfigError,
    GridResolutionError,
    IntegrandBlowupError,
    NumericalError,
    PsdViolationError,
    TransversalityError,
)
from .holomap import BoundaryGrid, Holomap, transversality_margin


def szego_kernel(z, w):
    """Szego kernel of the disk, j(z, w) = 1 / (1 - z conj(w))."""
    return 1.0 / (1.0 - np.asarray(z, dtype=complex) * np.conj(w))


def szego_projection_coeffs(grid: BoundaryGrid, samples, num_modes: int) -> np.ndarray:
    """Discrete analytic Fourier coefficients c_m = sum_k w_k f(zeta_k) conj(zeta_k^m).

    For trigonometric polynomials of degree < n/2 this reproduces the analytic
    modes exactly (uniform quadrature is exact there) and kills the
    anti-analytic ones; the tests pin that reproducing property.
    """
    samples = np.asarray(samples, dtype=complex)
    mm = np.arange(num_modes)
    v = grid.nodes[:, None] ** mm[None, :]
    return (grid.weights[:, None] * v.conj() * samples[:, None]).sum(axis=0)


@dataclass(frozen=True)
class MonomialMap:
    """z -> (a z^p, b z^q) with |a|^2 = alpha, |b|^2 = 1 - alpha.

    p < q coprime keeps the boundary curve injective; alpha strictly inside
    (0, 1) keeps both components alive. |h| = 1 on the circle, so the map is
    boundary-normalized by construction.
    """

    p: int
    q: int
    alpha: float

    def __post_init__(self):
        if not (isinstance(self.p, int) and isinstance(self.q, int)):
            raise ConfigError("monomial exponents must be integers")
        if not (0 < self.p < self.q):
            raise ConfigError("need 0 < p < q")
        if gcd(self.p, self.q) != 1:
            raise ConfigError("p and q must be coprime")
        if not (0.0 < self.alpha < 1.0):
            raise ConfigError("alpha must lie strictly inside (0, 1)")

    @property
    def beta(self) -> float:
        return 1.0 - self.alpha

    def to_holomap(self, *, tol: Tolerances = DEFAULT_TOL) -> Holomap:
        c1 = [0.0] * self.p + [sqrt(self.alpha)]
        c2 = [0.0] * self.q + [sqrt(self.beta)]
        return Holomap([c1, c2], boundary_normalized=True, tol=tol)


def toeplitz_symbol(m: MonomialMap) -> float:
    """Constant Toeplitz symbol 1 / (p alpha + q beta) of the monomial map."""
    return 1.0 / (m.p * m.alpha + m.q * m.beta)


def _binom_float(n: int, k: int) -> float:
    # incremental-ratio binomial, stays in float range for desk-scale inputs
    k = min(k, n - k)
    out = 1.0
    for i in range(1, k + 1):
        out = out * (n - k + i) / i
    return out


def c_m_oracle(m: MonomialMap, mode: int) -> float:
    """Diagonal eigenvalue of R for the monomial map, by multi-index enumeration.

    c_mode = sum over (g1, g2) with p g1 + q g2 = mode of
    ((g1 + g2)! / (g1! g2!)) alpha^g1 beta^g2. Satisfies the recurrence
    c_m = alpha c_{m-p} + beta c_{m-q} + [m == 0] and tends to the Toeplitz
    symbol as m grows. Zero exactly on the numerical-semigroup gaps of <p, q>.
    """
    if mode < 0:
        raise ConfigError("mode must be nonnegative")
    total = 0.0
    for g1 in range(mode // m.p + 1):
        rem = mode - m.p * g1
        if rem % m.q:
            continue
        g2 = rem // m.q
        total += _binom_float(g1 + g2, g1) * m.alpha**g1 * m.beta**g2
    return total


def semigroup_gaps(p: int, q: int, upto: int) -> list[int]:
    """Modes in [0, upto] not representable as p g1 + q g2, g1, g2 >= 0."""
    if gcd(p, q) != 1:
        raise ConfigError("gap structure needs coprime generators")
    reachable = np.zeros(upto + 1, dtype=bool)
    reachable[0] = True
    for m in range(1, upto + 1):
        if m >= p and reachable[m - p]:
            reachable[m] = True
        elif m >= q and reachable[m - q]:
            reachable[m] = True
    return [int(m) for m in np.nonzero(~reachable)[0]]


def boundary_symbol_values(h: Holomap, grid: BoundaryGrid) -> np.ndarray:
    """ell(zeta_k) = 1 / (zeta_k <Dh, h>) on the grid, for normalized maps.

    zeta <Dh(zeta), h(zeta)> is real on the circle when |h| = 1 there
    (differentiate |h|^2 = 1 along the circle) and positive under
    transversality plus properness; both are certified here.
    """
    hv = h.eval(grid.nodes)
    dv = h.deriv(grid.nodes)
    s = grid.nodes * np.sum(dv * hv.conj(), axis=-1)
    scale = max(1.0, float(np.abs(s).max()))
    if float(np.abs(s.imag).max()) > 1e-8 * scale:
        raise NumericalError(
            "boundary symbol is not real; map does not look boundary-normalized"
        )
    if float(s.real.min()) <= 0.0:
        raise TransversalityError(
            "boundary symbol has a nonpositive value; radial derivative of "
            "|h|^2 must be positive on the circle"
        )
    return 1.0 / s.real


@dataclass(frozen=True)
class RMatrix:
    """Hermitian PSD matrix of R on modes 0..modes, from an n-node grid."""

    entries: np.ndarray
    grid_size: int
    modes: int
    holomap: Holomap

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)


def r_matrix(
    h: Holomap,
    grid: BoundaryGrid,
    modes: int,
    *,
    tol: Tolerances = DEFAULT_TOL,
) -> RMatrix:
    """Assemble the (modes+1) x (modes+1) matrix of R by boundary quadrature.

    Requires a certified transversality margin and a grid with
    n >= 4 (modes + max component degree). Raises IntegrandBlowupError when
    the closed-form integrand is evaluated too close to its singularity at a
    node pair, which happens for maps that hug the sphere without being
    declared boundary-normalized.
    """
    if modes < 0:
        raise ConfigError("mode count must be nonnegative")
    need = 4 * (modes + h.max_degree)
    if grid.n < need:
        raise GridResolutionError(
            f"grid of {grid.n} nodes is too coarse; need at least {need}"
        )
    margin = transversality_margin(h, grid)
    if margin <= tol.tol_transversal:
        raise TransversalityError(
            f"transversality margin {margin!r} not above tol_transversal"
        )

    zeta = grid.nodes
    eta = grid.midpoint_nodes()
    hz = h.eval(zeta)
    he = h.eval(eta)
    inner = hz @ he.conj().T
    # blow-up guards: the staggered pairing keeps 1 - <h, h> away from zero
    # for transversal normalized maps (the singular part is then handled in
    # closed form below); for other maps, hugging the sphere at any node pair
    # means the plain quadrature cannot be trusted
    if float(np.abs(1.0 - inner).min()) <= tol.eps_ball:
        raise IntegrandBlowupError(
            "integrand evaluated within eps_ball of its singularity at a node pair"
        )
    if not h.boundary_normalized and float(np.abs(inner).max()) >= 1.0 - tol.eps_ball:
        raise IntegrandBlowupError(
            "map approaches the sphere within eps_ball at a node pair but is "
            "not declared boundary-normalized"
        )
    c = 1.0 / (1.0 - inner)

    mm = np.arange(modes + 1)
    vz = zeta[:, None] ** mm[None, :]
    ve = eta[:, None] ** mm[None, :]
    a = vz.conj().T @ c @ ve / grid.n**2
    if h.boundary_normalized:
        # principal value + half the diagonal point mass of density ell
        ell = boundary_symbol_values(h, grid)
        a = a + (vz.conj().T * ell[None, :]) @ vz / (2.0 * grid.n)
    a = (a + a.conj().T) / 2.0

    rm = RMatrix(entries=a, grid_size=grid.n, modes=modes, holomap=h)
    low = float(np.linalg.eigvalsh(a)[0])
    if low < -tol.tol_psd * max(rm.trace, 1.0):
        raise PsdViolationError(f"R matrix has min eigenvalue {low!r}; not PSD")
    return rm


@dataclass(frozen=True)
class MKernelReport:
    """Continuous remainder M(zeta, eta) on the full grid, with HS data.

    matrix holds M at all node pairs, diagonal filled by one-sided Richardson
    extrapolation along the grid; diag_formula is the analytic limit
    (<h''(u)/2, h(u)> / <h'(u), h(u)>^2 for normalized maps, the plain kernel
    diagonal otherwise) kept as a cross-check, never substituted.
    """

    matrix: np.ndarray
    grid_size: int
    sup_abs: float
    hs_sum: float
    hs_norm: float
    diag_extrapolated: np.ndarray
    diag_formula: np.ndarray
    diag_agreement: float


def m_kernel_matrix(
    h: Holomap, grid: BoundaryGrid, *, tol: Tolerances = DEFAULT_TOL
) -> MKernelReport:
    """Materialize M = j (L - L(eta, eta)) on grid x grid.

    L = (1 - zeta conj(eta)) / (1 - <h(zeta), h(eta)>) off the diagonal; its
    diagonal limit is the boundary symbol ell for normalized maps and zero
    otherwise. M is continuous, so its sup and discrete Hilbert-Schmidt sum
    sum_kj w_k w_j |M|^2 stabilize under grid refinement.
    """
    n = grid.n
    if n < 4:
        raise GridResolutionError("m-kernel needs at least 4 nodes")
    zeta = grid.nodes
    hz = h.eval(zeta)
    inner = hz @ hz.conj().T
    u = zeta[:, None] * zeta.conj()[None, :]

    offdiag = ~np.eye(n, dtype=bool)
    one_minus_inner = 1.0 - inner
    if float(np.abs(one_minus_inner[offdiag]).min()) <= tol.eps_ball:
        raise IntegrandBlowupError(
            "kernel singular at an off-diagonal node pair; boundary curve "
            "self-touches within eps_ball"
        )

    if h.boundary_normalized:
        ell = boundary_symbol_values(h, grid).astype(complex)
    else:
        ell = np.zeros(n, dtype=complex)

    m = np.zeros((n, n), dtype=complex)
    np.divide(1.0 - u, one_minus_inner, out=m, where=offdiag)  # L off-diagonal
    m[offdiag] -= np.broadcast_to(ell[None, :], (n, n))[offdiag]
    denom = np.ones((n, n), dtype=complex)
    np.copyto(denom, 1.0 - u, where=offdiag)
    m = m / denom

    # one-sided limit along the grid, first-order Richardson
    idx = np.arange(n)
    m1 = m[(idx + 1) % n, idx]
    m2 = m[(idx + 2) % n, idx]
    diag_extrap = 2.0 * m1 - m2
    m[idx, idx] = diag_extrap

    if h.boundary_normalized:
        dv = h.deriv(zeta)
        d2v = h.second_deriv(zeta)
        num = np.sum((d2v / 2.0) * hz.conj(), axis=-1)
        den = np.sum(dv * hz.conj(), axis=-1) ** 2
        diag_formula = num / den
    else:
        norm_sq = np.sum(np.abs(hz) ** 2, axis=-1)
        diag_formula = (1.0 / (1.0 - norm_sq)).astype(complex)

    agreement = float(np.abs(diag_extrap - diag_formula).max())
    abs_m = np.abs(m)
    hs_sum = float((grid.weights[:, None] * grid.weights[None, :] * abs_m**2).sum())
    return MKernelReport(
        matrix=m,
        grid_size=n,
        sup_abs=float(abs_m.max()),
        hs_sum=hs_sum,
        hs_norm=sqrt(hs_sum),
        diag_extrapolated=diag_extrap,
        diag_formula=diag_formula,
        diag_agreement=agreement,
    )


@dataclass(frozen=True)
class SpectrumReport:
    """Eigen-decomposition of an R matrix with kernel-mode bookkeeping.

    kernel_indices: positions (in ascending eigenvalue order) below tol_kernel.
    dominant_modes: for each kernel eigenvector, the mode carrying most mass.
    gap_modes / gap_mass: when the expected gap set is known (monomial maps),
    the joint mass each kernel eigenvector carries on that set. Near-zero
    eigenvalues can be degenerate, so mass is only meaningful on the set.
    min_invertible: smallest eigenvalue at or above tol_kernel (the
    invertibility margin), None if everything is kernel.
    """

    eigenvalues: np.ndarray
    kernel_indices: tuple[int, ...]
    dominant_modes: tuple[int, ...]
    gap_modes: tuple[int, ...] | None
    gap_mass: tuple[float, ...]
    min_invertible: float | None


def spectrum_report(
    h: Holomap,
    grid: BoundaryGrid,
    modes: int,
    *,
    gap_modes: list[int] | tuple[int, ...] | None = None,
    rmat: RMatrix | None = None,
    tol: Tolerances = DEFAULT_TOL,
) -> SpectrumReport:
    """Eigenvalues of the R matrix, ascending, with kernel-mode attribution."""
    if rmat is None:
        rmat = r_matrix(h, grid, modes, tol=tol)
    w, v = np.linalg.eigh(rmat.entries)
    kernel_idx = [i for i, lam in enumerate(w) if lam < tol.tol_kernel]
    dominant = []
    masses = []
    gap_set = tuple(int(g) for g in gap_modes) if gap_modes is not None else None
    for i in kernel_idx:
        prob = np.abs(v[:, i]) ** 2
        prob = prob / prob.sum()
        dominant.append(int(prob.argmax()))
        if gap_set is not None:
            masses.append(float(sum(prob[g] for g in gap_set if g < len(prob))))
        else:
            masses.append(float(prob.max()))
    invertible = [float(lam) for lam in w if lam >= tol.tol_kernel]
    return SpectrumReport(
        eigenvalues=w,
        kernel_indices=tuple(kernel_idx),
        dominant_modes=tuple(dominant),
        gap_modes=gap_set,
        gap_mass=tuple(masses),
        min_invertible=min(invertible) if invertible else None,
    )
