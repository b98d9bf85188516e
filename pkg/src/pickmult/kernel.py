"""Drury-Arveson kernel and Gram machinery on the unit ball of C^d.

The reproducing kernel is k(z, w) = 1 / (1 - <z, w>) with the inner product
<z, w> = sum_i z_i * conj(w_i), linear in the first slot. Everything downstream
(Pick norms, separator bounds, operator discretizations) consumes the Gram
matrices and whitened factors built here.

Determinism: inner products are accumulated in ascending index order with
compensated (Neumaier) summation, so repeated runs on the same inputs are
bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import (
    BallMembershipError,
    ConfigError,
    DimensionMismatchError,
    DuplicateNodeError,
    FactorizationError,
    NonHermitianError,
    PsdViolationError,
)


def _neumaier(values: Iterable[float]) -> float:
    # improved Kahan: the correction survives even when the running sum
    # itself cancels at the final step
    total = 0.0
    carry = 0.0
    for x in values:
        t = total + x
        if abs(total) >= abs(x):
            carry += (total - t) + x
        else:
            carry += (x - t) + total
        total = t
    return total + carry


def compensated_dot(z: Sequence[complex], w: Sequence[complex]) -> complex:
    """Compensated <z, w> = sum_i z_i * conj(w_i), ascending index order.

    Real and imaginary parts accumulate separately with Neumaier summation:
    deterministic for a fixed ordering and immune to the classic
    large-small-large cancellation that defeats plain Kahan.
    """
    terms = [complex(zi) * complex(wi).conjugate() for zi, wi in zip(z, w)]
    return complex(
        _neumaier(t.real for t in terms), _neumaier(t.imag for t in terms)
    )


class BallPoint:
    """A point of the open unit ball of C^d.

    Parameters
    ----------
    coords : iterable of complex
        The d coordinates, d >= 1.
    tol : Tolerances, optional
        Supplies eps_ball; membership is strict, |z|^2 < 1 - eps_ball.

    Raises
    ------
    ConfigError
        Empty coordinate list.
    BallMembershipError
        Point on or outside the sphere within eps_ball.
    """

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable[complex], *, tol: Tolerances = DEFAULT_TOL):
        coords = tuple(complex(c) for c in coords)
        if not coords:
            raise ConfigError("a ball point needs at least one coordinate")
        norm_sq = compensated_dot(coords, coords).real
        if norm_sq >= 1.0 - tol.eps_ball:
            raise BallMembershipError(
                f"|z|^2 = {norm_sq!r} is not strictly inside the unit ball "
                f"(eps_ball = {tol.eps_ball})"
            )
        object.__setattr__(self, "coords", coords)

    def __setattr__(self, name, value):
        raise AttributeError("BallPoint is immutable")

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @property
    def norm_sq(self) -> float:
        return compensated_dot(self.coords, self.coords).real

    @property
    def margin(self) -> float:
        """Distance of |z|^2 from the sphere, 1 - |z|^2 (always positive)."""
        return 1.0 - self.norm_sq

    def __eq__(self, other) -> bool:
        return isinstance(other, BallPoint) and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return f"BallPoint({list(self.coords)!r})"


def kernel_eval(z: BallPoint, w: BallPoint, *, tol: Tolerances = DEFAULT_TOL) -> complex:
    """Evaluate k(z, w) = 1 / (1 - <z, w>).

    Hermitian symmetry k(z, w) = conj(k(w, z)) holds by construction of the
    inner product; tests pin it to within tol_eval.
    """
    if z.dimension != w.dimension:
        raise DimensionMismatchError(
            f"kernel arguments of dimension {z.dimension} and {w.dimension}"
        )
    denom = 1.0 - compensated_dot(z.coords, w.coords)
    # |<z,w>| <= |z||w| < 1 by Cauchy-Schwarz, so denom cannot vanish for
    # validated points; guard anyway for points constructed with loose eps.
    if abs(denom) <= tol.eps_ball:
        raise BallMembershipError("kernel denominator vanishes; point pair too close to the sphere")
    return 1.0 / denom


@dataclass(frozen=True)
class KernelGram:
    """Gram matrix K[i, j] = k(z_i, z_j) for a finite node list.

    entries is Hermitian exactly (built by mirroring the upper triangle) with
    real diagonal 1 / (1 - |z_i|^2). PSD within tol_psd * trace is certified at
    construction.
    """

    entries: np.ndarray
    nodes: tuple[BallPoint, ...]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def min_eig(self, *, tol: Tolerances = DEFAULT_TOL) -> float:
        return min_eig_hermitian(self.entries, tol=tol)


def _check_distinct(nodes: Sequence[BallPoint], tol: Tolerances) -> None:
    n = len(nodes)
    for i in range(n):
        for j in range(i + 1, n):
            diff = [a - b for a, b in zip(nodes[i].coords, nodes[j].coords)]
            dist = compensated_dot(diff, diff).real ** 0.5
            if dist <= tol.tol_node:
                raise DuplicateNodeError(
                    f"nodes {i} and {j} coincide within tol_node ({dist!r})"
                )


def gram(nodes: Sequence[BallPoint], *, tol: Tolerances = DEFAULT_TOL) -> KernelGram:
    """Build the kernel Gram matrix of a nonempty list of distinct nodes.

    Raises
    ------
    ConfigError / DimensionMismatchError / DuplicateNodeError
        Empty list, mixed dimensions, nodes within tol_node.
    PsdViolationError
        The certified minimum eigenvalue falls below -tol_psd * trace
        (cannot happen for exact kernel data; guards float pathology).
    """
    nodes = tuple(nodes)
    if not nodes:
        raise ConfigError("gram of an empty node list")
    d = nodes[0].dimension
    for p in nodes[1:]:
        if p.dimension != d:
            raise DimensionMismatchError("gram nodes of mixed dimension")
    _check_distinct(nodes, tol)
    n = len(nodes)
    entries = np.zeros((n, n), dtype=complex)
    for i in range(n):
        entries[i, i] = 1.0 / (1.0 - nodes[i].norm_sq)
        for j in range(i + 1, n):
            kij = kernel_eval(nodes[i], nodes[j], tol=tol)
            entries[i, j] = kij
            entries[j, i] = kij.conjugate()
    g = KernelGram(entries=entries, nodes=nodes)
    low = g.min_eig(tol=tol)
    if low < -tol.tol_psd * g.trace:
        raise PsdViolationError(
            f"gram min eigenvalue {low!r} below -tol_psd * trace"
        )
    return g


def _as_matrix(a) -> np.ndarray:
    if isinstance(a, KernelGram):
        return a.entries
    return np.asarray(a, dtype=complex)


def min_eig_hermitian(a, *, tol: Tolerances = DEFAULT_TOL) -> float:
    """Smallest eigenvalue of a Hermitian matrix (or KernelGram).

    The input must be Hermitian within tol_herm relative to its largest entry;
    the residual skew is symmetrized away before the dense solve, whose
    accuracy is taken as tol_eig * spectral radius.
    """
    m = _as_matrix(a)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ConfigError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max()) if m.size else 0.0)
    skew = float(np.abs(m - m.conj().T).max()) if m.size else 0.0
    if skew > tol.tol_herm * scale:
        raise NonHermitianError(
            f"matrix deviates from Hermitian by {skew!r} (allowed {tol.tol_herm * scale!r})"
        )
    sym = (m + m.conj().T) / 2.0
    return float(np.linalg.eigvalsh(sym)[0])


@dataclass(frozen=True)
class WhitenedFactor:
    """Lower-triangular L with L L* = K + jitter_applied * I."""

    matrix: np.ndarray
    jitter_applied: float


def whiten(k, *, tol: Tolerances = DEFAULT_TOL) -> WhitenedFactor:
    """Cholesky-factor a Gram matrix, escalating diagonal jitter as needed.

    The jitter ladder is relative to trace(K); each rung is accepted only if
    the factor reproduces K + jitter I to within tol_chol * trace elementwise.
    Exhausting the ladder raises FactorizationError.
    """
    m = _as_matrix(k)
    n = m.shape[0]
    trace = float(np.trace(m).real)
    eye = np.eye(n)
    last_err: Exception | None = None
    for rung in tol.jitter_ladder:
        jitter = rung * trace
        target = m + jitter * eye
        try:
            L = np.linalg.cholesky(target)
        except np.linalg.LinAlgError as exc:
            last_err = exc
            continue
        resid = float(np.abs(L @ L.conj().T - target).max())
        if resid <= tol.tol_chol * max(trace, 1.0):
            return WhitenedFactor(matrix=L, jitter_applied=jitter)
        last_err = FactorizationError(f"reconstruction residual {resid!r} too large")
    raise FactorizationError(
        f"Cholesky failed at every jitter rung (last: {last_err})"
    )
