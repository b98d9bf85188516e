"""Polynomial maps from the unit disk into the unit ball, and boundary grids.

A holomap is a d-tuple of univariate complex polynomials, coefficients stored
ascending. Construction checks interior containment |h(z)|^2 < 1 on a dense
grid, and, for maps declared boundary-normalized (|h| = 1 on the circle, the
proxy for properness), that min |h(zeta)|^2 >= 1 - tol_proper on the boundary.

The transversality margin min_k |<Dh(zeta_k), h(zeta_k)>| over a boundary grid
certifies that the image curve meets the sphere non-tangentially; operators
downstream require it positive.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .config import DEFAULT_TOL, Tolerances
from .errors import BallMembershipError, ConfigError


class Holomap:
    __slots__ = ("components", "boundary_normalized")

    def __init__(
        self,
        components: Sequence[Sequence[complex]],
        *,
        boundary_normalized: bool = False,
        validate: bool = True,
        tol: Tolerances = DEFAULT_TOL,
    ):
        comps = tuple(np.asarray(list(c), dtype=complex) for c in components)
        if not comps or any(c.ndim != 1 or c.size == 0 for c in comps):
            raise ConfigError("each component needs at least one coefficient")
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "boundary_normalized", bool(boundary_normalized))
        if validate:
            self.check_interior(tol=tol)
            if self.boundary_normalized:
                self.check_properness(tol=tol)

    def __setattr__(self, name, value):
        raise AttributeError("Holomap is immutable")

    @property
    def dimension(self) -> int:
        return len(self.components)

    @property
    def max_degree(self) -> int:
        return max(len(c) - 1 for c in self.components)

    def eval(self, z):
        """h(z). Scalar z -> (d,) array; array z of shape (n,) -> (n, d)."""
        z = np.asarray(z, dtype=complex)
        vals = [npoly.polyval(z, c) for c in self.components]
        return np.stack(vals, axis=-1)

    def deriv(self, z):
        """h'(z), componentwise formal derivative, same shapes as eval."""
        z = np.asarray(z, dtype=complex)
        vals = [npoly.polyval(z, npoly.polyder(c)) for c in self.components]
        return np.stack(vals, axis=-1)

    def second_deriv(self, z):
        z = np.asarray(z, dtype=complex)
        vals = [npoly.polyval(z, npoly.polyder(c, 2)) for c in self.components]
        return np.stack(vals, axis=-1)

    def check_interior(
        self, *, tol: Tolerances = DEFAULT_TOL, strict: bool = True
    ) -> float:
        """Max of |h|^2 over the interior check grid; raises if >= 1.

        strict=False skips the raise and just returns the observed max, for
        callers that want to report the violation instead of aborting.
        """
        radii = (np.arange(1, tol.interior_radii + 1) / tol.interior_radii) * (
            1.0 - tol.eps_ball
        )
        angles = 2.0 * np.pi * np.arange(tol.interior_angles) / tol.interior_angles
        zgrid = (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()
        vals = self.eval(zgrid)
        norm_sq = np.sum(np.abs(vals) ** 2, axis=-1)
        worst = float(norm_sq.max())
        if strict and worst >= 1.0:
            idx = int(norm_sq.argmax())
            raise BallMembershipError(
                f"|h(z)|^2 = {worst!r} >= 1 at interior point {zgrid[idx]!r}"
            )
        return worst

    def check_properness(
        self,
        *,
        boundary_nodes: int = 256,
        tol: Tolerances = DEFAULT_TOL,
        strict: bool = True,
    ) -> float:
        """Min of |h|^2 on the circle; raises if below 1 - tol_proper."""
        zeta = np.exp(2j * np.pi * np.arange(boundary_nodes) / boundary_nodes)
        norm_sq = np.sum(np.abs(self.eval(zeta)) ** 2, axis=-1)
        low = float(norm_sq.min())
        if strict and low < 1.0 - tol.tol_proper:
            raise ConfigError(
                f"map declared boundary-normalized but min |h|^2 on the "
                f"circle is {low!r} (needs >= 1 - {tol.tol_proper})"
            )
        return low

    def to_payload(self) -> dict:
        """JSON-ready form: coefficient (re, im) pairs, ascending degree."""
        return {
            "components": [
                [[float(c.real), float(c.imag)] for c in comp]
                for comp in self.components
            ],
            "boundary_normalized": self.boundary_normalized,
        }

    @classmethod
    def from_payload(
        cls, payload: dict, *, validate: bool = True, tol: Tolerances = DEFAULT_TOL
    ) -> "Holomap":
        try:
            comps = [
                [complex(re, im) for re, im in comp]
                for comp in payload["components"]
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed holomap payload: {exc}") from exc
        return cls(
            comps,
            boundary_normalized=bool(payload.get("boundary_normalized", False)),
            validate=validate,
            tol=tol,
        )

    def __repr__(self) -> str:
        degs = [len(c) - 1 for c in self.components]
        return f"Holomap(d={self.dimension}, degrees={degs}, boundary_normalized={self.boundary_normalized})"


@dataclass(frozen=True)
class BoundaryGrid:
    """Uniform circle grid: nodes exp(2 pi i k / n), weights 1/n.

    Uniform weights are the harmonic measure of the disk at base point 0.
    """

    n: int
    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def uniform(cls, n: int) -> "BoundaryGrid":
        if n < 1:
            raise ConfigError("grid needs at least one node")
        k = np.arange(n)
        return cls(
            n=n,
            nodes=np.exp(2j * np.pi * k / n),
            weights=np.full(n, 1.0 / n),
        )

    def midpoint_nodes(self) -> np.ndarray:
        """The grid rotated by half a step; never touches the base nodes."""
        k = np.arange(self.n)
        return np.exp(2j * np.pi * (k + 0.5) / self.n)


def transversality_values(h: Holomap, grid: BoundaryGrid) -> np.ndarray:
    """|<Dh(zeta_k), h(zeta_k)>| at every grid node."""
    hv = h.eval(grid.nodes)
    dv = h.deriv(grid.nodes)
    return np.abs(np.sum(dv * hv.conj(), axis=-1))


def transversality_margin(h: Holomap, grid: BoundaryGrid) -> float:
    """Min over the grid of |<Dh, h>|; positive margin certifies transversality."""
    return float(transversality_values(h, grid).min())


@dataclass(frozen=True)
class InjectivityReport:
    injective: bool
    min_distance: float
    witness_indices: tuple[int, int] | None
    witness_nodes: tuple[complex, complex] | None


def boundary_injectivity_check(
    h: Holomap, grid: BoundaryGrid, *, tol: Tolerances = DEFAULT_TOL
) -> InjectivityReport:
    """All distinct grid nodes must map to points farther apart than tol_inj.

    Returns the colliding pair as a witness when the check fails, e.g. the map
    z -> (z^2, 0) collides antipodal nodes (zeta, -zeta).
    """
    vals = h.eval(grid.nodes)  # (n, d)
    n = grid.n
    dist_sq = np.zeros((n, n))
    for i in range(h.dimension):
        col = vals[:, i]
        dist_sq += np.abs(col[:, None] - col[None, :]) ** 2
    np.fill_diagonal(dist_sq, np.inf)
    flat = int(dist_sq.argmin())
    a, b = divmod(flat, n)
    min_dist = float(np.sqrt(dist_sq[a, b])) if n > 1 else np.inf
    if n > 1 and min_dist <= tol.tol_inj:
        return InjectivityReport(
            injective=False,
            min_distance=min_dist,
            witness_indices=(a, b),
            witness_nodes=(complex(grid.nodes[a]), complex(grid.nodes[b])),
        )
    return InjectivityReport(
        injective=True, min_distance=min_dist, witness_indices=None, witness_nodes=None
    )
