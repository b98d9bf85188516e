"""Bounded-extension probe along an embedded disk.

Given a target multiplier F, polynomial in the ambient ball coordinates, and a
holomap h, the probe restricts F to growing samples of the image curve and
tracks the multiplier norm of the restricted data. Exact norms are
nondecreasing under nested samples and never exceed the ambient norm of any
extension, so a supplied cap certifies against the computed sequence.

Samples are deterministic: a golden-angle spiral in the disk with radii cycling
through 1 - 2^-(k mod 8 + 2), pushed forward through h. Prefixes of one fixed
sequence keep the samples nested across the schedule.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt
from typing import Sequence

import numpy as np

from .config import DEFAULT_TOL, Tolerances
from .errors import ConfigError, DimensionMismatchError, InjectivityError, TransversalityError
from .holomap import BoundaryGrid, Holomap, boundary_injectivity_check, transversality_margin
from .kernel import BallPoint
from .pick import PickReport, multiplier_norm

# golden-angle fraction of the circle, (3 - sqrt(5)) / 2
GOLDEN_FRACTION = (3.0 - sqrt(5.0)) / 2.0


def spiral_samples(n: int) -> np.ndarray:
    """First n points of the fixed golden-angle spiral in the disk."""
    if n < 1:
        raise ConfigError("need at least one sample point")
    k = np.arange(n)
    radii = 1.0 - 2.0 ** (-((k % 8) + 2).astype(float))
    theta = 2.0 * np.pi * ((k * GOLDEN_FRACTION) % 1.0)
    return radii * np.exp(1j * theta)


@dataclass(frozen=True)
class AmbientPolynomial:
    """Polynomial in the ambient ball coordinates w_1..w_d.

    terms: ((powers, coeff), ...) with powers a d-tuple of nonnegative ints.
    """

    terms: tuple[tuple[tuple[int, ...], complex], ...]

    def __post_init__(self):
        if not self.terms:
            raise ConfigError("ambient polynomial needs at least one term")
        d = len(self.terms[0][0])
        for powers, _ in self.terms:
            if len(powers) != d:
                raise DimensionMismatchError("ambient polynomial terms of mixed arity")
            if any(p < 0 for p in powers):
                raise ConfigError("ambient polynomial powers must be nonnegative")

    @property
    def dimension(self) -> int:
        return len(self.terms[0][0])

    def eval(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at points of shape (n, d)."""
        pts = np.asarray(points, dtype=complex)
        if pts.ndim != 2 or pts.shape[1] != self.dimension:
            raise DimensionMismatchError(
                f"expected points of shape (n, {self.dimension}), got {pts.shape}"
            )
        out = np.zeros(pts.shape[0], dtype=complex)
        for powers, coeff in self.terms:
            term = np.full(pts.shape[0], complex(coeff))
            for i, p in enumerate(powers):
                if p:
                    term = term * pts[:, i] ** p
            out += term
        return out

    @classmethod
    def from_payload(cls, payload: Sequence[dict]) -> "AmbientPolynomial":
        try:
            terms = tuple(
                (tuple(int(p) for p in t["powers"]), complex(t["coeff"][0], t["coeff"][1]))
                for t in payload
            )
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ConfigError(f"malformed ambient polynomial payload: {exc}") from exc
        return cls(terms)


@dataclass(frozen=True)
class ProbeReport:
    schedule: tuple[int, ...]
    reports: tuple[PickReport, ...]
    nondecreasing: bool
    max_decrease: float
    cap: float | None
    cap_respected: bool | None


def extension_probe(
    h: Holomap,
    target: AmbientPolynomial,
    schedule: Sequence[int],
    *,
    cap: float | None = None,
    cap_tol: float = 1e-8,
    precondition_grid: int = 512,
    tol: Tolerances = DEFAULT_TOL,
) -> ProbeReport:
    """Norms of the target restricted to nested spiral samples of the image.

    Preconditions: the map is boundary injective on the check grid and has a
    positive transversality margin there; violations raise, since the probe's
    meaning depends on the image being an embedded disk.
    """
    schedule = tuple(int(n) for n in schedule)
    if not schedule or any(n < 1 for n in schedule):
        raise ConfigError("schedule must be nonempty with positive entries")
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ConfigError("schedule must be strictly increasing")
    if target.dimension != h.dimension:
        raise DimensionMismatchError(
            f"target arity {target.dimension} does not match map dimension {h.dimension}"
        )

    grid = BoundaryGrid.uniform(precondition_grid)
    inj = boundary_injectivity_check(h, grid, tol=tol)
    if not inj.injective:
        raise InjectivityError(
            f"map fails boundary injectivity at nodes {inj.witness_nodes}"
        )
    margin = transversality_margin(h, grid)
    if margin <= tol.tol_transversal:
        raise TransversalityError(f"transversality margin {margin!r} too small")

    z = spiral_samples(schedule[-1])
    images = h.eval(z)
    values = target.eval(images)
    nodes = [BallPoint(images[i], tol=tol) for i in range(len(z))]

    reports = []
    for n in schedule:
        reports.append(multiplier_norm(nodes[:n], values[:n], tol=tol))

    norms = [r.norm for r in reports]
    decreases = [max(0.0, a - b) for a, b in zip(norms, norms[1:])]
    max_decrease = max(decreases) if decreases else 0.0
    nondecreasing = max_decrease <= tol.tol_eig
    cap_respected = None
    if cap is not None:
        cap_respected = all(t <= cap + cap_tol for t in norms)
    return ProbeReport(
        schedule=schedule,
        reports=tuple(reports),
        nondecreasing=nondecreasing,
        max_decrease=max_decrease,
        cap=cap,
        cap_respected=cap_respected,
    )
