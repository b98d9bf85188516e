"""Multiplier norms of finite interpolation data, separators, union bounds.

The multiplier norm of data (z_i, v_i) is the smallest t >= 0 such that the
Pick matrix [(t^2 - v_i conj(v_j)) k(z_i, z_j)] is PSD. Writing K = L L* and
D = diag(v), that threshold is t = ||L^{-1} D L||_2: the PSD condition reads
t^2 K >= D K D*, and D K D* = (D L)(D L)*, so the critical t^2 is the largest
eigenvalue of L^{-1} (DL)(DL)* L^{-*} = X X* with X = L^{-1} D L. One
triangular solve and one singular value computation, no explicit squaring.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import solve_triangular, svdvals

from .config import DEFAULT_TOL, Tolerances
from .errors import (
    ConfigError,
    DimensionMismatchError,
    PsdViolationError,
    SeparatorOverlapError,
)
from .kernel import BallPoint, compensated_dot, gram, min_eig_hermitian, whiten


@dataclass(frozen=True)
class PickProblem:
    """Validated interpolation data: distinct nodes, one value per node."""

    nodes: tuple[BallPoint, ...]
    values: tuple[complex, ...]

    def __post_init__(self):
        if len(self.nodes) != len(self.values):
            raise DimensionMismatchError(
                f"{len(self.nodes)} nodes but {len(self.values)} values"
            )
        if not self.nodes:
            raise ConfigError("empty interpolation problem")
        d = self.nodes[0].dimension
        for p in self.nodes[1:]:
            if p.dimension != d:
                raise DimensionMismatchError("nodes of mixed dimension")
        # distinctness (and hence feasibility) is certified by gram() later;
        # conflicting values at a shared node are impossible once nodes are
        # distinct, which is the infeasibility convention used throughout.


@dataclass(frozen=True)
class PickReport:
    """Result of a multiplier-norm computation.

    min_eig_at_norm is the smallest eigenvalue of the Pick matrix evaluated at
    the computed norm; it certifies feasibility (>= -tol_psd * problem scale)
    and sits at the PSD boundary, so it is also close to zero from above.
    """

    norm: float
    min_eig_at_norm: float
    whitening_jitter: float


def multiplier_norm(
    nodes: Sequence[BallPoint],
    values: Sequence[complex],
    *,
    tol: Tolerances = DEFAULT_TOL,
) -> PickReport:
    """Smallest t with [(t^2 - v_i conj(v_j)) k(z_i, z_j)] PSD.

    Notes
    -----
    The norm always dominates max |v_i| (diagonal of the Pick matrix), scales
    homogeneously in the values, and is monotone under adding nodes; the test
    suite pins all three.
    """
    problem = PickProblem(tuple(nodes), tuple(complex(v) for v in values))
    g = gram(problem.nodes, tol=tol)
    wf = whiten(g, tol=tol)
    v = np.asarray(problem.values, dtype=complex)
    x = solve_triangular(wf.matrix, v[:, None] * wf.matrix, lower=True)
    t = float(svdvals(x)[0]) if x.size else 0.0
    pick_matrix = (t * t - np.outer(v, v.conj())) * g.entries
    low = min_eig_hermitian(pick_matrix, tol=tol)
    scale = max(1.0, t * t * g.trace)
    if low < -tol.tol_psd * scale:
        raise PsdViolationError(
            f"Pick matrix at the computed norm has min eigenvalue {low!r}"
        )
    return PickReport(norm=t, min_eig_at_norm=low, whitening_jitter=wf.jitter_applied)


def _check_no_overlap(
    a_nodes: Sequence[BallPoint], b_nodes: Sequence[BallPoint], tol: Tolerances
) -> None:
    for i, p in enumerate(a_nodes):
        for j, q in enumerate(b_nodes):
            diff = [x - y for x, y in zip(p.coords, q.coords)]
            dist = compensated_dot(diff, diff).real ** 0.5
            if dist <= tol.tol_node:
                raise SeparatorOverlapError(
                    f"node {i} of the first sample coincides with node {j} "
                    f"of the second (distance {dist!r}); the separator data "
                    "1-on-A, 0-on-B is infeasible"
                )


def separator_bound(
    a_nodes: Sequence[BallPoint],
    b_nodes: Sequence[BallPoint],
    *,
    tol: Tolerances = DEFAULT_TOL,
) -> float:
    """Multiplier norm of the data: 1 on a_nodes, 0 on b_nodes.

    This is the cost of a multiplier separating the first sample from the
    second. Invariant under simultaneous unitary rotation of all nodes, since
    the Gram depends on inner products only.
    """
    a_nodes = tuple(a_nodes)
    b_nodes = tuple(b_nodes)
    if not a_nodes and not b_nodes:
        raise ConfigError("separator of two empty samples")
    _check_no_overlap(a_nodes, b_nodes, tol)
    values = [1.0] * len(a_nodes) + [0.0] * len(b_nodes)
    return multiplier_norm(a_nodes + b_nodes, values, tol=tol).norm


@dataclass(frozen=True)
class UnionNormReport:
    """t_union vs the separator combination bound t_a s_a + t_b s_b."""

    t_union: float
    t_a: float
    t_b: float
    s_a: float
    s_b: float
    bound: float
    slack: float
    holds: bool


def union_norm_check(
    a_nodes: Sequence[BallPoint],
    a_values: Sequence[complex],
    b_nodes: Sequence[BallPoint],
    b_values: Sequence[complex],
    *,
    tol: Tolerances = DEFAULT_TOL,
) -> UnionNormReport:
    """Compare the union norm with the separator combination bound.

    If f_a interpolates the A-data with norm t_a and phi_a is a separator
    (1 on A, 0 on B) of norm s_a, then f_a phi_a + f_b phi_b interpolates the
    union data, so t_union <= t_a s_a + t_b s_b up to tol_psd. An empty side
    degenerates gracefully: t_union equals the other side's norm.
    """
    a_nodes, b_nodes = tuple(a_nodes), tuple(b_nodes)
    a_values = tuple(complex(v) for v in a_values)
    b_values = tuple(complex(v) for v in b_values)
    if len(a_nodes) != len(a_values) or len(b_nodes) != len(b_values):
        raise DimensionMismatchError("value list lengths do not match node lists")
    if not a_nodes and not b_nodes:
        raise ConfigError("union of two empty problems")
    _check_no_overlap(a_nodes, b_nodes, tol)

    t_union = multiplier_norm(
        a_nodes + b_nodes, a_values + b_values, tol=tol
    ).norm
    t_a = multiplier_norm(a_nodes, a_values, tol=tol).norm if a_nodes else 0.0
    t_b = multiplier_norm(b_nodes, b_values, tol=tol).norm if b_nodes else 0.0
    s_a = separator_bound(a_nodes, b_nodes, tol=tol) if a_nodes else 0.0
    s_b = separator_bound(b_nodes, a_nodes, tol=tol) if b_nodes else 0.0
    bound = t_a * s_a + t_b * s_b
    slack = bound - t_union
    return UnionNormReport(
        t_union=t_union,
        t_a=t_a,
        t_b=t_b,
        s_a=s_a,
        s_b=s_b,
        bound=bound,
        slack=slack,
        holds=t_union <= bound + tol.tol_psd,
    )
