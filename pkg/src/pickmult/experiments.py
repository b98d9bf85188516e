"""Experiment pipelines shared by the HTTP service and the CLI.

Each pipeline takes a validated request model and returns a RunResponse:
a structured report (config echo, metrics, named assertions, pass/fail
status) plus rendered CSV payloads keyed by filename. Pipelines never touch
the filesystem; the CLI decides where bytes land.

CSV rendering is deterministic: floats via repr-faithful %.17g, newline
terminated, LF only. Reruns with the same config and seed produce identical
bytes, which downstream diffing relies on.
"""

from __future__ import annotations

import time
from typing import Any, Callable, Iterable, Sequence

import numpy as np

from . import schemas
from .config import DEFAULT_TOL, Tolerances
from .errors import ConfigError, DimensionMismatchError
from .holomap import (
    BoundaryGrid,
    Holomap,
    boundary_injectivity_check,
    transversality_margin,
    transversality_values,
)
from .kernel import BallPoint
from .operator_r import (
    MonomialMap,
    c_m_oracle,
    m_kernel_matrix,
    r_matrix,
    semigroup_gaps,
    spectrum_report,
    toeplitz_symbol,
)
from .pick import multiplier_norm, separator_bound
from .probe import AmbientPolynomial, extension_probe


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _fmt_complex(c: complex) -> str:
    sign = "+" if c.imag >= 0 else "-"
    return f"{_fmt(c.real)}{sign}{_fmt(abs(c.imag))}j"


def _fmt_point(coords: Sequence[complex]) -> str:
    return ";".join(_fmt_complex(c) for c in coords)


def _csv(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _pair(v) -> complex:
    return complex(v[0], v[1])


def _point(v, tol: Tolerances) -> BallPoint:
    return BallPoint([_pair(c) for c in v], tol=tol)


def _cx_json(c: complex) -> list[float]:
    return [float(c.real), float(c.imag)]


def _assert(
    name: str,
    passed: bool,
    *,
    tolerance: float | None = None,
    observed: float | str | None = None,
    detail: str = "",
) -> schemas.AssertionResult:
    return schemas.AssertionResult(
        name=name, passed=bool(passed), tolerance=tolerance, observed=observed,
        detail=detail,
    )


def _finish(
    kind: str,
    req: schemas.BaseRequest,
    metrics: dict[str, Any],
    assertions: list[schemas.AssertionResult],
    files: dict[str, str],
    t0: float,
) -> schemas.RunResponse:
    report = schemas.ExperimentReport(
        kind=kind,
        seed=req.seed,
        config=req.model_dump(mode="json"),
        metrics=metrics,
        assertions=assertions,
        status="pass" if all(a.passed for a in assertions) else "fail",
        duration_seconds=time.perf_counter() - t0,
    )
    return schemas.RunResponse(report=report, files=files)


def run_pick_norm(req: schemas.PickNormRequest) -> schemas.RunResponse:
    t0 = time.perf_counter()
    tol = DEFAULT_TOL.with_overrides(req.tolerances)
    nodes = [_point(p, tol) for p in req.nodes]
    values = [_pair(v) for v in req.values]
    if len(nodes) != len(values):
        raise ConfigError(
            f"{len(nodes)} nodes but {len(values)} values; counts must match"
        )
    rep = multiplier_norm(nodes, values, tol=tol)
    vmax = max(abs(v) for v in values)

    assertions = [
        _assert(
            "norm_dominates_data",
            rep.norm >= vmax - tol.tol_eig,
            tolerance=tol.tol_eig,
            observed=rep.norm - vmax,
            detail="multiplier norm is at least the largest |value|",
        ),
        _assert(
            "pick_matrix_psd_at_norm",
            True,
            tolerance=tol.tol_psd,
            observed=rep.min_eig_at_norm,
            detail="certified during the norm computation",
        ),
    ]
    if req.expected_norm is not None:
        err = abs(rep.norm - req.expected_norm)
        assertions.append(
            _assert(
                "matches_expected_norm",
                err <= req.expected_tol,
                tolerance=req.expected_tol,
                observed=err,
            )
        )

    metrics = {
        "norm": rep.norm,
        "min_eig_at_norm": rep.min_eig_at_norm,
        "whitening_jitter": rep.whitening_jitter,
        "node_count": len(nodes),
        "dimension": nodes[0].dimension,
        "max_abs_value": vmax,
    }
    rows = [
        (str(i), _fmt_point(nd.coords), _fmt(v.real), _fmt(v.imag))
        for i, (nd, v) in enumerate(zip(nodes, values))
    ]
    files = {"pick_norm.csv": _csv(("index", "node", "value_re", "value_im"), rows)}
    return _finish("pick-norm", req, metrics, assertions, files, t0)


def run_holomap_check(req: schemas.HolomapCheckRequest) -> schemas.RunResponse:
    t0 = time.perf_counter()
    tol = DEFAULT_TOL.with_overrides(req.tolerances)
    # validate=False: containment and properness become reported assertions
    # here rather than config rejections
    h = Holomap.from_payload(req.holomap.model_dump(), validate=False, tol=tol)
    grid = BoundaryGrid.uniform(req.grid_size)

    interior_worst = h.check_interior(tol=tol, strict=False)
    tvals = transversality_values(h, grid)
    margin = float(tvals.min())
    inj = boundary_injectivity_check(h, grid, tol=tol)

    assertions = [
        _assert(
            "interior_containment",
            interior_worst < 1.0,
            tolerance=None,
            observed=interior_worst,
            detail="max |h|^2 over the interior check grid must stay below 1",
        ),
        _assert(
            "transversality_margin",
            margin > tol.tol_transversal,
            tolerance=tol.tol_transversal,
            observed=margin,
            detail="min |<Dh, h>| over the boundary grid",
        ),
        _assert(
            "boundary_injectivity",
            inj.injective,
            tolerance=tol.tol_inj,
            observed=None if np.isinf(inj.min_distance) else inj.min_distance,
            detail=(
                ""
                if inj.injective
                else f"collision witness at nodes {inj.witness_nodes}"
            ),
        ),
    ]
    boundary_low = None
    if h.boundary_normalized:
        boundary_low = h.check_properness(tol=tol, strict=False)
        assertions.append(
            _assert(
                "boundary_properness",
                boundary_low >= 1.0 - tol.tol_proper,
                tolerance=tol.tol_proper,
                observed=boundary_low,
                detail="min |h|^2 on the unit circle for a normalized map",
            )
        )

    metrics = {
        "dimension": h.dimension,
        "degrees": [len(c) - 1 for c in h.components],
        "boundary_normalized": h.boundary_normalized,
        "grid_size": grid.n,
        "interior_max_norm_sq": interior_worst,
        "transversality_margin": margin,
        "injectivity_min_distance": (
            None if np.isinf(inj.min_distance) else inj.min_distance
        ),
        "boundary_min_norm_sq": boundary_low,
    }
    rows = [
        (
            str(k),
            _fmt(grid.nodes[k].real),
            _fmt(grid.nodes[k].imag),
            _fmt(tvals[k]),
        )
        for k in range(grid.n)
    ]
    files = {
        "transversality.csv": _csv(
            ("index", "node_re", "node_im", "abs_pairing"), rows
        )
    }
    return _finish("holomap-check", req, metrics, assertions, files, t0)


def _eigen_mode_assignment(entries: np.ndarray) -> tuple[np.ndarray, dict[int, float]]:
    """Ascending eigenvalues plus a greedy eigenvalue-per-mode table.

    Each eigenvector claims the still-unclaimed mode where it carries the most
    mass, in ascending eigenvalue order. With near-degenerate kernel pairs the
    per-mode reading is only indicative; the joint gap mass is authoritative.
    """
    w, v = np.linalg.eigh(entries)
    unused = set(range(entries.shape[0]))
    by_mode: dict[int, float] = {}
    for i in range(len(w)):
        prob = np.abs(v[:, i]) ** 2
        for m in np.argsort(-prob, kind="stable"):
            if int(m) in unused:
                by_mode[int(m)] = float(w[i])
                unused.discard(int(m))
                break
    return w, by_mode


def run_operator_r(req: schemas.OperatorRRequest) -> schemas.RunResponse:
    t0 = time.perf_counter()
    tol = DEFAULT_TOL.with_overrides(req.tolerances)
    if (req.monomial is None) == (req.holomap is None):
        raise ConfigError("give exactly one of 'monomial' or 'holomap'")

    mono = None
    gaps: list[int] | None = None
    if req.monomial is not None:
        mono = MonomialMap(req.monomial.p, req.monomial.q, req.monomial.alpha)
        h = mono.to_holomap(tol=tol)
        gaps = semigroup_gaps(mono.p, mono.q, req.modes)
    else:
        h = Holomap.from_payload(req.holomap.model_dump(), validate=True, tol=tol)

    grid = BoundaryGrid.uniform(req.grid_size)
    rm = r_matrix(h, grid, req.modes, tol=tol)
    spectrum = spectrum_report(h, grid, req.modes, gap_modes=gaps, rmat=rm, tol=tol)
    eigvals, eig_by_mode = _eigen_mode_assignment(rm.entries)

    mk_cache: dict[int, Any] = {}

    def mk_at(n: int):
        if n not in mk_cache:
            mk_cache[n] = m_kernel_matrix(h, BoundaryGrid.uniform(n), tol=tol)
        return mk_cache[n]

    mk = mk_at(req.grid_size)

    diag = np.real(np.diag(rm.entries))
    off = rm.entries - np.diag(np.diag(rm.entries))
    offdiag_max = float(np.abs(off).max()) if rm.entries.shape[0] > 1 else 0.0

    assertions = [
        _assert(
            "r_matrix_psd",
            True,
            tolerance=tol.tol_psd,
            observed=float(eigvals[0]),
            detail="certified during assembly; observed min eigenvalue",
        )
    ]
    oracle: list[float] | None = None
    if mono is not None:
        oracle = [c_m_oracle(mono, m) for m in range(req.modes + 1)]
        oracle_err = float(np.abs(diag - np.asarray(oracle)).max())
        gap_in_range = [g for g in gaps if g <= req.modes]
        min_gap_mass = min(spectrum.gap_mass) if spectrum.gap_mass else 1.0
        assertions.extend(
            [
                _assert(
                    "offdiagonal_decay",
                    offdiag_max <= req.offdiag_tol,
                    tolerance=req.offdiag_tol,
                    observed=offdiag_max,
                    detail="monomial maps diagonalize in the monomial basis",
                ),
                _assert(
                    "diagonal_matches_oracle",
                    oracle_err <= req.oracle_tol,
                    tolerance=req.oracle_tol,
                    observed=oracle_err,
                    detail="recurrence oracle for the diagonal matrix elements",
                ),
                _assert(
                    "kernel_count_matches_gaps",
                    len(spectrum.kernel_indices) == len(gap_in_range),
                    observed=f"{len(spectrum.kernel_indices)} kernel / {len(gap_in_range)} gaps",
                    detail=f"gap modes {gap_in_range}",
                ),
                _assert(
                    "kernel_mass_on_gaps",
                    min_gap_mass >= req.concentration,
                    tolerance=req.concentration,
                    observed=min_gap_mass,
                    detail="joint mass of each kernel eigenvector on the gap set",
                ),
            ]
        )

    hs_table: list[tuple[int, Any]] = []
    if req.hs_grid_sizes:
        sizes = [int(n) for n in req.hs_grid_sizes]
        if sorted(set(sizes)) != sizes:
            raise ConfigError("hs_grid_sizes must be strictly increasing")
        hs_table = [(n, mk_at(n)) for n in sizes]
        hs_vals = [r.hs_sum for _, r in hs_table]
        rels = [
            abs(b - a) / abs(a) if a != 0.0 else abs(b - a)
            for a, b in zip(hs_vals, hs_vals[1:])
        ]
        assertions.append(
            _assert(
                "hs_sum_grid_stable",
                max(rels, default=0.0) <= req.hs_rel_tol,
                tolerance=req.hs_rel_tol,
                observed=max(rels, default=0.0),
                detail=f"relative change of hs_sum across grids {sizes}",
            )
        )

    metrics = {
        "grid_size": req.grid_size,
        "modes": req.modes,
        "trace": rm.trace,
        "min_eigenvalue": float(eigvals[0]),
        "max_eigenvalue": float(eigvals[-1]),
        "offdiagonal_max": offdiag_max,
        "kernel_count": len(spectrum.kernel_indices),
        "kernel_dominant_modes": list(spectrum.dominant_modes),
        "gap_modes": list(spectrum.gap_modes) if spectrum.gap_modes is not None else None,
        "gap_mass": list(spectrum.gap_mass),
        "min_invertible": spectrum.min_invertible,
        "symbol": toeplitz_symbol(mono) if mono is not None else None,
        "m_kernel": {
            "sup_abs": mk.sup_abs,
            "hs_sum": mk.hs_sum,
            "hs_norm": mk.hs_norm,
            "diag_agreement": mk.diag_agreement,
        },
        "hs_by_grid": {str(n): r.hs_sum for n, r in hs_table} or None,
    }

    header = ["mode", "diag", "eigenvalue_greedy", "oracle", "diag_abs_err"]
    rows = []
    for m in range(req.modes + 1):
        row = [str(m), _fmt(diag[m]), _fmt(eig_by_mode[m])]
        if oracle is not None:
            row.extend([_fmt(oracle[m]), _fmt(abs(diag[m] - oracle[m]))])
        else:
            row.extend(["", ""])
        rows.append(row)
    files = {"spectrum.csv": _csv(header, rows)}
    if hs_table:
        files["hs_refinement.csv"] = _csv(
            ("grid_size", "hs_sum", "hs_norm", "sup_abs", "diag_agreement"),
            [
                (str(n), _fmt(r.hs_sum), _fmt(r.hs_norm), _fmt(r.sup_abs), _fmt(r.diag_agreement))
                for n, r in hs_table
            ],
        )
    return _finish("operator-r", req, metrics, assertions, files, t0)


def run_extension_probe(req: schemas.ExtensionProbeRequest) -> schemas.RunResponse:
    t0 = time.perf_counter()
    tol = DEFAULT_TOL.with_overrides(req.tolerances)
    h = Holomap.from_payload(req.holomap.model_dump(), validate=True, tol=tol)
    target = AmbientPolynomial.from_payload([t.model_dump() for t in req.target])
    pr = extension_probe(
        h,
        target,
        req.schedule,
        cap=req.cap,
        cap_tol=req.cap_tol,
        precondition_grid=req.precondition_grid,
        tol=tol,
    )
    norms = [r.norm for r in pr.reports]

    assertions = [
        _assert(
            "norms_nondecreasing",
            pr.nondecreasing,
            tolerance=tol.tol_eig,
            observed=pr.max_decrease,
            detail="nested samples can only push the norm up",
        )
    ]
    if req.cap is not None:
        assertions.append(
            _assert(
                "cap_respected",
                bool(pr.cap_respected),
                tolerance=req.cap_tol,
                observed=max(norms),
                detail=f"every sampled norm stays at or below cap {req.cap}",
            )
        )

    metrics = {
        "schedule": list(pr.schedule),
        "norms": norms,
        "max_decrease": pr.max_decrease,
        "final_norm": norms[-1],
        "cap": req.cap,
        "whitening_jitters": [r.whitening_jitter for r in pr.reports],
    }
    rows = [
        (str(n), _fmt(r.norm), _fmt(r.min_eig_at_norm), _fmt(r.whitening_jitter))
        for n, r in zip(pr.schedule, pr.reports)
    ]
    files = {
        "extension_probe.csv": _csv(
            ("samples", "norm", "min_eig_at_norm", "whitening_jitter"), rows
        )
    }
    return _finish("extension-probe", req, metrics, assertions, files, t0)


def run_disjoint_union(req: schemas.DisjointUnionRequest) -> schemas.RunResponse:
    t0 = time.perf_counter()
    tol = DEFAULT_TOL.with_overrides(req.tolerances)
    groups = [[_point(p, tol) for p in g] for g in req.groups]
    if any(not g for g in groups):
        raise ConfigError("every group needs at least one node")
    dims = {p.dimension for g in groups for p in g}
    if len(dims) != 1:
        raise DimensionMismatchError(f"groups mix dimensions {sorted(dims)}")

    min_cross = np.inf
    for i in range(len(groups)):
        for j in range(i + 1, len(groups)):
            for a in groups[i]:
                for b in groups[j]:
                    d = np.linalg.norm(np.array(a.coords) - np.array(b.coords))
                    min_cross = min(min_cross, float(d))
    min_cross = None if np.isinf(min_cross) else min_cross

    separated = min_cross is None or min_cross > tol.tol_sep
    sep_assert = _assert(
        "groups_separated",
        separated,
        tolerance=tol.tol_sep,
        observed=min_cross,
        detail="min cross-group node distance; below this the bound is vacuous",
    )
    k = len(groups)
    header = ["run", "t_union", "bound", "slack", "holds"] + [
        f"t_{i + 1}" for i in range(k)
    ]
    if not separated:
        metrics = {
            "inconclusive": True,
            "min_cross_distance": min_cross,
            "groups": k,
            "runs": 0,
        }
        files = {"disjoint_union.csv": _csv(header, [])}
        return _finish("disjoint-union", req, metrics, [sep_assert], files, t0)

    flat = [p for g in groups for p in g]
    seps = []
    for i, g in enumerate(groups):
        others = [p for j, other in enumerate(groups) if j != i for p in other]
        seps.append(separator_bound(g, others, tol=tol) if others else 1.0)

    rng = np.random.default_rng(req.seed)
    rows = []
    holds_count = 0
    worst_violation = -np.inf
    for run in range(req.runs):
        values = []
        for g in groups:
            mag = np.sqrt(rng.uniform(size=len(g)))
            phase = rng.uniform(0.0, 2.0 * np.pi, size=len(g))
            values.append(mag * np.exp(1j * phase))
        t_parts = [
            multiplier_norm(g, v, tol=tol).norm for g, v in zip(groups, values)
        ]
        t_union = multiplier_norm(flat, np.concatenate(values), tol=tol).norm
        bound = sum(t * s for t, s in zip(t_parts, seps))
        violation = t_union - bound
        worst_violation = max(worst_violation, violation)
        holds = violation <= req.inequality_tol
        holds_count += holds
        rows.append(
            [
                str(run),
                _fmt(t_union),
                _fmt(bound),
                _fmt(bound - t_union),
                "1" if holds else "0",
            ]
            + [_fmt(t) for t in t_parts]
        )

    assertions = [
        sep_assert,
        _assert(
            "union_norm_bounded",
            holds_count == req.runs,
            tolerance=req.inequality_tol,
            observed=worst_violation,
            detail=f"{holds_count}/{req.runs} runs satisfy the union bound",
        ),
    ]
    metrics = {
        "inconclusive": False,
        "groups": k,
        "group_sizes": [len(g) for g in groups],
        "runs": req.runs,
        "holds_count": holds_count,
        "min_cross_distance": min_cross,
        "separators": seps,
        "worst_violation": worst_violation,
    }
    files = {"disjoint_union.csv": _csv(header, rows)}
    return _finish("disjoint-union", req, metrics, assertions, files, t0)


RunnerFn = Callable[[Any], schemas.RunResponse]

PIPELINES: dict[str, tuple[type[schemas.BaseRequest], RunnerFn]] = {
    "pick-norm": (schemas.PickNormRequest, run_pick_norm),
    "holomap-check": (schemas.HolomapCheckRequest, run_holomap_check),
    "operator-r": (schemas.OperatorRRequest, run_operator_r),
    "extension-probe": (schemas.ExtensionProbeRequest, run_extension_probe),
    "disjoint-union": (schemas.DisjointUnionRequest, run_disjoint_union),
}

KINDS = tuple(PIPELINES)


def run_experiment(kind: str, payload: dict) -> schemas.RunResponse:
    """Validate a raw payload for the given kind and run its pipeline.

    Shape errors surface as ConfigError so direct callers get the same
    contract the service exposes via 400s.
    """
    try:
        model_cls, fn = PIPELINES[kind]
    except KeyError:
        raise ConfigError(f"unknown experiment kind {kind!r}") from None
    try:
        req = model_cls.model_validate(payload)
    except Exception as exc:  # pydantic.ValidationError
        raise ConfigError(f"invalid {kind} config: {exc}") from exc
    return fn(req)
