"""Numerical tolerances, bundled so every operation can be tuned per call.

All thresholds live in one frozen dataclass with the defaults used throughout
the test suite. Operations accept an optional ``tol=`` keyword; configs may
override individual fields by name via :meth:`Tolerances.with_overrides`.
"""

from __future__ import annotations

from dataclasses import dataclass, fields, replace

from .errors import ConfigError


@dataclass(frozen=True)
class Tolerances:
    # strict ball membership: |z|^2 < 1 - eps_ball
    eps_ball: float = 1e-12
    # nodes closer than this are duplicates
    tol_node: float = 1e-10
    # PSD floor: min eigenvalue >= -tol_psd * trace
    tol_psd: float = 1e-10
    # Hermitian deviation allowed on input matrices
    tol_herm: float = 1e-12
    # eigenvalue accuracy assumed from the dense solver
    tol_eig: float = 1e-10
    # pointwise evaluation agreement (closed forms vs computation)
    tol_eval: float = 1e-14
    # Cholesky reconstruction: ||L L* - (K + jitter I)||_max <= tol_chol * trace
    tol_chol: float = 1e-12
    # escalating diagonal jitter, relative to trace
    jitter_ladder: tuple[float, ...] = (0.0, 1e-14, 1e-12, 1e-10)
    # transversality margin must exceed this where operators require it
    tol_transversal: float = 1e-6
    # boundary images closer than this count as an injectivity collision
    tol_inj: float = 1e-8
    # boundary-normalized maps must satisfy |h|^2 >= 1 - tol_proper on the circle
    tol_proper: float = 1e-10
    # eigenvalues below this are treated as kernel modes
    tol_kernel: float = 1e-6
    # samples of distinct varieties must be farther apart than this
    tol_sep: float = 0.05
    # interior containment check grid
    interior_radii: int = 64
    interior_angles: int = 128

    def with_overrides(self, overrides: dict[str, float]) -> "Tolerances":
        """Return a copy with the named fields replaced.

        Unknown names raise ConfigError so typos in config files fail loudly.
        """
        known = {f.name for f in fields(self)}
        bad = sorted(set(overrides) - known)
        if bad:
            raise ConfigError(f"unknown tolerance name(s): {', '.join(bad)}")
        clean = {}
        for name, value in overrides.items():
            if name == "jitter_ladder":
                clean[name] = tuple(float(v) for v in value)
            elif name in ("interior_radii", "interior_angles"):
                clean[name] = int(value)
            else:
                clean[name] = float(value)
        return replace(self, **clean)


DEFAULT_TOL = Tolerances()
