"""The monogamy bound between internal concurrence and external mutual information.

zeta_inv is the closed-form inverse of the tradeoff curve; zeta recovers the
curve by bisection.  oracle_zeta is an independent brute-force check: an
exhaustive scan of the sorted probability 4-simplex maximizing
k(lambda) = lambda_1 - lambda_3 - 2 sqrt(lambda_2 lambda_4) at fixed Shannon
entropy.  All functions broadcast over numpy arrays.
"""

from dataclasses import dataclass

import numpy as np

LN2SQRT3 = float(np.log(2.0 * np.sqrt(3.0)))
TWO_LN2 = float(2.0 * np.log(2.0))


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(x > 0, x * np.log(np.where(x > 0, x, 1.0)), 0.0)
    return out


def mu_aux(e):
    """mu(e) = -e ln(e/2) / 2, extended by continuity with mu(0) = 0."""
    e = np.asarray(e, dtype=float)
    if np.any(e < -1e-12):
        raise ValueError("mu_aux requires a nonnegative argument")
    e = np.maximum(e, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(e > 0, -e * np.log(np.maximum(e, 1e-300) / 2.0) / 2.0, 0.0)
    return out if out.ndim else float(out)


def kappa_aux(e):
    """kappa(e) = (sqrt(4 - 3 e^2) - 1) / 3 on |e| <= 2/sqrt(3)."""
    e = np.asarray(e, dtype=float)
    if np.any(np.abs(e) > 2.0 / np.sqrt(3.0) + 1e-12):
        raise ValueError("kappa_aux argument outside |e| <= 2/sqrt(3)")
    out = (np.sqrt(np.maximum(4.0 - 3.0 * e * e, 0.0)) - 1.0) / 3.0
    return out if out.ndim else float(out)


def zeta_inv_branches(e):
    """The two candidate maxima whose pointwise max is zeta^{-1}(e)."""
    e = np.asarray(e, dtype=float)
    b1 = mu_aux(1.0 + e) + mu_aux(1.0 - e) + (1.0 - e) * np.log(3.0) / 2.0
    k = np.asarray(kappa_aux(e))
    b2 = mu_aux(1.0 + e - k) + mu_aux(1.0 - e - k) - _xlogx(k)
    return np.asarray(b1), np.asarray(b2)


def zeta_inv(e):
    """Closed-form inverse bound zeta^{-1}(e) on e in [0, 1]."""
    e = np.asarray(e, dtype=float)
    if np.any(e < -1e-12) or np.any(e > 1.0 + 1e-12):
        raise ValueError("zeta_inv requires e in [0,1]")
    e = np.clip(e, 0.0, 1.0)
    b1, b2 = zeta_inv_branches(e)
    out = np.maximum(b1, b2)
    return out if out.ndim else float(out)


def zeta(c):
    """The bound curve: 0 for c >= ln(2 sqrt(3)); otherwise the unique e in
    [0,1] with zeta_inv(e) = c, found by bisection to 1e-12 in e."""
    c = np.asarray(c, dtype=float)
    if np.any(c < -1e-9) or np.any(c > TWO_LN2 + 1e-9):
        raise ValueError("zeta requires c in [0, 2 ln 2]")
    cc = np.clip(c, 0.0, TWO_LN2)
    lo = np.zeros_like(cc)
    hi = np.ones_like(cc)
    for _ in range(48):  # 2^-48 < 1e-12
        mid = (lo + hi) / 2.0
        f = np.asarray(zeta_inv(mid))
        bigger = f > cc  # zeta_inv decreasing: value too large means e too small
        lo = np.where(bigger, mid, lo)
        hi = np.where(bigger, hi, mid)
    out = np.where(cc >= LN2SQRT3, 0.0, (lo + hi) / 2.0)
    return out if out.ndim else float(out)


def simplex_grid(resolution):
    """All descending integer partitions (l1>=l2>=l3>=l4>=0) of `resolution`,
    divided by `resolution`: exact coverage of the ordered 4-simplex."""
    if resolution < 1:
        raise ValueError("resolution must be at least 1")
    n = int(resolution)
    rows = []
    for l1 in range((n + 3) // 4, n + 1):
        r1 = n - l1
        for l2 in range((r1 + 2) // 3, min(l1, r1) + 1):
            r2 = r1 - l2
            for l3 in range((r2 + 1) // 2, min(l2, r2) + 1):
                rows.append((l1, l2, l3, r2 - l3))
    return np.array(rows, dtype=float) / n


_GRID_CACHE = {}


def grid_h_k(resolution):
    """(lambda grid, h values, k values) for the given resolution, cached."""
    if resolution not in _GRID_CACHE:
        lam = simplex_grid(resolution)
        h = -np.sum(_xlogx(lam), axis=1)
        k = lam[:, 0] - lam[:, 2] - 2.0 * np.sqrt(lam[:, 1] * lam[:, 3])
        _GRID_CACHE[resolution] = (lam, h, k)
    return _GRID_CACHE[resolution]


def oracle_zeta(c, resolution=200, band=0.01):
    """Brute-force zeta: max over grid tuples with |h(lambda) - c| <= band of
    max{0, k(lambda)}."""
    if resolution < 100:
        raise ValueError("oracle resolution must be at least 100")
    if band <= 0:
        raise ValueError("band must be positive")
    _, h, k = grid_h_k(resolution)
    mask = np.abs(h - c) <= band
    if not np.any(mask):
        raise ValueError(f"no grid tuple within band {band} of entropy {c}")
    return float(max(0.0, np.max(k[mask])))


def chi(e, resolution=400, band=0.01):
    """Constrained entropy maximum at fixed k(lambda) = e.

    For e in [0,1] this is the closed form zeta_inv; for e in [-1/2, 0) the
    closed form is not available and the value is served by the grid oracle.
    """
    e = float(e)
    if e < -0.5 - 1e-12 or e > 1.0 + 1e-12:
        raise ValueError("chi requires e in [-1/2, 1]")
    if e >= 0.0:
        return float(zeta_inv(e))
    _, h, k = grid_h_k(resolution)
    mask = np.abs(k - e) <= band
    if not np.any(mask):
        raise ValueError(f"no grid tuple within band {band} of k = {e}")
    return float(np.max(h[mask]))


@dataclass(frozen=True)
class RegionVerdict:
    point: tuple
    inside_separable_region: bool
    margin: float


def region_check(points, tolerance=1e-9):
    """Verdict per (c, e) point: inside iff e <= zeta(c) + tolerance.

    c values outside [0, 2 ln 2] (e.g. from noisy estimates) are clamped into
    the domain before evaluating zeta.
    """
    pts = [(float(c), float(e)) for c, e in points]
    if not all(np.isfinite(c) and np.isfinite(e) for c, e in pts):
        raise ValueError("points must be finite")
    cs = np.clip(np.array([c for c, _ in pts]), 0.0, TWO_LN2)
    zs = np.asarray(zeta(cs))
    out = []
    for (c, e), z in zip(pts, np.atleast_1d(zs)):
        margin = float(z - e)
        out.append(RegionVerdict((c, e), margin >= -tolerance, margin))
    return out


@dataclass(frozen=True)
class BoundCurve:
    """Sampled (c, e) pairs of the bound with provenance."""

    samples: tuple
    source: str  # "closed_form" or "oracle"
    grid_resolution: int = 0


def closed_form_curve(n_samples=200) -> BoundCurve:
    cs = np.linspace(0.0, TWO_LN2, n_samples)
    es = np.asarray(zeta(cs))
    return BoundCurve(tuple(zip(cs.tolist(), es.tolist())), "closed_form")


def oracle_curve(n_samples=50, resolution=200, band=0.01) -> BoundCurve:
    cs = np.linspace(0.0, TWO_LN2, n_samples)
    es = [oracle_zeta(c, resolution, band) for c in cs]
    return BoundCurve(tuple(zip(cs.tolist(), es)), "oracle", resolution)


def validate_bound_curve(curve: BoundCurve, tolerance=1e-9):
    """Named invariant checks on a sampled curve; list of (name, ok) pairs."""
    cs = np.array([c for c, _ in curve.samples])
    es = np.array([e for _, e in curve.samples])
    tol = tolerance if curve.source == "closed_form" else 0.05
    checks = [
        ("curve_domain", bool(np.all(cs >= -tol) and np.all(cs <= TWO_LN2 + tol))),
        ("curve_range", bool(np.all(es >= -tol) and np.all(es <= 1.0 + tol))),
        ("curve_non_increasing", bool(np.all(np.diff(es) <= tol))),
        ("curve_vanishes_past_ln2sqrt3", bool(np.all(es[cs >= LN2SQRT3] <= tol))),
    ]
    return checks
