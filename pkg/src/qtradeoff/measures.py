"""Correlation and entanglement quantifiers.

All entropies are in natural log (nats).  Concurrence follows the spin-flip
construction with sigma = -|1><0| + |0><1|; the eigenvalues of the spin-flipped
product are obtained from the similar Hermitian form
sqrt(rho) (sigma x sigma) rho* (sigma x sigma) sqrt(rho).
"""

from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix, clamp_spectrum, herm_eig, kron, partial_trace, spectral_fn

SPIN_FLIP = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)


def spectrum_tuple(values):
    """Validate a descending 4-tuple of probabilities summing to 1."""
    lam = np.asarray(values, dtype=float)
    if lam.shape != (4,):
        raise ValueError("spectrum tuple must have exactly four entries")
    if np.min(lam) < 0 or abs(np.sum(lam) - 1.0) > 1e-12:
        raise ValueError("spectrum tuple must be nonnegative and sum to 1")
    if np.any(np.diff(lam) > 1e-12):
        raise ValueError("spectrum tuple must be in decreasing order")
    return lam


@dataclass(frozen=True)
class MeasureReport:
    mutual_information: float
    concurrence: float
    entropy_A: float
    entropy_B: float
    entropy_AB: float


def _safe_sqrt(x):
    return np.sqrt(x) if x > 0 else 0.0


def shannon_entropy(probs):
    """-sum p ln p in nats, with 0 ln 0 = 0."""
    p = clamp_spectrum(np.asarray(probs, dtype=float))
    if abs(np.sum(p) - 1.0) > 1e-9:
        raise ValueError("probabilities must sum to 1 within 1e-9")
    nz = p[p > 0]
    return float(-np.sum(nz * np.log(nz)))


def von_neumann_entropy(rho: DensityMatrix):
    w = clamp_spectrum(herm_eig(rho.mat).eigenvalues)
    nz = w[w > 0]
    return float(-np.sum(nz * np.log(nz)))


def mutual_information(rho: DensityMatrix, cut):
    """S(rho_A) + S(rho_B) - S(rho) across the bipartition given by the factor
    indices in `cut` (side A); the complement is side B."""
    side_a = tuple(sorted(set(int(i) for i in cut)))
    side_b = tuple(i for i in range(len(rho.dims)) if i not in side_a)
    if not side_a or not side_b:
        raise ValueError("cut must split the factors into two nonempty groups")
    s_a = von_neumann_entropy(partial_trace(rho, side_a))
    s_b = von_neumann_entropy(partial_trace(rho, side_b))
    s_ab = von_neumann_entropy(rho)
    return s_a + s_b - s_ab


def spin_flip_eigenvalues(rho_a: DensityMatrix):
    """Eigenvalues mu_i of rho (s x s) rho* (s x s), descending, clamped at 0."""
    if rho_a.dims != (2, 2):
        raise ValueError("concurrence is defined for two-qubit states")
    ss = kron(SPIN_FLIP, SPIN_FLIP)
    sq = spectral_fn(rho_a.mat, _safe_sqrt)
    herm = sq @ ss @ rho_a.mat.conj() @ ss @ sq
    mu = clamp_spectrum(herm_eig(herm).eigenvalues)
    # Float noise in the product leaves spurious eigenvalues ~1e-17 whose
    # square roots would pollute the concurrence; floor them relative to max.
    mu[mu < np.max(mu) * 1e-14] = 0.0
    return mu


def concurrence(rho_a: DensityMatrix):
    """Wootters concurrence max{0, 2 max_i sqrt(mu_i) - sum_i sqrt(mu_i)}."""
    r = np.sqrt(spin_flip_eigenvalues(rho_a))
    return float(max(0.0, 2.0 * np.max(r) - np.sum(r)))


def _h2(p):
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log(p) - (1 - p) * np.log(1 - p))


def closed_form_I(p, q):
    """Mutual information of the two-parameter classical-classical family."""
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError("p and q must lie in [0,1]")
    return _h2(p) + _h2(q)


def closed_form_E(p, q):
    """Concurrence of the reduced A state of the two-parameter family:
    max{0, (1-2q~)(1-p) - 2p sqrt(q~(1-q~))} with q~ = min{q, 1-q}."""
    if not (0.0 <= p <= 1.0 and 0.0 <= q <= 1.0):
        raise ValueError("p and q must lie in [0,1]")
    qt = min(q, 1.0 - q)
    return float(max(0.0, (1 - 2 * qt) * (1 - p) - 2 * p * np.sqrt(qt * (1 - qt))))


def fidelity(rho: DensityMatrix, sigma: DensityMatrix):
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2."""
    if rho.dims != sigma.dims:
        raise ValueError("fidelity requires states with identical dims")
    sq = spectral_fn(rho.mat, _safe_sqrt)
    inner = sq @ sigma.mat @ sq
    w = clamp_spectrum(herm_eig(inner).eigenvalues, floor=-1e-8)
    w[w < np.max(w) * 1e-14] = 0.0  # spurious near-null values, see concurrence
    f = float(np.sum(np.sqrt(w)) ** 2)
    if f > 1.0 + 1e-9:
        raise ValueError(f"fidelity {f} exceeds 1 beyond tolerance")
    return min(f, 1.0)


def k_function(lam):
    """k(lambda) = lambda_1 - lambda_3 - 2 sqrt(lambda_2 lambda_4)."""
    lam = spectrum_tuple(lam)
    return float(lam[0] - lam[2] - 2.0 * np.sqrt(lam[1] * lam[3]))


def report(rho: DensityMatrix, cut) -> MeasureReport:
    """Mutual information across `cut` plus the concurrence of the reduced
    state on side A (which must consist of two qubit factors)."""
    side_a = tuple(sorted(set(int(i) for i in cut)))
    side_b = tuple(i for i in range(len(rho.dims)) if i not in side_a)
    s_a = von_neumann_entropy(partial_trace(rho, side_a))
    s_b = von_neumann_entropy(partial_trace(rho, side_b))
    s_ab = von_neumann_entropy(rho)
    e = concurrence(partial_trace(rho, side_a))
    return MeasureReport(
        mutual_information=s_a + s_b - s_ab,
        concurrence=e,
        entropy_A=s_a,
        entropy_B=s_b,
        entropy_AB=s_ab,
    )
