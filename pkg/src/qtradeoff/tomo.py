"""Shot-noise simulation of the four-qubit tomography experiment.

81 local Pauli settings (X/Y/Z per qubit) with 16 outcomes each; reconstruction
by unbiased linear inversion of Pauli expectations followed by projection of
the spectrum onto the probability simplex.  Every setting draws from its own
RNG stream derived from (seed, setting index), so results do not depend on
evaluation order.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import measures, states
from .linalg import DensityMatrix, herm_eig
from .measures import MeasureReport, fidelity

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Columns are the +1 and -1 eigenvectors (outcome 0 and 1).
EIGVECS = {
    "X": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "Y": np.array([[1, 1], [1j, -1j]], dtype=complex) / np.sqrt(2),
    "Z": np.eye(2, dtype=complex),
}

SETTINGS = tuple("".join(t) for t in itertools.product("XYZ", repeat=4))
N_QUBITS = 4
N_OUT = 16

PATH_QUBITS = (1, 3)  # A-path and B-path in the fixed basis convention


@dataclass(frozen=True)
class NoiseParams:
    visibility: float = 1.0
    depolarizing: float = 0.0

    def __post_init__(self):
        if not (0.0 <= self.visibility <= 1.0 and 0.0 <= self.depolarizing <= 1.0):
            raise ValueError("noise parameters must lie in [0,1]")


def visibility_from_contrast(ratio):
    """Off-diagonal scale v = (r-1)/(r+1) for an interferometer contrast r:1."""
    if ratio < 1.0:
        raise ValueError("contrast ratio must be at least 1")
    return (ratio - 1.0) / (ratio + 1.0)


@dataclass(frozen=True)
class TomographyRecord:
    setting: str
    counts: np.ndarray  # ints for sampled data, frequencies in exact mode
    total_shots: int  # 0 marks exact (infinite-shot) frequencies
    seed: int
    noise: NoiseParams


@dataclass(frozen=True)
class ReconstructionResult:
    rho_hat: DensityMatrix
    fidelity_to_target: float
    measures: MeasureReport


def _setting_unitary():
    cache = {}

    def get(setting):
        if setting not in cache:
            w = EIGVECS[setting[0]]
            for ch in setting[1:]:
                w = np.kron(w, EIGVECS[ch])
            cache[setting] = w
        return cache[setting]

    return get


_setting_w = _setting_unitary()


def born_probabilities(rho: DensityMatrix, setting):
    """Probabilities of the 16 joint outcomes in the setting's product eigenbasis."""
    if rho.dims != (2, 2, 2, 2):
        raise ValueError("tomography expects a four-qubit state")
    if len(setting) != 4 or any(ch not in "XYZ" for ch in setting):
        raise ValueError(f"invalid setting {setting!r}")
    w = _setting_w(setting)
    p = np.real(np.sum(np.conj(w) * (rho.mat @ w), axis=0))
    p = np.clip(p, 0.0, None)
    return p / np.sum(p)


def sample_counts(probs, shots, seed, poisson=False):
    """Seed-deterministic multinomial draw (or independent Poisson per outcome)."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    p = np.asarray(probs, dtype=float)
    rng = np.random.default_rng(seed)
    if poisson:
        return rng.poisson(p * shots)
    return rng.multinomial(shots, p / np.sum(p))


def _depolarize_qubit(mat, i, p):
    t = mat.reshape([2] * 8)
    row = list(range(4))
    col = list(range(4, 8))
    col_tr = list(col)
    col_tr[i] = row[i]
    traced = np.einsum(t, row + col_tr)  # 3-qubit marginal, qubit i traced out
    out_row = [a for j, a in enumerate(row) if j != i]
    out_col = [a for j, a in enumerate(col) if j != i]
    eye = np.eye(2, dtype=complex) / 2.0
    full = np.einsum(traced, out_row + out_col, eye, [row[i], col[i]], row + col)
    return (1.0 - p) * mat + p * full.reshape(16, 16)


def apply_noise(rho: DensityMatrix, noise: NoiseParams) -> DensityMatrix:
    """Interferometer model: path-qubit dephasing scaled by the visibility,
    plus optional isotropic per-qubit depolarizing."""
    if rho.dims != (2, 2, 2, 2):
        raise ValueError("noise model expects a four-qubit state")
    m = rho.mat.copy()
    v = noise.visibility
    if v < 1.0:
        idx = np.arange(16)
        for qubit in PATH_QUBITS:
            bit = (idx >> (3 - qubit)) & 1
            differ = bit[:, None] != bit[None, :]
            m = np.where(differ, v * m, m)
    if noise.depolarizing > 0.0:
        for qubit in range(N_QUBITS):
            m = _depolarize_qubit(m, qubit, noise.depolarizing)
    return DensityMatrix(m, (2, 2, 2, 2))


def simulate_records(rho, shots, seed, noise=NoiseParams(), poisson=False):
    """One full tomography run: 81 settings sampled from the noisy state."""
    noisy = apply_noise(rho, noise)
    records = []
    for idx, setting in enumerate(SETTINGS):
        probs = born_probabilities(noisy, setting)
        counts = sample_counts(probs, shots, (seed, idx), poisson=poisson)
        records.append(TomographyRecord(setting, counts, shots, seed, noise))
    return records


def exact_records(rho, noise=NoiseParams()):
    """Infinite-shot limit: exact Born probabilities as frequencies."""
    noisy = apply_noise(rho, noise)
    return [
        TomographyRecord(s, born_probabilities(noisy, s), 0, 0, noise) for s in SETTINGS
    ]


def _build_inversion_tables():
    # Sign of outcome z for each qubit subset mask (bit 3-i selects qubit i).
    z = np.arange(N_OUT)
    signs = np.ones((N_OUT, 16), dtype=float)
    for mask in range(16):
        s = np.ones(N_OUT)
        for i in range(N_QUBITS):
            if (mask >> (3 - i)) & 1:
                s = s * (1.0 - 2.0 * ((z >> (3 - i)) & 1))
        signs[:, mask] = s
    # Pauli index (base 4 over I,X,Y,Z) estimated by (setting, subset).
    code = {"I": 0, "X": 1, "Y": 2, "Z": 3}
    pauli_idx = np.zeros((len(SETTINGS), 16), dtype=int)
    for s_i, setting in enumerate(SETTINGS):
        for mask in range(16):
            k = 0
            for i in range(N_QUBITS):
                letter = setting[i] if (mask >> (3 - i)) & 1 else "I"
                k = 4 * k + code[letter]
            pauli_idx[s_i, mask] = k
    mult = np.zeros(256)
    np.add.at(mult, pauli_idx.ravel(), 1.0)
    # Flattened 4-qubit Pauli matrices, for rho = (1/16) sum_k <P_k> P_k.
    flat = np.zeros((256, 256), dtype=complex)
    letters = "IXYZ"
    for k in range(256):
        digits = [(k >> (2 * (3 - i))) & 3 for i in range(4)]
        m = PAULI[letters[digits[0]]]
        for d in digits[1:]:
            m = np.kron(m, PAULI[letters[d]])
        flat[k] = m.ravel()
    return signs, pauli_idx, mult, flat


_SIGNS, _PAULI_IDX, _PAULI_MULT, _PAULI_FLAT = _build_inversion_tables()


def _frequencies(record: TomographyRecord):
    c = np.asarray(record.counts, dtype=float)
    total = np.sum(c)
    return c / total if total > 0 else c


def pauli_expectations(records):
    """Averaged Pauli-string expectation estimates plus the maximum spread
    between the individual per-setting estimates of the same string."""
    order = {s: i for i, s in enumerate(SETTINGS)}
    freqs = np.zeros((len(SETTINGS), N_OUT))
    seen = set()
    for rec in records:
        if rec.setting not in order:
            raise ValueError(f"unknown setting {rec.setting!r}")
        freqs[order[rec.setting]] = _frequencies(rec)
        seen.add(rec.setting)
    if len(seen) != len(SETTINGS):
        raise ValueError(f"incomplete tomography: {len(seen)} of {len(SETTINGS)} settings")
    corr = freqs @ _SIGNS  # per setting, per qubit-subset correlator
    sums = np.zeros(256)
    np.add.at(sums, _PAULI_IDX.ravel(), corr.ravel())
    exps = sums / _PAULI_MULT
    lo = np.full(256, np.inf)
    hi = np.full(256, -np.inf)
    np.minimum.at(lo, _PAULI_IDX.ravel(), corr.ravel())
    np.maximum.at(hi, _PAULI_IDX.ravel(), corr.ravel())
    return exps, float(np.max(hi - lo))


def project_to_simplex(w):
    """Euclidean projection of a real vector onto the probability simplex:
    subtract a uniform shift and clip so the result sums to 1."""
    u = np.sort(w)[::-1]
    css = np.cumsum(u)
    j = np.arange(1, len(w) + 1)
    rho = np.max(np.nonzero(u + (1.0 - css) / j > 0)[0]) + 1
    shift = (1.0 - css[rho - 1]) / rho
    return np.clip(w + shift, 0.0, None)


def physical_spectrum(w):
    """Noise-adaptive projection of a linear-inversion spectrum onto the
    probability simplex.

    The most negative eigenvalue of the unconstrained estimate is a pure noise
    sample, so its magnitude sets the noise floor; eigenvalues at or below the
    floor are zeroed and the remainder renormalized.  On exact data the floor
    is at machine precision and the spectrum passes through unchanged.
    """
    w = np.asarray(w, dtype=float)
    floor = max(0.0, -np.min(w))
    kept = np.where(w > floor, w, 0.0)
    total = np.sum(kept)
    if total <= 0.0:
        return np.full_like(w, 1.0 / len(w))
    return kept / total


COEFF_THRESHOLD_SIGMAS = 3.0


def reconstruct(records, target: DensityMatrix = None) -> ReconstructionResult:
    """Linear inversion from the complete 81-setting record set, with sparse
    denoising of the Pauli coefficients, then projection to a physical
    spectrum, measures, and fidelity to the target.

    Denoising: a coefficient estimated from m settings of N shots has standard
    error sqrt((1-e^2)/(N m)); estimates within 3 standard errors of zero are
    zeroed.  Most true coefficients of the target families are exactly zero,
    so this removes the bulk of the shot-noise power.  Exact (infinite-shot)
    records are never thresholded, keeping noiseless inversion exact.
    """
    exps, _ = pauli_expectations(records)
    assert abs(exps[0] - 1.0) < 1e-9  # identity expectation from any setting
    shots = {int(r.total_shots) for r in records}
    if len(shots) == 1 and (n_shots := shots.pop()) > 0:
        sigma = np.sqrt(np.clip(1.0 - exps**2, 0.0, None) / (n_shots * _PAULI_MULT))
        small = np.abs(exps) < COEFF_THRESHOLD_SIGMAS * sigma
        small[0] = False
        exps = np.where(small, 0.0, exps)
    rho_lin = (exps @ _PAULI_FLAT).reshape(16, 16) / 16.0
    rho_lin = (rho_lin + rho_lin.conj().T) / 2.0
    dec = herm_eig(rho_lin)
    w = physical_spectrum(dec.eigenvalues)
    v = dec.eigenvectors
    rho_hat = DensityMatrix((v * w) @ v.conj().T, (2, 2, 2, 2))
    rep = measures.report(rho_hat, cut=(0, 1))
    fid = fidelity(rho_hat, target) if target is not None else float("nan")
    return ReconstructionResult(rho_hat, fid, rep)


DEFAULT_ANGLES = (
    0.0,
    np.pi / 16,
    np.pi / 8,
    3 * np.pi / 16,
    np.pi / 4,
    9 * np.pi / 32,
    11 * np.pi / 32,
    3 * np.pi / 8,
    13 * np.pi / 32,
    7 * np.pi / 16,
    15 * np.pi / 32,
    np.pi / 2,
)


def target_state(theta) -> DensityMatrix:
    """Ideal prepared state for angle theta: spdc -> dephase -> time-bin mix
    with p = cos^2(theta)."""
    params = states.StateParams.from_theta(theta)
    return states.timebin_mix(states.dephase(states.spdc_state(theta)), params.p)


@dataclass(frozen=True)
class ExperimentRun:
    params: states.StateParams
    target: DensityMatrix
    records: list
    result: ReconstructionResult


def run_experiment(theta, shots=10000, seed=0, noise=NoiseParams(), exact=False,
                   poisson=False) -> ExperimentRun:
    """Full pipeline for one angle: prepare, add noise, measure, reconstruct."""
    params = states.StateParams.from_theta(theta)
    target = target_state(theta)
    if exact:
        records = exact_records(target, noise)
    else:
        records = simulate_records(target, shots, seed, noise, poisson=poisson)
    result = reconstruct(records, target)
    return ExperimentRun(params, target, records, result)


@dataclass(frozen=True)
class BootstrapResult:
    i_values: np.ndarray
    e_values: np.ndarray
    i_err: float
    e_err: float


def bootstrap_measures(records, n_resamples=200, seed=0) -> BootstrapResult:
    """Nonparametric bootstrap of (I, E) over resampled counts."""
    sampled = [r for r in records if r.total_shots > 0]
    if len(sampled) != len(records):
        return BootstrapResult(np.zeros(0), np.zeros(0), 0.0, 0.0)
    i_vals = np.zeros(n_resamples)
    e_vals = np.zeros(n_resamples)
    for b in range(n_resamples):
        resampled = []
        for idx, rec in enumerate(records):
            freq = _frequencies(rec)
            counts = sample_counts(freq, rec.total_shots, (seed, 7_000_000 + b, idx))
            resampled.append(
                TomographyRecord(rec.setting, counts, rec.total_shots, rec.seed, rec.noise)
            )
        res = reconstruct(resampled)
        i_vals[b] = res.measures.mutual_information
        e_vals[b] = res.measures.concurrence
    return BootstrapResult(i_vals, e_vals, float(np.std(i_vals)), float(np.std(e_vals)))


def records_to_text(records, theta, p):
    """Line-oriented serialization: one header line, then 81 count lines."""
    if not records:
        raise ValueError("no records to serialize")
    r0 = records[0]
    head = (
        f"# theta={float(theta)!r} p={float(p)!r} shots={int(r0.total_shots)} "
        f"seed={int(r0.seed)} visibility={float(r0.noise.visibility)!r} "
        f"depolarizing={float(r0.noise.depolarizing)!r}"
    )
    lines = [head]
    for rec in records:
        counts = " ".join(str(int(c)) for c in rec.counts)
        lines.append(f"{rec.setting} {counts}")
    return "\n".join(lines) + "\n"


def records_from_text(text):
    """Inverse of records_to_text; returns (records, header dict)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("#"):
        raise ValueError("missing header line")
    meta = {}
    for tok in lines[0].lstrip("#").split():
        key, val = tok.split("=", 1)
        meta[key] = float(val) if key in ("theta", "p", "visibility", "depolarizing") else int(val)
    noise = NoiseParams(meta["visibility"], meta["depolarizing"])
    records = []
    for ln in lines[1:]:
        parts = ln.split()
        counts = np.array([int(x) for x in parts[1:]], dtype=int)
        if len(counts) != N_OUT:
            raise ValueError(f"expected 16 counts, got {len(counts)}")
        records.append(TomographyRecord(parts[0], counts, meta["shots"], meta["seed"], noise))
    return records, meta
