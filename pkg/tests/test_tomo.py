import numpy as np
import pytest

from qtradeoff import states, tomo
from qtradeoff.linalg import DensityMatrix
from qtradeoff.measures import closed_form_E, closed_form_I
from qtradeoff.tomo import (
    NoiseParams,
    SETTINGS,
    apply_noise,
    bootstrap_measures,
    born_probabilities,
    exact_records,
    pauli_expectations,
    physical_spectrum,
    project_to_simplex,
    reconstruct,
    records_from_text,
    records_to_text,
    run_experiment,
    sample_counts,
    simulate_records,
    target_state,
    visibility_from_contrast,
)


def test_settings_enumeration():
    assert len(SETTINGS) == 81
    assert SETTINGS[0] == "XXXX"
    assert SETTINGS[-1] == "ZZZZ"
    assert len(set(SETTINGS)) == 81


def test_visibility_from_contrast():
    assert abs(visibility_from_contrast(50.0) - 49.0 / 51.0) < 1e-12
    assert visibility_from_contrast(1.0) == 0.0
    with pytest.raises(ValueError):
        visibility_from_contrast(0.5)


def test_born_probabilities_z_basis():
    rho = target_state(0.0)  # |00> (x) |01> in the fixed ordering
    p = born_probabilities(rho, "ZZZZ")
    expected = np.zeros(16)
    expected[0b0001] = 1.0
    assert np.max(np.abs(p - expected)) < 1e-12


def test_born_probabilities_pure_state_oracle():
    # Cross-check against direct projector overlaps for a pure product state.
    psi = np.zeros(16, dtype=complex)
    psi[0b0001] = 1.0
    rho = DensityMatrix(np.outer(psi, psi.conj()), (2, 2, 2, 2))
    for setting in ("XXXX", "XYZX", "ZZZZ"):
        p = born_probabilities(rho, setting)
        w = tomo._setting_w(setting)
        oracle = np.abs(w.conj().T @ psi) ** 2
        assert np.max(np.abs(p - oracle)) < 1e-12
        assert abs(np.sum(p) - 1.0) < 1e-12


def test_born_probabilities_rejects_bad_setting():
    rho = target_state(0.3)
    with pytest.raises(ValueError):
        born_probabilities(rho, "XXQX")
    with pytest.raises(ValueError):
        born_probabilities(DensityMatrix(np.eye(4) / 4, (2, 2)), "XX")


def test_sample_counts_deterministic():
    p = np.array([0.1, 0.2, 0.3, 0.4])
    a = sample_counts(p, 1000, (5, 0))
    b = sample_counts(p, 1000, (5, 0))
    c = sample_counts(p, 1000, (6, 0))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert np.sum(a) == 1000


def test_sample_counts_converges():
    p = np.array([0.05, 0.15, 0.35, 0.45])
    counts = sample_counts(p, 10**6, 9)
    # 5-sigma band on each multinomial frequency
    err = np.abs(counts / 10**6 - p)
    assert np.all(err < 5 * np.sqrt(p * (1 - p) / 10**6))


def test_sample_counts_poisson_mode():
    p = np.array([0.5, 0.5])
    counts = sample_counts(p, 10**5, 3, poisson=True)
    assert abs(np.sum(counts) - 10**5) < 5 * np.sqrt(10**5)


def test_apply_noise_identity():
    rho = target_state(0.4)
    out = apply_noise(rho, NoiseParams())
    assert np.max(np.abs(out.mat - rho.mat)) < 1e-12


def test_apply_noise_dephasing_scales_path_coherences():
    rho = target_state(np.pi / 4)
    v = 0.8
    out = apply_noise(rho, NoiseParams(visibility=v))
    idx = np.arange(16)
    path_bits = np.stack([(idx >> 2) & 1, idx & 1])
    same = np.all(path_bits[:, :, None] == path_bits[:, None, :], axis=0)
    assert np.max(np.abs(out.mat[same] - rho.mat[same])) < 1e-12
    # Coherences between path states differing on exactly one path qubit scale by v.
    one_diff = np.sum(path_bits[:, :, None] != path_bits[:, None, :], axis=0) == 1
    assert np.max(np.abs(out.mat[one_diff] - v * rho.mat[one_diff])) < 1e-12


def test_apply_noise_full_depolarizing_fixed_point():
    rho = target_state(0.7)
    out = apply_noise(rho, NoiseParams(depolarizing=1.0))
    assert np.max(np.abs(out.mat - np.eye(16) / 16.0)) < 1e-12


def test_noise_params_validation():
    with pytest.raises(ValueError):
        NoiseParams(visibility=1.5)
    with pytest.raises(ValueError):
        NoiseParams(depolarizing=-0.1)


def test_pauli_expectations_exact_consistency():
    rho = target_state(np.pi / 8)
    exps, spread = pauli_expectations(exact_records(rho))
    assert abs(exps[0] - 1.0) < 1e-12
    # On exact data every setting estimating the same Pauli string agrees.
    assert spread < 1e-10
    # Oracle: direct trace against the Pauli matrices for a few strings.
    for k in (0b00000011, 0b01010101, 0b11111111):
        p_mat = tomo._PAULI_FLAT[k].reshape(16, 16)
        assert abs(exps[k] - np.trace(rho.mat @ p_mat).real) < 1e-10


def test_pauli_expectations_rejects_incomplete():
    rho = target_state(0.5)
    with pytest.raises(ValueError):
        pauli_expectations(exact_records(rho)[:-1])


def test_exact_reconstruction_is_faithful():
    for theta in (0.0, np.pi / 8, np.pi / 4, np.pi / 2):
        run = run_experiment(theta, exact=True)
        assert run.result.fidelity_to_target >= 1.0 - 1e-9
        assert abs(run.result.measures.mutual_information
                   - closed_form_I(run.params.p, run.params.q)) < 1e-9
        assert abs(run.result.measures.concurrence
                   - closed_form_E(run.params.p, run.params.q)) < 1e-9


def test_sampled_reconstruction_converges_with_shots():
    theta = np.pi / 4
    target = target_state(theta)
    errs = []
    for shots in (10**3, 10**4, 10**5):
        run = run_experiment(theta, shots=shots, seed=17)
        errs.append(1.0 - run.result.fidelity_to_target)
    assert errs[0] > errs[-1]
    assert errs[-1] < 5e-3


def test_sampled_reconstruction_deterministic():
    a = run_experiment(0.9, shots=2000, seed=4)
    b = run_experiment(0.9, shots=2000, seed=4)
    assert np.array_equal(a.records[40].counts, b.records[40].counts)
    assert a.result.fidelity_to_target == b.result.fidelity_to_target


def test_simulate_records_per_setting_streams():
    # Record streams keyed by (seed, setting index): reordering the settings
    # does not change the counts drawn for any individual setting.
    rho = target_state(1.0)
    recs = simulate_records(rho, 500, 11)
    assert all(r.setting == s for r, s in zip(recs, SETTINGS))
    idx = 23
    probs = born_probabilities(rho, SETTINGS[idx])
    direct = sample_counts(probs, 500, (11, idx))
    assert np.array_equal(recs[idx].counts, direct)


def test_noise_lowers_fidelity_monotonically():
    theta = np.pi / 4
    meds = []
    for v in (1.0, 0.98, 0.96):
        fids = [
            run_experiment(theta, shots=10000, seed=s, noise=NoiseParams(visibility=v))
            .result.fidelity_to_target
            for s in range(10)
        ]
        meds.append(float(np.median(fids)))
    assert meds[0] > meds[1] > meds[2]
    assert meds[2] > 0.93


def test_project_to_simplex_examples():
    out = project_to_simplex(np.array([0.6, 0.6]))
    assert np.allclose(out, [0.5, 0.5], atol=1e-12)
    out = project_to_simplex(np.array([1.2, -0.2]))
    assert np.allclose(out, [1.0, 0.0], atol=1e-12)
    w = np.random.default_rng(61).normal(size=16)
    out = project_to_simplex(w)
    assert abs(np.sum(out) - 1.0) < 1e-12
    assert np.all(out >= 0.0)


def test_physical_spectrum_examples():
    # No negative entries: passes through unchanged.
    w = np.array([0.7, 0.2, 0.1, 0.0])
    assert np.allclose(physical_spectrum(w), w, atol=1e-12)
    # Negative floor removes sub-floor weights and renormalizes the rest.
    w = np.array([0.8, 0.25, 0.005, -0.01])
    out = physical_spectrum(w)
    assert out[2] == 0.0 and out[3] == 0.0
    assert abs(np.sum(out) - 1.0) < 1e-12
    assert np.allclose(out[:2], np.array([0.8, 0.25]) / 1.05, atol=1e-12)


def test_reconstruction_spectrum_is_clean():
    run = run_experiment(np.pi / 4, shots=10000, seed=2)
    w = np.linalg.eigvalsh(run.result.rho_hat.mat)
    assert np.min(w) > -1e-12
    assert abs(np.sum(w) - 1.0) < 1e-10


def test_bootstrap_errors_shrink_with_shots():
    theta = 7 * np.pi / 16  # both I and E nonzero here
    errs = []
    for shots in (10**3, 10**4):
        run = run_experiment(theta, shots=shots, seed=19)
        boot = bootstrap_measures(run.records, n_resamples=40, seed=19)
        errs.append((boot.i_err, boot.e_err))
    assert errs[1][0] < errs[0][0]
    assert errs[1][1] < errs[0][1]


def test_bootstrap_skips_exact_records():
    run = run_experiment(0.5, exact=True)
    boot = bootstrap_measures(run.records)
    assert boot.i_err == 0.0 and boot.e_err == 0.0
    assert len(boot.i_values) == 0


def test_serialization_round_trip():
    run = run_experiment(np.pi / 16, shots=3000, seed=8,
                         noise=NoiseParams(visibility=0.96))
    text = records_to_text(run.records, float(np.pi / 16), run.params.p)
    back, meta = records_from_text(text)
    assert meta["shots"] == 3000 and meta["seed"] == 8
    assert abs(meta["theta"] - np.pi / 16) < 1e-15
    for a, b in zip(run.records, back):
        assert a.setting == b.setting
        assert np.array_equal(a.counts, b.counts)
    assert records_to_text(back, meta["theta"], meta["p"]) == text


def test_serialization_rejects_garbage():
    with pytest.raises(ValueError):
        records_from_text("no header\n")
    with pytest.raises(ValueError):
        records_from_text("# theta=0.0 p=1.0 shots=10 seed=0 visibility=1.0 "
                          "depolarizing=0.0\nXXXX 1 2 3\n")


def test_target_state_matches_family():
    for theta in (0.2, 0.9, 1.4):
        p = float(np.cos(theta) ** 2)
        direct = states.as_four_qubits(states.cc_family(p, 1.0 - p))
        assert np.max(np.abs(target_state(theta).mat - direct.mat)) < 1e-12
