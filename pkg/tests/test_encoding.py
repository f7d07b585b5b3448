import numpy as np
import pytest

from stabdec import codes, encoding, pauli, spectral


def perturbed_basis(name="five_qubit", lam=0.05, seed=0, kind="gue"):
    code = codes.builtin_code(name)
    if kind == "gue":
        pert = spectral.sample_gue_perturbation(np.random.default_rng(seed), code.n)
    else:
        pert = spectral.uniform_xz_perturbation(code.n)
    res = spectral.lowest_eigenpairs(spectral.build_hamiltonian(code, pert, lam), 3)
    return code, encoding.fix_gauge(res, code)


def test_gauge_basis_orthonormal():
    _, basis = perturbed_basis(lam=0.2, seed=4)
    assert abs(np.vdot(basis.omega0, basis.omega0) - 1) < 1e-12
    assert abs(np.vdot(basis.omega1, basis.omega1) - 1) < 1e-12
    assert abs(np.vdot(basis.omega0, basis.omega1)) < 1e-12


def test_gauge_alpha_is_unitary_with_declared_form():
    _, basis = perturbed_basis(lam=0.1, seed=2)
    a = basis.alpha
    assert np.allclose(a @ a.conj().T, np.eye(2), atol=1e-12)
    t0, t1, t2, t3 = basis.t
    form = np.array([
        [np.cos(t1), np.exp(1j * t2) * np.sin(t1)],
        [np.exp(1j * t3) * np.sin(t1), -np.exp(1j * (t2 + t3)) * np.cos(t1)],
    ])
    assert t0 == 0.0
    assert np.allclose(a, form, atol=1e-10)


def test_gauge_maximizes_logical_expectations():
    code, basis = perturbed_basis(lam=0.1, seed=6)
    z00 = np.vdot(basis.omega0, pauli.apply_pauli(code.logical_z, basis.omega0))
    x01 = np.vdot(basis.omega0, pauli.apply_pauli(code.logical_x, basis.omega1))
    assert z00.real > 0.99 and abs(z00.imag) < 1e-10
    assert x01.real > 0.99 and abs(x01.imag) < 1e-10


def test_gauge_recovers_codewords_at_lambda_zero():
    code, basis = perturbed_basis(lam=0.0, seed=1)
    space = codes.codespace(code)
    assert abs(abs(np.vdot(basis.omega0, space.codeword0)) - 1) < 1e-10
    assert abs(abs(np.vdot(basis.omega1, space.codeword1)) - 1) < 1e-10


def test_sample_angles_ranges_and_determinism():
    a = encoding.sample_logical_angles(np.random.default_rng(9), 100)
    b = encoding.sample_logical_angles(np.random.default_rng(9), 100)
    assert a == b
    for theta, phi in a:
        assert 0 <= theta <= np.pi
        assert 0 <= phi < 2 * np.pi


def test_encode_normalized_state():
    _, basis = perturbed_basis(lam=0.05)
    psi = encoding.encode(basis, 0.4, 1.1)
    assert abs(np.vdot(psi, psi) - 1) < 1e-12
    expected = np.cos(0.4) * basis.omega0 + np.exp(1.1j) * np.sin(0.4) * basis.omega1
    assert np.allclose(psi, expected)


def test_target_expectations_formulas():
    theta, phi = 0.7, 2.3
    assert np.isclose(encoding.target_expectation("X", theta, phi),
                      np.sin(2 * theta) * np.cos(phi))
    assert np.isclose(encoding.target_expectation("Y", theta, phi),
                      np.sin(2 * theta) * np.sin(phi))
    assert np.isclose(encoding.target_expectation("Z", theta, phi),
                      np.cos(2 * theta))
    th = np.array([0.1, 0.7])
    ph = np.array([0.2, 2.3])
    vec = encoding.target_expectations("X", th, ph)
    assert np.allclose(vec, np.sin(2 * th) * np.cos(ph))


def test_target_matches_codespace_expectation():
    # on the unperturbed codespace the logical operators reproduce the targets
    code = codes.builtin_code("five_qubit")
    space = codes.codespace(code)
    basis = encoding.CodewordBasis(space.codeword0, space.codeword1,
                                   np.eye(2, dtype=complex), (0.0, 0.0, 0.0, 0.0))
    rng = np.random.default_rng(3)
    for theta, phi in encoding.sample_logical_angles(rng, 10):
        psi = encoding.encode(basis, theta, phi)
        for q, op in (("X", code.logical_x), ("Y", code.logical_y), ("Z", code.logical_z)):
            val = np.vdot(psi, pauli.apply_pauli(op, psi)).real
            assert np.isclose(val, encoding.target_expectation(q, theta, phi), atol=1e-10)


def test_noise_model_counts_and_weights():
    code = codes.builtin_code("five_qubit")
    noise = encoding.make_noise_model(code, 1)
    assert len(noise.errors) == 16
    assert np.isclose(noise.weights.sum(), 1.0)
    assert not noise.exceeds_distance
    noise2 = encoding.make_noise_model(code, 2)
    assert noise2.exceeds_distance


def test_noiseless_model_is_identity_only():
    code = codes.builtin_code("five_qubit")
    noise = encoding.make_noise_model(code, 0)
    assert len(noise.errors) == 1
    assert noise.errors[0].weight == 0


def test_apply_noise_records_error_id():
    code = codes.builtin_code("five_qubit")
    noise = encoding.make_noise_model(code, 1)
    rng = np.random.default_rng(0)
    sample = encoding.LogicalSample(0.3, 1.0)
    out = encoding.apply_noise(rng, noise, sample)
    assert 0 <= out.error_id < len(noise.errors)
    assert out.theta == sample.theta and out.phi == sample.phi
