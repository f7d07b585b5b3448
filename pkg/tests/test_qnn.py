import numpy as np
import pytest

from stabdec import codes, encoding, qnn, spectral
from tests.test_encoding import perturbed_basis


def random_model(n, depth, seed, topology="brickwork_conv"):
    m = qnn.build_circuit(n, depth, topology)
    rng = np.random.default_rng(seed)
    return m.with_params(rng.uniform(0, 2 * np.pi, m.n_params))


def dense_circuit_unitary(model):
    dim = 1 << model.n
    full = np.eye(dim, dtype=complex)
    for site, gate in zip(model.sites, qnn._gate_list(model)):
        q1, q2 = site.qubits
        emb = np.kron(np.kron(np.eye(1 << q1), gate), np.eye(1 << (model.n - q2 - 1)))
        full = emb @ full
    return full


def test_gate_unitarity():
    rng = np.random.default_rng(0)
    for _ in range(10):
        u = qnn.two_qubit_gate(rng.uniform(0, 2 * np.pi, 15))
        assert np.abs(u @ u.conj().T - np.eye(4)).max() < 1e-12


def test_gate_zero_angles_is_identity():
    assert np.allclose(qnn.two_qubit_gate(np.zeros(15)), np.eye(4))


def test_parameter_counts():
    m = qnn.build_circuit(5, 4)
    assert m.n_params == 255  # (4 * depth + 1) * 15 for n = 5
    assert m.n_groups == 17
    mt = qnn.build_circuit(5, 4, "trans_inv")
    assert mt.n_params == 75  # (depth + 1) * 15 with block sharing
    assert mt.n_groups == 5
    assert len(mt.sites) == len(m.sites)


def test_sites_are_valid_pairs():
    m = qnn.build_circuit(5, 3)
    for site in m.sites:
        q1, q2 = site.qubits
        assert 0 <= q1 < q2 < 5


@pytest.mark.parametrize("n,depth", [(2, 1), (3, 2), (3, 1)])
def test_forward_matches_dense_oracle(n, depth):
    model = random_model(n, depth, seed=n + depth)
    full = dense_circuit_unitary(model)
    z_out = np.kron(np.diag([1.0, -1.0]), np.eye(1 << (n - 1)))
    rng = np.random.default_rng(5)
    for _ in range(5):
        psi = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
        psi /= np.linalg.norm(psi)
        dense = np.real(psi.conj() @ full.conj().T @ z_out @ full @ psi)
        assert abs(qnn.forward(model, psi) - dense) < 1e-12


def test_gradient_fd_vs_analytic():
    code, basis = perturbed_basis(lam=0.05, seed=2)
    noise = encoding.make_noise_model(code, 1)
    rng = np.random.default_rng(4)
    samples = [encoding.LogicalSample(t, p)
               for t, p in encoding.sample_logical_angles(rng, 6)]
    model = random_model(5, 2, seed=7)
    g_fd = qnn.gradient(model, basis, samples, noise, mode="fd")
    g_an = qnn.gradient(model, basis, samples, noise, mode="analytic")
    assert np.abs(g_fd - g_an).max() < 1e-6


def test_gradient_trans_inv_shares_parameters():
    code, basis = perturbed_basis(lam=0.05, seed=2)
    noise = encoding.make_noise_model(code, 1)
    rng = np.random.default_rng(4)
    samples = [encoding.LogicalSample(t, p)
               for t, p in encoding.sample_logical_angles(rng, 4)]
    model = random_model(5, 2, seed=9, topology="trans_inv")
    g_fd = qnn.gradient(model, basis, samples, noise, mode="fd")
    g_an = qnn.gradient(model, basis, samples, noise, mode="analytic")
    assert np.abs(g_fd - g_an).max() < 1e-6


def test_loss_block_reduction_matches_explicit_columns():
    code, basis = perturbed_basis(lam=0.1, seed=3)
    noise = encoding.make_noise_model(code, 1)
    rng = np.random.default_rng(8)
    samples = [encoding.LogicalSample(t, p)
               for t, p in encoding.sample_logical_angles(rng, 12)]
    model = random_model(5, 2, seed=3)
    from stabdec.encoding import target_expectations
    cols, col_w, idx, th, ph = qnn._input_columns(basis, samples, noise, True)
    targets = target_expectations("X", th, ph)[idx]
    explicit = float(np.sum(col_w * (qnn.forward(model, cols) - targets) ** 2))
    assert abs(qnn.loss(model, basis, samples, noise, "X") - explicit) < 1e-12


def test_training_noiseless_reaches_tiny_loss():
    code, basis = perturbed_basis(lam=0.3, seed=1, kind="uniform_xz")
    noise = encoding.make_noise_model(code, 0)
    rng = np.random.default_rng(5)
    train = [encoding.LogicalSample(t, p)
             for t, p in encoding.sample_logical_angles(rng, 40)]
    val = [encoding.LogicalSample(t, p)
           for t, p in encoding.sample_logical_angles(rng, 100)]
    model = qnn.build_circuit(5, 3)
    tc = qnn.TrainConfig(max_iterations=3000, restarts=2, seed=3)
    trained, report = qnn.train(model, basis, train, noise, tc, q="X")
    assert report.final_loss < 1e-10
    eps, _ = qnn.evaluate(trained, basis, val, noise, q="X")
    assert eps < 1e-8


def test_sgd_mode_decreases_loss():
    code, basis = perturbed_basis(lam=0.2, seed=1, kind="uniform_xz")
    noise = encoding.make_noise_model(code, 0)
    rng = np.random.default_rng(6)
    train = [encoding.LogicalSample(t, p)
             for t, p in encoding.sample_logical_angles(rng, 20)]
    model = qnn.build_circuit(5, 1)
    x0 = np.random.default_rng(1).uniform(0, 2 * np.pi, model.n_params)
    start = qnn.loss(model.with_params(x0), basis, train, noise, "X")
    tc = qnn.TrainConfig(optimizer="sgd", sgd_steps=100, restarts=1, seed=1)
    trained, report = qnn.train(model, basis, train, noise, tc, q="X")
    assert report.final_loss < start


def test_model_text_round_trip_bit_exact():
    model = random_model(5, 3, seed=12)
    text = qnn.model_to_text(model, seed=42, config=qnn.TrainConfig())
    back = qnn.model_from_text(text)
    assert back.n == model.n and back.depth == model.depth
    assert back.topology_tag == model.topology_tag
    assert np.array_equal(back.params, model.params)  # bit exact via float hex
    psi = np.zeros(32, dtype=complex)
    psi[0] = 1.0
    assert qnn.forward(back, psi) == qnn.forward(model, psi)


def test_evaluate_stderr_positive():
    code, basis = perturbed_basis(lam=0.1, seed=0)
    noise = encoding.make_noise_model(code, 1)
    rng = np.random.default_rng(2)
    val = [encoding.LogicalSample(t, p)
           for t, p in encoding.sample_logical_angles(rng, 50)]
    model = random_model(5, 1, seed=0)
    eps, stderr = qnn.evaluate(model, basis, val, noise, q="X")
    assert eps > 0 and stderr > 0
