"""Parameterized two-qubit-gate circuits trained to decode a single logical qubit.

A model is a brickwork correction block followed by a convolutional reduction
to one output qubit; every gate is exp(i sum phi_ab sigma_a x sigma_b) over
the 15 nontrivial two-qubit Pauli products. The forward pass never builds the
full 2^n unitary; gradients come from either central finite differences or an
analytic sweep through the gate eigendecompositions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from .encoding import CodewordBasis, LogicalSample, NoiseModel, target_expectations
from .pauli import SINGLE_QUBIT, apply_pauli

_SIGMA = [SINGLE_QUBIT[c] for c in "IXYZ"]
PAIR_LABELS = [(a, b) for a in range(4) for b in range(4) if (a, b) != (0, 0)]
PAIR_BASIS = np.stack([np.kron(_SIGMA[a], _SIGMA[b]) for a, b in PAIR_LABELS])
N_GATE_PARAMS = 15


class QnnError(ValueError):
    pass


@dataclass(frozen=True)
class GateSite:
    layer: int
    qubits: tuple[int, int]
    param_group: int


@dataclass(frozen=True)
class QnnModel:
    n: int
    sites: tuple[GateSite, ...]
    params: np.ndarray  # (n_groups, 15) generator angles
    output_qubit: int
    topology_tag: str
    depth: int

    @property
    def n_groups(self) -> int:
        return self.params.shape[0]

    @property
    def n_params(self) -> int:
        return self.params.size

    def with_params(self, params: np.ndarray) -> "QnnModel":
        # no angle wrapping: the generators do not commute, so the map from a
        # single angle to the gate is not 2*pi-periodic and wrapping would put
        # discontinuities in the training objective
        params = np.asarray(params, dtype=float).reshape(self.params.shape)
        return replace(self, params=params.copy())


@dataclass(frozen=True)
class TrainConfig:
    max_iterations: int = 100_000
    tol: float = 1e-15
    restarts: int = 3
    gradient_mode: str = "analytic"  # or "fd"
    optimizer: str = "bfgs"  # or "sgd"
    seed: int = 0
    sgd_learning_rate: float = 0.05
    sgd_steps: int = 5000


@dataclass(frozen=True)
class TrainReport:
    final_loss: float
    iterations: int
    gradient_norm: float
    wall_time: float
    converged: bool


def two_qubit_gate(angles: np.ndarray) -> np.ndarray:
    """exp(i sum phi_ab sigma_a x sigma_b), identity coefficient fixed to 0."""
    angles = np.asarray(angles, dtype=float)
    if angles.shape != (N_GATE_PARAMS,) or not np.all(np.isfinite(angles)):
        raise QnnError("expected 15 finite angles")
    gen = np.tensordot(angles, PAIR_BASIS, axes=1)
    w, v = np.linalg.eigh(gen)
    return (v * np.exp(1j * w)) @ v.conj().T


def build_circuit(n: int, depth: int, topology_tag: str = "brickwork_conv",
                  output_qubit: int = 0) -> QnnModel:
    """Brickwork correction block of the given depth plus convolutional readout.

    Each depth unit is a pair of gate layers on an open chain: even bonds
    (0,1),(2,3),... then odd bonds (1,2),(3,4),... In "brickwork_conv" every
    gate has its own parameter group; in "trans_inv" all gates of one depth
    unit share a group. Readout is a single decoding gate on the output qubit
    and its neighbor; the decoded bit is read as <Z> on the output qubit.
    """
    if n < 2 or depth < 1:
        raise QnnError("need n >= 2 and depth >= 1")
    if topology_tag not in ("brickwork_conv", "trans_inv"):
        raise QnnError(f"unknown topology {topology_tag!r}")
    shared = topology_tag == "trans_inv"

    sites: list[GateSite] = []
    group = 0
    layer = 0
    for _ in range(depth):
        block_group = group
        for parity in (0, 1):
            for a in range(parity, n - 1, 2):
                g = block_group if shared else group
                sites.append(GateSite(layer, (a, a + 1), g))
                if not shared:
                    group += 1
            layer += 1
        if shared:
            group += 1

    partner = output_qubit + 1 if output_qubit + 1 < n else output_qubit - 1
    pair = (min(output_qubit, partner), max(output_qubit, partner))
    sites.append(GateSite(layer, pair, group))
    group += 1

    params = np.zeros((group, N_GATE_PARAMS))
    return QnnModel(n=n, sites=tuple(sites), params=params,
                    output_qubit=output_qubit, topology_tag=topology_tag, depth=depth)


def _gate_list(model: QnnModel) -> list[np.ndarray]:
    group_gates = [two_qubit_gate(model.params[g]) for g in range(model.n_groups)]
    return [group_gates[s.param_group] for s in model.sites]


def _apply_gate(states: np.ndarray, u: np.ndarray, q1: int, q2: int, n: int) -> np.ndarray:
    """Apply a 4x4 unitary to qubits q1 < q2 of a (2^n, batch) array."""
    a, b = 1 << q1, 1 << (q2 - q1 - 1)
    view = states.reshape(a, 2, b, 2, -1)
    u4 = u.reshape(2, 2, 2, 2)
    return np.einsum("ijkl,akblc->aibjc", u4, view).reshape(states.shape)


def _z_expectation(states: np.ndarray, qubit: int, n: int) -> np.ndarray:
    batch = states.shape[1] if states.ndim == 2 else 1
    view = states.reshape(1 << qubit, 2, -1, batch)
    probs = np.abs(view) ** 2
    return (probs[:, 0].sum(axis=(0, 1)) - probs[:, 1].sum(axis=(0, 1)))


def circuit_states(model: QnnModel, states: np.ndarray) -> np.ndarray:
    """U |states> (columns are statevectors)."""
    out = np.ascontiguousarray(states, dtype=complex)
    squeeze = out.ndim == 1
    if squeeze:
        out = out[:, None]
    if out.shape[0] != 1 << model.n:
        raise QnnError("statevector dimension mismatch")
    for site, u in zip(model.sites, _gate_list(model)):
        out = _apply_gate(out, u, *site.qubits, model.n)
    return out[:, 0] if squeeze else out


def forward(model: QnnModel, state: np.ndarray):
    """<state| U^dag Z_out U |state>; accepts a batch of column vectors."""
    out = circuit_states(model, state)
    if out.ndim == 1:
        return float(_z_expectation(out[:, None], model.output_qubit, model.n)[0])
    return _z_expectation(out, model.output_qubit, model.n)


def _input_columns(basis: CodewordBasis, samples, noise: NoiseModel, exhaustive: bool):
    """Noisy input states as columns, with per-column weights and targets index."""
    thetas = np.array([s.theta for s in samples])
    phis = np.array([s.phi for s in samples])
    clean = (np.cos(thetas) * basis.omega0[:, None]
             + np.exp(1j * phis) * np.sin(thetas) * basis.omega1[:, None])
    n_s = len(samples)
    if exhaustive:
        cols = np.hstack([apply_pauli(e, clean) for e in noise.errors])
        col_w = np.repeat(noise.weights, n_s) / n_s
        sample_idx = np.tile(np.arange(n_s), len(noise.errors))
    else:
        cols = np.empty_like(clean)
        for i, s in enumerate(samples):
            cols[:, i] = apply_pauli(noise.errors[s.error_id], clean[:, i])
        col_w = np.full(n_s, 1.0 / n_s)
        sample_idx = np.arange(n_s)
    return cols, col_w, sample_idx, thetas, phis


def _block_inputs(basis: CodewordBasis, samples, noise: NoiseModel, q: str):
    """Per-error codeword columns plus sample amplitudes and targets.

    Every noisy input P_a (c0 Omega_0 + c1 Omega_1) lies in the span of
    {P_a Omega_0, P_a Omega_1}, so forwarding those two columns per error is
    enough to predict every sample.
    """
    if not samples:
        raise QnnError("need at least one sample")
    thetas = np.array([s.theta for s in samples])
    phis = np.array([s.phi for s in samples])
    pair = np.column_stack([basis.omega0, basis.omega1])
    cols = np.hstack([apply_pauli(e, pair) for e in noise.errors])  # (dim, 2M)
    amps = np.vstack([np.cos(thetas), np.exp(1j * phis) * np.sin(thetas)])  # (2, S)
    targets = target_expectations(q, thetas, phis)
    return cols, np.asarray(noise.weights, dtype=float), amps, targets


def _output_blocks(model: QnnModel, cols: np.ndarray) -> np.ndarray:
    """(M, 2, 2) blocks O^a_kl = <U P_a Omega_k| Z_out |U P_a Omega_l>."""
    y = circuit_states(model, cols)
    zy = y.reshape(1 << model.output_qubit, 2, -1).copy()
    zy[:, 1] *= -1.0
    zy = zy.reshape(y.shape)
    vy = y.reshape(y.shape[0], -1, 2)
    vzy = zy.reshape(y.shape[0], -1, 2)
    return np.einsum("dmk,dml->mkl", vy.conj(), vzy)


def _block_predictions(blocks: np.ndarray, amps: np.ndarray) -> np.ndarray:
    """(M, S) array of <Psi| U^dag Z_out U |Psi> per error and sample."""
    return np.real(np.einsum("ks,mkl,ls->ms", amps.conj(), blocks, amps))


def loss(model: QnnModel, basis: CodewordBasis, samples, noise: NoiseModel,
         q: str = "X", exhaustive: bool = True) -> float:
    """Mean-square decoding error of the circuit over the sample set."""
    if exhaustive:
        cols, w, amps, targets = _block_inputs(basis, samples, noise, q)
        preds = _block_predictions(_output_blocks(model, cols), amps)
        return float(np.dot(w, np.mean((preds - targets[None, :]) ** 2, axis=1)))
    if not samples:
        raise QnnError("need at least one sample")
    cols, col_w, sample_idx, thetas, phis = _input_columns(basis, samples, noise, False)
    targets = target_expectations(q, thetas, phis)[sample_idx]
    preds = forward(model, cols)
    return float(np.sum(col_w * (preds - targets) ** 2))


def _gate_derivative_factors(angles: np.ndarray):
    """Eigendecomposition pieces for d exp(iG)/d phi_m."""
    gen = np.tensordot(angles, PAIR_BASIS, axes=1)
    w, v = np.linalg.eigh(gen)
    delta = w[:, None] - w[None, :]
    # (e^{i wa} - e^{i wb})/(wa - wb), exact at coincidence
    phi = 1j * np.exp(1j * (w[:, None] + w[None, :]) / 2) * np.sinc(delta / (2 * np.pi))
    return v, phi


def _gate_derivatives(angles: np.ndarray) -> np.ndarray:
    """(15, 4, 4) array of dU/d phi_m."""
    v, phi = _gate_derivative_factors(angles)
    inner = np.einsum("pa,mpq,qb->mab", v.conj(), PAIR_BASIS, v)
    return np.einsum("pa,mab,qb->mpq", v, phi[None] * inner, v.conj())


def _analytic_gradient(model: QnnModel, cols, col_w, targets) -> tuple[float, np.ndarray]:
    """Loss and gradient via one forward/backward sweep."""
    n = model.n
    gates = _gate_list(model)
    states = [np.ascontiguousarray(cols, dtype=complex)]
    for site, u in zip(model.sites, gates):
        states.append(_apply_gate(states[-1], u, *site.qubits, n))
    preds = _z_expectation(states[-1], model.output_qubit, n)
    resid = preds - targets
    loss_val = float(np.sum(col_w * resid**2))
    coeff = 2.0 * col_w * resid

    # r = Z_out U psi, back-propagated through the adjoint gates
    q = model.output_qubit
    r = states[-1].copy().reshape(1 << q, 2, -1)
    r[:, 1] *= -1.0
    r = r.reshape(states[-1].shape)

    grad = np.zeros_like(model.params)
    d_cache = {g: _gate_derivatives(model.params[g]) for g in range(model.n_groups)}
    b = r
    for j in range(len(model.sites) - 1, -1, -1):
        site = model.sites[j]
        q1, q2 = site.qubits
        a_mat, b_mat = 1 << q1, 1 << (q2 - q1 - 1)
        a_prev = states[j] * coeff[None, :]
        vb = b.reshape(a_mat, 2, b_mat, 2, -1)
        va = a_prev.reshape(a_mat, 2, b_mat, 2, -1)
        n4 = np.einsum("aibjc,akblc->ijkl", vb.conj(), va).reshape(4, 4)
        dus = d_cache[site.param_group]
        grad[site.param_group] += 2.0 * np.real(np.einsum("mpq,pq->m", dus, n4))
        b = _apply_gate(b, gates[j].conj().T, q1, q2, n)
    return loss_val, grad


def _analytic_gradient_block(model: QnnModel, cols, w, amps, targets):
    """Loss and gradient using the two-column-per-error reduction."""
    n = model.n
    n_s = amps.shape[1]
    gates = _gate_list(model)
    states = [np.ascontiguousarray(cols, dtype=complex)]
    for site, u in zip(model.sites, gates):
        states.append(_apply_gate(states[-1], u, *site.qubits, n))
    y = states[-1]
    zy = y.reshape(1 << model.output_qubit, 2, -1).copy()
    zy[:, 1] *= -1.0
    zy = zy.reshape(y.shape)
    blocks = np.einsum("dmk,dml->mkl", y.reshape(y.shape[0], -1, 2).conj(),
                       zy.reshape(y.shape[0], -1, 2))
    preds = _block_predictions(blocks, amps)
    resid = preds - targets[None, :]
    loss_val = float(np.dot(w, np.mean(resid**2, axis=1)))

    # dL/dO^m_kl, a Hermitian 2x2 per error channel
    mix = np.einsum("ms,ks,ls->mkl", (2.0 / n_s) * w[:, None] * resid,
                    amps.conj(), amps)

    grad = np.zeros_like(model.params)
    d_cache = {g: _gate_derivatives(model.params[g]) for g in range(model.n_groups)}
    b = zy
    for j in range(len(model.sites) - 1, -1, -1):
        site = model.sites[j]
        q1, q2 = site.qubits
        a_prev = states[j]
        a_w = np.einsum("dml,mkl->dmk", a_prev.reshape(a_prev.shape[0], -1, 2),
                        mix).reshape(a_prev.shape)
        a_mat, b_mat = 1 << q1, 1 << (q2 - q1 - 1)
        vb = b.reshape(a_mat, 2, b_mat, 2, -1)
        va = a_w.reshape(a_mat, 2, b_mat, 2, -1)
        n4 = np.einsum("aibjc,akblc->ijkl", vb.conj(), va).reshape(4, 4)
        grad[site.param_group] += 2.0 * np.real(np.einsum("mpq,pq->m", d_cache[site.param_group], n4))
        b = _apply_gate(b, gates[j].conj().T, q1, q2, n)
    return loss_val, grad


def gradient(model: QnnModel, basis: CodewordBasis, samples, noise: NoiseModel,
             q: str = "X", exhaustive: bool = True, mode: str = "fd",
             step: float = 1e-5) -> np.ndarray:
    """Gradient of the loss with respect to every trainable angle."""
    if mode == "analytic":
        if exhaustive:
            cols, w, amps, targets = _block_inputs(basis, samples, noise, q)
            _, grad = _analytic_gradient_block(model, cols, w, amps, targets)
            return grad.ravel()
        cols, col_w, sample_idx, thetas, phis = _input_columns(basis, samples, noise, False)
        targets = target_expectations(q, thetas, phis)[sample_idx]
        _, grad = _analytic_gradient(model, cols, col_w, targets)
        return grad.ravel()
    if mode != "fd":
        raise QnnError(f"unknown gradient mode {mode!r}")
    flat = model.params.ravel().copy()
    grad = np.empty_like(flat)
    for i in range(flat.size):
        bumped = flat.copy()
        bumped[i] = flat[i] + step
        up = loss(model.with_params(bumped), basis, samples, noise, q, exhaustive)
        bumped[i] = flat[i] - step
        down = loss(model.with_params(bumped), basis, samples, noise, q, exhaustive)
        grad[i] = (up - down) / (2 * step)
    return grad


def train(model: QnnModel, basis: CodewordBasis, train_samples, noise: NoiseModel,
          config: TrainConfig = TrainConfig(), q: str = "X",
          exhaustive: bool = True) -> tuple[QnnModel, TrainReport]:
    """BFGS training from seeded uniform-random restarts; best loss wins."""
    if exhaustive:
        cols, w, amps, targets = _block_inputs(basis, train_samples, noise, q)
    else:
        cols, col_w, sample_idx, thetas, phis = _input_columns(
            basis, train_samples, noise, False)
        targets = target_expectations(q, thetas, phis)[sample_idx]

    def objective(flat):
        m = model.with_params(flat)
        if config.gradient_mode != "analytic":
            val = loss(m, basis, train_samples, noise, q, exhaustive)
            g = gradient(m, basis, train_samples, noise, q, exhaustive, mode="fd")
            return val, g
        if exhaustive:
            val, grad = _analytic_gradient_block(m, cols, w, amps, targets)
        else:
            val, grad = _analytic_gradient(m, cols, col_w, targets)
        return val, grad.ravel()

    rng = np.random.default_rng(config.seed)
    start = time.perf_counter()
    best = None
    n_restarts = max(1, config.restarts)
    for _ in range(n_restarts):
        x0 = rng.uniform(0.0, 2 * np.pi, size=model.n_params)
        if config.optimizer == "sgd":
            res = _sgd(objective, x0, config)
        else:
            res = minimize(objective, x0, jac=True, method="BFGS",
                           options={"maxiter": config.max_iterations, "gtol": config.tol})
        if not np.isfinite(res.fun):
            raise QnnError("non-finite loss during training")
        if best is None or res.fun < best.fun:
            best = res
    wall = time.perf_counter() - start

    trained = model.with_params(best.x)
    report = TrainReport(
        final_loss=float(best.fun),
        iterations=int(getattr(best, "nit", 0)),
        gradient_norm=float(np.linalg.norm(objective(best.x)[1])),
        wall_time=wall,
        converged=bool(getattr(best, "success", True)) or float(best.fun) < 1e-12,
    )
    return trained, report


class _SgdResult:
    def __init__(self, x, fun, nit):
        self.x, self.fun, self.nit = x, fun, nit
        self.success = True


def _sgd(objective, x0, config: TrainConfig) -> _SgdResult:
    """Plain gradient descent; retained as a non-default mode."""
    x = x0.copy()
    val, grad = objective(x)
    for it in range(config.sgd_steps):
        x = x - config.sgd_learning_rate * grad
        new_val, grad = objective(x)
        if abs(val - new_val) < config.tol:
            val = new_val
            break
        val = new_val
    return _SgdResult(x, val, it + 1)


def evaluate(model: QnnModel, basis: CodewordBasis, validation_samples,
             noise: NoiseModel, q: str = "X", exhaustive: bool = True) -> tuple[float, float]:
    """Decoding error on withheld samples, with its standard error."""
    n_s = len(validation_samples)
    if exhaustive:
        cols, w, amps, targets = _block_inputs(basis, validation_samples, noise, q)
        preds = _block_predictions(_output_blocks(model, cols), amps)
        per_sample = w @ (preds - targets[None, :]) ** 2
    else:
        cols, col_w, sample_idx, thetas, phis = _input_columns(
            basis, validation_samples, noise, False)
        targets = target_expectations(q, thetas, phis)[sample_idx]
        preds = forward(model, cols)
        per_sample = np.zeros(n_s)
        np.add.at(per_sample, sample_idx, col_w * (preds - targets) ** 2 * n_s)
    eps = float(per_sample.mean())
    stderr = float(per_sample.std(ddof=1) / np.sqrt(n_s)) if n_s > 1 else 0.0
    return eps, stderr


def model_to_text(model: QnnModel, seed: int | None = None,
                  config: TrainConfig | None = None) -> str:
    """Bit-exact serialization (angles as hex floats)."""
    lines = [
        f"topology: {model.topology_tag}",
        f"n: {model.n}",
        f"depth: {model.depth}",
        f"output_qubit: {model.output_qubit}",
        f"groups: {model.n_groups}",
    ]
    if seed is not None:
        lines.append(f"seed: {seed}")
    if config is not None:
        lines.append(f"max_iterations: {config.max_iterations}")
        lines.append(f"tol: {config.tol!r}")
        lines.append(f"restarts: {config.restarts}")
    for g in range(model.n_groups):
        lines.append("params: " + " ".join(x.hex() for x in model.params[g]))
    return "\n".join(lines) + "\n"


def model_from_text(text: str) -> QnnModel:
    meta = {}
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        key, _, val = line.partition(":")
        key = key.strip()
        if key == "params":
            rows.append([float.fromhex(x) for x in val.split()])
        else:
            meta[key] = val.strip()
    model = build_circuit(int(meta["n"]), int(meta["depth"]), meta["topology"],
                          int(meta["output_qubit"]))
    params = np.array(rows, dtype=float)
    if params.shape != model.params.shape:
        raise QnnError("parameter table does not match the rebuilt topology")
    return replace(model, params=params)
