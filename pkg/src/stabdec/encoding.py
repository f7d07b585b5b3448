"""Gauge-fixed codewords, logical-state sampling, and Pauli input noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .codes import StabilizerCode
from .pauli import PauliString, apply_pauli, enumerate_paulis, identity
from .spectral import SpectralResult


class EncodingError(ValueError):
    pass


@dataclass(frozen=True)
class CodewordBasis:
    """Gauge-fixed pair spanning the perturbed groundspace.

    alpha maps exact eigenstates to codewords (row k gives Omega_k in the
    eigenbasis) and follows the parameterization
        [[cos t1, e^{i t2} sin t1], [e^{i t3} sin t1, -e^{i(t2+t3)} cos t1]]
    with the global phase t0 = 0.
    """

    omega0: np.ndarray
    omega1: np.ndarray
    alpha: np.ndarray
    t: tuple[float, float, float, float]


@dataclass(frozen=True)
class LogicalSample:
    theta: float
    phi: float
    error_id: int = 0
    state: np.ndarray | None = None


@dataclass(frozen=True)
class NoiseModel:
    p: int
    errors: tuple[PauliString, ...]
    weights: np.ndarray
    exceeds_distance: bool = False


def fix_gauge(spectral: SpectralResult, code: StabilizerCode) -> CodewordBasis:
    """Closed-form two-stage gauge fix.

    Stage 1 diagonalizes the 2x2 block of Z_L in the two lowest eigenstates
    (top eigenvector becomes Omega_0, maximizing <Omega_0|Z_L|Omega_0>).
    Stage 2 picks the relative phase t3 maximizing <Omega_+|X_L|Omega_+>.
    """
    if spectral.eigenvectors.shape[1] < 2:
        raise EncodingError("gauge fix needs the two lowest eigenvectors")
    psi = spectral.eigenvectors[:, :2]
    z_block = psi.conj().T @ apply_pauli(code.logical_z, psi)
    zvals, zvecs = np.linalg.eigh(z_block)
    v0 = zvecs[:, np.argmax(zvals)]

    # rotate so the first component is real nonnegative: v0 = (cos t1, e^{i t2} sin t1)
    if np.abs(v0[0]) > 1e-14:
        v0 = v0 * (np.abs(v0[0]) / v0[0])
    t1 = float(np.arctan2(np.abs(v0[1]), np.abs(v0[0]).real))
    t2 = float(np.angle(v0[1])) if np.abs(v0[1]) > 1e-14 else 0.0
    v1 = np.array([np.sin(t1), -np.exp(1j * t2) * np.cos(t1)], dtype=complex)

    omega0 = psi @ v0
    omega1 = psi @ v1
    x01 = np.vdot(omega0, apply_pauli(code.logical_x, omega1))
    t3 = float(-np.angle(x01)) if np.abs(x01) > 1e-14 else 0.0
    omega1 = omega1 * np.exp(1j * t3)
    v1 = v1 * np.exp(1j * t3)

    alpha = np.array([v0, v1])
    return CodewordBasis(omega0=omega0, omega1=omega1, alpha=alpha, t=(0.0, t1, t2, t3))


def sample_logical_angles(rng: np.random.Generator, count: int) -> list[tuple[float, float]]:
    """i.i.d. uniform (theta, phi) pairs on [0, pi] x [0, 2 pi]."""
    if count < 1:
        raise EncodingError("count must be >= 1")
    thetas = rng.uniform(0.0, np.pi, size=count)
    phis = rng.uniform(0.0, 2 * np.pi, size=count)
    return list(zip(thetas.tolist(), phis.tolist()))


def encode(basis: CodewordBasis, theta: float, phi: float) -> np.ndarray:
    """cos(theta) Omega_0 + e^{i phi} sin(theta) Omega_1."""
    return np.cos(theta) * basis.omega0 + np.exp(1j * phi) * np.sin(theta) * basis.omega1


def target_expectation(q: str, theta: float, phi: float) -> float:
    """Ideal Bloch-sphere expectation f_Q(theta, phi)."""
    if q == "X":
        return float(np.sin(2 * theta) * np.cos(phi))
    if q == "Y":
        return float(np.sin(2 * theta) * np.sin(phi))
    if q == "Z":
        return float(np.cos(2 * theta))
    raise EncodingError(f"basis must be X, Y or Z, got {q!r}")


def target_expectations(q: str, thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    if q == "X":
        return np.sin(2 * thetas) * np.cos(phis)
    if q == "Y":
        return np.sin(2 * thetas) * np.sin(phis)
    if q == "Z":
        return np.cos(2 * thetas)
    raise EncodingError(f"basis must be X, Y or Z, got {q!r}")


def make_noise_model(
    code: StabilizerCode,
    p: int,
    include_identity: bool = True,
    exact_weight: bool = False,
) -> NoiseModel:
    """Uniform model over Pauli errors of weight <= p (or exactly p)."""
    if p < 0:
        raise EncodingError("noise locality p must be >= 0")
    errors: list[PauliString] = []
    if include_identity:
        errors.append(identity(code.n))
    weights_range = [p] if exact_weight else list(range(1, p + 1))
    for w in weights_range:
        if w >= 1:
            errors.extend(enumerate_paulis(code.n, w))
    if not errors:
        errors.append(identity(code.n))
    probs = np.full(len(errors), 1.0 / len(errors))
    return NoiseModel(
        p=p,
        errors=tuple(errors),
        weights=probs,
        exceeds_distance=2 * p + 1 > code.d,
    )


def apply_noise(rng: np.random.Generator, model: NoiseModel, sample: LogicalSample) -> LogicalSample:
    """Draw one error for the sample; applies it to the state when one is attached."""
    idx = int(rng.choice(len(model.errors), p=model.weights))
    state = sample.state
    if state is not None:
        state = apply_pauli(model.errors[idx], state)
    return LogicalSample(theta=sample.theta, phi=sample.phi, error_id=idx, state=state)
