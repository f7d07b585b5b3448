"""Naive and error-corrected decoding observables plus the shared error estimator."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .codes import StabilizerCode, codespace
from .encoding import CodewordBasis, LogicalSample, NoiseModel, target_expectations
from .pauli import PauliString, apply_pauli

EPS_CLAMP = 1e-24


class DecoderError(ValueError):
    pass


@dataclass(frozen=True)
class DecoderObservable:
    label: str
    basis: str
    operator: np.ndarray | None = None
    pauli: PauliString | None = None  # fast path when the observable is a Pauli

    def apply(self, states: np.ndarray) -> np.ndarray:
        if self.pauli is not None:
            return apply_pauli(self.pauli, states)
        return self.operator @ states


def naive_observable(code: StabilizerCode, q: str) -> DecoderObservable:
    """Bare logical operator of the unperturbed code."""
    op = {"X": code.logical_x, "Y": code.logical_y, "Z": code.logical_z}.get(q)
    if op is None:
        raise DecoderError(f"basis must be X, Y or Z, got {q!r}")
    return DecoderObservable(label="naive", basis=q, pauli=op)


@lru_cache(maxsize=None)
def _qec_operator(code: StabilizerCode, q: str) -> np.ndarray:
    """sum_b C_b (Q restricted to the codespace) C_b over all syndrome sectors."""
    space = codespace(code)
    syndromes = list(itertools.product((0, 1), repeat=len(code.stabilizers)))
    b0 = np.empty((space.codeword0.shape[0], len(syndromes)), dtype=complex)
    b1 = np.empty_like(b0)
    for i, syn in enumerate(syndromes):
        c = code.correction_for(syn)
        b0[:, i] = apply_pauli(c, space.codeword0)
        b1[:, i] = apply_pauli(c, space.codeword1)
    if q == "Z":
        op = b0 @ b0.conj().T - b1 @ b1.conj().T
    elif q == "X":
        op = b1 @ b0.conj().T + b0 @ b1.conj().T
    elif q == "Y":
        op = 1j * b1 @ b0.conj().T - 1j * b0 @ b1.conj().T
    else:
        raise DecoderError(f"basis must be X, Y or Z, got {q!r}")
    return (op + op.conj().T) / 2


def qec_observable(code: StabilizerCode, q: str) -> DecoderObservable:
    """Effective logical operator after syndrome projection and correction."""
    return DecoderObservable(label="qec", basis=q, operator=_qec_operator(code, q))


def expectation(state: np.ndarray, obs: DecoderObservable) -> float:
    """<state|O|state> with the imaginary residue checked and discarded."""
    if obs.pauli is None and obs.operator.shape[0] != state.shape[0]:
        raise DecoderError("dimension mismatch")
    val = np.vdot(state, obs.apply(state))
    if abs(val.imag) > 1e-10:
        raise DecoderError(f"expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def _codespace_block(obs: DecoderObservable, basis: CodewordBasis, error: PauliString) -> np.ndarray:
    """2x2 matrix <Omega_k| P O P |Omega_l> for the given input error."""
    w0 = apply_pauli(error, basis.omega0)
    w1 = apply_pauli(error, basis.omega1)
    ow0 = obs.apply(w0)
    ow1 = obs.apply(w1)
    return np.array(
        [[np.vdot(w0, ow0), np.vdot(w0, ow1)], [np.vdot(w1, ow0), np.vdot(w1, ow1)]]
    )


def predictions(
    obs: DecoderObservable,
    basis: CodewordBasis,
    thetas: np.ndarray,
    phis: np.ndarray,
    error: PauliString,
) -> np.ndarray:
    """<Psi|P O P|Psi> for each (theta, phi), via the 2x2 codespace block."""
    block = _codespace_block(obs, basis, error)
    c0 = np.cos(thetas)
    c1 = np.exp(1j * phis) * np.sin(thetas)
    vals = (
        np.abs(c0) ** 2 * block[0, 0].real
        + np.abs(c1) ** 2 * block[1, 1].real
        + 2 * (np.conj(c0) * c1 * block[0, 1]).real
    )
    return vals


def generalization_error(
    obs: DecoderObservable,
    basis: CodewordBasis,
    samples: list[LogicalSample],
    noise: NoiseModel,
    exhaustive: bool = True,
) -> tuple[float, float]:
    """Mean-square decoding error over samples and input errors.

    With exhaustive=True the error average runs over the model's full error
    list (weighted); otherwise each sample contributes only its recorded
    error_id draw.
    """
    if not samples:
        raise DecoderError("need at least one sample")
    thetas = np.array([s.theta for s in samples])
    phis = np.array([s.phi for s in samples])
    targets = target_expectations(obs.basis, thetas, phis)

    per_sample = np.zeros(len(samples))
    if exhaustive:
        for err, w in zip(noise.errors, noise.weights):
            preds = predictions(obs, basis, thetas, phis, err)
            per_sample += w * (preds - targets) ** 2
    else:
        blocks = {}
        for s_idx, sample in enumerate(samples):
            eid = sample.error_id
            if eid not in blocks:
                blocks[eid] = _codespace_block(obs, basis, noise.errors[eid])
            block = blocks[eid]
            c0 = np.cos(sample.theta)
            c1 = np.exp(1j * sample.phi) * np.sin(sample.theta)
            pred = (
                abs(c0) ** 2 * block[0, 0].real
                + abs(c1) ** 2 * block[1, 1].real
                + 2 * (np.conj(c0) * c1 * block[0, 1]).real
            )
            per_sample[s_idx] = (pred - targets[s_idx]) ** 2

    eps = float(per_sample.mean())
    stderr = float(per_sample.std(ddof=1) / np.sqrt(len(samples))) if len(samples) > 1 else 0.0
    return eps, stderr
