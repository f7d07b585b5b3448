"""Dense perturbed Hamiltonians, exact eigenpairs, and perturbative diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .codes import StabilizerCode, codespace
from .pauli import SINGLE_QUBIT, PauliString, apply_pauli, paulis_up_to_weight, to_dense

HERMITICITY_TOL = 1e-10


class SpectralError(ValueError):
    pass


@dataclass(frozen=True)
class Perturbation:
    """Sum of local Hermitian terms, each given on its support qubits."""

    kind: str
    terms: tuple[tuple[tuple[int, ...], np.ndarray], ...]
    k_locality: int
    seed: int | None = None

    def __post_init__(self):
        for support, mat in self.terms:
            dim = 1 << len(support)
            if mat.shape != (dim, dim):
                raise SpectralError("term dimension does not match its support")
            if np.abs(mat - mat.conj().T).max() > 1e-12:
                raise SpectralError("perturbation term is not Hermitian")

    def to_record(self) -> dict:
        return {
            "kind": self.kind,
            "k_locality": self.k_locality,
            "seed": self.seed,
            "terms": [
                {
                    "support": list(support),
                    "real": mat.real.tolist(),
                    "imag": mat.imag.tolist(),
                }
                for support, mat in self.terms
            ],
        }

    @staticmethod
    def from_record(rec: dict) -> "Perturbation":
        terms = tuple(
            (
                tuple(t["support"]),
                np.array(t["real"], dtype=float) + 1j * np.array(t["imag"], dtype=float),
            )
            for t in rec["terms"]
        )
        return Perturbation(rec["kind"], terms, rec["k_locality"], rec.get("seed"))


@dataclass(frozen=True)
class SpectralResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns, ascending energy
    splitting: float
    gap: float


def embed_term(support, mat: np.ndarray, n: int) -> np.ndarray:
    """Place a 2^k x 2^k operator on the given qubits of an n-qubit register."""
    k = len(support)
    full = np.kron(mat, np.eye(1 << (n - k)))
    tensor = full.reshape((2,) * (2 * n))
    order = list(support) + [q for q in range(n) if q not in support]
    inv = np.argsort(order)
    perm = list(inv) + [n + a for a in inv]
    return tensor.transpose(perm).reshape(1 << n, 1 << n)


def perturbation_matrix(v: Perturbation, n: int) -> np.ndarray:
    total = np.zeros((1 << n, 1 << n), dtype=complex)
    for support, mat in v.terms:
        total += embed_term(support, mat, n)
    return total


@lru_cache(maxsize=None)
def stabilizer_hamiltonian(code: StabilizerCode) -> np.ndarray:
    return -sum(to_dense(s) for s in code.stabilizers)


def build_hamiltonian(code: StabilizerCode, v: Perturbation, lam: float) -> np.ndarray:
    """H = -sum_a S_a + lam * sum_i V_i."""
    if lam < 0:
        raise SpectralError("perturbation strength must be nonnegative")
    if code.n > 12:
        raise SpectralError("dense Hamiltonians capped at 12 qubits")
    h = stabilizer_hamiltonian(code) + lam * perturbation_matrix(v, code.n)
    if np.abs(h - h.conj().T).max() > 1e-13 * max(1.0, np.abs(h).max()):
        raise SpectralError("assembled Hamiltonian is not Hermitian")
    return h


def sample_gue_perturbation(rng: np.random.Generator, n: int, seed: int | None = None) -> Perturbation:
    """n single-qubit GUE terms, each rescaled to unit spectral norm."""
    terms = []
    for q in range(n):
        a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        h = (a + a.conj().T) / 2
        h = h / np.abs(np.linalg.eigvalsh(h)).max()
        terms.append(((q,), h))
    return Perturbation("gue_local", tuple(terms), 1, seed)


def uniform_xz_perturbation(n: int) -> Perturbation:
    """V = sum_i (X_i + Z_i)."""
    xz = SINGLE_QUBIT["X"] + SINGLE_QUBIT["Z"]
    return Perturbation("uniform_xz", tuple(((q,), xz) for q in range(n)), 1)


def stabilizer_sum_perturbation(code: StabilizerCode) -> Perturbation:
    """V = sum_a S_a (commutes with H0; leaves the codespace exact)."""
    terms = []
    for s in code.stabilizers:
        support = tuple(j for j in range(s.n) if (s.x | s.z) >> j & 1)
        letters = s.letters()
        mats = [SINGLE_QUBIT[letters[j]] for j in support]
        terms.append((support, reduce(np.kron, mats)))
    k = max(len(sup) for sup, _ in terms)
    return Perturbation("stabilizer_sum", tuple(terms), k)


def lowest_eigenpairs(h: np.ndarray, count: int) -> SpectralResult:
    """Full Hermitian diagonalization; returns the lowest `count` pairs."""
    dim = h.shape[0]
    if count > dim:
        raise SpectralError("requested more eigenpairs than the dimension")
    if np.abs(h - h.conj().T).max() > HERMITICITY_TOL * max(1.0, np.abs(h).max()):
        raise SpectralError("input matrix is not Hermitian")
    evals, evecs = np.linalg.eigh(h)
    vecs = evecs[:, :count].copy()
    for i in range(count):
        k = np.argmax(np.abs(vecs[:, i]))
        vecs[:, i] *= np.abs(vecs[k, i]) / vecs[k, i]
    splitting = float(evals[1] - evals[0]) if dim > 1 else 0.0
    gap = float(evals[2] - evals[0]) if dim > 2 else 0.0
    return SpectralResult(evals[:count].copy(), vecs, splitting, gap)


@lru_cache(maxsize=None)
def reduced_propagator(code: StabilizerCode) -> np.ndarray:
    """Groundspace-excluded propagator of H0, anchored at the ground energy."""
    h0 = stabilizer_hamiltonian(code)
    evals, evecs = np.linalg.eigh(h0)
    e0 = evals[0]
    excited = evals > e0 + 1e-9
    if np.count_nonzero(~excited) != 2:
        raise SpectralError("unperturbed groundspace is not twofold degenerate")
    denom = np.abs(evals[excited] - e0)
    if denom.min() < 1e-12:
        raise SpectralError("degenerate propagator denominator")
    v = evecs[:, excited]
    return (v / (e0 - evals[excited])) @ v.conj().T


def bw_truncated_state(
    code: StabilizerCode, v: Perturbation, lam: float, order: int, branch: int
) -> np.ndarray:
    """Normalized truncation of sum_j (lam G0 V)^j applied to a codeword."""
    if order < 0 or branch not in (0, 1):
        raise SpectralError("order must be >= 0 and branch in {0, 1}")
    space = codespace(code)
    omega = space.codeword0 if branch == 0 else space.codeword1
    g0 = reduced_propagator(code)
    vmat = perturbation_matrix(v, code.n)
    acc = omega.astype(complex).copy()
    term = omega
    for _ in range(order):
        term = lam * (g0 @ (vmat @ term))
        acc = acc + term
    return acc / np.linalg.norm(acc)


def groundspace_infidelity(code: StabilizerCode, state: np.ndarray, spectral: SpectralResult) -> float:
    """1 - |projection of state onto the exact two-dimensional groundspace|^2."""
    basis = spectral.eigenvectors[:, :2]
    overlap = basis.conj().T @ state
    return float(1.0 - np.vdot(overlap, overlap).real)


def perturbed_kl_offdiagonal(code: StabilizerCode, omega0: np.ndarray, omega1: np.ndarray, p: int) -> float:
    """Max |<O_0|Pa Pb|O_1>| over error pairs of weight <= p for perturbed codewords."""
    errors = paulis_up_to_weight(code.n, p)
    a0 = np.column_stack([apply_pauli(e, omega0) for e in errors])
    a1 = np.column_stack([apply_pauli(e, omega1) for e in errors])
    return float(np.abs(a0.conj().T @ a1).max())
