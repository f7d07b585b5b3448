"""Builtin stabilizer codes and their derived structure.

Each code carries its generator list, minimum-weight logical operators found
by exhaustive search, and a syndrome -> minimum-weight-correction table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache, reduce

import numpy as np

from .pauli import (
    PauliString,
    apply_pauli,
    commutes,
    enumerate_paulis,
    identity,
    multiply,
    pauli_from_string,
    to_dense,
)

_BUILTIN_STABILIZERS = {
    "five_qubit": ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"],
    "steane": ["IIIXXXX", "IXXIIXX", "XIXIXIX", "IIIZZZZ", "IZZIIZZ", "ZIZIZIZ"],
    "shor": [
        "ZZIIIIIII",
        "IZZIIIIII",
        "IIIZZIIII",
        "IIIIZZIII",
        "IIIIIIZZI",
        "IIIIIIIZZ",
        "XXXXXXIII",
        "IIIXXXXXX",
    ],
    "eleven_qubit": [
        "XZIZIXIZZII",
        "IYIZZYIIZZI",
        "IZXIZXIIIZZ",
        "IZZYIYZIIZI",
        "IIZZXXZZIZZ",
        "IIZZIIYZZIY",
        "IZIZZZZYIZY",
        "IIIZIZIZXZX",
        "IZIZIIZIZXX",
        "ZZZZZZIIIII",
    ],
}

_BUILTIN_DISTANCE = {"five_qubit": 3, "steane": 3, "shor": 3, "eleven_qubit": 5}

BUILTIN_CODE_NAMES = tuple(_BUILTIN_STABILIZERS)


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class StabilizerCode:
    name: str
    n: int
    d: int
    stabilizers: tuple[PauliString, ...]
    logical_x: PauliString
    logical_y: PauliString
    logical_z: PauliString
    correction_table: dict[tuple[int, ...], PauliString] = field(hash=False)

    def correction_for(self, syn: tuple[int, ...]) -> PauliString:
        """Table lookup; syndromes unreachable at low weight map to identity."""
        return self.correction_table.get(syn, identity(self.n))


@dataclass(frozen=True)
class Codespace:
    projector: np.ndarray
    codeword0: np.ndarray
    codeword1: np.ndarray


def _symplectic_rows(paulis) -> list[int]:
    return [p.x | (p.z << p.n) for p in paulis]


def _gf2_rank(rows: list[int]) -> int:
    basis: list[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
    return len(basis)


def in_stabilizer_group(p: PauliString, stabilizers) -> bool:
    """GF(2) membership of the symplectic vector in the generator span."""
    rows = _symplectic_rows(stabilizers)
    return _gf2_rank(rows + [p.x | (p.z << p.n)]) == _gf2_rank(rows)


def syndrome(code_or_stabilizers, e: PauliString) -> tuple[int, ...]:
    """Bit a = 1 iff the error anticommutes with stabilizer a."""
    stabs = getattr(code_or_stabilizers, "stabilizers", code_or_stabilizers)
    return tuple(0 if commutes(s, e) else 1 for s in stabs)


def find_logical_operators(stabilizers, n: int | None = None, d_hint: int | None = None):
    """Minimum-weight anticommuting logical pair (X_L, Z_L).

    Exhaustive search over weights 1..n with lexicographic tie-break: the
    first normalizer element outside the stabilizer group becomes Z_L, the
    first one anticommuting with it becomes X_L.
    """
    stabilizers = tuple(stabilizers)
    if n is None:
        if not stabilizers:
            raise CodeError("need qubit count for an empty generator set")
        n = stabilizers[0].n
    if not stabilizers:
        pad = "I" * (n - 1)
        return pauli_from_string("X" + pad), pauli_from_string("Z" + pad)

    z_l = None
    for w in range(1, n + 1):
        for cand in enumerate_paulis(n, w):
            if all(commutes(cand, s) for s in stabilizers):
                if not in_stabilizer_group(cand, stabilizers):
                    z_l = cand
                    break
        if z_l is not None:
            break
    if z_l is None:
        raise CodeError("generators do not define a [[n,1,d]] code")

    x_l = None
    for w in range(1, n + 1):
        for cand in enumerate_paulis(n, w):
            if commutes(cand, z_l):
                continue
            if all(commutes(cand, s) for s in stabilizers):
                x_l = cand
                break
        if x_l is not None:
            break
    if x_l is None:
        raise CodeError("no anticommuting logical partner found")
    return x_l, z_l


def _logical_y(x_l: PauliString, z_l: PauliString) -> PauliString:
    y = multiply(x_l, z_l)
    return PauliString(y.n, y.x, y.z, y.g + 1)  # i * X_L * Z_L


def build_correction_table(stabilizers, n: int, w_max: int):
    """Map every syndrome to a minimum-weight error, ties lexicographic.

    Weight levels beyond w_max keep being added until all 2^(n-k) syndromes
    have a representative; the syndrome map is surjective over the full Pauli
    group, so for degenerate codes this fills the sectors weight <= w_max
    misses.
    """
    if w_max < 0:
        raise CodeError("w_max must be nonnegative")
    table: dict[tuple[int, ...], PauliString] = {}
    full = 1 << len(stabilizers)
    for w in range(n + 1):
        if w > w_max and len(table) == full:
            break
        for e in enumerate_paulis(n, w):
            syn = syndrome(stabilizers, e)
            if syn not in table:
                table[syn] = e
    if len(table) != full:
        raise CodeError("syndrome map failed to cover every sector")
    return table


@lru_cache(maxsize=None)
def builtin_code(name: str) -> StabilizerCode:
    """One of "five_qubit" | "steane" | "shor" | "eleven_qubit"."""
    if name not in _BUILTIN_STABILIZERS:
        raise CodeError(f"unknown code {name!r}; choose from {BUILTIN_CODE_NAMES}")
    stabs = tuple(pauli_from_string(s) for s in _BUILTIN_STABILIZERS[name])
    n = stabs[0].n
    d = _BUILTIN_DISTANCE[name]
    x_l, z_l = find_logical_operators(stabs, n)
    table = build_correction_table(stabs, n, (d - 1) // 2)
    return StabilizerCode(
        name=name,
        n=n,
        d=d,
        stabilizers=stabs,
        logical_x=x_l,
        logical_y=_logical_y(x_l, z_l),
        logical_z=z_l,
        correction_table=table,
    )


@lru_cache(maxsize=None)
def codespace(code: StabilizerCode) -> Codespace:
    """Dense rank-2 projector and the Z_L-eigenbasis codewords."""
    if code.n > 12:
        raise CodeError("dense codespace capped at 12 qubits")
    dim = 1 << code.n
    proj = np.eye(dim, dtype=complex)
    for s in code.stabilizers:
        proj = proj @ (np.eye(dim) + to_dense(s)) / 2
    proj = (proj + proj.conj().T) / 2

    evals, evecs = np.linalg.eigh(proj)
    span = evecs[:, evals > 0.5]
    if span.shape[1] != 2:
        raise CodeError("codespace projector rank is not 2")
    z_block = span.conj().T @ apply_pauli(code.logical_z, span)
    zvals, zvecs = np.linalg.eigh(z_block)
    omega0 = span @ zvecs[:, np.argmax(zvals)]
    omega0 = _fix_phase(omega0)
    omega1 = apply_pauli(code.logical_x, omega0)
    return Codespace(projector=proj, codeword0=omega0, codeword1=omega1)


def _fix_phase(vec: np.ndarray) -> np.ndarray:
    k = np.argmax(np.abs(vec))
    return vec * (np.abs(vec[k]) / vec[k])


def kl_check(code: StabilizerCode, p: int) -> float:
    """Knill-Laflamme residual over all Pauli pairs of weight <= p.

    Zero iff the cross Gram block vanishes and both diagonal Gram blocks agree.
    """
    if 2 * p + 1 > code.d:
        raise CodeError(f"2p+1 = {2 * p + 1} exceeds distance {code.d}")
    space = codespace(code)
    errors = []
    for w in range(p + 1):
        errors.extend(enumerate_paulis(code.n, w))
    a0 = np.column_stack([apply_pauli(e, space.codeword0) for e in errors])
    a1 = np.column_stack([apply_pauli(e, space.codeword1) for e in errors])
    eps0 = a0.conj().T @ a0
    eps1 = a1.conj().T @ a1
    cross = a0.conj().T @ a1
    return float(max(np.abs(cross).max(), np.abs(eps0 - eps1).max()))


def code_to_text(code: StabilizerCode) -> str:
    lines = [f"name: {code.name}", f"distance: {code.d}"]
    for i, s in enumerate(code.stabilizers, start=1):
        lines.append(f"S_{i} = {s.letters()}")
    return "\n".join(lines) + "\n"


def code_from_text(text: str) -> StabilizerCode:
    name, d = None, None
    stabs = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("name:"):
            name = line.split(":", 1)[1].strip()
        elif line.startswith("distance:"):
            d = int(line.split(":", 1)[1])
        elif "=" in line:
            stabs.append(pauli_from_string(line.split("=", 1)[1].strip()))
        else:
            raise CodeError(f"unrecognized line {line!r}")
    if name is None or d is None or not stabs:
        raise CodeError("incomplete code record")
    n = stabs[0].n
    stabs = tuple(stabs)
    x_l, z_l = find_logical_operators(stabs, n)
    return StabilizerCode(
        name=name,
        n=n,
        d=d,
        stabilizers=stabs,
        logical_x=x_l,
        logical_y=_logical_y(x_l, z_l),
        logical_z=z_l,
        correction_table=build_correction_table(stabs, n, (d - 1) // 2),
    )


def distance_audit(code: StabilizerCode, w_max: int | None = None) -> bool:
    """True if no logical (normalizer minus stabilizer) operator of weight < d exists."""
    w_max = code.d - 1 if w_max is None else w_max
    for w in range(1, w_max + 1):
        for cand in enumerate_paulis(code.n, w):
            if all(commutes(cand, s) for s in code.stabilizers) and not in_stabilizer_group(
                cand, code.stabilizers
            ):
                return False
    return True
