"""Exact n-qubit Pauli algebra in symplectic (bit-packed) form.

An operator is stored as P = i^g * prod_j X^{x_j} Z^{z_j}, where x and z are
bit-packed integers (bit j = qubit j) and g is the exponent of i modulo 4.
Qubit 0 is the leftmost letter of a string and the most significant bit of a
statevector index, so ``to_dense`` matches the literal tensor product read
left to right.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)

SINGLE_QUBIT = {"I": _I2, "X": _X, "Y": _Y, "Z": _Z}

# letter -> (x bit, z bit)
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}

MAX_DENSE_QUBITS = 12

_PHASES = (1, 1j, -1, -1j)


class PauliError(ValueError):
    pass


@dataclass(frozen=True)
class PauliString:
    """Immutable n-qubit Pauli operator."""

    n: int
    x: int
    z: int
    g: int = 0  # exponent of i in the X^x Z^z normal form, mod 4

    def __post_init__(self):
        mask = (1 << self.n) - 1
        if self.n <= 0:
            raise PauliError("qubit count must be positive")
        if self.x & ~mask or self.z & ~mask:
            raise PauliError("x/z bits outside qubit range")
        object.__setattr__(self, "g", self.g % 4)

    @property
    def x_bits(self) -> tuple[int, ...]:
        return tuple((self.x >> j) & 1 for j in range(self.n))

    @property
    def z_bits(self) -> tuple[int, ...]:
        return tuple((self.z >> j) & 1 for j in range(self.n))

    @property
    def phase(self) -> complex:
        """Prefactor relative to the literal tensor product of letters."""
        y_count = (self.x & self.z).bit_count()
        return _PHASES[(self.g - y_count) % 4]

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def letters(self) -> str:
        return "".join(
            _BITS_LETTER[(self.x >> j) & 1, (self.z >> j) & 1] for j in range(self.n)
        )

    def is_hermitian(self) -> bool:
        return self.phase in (1, -1)

    def __str__(self):
        prefix = {1: "", 1j: "i*", -1: "-", -1j: "-i*"}[self.phase]
        return prefix + self.letters()


def identity(n: int) -> PauliString:
    return PauliString(n, 0, 0, 0)


def pauli_from_string(s: str) -> PauliString:
    """Parse a letter string like "XZZXI" (qubit 0 leftmost)."""
    if not s:
        raise PauliError("empty Pauli string")
    x = z = g = 0
    for j, c in enumerate(s):
        if c not in _LETTER_BITS:
            raise PauliError(f"invalid Pauli letter {c!r}")
        xb, zb = _LETTER_BITS[c]
        x |= xb << j
        z |= zb << j
        if c == "Y":
            g += 1  # Y = i X Z
    return PauliString(len(s), x, z, g)


def to_string(p: PauliString) -> str:
    """Letter serialization; requires phase +1 so the round trip is exact."""
    if p.phase != 1:
        raise PauliError("only phase +1 operators serialize as plain letters")
    return p.letters()


def _check_same_n(p: PauliString, q: PauliString):
    if p.n != q.n:
        raise PauliError(f"qubit count mismatch: {p.n} vs {q.n}")


def commutes(p: PauliString, q: PauliString) -> bool:
    """Symplectic inner product test."""
    _check_same_n(p, q)
    return ((p.x & q.z).bit_count() + (p.z & q.x).bit_count()) % 2 == 0


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Exact operator product, phase included."""
    _check_same_n(p, q)
    # X^xp Z^zp X^xq Z^zq = (-1)^{zp.xq} X^{xp^xq} Z^{zp^zq}
    g = p.g + q.g + 2 * (p.z & q.x).bit_count()
    return PauliString(p.n, p.x ^ q.x, p.z ^ q.z, g)


def scale(p: PauliString, factor: complex) -> PauliString:
    """Multiply by a power of i."""
    for k, ph in enumerate(_PHASES):
        if factor == ph:
            return PauliString(p.n, p.x, p.z, p.g + k)
    raise PauliError("scale factor must be a power of i")


def _revbits(v: int, n: int) -> int:
    out = 0
    for j in range(n):
        if (v >> j) & 1:
            out |= 1 << (n - 1 - j)
    return out


def to_dense(p: PauliString, max_qubits: int = MAX_DENSE_QUBITS) -> np.ndarray:
    """Dense 2^n x 2^n matrix (qubit 0 = most significant index bit)."""
    if p.n > max_qubits:
        raise PauliError(f"dense materialization capped at {max_qubits} qubits")
    mats = [SINGLE_QUBIT[c] for c in p.letters()]
    dense = reduce(np.kron, mats)
    return p.phase * dense


def apply_pauli(p: PauliString, vec: np.ndarray) -> np.ndarray:
    """Apply P to a statevector (or to each column of a (2^n, k) array)."""
    dim = 1 << p.n
    if vec.shape[0] != dim:
        raise PauliError("statevector dimension mismatch")
    xm = _revbits(p.x, p.n)
    zm = _revbits(p.z, p.n)
    idx = np.arange(dim) ^ xm
    signs = 1.0 - 2.0 * (np.bitwise_count(idx & zm) & 1)
    phase = _PHASES[p.g % 4]
    if vec.ndim == 1:
        return phase * signs * vec[idx]
    return phase * signs[:, None] * vec[idx]


def enumerate_paulis(n: int, w: int) -> list[PauliString]:
    """All weight-w Pauli strings, deterministic lexicographic order."""
    if not 0 <= w <= n:
        raise PauliError("weight out of range")
    if w == 0:
        return [identity(n)]
    out = []
    for sites in itertools.combinations(range(n), w):
        for letters in itertools.product("XYZ", repeat=w):
            x = z = g = 0
            for site, c in zip(sites, letters):
                xb, zb = _LETTER_BITS[c]
                x |= xb << site
                z |= zb << site
                if c == "Y":
                    g += 1
            out.append(PauliString(n, x, z, g))
    return out


def paulis_up_to_weight(n: int, w_max: int) -> list[PauliString]:
    """Identity plus all operators of weight 1..w_max, in weight order."""
    out = []
    for w in range(w_max + 1):
        out.extend(enumerate_paulis(n, w))
    return out
