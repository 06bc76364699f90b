"""Exact Pauli-string expansion of small real symmetric matrices.

A 2^n x 2^n matrix is written in the Hermitian basis
P(x, z) = i^{|x AND z|} X^x Z^z, where x and z are n-bit masks and qubit 1
corresponds to the most significant bit of a computational basis index.
For real symmetric input every coefficient is real and every retained
string contains an even number of Y letters.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

PRUNE_TOL = 1e-12

_LETTER_FOR_BITS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS_FOR_LETTER = {v: k for k, v in _LETTER_FOR_BITS.items()}
_I_POW = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-qubit Paulis, encoded as an (x, z) mask pair."""

    qubits: int
    x: int
    z: int

    def __post_init__(self):
        if self.qubits < 1:
            raise ValueError("a Pauli string needs at least one qubit")
        limit = 1 << self.qubits
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValueError("bitmask does not fit the qubit register")

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        x = z = 0
        for letter in label:
            if letter not in _BITS_FOR_LETTER:
                raise ValueError(f"unknown Pauli letter {letter!r}")
            xb, zb = _BITS_FOR_LETTER[letter]
            x = (x << 1) | xb
            z = (z << 1) | zb
        if not label:
            raise ValueError("empty Pauli label")
        return cls(qubits=len(label), x=x, z=z)

    @property
    def label(self) -> str:
        letters = []
        for q in range(self.qubits):
            shift = self.qubits - 1 - q
            letters.append(_LETTER_FOR_BITS[((self.x >> shift) & 1, (self.z >> shift) & 1)])
        return "".join(letters)

    @property
    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        return (self.x | self.z).bit_count()

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.qubits
        mat = np.zeros((dim, dim), dtype=complex)
        phase = _I_POW[(self.x & self.z).bit_count() & 3]
        for col in range(dim):
            sign = -1.0 if ((col & self.z).bit_count() & 1) else 1.0
            mat[col ^ self.x, col] = phase * sign
        return mat


@dataclass(frozen=True)
class PauliOperator:
    """Real linear combination of Pauli strings on a fixed register."""

    qubits: int
    strings: tuple
    coefficients: tuple

    def __post_init__(self):
        if len(self.strings) != len(self.coefficients):
            raise ValueError("strings and coefficients must pair up")
        for string in self.strings:
            if string.qubits != self.qubits:
                raise ValueError("all strings must act on the same register")

    def __len__(self) -> int:
        return len(self.strings)

    def __iter__(self) -> Iterator:
        return iter(zip(self.strings, self.coefficients))

    @property
    def identity_offset(self) -> float:
        return sum(c for s, c in self if s.is_identity)

    def to_matrix(self) -> np.ndarray:
        dim = 1 << self.qubits
        total = np.zeros((dim, dim), dtype=complex)
        for string, coef in self:
            total += coef * string.to_matrix()
        return total


def map_element(row: int, col: int, value: float, qubits: int) -> dict:
    """Expand value * |row><col| over the Pauli basis.

    Returns {(x, z): complex coefficient} with x fixed to row XOR col.
    """
    dim = 1 << qubits
    if not (0 <= row < dim and 0 <= col < dim):
        raise ValueError("basis index out of range")
    x = row ^ col
    scale = value / dim
    out = {}
    for z in range(dim):
        phase = _I_POW[(x & z).bit_count() & 3]
        sign = -1.0 if ((row & z).bit_count() & 1) else 1.0
        out[(x, z)] = scale * sign * phase
    return out


def map_operator(matrix: np.ndarray, tol: float = PRUNE_TOL) -> PauliOperator:
    """Expand a real symmetric matrix of power-of-two dimension exactly."""
    mat = np.asarray(matrix, dtype=float)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("matrix must be square")
    dim = mat.shape[0]
    if dim < 2 or dim & (dim - 1):
        raise ValueError("matrix dimension must be a power of two, at least 2")
    scale = float(np.max(np.abs(mat))) or 1.0
    if not np.allclose(mat, mat.T, rtol=0.0, atol=1e-12 * scale):
        raise ValueError("matrix must be symmetric")
    # symmetrizing makes the imaginary parts cancel exactly in floating point
    mat = 0.5 * (mat + mat.T)
    qubits = dim.bit_length() - 1

    accum: dict = {}
    rows, cols = np.nonzero(mat)
    for row, col in zip(rows.tolist(), cols.tolist()):
        for key, coef in map_element(row, col, mat[row, col], qubits).items():
            accum[key] = accum.get(key, 0.0 + 0.0j) + coef

    strings = []
    coefficients = []
    for (x, z), coef in accum.items():
        if abs(coef) <= tol:
            continue
        if abs(coef.imag) > 1e-9 * max(abs(coef), 1.0):
            raise ValueError("expansion of a symmetric matrix produced a complex weight")
        strings.append(PauliString(qubits=qubits, x=x, z=z))
        coefficients.append(float(coef.real))

    order = sorted(range(len(strings)), key=lambda i: strings[i].label)
    return PauliOperator(
        qubits=qubits,
        strings=tuple(strings[i] for i in order),
        coefficients=tuple(coefficients[i] for i in order),
    )


@dataclass(frozen=True)
class MeasurementGroup:
    """Strings sharing one measurement setting, given by union masks."""

    x: int
    z: int
    members: tuple


def group_qubitwise_commuting(operator: PauliOperator) -> tuple:
    """Partition terms into qubit-wise commuting groups.

    Greedy first fit over terms sorted by descending absolute weight,
    so the heaviest strings claim measurement settings first.
    """
    order = sorted(
        range(len(operator)), key=lambda i: (-abs(operator.coefficients[i]), i)
    )
    groups: list = []
    for idx in order:
        string = operator.strings[idx]
        for group in groups:
            common = (string.x | string.z) & (group[0] | group[1])
            if ((string.x ^ group[0]) | (string.z ^ group[1])) & common:
                continue
            group[0] |= string.x
            group[1] |= string.z
            group[2].append(idx)
            break
        else:
            groups.append([string.x, string.z, [idx]])
    return tuple(
        MeasurementGroup(x=g[0], z=g[1], members=tuple(g[2])) for g in groups
    )


@dataclass(frozen=True)
class ResourceReport:
    qubits: int
    n_terms: int
    n_groups: int
    max_weight: int


def resource_report(operator: PauliOperator, groups=None) -> ResourceReport:
    if groups is None:
        groups = group_qubitwise_commuting(operator)
    return ResourceReport(
        qubits=operator.qubits,
        n_terms=len(operator),
        n_groups=len(groups),
        max_weight=max((s.weight for s in operator.strings), default=0),
    )


def operator_to_text(operator: PauliOperator) -> str:
    """One `LABEL coefficient` line per term; leftmost letter is qubit 1."""
    lines = [f"{s.label} {c:.17g}" for s, c in operator]
    return "\n".join(lines) + "\n"


def operator_from_text(text: str) -> PauliOperator:
    strings = []
    coefficients = []
    qubits = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"expected 'LABEL value', got {line!r}")
        string = PauliString.from_label(parts[0])
        if qubits is None:
            qubits = string.qubits
        elif string.qubits != qubits:
            raise ValueError("labels of differing length in one operator")
        strings.append(string)
        coefficients.append(float(parts[1]))
    if qubits is None:
        raise ValueError("no Pauli terms found")
    return PauliOperator(qubits=qubits, strings=tuple(strings), coefficients=tuple(coefficients))
