"""Statevector simulation of RyRz variational circuits.

Qubit 1 is the most significant bit of a computational-basis index,
matching `paulimap`.  Rotation gates follow the half-angle convention
exp(-i theta sigma / 2).  Expectation values of a PauliOperator come in
three flavours: exact (amplitude traversal), shot-sampled, and sampled
under a parametric noise model (per-gate depolarizing plus readout
confusion, with optional linear-inversion mitigation).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .paulimap import PauliOperator, group_qubitwise_commuting

LINEAR = "linear"
FULL = "full"

EXACT = "exact"
SAMPLED = "sampled"
NOISY = "noisy"

_NORM_TOL = 1e-10
_I_POW = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


@dataclass(frozen=True)
class AnsatzSpec:
    """RyRz circuit shape: rotation layer pairs separated by CNOT blocks."""

    qubits: int
    depth: int = 1
    entangler: str = LINEAR

    def __post_init__(self):
        if self.qubits < 1:
            raise ValueError("ansatz needs at least one qubit")
        if self.depth < 0:
            raise ValueError("depth must be non-negative")
        if self.entangler not in (LINEAR, FULL):
            raise ValueError(f"unknown entangler {self.entangler!r}")

    @property
    def parameter_count(self) -> int:
        return 2 * self.qubits * (self.depth + 1)


def entangler_pairs(qubits: int, entangler: str) -> tuple:
    """(control, target) CNOT pairs of one entangling block, in order."""
    if entangler == LINEAR:
        return tuple((q, q + 1) for q in range(1, qubits))
    if entangler == FULL:
        return tuple(
            (i, j) for i in range(1, qubits + 1) for j in range(i + 1, qubits + 1)
        )
    raise ValueError(f"unknown entangler {entangler!r}")


@lru_cache(maxsize=64)
def ansatz_operations(ansatz: AnsatzSpec) -> tuple:
    """Flat gate program: ("ry"|"rz", qubit, param index) and ("cx", control, target).

    Each of the depth+1 blocks is an Ry layer then an Rz layer over
    qubits 1..Q; an entangler block separates consecutive rotation blocks.
    """
    ops = []
    index = 0
    for block in range(ansatz.depth + 1):
        for q in range(1, ansatz.qubits + 1):
            ops.append(("ry", q, index))
            index += 1
        for q in range(1, ansatz.qubits + 1):
            ops.append(("rz", q, index))
            index += 1
        if block < ansatz.depth:
            for control, target in entangler_pairs(ansatz.qubits, ansatz.entangler):
                ops.append(("cx", control, target))
    return tuple(ops)


def _ry(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _rz(theta: float) -> np.ndarray:
    phase = cmath.exp(-0.5j * theta)
    return np.array([[phase, 0.0], [0.0, phase.conjugate()]], dtype=complex)


def _rx(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


_PAULI_GATES = (
    None,
    np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex),
    np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex),
    np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex),
)


@lru_cache(maxsize=256)
def _pair_indices(qubits: int, qubit: int):
    bit = 1 << (qubits - qubit)
    idx = np.arange(1 << qubits)
    j0 = idx[(idx & bit) == 0]
    j1 = j0 | bit
    j0.flags.writeable = False
    j1.flags.writeable = False
    return j0, j1


@lru_cache(maxsize=256)
def _cnot_table(qubits: int, control: int, target: int):
    idx = np.arange(1 << qubits)
    cbit = 1 << (qubits - control)
    tbit = 1 << (qubits - target)
    table = np.where(idx & cbit, idx ^ tbit, idx)
    table.flags.writeable = False
    return table


def _apply_single(state: np.ndarray, qubits: int, qubit: int, gate: np.ndarray) -> None:
    j0, j1 = _pair_indices(qubits, qubit)
    a = state[j0]
    b = state[j1]
    state[j0] = gate[0, 0] * a + gate[0, 1] * b
    state[j1] = gate[1, 0] * a + gate[1, 1] * b


def _apply_cnot(state: np.ndarray, qubits: int, control: int, target: int) -> None:
    state[:] = state[_cnot_table(qubits, control, target)]


def prepare_state(ansatz: AnsatzSpec, params) -> np.ndarray:
    """Run the circuit on |0...0> and return the 2^Q statevector."""
    values = np.asarray(params, dtype=float).ravel()
    if values.size != ansatz.parameter_count:
        raise ValueError(
            f"expected {ansatz.parameter_count} parameters, got {values.size}"
        )
    state = np.zeros(1 << ansatz.qubits, dtype=complex)
    state[0] = 1.0
    for op in ansatz_operations(ansatz):
        if op[0] == "cx":
            _apply_cnot(state, ansatz.qubits, op[1], op[2])
        elif op[0] == "ry":
            _apply_single(state, ansatz.qubits, op[1], _ry(values[op[2]]))
        else:
            _apply_single(state, ansatz.qubits, op[1], _rz(values[op[2]]))
    norm = float(np.sum(np.abs(state) ** 2))
    if abs(norm - 1.0) > _NORM_TOL:
        raise RuntimeError(f"state norm drifted to {norm}")
    return state


def exact_expectation(state: np.ndarray, operator: PauliOperator) -> float:
    """<psi| operator |psi> by mask-indexed amplitude traversal."""
    psi = np.asarray(state, dtype=complex).ravel()
    if psi.size != 1 << operator.qubits:
        raise ValueError("state dimension does not match the operator register")
    idx = np.arange(psi.size)
    total = 0.0 + 0.0j
    for string, coef in operator:
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & string.z) & 1)
        phase = _I_POW[(string.x & string.z).bit_count() & 3]
        total += coef * phase * np.sum(np.conj(psi[idx ^ string.x]) * signs * psi)
    if abs(total.imag) > 1e-10 * max(1.0, abs(total.real)):
        raise RuntimeError("expectation of a Hermitian operator came out complex")
    return float(total.real)


@dataclass(frozen=True)
class ExpectationEstimate:
    value: float
    std_error: float
    shots_used: int
    mode: str


def symmetric_confusion(flip: float) -> tuple:
    """2x2 readout confusion with equal 0->1 and 1->0 flip probability."""
    if not 0.0 <= flip <= 1.0:
        raise ValueError("flip probability must lie in [0, 1]")
    return ((1.0 - flip, flip), (flip, 1.0 - flip))


@dataclass(frozen=True)
class NoiseSpec:
    """Depolarizing rates per gate kind plus per-qubit readout confusion.

    `readout` is either None (ideal), one 2x2 row-stochastic matrix
    P(measured|true) shared by all qubits, or a per-qubit tuple of such
    matrices.  The seed drives every stochastic choice of a noisy run.
    """

    p1: float = 2e-4
    p2: float = 7e-3
    readout: tuple = symmetric_confusion(2e-2)
    seed: int = 0

    def __post_init__(self):
        for name, p in (("p1", self.p1), ("p2", self.p2)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} must be a probability")
        if self.readout is not None:
            for row in self._flat_rows():
                if min(row) < -1e-12 or abs(sum(row) - 1.0) > 1e-9:
                    raise ValueError("confusion rows must be probabilities summing to 1")

    def _flat_rows(self):
        first = self.readout[0]
        matrices = (self.readout,) if np.isscalar(first[0]) else self.readout
        return [tuple(row) for mat in matrices for row in mat]

    def readout_matrices(self, qubits: int):
        """Per-qubit confusion matrices (qubit 1 first), or None if ideal."""
        if self.readout is None:
            return None
        first = self.readout[0]
        if np.isscalar(first[0]):
            mat = np.asarray(self.readout, dtype=float)
            return [mat] * qubits
        if len(self.readout) != qubits:
            raise ValueError("per-qubit readout list does not match register size")
        return [np.asarray(m, dtype=float) for m in self.readout]


def _total_confusion(matrices) -> np.ndarray:
    total = np.array([[1.0]])
    for mat in matrices:
        total = np.kron(total, mat)
    return total


def _measurement_settings(operator: PauliOperator, grouping: bool):
    """Exact identity offset plus (x, z, member indices) per sampled setting."""
    offset = operator.identity_offset
    if grouping:
        settings = []
        for group in group_qubitwise_commuting(operator):
            members = tuple(
                i for i in group.members if not operator.strings[i].is_identity
            )
            if members:
                settings.append((group.x, group.z, members))
    else:
        settings = [
            (s.x, s.z, (i,))
            for i, s in enumerate(operator.strings)
            if not s.is_identity
        ]
    return offset, settings


def _basis_change_gates(x: int, z: int, qubits: int):
    """Single-qubit rotations taking the setting's basis to the Z basis."""
    gates = []
    for q in range(1, qubits + 1):
        bit = 1 << (qubits - q)
        if x & bit:
            gates.append((q, _rx(math.pi / 2) if z & bit else _ry(-math.pi / 2)))
    return gates


def _outcome_values(operator: PauliOperator, members, dim: int) -> np.ndarray:
    """Summed member eigenvalues for every measured basis index."""
    idx = np.arange(dim)
    values = np.zeros(dim)
    for i in members:
        string = operator.strings[i]
        support = string.x | string.z
        signs = 1.0 - 2.0 * (np.bitwise_count(idx & support) & 1)
        values += operator.coefficients[i] * signs
    return values


def _tally(counts: np.ndarray, values: np.ndarray, shots: int):
    mean = float(counts @ values) / shots
    if shots > 1:
        second = float(counts @ values**2)
        variance = max(second - shots * mean * mean, 0.0) / (shots - 1)
    else:
        variance = 0.0
    return mean, variance / shots


def sampled_expectation(
    ansatz: AnsatzSpec,
    params,
    operator: PauliOperator,
    shots: int,
    grouping: bool = True,
    seed=None,
) -> ExpectationEstimate:
    """Estimate <operator> from finite measurement statistics."""
    if ansatz.qubits != operator.qubits:
        raise ValueError("ansatz and operator registers differ")
    if shots < 1:
        raise ValueError("need at least one shot")
    rng = np.random.default_rng(seed)
    state = prepare_state(ansatz, params)
    offset, settings = _measurement_settings(operator, grouping)
    value = offset
    variance = 0.0
    used = 0
    for x, z, members in settings:
        rotated = state.copy()
        for q, gate in _basis_change_gates(x, z, ansatz.qubits):
            _apply_single(rotated, ansatz.qubits, q, gate)
        probs = np.abs(rotated) ** 2
        counts = rng.multinomial(shots, probs / probs.sum())
        mean, var = _tally(counts, _outcome_values(operator, members, state.size), shots)
        value += mean
        variance += var
        used += shots
    return ExpectationEstimate(
        value=float(value), std_error=math.sqrt(variance), shots_used=used, mode=SAMPLED
    )


def _concrete_gates(ansatz: AnsatzSpec, values: np.ndarray, noise: NoiseSpec):
    """(kind, qubits, matrix, fault probability) per gate of the bare circuit."""
    gates = []
    for op in ansatz_operations(ansatz):
        if op[0] == "cx":
            gates.append(("2q", (op[1], op[2]), None, noise.p2))
        elif op[0] == "ry":
            gates.append(("1q", (op[1],), _ry(values[op[2]]), noise.p1))
        else:
            gates.append(("1q", (op[1],), _rz(values[op[2]]), noise.p1))
    return gates


def _apply_gate(state: np.ndarray, qubits: int, gate) -> None:
    kind, touched, matrix, _ = gate
    if kind == "2q":
        _apply_cnot(state, qubits, touched[0], touched[1])
    else:
        _apply_single(state, qubits, touched[0], matrix)


def _inject_fault(state: np.ndarray, qubits: int, gate, rng) -> None:
    """Uniformly random non-identity Pauli on the qubits the gate touched."""
    kind, touched, _, _ = gate
    if kind == "1q":
        _apply_single(state, qubits, touched[0], _PAULI_GATES[rng.integers(1, 4)])
    else:
        pick = int(rng.integers(1, 16))
        for qubit, letter in zip(touched, (pick >> 2, pick & 3)):
            if letter:
                _apply_single(state, qubits, qubit, _PAULI_GATES[letter])


def noisy_expectation(
    ansatz: AnsatzSpec,
    params,
    operator: PauliOperator,
    shots: int,
    noise: NoiseSpec,
    mitigate: bool = True,
    grouping: bool = True,
) -> ExpectationEstimate:
    """Estimate <operator> under depolarizing gate faults and readout error.

    Shots are split into a fault-free bulk (one multinomial draw from the
    clean distribution) and individually simulated faulty trajectories,
    which is an exact unravelling of the Pauli channel.  Basis-change
    rotations are as fault-prone as the ansatz's own gates.  Mitigation
    inverts the readout confusion on the measured frequencies, clipping
    negative entries and renormalizing.
    """
    if ansatz.qubits != operator.qubits:
        raise ValueError("ansatz and operator registers differ")
    if shots < 1:
        raise ValueError("need at least one shot")
    qubits = ansatz.qubits
    dim = 1 << qubits
    values = np.asarray(params, dtype=float).ravel()
    if values.size != ansatz.parameter_count:
        raise ValueError(
            f"expected {ansatz.parameter_count} parameters, got {values.size}"
        )
    rng = np.random.default_rng(noise.seed)
    base_gates = _concrete_gates(ansatz, values, noise)
    readout = noise.readout_matrices(qubits)
    confusion = inverse = None
    if readout is not None:
        confusion = _total_confusion(readout)
        try:
            inverse = _total_confusion([np.linalg.inv(m) for m in readout])
        except np.linalg.LinAlgError as err:
            raise ValueError("readout confusion matrix is singular") from err

    offset, settings = _measurement_settings(operator, grouping)
    value = offset
    variance = 0.0
    used = 0
    for x, z, members in settings:
        gates = base_gates + [
            ("1q", (q,), mat, noise.p1) for q, mat in _basis_change_gates(x, z, qubits)
        ]
        prefixes = [np.zeros(dim, dtype=complex)]
        prefixes[0][0] = 1.0
        for gate in gates:
            nxt = prefixes[-1].copy()
            _apply_gate(nxt, qubits, gate)
            prefixes.append(nxt)
        fault_ps = np.array([g[3] for g in gates])
        clean_prob = float(np.prod(1.0 - fault_ps))

        counts = np.zeros(dim)
        n_faulty = int(rng.binomial(shots, 1.0 - clean_prob)) if clean_prob < 1.0 else 0
        clean_dist = np.abs(prefixes[-1]) ** 2
        clean_dist /= clean_dist.sum()
        if confusion is not None:
            clean_dist = clean_dist @ confusion
        counts += rng.multinomial(shots - n_faulty, clean_dist)

        if n_faulty:
            survive = np.concatenate(([1.0], np.cumprod(1.0 - fault_ps)[:-1]))
            first_fault = fault_ps * survive
            first_fault /= first_fault.sum()
            for g_first in rng.choice(len(gates), size=n_faulty, p=first_fault):
                state = prefixes[g_first + 1].copy()
                _inject_fault(state, qubits, gates[g_first], rng)
                for later in range(g_first + 1, len(gates)):
                    _apply_gate(state, qubits, gates[later])
                    if rng.random() < fault_ps[later]:
                        _inject_fault(state, qubits, gates[later], rng)
                dist = np.abs(state) ** 2
                dist /= dist.sum()
                if confusion is not None:
                    dist = dist @ confusion
                counts[rng.choice(dim, p=dist)] += 1.0

        if mitigate and inverse is not None:
            freq = counts / shots @ inverse
            freq = np.clip(freq, 0.0, None)
            counts = shots * freq / freq.sum()
        mean, var = _tally(counts, _outcome_values(operator, members, dim), shots)
        value += mean
        variance += var
        used += shots
    return ExpectationEstimate(
        value=float(value), std_error=math.sqrt(variance), shots_used=used, mode=NOISY
    )


def embed_params(ansatz: AnsatzSpec, params) -> np.ndarray:
    """Lift parameters onto one more qubit, reproducing the same state.

    The new qubit becomes qubit 1 with every rotation angle zero.  It
    stays in |0> because both entangler layouts only ever use qubit 1 as
    a CNOT control, so the enlarged circuit prepares |0> (x) |previous>
    and expectation values over a nested operator block are unchanged.
    """
    values = np.asarray(params, dtype=float).ravel()
    if values.size != ansatz.parameter_count:
        raise ValueError(
            f"expected {ansatz.parameter_count} parameters, got {values.size}"
        )
    q = ansatz.qubits
    out = []
    for block in range(ansatz.depth + 1):
        base = 2 * q * block
        out.append(0.0)
        out.extend(values[base : base + q])
        out.append(0.0)
        out.extend(values[base + q : base + 2 * q])
    return np.asarray(out, dtype=float)


def sample_bitstrings(state: np.ndarray, shots: int, seed=None) -> np.ndarray:
    """Draw computational-basis outcomes (as integers) from |amplitude|^2."""
    if shots < 1:
        raise ValueError("need at least one shot")
    probs = np.abs(np.asarray(state, dtype=complex)) ** 2
    rng = np.random.default_rng(seed)
    return rng.choice(probs.size, size=shots, p=probs / probs.sum())


def format_bitstrings(samples, qubits: int) -> str:
    """One line per shot, qubit 1 leftmost."""
    return "\n".join(format(int(s), f"0{qubits}b") for s in samples) + "\n"
