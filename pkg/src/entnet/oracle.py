"""Dense state-vector / density-matrix engine used to brute-force verify the
fast additive paths on desk-scale networks.

Qubit ordering follows the network document: links in order, instances in
order, legs in endpoint order, so every fixture is reproducible bit for bit.
Qubit 0 is the most significant bit of a basis index.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import EIGENVALUE_CLAMP, Spectrum
from .measures import w_pair_density
from .netmodel import Link, NetworkSpec

PURE_QUBIT_LIMIT = 20
MIXED_QUBIT_LIMIT = 12
REDUCED_DIM_LIMIT = 2**12
DIAGONAL_QUBIT_LIMIT = 10

HERMITIAN_TOL = 1e-9
UNITARY_TOL = 1e-9


@dataclass(frozen=True)
class DenseState:
    """A pure amplitude vector or a mixed density matrix over labelled qubits.

    ``qubit_labels[q]`` records ownership as (party, link, instance, leg);
    multi-qubit Schmidt legs repeat the leg entry, one per embedded qubit.
    """

    kind: str  # "pure" | "mixed"
    data: np.ndarray
    qubit_labels: tuple[tuple[int, int, int, int], ...]

    @property
    def n_qubits(self) -> int:
        return len(self.qubit_labels)

    def qubit_positions(self, parties: set[int]) -> list[int]:
        return [q for q, lab in enumerate(self.qubit_labels) if lab[0] in parties]


def _pure_link_vector(link: Link) -> np.ndarray:
    if link.kind == "gen_epr":
        c, s = math.cos(link.angle), math.sin(link.angle)
        return np.array([c, 0.0, 0.0, s], dtype=complex)
    if link.kind == "gen_ghz":
        m = len(link.endpoints)
        vec = np.zeros(2**m, dtype=complex)
        vec[0] = math.cos(link.angle)
        vec[-1] = math.sin(link.angle)
        return vec
    if link.kind == "w_state":
        vec = np.zeros(8, dtype=complex)
        vec[4] = vec[2] = vec[1] = 1.0 / math.sqrt(3.0)
        return vec
    if link.kind == "schmidt":
        d = link.schmidt_dim()
        nq = link.qubits_per_leg()
        dim = 2**nq
        vec = np.zeros(dim * dim, dtype=complex)
        for k, c in enumerate(link.coeffs):
            vec[k * dim + k] = math.sqrt(c)
        return vec
    raise ValueError(f"{link.kind} is not a pure link")


def _mixed_link_matrix(link: Link, literal_w_reduction: bool) -> np.ndarray:
    if link.kind == "reduced_ghz":
        c2 = math.cos(link.angle) ** 2
        return np.diag([c2, 0.0, 0.0, 1.0 - c2]).astype(complex)
    if link.kind == "reduced_w":
        return w_pair_density(literal=literal_w_reduction)
    raise ValueError(f"{link.kind} is not a mixed link")


def _instance_labels(spec: NetworkSpec) -> list[tuple[int, int, int, int]]:
    labels = []
    for link_idx, link in enumerate(spec.links):
        for inst in range(link.multiplicity):
            if link.kind == "schmidt":
                nq = link.qubits_per_leg()
                for leg, party in enumerate(link.endpoints):
                    labels.extend([(party, link_idx, inst, leg)] * nq)
            else:
                for leg, party in enumerate(link.endpoints):
                    labels.append((party, link_idx, inst, leg))
    return labels


def build_global_state(spec: NetworkSpec, literal_w_reduction: bool = False) -> DenseState:
    """Tensor the link states together in document order.

    Pure statevector up to 20 qubits; any classically-reduced link forces
    the density-matrix path, capped at 12 qubits.
    """
    n = spec.total_qubits()
    mixed = spec.has_mixed_links()
    limit = MIXED_QUBIT_LIMIT if mixed else PURE_QUBIT_LIMIT
    if n > limit:
        raise ValueError(f"network needs {n} qubits, limit is {limit}")
    labels = tuple(_instance_labels(spec))
    if not mixed:
        psi = np.array([1.0], dtype=complex)
        for link in spec.links:
            vec = _pure_link_vector(link)
            for _ in range(link.multiplicity):
                psi = np.kron(psi, vec)
        return DenseState("pure", psi, labels)
    rho = np.array([[1.0]], dtype=complex)
    for link in spec.links:
        if link.is_mixed():
            mat = _mixed_link_matrix(link, literal_w_reduction)
        else:
            vec = _pure_link_vector(link)
            mat = np.outer(vec, vec.conj())
        for _ in range(link.multiplicity):
            rho = np.kron(rho, mat)
    return DenseState("mixed", rho, labels)


def reduced_density(state: DenseState, parties) -> DenseState:
    """Partial trace onto the qubits owned by the given party indices."""
    party_set = {parties} if isinstance(parties, int) else set(parties)
    keep = state.qubit_positions(party_set)
    n = state.n_qubits
    dk = 2 ** len(keep)
    if dk > REDUCED_DIM_LIMIT:
        raise ValueError(f"reduced dimension {dk} exceeds limit {REDUCED_DIM_LIMIT}")
    drop = [q for q in range(n) if q not in keep]
    kept_labels = tuple(state.qubit_labels[q] for q in keep)
    if state.kind == "pure":
        psi = state.data.reshape([2] * n) if n else state.data.reshape([1])
        if n:
            psi = np.transpose(psi, keep + drop)
        m = psi.reshape(dk, -1)
        rho = m @ m.conj().T
    else:
        rho_t = state.data.reshape([2] * (2 * n)) if n else state.data.reshape([1, 1])
        if n:
            order = keep + drop + [n + q for q in keep] + [n + q for q in drop]
            rho_t = np.transpose(rho_t, order)
        dt = 2 ** len(drop)
        rho = np.trace(rho_t.reshape(dk, dt, dk, dt), axis1=1, axis2=3)
    return DenseState("mixed", rho, kept_labels)


def spectrum_of(state: DenseState) -> Spectrum:
    """Eigenvalue spectrum of a density matrix, clamped and descending."""
    if state.kind != "mixed":
        raise ValueError("spectrum_of expects a density matrix")
    rho = state.data
    if np.abs(rho - rho.conj().T).max() > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian within tolerance")
    ev = np.linalg.eigvalsh(rho)
    if ev.min() < -HERMITIAN_TOL:
        raise ValueError(f"matrix has eigenvalue {ev.min():.3e} below tolerance")
    ev = np.where(ev < EIGENVALUE_CLAMP, 0.0, ev)
    ev = ev / ev.sum()
    return np.sort(ev)[::-1]


def _apply_on_axes(tensor: np.ndarray, op: np.ndarray, axes: list[int]) -> np.ndarray:
    k = len(axes)
    op_t = op.reshape([2] * (2 * k))
    moved = np.tensordot(op_t, tensor, axes=(list(range(k, 2 * k)), axes))
    return np.moveaxis(moved, list(range(k)), axes)


def apply_local_unitaries(state: DenseState, unitaries: dict[int, np.ndarray]) -> DenseState:
    """Conjugate the state by one unitary per party, each acting on that
    party's full local space."""
    n = state.n_qubits
    for party, u in unitaries.items():
        k = len(state.qubit_positions({party}))
        dim = 2**k
        u = np.asarray(u)
        if u.shape != (dim, dim):
            raise ValueError(f"party {party} unitary must be {dim}x{dim}, got {u.shape}")
        if np.abs(u @ u.conj().T - np.eye(dim)).max() > UNITARY_TOL:
            raise ValueError(f"party {party} operator deviates from unitarity")
    if state.kind == "pure":
        psi = state.data.reshape([2] * n)
        for party, u in unitaries.items():
            axes = state.qubit_positions({party})
            if axes:
                psi = _apply_on_axes(psi, np.asarray(u, dtype=complex), axes)
        return DenseState("pure", psi.reshape(-1), state.qubit_labels)
    rho = state.data.reshape([2] * (2 * n))
    for party, u in unitaries.items():
        axes = state.qubit_positions({party})
        if not axes:
            continue
        u = np.asarray(u, dtype=complex)
        rho = _apply_on_axes(rho, u, axes)
        rho = _apply_on_axes(rho, u.conj(), [n + a for a in axes])
    return DenseState("mixed", rho.reshape(2**n, 2**n), state.qubit_labels)


def measurement_probabilities(spec: NetworkSpec, literal_w_reduction: bool = False) -> np.ndarray:
    """Computational-basis outcome probabilities of the global state."""
    state = build_global_state(spec, literal_w_reduction)
    if state.kind == "pure":
        return np.abs(state.data) ** 2
    return np.real(np.diag(state.data)).clip(min=0.0)


def double_and_trace(spec: NetworkSpec, literal_w_reduction: bool = False) -> DenseState:
    """Copy every qubit onto a fresh ancilla in the computational basis and
    trace the ancillas out.

    The surviving state is diagonal with the measurement probabilities on
    the diagonal.  Materialised as a dense matrix, so capped at 10 qubits.
    """
    n = spec.total_qubits()
    if n > DIAGONAL_QUBIT_LIMIT:
        raise ValueError(f"doubled network of {n} qubits exceeds limit {DIAGONAL_QUBIT_LIMIT}")
    probs = measurement_probabilities(spec, literal_w_reduction)
    labels = tuple(_instance_labels(spec))
    return DenseState("mixed", np.diag(probs).astype(complex), labels)


def dense_marginal_spectrum(spec: NetworkSpec, party: int | str) -> Spectrum:
    """Spectrum of one party's reduced density matrix from the dense state."""
    i = spec.party_index(party)
    state = build_global_state(spec)
    return spectrum_of(reduced_density(state, {i}))


def dense_outcome_probs(
    spec: NetworkSpec, literal_w_reduction: bool = False
) -> dict[tuple[int, ...], float]:
    """Joint distribution of per-party outcome symbols from the dense state.

    Independent of the combinatorial construction in :mod:`entnet.classify`;
    per-party symbols accumulate leg by leg in document order.
    """
    probs = measurement_probabilities(spec, literal_w_reduction)
    labels = _instance_labels(spec)
    n = len(labels)
    # Per qubit: owner party and the radix its leg value contributes.
    legs: list[tuple[int, int, list[int]]] = []  # (party, leg_dim, qubit positions)
    for link_idx, link in enumerate(spec.links):
        for inst in range(link.multiplicity):
            for leg, party in enumerate(link.endpoints):
                positions = [
                    q for q, lab in enumerate(labels) if lab == (party, link_idx, inst, leg)
                ]
                dim = link.schmidt_dim() if link.kind == "schmidt" else 2
                legs.append((party, dim, positions))
    support: dict[tuple[int, ...], float] = {}
    n_parties = len(spec.parties)
    for z, p in enumerate(probs):
        if p <= 0.0:
            continue
        symbols = [0] * n_parties
        for party, dim, positions in legs:
            value = 0
            for q in positions:
                value = 2 * value + (z >> (n - 1 - q) & 1)
            symbols[party] = symbols[party] * dim + value
        key = tuple(symbols)
        support[key] = support.get(key, 0.0) + float(p)
    return support
