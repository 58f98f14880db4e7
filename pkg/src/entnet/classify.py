"""Topology classification: marginal-entropy characteristic vectors, local
measurement statistics, and the multipartite correlation discriminators that
separate networks the vectors cannot."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import VON_NEUMANN
from .measures import marginal_entanglement
from .netmodel import NetworkSpec

PROB_SUM_TOL = 1e-12
VECTOR_TOL = 1e-9
OUTCOME_QUBIT_LIMIT = 24


@dataclass(frozen=True, eq=False)
class OutcomeDistribution:
    """Joint distribution of computational-basis outcomes, one symbol per
    party (local qubit results packed in document order)."""

    parties: tuple[str, ...]
    party_arities: tuple[int, ...]
    support: dict[tuple[int, ...], float]

    def __post_init__(self):
        total = math.fsum(self.support.values())
        if abs(total - 1.0) > PROB_SUM_TOL:
            raise ValueError(f"outcome probabilities sum to {total:.17g}")

    def party_index(self, party: int | str) -> int:
        if isinstance(party, str):
            try:
                return self.parties.index(party)
            except ValueError:
                raise KeyError(f"unknown party {party!r}") from None
        if not 0 <= party < len(self.parties):
            raise KeyError(f"party index {party} out of range")
        return party

    def marginal(self, parties) -> "OutcomeDistribution":
        keep = sorted(self.party_index(p) for p in parties)
        merged: dict[tuple[int, ...], float] = {}
        for key, p in self.support.items():
            sub = tuple(key[i] for i in keep)
            merged[sub] = merged.get(sub, 0.0) + p
        return OutcomeDistribution(
            parties=tuple(self.parties[i] for i in keep),
            party_arities=tuple(self.party_arities[i] for i in keep),
            support=merged,
        )

    def shannon_entropy(self) -> float:
        return -math.fsum(p * math.log2(p) for p in self.support.values() if p > 0.0)


def outcome_distribution(spec: NetworkSpec, literal_w_reduction: bool = False) -> OutcomeDistribution:
    """Measure every qubit in the computational basis and group the results
    per party, built combinatorially link by link (sparse support)."""
    if spec.total_qubits() > OUTCOME_QUBIT_LIMIT:
        raise ValueError(
            f"outcome distribution limited to {OUTCOME_QUBIT_LIMIT} qubits, "
            f"network needs {spec.total_qubits()}"
        )
    n = len(spec.parties)
    support: dict[tuple[int, ...], float] = {(0,) * n: 1.0}
    arities = [1] * n
    for link in spec.links:
        branches = _link_branches(link, literal_w_reduction)
        dim = link.schmidt_dim() if link.kind == "schmidt" else 2
        for _ in range(link.multiplicity):
            merged: dict[tuple[int, ...], float] = {}
            for key, p in support.items():
                for outcomes, bp in branches:
                    sym = list(key)
                    for e, value in zip(link.endpoints, outcomes):
                        sym[e] = sym[e] * dim + value
                    key2 = tuple(sym)
                    merged[key2] = merged.get(key2, 0.0) + p * bp
            support = merged
            for e in link.endpoints:
                arities[e] *= dim
    return OutcomeDistribution(tuple(spec.parties), tuple(arities), support)


def _link_branches(link, literal_w_reduction: bool) -> list[tuple[tuple[int, ...], float]]:
    if link.kind in ("gen_epr", "gen_ghz", "reduced_ghz"):
        c2 = math.cos(link.angle) ** 2
        m = len(link.endpoints)
        return [((0,) * m, c2), ((1,) * m, 1.0 - c2)]
    if link.kind == "w_state":
        third = 1.0 / 3.0
        return [((1, 0, 0), third), ((0, 1, 0), third), ((0, 0, 1), third)]
    if link.kind == "reduced_w":
        third = 1.0 / 3.0
        if literal_w_reduction:
            return [((0, 0), 2.0 / 3.0), ((1, 1), third)]
        return [((0, 0), third), ((0, 1), third), ((1, 0), third)]
    if link.kind == "schmidt":
        return [((k, k), c) for k, c in enumerate(link.coeffs)]
    raise ValueError(f"unknown link kind {link.kind!r}")


def characteristic_vector(spec: NetworkSpec) -> np.ndarray:
    """Per-party marginal von Neumann entropies, in party order."""
    return np.array(
        [marginal_entanglement(spec, i, VON_NEUMANN).value for i in range(len(spec.parties))]
    )


@dataclass(frozen=True)
class LuDecision:
    """Outcome of comparing two networks by characteristic vector."""

    decision: str  # "equivalent" | "inequivalent" | "outside_hypothesis"
    vector_a: tuple[float, ...]
    vector_b: tuple[float, ...]
    reason: str


def _vector_test_applies(spec: NetworkSpec) -> bool:
    """The characteristic vector decides equivalence only for networks of
    maximally entangled EPR/GHZ links where each party pair shares at most
    one entangled state."""
    pair_counts: dict[tuple[int, int], int] = {}
    for link in spec.links:
        if link.kind not in ("gen_epr", "gen_ghz"):
            return False
        if abs(math.cos(link.angle) ** 2 - 0.5) > VECTOR_TOL:
            return False
        eps = sorted(link.endpoints)
        for a in range(len(eps)):
            for b in range(a + 1, len(eps)):
                key = (eps[a], eps[b])
                pair_counts[key] = pair_counts.get(key, 0) + link.multiplicity
    return all(count <= 1 for count in pair_counts.values())


def lu_equivalent(
    a: NetworkSpec, b: NetworkSpec, permutation_insensitive: bool = False
) -> LuDecision:
    """Decide local-unitary equivalence from characteristic vectors.

    Vectors align by party label (or positionally when the label sets
    differ); ``permutation_insensitive`` compares sorted vectors instead.
    Networks outside the decidable family come back ``outside_hypothesis``
    with both vectors attached.
    """
    va = tuple(float(x) for x in characteristic_vector(a))
    vb = tuple(float(x) for x in characteristic_vector(b))
    if len(a.parties) != len(b.parties):
        return LuDecision("inequivalent", va, vb, "party counts differ")
    if not (_vector_test_applies(a) and _vector_test_applies(b)):
        return LuDecision(
            "outside_hypothesis",
            va,
            vb,
            "vector test needs maximally entangled EPR/GHZ links, at most one per party pair",
        )
    if permutation_insensitive:
        left, right = sorted(va), sorted(vb)
        how = "sorted vectors"
    elif set(a.parties) == set(b.parties):
        order = [b.parties.index(p) for p in a.parties]
        left, right = va, tuple(vb[i] for i in order)
        how = "label-aligned vectors"
    else:
        left, right = va, vb
        how = "positionally aligned vectors"
    if all(abs(x - y) <= VECTOR_TOL for x, y in zip(left, right)):
        return LuDecision("equivalent", va, vb, f"{how} match")
    return LuDecision("inequivalent", va, vb, f"{how} differ")


def mutual_information_literal(d: OutcomeDistribution, parties) -> float:
    """Three-way Shannon mutual information
    H(XYZ) + H(X) + H(Y) + H(Z) - H(XY) - H(YZ) - H(XZ)."""
    idx = [d.party_index(p) for p in parties]
    if len(idx) != 3 or len(set(idx)) != 3:
        raise ValueError("tripartite mutual information needs exactly 3 distinct parties")
    x, y, z = idx
    h = lambda ps: d.marginal(ps).shannon_entropy()
    return h([x, y, z]) + h([x]) + h([y]) + h([z]) - h([x, y]) - h([y, z]) - h([x, z])


def dual_total_correlation(d: OutcomeDistribution, parties) -> float:
    """H(joint) minus the per-party conditional entropies given the rest.

    Non-negative, zero exactly on product distributions, and the quantity
    that reconciles the advertised discriminator values on cyclic networks.
    """
    idx = [d.party_index(p) for p in parties]
    if len(idx) < 2 or len(set(idx)) != len(idx):
        raise ValueError("dual total correlation needs at least 2 distinct parties")
    m = d.marginal(idx)
    k = len(idx)
    joint = m.shannon_entropy()
    drop_one = math.fsum(
        m.marginal([i for i in range(k) if i != j]).shannon_entropy() for j in range(k)
    )
    return drop_one - (k - 1) * joint


def doubled_entropy(spec: NetworkSpec, parties, literal_w_reduction: bool = False) -> float:
    """Entropy of the copy-and-trace state restricted to the given parties.

    Copying every qubit onto an ancilla and tracing the ancillas leaves a
    state diagonal in the computational basis, so this equals the Shannon
    entropy of the outcome distribution restricted to those parties.
    """
    dist = outcome_distribution(spec, literal_w_reduction)
    idx = [dist.party_index(p) for p in parties]
    return dist.marginal(idx).shannon_entropy()
