"""Entanglement across network cuts: one-vs-rest marginals, pairwise values,
and the Wootters two-qubit entanglement of formation."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .entropy import (
    EIGENVALUE_CLAMP,
    EntropyFunctional,
    VON_NEUMANN,
    binary_entropy,
    entropy,
    link_marginal_spectrum,
)
from .netmodel import NetworkSpec

PSD_TOL = 1e-9

_SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_SPIN_FLIP = np.kron(_SIGMA_Y, _SIGMA_Y)

# Kinds whose pairwise contribution is the two-qubit W-reduction EOF.
_W_KINDS = frozenset({"w_state", "reduced_w"})


@dataclass(frozen=True)
class CutValue:
    """A cut entanglement value; ``exact`` is False when the link structure
    only certifies it as a bound."""

    value: float
    exact: bool


def wootters_eof(dm: np.ndarray) -> float:
    """Entanglement of formation of a two-qubit density matrix.

    Uses the Wootters concurrence: C = max(0, l1 - l2 - l3 - l4) from the
    decreasing square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy),
    then EOF = H((1 + sqrt(1 - C^2)) / 2).  Those roots equal the singular
    values of sqrt(rho~) sqrt(rho), which avoids square-rooting near-zero
    eigenvalues and keeps the value stable under local rotations.
    """
    rho = np.asarray(dm, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    if np.abs(rho - rho.conj().T).max() > PSD_TOL:
        raise ValueError("density matrix is not Hermitian within tolerance")
    if abs(np.trace(rho).real - 1.0) > PSD_TOL:
        raise ValueError("density matrix trace differs from 1 beyond tolerance")
    evals, vecs = np.linalg.eigh(rho)
    if evals.min() < -PSD_TOL:
        raise ValueError("density matrix is not PSD within tolerance")

    # Clamp rounding-level eigenvalues: spurious rank enters the concurrence
    # at sqrt scale and would wash out the last digits.
    evals = np.where(evals < EIGENVALUE_CLAMP, 0.0, evals)
    evals = evals / evals.sum()
    root = (vecs * np.sqrt(evals)) @ vecs.conj().T
    flipped_root = _SPIN_FLIP @ root.conj() @ _SPIN_FLIP  # sqrt of the spin-flipped state
    lam = np.linalg.svd(flipped_root @ root, compute_uv=False)
    c = max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3]))
    return binary_entropy((1.0 + math.sqrt(max(0.0, 1.0 - c * c))) / 2.0)


def w_pair_density(literal: bool = False) -> np.ndarray:
    """Two-qubit reduction of the three-qubit W state.

    The genuine reduction is 2/3 |psi+><psi+| + 1/3 |00><00| (concurrence
    2/3).  ``literal=True`` returns the fully dephased diagonal variant,
    which is separable and carries zero EOF; it is kept for comparison.
    """
    if literal:
        return np.diag([2.0 / 3.0, 0.0, 0.0, 1.0 / 3.0]).astype(complex)
    psi_plus = np.array([0.0, 1.0, 1.0, 0.0], dtype=complex) / math.sqrt(2.0)
    return (2.0 / 3.0) * np.outer(psi_plus, psi_plus.conj()) + (1.0 / 3.0) * np.diag(
        [1.0, 0.0, 0.0, 0.0]
    ).astype(complex)


W_PAIR_EOF = wootters_eof(w_pair_density())


def _marginal_terms(spec: NetworkSpec, i: int, f: EntropyFunctional) -> list[float]:
    terms = []
    for link in spec.links:
        if i not in link.endpoints:
            continue
        unit = entropy(link_marginal_spectrum(link, i), f)
        terms.extend([unit] * link.multiplicity)
    return terms


def marginal_entanglement(
    spec: NetworkSpec, party: int | str, f: EntropyFunctional = VON_NEUMANN
) -> CutValue:
    """One-vs-rest entanglement of a party, summed link by link.

    Exact for the additive families (von Neumann, Renyi); for Tsallis and
    Unified the sum bounds the true value in the direction given by the
    functional's tensor regime and is flagged inexact.
    """
    i = spec.party_index(party)
    return CutValue(math.fsum(_marginal_terms(spec, i, f)), exact=f.is_additive)


def _pairwise_terms(
    spec: NetworkSpec, i: int, j: int, f: EntropyFunctional, literal_w_reduction: bool
) -> tuple[list[float], bool]:
    if literal_w_reduction:
        w_value = wootters_eof(w_pair_density(literal=True))
    else:
        w_value = W_PAIR_EOF
    pair = {i, j}
    terms: list[float] = []
    ghz_spanning = False
    w_units = 0
    other_pair_units = 0
    for link in spec.links:
        eps = set(link.endpoints)
        if not pair <= eps:
            continue
        if link.kind in _W_KINDS:
            if f.family != "von_neumann":
                raise ValueError(
                    "pairwise W-state contributions are defined for the "
                    "von Neumann (EOF) functional only"
                )
            terms.extend([w_value] * link.multiplicity)
            w_units += link.multiplicity
        elif link.kind == "gen_ghz" and eps != pair:
            # GHZ spanning a third party reduces to classical correlation.
            ghz_spanning = True
            other_pair_units += link.multiplicity
        elif link.kind == "reduced_ghz":
            other_pair_units += link.multiplicity
        else:
            unit = entropy(link_marginal_spectrum(link, i), f)
            terms.extend([unit] * link.multiplicity)
            other_pair_units += link.multiplicity
    exact = (
        f.is_additive
        and not ghz_spanning
        and (w_units == 0 or (w_units == 1 and other_pair_units == 0))
    )
    return terms, exact


def pairwise_entanglement(
    spec: NetworkSpec,
    i: int | str,
    j: int | str,
    f: EntropyFunctional = VON_NEUMANN,
    literal_w_reduction: bool = False,
) -> CutValue:
    """Entanglement between two parties from the links they share.

    EPR, Schmidt and pair-contained GHZ instances contribute their marginal
    entropy; W-type instances contribute the Wootters EOF of the two-qubit
    W reduction; classically correlated reductions contribute zero.  The
    value is exact unless a GHZ spans a third party or W contributions mix
    with other correlated links (then it is an upper bound).
    """
    ii, jj = spec.party_index(i), spec.party_index(j)
    if ii == jj:
        raise ValueError("pairwise entanglement needs two distinct parties")
    terms, exact = _pairwise_terms(spec, ii, jj, f, literal_w_reduction)
    return CutValue(math.fsum(terms), exact=exact)
