"""Monogamy checks for network entanglement: one-vs-rest against the sum of
pairwise values, plus the triangle-network bound on eavesdropper correlation."""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ._threads import worker_count
from .entropy import EntropyFunctional, VON_NEUMANN, entropy, fold_spectra, link_marginal_spectrum
from .measures import _marginal_terms, _pairwise_terms
from .netmodel import NetworkSpec

SLACK_TOL = 1e-9

# Saturation ratio for W-type links: at most five W reductions per
# three-party GHZ between the same pair keeps the distribution monogamous.
W_PER_GHZ_LIMIT = 5


@dataclass(frozen=True)
class MonogamyReport:
    """Outcome of one monogamy check for one party and one functional."""

    party: str
    functional: EntropyFunctional
    lhs: float
    rhs: float
    slack: float
    equality_predicted: bool
    holds: bool
    w_hypothesis: bool | None = None  # None when no W-type links touch the party

    def to_dict(self) -> dict:
        return {
            "party": self.party,
            "functional": self.functional.label(),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "equality_predicted": self.equality_predicted,
            "holds": self.holds,
            "w_hypothesis": self.w_hypothesis,
        }


def _w_hypothesis(spec: NetworkSpec, i: int) -> bool | None:
    """Check the per-neighbour W-to-GHZ saturation ratio, or None if no W links."""
    w_counts: dict[int, int] = {}
    ghz_counts: dict[int, int] = {}
    for link in spec.links:
        if i not in link.endpoints:
            continue
        others = [e for e in link.endpoints if e != i]
        if link.kind in ("w_state", "reduced_w"):
            for j in others:
                w_counts[j] = w_counts.get(j, 0) + link.multiplicity
        elif link.kind == "reduced_ghz" or (link.kind == "gen_ghz" and len(link.endpoints) >= 3):
            for j in others:
                ghz_counts[j] = ghz_counts.get(j, 0) + link.multiplicity
    if not w_counts:
        return None
    return all(l <= W_PER_GHZ_LIMIT * ghz_counts.get(j, 0) for j, l in w_counts.items())


def monogamy_report(
    spec: NetworkSpec,
    party: int | str,
    f: EntropyFunctional = VON_NEUMANN,
    literal_w_reduction: bool = False,
) -> MonogamyReport:
    """Compare a party's one-vs-rest entanglement with its pairwise sum.

    Equality is predicted exactly when every link at the party is a pure
    bipartite resource contained in one pair (no GHZ spanning three or more
    parties, no classically correlated or W-type reductions).
    """
    i = spec.party_index(party)
    lhs_terms = _marginal_terms(spec, i, f)
    rhs_terms: list[float] = []
    for j in range(len(spec.parties)):
        if j == i:
            continue
        terms, _ = _pairwise_terms(spec, i, j, f, literal_w_reduction)
        rhs_terms.extend(terms)
    lhs = math.fsum(lhs_terms)
    rhs = math.fsum(rhs_terms)
    slack = lhs - rhs

    equality_predicted = True
    for link in spec.links:
        if i not in link.endpoints:
            continue
        if link.kind in ("reduced_ghz", "reduced_w", "w_state"):
            equality_predicted = False
            break
        if link.kind == "gen_ghz" and len(link.endpoints) >= 3:
            equality_predicted = False
            break

    return MonogamyReport(
        party=spec.parties[i],
        functional=f,
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        equality_predicted=equality_predicted,
        holds=slack >= -SLACK_TOL,
        w_hypothesis=_w_hypothesis(spec, i),
    )


def monogamy_sweep(
    spec: NetworkSpec,
    f: EntropyFunctional = VON_NEUMANN,
    literal_w_reduction: bool = False,
) -> list[MonogamyReport]:
    """One monogamy report per party, in party order."""
    workers = worker_count()
    parties = range(len(spec.parties))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(lambda i: monogamy_report(spec, i, f, literal_w_reduction), parties))
    return [monogamy_report(spec, i, f, literal_w_reduction) for i in parties]


def qkd_leakage_bound(spec: NetworkSpec, a: int | str, b: int | str, e: int | str) -> float:
    """Upper bound on the a-to-eavesdropper entanglement in a three-party network.

    Returns E(a | b,e) - E(a | b); monogamy makes this an upper bound on
    E(a | e), tightening what an eavesdropper holding one corner of the
    triangle can correlate with.
    """
    ia, ib, ie = spec.party_index(a), spec.party_index(b), spec.party_index(e)
    if len({ia, ib, ie}) != 3:
        raise ValueError("the three parties must be distinct")
    if set(range(len(spec.parties))) != {ia, ib, ie}:
        raise ValueError("the network must contain exactly the three given parties")
    lhs = math.fsum(_marginal_terms(spec, ia, VON_NEUMANN))
    ab_terms, _ = _pairwise_terms(spec, ia, ib, VON_NEUMANN, False)
    return lhs - math.fsum(ab_terms)


def exact_slack(spec: NetworkSpec, party: int | str, f: EntropyFunctional) -> float:
    """Monogamy slack from explicit product spectra, without the additive
    surrogate.

    Only defined for networks whose links are pure states contained in a
    single party pair (EPR, Schmidt, two-party GHZ); this is the setting in
    which the non-additive families have a definite inequality direction,
    fixed by the functional's tensor regime.
    """
    i = spec.party_index(party)
    per_neighbour: dict[int, list] = {}
    for link in spec.links:
        if i not in link.endpoints:
            continue
        if link.kind not in ("gen_epr", "gen_ghz", "schmidt") or len(link.endpoints) != 2:
            raise ValueError(
                "exact slack is defined for pure bipartite links only "
                f"(found {link.kind} with {len(link.endpoints)} endpoints)"
            )
        j = next(e for e in link.endpoints if e != i)
        sp = link_marginal_spectrum(link, i)
        per_neighbour.setdefault(j, []).extend([sp] * link.multiplicity)

    all_spectra = [sp for group in per_neighbour.values() for sp in group]
    lhs = entropy(fold_spectra(all_spectra), f) if all_spectra else 0.0
    rhs = math.fsum(entropy(fold_spectra(group), f) for group in per_neighbour.values())
    return lhs - rhs
