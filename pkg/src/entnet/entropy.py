"""Entropy functionals on finite spectra and the marginal spectra of links.

All four families are normalised to bits, so a maximally entangled pair
carries exactly one unit under each of them in the q -> 1 (s -> 0) limits:

    von Neumann      -sum p log2 p
    Renyi-alpha      log2(sum p^a) / (1 - a)
    Tsallis-q        (1 - sum p^q) / ((q - 1) ln 2)
    Unified-(q, s)   ((sum p^q)^s - 1) / ((1 - q) s ln 2)

With the 1/ln2 factor the Tsallis and Unified families converge to the
base-2 von Neumann and Renyi entropies, and Unified at s = 1 equals
Tsallis exactly.  Tensor-product behaviour (additive, subadditive or
superadditive by parameter regime) is unaffected by the positive scaling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SPECTRUM_SUM_TOL = 1e-12
EIGENVALUE_CLAMP = 1e-12

# Explicit product spectra are capped; beyond this the additive families
# must be used instead.
PRODUCT_SPECTRUM_CAP = 2**20

LN2 = math.log(2.0)

Spectrum = np.ndarray


class SpectrumSizeError(ValueError):
    """An explicit product spectrum would exceed the size cap."""


def as_spectrum(values) -> Spectrum:
    """Validate and normalise a probability vector.

    Entries may dip to -1e-12 (eigensolver noise) and are clamped to zero;
    the sum must be 1 within 1e-12.
    """
    p = np.asarray(values, dtype=float).ravel()
    if p.size == 0:
        raise ValueError("spectrum must be non-empty")
    if np.any(p < -EIGENVALUE_CLAMP):
        raise ValueError(f"spectrum has negative entry {p.min():.3e}")
    total = float(p.sum())
    if abs(total - 1.0) > SPECTRUM_SUM_TOL:
        raise ValueError(f"spectrum sums to {total:.17g}, expected 1")
    p = np.clip(p, 0.0, None)
    return p / p.sum()


@dataclass(frozen=True)
class EntropyFunctional:
    """One member of the von Neumann / Renyi / Tsallis / Unified families."""

    family: str
    q: float = 1.0
    s: float = 1.0

    def __post_init__(self):
        if self.family not in ("von_neumann", "renyi", "tsallis", "unified"):
            raise ValueError(f"unknown entropy family {self.family!r}")
        if self.family in ("renyi", "tsallis", "unified"):
            if not (self.q > 0.0) or self.q == 1.0:
                raise ValueError(f"{self.family} order must satisfy q > 0, q != 1")
        if self.family == "unified" and self.s == 0.0:
            raise ValueError("unified entropy needs s != 0")

    @classmethod
    def von_neumann(cls) -> "EntropyFunctional":
        return cls("von_neumann")

    @classmethod
    def renyi(cls, alpha: float) -> "EntropyFunctional":
        return cls("renyi", q=float(alpha))

    @classmethod
    def tsallis(cls, q: float) -> "EntropyFunctional":
        return cls("tsallis", q=float(q))

    @classmethod
    def unified(cls, q: float, s: float) -> "EntropyFunctional":
        return cls("unified", q=float(q), s=float(s))

    @property
    def is_additive(self) -> bool:
        return self.family in ("von_neumann", "renyi")

    @property
    def tensor_regime(self) -> str:
        """Behaviour on tensor products: additive, subadditive or superadditive."""
        if self.is_additive:
            return "additive"
        if self.family == "tsallis":
            return "subadditive" if self.q > 1.0 else "superadditive"
        q, s = self.q, self.s
        if (0.0 < q < 1.0 and s < 0.0) or (q > 1.0 and s > 0.0):
            return "subadditive"
        return "superadditive"

    def label(self) -> str:
        if self.family == "von_neumann":
            return "von-neumann"
        if self.family == "renyi":
            return f"renyi({self.q:g})"
        if self.family == "tsallis":
            return f"tsallis({self.q:g})"
        return f"unified({self.q:g},{self.s:g})"


VON_NEUMANN = EntropyFunctional.von_neumann()


def entropy(spectrum, functional: EntropyFunctional = VON_NEUMANN) -> float:
    """Entropy of a probability vector in bits, with 0 log 0 = 0."""
    p = as_spectrum(spectrum)
    p = p[p > 0.0]
    if functional.family == "von_neumann":
        value = float(-(p * np.log2(p)).sum())
    elif functional.family == "renyi":
        a = functional.q
        value = float(np.log2(np.power(p, a).sum()) / (1.0 - a))
    elif functional.family == "tsallis":
        q = functional.q
        value = float((1.0 - np.power(p, q).sum()) / ((q - 1.0) * LN2))
    else:
        q, s = functional.q, functional.s
        trace_q = float(np.power(p, q).sum())
        value = float((trace_q**s - 1.0) / ((1.0 - q) * s * LN2))
    return max(0.0, value)


def binary_entropy(x: float) -> float:
    """Shannon entropy of a bit with bias x, in bits."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"binary_entropy argument {x!r} outside [0, 1]")
    if x in (0.0, 1.0):
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def product_spectrum(a, b) -> Spectrum:
    """Spectrum of a tensor product: the outer product of the two vectors."""
    pa, pb = as_spectrum(a), as_spectrum(b)
    if pa.size * pb.size > PRODUCT_SPECTRUM_CAP:
        raise SpectrumSizeError(
            f"product spectrum of size {pa.size * pb.size} exceeds cap {PRODUCT_SPECTRUM_CAP}"
        )
    return np.outer(pa, pb).ravel()


def fold_spectra(spectra) -> Spectrum:
    """Explicit product spectrum of several factors, capped at 2**20 entries."""
    result = np.array([1.0])
    for sp in spectra:
        result = product_spectrum(result, sp)
    return result


def link_marginal_spectrum(link, party: int) -> Spectrum:
    """Spectrum of one link instance reduced onto one of its endpoints.

    All supported link kinds have endpoint-independent marginal spectra;
    the party argument is checked for membership only.
    """
    if party not in link.endpoints:
        raise ValueError(f"party {party} is not an endpoint of the link")
    if link.kind in ("gen_epr", "gen_ghz", "reduced_ghz"):
        c = math.cos(link.angle) ** 2
        return as_spectrum([c, 1.0 - c])
    if link.kind in ("w_state", "reduced_w"):
        return as_spectrum([2.0 / 3.0, 1.0 / 3.0])
    if link.kind == "schmidt":
        return as_spectrum(link.coeffs)
    raise ValueError(f"unknown link kind {link.kind!r}")
