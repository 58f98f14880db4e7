"""Network data model: parties, entanglement links, the JSON file format and
the undirected hypergraph view used by flow and classification."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

LINK_KINDS = ("gen_epr", "gen_ghz", "reduced_ghz", "w_state", "reduced_w", "schmidt")

# JSON field carrying the link parameter, per kind.
ANGLE_FIELD = {"gen_epr": "theta", "gen_ghz": "phi", "reduced_ghz": "vartheta"}

# Kinds specified as density matrices rather than pure states.
MIXED_KINDS = frozenset({"reduced_ghz", "reduced_w"})

DEFAULT_ANGLE = math.pi / 4

COEFF_SUM_TOL = 1e-12


class NetworkFormatError(ValueError):
    """A network document failed to parse or validate."""


@dataclass(frozen=True)
class Link:
    """One group of identical shared resources between a fixed set of parties.

    ``endpoints`` are party indices; ``multiplicity`` counts identical
    instances of the link so capacities read off directly.
    """

    kind: str
    endpoints: tuple[int, ...]
    multiplicity: int = 1
    angle: float | None = None
    coeffs: tuple[float, ...] | None = None

    def arity(self) -> int:
        return len(self.endpoints)

    def is_mixed(self) -> bool:
        return self.kind in MIXED_KINDS

    def schmidt_dim(self) -> int:
        return len(self.coeffs) if self.coeffs is not None else 0

    def qubits_per_instance(self) -> int:
        if self.kind == "gen_epr" or self.kind in MIXED_KINDS:
            return 2
        if self.kind == "gen_ghz":
            return len(self.endpoints)
        if self.kind == "w_state":
            return 3
        if self.kind == "schmidt":
            return 2 * self.qubits_per_leg()
        raise ValueError(f"unknown link kind {self.kind!r}")

    def qubits_per_leg(self) -> int:
        # Schmidt legs embed a d-level system into ceil(log2 d) qubits.
        if self.kind == "schmidt":
            return max(1, math.ceil(math.log2(max(2, self.schmidt_dim()))))
        return 1


@dataclass(frozen=True)
class NetworkSpec:
    """An entangled network: labelled parties plus a multiset of links."""

    name: str
    parties: tuple[str, ...]
    links: tuple[Link, ...]

    def party_index(self, party: int | str) -> int:
        if isinstance(party, str):
            try:
                return self.parties.index(party)
            except ValueError:
                raise KeyError(f"unknown party {party!r}") from None
        if not 0 <= party < len(self.parties):
            raise KeyError(f"party index {party} out of range")
        return party

    def label(self, index: int) -> str:
        return self.parties[index]

    def total_qubits(self) -> int:
        return sum(ln.qubits_per_instance() * ln.multiplicity for ln in self.links)

    def links_at(self, party: int | str) -> tuple[Link, ...]:
        i = self.party_index(party)
        return tuple(ln for ln in self.links if i in ln.endpoints)

    def has_mixed_links(self) -> bool:
        return any(ln.is_mixed() for ln in self.links)


@dataclass(frozen=True)
class Hypergraph:
    """Undirected weighted hypergraph over the parties.

    Edges aggregate all capacity-carrying links with the same endpoint set;
    endpoint tuples are sorted party indices.
    """

    parties: tuple[str, ...]
    edges: tuple[tuple[tuple[int, ...], float], ...] = field(default_factory=tuple)

    def party_index(self, party: int | str) -> int:
        if isinstance(party, str):
            try:
                return self.parties.index(party)
            except ValueError:
                raise KeyError(f"unknown party {party!r}") from None
        if not 0 <= party < len(self.parties):
            raise KeyError(f"party index {party} out of range")
        return party


def _link_errors(link: Link, n_parties: int, where: str) -> list[str]:
    errors = []
    if link.kind not in LINK_KINDS:
        errors.append(f"{where}: unknown link kind {link.kind!r}")
        return errors
    arity = len(link.endpoints)
    if any(not 0 <= e < n_parties for e in link.endpoints):
        errors.append(f"{where}: endpoint index out of range")
    if len(set(link.endpoints)) != arity:
        errors.append(f"{where}: endpoints must be distinct parties")
    if link.kind == "gen_ghz":
        if arity < 2:
            errors.append(f"{where}: gen_ghz needs at least 2 endpoints, got {arity}")
    elif link.kind == "w_state":
        if arity != 3:
            errors.append(f"{where}: w_state needs exactly 3 endpoints, got {arity}")
    elif arity != 2:
        errors.append(f"{where}: {link.kind} needs exactly 2 endpoints, got {arity}")
    if link.multiplicity < 1:
        errors.append(f"{where}: multiplicity must be >= 1")
    if link.kind in ANGLE_FIELD:
        if link.angle is None or not math.isfinite(link.angle):
            errors.append(f"{where}: {ANGLE_FIELD[link.kind]} must be a finite angle")
    elif link.angle is not None:
        errors.append(f"{where}: {link.kind} takes no angle parameter")
    if link.kind == "schmidt":
        if not link.coeffs:
            errors.append(f"{where}: schmidt link needs a coeffs vector")
        else:
            if any((not math.isfinite(c)) or c < 0 for c in link.coeffs):
                errors.append(f"{where}: schmidt coeffs must be finite and >= 0")
            elif abs(sum(link.coeffs) - 1.0) > COEFF_SUM_TOL:
                errors.append(
                    f"{where}: schmidt coeffs must sum to 1 "
                    f"(got {sum(link.coeffs):.17g})"
                )
    elif link.coeffs is not None:
        errors.append(f"{where}: {link.kind} takes no coeffs")
    return errors


def validate(spec: NetworkSpec) -> list[str]:
    """Return all invariant violations, one message each; empty means valid."""
    errors = []
    if len(set(spec.parties)) != len(spec.parties):
        errors.append("party labels must be unique")
    if any(not p for p in spec.parties):
        errors.append("party labels must be non-empty strings")
    for idx, link in enumerate(spec.links):
        errors.extend(_link_errors(link, len(spec.parties), f"link {idx}"))
    return errors


def _require_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise NetworkFormatError(f"{where}: unknown keys {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise NetworkFormatError(f"{where}: missing keys {sorted(missing)}")


def network_from_obj(obj: object) -> NetworkSpec:
    """Build a validated NetworkSpec from a decoded JSON object."""
    if not isinstance(obj, dict):
        raise NetworkFormatError("top level must be a JSON object")
    _require_keys(obj, {"name", "parties", "links"}, {"parties", "links"}, "top level")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise NetworkFormatError("name must be a string")
    parties = obj["parties"]
    if not isinstance(parties, list) or not all(isinstance(p, str) for p in parties):
        raise NetworkFormatError("parties must be a list of strings")
    index = {p: i for i, p in enumerate(parties)}
    if len(index) != len(parties):
        raise NetworkFormatError("party labels must be unique")

    raw_links = obj["links"]
    if not isinstance(raw_links, list):
        raise NetworkFormatError("links must be a list")
    links = []
    for pos, raw in enumerate(raw_links):
        where = f"link {pos}"
        if not isinstance(raw, dict):
            raise NetworkFormatError(f"{where}: must be an object")
        kind = raw.get("kind")
        if kind not in LINK_KINDS:
            raise NetworkFormatError(f"{where}: unknown link kind {kind!r}")
        allowed = {"kind", "endpoints", "multiplicity"}
        if kind in ANGLE_FIELD:
            allowed.add(ANGLE_FIELD[kind])
        if kind == "schmidt":
            allowed.add("coeffs")
        _require_keys(raw, allowed, {"kind", "endpoints"}, where)

        raw_eps = raw["endpoints"]
        if not isinstance(raw_eps, list) or not all(isinstance(e, str) for e in raw_eps):
            raise NetworkFormatError(f"{where}: endpoints must be a list of party labels")
        endpoints = []
        for e in raw_eps:
            if e not in index:
                raise NetworkFormatError(f"{where}: endpoint {e!r} is not a declared party")
            endpoints.append(index[e])

        multiplicity = raw.get("multiplicity", 1)
        if not isinstance(multiplicity, int) or isinstance(multiplicity, bool):
            raise NetworkFormatError(f"{where}: multiplicity must be an integer")

        angle = None
        if kind in ANGLE_FIELD:
            angle = raw.get(ANGLE_FIELD[kind], DEFAULT_ANGLE)
            if not isinstance(angle, (int, float)) or isinstance(angle, bool):
                raise NetworkFormatError(f"{where}: {ANGLE_FIELD[kind]} must be a number")
            angle = float(angle)

        coeffs = None
        if kind == "schmidt":
            raw_coeffs = raw.get("coeffs")
            if not isinstance(raw_coeffs, list) or not raw_coeffs or not all(
                isinstance(c, (int, float)) and not isinstance(c, bool) for c in raw_coeffs
            ):
                raise NetworkFormatError(f"{where}: coeffs must be a non-empty list of numbers")
            coeffs = tuple(float(c) for c in raw_coeffs)

        links.append(Link(kind, tuple(endpoints), multiplicity, angle, coeffs))

    spec = NetworkSpec(name=name, parties=tuple(parties), links=tuple(links))
    errors = validate(spec)
    if errors:
        raise NetworkFormatError("; ".join(errors))
    return spec


def parse_network(text: str) -> NetworkSpec:
    """Parse a UTF-8 JSON network document into a validated NetworkSpec."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise NetworkFormatError(
            f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    return network_from_obj(obj)


def network_to_obj(spec: NetworkSpec) -> dict:
    links = []
    for link in spec.links:
        entry: dict = {
            "kind": link.kind,
            "endpoints": [spec.parties[e] for e in link.endpoints],
            "multiplicity": link.multiplicity,
        }
        if link.kind in ANGLE_FIELD:
            entry[ANGLE_FIELD[link.kind]] = link.angle
        if link.kind == "schmidt":
            entry["coeffs"] = list(link.coeffs or ())
        links.append(entry)
    return {"name": spec.name, "parties": list(spec.parties), "links": links}


def serialize_network(spec: NetworkSpec) -> str:
    """Canonical JSON rendering; parse(serialize(spec)) == spec."""
    return json.dumps(network_to_obj(spec), indent=2) + "\n"


def load_network(path: str) -> NetworkSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_network(fh.read())


def associated_hypergraph(spec: NetworkSpec) -> Hypergraph:
    """Map the network onto its undirected hypergraph.

    EPR and two-party GHZ groups become edges, wider GHZ groups become
    hyperedges, Schmidt links become edges; each instance contributes its
    marginal von Neumann entropy as weight (1 for maximally entangled
    instances), and groups with the same endpoint set aggregate.  Reduced
    (classically correlated) links and W states carry no channel capacity
    and are omitted.
    """
    from .entropy import VON_NEUMANN, entropy, link_marginal_spectrum

    weights: dict[tuple[int, ...], float] = {}
    for link in spec.links:
        if link.kind not in ("gen_epr", "gen_ghz", "schmidt"):
            continue
        key = tuple(sorted(link.endpoints))
        unit = entropy(link_marginal_spectrum(link, link.endpoints[0]), VON_NEUMANN)
        weights[key] = weights.get(key, 0.0) + link.multiplicity * unit
    edges = tuple(sorted(weights.items(), key=lambda kv: (len(kv[0]), kv[0])))
    return Hypergraph(parties=spec.parties, edges=edges)
