"""Network capacity: pairwise channel capacity, augmenting-path max-flow on
the associated hypergraph, exhaustive min-cut, and the equality check.

Hyperedges are handled with a hub gadget: a hyperedge of weight w becomes a
hub arc pair (h_in -> h_out, capacity w) with arcs v -> h_in and h_out -> v
of unbounded capacity for every endpoint v.  Any route through the shared
resource must traverse the hub arc, so total use across all endpoint pairs
is bounded by w, and a crossing hyperedge costs w exactly once in a cut.
Plain edges become two opposing arcs sharing one capacity pool through the
usual residual bookkeeping.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ._threads import worker_count
from .entropy import VON_NEUMANN, entropy, link_marginal_spectrum
from .netmodel import Hypergraph, NetworkSpec

FLOW_TOL = 1e-9
# Augmentation keeps going below the reporting tolerance so the
# terminating gap stays orders of magnitude under comparisons at FLOW_TOL.
RESIDUAL_TOL = 1e-12
ENUM_LIMIT = 24


@dataclass(frozen=True)
class FlowAssignment:
    """Net transfer of ``amount`` from ``source`` to ``target`` across one edge."""

    edge: tuple[str, ...]
    source: str
    target: str
    amount: float


@dataclass(frozen=True)
class AugmentingStep:
    """One augmentation: the rendered path, the amount pushed, and the hop
    list (edge endpoints, from, to) that makes the step replayable."""

    path: tuple[str, ...]
    pushed: float
    hops: tuple[tuple[tuple[str, ...], str, str], ...] = ()


@dataclass(frozen=True)
class FlowResult:
    value: float
    flows: tuple[FlowAssignment, ...]
    augmenting_paths: tuple[AugmentingStep, ...]


@dataclass(frozen=True)
class CutResult:
    side_s: tuple[str, ...]
    side_t: tuple[str, ...]
    capacity: float


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    equal: bool
    saturated: bool
    feasible: bool
    flow: FlowResult
    cut: CutResult


def capacity(spec: NetworkSpec, i: int | str, j: int | str) -> float:
    """Total channel capacity between two parties, in qubits per use.

    Every EPR or Schmidt instance between the pair and every GHZ instance
    incident to both contributes its marginal von Neumann entropy, which is
    1 for maximally entangled instances; classically correlated and W-type
    reductions carry nothing.
    """
    ii, jj = spec.party_index(i), spec.party_index(j)
    if ii == jj:
        raise ValueError("capacity needs two distinct parties")
    terms = []
    for link in spec.links:
        eps = set(link.endpoints)
        if not {ii, jj} <= eps:
            continue
        if link.kind == "gen_ghz" or (link.kind in ("gen_epr", "schmidt") and eps == {ii, jj}):
            unit = entropy(link_marginal_spectrum(link, ii), VON_NEUMANN)
            terms.append(link.multiplicity * unit)
    return math.fsum(terms)


class _Arc:
    __slots__ = ("tail", "head", "cap", "flow", "rev")

    def __init__(self, tail: int, head: int, cap: float):
        self.tail = tail
        self.head = head
        self.cap = cap
        self.flow = 0.0
        self.rev = -1

    def residual(self, arcs: list["_Arc"]) -> float:
        return self.cap - self.flow + arcs[self.rev].flow


def _add_pair(arcs: list[_Arc], adj: list[list[int]], u: int, v: int, cap_uv: float, cap_vu: float) -> int:
    a, b = _Arc(u, v, cap_uv), _Arc(v, u, cap_vu)
    arcs.append(a)
    arcs.append(b)
    a.rev, b.rev = len(arcs) - 1, len(arcs) - 2
    adj[u].append(len(arcs) - 2)
    adj[v].append(len(arcs) - 1)
    return len(arcs) - 2


def _push(arcs: list[_Arc], idx: int, amount: float) -> None:
    arc, rev = arcs[idx], arcs[arcs[idx].rev]
    cancel = min(amount, rev.flow)
    rev.flow -= cancel
    arc.flow += amount - cancel


def _net(arcs: list[_Arc], idx: int) -> float:
    return arcs[idx].flow - arcs[arcs[idx].rev].flow


def max_flow(h: Hypergraph, source: int | str, sink: int | str) -> FlowResult:
    """Maximum flow from source to sink by shortest augmenting paths.

    Deterministic given the hypergraph ordering: breadth-first search with
    neighbours visited in ascending vertex index, hubs after real vertices.
    A disconnected pair yields value 0.
    """
    s, t = h.party_index(source), h.party_index(sink)
    if s == t:
        raise ValueError("source and sink must differ")
    n = len(h.parties)
    labels = list(h.parties)

    arcs: list[_Arc] = []
    n_vertices = n + 2 * sum(1 for eps, _ in h.edges if len(eps) > 2)
    adj: list[list[int]] = [[] for _ in range(n_vertices)]
    hub_edge: dict[int, int] = {}
    arc_edge: list[int] = []
    edge_arcs: list[dict] = []
    next_hub = n

    def add_pair(u, v, cap_uv, cap_vu, edge_id):
        idx = _add_pair(arcs, adj, u, v, cap_uv, cap_vu)
        arc_edge.extend([edge_id, edge_id])
        return idx

    for edge_id, (eps, w) in enumerate(h.edges):
        if len(eps) == 2:
            u, v = eps
            idx = add_pair(u, v, w, w, edge_id)
            edge_arcs.append({"kind": "edge", "fwd": idx})
        else:
            h_in, h_out = next_hub, next_hub + 1
            next_hub += 2
            hub_edge[h_in] = edge_id
            hub_edge[h_out] = edge_id
            through = add_pair(h_in, h_out, w, 0.0, edge_id)
            ins, outs = {}, {}
            for v in eps:
                ins[v] = add_pair(v, h_in, math.inf, 0.0, edge_id)
                outs[v] = add_pair(h_out, v, math.inf, 0.0, edge_id)
            edge_arcs.append({"kind": "hyper", "through": through, "ins": ins, "outs": outs})
    for lst in adj:
        lst.sort(key=lambda idx: arcs[idx].head)

    paths: list[AugmentingStep] = []
    while True:
        parent = [-1] * n_vertices
        parent[s] = -2
        queue = [s]
        qi = 0
        while qi < len(queue) and parent[t] == -1:
            u = queue[qi]
            qi += 1
            for idx in adj[u]:
                arc = arcs[idx]
                if parent[arc.head] == -1 and arc.residual(arcs) > RESIDUAL_TOL:
                    parent[arc.head] = idx
                    queue.append(arc.head)
        if parent[t] == -1:
            break
        path_arcs = []
        v = t
        while v != s:
            idx = parent[v]
            path_arcs.append(idx)
            v = arcs[idx].tail
        path_arcs.reverse()
        bottleneck = min(arcs[idx].residual(arcs) for idx in path_arcs)
        for idx in path_arcs:
            _push(arcs, idx, bottleneck)
        paths.append(
            AugmentingStep(
                _render_path(path_arcs, arcs, s, n, labels, hub_edge, h),
                bottleneck,
                _path_hops(path_arcs, arcs, arc_edge, s, n, labels, h),
            )
        )

    value = math.fsum(_net(arcs, idx) for idx in adj[s] if arcs[idx].tail == s)
    flows = _assemble_flows(h, arcs, edge_arcs, labels)
    return FlowResult(value=value, flows=tuple(flows), augmenting_paths=tuple(paths))


def _path_hops(path_arcs, arcs, arc_edge, s, n_real, labels, h: Hypergraph):
    """Collapse hub traversals into (edge endpoints, from, to) hops."""
    hops = []
    pos = s
    pending = None
    entry = None
    for idx in path_arcs:
        arc = arcs[idx]
        if arc.head >= n_real:
            if pending is None:
                pending = arc_edge[idx]
                entry = pos
            continue
        if pending is not None:
            eps, _ = h.edges[pending]
            hops.append((tuple(labels[e] for e in eps), labels[entry], labels[arc.head]))
            pending = None
        else:
            eps, _ = h.edges[arc_edge[idx]]
            hops.append((tuple(labels[e] for e in eps), labels[arc.tail], labels[arc.head]))
        pos = arc.head
    return tuple(hops)


def _render_path(path_arcs, arcs, s, n_real, labels, hub_edge, h: Hypergraph) -> tuple[str, ...]:
    tokens = [labels[s]]
    pending = None
    for idx in path_arcs:
        head = arcs[idx].head
        if head >= n_real:
            pending = hub_edge[head]
            continue
        if pending is not None:
            eps, _ = h.edges[pending]
            group = [labels[e] for e in eps if e != head]
            tokens[-1] = "{" + ",".join(group) + "}"
            tokens.append(labels[head])
            pending = None
        else:
            tokens.append(labels[head])
    return tuple(tokens)


def _assemble_flows(h: Hypergraph, arcs, edge_arcs, labels) -> list[FlowAssignment]:
    flows: list[FlowAssignment] = []
    for (eps, _w), rec in zip(h.edges, edge_arcs):
        key = tuple(labels[e] for e in eps)
        if rec["kind"] == "edge":
            u, v = eps
            net = _net(arcs, rec["fwd"])
            if abs(net) > FLOW_TOL:
                src, dst = (u, v) if net > 0 else (v, u)
                flows.append(FlowAssignment(key, labels[src], labels[dst], abs(net)))
        else:
            nets = {}
            for v in eps:
                nets[v] = _net(arcs, rec["ins"][v]) - _net(arcs, rec["outs"][v])
            sources = [[v, amt] for v, amt in sorted(nets.items()) if amt > FLOW_TOL]
            sinks = [[v, -amt] for v, amt in sorted(nets.items()) if amt < -FLOW_TOL]
            si = 0
            for v, need in sinks:
                while need > FLOW_TOL and si < len(sources):
                    u, have = sources[si]
                    take = min(need, have)
                    flows.append(FlowAssignment(key, labels[u], labels[v], take))
                    need -= take
                    sources[si][1] -= take
                    if sources[si][1] <= FLOW_TOL:
                        si += 1
    return flows


def flow_constraint_violations(
    h: Hypergraph, result: FlowResult, source: int | str, sink: int | str
) -> list[str]:
    """Check capacity and conservation of a flow assignment; empty means feasible."""
    s, t = h.party_index(source), h.party_index(sink)
    labels = list(h.parties)
    weight = {tuple(labels[e] for e in eps): w for eps, w in h.edges}
    problems = []
    used: dict[tuple[str, ...], float] = {}
    balance = [0.0] * len(h.parties)
    for fa in result.flows:
        if fa.edge not in weight:
            problems.append(f"flow on unknown edge {fa.edge}")
            continue
        used[fa.edge] = used.get(fa.edge, 0.0) + fa.amount
        balance[h.party_index(fa.source)] -= fa.amount
        balance[h.party_index(fa.target)] += fa.amount
    for edge, amount in used.items():
        if amount > weight[edge] + FLOW_TOL:
            problems.append(f"edge {edge} carries {amount:.12g} over weight {weight[edge]:.12g}")
    for v, b in enumerate(balance):
        if v in (s, t):
            continue
        if abs(b) > FLOW_TOL:
            problems.append(f"conservation violated at {labels[v]} by {b:.12g}")
    if abs(-balance[s] - result.value) > FLOW_TOL:
        problems.append(f"value {result.value:.12g} differs from source outflow {-balance[s]:.12g}")
    if abs(balance[t] - result.value) > FLOW_TOL:
        problems.append(f"value {result.value:.12g} differs from sink inflow {balance[t]:.12g}")
    return problems


def replay_augmenting_paths(
    h: Hypergraph, result: FlowResult, source: int | str, sink: int | str
) -> list[str]:
    """Re-run the recorded augmentations against fresh capacities.

    Verifies per-step feasibility (shared pools on plain edges, single pool
    per hyperedge, cancellation included), path connectivity from source to
    sink, and that the pushed amounts sum to the flow value.  Empty result
    means the trace replays cleanly.
    """
    s, t = h.party_index(source), h.party_index(sink)
    src, dst = h.parties[s], h.parties[t]
    weight = {tuple(h.parties[e] for e in eps): w for eps, w in h.edges}
    net2: dict[tuple[str, ...], float] = {}
    hub_net: dict[tuple[str, ...], dict[str, float]] = {}
    problems = []
    for k, step in enumerate(result.augmenting_paths):
        where = f"step {k + 1}"
        if step.pushed <= 0.0:
            problems.append(f"{where}: non-positive push {step.pushed:.12g}")
        if not step.hops:
            problems.append(f"{where}: no hops recorded")
            continue
        if step.hops[0][1] != src or step.hops[-1][2] != dst:
            problems.append(f"{where}: does not run from {src} to {dst}")
        for (key, u, v), (_, u2, _) in zip(step.hops, step.hops[1:]):
            if v != u2:
                problems.append(f"{where}: hop chain breaks at {v} -> {u2}")
        for key, u, v in step.hops:
            if key not in weight:
                problems.append(f"{where}: unknown edge {key}")
                continue
            w = weight[key]
            if len(key) == 2:
                sign = 1.0 if (u, v) == key else -1.0
                net2[key] = net2.get(key, 0.0) + sign * step.pushed
                if abs(net2[key]) > w + FLOW_TOL:
                    problems.append(f"{where}: edge {key} exceeds weight {w:.12g}")
            else:
                d = hub_net.setdefault(key, {})
                d[u] = d.get(u, 0.0) + step.pushed
                d[v] = d.get(v, 0.0) - step.pushed
                usage = math.fsum(x for x in d.values() if x > 0.0)
                if usage > w + FLOW_TOL:
                    problems.append(f"{where}: hyperedge {key} exceeds weight {w:.12g}")
    total = math.fsum(step.pushed for step in result.augmenting_paths)
    if abs(total - result.value) > FLOW_TOL:
        problems.append(f"pushed amounts sum to {total:.12g}, flow value is {result.value:.12g}")
    return problems


def _cut_capacity(edges, in_s: set[int]) -> float:
    total = []
    for eps, w in edges:
        crosses = any(e in in_s for e in eps) and any(e not in in_s for e in eps)
        if crosses:
            total.append(w)
    return math.fsum(total)


def min_cut_enumerate(h: Hypergraph, source: int | str, sink: int | str) -> CutResult:
    """Exhaustive minimum source-sink cut over all bipartitions.

    Crossing hyperedges count their weight once.  Ties resolve to the
    lexicographically smallest source side.  Limited to 24 vertices.
    """
    s, t = h.party_index(source), h.party_index(sink)
    if s == t:
        raise ValueError("source and sink must differ")
    n = len(h.parties)
    if n > ENUM_LIMIT:
        raise ValueError(f"cut enumeration limited to {ENUM_LIMIT} parties, got {n}")
    others = [v for v in range(n) if v not in (s, t)]

    def scan(lo: int, hi: int) -> tuple[float, tuple[int, ...]]:
        best_cap, best_side = math.inf, None
        for mask in range(lo, hi):
            in_s = {s}
            for bit, v in enumerate(others):
                if mask >> bit & 1:
                    in_s.add(v)
            cap = _cut_capacity(h.edges, in_s)
            side = tuple(sorted(in_s))
            if cap < best_cap - FLOW_TOL or (abs(cap - best_cap) <= FLOW_TOL and side < best_side):
                best_cap, best_side = cap, side
        return best_cap, best_side

    total = 1 << len(others)
    workers = worker_count()
    if workers > 1 and total >= 1024:
        chunk = (total + workers - 1) // workers
        ranges = [(i, min(i + chunk, total)) for i in range(0, total, chunk)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda r: scan(*r), ranges))
        best_cap, best_side = math.inf, None
        for cap, side in results:
            if cap < best_cap - FLOW_TOL or (abs(cap - best_cap) <= FLOW_TOL and side < best_side):
                best_cap, best_side = cap, side
    else:
        best_cap, best_side = scan(0, total)

    side_s = best_side
    side_t = tuple(v for v in range(n) if v not in side_s)
    return CutResult(
        side_s=tuple(h.parties[v] for v in side_s),
        side_t=tuple(h.parties[v] for v in side_t),
        capacity=best_cap,
    )


def _cut_saturated(h: Hypergraph, result: FlowResult, cut: CutResult) -> bool:
    """Every crossing edge saturated forward, nothing flowing back."""
    in_s = set(cut.side_s)
    flows_by_edge: dict[tuple[str, ...], list[FlowAssignment]] = {}
    for fa in result.flows:
        flows_by_edge.setdefault(fa.edge, []).append(fa)
    for eps, w in h.edges:
        key = tuple(h.parties[e] for e in eps)
        crosses = any(h.parties[e] in in_s for e in eps) and any(
            h.parties[e] not in in_s for e in eps
        )
        if not crosses:
            continue
        forward = math.fsum(
            fa.amount for fa in flows_by_edge.get(key, [])
            if fa.source in in_s and fa.target not in in_s
        )
        backward = math.fsum(
            fa.amount for fa in flows_by_edge.get(key, [])
            if fa.source not in in_s and fa.target in in_s
        )
        if abs(forward - w) > FLOW_TOL or backward > FLOW_TOL:
            return False
    return True


def verify_maxflow_mincut(h: Hypergraph, source: int | str, sink: int | str) -> VerifyResult:
    """Run both sides and certify: max flow equals min cut, the flow is
    feasible, and every crossing edge of the min cut is saturated."""
    flow = max_flow(h, source, sink)
    cut = min_cut_enumerate(h, source, sink)
    equal = abs(flow.value - cut.capacity) <= FLOW_TOL
    feasible = not flow_constraint_violations(h, flow, source, sink)
    saturated = _cut_saturated(h, flow, cut)
    return VerifyResult(
        ok=equal and feasible and saturated,
        equal=equal,
        saturated=saturated,
        feasible=feasible,
        flow=flow,
        cut=cut,
    )
