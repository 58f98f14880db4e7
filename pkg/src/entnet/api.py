"""HTTP service wrapping the analysis library.

Every endpoint takes a network document (the JSON file format) in the
request body and returns a structured report; input problems come back as
400 with a diagnostic message.
"""
from __future__ import annotations

from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .classify import (
    characteristic_vector,
    doubled_entropy,
    dual_total_correlation,
    lu_equivalent,
    mutual_information_literal,
    outcome_distribution,
)
from .entropy import EntropyFunctional, entropy
from .flow import max_flow, min_cut_enumerate, verify_maxflow_mincut
from .measures import marginal_entanglement
from .monogamy import monogamy_sweep
from .netmodel import NetworkFormatError, NetworkSpec, associated_hypergraph, network_from_obj
from .oracle import dense_marginal_spectrum

app = FastAPI(title="entnet", version=__version__)

ORACLE_TOL = 1e-9


class FunctionalModel(BaseModel):
    """Entropy functional selector; q and s only where the family needs them."""

    family: Literal["von_neumann", "renyi", "tsallis", "unified"] = "von_neumann"
    q: Optional[float] = None
    s: Optional[float] = None

    def build(self) -> EntropyFunctional:
        try:
            if self.family == "von_neumann":
                return EntropyFunctional.von_neumann()
            if self.family == "renyi":
                return EntropyFunctional.renyi(_require(self.q, "renyi needs q"))
            if self.family == "tsallis":
                return EntropyFunctional.tsallis(_require(self.q, "tsallis needs q"))
            return EntropyFunctional.unified(
                _require(self.q, "unified needs q"), _require(self.s, "unified needs s")
            )
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc


def _require(value: Optional[float], message: str) -> float:
    if value is None:
        raise ValueError(message)
    return value


def _load(network: dict) -> NetworkSpec:
    try:
        return network_from_obj(network)
    except NetworkFormatError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


def _party(spec: NetworkSpec, label: str) -> int:
    try:
        return spec.party_index(label)
    except KeyError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


class MonogamyReportModel(BaseModel):
    party: str
    functional: str
    lhs: float
    rhs: float
    slack: float
    equality_predicted: bool
    holds: bool
    w_hypothesis: Optional[bool] = None


class AnalyzeRequest(BaseModel):
    network: dict
    functional: FunctionalModel = Field(default_factory=FunctionalModel)


class AnalyzeResponse(BaseModel):
    name: str
    parties: list[str]
    link_groups: int
    functional: str
    characteristic_vector: list[float]
    reports: list[MonogamyReportModel]
    all_hold: bool


@app.post("/analyze", response_model=AnalyzeResponse)
def analyze(req: AnalyzeRequest) -> AnalyzeResponse:
    spec = _load(req.network)
    f = req.functional.build()
    try:
        reports = monogamy_sweep(spec, f)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return AnalyzeResponse(
        name=spec.name,
        parties=list(spec.parties),
        link_groups=len(spec.links),
        functional=f.label(),
        characteristic_vector=[float(x) for x in characteristic_vector(spec)],
        reports=[MonogamyReportModel(**r.to_dict()) for r in reports],
        all_hold=all(r.holds for r in reports),
    )


class FlowAssignmentModel(BaseModel):
    edge: list[str]
    source: str
    target: str
    amount: float


class PathModel(BaseModel):
    path: list[str]
    pushed: float


class CutModel(BaseModel):
    side_s: list[str]
    side_t: list[str]
    capacity: float


class MaxflowRequest(BaseModel):
    network: dict
    source: str
    sink: str
    verify: bool = False


class MaxflowResponse(BaseModel):
    name: str
    source: str
    sink: str
    value: float
    flows: list[FlowAssignmentModel]
    paths: list[PathModel]
    mincut: Optional[CutModel] = None
    flow_equals_cut: Optional[bool] = None
    cut_saturated: Optional[bool] = None
    verified: Optional[bool] = None


@app.post("/maxflow", response_model=MaxflowResponse)
def maxflow(req: MaxflowRequest) -> MaxflowResponse:
    spec = _load(req.network)
    _party(spec, req.source)
    _party(spec, req.sink)
    if req.source == req.sink:
        raise HTTPException(status_code=400, detail="source and sink must differ")
    h = associated_hypergraph(spec)
    result = max_flow(h, req.source, req.sink)
    resp = MaxflowResponse(
        name=spec.name,
        source=req.source,
        sink=req.sink,
        value=result.value,
        flows=[
            FlowAssignmentModel(edge=list(fa.edge), source=fa.source, target=fa.target, amount=fa.amount)
            for fa in result.flows
        ],
        paths=[PathModel(path=list(st.path), pushed=st.pushed) for st in result.augmenting_paths],
    )
    if req.verify:
        try:
            v = verify_maxflow_mincut(h, req.source, req.sink)
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        resp.mincut = CutModel(
            side_s=list(v.cut.side_s), side_t=list(v.cut.side_t), capacity=v.cut.capacity
        )
        resp.flow_equals_cut = v.equal
        resp.cut_saturated = v.saturated
        resp.verified = v.ok
    return resp


class MincutRequest(BaseModel):
    network: dict
    source: str
    sink: str


class MincutResponse(BaseModel):
    name: str
    source: str
    sink: str
    cut: CutModel


@app.post("/mincut", response_model=MincutResponse)
def mincut(req: MincutRequest) -> MincutResponse:
    spec = _load(req.network)
    _party(spec, req.source)
    _party(spec, req.sink)
    if req.source == req.sink:
        raise HTTPException(status_code=400, detail="source and sink must differ")
    h = associated_hypergraph(spec)
    try:
        cut = min_cut_enumerate(h, req.source, req.sink)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    return MincutResponse(
        name=spec.name,
        source=req.source,
        sink=req.sink,
        cut=CutModel(side_s=list(cut.side_s), side_t=list(cut.side_t), capacity=cut.capacity),
    )


class PairDecisionModel(BaseModel):
    a: str
    b: str
    decision: str
    reason: str


class DiscriminatorModel(BaseModel):
    name: str
    dual_total_correlation: float
    doubled_entropy: float
    tripartite_mutual_information: Optional[float] = None


class ClassifyRequest(BaseModel):
    networks: list[dict]
    discriminators: bool = False
    permutation_insensitive: bool = False


class ClassifyResponse(BaseModel):
    names: list[str]
    vectors: list[list[float]]
    decisions: list[PairDecisionModel]
    discriminators: list[DiscriminatorModel]


@app.post("/classify", response_model=ClassifyResponse)
def classify(req: ClassifyRequest) -> ClassifyResponse:
    if len(req.networks) < 2:
        raise HTTPException(status_code=400, detail="classification needs at least 2 networks")
    specs = [_load(doc) for doc in req.networks]
    vectors = [[float(x) for x in characteristic_vector(s)] for s in specs]
    decisions = []
    needs_discriminators: set[int] = set()
    for i in range(len(specs)):
        for j in range(i + 1, len(specs)):
            d = lu_equivalent(specs[i], specs[j], req.permutation_insensitive)
            decisions.append(
                PairDecisionModel(a=specs[i].name, b=specs[j].name, decision=d.decision, reason=d.reason)
            )
            if d.decision == "outside_hypothesis":
                needs_discriminators.update((i, j))
    discriminators = []
    if req.discriminators:
        for i in sorted(needs_discriminators):
            spec = specs[i]
            try:
                dist = outcome_distribution(spec)
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc)) from exc
            all_parties = list(spec.parties)
            mi = (
                mutual_information_literal(dist, all_parties) if len(all_parties) == 3 else None
            )
            discriminators.append(
                DiscriminatorModel(
                    name=spec.name,
                    dual_total_correlation=dual_total_correlation(dist, all_parties),
                    doubled_entropy=dist.shannon_entropy(),
                    tripartite_mutual_information=mi,
                )
            )
    return ClassifyResponse(
        names=[s.name for s in specs],
        vectors=vectors,
        decisions=decisions,
        discriminators=discriminators,
    )


class MutualInfoRequest(BaseModel):
    network: dict
    parties: Optional[list[str]] = None


class MutualInfoResponse(BaseModel):
    name: str
    parties: list[str]
    support_size: int
    joint_entropy: float
    dual_total_correlation: float
    doubled_entropy: float
    tripartite_mutual_information: Optional[float] = None


@app.post("/mutualinfo", response_model=MutualInfoResponse)
def mutualinfo(req: MutualInfoRequest) -> MutualInfoResponse:
    spec = _load(req.network)
    parties = req.parties if req.parties is not None else list(spec.parties)
    for p in parties:
        _party(spec, p)
    if len(parties) < 2:
        raise HTTPException(status_code=400, detail="mutual information needs at least 2 parties")
    try:
        dist = outcome_distribution(spec)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    sub = dist.marginal(parties)
    mi = mutual_information_literal(dist, parties) if len(parties) == 3 else None
    return MutualInfoResponse(
        name=spec.name,
        parties=parties,
        support_size=len(sub.support),
        joint_entropy=sub.shannon_entropy(),
        dual_total_correlation=dual_total_correlation(dist, parties),
        doubled_entropy=doubled_entropy(spec, parties),
        tripartite_mutual_information=mi,
    )


class OracleCheckRequest(BaseModel):
    network: dict
    functional: FunctionalModel = Field(default_factory=FunctionalModel)


class OraclePartyModel(BaseModel):
    party: str
    additive: float
    dense: float
    deviation: float


class OracleCheckResponse(BaseModel):
    name: str
    functional: str
    rows: list[OraclePartyModel]
    max_deviation: float
    ok: bool


@app.post("/oracle-check", response_model=OracleCheckResponse)
def oracle_check(req: OracleCheckRequest) -> OracleCheckResponse:
    spec = _load(req.network)
    f = req.functional.build()
    if not f.is_additive:
        raise HTTPException(
            status_code=400,
            detail="oracle comparison applies to the additive families (von Neumann, Renyi)",
        )
    rows = []
    try:
        for i, label in enumerate(spec.parties):
            fast = marginal_entanglement(spec, i, f).value
            dense = entropy(dense_marginal_spectrum(spec, i), f)
            rows.append(
                OraclePartyModel(party=label, additive=fast, dense=dense, deviation=abs(fast - dense))
            )
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc
    max_dev = max((r.deviation for r in rows), default=0.0)
    return OracleCheckResponse(
        name=spec.name,
        functional=f.label(),
        rows=rows,
        max_deviation=max_dev,
        ok=max_dev <= ORACLE_TOL,
    )


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok", "version": __version__}
