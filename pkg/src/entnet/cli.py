"""Command-line front end: a thin client over the HTTP service.

Without ``--server`` the commands run against the in-process app, so no
daemon is needed; with it they hit a remote instance.  Exit codes: 0 on
success, 1 when a checked property fails (monogamy violated, flow and cut
disagree, oracle deviation), 2 on input errors.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass

import click
import httpx


@dataclass(frozen=True)
class Report:
    """What a command produced: machine payload plus its text rendering."""

    command: str
    inputs: tuple[str, ...]
    payload: dict

    def to_json(self) -> str:
        doc = {"command": self.command, "inputs": list(self.inputs), "payload": self.payload}
        return json.dumps(doc, indent=2, sort_keys=True)


def _client(server: str | None):
    if server:
        return httpx.Client(base_url=server, timeout=120.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .api import app

    return TestClient(app)


def _post(ctx, path: str, payload: dict) -> dict:
    with _client(ctx.obj["server"]) as client:
        resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        click.echo(f"error: {detail}", err=True)
        sys.exit(2)
    return resp.json()


def _read_network(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(2)
    # Parse locally first so syntax errors carry a position diagnostic.
    from .netmodel import NetworkFormatError, network_to_obj, parse_network

    try:
        return network_to_obj(parse_network(text))
    except NetworkFormatError as exc:
        click.echo(f"error: {path}: {exc}", err=True)
        sys.exit(2)


def _functional_payload(renyi, tsallis, unified) -> dict:
    chosen = [x for x in (renyi, tsallis, unified) if x is not None]
    if len(chosen) > 1:
        raise click.UsageError("choose at most one of --renyi, --tsallis, --unified")
    if renyi is not None:
        return {"family": "renyi", "q": renyi}
    if tsallis is not None:
        return {"family": "tsallis", "q": tsallis}
    if unified is not None:
        return {"family": "unified", "q": unified[0], "s": unified[1]}
    return {"family": "von_neumann"}


def _functional_options(fn):
    fn = click.option("--renyi", type=float, default=None, metavar="ALPHA",
                      help="Renyi entropy of the given order.")(fn)
    fn = click.option("--tsallis", type=float, default=None, metavar="Q",
                      help="Tsallis entropy of the given order.")(fn)
    fn = click.option("--unified", type=(float, float), default=None, metavar="Q S",
                      help="Unified entropy with the given parameters.")(fn)
    return fn


def _emit(ctx, report: Report, text: str, exit_code: int = 0) -> None:
    if ctx.obj["as_json"]:
        click.echo(report.to_json())
    else:
        click.echo(text, nl=False)
    if exit_code:
        sys.exit(exit_code)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _fmt_vector(values) -> str:
    return "(" + ", ".join(_fmt(v) for v in values) + ")"


def _fmt_set(labels) -> str:
    return "{" + ", ".join(labels) + "}"


@click.group()
@click.version_option()
@click.option("--server", metavar="URL", default=None,
              help="Base URL of a running service; defaults to in-process.")
@click.option("--json", "as_json", is_flag=True, help="Emit the JSON report instead of text.")
@click.pass_context
def main(ctx, server, as_json):
    """Analyse entangled quantum networks: monogamy, capacity, topology."""
    ctx.obj = {"server": server, "as_json": as_json}


@main.command()
@click.argument("file", type=click.Path())
@_functional_options
@click.pass_context
def analyze(ctx, file, renyi, tsallis, unified):
    """Per-party marginals, monogamy reports and the summary verdict."""
    payload = {
        "network": _read_network(file),
        "functional": _functional_payload(renyi, tsallis, unified),
    }
    out = _post(ctx, "/analyze", payload)
    lines = [
        f"network: {out['name']}  parties: {len(out['parties'])}  link groups: {out['link_groups']}",
        f"functional: {out['functional']}",
        f"characteristic vector: {_fmt_vector(out['characteristic_vector'])}",
        "",
    ]
    width = max(5, max(len(r["party"]) for r in out["reports"]))
    lines.append(f"{'party':<{width}}  {'lhs':>10}  {'rhs':>10}  {'slack':>10}  equality  holds")
    for r in out["reports"]:
        note = ""
        if r["w_hypothesis"] is False:
            note = "  [outside W hypothesis]"
        lines.append(
            f"{r['party']:<{width}}  {_fmt(r['lhs']):>10}  {_fmt(r['rhs']):>10}  "
            f"{_fmt(r['slack']):>10}  {'yes' if r['equality_predicted'] else 'no':>8}  "
            f"{'yes' if r['holds'] else 'NO':>5}{note}"
        )
    verdict = "HOLDS" if out["all_hold"] else "VIOLATED"
    lines += ["", f"verdict: {verdict}", ""]
    report = Report("analyze", (file,), out)
    _emit(ctx, report, "\n".join(lines), exit_code=0 if out["all_hold"] else 1)


@main.command()
@click.argument("file", type=click.Path())
@click.argument("source")
@click.argument("sink")
@click.option("--trace", is_flag=True, help="Show the augmenting-path table.")
@click.option("--verify", is_flag=True, help="Check the flow against the enumerated min cut.")
@click.pass_context
def maxflow(ctx, file, source, sink, trace, verify):
    """Maximum flow from SOURCE to SINK on the associated hypergraph."""
    if source == sink:
        raise click.UsageError("source and sink must differ")
    payload = {"network": _read_network(file), "source": source, "sink": sink, "verify": verify}
    out = _post(ctx, "/maxflow", payload)
    lines = [f"network: {out['name']}  source: {out['source']}  sink: {out['sink']}"]
    if trace:
        lines.append("augmenting paths:")
        pw = max([len(" -> ".join(p["path"])) for p in out["paths"]], default=4)
        for k, p in enumerate(out["paths"], 1):
            lines.append(f"  {k:>2}  {' -> '.join(p['path']):<{pw}}  {_fmt(p['pushed'])}")
    lines.append(f"max flow: {_fmt(out['value'])}")
    code = 0
    if verify:
        cut = out["mincut"]
        lines.append(
            f"min cut: side_s = {_fmt_set(cut['side_s'])}  side_t = {_fmt_set(cut['side_t'])}"
            f"  capacity = {_fmt(cut['capacity'])}"
        )
        lines.append(f"max-flow equals min-cut: {'yes' if out['flow_equals_cut'] else 'NO'}")
        lines.append(f"crossing edges saturated: {'yes' if out['cut_saturated'] else 'NO'}")
        if not out["verified"]:
            code = 1
    lines.append("")
    _emit(ctx, Report("maxflow", (file,), out), "\n".join(lines), exit_code=code)


@main.command()
@click.argument("file", type=click.Path())
@click.argument("source")
@click.argument("sink")
@click.pass_context
def mincut(ctx, file, source, sink):
    """Enumerate the minimum SOURCE-SINK cut."""
    if source == sink:
        raise click.UsageError("source and sink must differ")
    payload = {"network": _read_network(file), "source": source, "sink": sink}
    out = _post(ctx, "/mincut", payload)
    cut = out["cut"]
    text = (
        f"network: {out['name']}  source: {out['source']}  sink: {out['sink']}\n"
        f"min cut capacity: {_fmt(cut['capacity'])}\n"
        f"side_s: {_fmt_set(cut['side_s'])}\n"
        f"side_t: {_fmt_set(cut['side_t'])}\n"
    )
    _emit(ctx, Report("mincut", (file,), out), text)


@main.command()
@click.argument("files", nargs=-1, required=True, type=click.Path())
@click.option("--discriminators", is_flag=True,
              help="Add correlation discriminators for outside-hypothesis pairs.")
@click.option("--permutation-insensitive", is_flag=True,
              help="Compare sorted characteristic vectors instead of label-aligned ones.")
@click.pass_context
def classify(ctx, files, discriminators, permutation_insensitive):
    """Characteristic vectors and pairwise equivalence decisions."""
    if len(files) < 2:
        raise click.UsageError("classification needs at least 2 network files")
    payload = {
        "networks": [_read_network(f) for f in files],
        "discriminators": discriminators,
        "permutation_insensitive": permutation_insensitive,
    }
    out = _post(ctx, "/classify", payload)
    width = max(7, max(len(n) for n in out["names"]))
    lines = [f"{'network':<{width}}  characteristic vector"]
    for name, vec in zip(out["names"], out["vectors"]):
        lines.append(f"{name:<{width}}  {_fmt_vector(vec)}")
    lines += ["", "pairwise decisions:"]
    for d in out["decisions"]:
        lines.append(f"  {d['a']} vs {d['b']}: {d['decision']} ({d['reason']})")
    if out["discriminators"]:
        lines += ["", "discriminators:"]
        lines.append(
            f"  {'network':<{width}}  {'dual-total-corr':>15}  {'doubled-entropy':>15}  tripartite-mi"
        )
        for disc in out["discriminators"]:
            mi = _fmt(disc["tripartite_mutual_information"]) if disc[
                "tripartite_mutual_information"
            ] is not None else "-"
            lines.append(
                f"  {disc['name']:<{width}}  {_fmt(disc['dual_total_correlation']):>15}  "
                f"{_fmt(disc['doubled_entropy']):>15}  {mi}"
            )
    lines.append("")
    _emit(ctx, Report("classify", tuple(files), out), "\n".join(lines))


@main.command()
@click.argument("file", type=click.Path())
@click.option("--parties", default=None, metavar="A,B,C",
              help="Comma-separated party subset; all parties when omitted.")
@click.pass_context
def mutualinfo(ctx, file, parties):
    """Measurement-statistics discriminators for one network."""
    payload = {"network": _read_network(file)}
    if parties is not None:
        payload["parties"] = [p.strip() for p in parties.split(",") if p.strip()]
    out = _post(ctx, "/mutualinfo", payload)
    lines = [
        f"network: {out['name']}  parties: {', '.join(out['parties'])}",
        f"outcome support size: {out['support_size']}  joint entropy: {_fmt(out['joint_entropy'])}",
        f"dual total correlation: {_fmt(out['dual_total_correlation'])}",
        f"doubled-network entropy: {_fmt(out['doubled_entropy'])}",
    ]
    if out["tripartite_mutual_information"] is not None:
        lines.append(
            f"tripartite mutual information (literal): {_fmt(out['tripartite_mutual_information'])}"
        )
    lines.append("")
    _emit(ctx, Report("mutualinfo", (file,), out), "\n".join(lines))


@main.command("oracle-check")
@click.argument("file", type=click.Path())
@click.option("--renyi", type=float, default=None, metavar="ALPHA",
              help="Also compare with the Renyi entropy of this order.")
@click.pass_context
def oracle_check(ctx, file, renyi):
    """Cross-check the additive marginals against the dense-state engine."""
    functional = {"family": "renyi", "q": renyi} if renyi is not None else {"family": "von_neumann"}
    payload = {"network": _read_network(file), "functional": functional}
    out = _post(ctx, "/oracle-check", payload)
    width = max(5, max(len(r["party"]) for r in out["rows"]))
    lines = [
        f"network: {out['name']}  functional: {out['functional']}",
        f"{'party':<{width}}  {'additive':>10}  {'dense':>10}  deviation",
    ]
    for r in out["rows"]:
        lines.append(
            f"{r['party']:<{width}}  {_fmt(r['additive']):>10}  {_fmt(r['dense']):>10}  {r['deviation']:.3e}"
        )
    lines.append(f"max deviation: {out['max_deviation']:.3e}  ok: {'yes' if out['ok'] else 'NO'}")
    lines.append("")
    _emit(ctx, Report("oracle-check", (file,), out), "\n".join(lines), exit_code=0 if out["ok"] else 1)


if __name__ == "__main__":
    main()
