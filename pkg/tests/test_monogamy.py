import math

import pytest

from entnet.entropy import EntropyFunctional, VON_NEUMANN, binary_entropy
from entnet.measures import W_PAIR_EOF
from entnet.monogamy import exact_slack, monogamy_report, monogamy_sweep, qkd_leakage_bound
from entnet.netmodel import Link, NetworkSpec

from conftest import random_network, rng_for

PI4 = math.pi / 4

RENYI_ORDERS = (0.5, 2.0, 3.0)


def _epr(i, j, mult=1, theta=PI4):
    return Link("gen_epr", (i, j), mult, theta)


def test_ghz_triangle_reports(load_fixture):
    spec = load_fixture("ghz_triangle.json")
    for report in monogamy_sweep(spec):
        assert report.lhs == 1.0
        assert report.rhs == 0.0
        assert report.slack == 1.0
        assert report.holds
        assert not report.equality_predicted


def test_star_centre_equality(load_fixture):
    spec = load_fixture("star3.json")
    report = monogamy_report(spec, "A")
    assert report.lhs == 3.0
    assert report.rhs == 3.0
    assert report.slack == 0.0
    assert report.equality_predicted


def test_isolated_party_report():
    spec = NetworkSpec("iso", ("A", "B", "C"), (_epr(0, 1),))
    report = monogamy_report(spec, "C")
    assert report.lhs == report.rhs == report.slack == 0.0
    assert report.holds and report.equality_predicted


def test_w_ghz_saturation_values(load_fixture):
    spec = load_fixture("w_ghz_saturation.json")
    report = monogamy_report(spec, "A")
    # Reference values from the binary entropy and the concurrence formula.
    lhs_ref = 1.0 + 5.0 * binary_entropy(1.0 / 3.0)
    rhs_ref = 10.0 * binary_entropy((1.0 + math.sqrt(5.0) / 3.0) / 2.0)
    assert report.lhs == pytest.approx(lhs_ref, abs=1e-12)
    assert report.rhs == pytest.approx(rhs_ref, abs=1e-9)
    assert report.lhs == pytest.approx(5.5915, abs=1e-3)
    assert report.rhs == pytest.approx(5.5004, abs=1e-3)
    assert report.slack == pytest.approx(0.0911, abs=1e-3)
    assert report.holds
    assert report.w_hypothesis is True


def test_w_hypothesis_violation_still_computed():
    spec = NetworkSpec(
        "w6", ("A", "B", "C"),
        (Link("w_state", (0, 1, 2), 6), Link("gen_ghz", (0, 1, 2), 1, PI4)),
    )
    report = monogamy_report(spec, "A")
    assert report.w_hypothesis is False
    # 6 W states against one GHZ tips the balance: monogamy fails.
    assert report.slack < 0.0
    assert not report.holds


def test_w_hypothesis_none_without_w_links(load_fixture):
    assert monogamy_report(load_fixture("chain2.json"), "A").w_hypothesis is None


def test_chain_sweep_all_exact_zero(load_fixture):
    reports = monogamy_sweep(load_fixture("chain2.json"))
    assert len(reports) == 3
    assert all(r.slack == 0.0 for r in reports)
    assert all(r.equality_predicted for r in reports)


def test_cyclic_network_slack_zero():
    rng = rng_for(23)
    for n in (3, 5, 8):
        links = tuple(
            _epr(i, (i + 1) % n, theta=float(rng.uniform(0.1, math.pi / 2 - 0.1))) for i in range(n)
        )
        spec = NetworkSpec("cycle", tuple(f"p{i}" for i in range(n)), links)
        assert all(r.slack == 0.0 for r in monogamy_sweep(spec))


def test_ghz_triangle_sweep_slack_one(load_fixture):
    assert [r.slack for r in monogamy_sweep(load_fixture("ghz_triangle.json"))] == [1.0] * 3


def test_qkd_triangle_bound(load_fixture):
    spec = load_fixture("qkd_triangle.json")
    bound = qkd_leakage_bound(spec, "a", "b", "e")
    assert bound == 1.0
    # Direct pairwise a-e correlation saturates the bound.
    from entnet.measures import pairwise_entanglement

    assert pairwise_entanglement(spec, "a", "e").value <= bound + 1e-9


def test_qkd_degenerate_cases():
    ab_only = NetworkSpec("x", ("a", "b", "e"), (_epr(0, 1),))
    assert qkd_leakage_bound(ab_only, "a", "b", "e") == 0.0
    ae_only = NetworkSpec("x", ("a", "b", "e"), (_epr(0, 2),))
    assert qkd_leakage_bound(ae_only, "a", "b", "e") == 1.0


def test_qkd_bound_dominates_pairwise_on_random_triangles():
    from entnet.measures import pairwise_entanglement

    rng = rng_for(29)
    for _ in range(50):
        spec = random_network(rng, max_parties=3, max_groups=6,
                              kinds=("gen_epr", "gen_ghz", "reduced_ghz"), max_ghz_arity=3)
        if len(spec.parties) != 3:
            continue
        bound = qkd_leakage_bound(spec, 0, 1, 2)
        assert pairwise_entanglement(spec, 0, 2).value <= bound + 1e-9


def test_qkd_validation():
    spec = NetworkSpec("x", ("a", "b", "e"), (_epr(0, 1),))
    with pytest.raises(ValueError, match="distinct"):
        qkd_leakage_bound(spec, "a", "a", "e")
    four = NetworkSpec("x", ("a", "b", "e", "f"), (_epr(0, 1),))
    with pytest.raises(ValueError, match="exactly the three"):
        qkd_leakage_bound(four, "a", "b", "e")


def test_monogamy_holds_on_random_networks():
    rng = rng_for(31)
    functionals = [VON_NEUMANN] + [EntropyFunctional.renyi(a) for a in RENYI_ORDERS]
    for _ in range(120):
        spec = random_network(rng, kinds=("gen_epr", "gen_ghz", "reduced_ghz"))
        for f in functionals:
            for report in monogamy_sweep(spec, f):
                assert report.slack >= -1e-9


def test_equality_characterisation_on_pure_networks():
    rng = rng_for(37)
    for _ in range(120):
        spec = random_network(rng, kinds=("gen_epr", "gen_ghz"))
        for report in monogamy_sweep(spec):
            if report.equality_predicted:
                assert report.slack == 0.0
            else:
                # angles are bounded away from degeneracy, so a spanning GHZ
                # leaves real slack behind
                assert report.slack > 1e-6


def test_schmidt_network_equality():
    rng = rng_for(41)
    for _ in range(40):
        spec = random_network(rng, max_parties=6, kinds=("schmidt",), max_groups=6)
        for f in (VON_NEUMANN, EntropyFunctional.renyi(2.0)):
            assert all(r.slack == 0.0 for r in monogamy_sweep(spec, f))


def test_exact_slack_matches_reports_for_additive_families():
    rng = rng_for(43)
    for _ in range(30):
        spec = random_network(rng, max_parties=5, max_groups=6,
                              kinds=("gen_epr", "schmidt"), max_multiplicity=2)
        for f in (VON_NEUMANN, EntropyFunctional.renyi(2.0)):
            for i in range(len(spec.parties)):
                assert exact_slack(spec, i, f) == pytest.approx(
                    monogamy_report(spec, i, f).slack, abs=1e-9
                )


def test_nonadditive_direction_follows_tensor_regime():
    rng = rng_for(47)
    functionals = [
        EntropyFunctional.tsallis(0.5),
        EntropyFunctional.tsallis(2.0),
        EntropyFunctional.unified(2.0, -1.0),
        EntropyFunctional.unified(0.5, 0.5),
        EntropyFunctional.unified(0.5, -1.0),
        EntropyFunctional.unified(2.0, 0.5),
    ]
    observed: dict[str, set] = {f.label(): set() for f in functionals}
    for _ in range(60):
        spec = random_network(rng, max_parties=5, max_groups=5,
                              kinds=("gen_epr", "schmidt"), max_multiplicity=2)
        for f in functionals:
            for i in range(len(spec.parties)):
                slack = exact_slack(spec, i, f)
                if abs(slack) > 1e-9:
                    observed[f.label()].add("pos" if slack > 0 else "neg")
                if f.tensor_regime == "superadditive":
                    assert slack >= -1e-9
                else:
                    assert slack <= 1e-9
    # each regime shows a definite, consistent direction across the suite
    for f in functionals:
        assert len(observed[f.label()]) == 1


def test_exact_slack_rejects_unsupported_links():
    ghz3 = NetworkSpec("g", ("A", "B", "C"), (Link("gen_ghz", (0, 1, 2), 1, PI4),))
    with pytest.raises(ValueError, match="bipartite"):
        exact_slack(ghz3, "A", EntropyFunctional.tsallis(2.0))
    mixed = NetworkSpec("m", ("A", "B"), (Link("reduced_ghz", (0, 1), 1, 0.5),))
    with pytest.raises(ValueError, match="bipartite"):
        exact_slack(mixed, "A", EntropyFunctional.tsallis(2.0))


def test_sweep_respects_thread_cap(load_fixture, monkeypatch):
    spec = load_fixture("example2.json")
    serial = monogamy_sweep(spec)
    monkeypatch.setenv("QNET_THREADS", "4")
    threaded = monogamy_sweep(spec)
    assert threaded == serial


def test_report_serialisation(load_fixture):
    report = monogamy_report(load_fixture("ghz_triangle.json"), "A")
    doc = report.to_dict()
    assert doc["party"] == "A"
    assert doc["functional"] == "von-neumann"
    assert doc["slack"] == 1.0
    assert doc["holds"] is True
