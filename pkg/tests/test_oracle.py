import math

import numpy as np
import pytest

from entnet.entropy import EntropyFunctional, VON_NEUMANN, entropy
from entnet.measures import marginal_entanglement, pairwise_entanglement, wootters_eof
from entnet.netmodel import Link, NetworkSpec
from entnet.oracle import (
    apply_local_unitaries,
    build_global_state,
    dense_marginal_spectrum,
    double_and_trace,
    measurement_probabilities,
    reduced_density,
    spectrum_of,
)

from conftest import random_capped_network, rng_for

PI4 = math.pi / 4


def _bell_pair(theta=PI4):
    return NetworkSpec("pair", ("A", "B"), (Link("gen_epr", (0, 1), 1, theta),))


def test_epr_amplitudes():
    theta = 0.7
    state = build_global_state(_bell_pair(theta))
    assert state.kind == "pure"
    assert np.allclose(state.data, [math.cos(theta), 0.0, 0.0, math.sin(theta)])


def test_epr_triangle_state_is_uniform_eight_terms(load_fixture):
    state = build_global_state(load_fixture("epr_triangle.json"))
    amp = np.abs(state.data)
    assert np.count_nonzero(amp > 1e-12) == 8
    assert np.allclose(amp[amp > 1e-12], 1 / (2 * math.sqrt(2)))


def test_empty_network_is_scalar():
    state = build_global_state(NetworkSpec("none", ("A",), ()))
    assert state.kind == "pure"
    assert state.n_qubits == 0
    assert np.allclose(state.data, [1.0])


def test_qubit_labels_follow_document_order(load_fixture):
    spec = load_fixture("chain2.json")
    state = build_global_state(spec)
    assert state.qubit_labels == (
        (0, 0, 0, 0), (1, 0, 0, 1), (1, 1, 0, 0), (2, 1, 0, 1),
    )


def test_reduced_bell_is_maximally_mixed():
    red = reduced_density(build_global_state(_bell_pair()), {0})
    assert np.allclose(red.data, np.eye(2) / 2)


def test_reduced_star_centre_uniform(load_fixture):
    spec = load_fixture("star3.json")
    red = reduced_density(build_global_state(spec), {0})
    assert red.data.shape == (8, 8)
    assert np.allclose(red.data, np.eye(8) / 8)


def test_w_pair_reduction_spectrum():
    spec = NetworkSpec("w", ("A", "B", "C"), (Link("w_state", (0, 1, 2), 1),))
    red = reduced_density(build_global_state(spec), {0, 1})
    assert np.allclose(spectrum_of(red), [2 / 3, 1 / 3, 0.0, 0.0], atol=1e-12)
    # cross-module: the Wootters EOF of that reduction
    assert wootters_eof(red.data) == pytest.approx(0.5500, abs=1e-3)


def test_spectrum_of_identity_and_projector():
    half = np.eye(2, dtype=complex) / 2
    state = lambda m: reduced_density(build_global_state(_bell_pair()), {0}).__class__(
        "mixed", m, ((0, 0, 0, 0),)
    )
    assert np.allclose(spectrum_of(state(half)), [0.5, 0.5])
    proj = np.zeros((2, 2), dtype=complex)
    proj[0, 0] = 1.0
    assert np.allclose(spectrum_of(state(proj)), [1.0, 0.0])


def test_spectrum_of_rejects_non_hermitian():
    from entnet.oracle import DenseState

    bad = DenseState("mixed", np.array([[0.5, 0.5], [0.0, 0.5]], dtype=complex), ((0, 0, 0, 0),))
    with pytest.raises(ValueError, match="Hermitian"):
        spectrum_of(bad)


def test_identity_unitaries_leave_state_unchanged(load_fixture):
    spec = load_fixture("chain2.json")
    state = build_global_state(spec)
    same = apply_local_unitaries(state, {0: np.eye(2), 1: np.eye(4), 2: np.eye(2)})
    assert np.allclose(same.data, state.data)


def test_swap_within_party_preserves_marginals(load_fixture):
    spec = load_fixture("chain2.json")
    state = build_global_state(spec)
    swap = np.zeros((4, 4))
    swap[0, 0] = swap[3, 3] = swap[1, 2] = swap[2, 1] = 1.0
    rotated = apply_local_unitaries(state, {1: swap})
    for party in range(3):
        assert np.allclose(
            spectrum_of(reduced_density(rotated, {party})),
            spectrum_of(reduced_density(state, {party})),
            atol=1e-12,
        )


def test_non_unitary_rejected(load_fixture):
    state = build_global_state(load_fixture("chain2.json"))
    with pytest.raises(ValueError, match="unitarity"):
        apply_local_unitaries(state, {0: np.array([[1.0, 0.0], [0.0, 2.0]])})
    with pytest.raises(ValueError, match="must be"):
        apply_local_unitaries(state, {1: np.eye(2)})


def test_mixed_path_for_reduced_links():
    spec = NetworkSpec(
        "m", ("A", "B"),
        (Link("reduced_ghz", (0, 1), 1, 0.8), Link("gen_epr", (0, 1), 1, PI4)),
    )
    state = build_global_state(spec)
    assert state.kind == "mixed"
    got = entropy(spectrum_of(reduced_density(state, {0})))
    want = marginal_entanglement(spec, "A").value
    assert got == pytest.approx(want, abs=1e-9)


def test_double_and_trace_is_diagonal_with_outcome_probs(load_fixture):
    spec = load_fixture("epr_triangle.json")
    doubled = double_and_trace(spec)
    assert doubled.kind == "mixed"
    off_diag = doubled.data - np.diag(np.diag(doubled.data))
    assert np.abs(off_diag).max() == 0.0
    probs = measurement_probabilities(spec)
    assert np.allclose(np.diag(doubled.data).real, probs, atol=1e-15)
    assert entropy(spectrum_of(doubled)) == pytest.approx(3.0, abs=1e-12)


def test_double_and_trace_double_ghz(load_fixture):
    doubled = double_and_trace(load_fixture("double_ghz_triangle.json"))
    assert entropy(spectrum_of(doubled)) == pytest.approx(2.0, abs=1e-12)


def test_double_and_trace_point_mass():
    spec = NetworkSpec("prod", ("A", "B"), (Link("gen_epr", (0, 1), 1, 0.0),))
    doubled = double_and_trace(spec)
    assert np.allclose(np.diag(doubled.data).real, [1.0, 0.0, 0.0, 0.0])
    assert entropy(spectrum_of(doubled)) == 0.0


def test_size_limits():
    too_pure = NetworkSpec("big", ("A", "B"), (Link("gen_epr", (0, 1), 11, PI4),))
    with pytest.raises(ValueError, match="limit"):
        build_global_state(too_pure)
    too_mixed = NetworkSpec(
        "bigm", ("A", "B"),
        (Link("reduced_ghz", (0, 1), 7, 0.3),),
    )
    with pytest.raises(ValueError, match="limit"):
        build_global_state(too_mixed)


def test_star_network_example_values(load_fixture):
    """Star of three maximal pairs: centre sees entropy 3; each pair state
    has a flat rank-4 spectrum and unit pairwise entanglement through the
    product structure."""
    spec = load_fixture("star3.json")
    state = build_global_state(spec)
    assert entropy(spectrum_of(reduced_density(state, {0}))) == pytest.approx(3.0, abs=1e-12)
    for leaf in (1, 2, 3):
        pair = reduced_density(state, {0, leaf})
        assert np.allclose(np.sort(spectrum_of(pair))[::-1][:4], [0.25] * 4, atol=1e-12)
        cut = pairwise_entanglement(spec, 0, leaf)
        assert cut.value == 1.0 and cut.exact


def test_fast_marginals_match_dense_on_random_networks():
    rng = rng_for(71)
    functionals = [VON_NEUMANN, EntropyFunctional.renyi(2.0)]
    for _ in range(25):
        mixed_allowed = rng.random() < 0.4
        kinds = ("gen_epr", "gen_ghz", "schmidt", "w_state")
        if mixed_allowed:
            kinds = kinds + ("reduced_ghz", "reduced_w")
        spec = random_capped_network(rng, qubit_cap=8 if mixed_allowed else 12, kinds=kinds)
        for i in range(len(spec.parties)):
            sp = dense_marginal_spectrum(spec, i)
            for f in functionals:
                assert entropy(sp, f) == pytest.approx(
                    marginal_entanglement(spec, i, f).value, abs=1e-9
                )


def test_pure_network_global_spectrum_is_point_mass(load_fixture):
    spec = load_fixture("epr_triangle.json")
    state = build_global_state(spec)
    rho = np.outer(state.data, state.data.conj())
    from entnet.oracle import DenseState

    sp = spectrum_of(DenseState("mixed", rho, state.qubit_labels))
    assert sp[0] == pytest.approx(1.0, abs=1e-12)
    assert np.all(sp[1:] < 1e-12)
