import numpy as np
import pytest

from game import ConvexDecomposition, opaque_scheme, scheme_to_decomposition
from graphs import Graph, gen_planted_cover
from libsg import InvalidInputError
from recovery import (ClusterStep, RecoveryParams, algorithm1_clusters, algorithm1_steps,
                      approx_recover_clique, background_overlap, capped_maximizer,
                      check_cluster_invariants, cluster_size, recover_pipeline, verify_clique)
from signaling import build_clique_partition_scheme
from tests.conftest import complete_graph, path_graph


@pytest.fixture(scope="module")
def planted():
    return gen_planted_cover(300, 0.5, 30, 5, seed=12)


@pytest.fixture(scope="module")
def planted_report(planted):
    params = RecoveryParams(d=20, rho=1.0, sample_factor=1.0, trial_budget=3)
    dec = build_clique_partition_scheme(planted)
    return recover_pipeline(planted.graph, dec, 30, params, seed=5, truth=planted.planted_cliques)


####################################################################################################
# Cluster extraction

def test_cluster_size():
    assert cluster_size(20, 1.0) == 10
    assert cluster_size(3, 1.0) == 1
    assert cluster_size(1, 2.0) == 1
    with pytest.raises(InvalidInputError, match="cluster size degenerate"):
        cluster_size(1, 1.0)


def test_top_scores_get_the_cap():
    scores = np.array([3.0, 1.0, 2.0, 0.0])
    assert capped_maximizer(scores, 0.5, 2, generic_lp=False) == pytest.approx([0.5, 0, 0.5, 0])
    assert capped_maximizer(scores, 0.5, 2, generic_lp=True) == pytest.approx([0.5, 0, 0.5, 0])
    # ties go to the smaller index
    assert capped_maximizer(np.ones(4), 0.5, 2, generic_lp=False) == pytest.approx([0.5, 0.5, 0, 0])


def test_overrepresented_vertices_are_dropped():
    g = Graph.from_edges(2, [(0, 1)])
    dec = ConvexDecomposition([1.0], [[0.6, 0.4]])
    (step,) = algorithm1_steps(g, dec, 2, 2.0)
    assert step.x_hat == pytest.approx([0.0, 0.4])
    assert step.overrepresented_mass >= 0.6


def test_degenerate_clusters_are_refused():
    dec = ConvexDecomposition([1.0], [np.full(5, 0.2)])
    with pytest.raises(InvalidInputError):
        algorithm1_clusters(complete_graph(5), dec, 1, 1.0)


def test_generic_lp_agrees_with_the_closed_form():
    instance = gen_planted_cover(120, 0.5, 20, 4, seed=8)
    dec = build_clique_partition_scheme(instance)
    closed = algorithm1_steps(instance.graph, dec, 10, 1.0)
    generic = algorithm1_steps(instance.graph, dec, 10, 1.0, generic_lp=True)
    assert len(closed) == len(generic)
    for a, b in zip(closed, generic):
        assert a.scores @ a.z == pytest.approx(b.scores @ b.z, abs=1e-7)


def test_cluster_invariants_hold(planted, planted_report):
    report = check_cluster_invariants(planted.graph, planted_report.steps, 20, 1.0)
    assert report.ok, report
    assert report.scheme_value <= report.scheme_bound + 1e-6


def overrepresented_step(value: float, mass: float) -> ClusterStep:
    zeros = np.zeros(8)
    return ClusterStep(signal=0, alpha=1.0, x=zeros, y=zeros, value=value, x_hat=zeros,
                       y_hat=zeros, scores=zeros, z=np.r_[np.full(4, 0.25), np.zeros(4)],
                       cluster=np.arange(4), overrepresented_mass=mass)


def test_overrepresented_mass_is_no_slack_once_rho_reaches_one():
    # each step alone is fine: 0.4 <= 0 + 0.5
    report = check_cluster_invariants(Graph(8), [overrepresented_step(0.4, 0.5)], 4, 2.0)
    assert not (report.value_bound_violations or report.dominance_violations
                or report.shape_violations)
    assert report.scheme_bound == pytest.approx(0.0)
    assert not report.ok

    # with rho = 1/2 the defender can only cover O half the time
    report = check_cluster_invariants(Graph(8), [overrepresented_step(0.2, 0.5)], 16, 0.5)
    assert report.scheme_bound == pytest.approx(0.25)
    assert report.ok


def test_clusters_sit_inside_planted_cliques(planted, planted_report):
    # signal 0 is the leftover set; the others are residual cliques
    for step, clique in zip(planted_report.steps[1:], planted.planted_cliques):
        assert set(step.cluster.tolist()) <= clique
    overlaps = background_overlap(planted_report.steps, planted)
    assert all(0.0 <= v < 0.8 for v in overlaps)


####################################################################################################
# Clique recovery

def test_verify_clique():
    assert verify_clique(complete_graph(3), [0, 1, 2])
    assert not verify_clique(path_graph(3), [0, 2])
    assert verify_clique(path_graph(3), [1])
    assert verify_clique(path_graph(3), [])


@pytest.fixture(scope="module")
def single_clique():
    return gen_planted_cover(400, 0.5, 30, 1, seed=21)


def test_recover_from_the_clique_itself(single_clique):
    clique = single_clique.planted_cliques[0]
    params = RecoveryParams(d=20, rho=1.0, sample_factor=1.0, trial_budget=5)
    found = approx_recover_clique(single_clique.graph, clique, 30, params, seed=1)
    assert clique in found
    assert all(verify_clique(single_clique.graph, c) and len(c) >= 30 for c in found)


def test_nothing_is_recovered_outside_the_clique(single_clique):
    clique = single_clique.planted_cliques[0]
    outside = [v for v in range(400) if v not in clique][:10]
    params = RecoveryParams(d=20, rho=1.0, sample_factor=1.0, trial_budget=5)
    assert approx_recover_clique(single_clique.graph, outside, 30, params, seed=1) == []


def test_recover_from_a_mostly_inside_cluster(single_clique):
    clique = single_clique.planted_cliques[0]
    outside = [v for v in range(400) if v not in clique][:10]
    t = sorted(clique)[:20] + outside
    # samples of 6 land inside the clique with probability ~6.5%
    params = RecoveryParams(d=20, rho=1.0, sample_factor=0.6, trial_budget=200)
    assert approx_recover_clique(single_clique.graph, t, 30, params, seed=2) == [clique]


def test_invalid_recovery_arguments(single_clique):
    params = RecoveryParams(d=20, rho=1.0)
    with pytest.raises(InvalidInputError):
        approx_recover_clique(single_clique.graph, [], 30, params, seed=0)
    with pytest.raises(InvalidInputError):
        approx_recover_clique(single_clique.graph, [0, 1], 1, params, seed=0)
    for bad in [dict(epsilon=0.0), dict(trial_budget=0), dict(filter1_fraction=0.0),
                dict(sample_factor=-1.0)]:
        with pytest.raises(InvalidInputError):
            RecoveryParams(d=20, rho=1.0, **bad)


def test_sample_size():
    params = RecoveryParams(d=20, rho=1.0, sample_factor=1.0)
    assert params.sample_size(1000, 50) == 10
    assert params.sample_size(1000, 4) == 4


####################################################################################################
# Pipeline

def test_clique_partition_scheme_reveals_the_cliques(planted, planted_report):
    assert len(planted_report.clusters) == 6
    assert planted_report.fraction_recovered >= 0.8
    assert all(c in planted.planted_cliques for c in planted_report.verified)
    assert all(verify_clique(planted.graph, c) for c in planted_report.candidates)
    data = planted_report.to_json()
    assert data["fraction_recovered"] == planted_report.fraction_recovered


def test_opaque_scheme_reveals_nothing(planted):
    params = RecoveryParams(d=20, rho=1.0, sample_factor=1.0, trial_budget=3)
    dec = scheme_to_decomposition(np.full(300, 1 / 300), opaque_scheme(300))
    report = recover_pipeline(planted.graph, dec, 30, params, seed=5,
                              truth=planted.planted_cliques)
    assert len(report.clusters) == 1
    assert report.fraction_recovered <= 0.2


def test_pipeline_is_deterministic(planted, planted_report):
    params = RecoveryParams(d=20, rho=1.0, sample_factor=1.0, trial_budget=3)
    dec = build_clique_partition_scheme(planted)
    again = recover_pipeline(planted.graph, dec, 30, params, seed=5)
    assert again.candidates == planted_report.candidates
    assert again.verified is None
    assert "verified" not in again.to_json()


@pytest.mark.slow
def test_recovery_at_desk_scale():
    params = RecoveryParams(d=20, rho=1.0, sample_factor=1.0, trial_budget=5)
    uniform = np.full(3000, 1 / 3000)
    fractions, controls = [], []
    for seed in range(20):
        instance = gen_planted_cover(3000, 0.5, 60, 150, seed)
        report = recover_pipeline(instance.graph, build_clique_partition_scheme(instance), 60,
                                  params, seed, truth=instance.planted_cliques)
        assert all(c in instance.planted_cliques for c in report.candidates), seed
        fractions.append(report.fraction_recovered)

        control = recover_pipeline(instance.graph, scheme_to_decomposition(uniform, opaque_scheme(3000)),
                                   60, params, seed, truth=instance.planted_cliques)
        assert all(c in instance.planted_cliques for c in control.candidates), seed
        controls.append(control.fraction_recovered)
    assert np.mean(fractions) >= 0.5
    assert max(controls) <= 0.1


@pytest.mark.slow
def test_recovery_from_a_planted_clique_or_from_outside_it():
    # c_R = 1: samples of 11 leave about one stray common neighbor, which the degree filter drops
    params = RecoveryParams(d=20, rho=1.0, sample_factor=1.0, trial_budget=5)
    found = empty = 0
    for seed in range(100):
        instance = gen_planted_cover(2000, 0.5, 50, 1, seed)
        clique = instance.planted_cliques[0]
        found += clique in approx_recover_clique(instance.graph, clique, 50, params, seed)
        outside = [v for v in range(2000) if v not in clique][:50]
        empty += approx_recover_clique(instance.graph, outside, 50, params, seed) == []
    assert found >= 95
    assert empty >= 95
