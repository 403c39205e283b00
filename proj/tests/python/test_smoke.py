import json
import math

import pytest

import strategic_diffusion as sd


def path3():
    return sd.DiffusionInstance(sd.unit_network(3, [(0, 1), (1, 2)]), seed=0)


def test_probability_and_step_time():
    net = sd.unit_network(3, [(0, 1), (1, 2)])
    assert sd.activation_probability(net, [0], 1) == 0.5
    assert sd.activation_probability(net, [0, 1], 2) == 1.0
    assert sd.expected_step_time(net, [0], 2) == math.inf
    p = sd.activation_probability(net, [0], 1, alpha=0.5, beta=0.5)
    assert p == pytest.approx(0.5 * math.sqrt(0.5))


def test_exact_solvers_agree():
    inst = path3()
    dp = sd.dp_optimal(inst)
    bf = sd.brute_force_optimal(inst)
    assert dp.sequence == [0, 1, 2]
    assert dp.total_time == pytest.approx(3.0)
    assert bf.total_time == pytest.approx(dp.total_time)
    assert sd.sequence_time(inst, dp.sequence).total_time == dp.total_time


def test_infeasible_reports_inf():
    net = sd.InfluenceNetwork(2, [sd.Edge(0, 1, 0.0, 1.0)])
    r = sd.dp_optimal(sd.DiffusionInstance(net, seed=0))
    assert not r.feasible
    assert r.total_time == math.inf


def test_heuristics_on_gk():
    g = sd.make_gk(3)
    assert sd.strategy_a(g).total_time == 21.0
    hk = sd.harmonic(3)
    assert sd.greedy_sequence(g).total_time >= 9 * hk - 1e-9
    a = sd.greedy_sequence(g, tie_seed=5)
    b = sd.greedy_sequence(g, tie_seed=5)
    assert a.sequence == b.sequence


def test_treewidth_and_blocks_match_dp():
    net = sd.random_partial_two_tree(9, 3, w_min=0.5, w_max=2.0, rng_seed=4)
    inst = sd.DiffusionInstance(net, seed=2)
    td = sd.min_fill_decomposition(net)
    assert sd.validate_decomposition(net, td) == []
    dp = sd.dp_optimal(inst).total_time
    assert sd.tw_full_optimal(inst, td).total_time == pytest.approx(dp, abs=1e-9)
    assert sd.solve_full_via_decomposition(inst).total_time == pytest.approx(dp, abs=1e-9)
    inst.z = 5
    assert sd.tw_partial_optimal(inst).total_time == pytest.approx(sd.dp_optimal(inst).total_time, abs=1e-9)


def test_blocks_of_a_bowtie():
    net = sd.unit_network(5, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)])
    blocks, cuts = sd.biconnected_components(net)
    assert blocks == [[0, 1, 2], [2, 3, 4]]
    assert cuts == [2]


def test_set_cover_gadgets():
    sc = sd.SetCoverInstance(2, [[0], [0, 1]])
    assert sd.brute_force_set_cover(sc) == 1
    h = sd.make_np_hardness(sc, 1)
    assert sd.dp_optimal(h.instance).total_time <= h.threshold + 1e-9
    g = sd.make_inapprox(sc)
    best = sd.dp_optimal(g.instance)
    assert sd.extract_cover(g, best.sequence) == [1]


def test_binarize_offset():
    net = sd.InfluenceNetwork(2, [sd.Edge(0, 1, 2.0, 1.0)])
    bin_net, offset = sd.binarize_weights(net)
    assert len(bin_net) == 5
    assert offset == 3.0


def test_simulation_is_seeded():
    inst = path3()
    s1 = sd.simulate_sequence(inst, [0, 1, 2], trials=5000, rng_seed=3, workers=2)
    s2 = sd.simulate_sequence(inst, [0, 1, 2], trials=5000, rng_seed=3, workers=2)
    assert s1.mean == s2.mean
    assert abs(s1.mean - s1.analytic) <= 4 * s1.std_error


def test_json_round_trip_and_errors():
    inst = path3()
    again = sd.DiffusionInstance.from_json(inst.to_json())
    assert again.network == inst.network and again.seed == 0 and again.z == 3
    bad = sd.DiffusionInstance(sd.unit_network(2, [(0, 1)]), seed=0, z=5)
    with pytest.raises(sd.ValidationError):
        sd.dp_optimal(bad)
    with pytest.raises(sd.GuardError):
        sd.dp_optimal(sd.DiffusionInstance(sd.unit_network(30, [(i, i + 1) for i in range(29)])))


def test_cli_entry_point():
    code, out, _ = sd.run_cli(["compare", "--k-min", "2", "--k-max", "3"])
    assert code == 0
    assert out.splitlines()[0].startswith("k,n,strategy_a,greedy,majority")
    code, out, _ = sd.run_cli(["generate", "gk", "--k", "2"])
    assert code == 0
    assert json.loads(out)["instance"]["seed"] == 0
