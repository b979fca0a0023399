import numpy as np
from indinv import (BoundMethod, Box, BoxUnion, NNProvider, SplitStrategy,
                    VerifyOptions, box_subset_of_union, check_inductiveness,
                    check_init_condition, check_safety_condition,
                    concretize_counterexample, exact_action, sample_check)
from indinv.geometry import union_subset_of_union
from conftest import (MAZE_CANDIDATE, affine_goal_net, constant_net,
                      maze_system)


def identity_holds(outcome):
    st = outcome.stats
    return st.smt_queries == st.nnv_queries + st.splits + \
        (1 if outcome.verdict == "falsified" else 0)


class TestConditions:
    def test_maze_init_inside_candidate(self):
        sys = maze_system(NNProvider(affine_goal_net()))
        assert check_init_condition(sys)
        assert check_safety_condition(sys)

    def test_init_escaping_candidate(self, mod4_system):
        from dataclasses import replace
        bad = replace(mod4_system, init=BoxUnion.of(Box((0.0,), (4.5,))))
        assert not check_init_condition(bad)
        assert check_init_condition(mod4_system)

    def test_candidate_equal_to_safe(self, mod4_system):
        from dataclasses import replace
        sys = replace(mod4_system, safe=mod4_system.candidate)
        assert check_safety_condition(sys)

    def test_candidate_exceeding_safe(self):
        from dataclasses import replace
        sys = maze_system(NNProvider(affine_goal_net()))
        sys = replace(sys, safe=BoxUnion.of(Box((0.22, 0.54), (0.98, 0.90))))
        assert not check_safety_condition(sys)


class TestMod4Analog:
    def test_proved_with_expected_stats(self, mod4_system):
        out = check_inductiveness(mod4_system)
        assert out.verdict == "proved"
        assert out.stats.splits == 1
        assert out.stats.nnv_queries == 3
        assert out.stats.smt_queries == 4
        assert out.bridge.clauses == (
            (Box((0.0,), (2.0,)), Box((-1.0,), (1.0,))),
            (Box((2.0,), (4.0,)), Box((1.0,), (1.0,))))
        assert identity_holds(out)

    def test_bridge_covers_candidate(self, mod4_system):
        out = check_inductiveness(mod4_system)
        cover = out.bridge.region_union(1)
        assert union_subset_of_union(mod4_system.candidate, cover)
        assert union_subset_of_union(cover, mod4_system.candidate)


class TestMazeAffine:
    def test_proved_small_split_count(self):
        for method in (BoundMethod.IBP, BoundMethod.CROWN):
            sys = maze_system(NNProvider(affine_goal_net(), method))
            out = check_inductiveness(sys)
            assert out.verdict == "proved"
            assert out.stats.splits <= 2
            assert identity_holds(out)

    def test_proof_run_dequeue_identity(self):
        # AllDims in 2-D: nnv = 1 + 4 * splits on proved single-box runs.
        sys = maze_system(NNProvider(affine_goal_net()))
        out = check_inductiveness(sys)
        assert out.stats.nnv_queries == 1 + 4 * out.stats.splits


class TestMazeConstant:
    def test_falsified_with_valid_witness(self):
        sys = maze_system(NNProvider(constant_net()))
        out = check_inductiveness(sys)
        assert out.verdict == "falsified"
        assert identity_holds(out)
        # Region-level facts: fstate inside the candidate.
        assert box_subset_of_union(out.fstate, sys.candidate)
        s, a, sp = out.witness
        assert sys.candidate.contains_point(s)
        assert a == exact_action(sys.provider, s)
        assert sp == tuple(si + 0.1 * ai for si, ai in zip(s, a))
        assert not sys.candidate.contains_point(sp)

    def test_forced_region_is_upper_or_right(self):
        sys = maze_system(NNProvider(constant_net()))
        out = check_inductiveness(sys)
        # Constant (1, 1) drift exits through the high x or high y face.
        assert out.fstate.lo[0] + 0.1 > 0.95 or out.fstate.lo[1] + 0.1 > 0.95


class TestBridgeConditions:
    def test_controller_output_lands_in_some_clause(self):
        sys = maze_system(NNProvider(affine_goal_net()))
        out = check_inductiveness(sys)
        rng = np.random.default_rng(0)
        for _ in range(2000):
            s = tuple(rng.uniform(MAZE_CANDIDATE.lo, MAZE_CANDIDATE.hi))
            a = exact_action(sys.provider, s)
            assert any(p.contains_point(s) and psi.contains_point(a)
                       for p, psi in out.bridge.clauses)

    def test_bridge_transitions_stay_inside(self):
        sys = maze_system(NNProvider(affine_goal_net()))
        out = check_inductiveness(sys)
        rng = np.random.default_rng(1)
        for _ in range(2000):
            p, psi = out.bridge.clauses[rng.integers(len(out.bridge.clauses))]
            s = tuple(rng.uniform(p.lo, p.hi))
            a = tuple(rng.uniform(psi.lo, psi.hi))
            sp = (s[0] + 0.1 * a[0], s[1] + 0.1 * a[1])
            assert sys.candidate.contains_point(sp)


class TestBudgetAndDeterminism:
    def test_zero_budget_unknown(self, mod4_system):
        from dataclasses import replace
        sys = replace(mod4_system, options=VerifyOptions(max_splits=0))
        out = check_inductiveness(sys)
        assert out.verdict == "unknown"
        assert "budget" in out.reason

    def test_min_width_exhaustion_unknown(self):
        sys = maze_system(NNProvider(constant_net((0.0, 1.0))),
                          options=VerifyOptions(
                              split=SplitStrategy(min_width=0.5)))
        out = check_inductiveness(sys)
        assert out.verdict == "unknown"

    def test_byte_identical_outcomes(self, mod4_system):
        a = check_inductiveness(mod4_system).canonical_json()
        b = check_inductiveness(mod4_system).canonical_json()
        assert a == b

    def test_deterministic_on_nn_system(self):
        runs = [check_inductiveness(maze_system(NNProvider(constant_net())))
                for _ in range(2)]
        assert runs[0].canonical_json() == runs[1].canonical_json()


class TestMultiBoxCandidate:
    def test_each_member_seeds_worklist(self):
        sys = maze_system(NNProvider(affine_goal_net()))
        from dataclasses import replace
        two = BoxUnion.of(Box((0.25, 0.55), (0.6, 0.95)),
                          Box((0.6, 0.55), (0.95, 0.95)))
        sys = replace(sys, candidate=two)
        out = check_inductiveness(sys)
        assert out.verdict == "proved"
        cover = out.bridge.region_union(2)
        assert union_subset_of_union(two, cover)
        assert union_subset_of_union(cover, two)


class TestConcretize:
    def test_mod4_probe(self, mod4_system):
        trip = concretize_counterexample(Box((4.5,), (5.0,)),
                                         Box((-1.0,), (-1.0,)), mod4_system)
        s, a, sp = trip
        assert s == (4.75,)
        assert a == (-1.0,)
        assert sp == (5.75,)

    def test_returns_none_when_successor_back_inside(self, mod4_system):
        # a >= 0 resets to 0, which is inside the candidate.
        trip = concretize_counterexample(Box((1.0,), (2.0,)),
                                         Box((1.0,), (1.0,)), mod4_system)
        assert trip is None


class TestSampleCheck:
    def test_zero_violations_on_proved_system(self, mod4_system):
        report = sample_check(mod4_system, 5000, seed=0)
        assert report.violations == 0

    def test_violations_on_constant_controller(self):
        sys = maze_system(NNProvider(constant_net()))
        report = sample_check(sys, 5000, seed=0)
        assert report.violations > 0
        for s, a, sp in report.examples:
            assert sys.candidate.contains_point(s)
            assert not sys.candidate.contains_point(sp)

    def test_single_sample(self, mod4_system):
        report = sample_check(mod4_system, 1, seed=0)
        assert report.samples == 1

    def test_seeded_reproducibility(self):
        sys = maze_system(NNProvider(constant_net()))
        r1 = sample_check(sys, 1000, seed=7)
        r2 = sample_check(sys, 1000, seed=7)
        assert r1 == r2
