import math

import numpy as np
import pytest

from icpsk.codes import DecodabilityError, IndexCode, effective_set_size, enumerate_all, parse_code
from icpsk.geometry import PskMapping, chord_steps, min_inter_set_distance
from icpsk.optimizer import (
    CandidatePair,
    ScaleGuardError,
    priority_cascade,
    all_canonical_mappings,
    brute_force_oracle,
    expected_seed_gap,
    filter_by_receiver,
    optimal_mapping_count,
    optimal_mappings_for_receiver,
    receiver_gaps,
)
from icpsk.problem import IndexCodingProblem, Receiver, single_unicast

LISTED = [
    ("x1, x2+x3, x4+x5", (0, 1, 2, 3, 4, 5, 6, 7)),
    ("x1, x2+x3, x4+x5", (0, 1, 6, 7, 4, 5, 2, 3)),
    ("x1, x2+x3, x1+x4+x5", (0, 1, 2, 3, 5, 4, 7, 6)),
    ("x1, x1+x2+x3, x4+x5", (0, 1, 2, 3, 6, 7, 4, 5)),
]


@pytest.fixture(scope="module")
def codes1(ex1):
    return enumerate_all(ex1, 3)[1]


@pytest.fixture(scope="module")
def cascade1(ex1, codes1):
    return priority_cascade(ex1, codes1)


class TestReceiverMappings:
    def test_listed_code_receiver1(self, ex1):
        code = parse_code("x1, x2+x3, x4+x5", 5)
        maps = optimal_mappings_for_receiver(code, ex1.receivers[0])
        assert len(maps) == 32 == optimal_mapping_count(code, ex1.receivers[0])
        assert (maps[:, 0] == 0).all()
        assert len({tuple(r) for r in maps}) == 32

    def test_matches_exhaustive_argmax(self, ex1, codes1):
        maps = all_canonical_mappings(8)
        for code in codes1[::7]:
            for r in ex1.receivers:
                if effective_set_size(code, r) == 8:
                    continue
                g = receiver_gaps(code, maps, r)
                best = {tuple(x) for x in maps[g == g.max()]}
                assert best == {tuple(x) for x in optimal_mappings_for_receiver(code, r)}

    def test_seed_gap_formula(self, ex1, codes1):
        for code in codes1[:20]:
            r = ex1.receivers[0]
            size = effective_set_size(code, r)
            if size == 8:
                continue
            g = receiver_gaps(code, optimal_mappings_for_receiver(code, r), r)
            assert (g == expected_seed_gap(8, size)).all()

    def test_singleton_parts_antipodal(self, ex2, code2):
        r = ex2.receivers[0]
        maps = optimal_mappings_for_receiver(code2, r)
        assert len(maps) == 645120
        sample = maps[:: 997]
        pos = np.argsort(sample, axis=1)
        for z, o in [(0b0000, 0b1000), (0b0101, 0b1101), (0b0111, 0b1111)]:
            assert (np.abs(pos[:, z] - pos[:, o]) == 8).all()

    def test_whole_constellation_rejected(self, ex1, code1):
        with pytest.raises(ValueError):
            optimal_mappings_for_receiver(code1, ex1.receivers[3])


class TestCascade:
    def test_listed_pairs_present(self, cascade1):
        for text, words in LISTED:
            assert cascade1.contains(CandidatePair(parse_code(text, 5), PskMapping(words)))

    def test_trace_shape(self, cascade1):
        steps = cascade1.trace
        assert [s.receiver for s in steps] == [0, 1, 2, 3, 4]
        assert steps[0].eta == 4
        assert steps[1].delta == pytest.approx(math.sqrt(2), abs=1e-6)
        counts = cascade1.survivor_counts
        assert counts == sorted(counts, reverse=True)
        assert counts[1:] == [counts[1]] * 4

    def test_profiles_match_trace(self, cascade1, ex1):
        for p in cascade1.pairs()[::17]:
            for s in cascade1.trace:
                d = min_inter_set_distance(p.code, p.mapping, ex1.receivers[s.receiver])
                assert d == pytest.approx(s.delta, abs=1e-9)

    def test_seed_count(self, ex1, codes1, cascade1):
        at_eta = [c for c in codes1 if effective_set_size(c, ex1.receivers[0]) == 4]
        assert cascade1.trace[0].survivors == 32 * len(at_eta)

    def test_second_example(self, ex2, code2):
        res = priority_cascade(ex2, [code2])
        assert res.survivor_counts == [645120, 128, 24, 16, 16, 16]
        assert [s.skipped for s in res.trace] == [False] * 4 + [True] * 2
        assert res.trace[1].delta == pytest.approx(1.84776, abs=1e-5)
        assert res.trace[2].delta == pytest.approx(0.76537, abs=1e-5)

    def test_everything_full(self):
        icp = single_unicast(3, [[], [], []])
        ident = IndexCode([0b100, 0b010, 0b001], 3)
        res = priority_cascade(icp, [ident])
        assert res.arbitrary and res.count == 1
        assert all(s.skipped for s in res.trace)

    def test_skips_until_first_small_receiver(self, ex1, code1):
        res = priority_cascade(ex1, [code1], priority=[3, 4, 0, 1, 2])
        assert [s.skipped for s in res.trace][:2] == [True, True]
        assert res.trace[2].survivors == optimal_mapping_count(code1, ex1.receivers[0])

    def test_priority_swap_never_helps_later_receiver(self, ex1, codes1):
        base = priority_cascade(ex1, codes1)
        first = {s.receiver: s.delta for s in base.trace}
        for i in range(4):
            order = list(range(5))
            order[i], order[i + 1] = order[i + 1], order[i]
            res = priority_cascade(ex1, codes1, order)
            swapped = {s.receiver: s.delta for s in res.trace}
            moved_down, moved_up = order[i + 1], order[i]
            assert swapped[moved_down] <= first[moved_down] + 1e-9
            assert swapped[moved_up] >= first[moved_up] - 1e-9

    def test_bad_inputs(self, ex1, code1):
        with pytest.raises(ValueError):
            priority_cascade(ex1, [])
        with pytest.raises(DecodabilityError):
            priority_cascade(ex1, [parse_code("x1, x2, x3", 5)])
        with pytest.raises(ValueError):
            priority_cascade(ex1, [code1, parse_code("x1, x2, x3, x4, x5", 5)])
        with pytest.raises(ValueError):
            priority_cascade(ex1, [code1], priority=[0, 0, 1, 2, 3])

    def test_pairs_sorted_and_deterministic(self, ex1, codes1, cascade1):
        keys = [p.key() for p in cascade1.pairs(with_profile=False)]
        assert keys == sorted(keys)
        again = priority_cascade(ex1, list(reversed(codes1)))
        assert [p.key() for p in again.pairs(with_profile=False)] == keys


class TestFilter:
    def test_against_vectorized(self, ex1):
        code = parse_code("x1, x2+x3, x4+x5", 5)
        maps = optimal_mappings_for_receiver(code, ex1.receivers[0])
        pairs = [CandidatePair(code, PskMapping(w)) for w in maps]
        kept, best = filter_by_receiver(pairs, ex1.receivers[1])
        g = receiver_gaps(code, maps, ex1.receivers[1])
        assert best == pytest.approx(chord_steps(int(g.max()), 8))
        assert {p.mapping.words for p in kept} == {tuple(w) for w in maps[g == g.max()]}

    def test_singleton(self, ex1, code1):
        p = CandidatePair(code1, PskMapping.identity(8))
        kept, best = filter_by_receiver([p], ex1.receivers[0])
        assert kept == [p]
        assert best == pytest.approx(min_inter_set_distance(code1, p.mapping, ex1.receivers[0]))

    def test_empty(self, ex1):
        with pytest.raises(ValueError):
            filter_by_receiver([], ex1.receivers[0])


class TestCandidatePair:
    def test_column_order_invariant(self):
        a = CandidatePair(parse_code("x1, x2+x3, x4+x5", 5), PskMapping((0, 1, 2, 3, 4, 5, 6, 7)))
        b = CandidatePair(parse_code("x4+x5, x1, x2+x3", 5), PskMapping((0, 4, 1, 5, 2, 6, 3, 7)))
        assert a == b

    def test_render(self):
        p = CandidatePair(parse_code("x1, x2+x3, x4+x5", 5), PskMapping.identity(8))
        assert p.render() == "({x1, x2+x3, x4+x5},(0,1,2,3,4,5,6,7))"


class TestOracle:
    def test_small_case_equals_receiver_mappings(self):
        icp = IndexCodingProblem(2, (Receiver(0, frozenset({1})),))
        code = IndexCode([0b10, 0b01], 2)
        res = brute_force_oracle(icp, [code])
        opt = optimal_mappings_for_receiver(code, icp.receivers[0])
        assert res.optimal_pairs == len(opt)
        assert res.gaps == [int(receiver_gaps(code, opt, icp.receivers[0]).min())]

    def test_scale_guard(self, ex2, code2):
        with pytest.raises(ScaleGuardError):
            brute_force_oracle(ex2, [code2])
