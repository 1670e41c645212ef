import numpy as np
from django.test import SimpleTestCase, override_settings

from coding_engine.algebra.finite_field import field_make
from coding_engine.algebra.linear_codes import (
    chain_make,
    code_from_generators,
    full_space,
    gv_search,
    intersects_only_zero,
    min_distance,
    pack_binary,
    rs_code,
    zero_code,
)
from coding_engine.channels.error_model import Explicit, HammingBall, Subspace
from coding_engine.exceptions import BudgetExceeded, InfeasibleParameters, ParameterError, SearchExhausted

HAMMING_7_4 = [
    [1, 0, 0, 0, 0, 1, 1],
    [0, 1, 0, 0, 1, 0, 1],
    [0, 0, 1, 0, 1, 1, 0],
    [0, 0, 0, 1, 1, 1, 1],
]


class LinearCodeTest(SimpleTestCase):

    def setUp(self):
        self.gf2 = field_make(2)
        self.hamming = code_from_generators(self.gf2, 7, HAMMING_7_4)

    def test_dimensions_and_parity_check(self):
        self.assertEqual(self.hamming.k, 4)
        self.assertEqual(self.hamming.H.rows, 3)
        self.assertFalse(np.any(self.gf2.matmul(self.hamming.G.entries, self.hamming.H.entries.T)))
        self.assertEqual(self.hamming.dual().k, 3)

    def test_membership(self):
        self.assertIn([1, 1, 0, 0, 1, 1, 0], self.hamming)
        self.assertNotIn([1, 0, 0, 0, 0, 0, 0], self.hamming)
        words = self.hamming.codewords()
        self.assertEqual(words.shape, (16, 7))
        self.assertTrue(np.all(self.hamming.contains_many(words)))

    def test_minimum_distance(self):
        self.assertEqual(min_distance(self.hamming), 3)
        self.assertEqual(min_distance(self.hamming.dual()), 4)
        self.assertEqual(min_distance(zero_code(self.gf2, 5)), 6)
        self.assertEqual(min_distance(full_space(self.gf2, 5)), 1)

    def test_distance_budget(self):
        with self.assertRaises(BudgetExceeded):
            min_distance(self.hamming, budget=8)

    def test_generators_are_canonical(self):
        shuffled = code_from_generators(self.gf2, 7, list(reversed(HAMMING_7_4)) + [[0] * 7])
        self.assertEqual(shuffled, self.hamming)
        self.assertTrue(self.hamming.dual().is_subcode_of(self.hamming))

    def test_rejects_wrong_length(self):
        with self.assertRaises(ParameterError):
            code_from_generators(self.gf2, 6, HAMMING_7_4)


class PackedBinaryDistanceTest(SimpleTestCase):

    def setUp(self):
        self.gf2 = field_make(2)

    def brute_force_distance(self, code):
        best = code.n + 1
        for words in code.iter_codewords():
            weights = np.count_nonzero(words, axis=1)
            weights = weights[weights > 0]
            if weights.size:
                best = min(best, int(weights.min()))
        return best

    def test_matches_enumeration_beyond_the_low_span(self):
        rng = np.random.default_rng(5)
        code = code_from_generators(self.gf2, 40, rng.integers(0, 2, size=(18, 40)))
        self.assertGreater(code.k, 16)
        self.assertEqual(min_distance(code), self.brute_force_distance(code))

    def test_longest_packed_length(self):
        halves = [[1] * 63, [1] * 31 + [0] * 32]
        code = code_from_generators(self.gf2, 63, halves)
        self.assertEqual(min_distance(code), 31)
        self.assertTrue(intersects_only_zero(code, HammingBall(self.gf2, 63, 30)))
        self.assertFalse(intersects_only_zero(code, HammingBall(self.gf2, 63, 31)))

    def test_pack_binary_is_most_significant_first(self):
        self.assertEqual(pack_binary([[1, 0, 1], [0, 1, 1]]).tolist(), [5, 3])
        self.assertEqual(int(pack_binary([[1] + [0] * 62])[0]), 2**62)
        with self.assertRaises(ParameterError):
            pack_binary([[0] * 64])


class IntersectionTest(SimpleTestCase):

    def setUp(self):
        self.gf2 = field_make(2)
        self.hamming = code_from_generators(self.gf2, 7, HAMMING_7_4)

    def test_against_balls(self):
        self.assertTrue(intersects_only_zero(self.hamming, HammingBall(self.gf2, 7, 2)))
        self.assertFalse(intersects_only_zero(self.hamming, HammingBall(self.gf2, 7, 3)))

    def test_against_subspaces(self):
        outside = Subspace(self.gf2, 7, [[1, 0, 0, 0, 0, 0, 0]])
        inside = Subspace(self.gf2, 7, [HAMMING_7_4[0]])
        self.assertTrue(intersects_only_zero(self.hamming, outside))
        self.assertFalse(intersects_only_zero(self.hamming, inside))

    def test_against_explicit_sets(self):
        zero_only = Explicit(self.gf2, 7, [[0] * 7])
        self.assertTrue(intersects_only_zero(self.hamming, zero_only))
        self.assertFalse(intersects_only_zero(self.hamming, Explicit(self.gf2, 7, [HAMMING_7_4[3]])))


class CodeChainTest(SimpleTestCase):

    def setUp(self):
        self.gf2 = field_make(2)
        self.even = code_from_generators(self.gf2, 4, [[1, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]])
        self.repetition = code_from_generators(self.gf2, 4, [[1, 1, 1, 1]])

    def test_quotient_representatives(self):
        chain = chain_make([full_space(self.gf2, 4), self.even, self.repetition])
        self.assertEqual(chain.dims, [4, 3, 1])
        self.assertEqual([chain.degree(j) for j in range(3)], [1, 2, 1])
        for j, (outer, inner) in enumerate(zip(chain.codes, chain.codes[1:])):
            reps = chain.level_basis(j).entries
            self.assertTrue(np.all(outer.contains_many(reps)))
            spanned = code_from_generators(self.gf2, 4, np.concatenate([reps, inner.G.entries]))
            self.assertEqual(spanned, outer)

    def test_rejects_non_nested_codes(self):
        other = code_from_generators(self.gf2, 4, [[1, 0, 0, 0]])
        with self.assertRaises(ParameterError):
            chain_make([self.even, other])
        with self.assertRaises(ParameterError):
            chain_make([self.repetition, self.even])
        with self.assertRaises(ParameterError):
            chain_make([self.even, zero_code(self.gf2, 4)])


class ReedSolomonTest(SimpleTestCase):

    def test_mds(self):
        gf8 = field_make(2, 3)
        code = rs_code(gf8, 7, 3)
        self.assertEqual(code.k, 3)
        self.assertEqual(code.designed_distance, 5)
        self.assertEqual(min_distance(code), 5)

    def test_distance_of_every_short_length(self):
        gf8 = field_make(2, 3)
        for m in range(1, 9):
            for K in range(1, min(m, 6) + 1):
                with self.subTest(m=m, K=K):
                    self.assertEqual(min_distance(rs_code(gf8, m, K)), m - K + 1)

    def test_length_limited_by_field(self):
        with self.assertRaises(InfeasibleParameters):
            rs_code(field_make(2, 2), 5, 2)
        with self.assertRaises(ParameterError):
            rs_code(field_make(2, 2), 4, 0)


class GvSearchTest(SimpleTestCase):

    def setUp(self):
        self.gf2 = field_make(2)

    def test_avoids_forbidden_set(self):
        ball = HammingBall(self.gf2, 7, 2)
        code = gv_search(self.gf2, 7, ball, seed=3)
        self.assertGreaterEqual(code.k, 1)
        self.assertTrue(intersects_only_zero(code, ball))
        self.assertGreaterEqual(min_distance(code), 3)

    def test_deterministic_per_seed(self):
        ball = HammingBall(self.gf2, 8, 1)
        self.assertEqual(gv_search(self.gf2, 8, ball, seed=11), gv_search(self.gf2, 8, ball, seed=11))

    def test_stays_inside_ambient(self):
        ambient = code_from_generators(self.gf2, 7, HAMMING_7_4)
        code = gv_search(self.gf2, 7, HammingBall(self.gf2, 7, 3), seed=0, ambient=ambient)
        self.assertTrue(code.is_subcode_of(ambient))
        self.assertGreaterEqual(min_distance(code), 4)

    def test_target_and_cap(self):
        ball = HammingBall(self.gf2, 7, 1)
        self.assertEqual(gv_search(self.gf2, 7, ball, target_k=2, seed=1).k, 2)
        self.assertLessEqual(gv_search(self.gf2, 7, ball, seed=1, max_k=3).k, 3)

    def test_unreachable_target(self):
        with self.assertRaises(SearchExhausted):
            gv_search(self.gf2, 7, HammingBall(self.gf2, 7, 2), target_k=5, seed=0)

    def test_trivial_forbidden_set_returns_ambient(self):
        code = gv_search(self.gf2, 5, HammingBall(self.gf2, 5, 0), seed=0)
        self.assertEqual(code, full_space(self.gf2, 5))

    def test_finds_a_perfect_hamming_code(self):
        ball = HammingBall(self.gf2, 7, 2)
        codes = (gv_search(self.gf2, 7, ball, seed=seed) for seed in range(500))
        found = next((code for code in codes if code.k == 4), None)
        self.assertIsNotNone(found)
        self.assertEqual(min_distance(found), 3)

    def test_long_binary_search_stays_small(self):
        code = gv_search(self.gf2, 63, HammingBall(self.gf2, 63, 20), seed=0, max_k=8)
        self.assertEqual(code.k, 8)
        self.assertGreater(min_distance(code), 20)

    @override_settings(PBEC_SETTINGS={'GV_SPAN_BYTES': 64})
    def test_span_budget_stops_the_search(self):
        ball = HammingBall(self.gf2, 10, 1)
        with self.assertLogs('coding_engine.algebra.linear_codes', level='WARNING'):
            code = gv_search(self.gf2, 10, ball, seed=0)
        self.assertEqual(code.k, 3)
        self.assertTrue(intersects_only_zero(code, ball))
