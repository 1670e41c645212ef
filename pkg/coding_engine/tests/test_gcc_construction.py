import numpy as np
from django.test import SimpleTestCase

from coding_engine.algebra.finite_field import MAX_FIELD_ORDER, FqMatrix, FqVector, field_make
from coding_engine.algebra.linear_codes import chain_make, code_from_generators, full_space, rs_code
from coding_engine.channels.error_model import Explicit, HammingBall, PbeChannel, hamming_pbe_channel, zero_set
from coding_engine.constructions.gcc_construction import (
    CODE,
    EMPTY_LEVEL,
    GccSpec,
    OuterCode,
    certify_hamming,
    certify_property1,
    construct,
    construct_2level,
    construct_3level,
    formula_rate,
    gcc_build,
    symbols_for_length,
)
from coding_engine.exceptions import InfeasibleParameters, ParameterError, SearchExhausted
from coding_engine.verification.exhaustive_oracle import is_pbecc_linear
from coding_engine.worked_examples import two_level_code, two_level_reference

SOUNDNESS_INSTANCES = 50


class GccBuildTest(SimpleTestCase):

    def setUp(self):
        self.gf2 = field_make(2)
        self.code = two_level_code()

    def test_matches_printed_arrays(self):
        built = self.code.as_linear_code()
        self.assertEqual(self.code.dimension, 4)
        self.assertEqual(built.size(), 16)
        self.assertEqual(built, two_level_reference())
        self.assertEqual(self.code.rate, 0.5)

    def test_generators_are_arrays(self):
        generators = self.code.generators
        self.assertEqual(len(generators), 4)
        for X in generators:
            self.assertEqual(X.shape, (4, 2))
            self.assertTrue(self.code.contains(X))

    def test_levels_of_codewords_lie_in_outer_codes(self):
        for row in self.code.as_linear_code().codewords():
            X = FqMatrix.unflatten(FqVector(self.gf2, row), 4, 2)
            self.assertTrue(self.code.levels_consistent(X))
            first, second = self.code.outer_words(X)
            self.assertEqual(first[0], first[1])
            self.assertEqual(second.shape, (2,))

    def test_non_codeword_is_rejected(self):
        X = FqMatrix(self.gf2, [[1, 0], [1, 0], [0, 0], [0, 0]])
        self.assertFalse(self.code.contains(X))
        self.assertFalse(self.code.levels_consistent(X))

    def test_decompose_rejects_columns_outside_inner_code(self):
        X = FqMatrix(self.gf2, [[1, 0], [0, 0], [0, 0], [0, 0]])
        with self.assertRaises(ParameterError):
            self.code.decompose(X)

    def test_spec_validation(self):
        even = code_from_generators(self.gf2, 4, [[1, 1, 0, 0], [1, 0, 1, 0], [1, 1, 1, 1]])
        repetition = code_from_generators(self.gf2, 4, [[1, 1, 1, 1]])
        inner = chain_make([even, repetition])
        with self.assertRaises(ParameterError):
            GccSpec(inner, (OuterCode.full(2, 3), OuterCode.full(2, 1)))
        with self.assertRaises(ParameterError):
            GccSpec(inner, (OuterCode.full(2, 2), OuterCode.zero(2, 1)))
        with self.assertRaises(ParameterError):
            GccSpec(inner, (OuterCode.from_code(rs_code(field_make(2, 3), 2, 1), 2), OuterCode.full(2, 1)))

    def test_dimension_is_sum_over_levels(self):
        inner = chain_make([full_space(self.gf2, 3), code_from_generators(self.gf2, 3, [[1, 1, 1]])])
        outer = (OuterCode.from_code(rs_code(field_make(2, 2), 3, 2), 2), OuterCode.full(3, 1))
        code = gcc_build(GccSpec(inner, outer))
        self.assertEqual(code.dimension, 2 * 2 + 3 * 1)


class CertificateTest(SimpleTestCase):

    def setUp(self):
        self.gf2 = field_make(2)
        self.code = two_level_code()

    def test_hamming_certificate(self):
        certificate = certify_hamming(self.code, 1, 1)
        self.assertTrue(certificate.valid)
        self.assertEqual([v.condition for v in certificate.levels], [2, 3])
        self.assertIn("CERTIFIED", certificate.report())
        self.assertFalse(certify_hamming(self.code, 2, 1).valid)

    def test_general_certificate_agrees_with_hamming_specialization(self):
        for t in range(3):
            for w in range(3):
                general = certify_property1(self.code, zero_set(self.gf2, 4), HammingBall(self.gf2, 4, t), w)
                self.assertEqual(general.as_dict(), certify_hamming(self.code, t, w).as_dict(), msg=(t, w))

    def test_certified_code_passes_oracle(self):
        ch = hamming_pbe_channel(2, 4, 2, 1, 1)
        self.assertTrue(is_pbecc_linear(self.code.as_linear_code(), ch))

    def test_zero_outer_level_is_vacuous(self):
        inner = chain_make([full_space(self.gf2, 2), code_from_generators(self.gf2, 2, [[1, 1]])])
        code = gcc_build(GccSpec(inner, (OuterCode.zero(2, 1), OuterCode.full(2, 1))))
        certificate = certify_hamming(code, 0, 1)
        self.assertEqual(certificate.levels[0].condition, EMPTY_LEVEL)
        self.assertTrue(certificate.valid)

    def test_certificate_is_not_complete(self):
        # The [2,1,2] repetition code over GF(3) corrects every burst of {0, 1}
        # in one of two symbols, yet no per-level condition holds for it.
        gf3 = field_make(3)
        inner = chain_make([full_space(gf3, 1)])
        code = gcc_build(GccSpec(inner, (OuterCode.from_code(rs_code(gf3, 2, 1), 1),)))
        E1 = Explicit(gf3, 1, [[0]])
        E2 = Explicit(gf3, 1, [[0], [1]])
        certificate = certify_property1(code, E1, E2, 1)
        self.assertFalse(certificate.valid)
        ch = PbeChannel(gf3, 1, 2, E1, E2, 1)
        self.assertTrue(is_pbecc_linear(code.as_linear_code(), ch))

    def test_rejects_large_w(self):
        with self.assertRaises(ParameterError):
            certify_hamming(self.code, 1, 3)


class ConstructionTest(SimpleTestCase):

    def setUp(self):
        self.gf2 = field_make(2)

    def test_three_level_hamming(self):
        ch = hamming_pbe_channel(2, 7, 4, 1, 1)
        code, certificate = construct_3level(2, 7, 4, ch.E1, ch.E2, 1, seed=0)
        self.assertTrue(certificate.valid)
        self.assertGreater(code.dimension, 0)
        self.assertEqual(certify_property1(code, ch.E1, ch.E2, 1).valid, True)
        self.assertTrue(is_pbecc_linear(code.as_linear_code(), ch))

    def test_two_level_hamming(self):
        ch = hamming_pbe_channel(2, 7, 4, 1, 1)
        code, certificate = construct_2level(2, 7, 4, ch.E1, ch.E2, 1, seed=0)
        self.assertTrue(certificate.valid)
        self.assertTrue(is_pbecc_linear(code.as_linear_code(), ch))

    def test_deterministic_for_seed(self):
        ch = hamming_pbe_channel(2, 6, 3, 1, 1)
        first, _ = construct(ch, 3, seed=5)
        second, _ = construct(ch, 3, seed=5)
        self.assertEqual(first.as_linear_code(), second.as_linear_code())

    def test_non_hamming_sets(self):
        gf3 = field_make(3)
        E1 = Explicit(gf3, 2, [[0, 0], [1, 0]])
        E2 = Explicit(gf3, 2, [[0, 0], [1, 0], [0, 1], [1, 1]])
        ch = PbeChannel(gf3, 2, 3, E1, E2, 1)
        code, certificate = construct(ch, 3, seed=0)
        self.assertTrue(certificate.valid)
        self.assertTrue(is_pbecc_linear(code.as_linear_code(), ch))

    def test_infeasible_when_nothing_survives(self):
        ch = hamming_pbe_channel(2, 2, 2, 2, 1)
        with self.assertRaises((InfeasibleParameters, SearchExhausted)):
            construct(ch, 2, seed=0)

    def test_only_automated_level_counts(self):
        with self.assertRaises(ParameterError):
            construct(hamming_pbe_channel(2, 4, 2, 1, 1), 4)

    def test_formula_rate(self):
        ch = hamming_pbe_channel(2, 7, 4, 1, 1)
        self.assertGreater(formula_rate(ch, 3), formula_rate(ch, 2))

    def test_symbols_for_length(self):
        self.assertEqual([symbols_for_length(2, m) for m in (1, 2, 3, 4, 5)], [0, 1, 2, 2, 3])

    def assertOuterFieldsFit(self, code):
        for A in code.spec.outer:
            if A.kind == CODE:
                self.assertLessEqual(code.base.q**A.degree, MAX_FIELD_ORDER)

    def test_wide_reed_solomon_level_is_split(self):
        code, certificate = construct_2level(
            2, 30, 4, zero_set(self.gf2, 30), HammingBall(self.gf2, 30, 4), 1, seed=0
        )
        self.assertTrue(certificate.valid)
        self.assertGreaterEqual(code.spec.levels, 3)
        self.assertOuterFieldsFit(code)
        self.assertEqual(code.spec.inner.codes[0].k, 30)
        self.assertEqual(code.dimension, code.spec.expected_dimension)

    def test_wide_repetition_level_is_split(self):
        code, certificate = construct_2level(
            2, 32, 3, zero_set(self.gf2, 32), HammingBall(self.gf2, 32, 5), 1, seed=0
        )
        self.assertTrue(certificate.valid)
        self.assertOuterFieldsFit(code)
        first = code.spec.outer[0]
        self.assertEqual((first.kind, first.dimension), (CODE, 1))
        self.assertEqual(code.dimension, code.spec.expected_dimension)

    def test_equal_error_sets_collapse_three_levels(self):
        E = HammingBall(self.gf2, 6, 1)
        ch = PbeChannel(self.gf2, 6, 3, E, E, 1)
        two, two_certificate = construct(ch, 2, seed=0)
        three, three_certificate = construct(ch, 3, seed=0)
        self.assertTrue(two_certificate.valid and three_certificate.valid)
        self.assertEqual(three.dimension, two.dimension)
        self.assertEqual(three.spec.levels, 1)


class ConvergenceTest(SimpleTestCase):
    """Constructed rates approach the two-level formula as n grows (W = 0.2, T ~ 0.1)"""

    def test_two_level_rate_approaches_formula(self):
        gaps = {}
        for n in (15, 31, 63):
            ch = hamming_pbe_channel(2, n, 5, round(0.1 * n), 1)
            code, certificate = construct(ch, 2, seed=0)
            self.assertTrue(certificate.valid, msg=f"n={n}")
            gaps[n] = abs(code.rate - formula_rate(ch, 2))
        self.assertLess(gaps[63], gaps[15])
        self.assertLess(gaps[63], 0.06)


class SoundnessTest(SimpleTestCase):
    """Certified constructions on random small channels pass the exhaustive oracle"""

    def test_certified_instances_correct_every_pbe(self):
        rng = np.random.default_rng(2024)
        certified = 0
        attempts = 0
        while certified < SOUNDNESS_INSTANCES and attempts < 20 * SOUNDNESS_INSTANCES:
            attempts += 1
            n = int(rng.integers(2, 7))
            m = int(rng.integers(1, 4))
            t = int(rng.integers(0, min(2, n) + 1))
            w = int(rng.integers(0, min(2, m) + 1))
            levels = int(rng.choice([2, 3]))
            ch = hamming_pbe_channel(2, n, m, t, w)
            try:
                code, certificate = construct(ch, levels, seed=int(rng.integers(0, 1000)))
            except (InfeasibleParameters, SearchExhausted):
                continue
            self.assertTrue(certificate.valid)
            self.assertTrue(
                is_pbecc_linear(code.as_linear_code(), ch),
                msg=f"n={n} m={m} t={t} w={w} levels={levels}",
            )
            certified += 1
        self.assertGreaterEqual(certified, SOUNDNESS_INSTANCES)
