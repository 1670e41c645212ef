from django.test import SimpleTestCase

from coding_engine.worked_examples import EXAMPLES, coordinate_product_sets, run_example


class WorkedExampleTest(SimpleTestCase):

    def test_every_check_passes(self):
        for name in sorted(EXAMPLES):
            with self.subTest(example=name):
                checks = run_example(name)
                self.assertTrue(checks)
                failed = [c.describe() for c in checks if not c.passed]
                self.assertEqual(failed, [])

    def test_unknown_example(self):
        with self.assertRaises(KeyError):
            run_example('e9')

    def test_coordinate_product_sets(self):
        E1, E2 = coordinate_product_sets()
        self.assertEqual(E1.symbols.tolist(), [0, 3, 7])
        # -4 wraps to 27 in GF(31)
        self.assertEqual(E2.symbols.tolist(), [0, 3, 7, 10, 27])
