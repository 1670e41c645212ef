from django.test import SimpleTestCase

from coding_engine.optimization.performance_monitor import PerformanceMonitor


class PerformanceMonitorTest(SimpleTestCase):

    def setUp(self):
        self.monitor = PerformanceMonitor()

    def test_stage_metrics(self):
        self.monitor.track_stage_time('oracle', 0.25)
        self.monitor.track_stage_time('oracle', 0.75)
        with self.monitor.track('construct'):
            pass
        stages = self.monitor.get_performance_metrics()['stages']
        self.assertEqual(stages['oracle']['count'], 2)
        self.assertAlmostEqual(stages['oracle']['avg_time'], 0.5)
        self.assertEqual(stages['oracle']['max_time'], 0.75)
        self.assertIn('construct', stages)
        self.assertIn("oracle: 2x", self.monitor.summary())

    def test_total_since_mark(self):
        self.monitor.track_stage_time('bounds', 1.0)
        mark = self.monitor.mark()
        self.monitor.track_stage_time('bounds', 0.5)
        self.assertEqual(self.monitor.total_ms(mark), 500)
        self.assertEqual(self.monitor.total_ms(), 1500)

    def test_stage_recorded_when_block_raises(self):
        with self.assertRaises(ValueError):
            with self.monitor.track('verify'):
                raise ValueError("boom")
        self.assertEqual(self.monitor.mark(), 1)

    def test_history_is_bounded(self):
        for _ in range(1005):
            self.monitor.track_stage_time('sweep', 0.001)
        self.assertEqual(self.monitor.mark(), 1000)
        self.monitor.reset()
        self.assertEqual(self.monitor.summary(), "")
