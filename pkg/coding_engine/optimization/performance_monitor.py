import logging
import time
from contextlib import contextmanager
from datetime import datetime

logger = logging.getLogger(__name__)


class PerformanceMonitor:
    """
    Record wall-clock durations of named pipeline stages
    """

    def __init__(self):
        self.metrics = {
            'stage_times': [],
        }
        self.start_time = time.time()

    @contextmanager
    def track(self, stage):
        """Time the enclosed block under `stage`"""
        started = time.perf_counter()
        try:
            yield
        finally:
            self.track_stage_time(stage, time.perf_counter() - started)

    def track_stage_time(self, stage, seconds):
        self.metrics['stage_times'].append({
            'stage': stage,
            'seconds': seconds,
            'timestamp': datetime.now(),
        })
        logger.debug(f"Stage {stage} took {seconds * 1000:.1f} ms")

        # Keep only last 1000 records
        if len(self.metrics['stage_times']) > 1000:
            self.metrics['stage_times'] = self.metrics['stage_times'][-1000:]

    def total_ms(self, since=0):
        """Milliseconds spent in stages recorded after index `since`"""
        return int(sum(r['seconds'] for r in self.metrics['stage_times'][since:]) * 1000)

    def mark(self):
        return len(self.metrics['stage_times'])

    def get_performance_metrics(self):
        """Per-stage count/total/min/max/avg"""
        return {
            'timestamp': datetime.now().isoformat(),
            'uptime_seconds': time.time() - self.start_time,
            'stages': self._get_stage_metrics(),
        }

    def _get_stage_metrics(self):
        stage_metrics = {}

        for record in self.metrics['stage_times']:
            stage = record['stage']
            if stage not in stage_metrics:
                stage_metrics[stage] = {
                    'count': 0,
                    'total_time': 0,
                    'min_time': float('inf'),
                    'max_time': 0,
                }

            metrics = stage_metrics[stage]
            metrics['count'] += 1
            metrics['total_time'] += record['seconds']
            metrics['min_time'] = min(metrics['min_time'], record['seconds'])
            metrics['max_time'] = max(metrics['max_time'], record['seconds'])

        for metrics in stage_metrics.values():
            metrics['avg_time'] = metrics['total_time'] / metrics['count']

        return stage_metrics

    def summary(self):
        lines = []
        for stage, metrics in self._get_stage_metrics().items():
            lines.append(
                f"{stage}: {metrics['count']}x, total {metrics['total_time'] * 1000:.1f} ms, "
                f"min {metrics['min_time'] * 1000:.1f} ms, max {metrics['max_time'] * 1000:.1f} ms, "
                f"avg {metrics['avg_time'] * 1000:.1f} ms"
            )
        return "\n".join(lines)

    def reset(self):
        self.metrics['stage_times'] = []


# Global performance monitor
performance_monitor = PerformanceMonitor()
