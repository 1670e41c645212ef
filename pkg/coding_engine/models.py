from django.db import models
from django.utils import timezone


class ConstructionRun(models.Model):
    """
    One `construct` invocation and the code it produced
    """
    LEVEL_CHOICES = [
        (2, 'Two-level'),
        (3, 'Three-level'),
    ]

    # Channel parameters
    q = models.IntegerField()
    n = models.IntegerField()
    m = models.IntegerField()
    w = models.IntegerField()
    channel = models.JSONField(default=dict)  # E1/E2 descriptors

    # Recipe
    levels = models.IntegerField(choices=LEVEL_CHOICES, default=3)
    seed = models.IntegerField(default=0)

    # Outcome
    dimension = models.IntegerField(default=0)
    rate = models.FloatField(default=0.0)
    formula_rate = models.FloatField(null=True, blank=True)
    certified = models.BooleanField(default=False)
    certificate = models.JSONField(default=dict)
    code_fingerprint = models.CharField(max_length=64)  # SHA-256 of the code file

    processing_time_ms = models.IntegerField(default=0)
    created_at = models.DateTimeField(default=timezone.now)

    class Meta:
        db_table = 'construction_runs'
        indexes = [
            models.Index(fields=['code_fingerprint'], name='constructio_code_fi_3b1c2e_idx'),
            models.Index(fields=['q', 'n', 'm', 'w'], name='constructio_q_5d7a41_idx'),
        ]
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.levels}-level code q={self.q} n={self.n} m={self.m} w={self.w} - Rate: {self.rate:.4f}"


class VerificationRun(models.Model):
    """
    One `verify` invocation
    """
    MODE_CHOICES = [
        ('certificate', 'Certificate'),
        ('oracle', 'Exhaustive oracle'),
    ]
    VERDICT_CHOICES = [
        ('CERTIFIED', 'Certified'),
        ('ORACLE-TRUE', 'Oracle true'),
        ('ORACLE-FALSE', 'Oracle false'),
        ('UNKNOWN(budget)', 'Unknown (budget)'),
    ]

    code_fingerprint = models.CharField(max_length=64)
    channel = models.JSONField(default=dict)
    mode = models.CharField(max_length=20, choices=MODE_CHOICES)
    verdict = models.CharField(max_length=20, choices=VERDICT_CHOICES)

    processing_time_ms = models.IntegerField(default=0)
    created_at = models.DateTimeField(default=timezone.now)

    class Meta:
        db_table = 'verification_runs'
        indexes = [
            models.Index(fields=['code_fingerprint', 'created_at'], name='verificatio_code_fi_8e2f90_idx'),
            models.Index(fields=['verdict'], name='verificatio_verdict_c41a07_idx'),
        ]
        ordering = ['-created_at']

    def __str__(self):
        return f"Verification of {self.code_fingerprint[:12]} - {self.verdict}"
