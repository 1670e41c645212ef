import django.utils.timezone
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name='ConstructionRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('q', models.IntegerField()),
                ('n', models.IntegerField()),
                ('m', models.IntegerField()),
                ('w', models.IntegerField()),
                ('channel', models.JSONField(default=dict)),
                ('levels', models.IntegerField(choices=[(2, 'Two-level'), (3, 'Three-level')], default=3)),
                ('seed', models.IntegerField(default=0)),
                ('dimension', models.IntegerField(default=0)),
                ('rate', models.FloatField(default=0.0)),
                ('formula_rate', models.FloatField(blank=True, null=True)),
                ('certified', models.BooleanField(default=False)),
                ('certificate', models.JSONField(default=dict)),
                ('code_fingerprint', models.CharField(max_length=64)),
                ('processing_time_ms', models.IntegerField(default=0)),
                ('created_at', models.DateTimeField(default=django.utils.timezone.now)),
            ],
            options={
                'db_table': 'construction_runs',
                'ordering': ['-created_at'],
                'indexes': [
                    models.Index(fields=['code_fingerprint'], name='constructio_code_fi_3b1c2e_idx'),
                    models.Index(fields=['q', 'n', 'm', 'w'], name='constructio_q_5d7a41_idx'),
                ],
            },
        ),
        migrations.CreateModel(
            name='VerificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('code_fingerprint', models.CharField(max_length=64)),
                ('channel', models.JSONField(default=dict)),
                ('mode', models.CharField(choices=[('certificate', 'Certificate'), ('oracle', 'Exhaustive oracle')], max_length=20)),
                ('verdict', models.CharField(choices=[('CERTIFIED', 'Certified'), ('ORACLE-TRUE', 'Oracle true'), ('ORACLE-FALSE', 'Oracle false'), ('UNKNOWN(budget)', 'Unknown (budget)')], max_length=20)),
                ('processing_time_ms', models.IntegerField(default=0)),
                ('created_at', models.DateTimeField(default=django.utils.timezone.now)),
            ],
            options={
                'db_table': 'verification_runs',
                'ordering': ['-created_at'],
                'indexes': [
                    models.Index(fields=['code_fingerprint', 'created_at'], name='verificatio_code_fi_8e2f90_idx'),
                    models.Index(fields=['verdict'], name='verificatio_verdict_c41a07_idx'),
                ],
            },
        ),
    ]
