from rest_framework import serializers

from .channels.error_model import channel_from_descriptor
from .exceptions import PbecError
from .models import ConstructionRun, VerificationRun

ERROR_SET_KINDS = ('ball', 'box', 'symbols', 'subspace', 'explicit')


class ConstructionRunSerializer(serializers.ModelSerializer):
    rate_gap = serializers.SerializerMethodField()

    class Meta:
        model = ConstructionRun
        fields = [
            'q', 'n', 'm', 'w', 'channel', 'levels', 'seed', 'dimension', 'rate',
            'formula_rate', 'rate_gap', 'certified', 'certificate', 'code_fingerprint',
            'processing_time_ms', 'created_at'
        ]
        read_only_fields = ['created_at']

    def get_rate_gap(self, obj):
        if obj.formula_rate is None:
            return None
        return obj.formula_rate - obj.rate


class VerificationRunSerializer(serializers.ModelSerializer):
    class Meta:
        model = VerificationRun
        fields = ['code_fingerprint', 'channel', 'mode', 'verdict', 'processing_time_ms', 'created_at']
        read_only_fields = ['created_at']


class ErrorSetDescriptorField(serializers.JSONField):
    """One-key object such as {"ball": 1} or {"explicit": [[0, 0], [1, 0]]}"""

    def to_internal_value(self, data):
        data = super().to_internal_value(data)
        if not isinstance(data, dict) or len(data) != 1:
            raise serializers.ValidationError("Error-set descriptor must be an object with exactly one key")
        kind = next(iter(data))
        if kind not in ERROR_SET_KINDS:
            raise serializers.ValidationError(f"Unknown error-set kind '{kind}'; expected one of {ERROR_SET_KINDS}")
        return data


# Request serializers for management commands
class ChannelSpecSerializer(serializers.Serializer):
    q = serializers.IntegerField(min_value=2)
    n = serializers.IntegerField(min_value=1)
    m = serializers.IntegerField(min_value=1)
    w = serializers.IntegerField(min_value=0)
    E1 = ErrorSetDescriptorField()
    E2 = ErrorSetDescriptorField()
    modulus = serializers.ListField(child=serializers.IntegerField(min_value=0), required=False, allow_null=True)

    def validate(self, attrs):
        if attrs['w'] > attrs['m']:
            raise serializers.ValidationError({'w': f"w={attrs['w']} exceeds m={attrs['m']}"})
        return attrs

    def to_channel(self):
        """The validated channel; library errors become validation errors"""
        try:
            return channel_from_descriptor(self.validated_data)
        except PbecError as exc:
            raise serializers.ValidationError({'channel': str(exc)})


class ConstructParametersSerializer(serializers.Serializer):
    q = serializers.IntegerField(min_value=2, required=False)
    n = serializers.IntegerField(min_value=1, required=False)
    m = serializers.IntegerField(min_value=1, required=False)
    t = serializers.IntegerField(min_value=0, required=False)
    channel = serializers.CharField(required=False)
    w = serializers.IntegerField(min_value=0, required=False)
    levels = serializers.ChoiceField(choices=[2, 3], default=3)
    seed = serializers.IntegerField(required=False)
    out = serializers.CharField()

    def validate(self, attrs):
        if attrs.get('channel'):
            clashing = [name for name in ('q', 'n', 'm', 't') if attrs.get(name) is not None]
            if clashing:
                raise serializers.ValidationError({name: "Given together with --channel" for name in clashing})
            return attrs

        missing = [name for name in ('q', 'n', 'm', 't', 'w') if attrs.get(name) is None]
        if missing:
            raise serializers.ValidationError({name: "Required without --channel" for name in missing})
        if attrs['t'] > attrs['n']:
            raise serializers.ValidationError({'t': f"t={attrs['t']} exceeds n={attrs['n']}"})
        if attrs['w'] > attrs['m']:
            raise serializers.ValidationError({'w': f"w={attrs['w']} exceeds m={attrs['m']}"})
        return attrs


class SweepRequestSerializer(serializers.Serializer):
    q = serializers.IntegerField(min_value=2)
    mode = serializers.ChoiceField(choices=['fix-T', 'fix-W'])
    value = serializers.FloatField(min_value=0.0, max_value=1.0)
    steps = serializers.IntegerField(min_value=2)
    x_max = serializers.FloatField(min_value=0.0, max_value=1.0, default=1.0)
    out = serializers.CharField(required=False, allow_null=True)

    def validate_x_max(self, value):
        if value <= 0.0:
            raise serializers.ValidationError("Grid end must be positive")
        return value
