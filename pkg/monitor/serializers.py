from rest_framework import serializers

from .session import EventKind, SigmaKind, SigmaTarget


class SessionHeaderSerializer(serializers.Serializer):
    n = serializers.IntegerField(min_value=1, required=False, help_text='total sites n(0)')
    s0 = serializers.IntegerField(min_value=2, required=False, help_text='sensitive sites s0(0)')
    target = serializers.ChoiceField(choices=[k.value for k in SigmaKind])
    lambda_rq = serializers.FloatField(required=False, allow_null=True, help_text='custom target intensity')

    def validate(self, attrs):
        if attrs['target'] == SigmaKind.CUSTOM.value:
            lambda_rq = attrs.get('lambda_rq')
            if lambda_rq is None or lambda_rq <= 0:
                raise serializers.ValidationError({'lambda_rq': 'a custom target needs a positive lambda_rq'})
        elif attrs.get('lambda_rq') is not None:
            raise serializers.ValidationError({'lambda_rq': 'lambda_rq is only accepted with the custom target'})
        return attrs

    def get_target(self) -> SigmaTarget:
        data = self.validated_data
        if data['target'] == SigmaKind.CUSTOM.value:
            return SigmaTarget.custom(data['lambda_rq'])
        return SigmaTarget(SigmaKind(data['target']))


class TestEventSerializer(serializers.Serializer):
    event = serializers.ChoiceField(choices=[k.value for k in EventKind])
    delta_total_sites = serializers.IntegerField(required=False, default=0)
    at = serializers.DateTimeField(required=False, allow_null=True)

    def validate(self, attrs):
        if attrs['event'] == EventKind.PASS.value and attrs.get('delta_total_sites'):
            raise serializers.ValidationError({'delta_total_sites': 'a pass event carries no site-count delta'})
        return attrs
