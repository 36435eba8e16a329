"""
Monitor JSON 출력 전용 시리얼라이저
StatusReport / PlanTable 을 full precision JSON 으로 표현한다
"""

from rest_framework import serializers

from core_law.law import NOT_GROWING


class BoundsSerializer(serializers.Serializer):
    """고장 강도 구간과 그에 따른 신뢰도 구간"""
    lambda_min = serializers.FloatField(read_only=True)
    lambda_max = serializers.FloatField(read_only=True)
    reliability_min = serializers.FloatField(read_only=True)
    reliability_max = serializers.FloatField(read_only=True)


class StatusReportSerializer(serializers.Serializer):
    """세션 상태 응답"""
    coverage = serializers.FloatField(read_only=True)
    tau = serializers.FloatField(read_only=True)
    bounds = serializers.SerializerMethodField()
    semantic_shift = serializers.FloatField(read_only=True)
    target_met = serializers.BooleanField(read_only=True)
    tests_remaining_to_target = serializers.SerializerMethodField()
    lambda_rq = serializers.FloatField(read_only=True)
    total_sites = serializers.IntegerField(read_only=True)
    tested_sites = serializers.IntegerField(read_only=True)
    sensitive_sites = serializers.IntegerField(read_only=True)

    def get_bounds(self, obj):
        if obj.bounds is NOT_GROWING:
            return NOT_GROWING.value
        return BoundsSerializer(obj.bounds).data

    def get_tests_remaining_to_target(self, obj):
        remaining = obj.tests_remaining_to_target
        return remaining if isinstance(remaining, int) else remaining.value


class PlanRowSerializer(serializers.Serializer):
    """목표별 필요 테스트 수"""
    target = serializers.SerializerMethodField()
    lambda_rq = serializers.FloatField(read_only=True)
    required_tests = serializers.SerializerMethodField()
    coverage = serializers.FloatField(read_only=True, allow_null=True)

    def get_target(self, obj) -> str:
        return obj.target.kind.value

    def get_required_tests(self, obj):
        required = obj.required_tests
        return required if isinstance(required, int) else required.value


class PlanTableSerializer(serializers.Serializer):
    """시그마 계획표 응답"""
    total_sites = serializers.IntegerField(read_only=True)
    sensitive_sites = serializers.IntegerField(read_only=True)
    semantic_mean = serializers.FloatField(read_only=True)
    rows = PlanRowSerializer(many=True, read_only=True)
    ratios = serializers.DictField(child=serializers.FloatField(allow_null=True), read_only=True)
