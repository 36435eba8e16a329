"""
Query 결과 출력 전용 시리얼라이저
"""

from rest_framework import serializers


class RankedDocumentSerializer(serializers.Serializer):
    """문서별 관련도 점수"""
    doc_id = serializers.CharField(read_only=True)
    relevance = serializers.FloatField(source='score.relevance', read_only=True)
    coverage = serializers.FloatField(source='score.coverage', read_only=True)
    semantic_mean = serializers.FloatField(source='score.semantic_mean', read_only=True)
    semantic_shift = serializers.FloatField(source='score.semantic_shift', read_only=True)
    mode = serializers.CharField(source='score.mode.value', read_only=True)
