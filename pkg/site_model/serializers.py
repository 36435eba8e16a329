import json
from pathlib import Path
from typing import Union

from rest_framework import serializers

from common.exceptions import DomainError, SchemaError, schema_error_from

from .matrix import SemanticType, SiteMatrix, SiteParameter


class SemanticTypeSerializer(serializers.Serializer):
    name = serializers.CharField(help_text='semantic type label')
    values = serializers.IntegerField(min_value=1, help_text='number of values of this type (s_ij)')


class SiteParameterSerializer(serializers.Serializer):
    name = serializers.CharField(help_text='parameter label (x_i)')
    types = SemanticTypeSerializer(many=True, allow_empty=False)


class SiteMatrixSerializer(serializers.Serializer):
    parameters = SiteParameterSerializer(many=True, allow_empty=False)
    override_total_sites = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    site_probabilities = serializers.ListField(
        child=serializers.FloatField(),
        required=False,
        allow_empty=True,
    )

    def validate_site_probabilities(self, value):
        errors = {
            index: ['must lie strictly between 0 and 1']
            for index, p in enumerate(value)
            if not 0.0 < p < 1.0
        }
        if errors:
            raise serializers.ValidationError(errors)
        return value

    def create(self, validated_data) -> SiteMatrix:
        parameters = tuple(
            SiteParameter(
                name=parameter['name'],
                types=tuple(SemanticType(t['name'], t['values']) for t in parameter['types']),
            )
            for parameter in validated_data['parameters']
        )
        return SiteMatrix(
            parameters=parameters,
            override_total_sites=validated_data.get('override_total_sites'),
            site_probabilities=tuple(validated_data.get('site_probabilities') or ()),
        )

    def to_representation(self, instance: SiteMatrix):
        data = {
            'parameters': [
                {
                    'name': parameter.name,
                    'types': [{'name': t.name, 'values': t.value_count} for t in parameter.types],
                }
                for parameter in instance.parameters
            ],
        }
        if instance.override_total_sites is not None:
            data['override_total_sites'] = instance.override_total_sites
        if instance.site_probabilities:
            data['site_probabilities'] = list(instance.site_probabilities)
        return data


def parse_matrix(data) -> SiteMatrix:
    serializer = SiteMatrixSerializer(data=data)
    if not serializer.is_valid():
        raise schema_error_from(serializer.errors)
    try:
        return serializer.save()
    except DomainError as e:
        raise SchemaError(str(e)) from e


def load_matrix(source: Union[str, Path]) -> SiteMatrix:
    path = Path(source)
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise SchemaError(f'invalid JSON at line {e.lineno}: {e.msg}', str(path)) from e
    except UnicodeDecodeError as e:
        raise SchemaError(f'file is not valid UTF-8 (byte {e.start})', str(path)) from e
    return parse_matrix(data)


def dump_matrix(matrix: SiteMatrix) -> str:
    return json.dumps(SiteMatrixSerializer(matrix).data, indent=2, ensure_ascii=False)
