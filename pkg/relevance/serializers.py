import json
import logging
from pathlib import Path
from typing import Union

from rest_framework import serializers

from common.exceptions import DomainError, SchemaError, schema_error_from
from config.constants import DELIMITERS_WHITESPACE, DELIMITERS_WHITESPACE_PUNCT

from .index import Cqsm, DocumentIndex
from .tokenizer import TokenizerConfig

logger = logging.getLogger('quantify')


class TokenizerConfigSerializer(serializers.Serializer):
    lowercase = serializers.BooleanField(default=False)
    delimiters = serializers.ChoiceField(
        choices=[DELIMITERS_WHITESPACE, DELIMITERS_WHITESPACE_PUNCT],
        default=DELIMITERS_WHITESPACE,
    )


class DocumentEntrySerializer(serializers.Serializer):
    n = serializers.IntegerField(min_value=1, help_text='total tokens of the document')
    terms = serializers.DictField(child=serializers.IntegerField(min_value=1), allow_empty=False)

    def validate(self, attrs):
        total = sum(attrs['terms'].values())
        if total != attrs['n']:
            raise serializers.ValidationError({'n': f'term counts sum to {total}, not {attrs["n"]}'})
        return attrs


class CqsmSerializer(serializers.Serializer):
    tokenizer = TokenizerConfigSerializer()
    documents = serializers.DictField(child=DocumentEntrySerializer(), allow_empty=False)

    def create(self, validated_data) -> Cqsm:
        documents = {
            doc_id: DocumentIndex(doc_id=doc_id, term_counts=entry['terms'])
            for doc_id, entry in validated_data['documents'].items()
        }
        return Cqsm(documents=documents, tokenizer=TokenizerConfig(**validated_data['tokenizer']))

    def to_representation(self, instance: Cqsm):
        return {
            'tokenizer': {
                'lowercase': instance.tokenizer.lowercase,
                'delimiters': instance.tokenizer.delimiters,
            },
            'documents': {
                doc_id: {'n': index.total_tokens, 'terms': dict(sorted(index.term_counts.items()))}
                for doc_id, index in sorted(instance.documents.items())
            },
        }


def parse_index(data) -> Cqsm:
    serializer = CqsmSerializer(data=data)
    if not serializer.is_valid():
        raise schema_error_from(serializer.errors)
    try:
        return serializer.save()
    except DomainError as e:
        raise SchemaError(str(e)) from e


def save_index(cqsm: Cqsm, destination: Union[str, Path]) -> None:
    path = Path(destination)
    path.write_text(
        json.dumps(CqsmSerializer(cqsm).data, indent=2, ensure_ascii=False) + '\n',
        encoding='utf-8',
    )
    logger.info(f'saved index with {len(cqsm.documents)} documents to {path}')


def load_index(source: Union[str, Path]) -> Cqsm:
    path = Path(source)
    try:
        data = json.loads(path.read_text(encoding='utf-8'))
    except json.JSONDecodeError as e:
        raise SchemaError(f'invalid JSON at line {e.lineno}: {e.msg}', str(path)) from e
    except UnicodeDecodeError as e:
        raise SchemaError(f'file is not valid UTF-8 (byte {e.start})', str(path)) from e
    cqsm = parse_index(data)
    logger.info(f'loaded index with {len(cqsm.documents)} documents from {path}')
    return cqsm
