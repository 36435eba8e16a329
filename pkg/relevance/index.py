import logging
from collections import Counter
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping

from common.exceptions import DomainError

from .tokenizer import TokenizerConfig, tokenize

logger = logging.getLogger('quantify')


@dataclass(frozen=True)
class DocumentIndex:
    doc_id: str
    term_counts: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, 'term_counts', MappingProxyType(dict(self.term_counts)))
        for term, count in self.term_counts.items():
            if count < 1:
                raise DomainError(f'documents.{self.doc_id}.terms.{term}: count must be positive, got {count}')
        if self.distinct_terms == 0:
            raise DomainError(f'documents.{self.doc_id}: document has no tokens')
        if self.distinct_terms == 1:
            raise DomainError(
                f'documents.{self.doc_id}: a single distinct term gives a semantic mean of 1, which is undefined'
            )

    def __eq__(self, other):
        if not isinstance(other, DocumentIndex):
            return NotImplemented
        return self.doc_id == other.doc_id and dict(self.term_counts) == dict(other.term_counts)

    def __hash__(self):
        return hash((self.doc_id, frozenset(self.term_counts.items())))

    @property
    def total_tokens(self) -> int:
        return sum(self.term_counts.values())

    @property
    def distinct_terms(self) -> int:
        return len(self.term_counts)

    @property
    def semantic_mean(self) -> float:
        return 1.0 / self.distinct_terms

    def frequency(self, term: str) -> float:
        return self.term_counts.get(term, 0) / self.total_tokens

    def covered_tokens(self, query_tokens: Iterable[str]) -> int:
        return sum(self.term_counts.get(term, 0) for term in set(query_tokens))

    def semantic_shift(self, coverage: float) -> float:
        return coverage - self.semantic_mean


@dataclass(frozen=True)
class Cqsm:
    documents: Mapping[str, DocumentIndex]
    tokenizer: TokenizerConfig = field(default_factory=TokenizerConfig)

    def __post_init__(self):
        object.__setattr__(self, 'documents', MappingProxyType(dict(self.documents)))
        if not self.documents:
            raise DomainError('the index needs at least one document')

    def __eq__(self, other):
        if not isinstance(other, Cqsm):
            return NotImplemented
        return self.tokenizer == other.tokenizer and dict(self.documents) == dict(other.documents)

    def __hash__(self):
        return hash((self.tokenizer, frozenset(self.documents.items())))


def index_document(doc_id: str, text: str, config: TokenizerConfig) -> DocumentIndex:
    return DocumentIndex(doc_id=doc_id, term_counts=Counter(tokenize(text, config)))


def build_index(docs: Iterable[tuple[str, str]], config: TokenizerConfig = TokenizerConfig()) -> Cqsm:
    documents = {}
    for doc_id, text in docs:
        if doc_id in documents:
            raise DomainError(f'duplicate document id {doc_id!r}')
        documents[doc_id] = index_document(doc_id, text, config)
        logger.debug(
            f'indexed {doc_id}: n={documents[doc_id].total_tokens} s={documents[doc_id].distinct_terms}'
        )
    return Cqsm(documents=documents, tokenizer=config)
