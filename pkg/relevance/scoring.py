import logging
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence, Union

from common.exceptions import DomainError
from core_law.law import relevance

from .index import Cqsm, DocumentIndex
from .tokenizer import tokenize

logger = logging.getLogger('quantify')


class RelevanceMode(str, Enum):
    DISCOVERY = 'DISCOVERY'
    RECOVERY = 'RECOVERY'
    IRRELEVANT = 'IRRELEVANT'


@dataclass(frozen=True)
class RelevanceScore:
    relevance: float
    coverage: float
    semantic_mean: float
    mode: RelevanceMode

    @property
    def semantic_shift(self) -> float:
        return self.coverage - self.semantic_mean


class RankedDocument(NamedTuple):
    doc_id: str
    score: RelevanceScore


class EmptyQueryError(DomainError):
    pass


def query_coverage(index: DocumentIndex, query_tokens: Sequence[str]) -> float:
    return index.covered_tokens(query_tokens) / index.total_tokens


def score(index: DocumentIndex, query_tokens: Sequence[str]) -> RelevanceScore:
    if not query_tokens:
        raise EmptyQueryError('the query has no tokens')
    n = index.total_tokens
    s = index.distinct_terms
    covered = index.covered_tokens(query_tokens)
    coverage = covered / n
    p_s = index.semantic_mean

    # c vs p_s decided on integers: covered/n against 1/s
    if covered * s < n:
        mode = RelevanceMode.DISCOVERY
    elif covered * s > n:
        mode = RelevanceMode.RECOVERY
    else:
        mode = RelevanceMode.IRRELEVANT

    if mode is RelevanceMode.IRRELEVANT:
        value = 0.0
    elif covered == n:
        value = 1.0
    else:
        value = relevance(n, coverage, p_s)
    return RelevanceScore(relevance=value, coverage=coverage, semantic_mean=p_s, mode=mode)


def rank(cqsm: Cqsm, query_text: Union[str, bytes]) -> list[RankedDocument]:
    query_tokens = tokenize(query_text, cqsm.tokenizer)
    if not query_tokens:
        raise EmptyQueryError('the query has no tokens')
    scored = [RankedDocument(doc_id, score(index, query_tokens)) for doc_id, index in cqsm.documents.items()]
    scored.sort(key=lambda item: (-item.score.relevance, item.doc_id))
    logger.debug(f'ranked {len(scored)} documents for {len(set(query_tokens))} distinct query terms')
    return scored
