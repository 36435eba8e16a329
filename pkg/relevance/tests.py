import json
import os
import random
import tempfile

from django.test import SimpleTestCase

from common.exceptions import DomainError, SchemaError
from config.constants import DELIMITERS_WHITESPACE_PUNCT

from .index import Cqsm, DocumentIndex, build_index, index_document
from .response_serializers import RankedDocumentSerializer
from .scoring import EmptyQueryError, RelevanceMode, query_coverage, rank, score
from .serializers import load_index, parse_index, save_index
from .tokenizer import TokenizerConfig, tokenize

CONTENT_EXAMPLE = 'MYY KY KA PE KY ' * 4


class TokenizerTests(SimpleTestCase):
    def test_whitespace_tokens(self):
        self.assertEqual(tokenize('MYY KY KA PE KY'), ['MYY', 'KY', 'KA', 'PE', 'KY'])
        self.assertEqual(tokenize(''), [])
        self.assertEqual(tokenize('a  b'), ['a', 'b'])

    def test_punctuation_and_case(self):
        config = TokenizerConfig(lowercase=True, delimiters=DELIMITERS_WHITESPACE_PUNCT)
        self.assertEqual(tokenize('Ky, KA; pe.', config), ['ky', 'ka', 'pe'])
        self.assertEqual(tokenize('Ky, KA'), ['Ky,', 'KA'])

    def test_bytes_are_decoded(self):
        self.assertEqual(tokenize('MYY Ü'.encode('utf-8')), ['MYY', 'Ü'])
        with self.assertRaises(DomainError):
            tokenize(b'\xff\xfe KY')

    def test_unknown_delimiters(self):
        with self.assertRaises(DomainError):
            TokenizerConfig(delimiters='tabs')


class IndexTests(SimpleTestCase):
    def test_content_example(self):
        index = index_document('doc', CONTENT_EXAMPLE, TokenizerConfig())
        self.assertEqual(index.total_tokens, 20)
        self.assertEqual(index.distinct_terms, 4)
        self.assertEqual(index.semantic_mean, 0.25)
        self.assertEqual(
            {term: index.frequency(term) for term in index.term_counts},
            {'MYY': 0.2, 'KY': 0.4, 'KA': 0.2, 'PE': 0.2},
        )

    def test_degenerate_documents(self):
        with self.assertRaises(DomainError):
            index_document('x', 'X', TokenizerConfig())
        with self.assertRaises(DomainError):
            index_document('x', '   ', TokenizerConfig())
        index = index_document('ab', 'A B', TokenizerConfig())
        self.assertEqual(index.semantic_mean, 0.5)

    def test_build_index_rejects_duplicates(self):
        with self.assertRaises(DomainError):
            build_index([('a', 'A B'), ('a', 'C D')])
        with self.assertRaises(DomainError):
            build_index([])

    def test_semantic_shift(self):
        index = index_document('doc', CONTENT_EXAMPLE, TokenizerConfig())
        self.assertAlmostEqual(index.semantic_shift(0.4), 0.15)


class ScoringTests(SimpleTestCase):
    def setUp(self):
        self.index = index_document('doc', CONTENT_EXAMPLE, TokenizerConfig())

    def test_query_coverage(self):
        self.assertAlmostEqual(query_coverage(self.index, tokenize('KY KA PE KY')), 0.8)
        self.assertAlmostEqual(query_coverage(self.index, ['MYY']), 0.2)
        self.assertEqual(query_coverage(self.index, ['ZZZ']), 0.0)

    def test_coverage_grows_with_the_query(self):
        rng = random.Random(4)
        vocabulary = ['MYY', 'KY', 'KA', 'PE', 'ZZZ']
        for _ in range(50):
            query = rng.sample(vocabulary, rng.randint(1, 4))
            extended = query + [rng.choice(vocabulary)]
            self.assertLessEqual(query_coverage(self.index, query), query_coverage(self.index, extended))
            self.assertLessEqual(query_coverage(self.index, extended), 1.0)

    def test_discovery(self):
        result = score(self.index, ['MYY'])
        self.assertAlmostEqual(result.relevance, 0.1306, delta=5e-4)
        self.assertIs(result.mode, RelevanceMode.DISCOVERY)
        self.assertAlmostEqual(result.semantic_shift, -0.05)

    def test_recovery(self):
        result = score(self.index, ['KY'])
        self.assertAlmostEqual(result.relevance, 0.6611, delta=5e-4)
        self.assertIs(result.mode, RelevanceMode.RECOVERY)
        result = score(self.index, tokenize('KY KA PE KY'))
        self.assertGreaterEqual(result.relevance, 0.9999)
        self.assertIs(result.mode, RelevanceMode.RECOVERY)

    def test_irrelevant_at_the_semantic_mean(self):
        index = index_document('c', 'A B C D', TokenizerConfig())
        result = score(index, ['A'])
        self.assertIs(result.mode, RelevanceMode.IRRELEVANT)
        self.assertEqual(result.relevance, 0.0)

    def test_absent_terms_score_the_floor(self):
        result = score(self.index, ['ZZZ'])
        self.assertIs(result.mode, RelevanceMode.DISCOVERY)
        self.assertAlmostEqual(result.relevance, 1 - 0.75 ** 20)

    def test_whole_content_scores_one(self):
        result = score(self.index, ['MYY', 'KY', 'KA', 'PE'])
        self.assertEqual(result.coverage, 1.0)
        self.assertEqual(result.relevance, 1.0)

    def test_quasi_convex_in_coverage(self):
        index = DocumentIndex('flat', {f't{i}': 1 for i in range(10)})
        terms = list(index.term_counts)
        values = [score(index, terms[:k]).relevance for k in range(1, 10)]
        # p_s = 1/10, so only the one-term query sits at the minimum
        self.assertEqual(values[0], 0.0)
        self.assertTrue(all(a < b for a, b in zip(values, values[1:])))

    def test_empty_query(self):
        with self.assertRaises(EmptyQueryError):
            score(self.index, [])


class RankTests(SimpleTestCase):
    def test_rank_orders_by_relevance(self):
        cqsm = build_index([('C', 'KY KA'), ('A', CONTENT_EXAMPLE)])
        ranked = rank(cqsm, 'KY')
        self.assertEqual([doc_id for doc_id, _ in ranked], ['A', 'C'])
        self.assertIs(ranked[1][1].mode, RelevanceMode.IRRELEVANT)
        self.assertEqual(ranked[1][1].relevance, 0.0)

    def test_single_document(self):
        cqsm = build_index([('only', 'A B C')])
        self.assertEqual([doc_id for doc_id, _ in rank(cqsm, 'Q')], ['only'])

    def test_ties_break_by_doc_id(self):
        cqsm = build_index([('b', 'A B C'), ('a', 'D E F'), ('c', 'G H I')])
        self.assertEqual([doc_id for doc_id, _ in rank(cqsm, 'ZZZ')], ['a', 'b', 'c'])

    def test_insertion_order_is_irrelevant(self):
        docs = [('A', CONTENT_EXAMPLE), ('B', 'KY MYY MYY PE'), ('C', 'KA KY KY KY')]
        expected = rank(build_index(docs), 'KY MYY')
        rng = random.Random(12)
        for _ in range(5):
            rng.shuffle(docs)
            self.assertEqual(rank(build_index(docs), 'KY MYY'), expected)

    def test_empty_query(self):
        with self.assertRaises(EmptyQueryError):
            rank(build_index([('A', CONTENT_EXAMPLE)]), '   ')

    def test_ranked_serializer(self):
        ranked = rank(build_index([('A', CONTENT_EXAMPLE)]), 'MYY')
        data = RankedDocumentSerializer(ranked, many=True).data
        self.assertEqual(data[0]['doc_id'], 'A')
        self.assertEqual(data[0]['mode'], 'DISCOVERY')
        self.assertAlmostEqual(data[0]['coverage'], 0.2)


class IndexFileTests(SimpleTestCase):
    def payload(self):
        return {
            'tokenizer': {'lowercase': False, 'delimiters': 'ws'},
            'documents': {'doc': {'n': 20, 'terms': {'MYY': 4, 'KY': 8, 'KA': 4, 'PE': 4}}},
        }

    def test_round_trip(self):
        cqsm = build_index([('doc', CONTENT_EXAMPLE)], TokenizerConfig(lowercase=True))
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'index.json')
            save_index(cqsm, path)
            self.assertEqual(load_index(path), cqsm)

    def test_parse_index(self):
        cqsm = parse_index(self.payload())
        self.assertEqual(cqsm.documents['doc'].total_tokens, 20)
        self.assertEqual(cqsm, Cqsm({'doc': index_document('doc', CONTENT_EXAMPLE, TokenizerConfig())}))

    def test_missing_n(self):
        payload = self.payload()
        del payload['documents']['doc']['n']
        with self.assertRaises(SchemaError) as ctx:
            parse_index(payload)
        self.assertEqual(ctx.exception.path, 'documents.doc.n')

    def test_counts_must_sum_to_n(self):
        payload = self.payload()
        payload['documents']['doc']['n'] = 21
        with self.assertRaises(SchemaError) as ctx:
            parse_index(payload)
        self.assertEqual(ctx.exception.path, 'documents.doc.n')

    def test_single_term_document(self):
        payload = self.payload()
        payload['documents']['doc'] = {'n': 3, 'terms': {'KY': 3}}
        with self.assertRaises(SchemaError):
            parse_index(payload)

    def test_invalid_json(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'index.json')
            with open(path, 'w', encoding='utf-8') as f:
                json.dump(self.payload(), f)
                f.write('}')
            with self.assertRaises(SchemaError):
                load_index(path)

    def test_invalid_utf8(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'index.json')
            with open(path, 'wb') as f:
                f.write(b'{"documents": {"\xff": {}}}')
            with self.assertRaises(SchemaError) as ctx:
                load_index(path)
        self.assertIn('UTF-8', str(ctx.exception))
