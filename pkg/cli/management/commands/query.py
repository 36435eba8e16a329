from pathlib import Path

from common.commands import QuantifyCommand
from common.formatting import fmt
from relevance.response_serializers import RankedDocumentSerializer
from relevance.scoring import rank
from relevance.serializers import load_index


class Command(QuantifyCommand):
    help = 'Rank the indexed documents by the relevance of a query.'

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument('query', nargs='?', help='query text, tokenized like the index')
        source.add_argument('--query-file', help='UTF-8 file holding the query text')
        parser.add_argument('--index', required=True, help='index JSON built by the index command')
        parser.add_argument('--table', action='store_true', help='tab-separated table instead of JSON')

    def run(self, **options):
        if options['query_file']:
            # bytes go to the tokenizer so invalid UTF-8 is a domain error, not an I/O one
            query = Path(options['query_file']).read_bytes()
        else:
            query = options['query']
        ranked = rank(load_index(options['index']), query)

        if not options['table']:
            self.emit_json(RankedDocumentSerializer(ranked, many=True).data)
            return

        self.stdout.write('doc_id\trelevance\tcoverage\tsemantic_mean\tmode')
        for doc_id, score in ranked:
            self.stdout.write(
                f'{doc_id}\t{fmt(score.relevance)}\t{fmt(score.coverage)}\t'
                f'{fmt(score.semantic_mean)}\t{score.mode.value}'
            )
