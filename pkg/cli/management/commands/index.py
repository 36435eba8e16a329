from pathlib import Path

from common.commands import QuantifyCommand
from config.constants import DELIMITERS_WHITESPACE, DELIMITERS_WHITESPACE_PUNCT
from relevance.index import build_index
from relevance.serializers import save_index
from relevance.tokenizer import TokenizerConfig


class Command(QuantifyCommand):
    help = 'Build a term-frequency index (one document per input file, keyed by file stem).'

    def add_arguments(self, parser):
        parser.add_argument('--input', nargs='+', required=True, help='UTF-8 text files to index')
        parser.add_argument('--output', required=True, help='index JSON destination')
        parser.add_argument('--lowercase', action='store_true', help='fold tokens to lower case')
        parser.add_argument(
            '--delimiters',
            choices=[DELIMITERS_WHITESPACE, DELIMITERS_WHITESPACE_PUNCT],
            default=DELIMITERS_WHITESPACE,
            help='token delimiters',
        )

    def run(self, **options):
        config = TokenizerConfig(lowercase=options['lowercase'], delimiters=options['delimiters'])
        # bytes go to the tokenizer so invalid UTF-8 is a domain error, not an I/O one
        docs = [(Path(path).stem, Path(path).read_bytes()) for path in options['input']]
        cqsm = build_index(docs, config)
        save_index(cqsm, options['output'])

        if options['as_json']:
            self.emit_json({
                doc_id: {'n': index.total_tokens, 's': index.distinct_terms}
                for doc_id, index in sorted(cqsm.documents.items())
            })
        elif not options['quiet']:
            for doc_id, index in sorted(cqsm.documents.items()):
                self.stdout.write(f'{doc_id}\tn={index.total_tokens}\ts={index.distinct_terms}')
