import re
import string
from dataclasses import dataclass

from common.exceptions import DomainError
from config.constants import DELIMITERS_WHITESPACE, DELIMITERS_WHITESPACE_PUNCT

_SPLITTERS = {
    DELIMITERS_WHITESPACE: re.compile(r'\s+'),
    DELIMITERS_WHITESPACE_PUNCT: re.compile(r'[\s' + re.escape(string.punctuation) + r']+'),
}


@dataclass(frozen=True)
class TokenizerConfig:
    lowercase: bool = False
    delimiters: str = DELIMITERS_WHITESPACE

    def __post_init__(self):
        if self.delimiters not in _SPLITTERS:
            raise DomainError(f'unknown delimiter class {self.delimiters!r}')


def tokenize(text, config: TokenizerConfig = TokenizerConfig()) -> list[str]:
    if isinstance(text, bytes):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError as e:
            raise DomainError(f'text is not valid UTF-8: {e}') from e
    if config.lowercase:
        text = text.lower()
    return [token for token in _SPLITTERS[config.delimiters].split(text) if token]
