import re
from typing import Iterable, List

from nltk.tokenize import RegexpTokenizer

# A word is a run of letters/digits, optionally joined by apostrophes ("newborn's").
WORD_PATTERN = r"[^\W_]+(?:['’][^\W_]+)*"

word_tokenizer = RegexpTokenizer(WORD_PATTERN)

ARTICLES = frozenset({"a", "an", "the"})

_WHITESPACE_RE = re.compile(r"\s+")


def normalize_term(term: str) -> str:
    """Collapse whitespace and case-fold a symbol name or query."""
    return _WHITESPACE_RE.sub(" ", term).strip().casefold()


def tokenize_words(text: str) -> List[str]:
    """Lower-cased word tokens of a piece of text."""
    return [token.lower() for token in word_tokenizer.tokenize(text)]


def strip_articles(words: Iterable[str]) -> List[str]:
    """Drop leading articles from a word sequence."""
    words = list(words)
    while words and words[0].lower() in ARTICLES:
        words.pop(0)
    return words
