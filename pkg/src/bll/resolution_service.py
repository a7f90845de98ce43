import re
from typing import Dict, Iterator, List, Optional, Pattern, Tuple

from ..dal.lexicon_dal import term_index
from ..models.lexicon import Lexicon, LexiconSymbol, ReferenceOccurrence, Sentence
from ..utils.text import normalize_term


def lookup(lexicon: Lexicon, term: str) -> Optional[LexiconSymbol]:
    """Symbol whose name, then alias, equals term after normalization."""
    key = normalize_term(term)
    if not key:
        return None
    for symbol in lexicon.symbols:
        if normalize_term(symbol.name) == key:
            return symbol
    for symbol in lexicon.symbols:
        if any(normalize_term(alias) == key for alias in symbol.aliases):
            return symbol
    return None


def term_pattern(terms) -> Optional[Pattern]:
    """Case-insensitive alternation of terms, longest first, anchored on word boundaries.

    Inner whitespace of a term matches any whitespace run.
    """
    alternatives = sorted(set(terms), key=lambda t: (-len(t), t))
    if not alternatives:
        return None
    body = "|".join(r"\s+".join(re.escape(word) for word in term.split()) for term in alternatives)
    return re.compile(rf"(?<![^\W_])(?:{body})(?![^\W_])", re.IGNORECASE)


class ReferenceResolver:
    """Rebuilds every sentence's references against one lexicon's terms."""

    def __init__(self, lexicon: Lexicon):
        self.index: Dict[str, str] = term_index(lexicon.symbols)
        self.pattern = term_pattern(self.index)

    def matches(self, text: str) -> Iterator[Tuple[re.Match, str]]:
        """Every leftmost-longest term match with the symbol it names."""
        if self.pattern is None:
            return
        for match in self.pattern.finditer(text):
            target = self.index.get(normalize_term(match.group(0)))
            if target is not None:
                yield match, target

    def own_spans(self, text: str, owner: str) -> List[Tuple[int, int]]:
        """Spans where the text names owner itself."""
        return [match.span() for match, target in self.matches(text) if target == owner]

    def find(self, text: str, owner: str) -> Tuple[ReferenceOccurrence, ...]:
        """Leftmost-longest matches in text, dropping those that name owner itself.

        Own terms still take part in matching, so another symbol's shorter
        name nested inside the owner's name is not reported.
        """
        found = []
        for match, target in self.matches(text):
            if target == owner:
                continue
            found.append(ReferenceOccurrence(
                target_symbol=target,
                span_start=match.start(),
                span_end=match.end(),
                matched_text=match.group(0),
            ))
        return tuple(found)

    def resolve_sentence(self, sentence: Sentence, owner: str) -> Sentence:
        refs = self.find(sentence.text, owner)
        if refs == sentence.resolved_refs:
            return sentence
        return sentence.model_copy(update={"resolved_refs": refs})

    def resolve_symbol(self, symbol: LexiconSymbol) -> LexiconSymbol:
        return symbol.model_copy(update={
            "notion": tuple(self.resolve_sentence(s, symbol.name) for s in symbol.notion),
            "behavior": tuple(self.resolve_sentence(s, symbol.name) for s in symbol.behavior),
        })


def resolve_references(lexicon: Lexicon) -> Lexicon:
    """Return the lexicon with every notion/behavior sentence's references rebuilt."""
    resolver = ReferenceResolver(lexicon)
    return lexicon.model_copy(update={"symbols": tuple(resolver.resolve_symbol(s) for s in lexicon.symbols)})
