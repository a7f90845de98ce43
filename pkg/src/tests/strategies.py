''' Hypothesis strategies generating lexicons, corpora and their pieces, plus a
brute-force reference finder to check resolution against.

Symbol terms are built from a small word pool so that sentences built from
the same pool mention other symbols often enough to exercise resolution.
'''

import re

from hypothesis import HealthCheck, settings, strategies as st

from src.bll.resolution_service import lookup
from src.models.lexicon import (
    AttributeSpec, CircularityLink, CreatedElement, FormatKind, Lexicon, LexiconSymbol,
    MethodKind, MethodSpec, OccurrenceBounds, ParameterRef, ParameterRole, Sentence, SymbolType,
)
from src.schemas import SourceDocument
from src.utils.text import normalize_term

PROPERTY_SETTINGS = settings(
    max_examples=200,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)

WORDS = (
    "alpha", "bravo", "cargo", "delta", "echo", "fiscal",
    "garden", "harbor", "index", "jetty", "kernel", "ledger",
)
FILLERS = ("the", "of", "a", "and", "is", "it")
FRESH_WORDS = ("quorum", "zenith", "yonder")

words = st.sampled_from(WORDS)
terms = st.lists(words, min_size=1, max_size=3).map(" ".join)
identifiers = st.from_regex(r"[a-z][a-z0-9_]{0,7}", fullmatch=True)
method_names = st.from_regex(r"[A-Z][A-Za-z0-9]{0,7}", fullmatch=True)
quoted_texts = st.text(alphabet=st.sampled_from(list('abc xyz"\\')), max_size=12)


def _capitalized(text):
    return text[:1].upper() + text[1:]


@st.composite
def sentences(draw, vocabulary=WORDS + FILLERS):
    tokens = draw(st.lists(st.sampled_from(vocabulary), min_size=1, max_size=10))
    return Sentence(text=_capitalized(" ".join(tokens)) + ".")


bounds = st.integers(0, 3).flatmap(
    lambda lower: st.one_of(
        st.just(OccurrenceBounds(lower=lower)),
        st.integers(max(lower, 1), lower + 3).map(lambda upper: OccurrenceBounds(lower=lower, upper=upper)),
    )
)


@st.composite
def attributes(draw, max_size=4):
    codes = draw(st.lists(identifiers, max_size=max_size, unique=True))
    specs = []
    for code in codes:
        name = draw(st.one_of(terms, terms.map(lambda t: f'{t} "quoted"')))
        specs.append(AttributeSpec(
            name=name,
            code=code,
            definition=draw(quoted_texts),
            format=draw(st.sampled_from(list(FormatKind))),
            size=draw(st.integers(1, 99)),
        ))
    return tuple(specs)


@st.composite
def methods(draw, symbol_names, codes, max_size=3):
    names = draw(st.lists(method_names, max_size=max_size, unique=True))
    specs = []
    for name in names:
        kind = draw(st.sampled_from(list(MethodKind)))
        if kind in (MethodKind.ACCESSOR, MethodKind.MUTATOR):
            prefix = "get" if kind == MethodKind.ACCESSOR else "set"
            target = draw(st.sampled_from(codes)) if codes else draw(identifiers)
            specs.append(MethodSpec(name=prefix + name, kind=kind, parameters=(ParameterRef(target=target),)))
            continue
        parameters = draw(st.lists(st.one_of(
            identifiers.map(lambda code: ParameterRef(target=code, role=ParameterRole.ATTRIBUTE_REF)),
            st.sampled_from(symbol_names).map(lambda n: ParameterRef(target=n, role=ParameterRole.SYMBOL_REF)),
        ), max_size=3))
        specs.append(MethodSpec(name=name, kind=kind, parameters=tuple(parameters)))
    return tuple(specs)


@st.composite
def lexicons(draw, max_symbols=5, with_members=True, with_links=True, types=tuple(SymbolType)):
    """Valid lexicons: unique names, aliases naming no other symbol, links between distinct symbols."""
    pool = draw(st.lists(terms, min_size=1, max_size=max_symbols * 2, unique_by=normalize_term))
    count = draw(st.integers(1, min(max_symbols, len(pool))))
    names = [_capitalized(term) for term in pool[:count]]
    aliases = {name: [] for name in names}
    for alias in pool[count:]:
        aliases[draw(st.sampled_from(names))].append(alias)

    symbols = []
    for name in names:
        symbol_attributes = draw(attributes()) if with_members else ()
        symbol_methods = draw(methods(names, [a.code for a in symbol_attributes])) if with_members else ()
        symbols.append(LexiconSymbol(
            name=name,
            aliases=tuple(aliases[name]),
            symbol_type=draw(st.sampled_from(types)),
            notion=tuple(draw(st.lists(sentences(), max_size=3))),
            behavior=tuple(draw(st.lists(sentences(), max_size=3))),
            attributes=symbol_attributes,
            methods=symbol_methods,
        ))

    links = []
    if with_links and len(symbols) > 1:
        for _ in range(draw(st.integers(0, 3))):
            source, target = draw(st.lists(st.sampled_from(symbols), min_size=2, max_size=2,
                                           unique_by=lambda s: s.name))
            elements = tuple(
                CreatedElement(
                    name=draw(st.one_of(st.sampled_from(symbol.terms), terms)),
                    symbol=symbol.name,
                    occurrence=draw(bounds),
                )
                for symbol in (source, target)
            )
            links.append(CircularityLink(
                name=draw(st.one_of(terms, terms.map(lambda t: f'{t} "x"'))),
                source=source.name,
                target=target.name,
                elements=elements,
            ))

    vocabulary = draw(st.frozensets(st.sampled_from(FRESH_WORDS + ("zulu", "yankee"))))
    return Lexicon(symbols=tuple(symbols), links=tuple(links), base_vocabulary=vocabulary)


@st.composite
def characterized_objects(draw, max_symbols=4):
    """Object-only lexicons whose notions list attributes after "characterized by"."""
    pool = draw(st.lists(terms, min_size=1, max_size=max_symbols, unique_by=normalize_term))
    symbols = []
    for term in pool:
        listed = draw(st.lists(words, min_size=1, max_size=4, unique=True))
        phrases = [f"a {word}" for word in listed]
        text = "It is characterized by " + (
            f"{', '.join(phrases[:-1])} and {phrases[-1]}" if len(phrases) > 1 else phrases[0]
        ) + "."
        symbols.append(LexiconSymbol(
            name=_capitalized(term),
            symbol_type=SymbolType.OBJECT,
            notion=(Sentence(text=text),),
            behavior=tuple(draw(st.lists(sentences(), max_size=2))),
        ))
    return Lexicon(symbols=tuple(symbols))


@st.composite
def corpora(draw, max_words=200):
    """One document of at most max_words words, stopwords included."""
    vocabulary = WORDS[:6] + ("the", "of", "a")
    budget = max_words
    texts = []
    for _ in range(draw(st.integers(1, 10))):
        if budget <= 0:
            break
        tokens = draw(st.lists(st.sampled_from(vocabulary), min_size=1, max_size=min(20, budget)))
        budget -= len(tokens)
        texts.append(" ".join(tokens))
    return SourceDocument(path_label="generated", sentences=tuple(texts))


def _word_char(char):
    return re.match(r"[^\W_]", char) is not None


def brute_force_references(lexicon, text, owner):
    """(target, start, end) of every non-overlapping, leftmost-longest term match in text, owner's dropped.

    Tries every span that starts and ends on a word boundary.
    """
    starts = [i for i in range(len(text)) if _word_char(text[i]) and (i == 0 or not _word_char(text[i - 1]))]
    ends = [i for i in range(1, len(text) + 1)
            if _word_char(text[i - 1]) and (i == len(text) or not _word_char(text[i]))]
    longest = {}
    for start in starts:
        for end in ends:
            if end > start and lookup(lexicon, text[start:end]) is not None:
                longest[start] = max(end, longest.get(start, end))
    found, position = [], 0
    for start in sorted(longest):
        if start < position:
            continue
        position = longest[start]
        found.append((lookup(lexicon, text[start:position]).name, start, position))
    return [match for match in found if match[0] != owner]
