import logging
import re
from collections import Counter
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from nltk.util import ngrams

from .. import config
from ..dal.wordlist_dal import WordListDAL
from ..models.lexicon import SymbolType
from ..schemas import CandidateTerm, ExtractionConfig, SourceDocument
from ..utils.text import tokenize_words
from .errors import NoCorpusError

logger = logging.getLogger(__name__)

COPULAS = frozenset({"is", "are", "was", "were", "be", "been"})
IRREGULAR_PARTICIPLES = frozenset({
    "born", "bought", "brought", "built", "done", "found", "given", "held", "kept",
    "known", "made", "paid", "put", "sent", "set", "shown", "told", "written",
})


def default_config(
    min_frequency: Optional[int] = None,
    max_ngram: Optional[int] = None,
    stopwords_path=None,
    action_verbs_path=None,
) -> ExtractionConfig:
    """Extraction settings from the environment and bundled word lists."""
    words = WordListDAL()
    return ExtractionConfig(
        min_frequency=min_frequency if min_frequency is not None else config.MIN_FREQUENCY,
        max_ngram=max_ngram if max_ngram is not None else config.MAX_NGRAM,
        stopwords=words.stopwords(stopwords_path),
        action_verbs=words.action_verbs(action_verbs_path),
    )


def _is_contained(inner: Tuple[str, ...], outer: Tuple[str, ...]) -> bool:
    size = len(inner)
    return any(outer[i:i + size] == inner for i in range(len(outer) - size + 1))


def _phrase_regex(words: Sequence[str]) -> str:
    return r"\s+".join(re.escape(word) for word in words)


class ExtractionService:
    def __init__(self, extraction_config: ExtractionConfig):
        self.config = extraction_config

    def count_ngrams(self, document: SourceDocument) -> Counter:
        """n-gram counts of one document; windows never cross sentence ends."""
        stopwords = self.config.stopwords
        counts: Counter = Counter()
        for sentence in document.sentences:
            tokens = tokenize_words(sentence)
            for size in range(1, self.config.max_ngram + 1):
                for gram in ngrams(tokens, size):
                    if gram[0] in stopwords or gram[-1] in stopwords:
                        continue
                    counts[" ".join(gram)] += 1
        return counts

    def extract_candidates(self, docs: Sequence[SourceDocument]) -> List[CandidateTerm]:
        if not docs:
            raise NoCorpusError()
        counts: Counter = Counter()
        for document in docs:
            counts.update(self.count_ngrams(document))

        frequent: Dict[Tuple[str, ...], int] = {
            tuple(phrase.split()): count
            for phrase, count in counts.items()
            if count >= self.config.min_frequency
        }
        survivors: List[Tuple[str, ...]] = []
        for words in sorted(frequent, key=lambda w: (-len(w), w)):
            subsumed = any(
                len(longer) > len(words)
                and frequent[longer] == frequent[words]
                and _is_contained(words, longer)
                for longer in survivors
            )
            if not subsumed:
                survivors.append(words)

        candidates = [
            CandidateTerm(
                phrase=" ".join(words),
                frequency=frequent[words],
                score=frequent[words] * len(words),
            )
            for words in survivors
        ]
        candidates.sort(key=lambda c: (-c.score, c.phrase))
        logger.info("extracted %d candidate term(s) from %d document(s)", len(candidates), len(docs))
        return candidates

    def suggest_type(self, term: CandidateTerm, docs: Sequence[SourceDocument]) -> Optional[SymbolType]:
        """Cue-based classification hint; None when the phrase never occurs."""
        words = tuple(term.phrase.split())
        sentences = [sentence for document in docs for sentence in document.sentences]
        if not any(_is_contained(words, tuple(w for w in tokenize_words(s) if w not in COPULAS))
                   for s in sentences):
            return None
        text = "\n".join(sentences)

        to_verb = re.compile(rf"(?<![^\W_])to\s+{re.escape(words[0])}(?![^\W_])", re.IGNORECASE)
        if words[0] in self.config.action_verbs or to_verb.search(text):
            return SymbolType.VERB

        for word in words:
            if word in IRREGULAR_PARTICIPLES or word.endswith(("ed", "en")):
                passive = re.compile(rf"(?<![^\W_])(?:is|are)\s+{re.escape(word)}(?![^\W_])", re.IGNORECASE)
                if passive.search(text):
                    return SymbolType.STATE

        # the agent cue stays inside one sentence
        agent = re.compile(rf"(?<![^\W_])the\s+{_phrase_regex(words)}\s+([^\W\d_]+)", re.IGNORECASE)
        for sentence in sentences:
            for match in agent.finditer(sentence):
                if match.group(1).lower() not in self.config.stopwords:
                    return SymbolType.SUBJECT
        return SymbolType.OBJECT

    def with_suggestions(self, candidates: Iterable[CandidateTerm],
                         docs: Sequence[SourceDocument]) -> List[CandidateTerm]:
        return [c.model_copy(update={"suggested_type": self.suggest_type(c, docs)}) for c in candidates]


def extract_candidates(docs: Sequence[SourceDocument], extraction_config: ExtractionConfig) -> List[CandidateTerm]:
    return ExtractionService(extraction_config).extract_candidates(docs)


def suggest_type(term: CandidateTerm, docs: Sequence[SourceDocument],
                 action_verbs: FrozenSet[str] = frozenset(),
                 stopwords: Optional[FrozenSet[str]] = None) -> Optional[SymbolType]:
    extraction_config = ExtractionConfig(
        stopwords=stopwords if stopwords is not None else WordListDAL().stopwords(),
        action_verbs=action_verbs,
    )
    return ExtractionService(extraction_config).suggest_type(term, docs)
