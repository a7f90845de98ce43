import logging
from collections import Counter
from typing import Dict, FrozenSet, List, NamedTuple, Optional

from .. import config
from ..dal.wordlist_dal import WordListDAL
from ..models.lexicon import EntryKind, Lexicon, LexiconSymbol, MethodKind, ParameterRole, Severity, SymbolType
from ..schemas import ClosureReport, EntryRef, LintFinding, LintReport, SymbolClosure
from ..utils.naming import verb_method_name
from ..utils.text import word_tokenizer
from .derivation_service import DerivationService
from .resolution_service import ReferenceResolver, lookup, resolve_references

logger = logging.getLogger(__name__)


class Rule(NamedTuple):
    severity: Severity
    template: str


RULES: Dict[str, Rule] = {
    "TYPO-01": Rule(Severity.ERROR, "{entry} is empty"),
    "TYPO-02": Rule(Severity.WARNING, "{kind} symbol has no attributes and none can be derived from its notion"),
    "TYPO-03": Rule(Severity.WARNING, "verb notion names no subject or object symbol"),
    "TYPO-04": Rule(Severity.WARNING, "state behavioral response names no other state or verb"),
    "TYPO-05": Rule(Severity.ERROR, "object method '{method}' is an action no verb symbol declares"),
    "LINK-01": Rule(Severity.ERROR, "link '{link}': '{source}' and '{target}' never mention each other"),
    "REF-01": Rule(Severity.ERROR, "method '{method}' parameter '{parameter}' names no {role} of the lexicon"),
    "CLOSURE-01": Rule(Severity.WARNING, "closure ratio {ratio:.2f} is below {threshold:.2f}"),
    "VOCAB-01": Rule(Severity.INFO, "uses {count} word(s) outside the lexicon and base vocabulary: {words}"),
}


def finding(rule_id: str, symbol: str, location: Optional[EntryRef] = None, **values) -> LintFinding:
    rule = RULES[rule_id]
    return LintFinding(
        rule_id=rule_id,
        symbol=symbol,
        severity=rule.severity,
        message=rule.template.format(**values),
        location=location,
    )


class ValidationService:
    def __init__(self, stopwords: FrozenSet[str], base_vocabulary: FrozenSet[str] = frozenset(),
                 closure_threshold: Optional[float] = None):
        self.stopwords = stopwords
        self.base_vocabulary = base_vocabulary
        self.closure_threshold = config.CLOSURE_THRESHOLD if closure_threshold is None else closure_threshold
        self.derivation = DerivationService(enablement_prefixes=())

    @classmethod
    def from_config(cls, closure_threshold: Optional[float] = None) -> "ValidationService":
        """Validator over the bundled stopword and base-vocabulary lists."""
        words = WordListDAL()
        return cls(words.stopwords(), words.base_vocabulary(), closure_threshold)

    # Closure and vocabulary

    def _symbol_closure(self, symbol: LexiconSymbol, resolver: ReferenceResolver, vocabulary: FrozenSet[str],
                        foreign: Counter) -> SymbolClosure:
        referenced = covered = content = 0
        for _, _, sentence in symbol.entries():
            refs = sentence.resolved_refs
            referenced += len(refs)
            own = resolver.own_spans(sentence.text, symbol.name)
            for start, end in word_tokenizer.span_tokenize(sentence.text):
                word = sentence.text[start:end].lower()
                if word in self.stopwords:
                    continue
                content += 1
                if any(ref.span_start <= start and end <= ref.span_end for ref in refs):
                    covered += 1
                elif word.isdigit() or word in vocabulary:
                    continue
                elif not any(s <= start and end <= e for s, e in own):
                    foreign[word] += 1
        ratio = covered / content if content else 0.0
        return SymbolClosure(
            referenced_terms=referenced, covered_words=covered, content_words=content, closure_ratio=ratio,
        )

    def closure_details(self, lexicon: Lexicon) -> Dict[str, tuple]:
        """Per symbol: (closure, foreign word counter)."""
        lexicon = resolve_references(lexicon)
        resolver = ReferenceResolver(lexicon)
        vocabulary = self.base_vocabulary | lexicon.base_vocabulary | self.stopwords
        details = {}
        for symbol in lexicon.symbols:
            foreign: Counter = Counter()
            details[symbol.name] = (self._symbol_closure(symbol, resolver, vocabulary, foreign), foreign)
        return details

    def check_closure(self, lexicon: Lexicon) -> ClosureReport:
        details = self.closure_details(lexicon)
        foreign: Counter = Counter()
        for _, words in details.values():
            foreign.update(words)
        return ClosureReport(
            per_symbol={name: closure for name, (closure, _) in details.items()},
            foreign_words=dict(sorted(foreign.items())),
        )

    # Typology

    def check_typology(self, lexicon: Lexicon) -> List[LintFinding]:
        lexicon = resolve_references(lexicon)
        declared = set()
        for verb in lexicon.of_type(SymbolType.VERB):
            declared.update(m.name for m in verb.methods)
            declared.update(filter(None, (verb_method_name(term) for term in verb.terms)))

        findings: List[LintFinding] = []
        for symbol in lexicon.symbols:
            if not symbol.notion:
                findings.append(finding("TYPO-01", symbol.name, entry="notion"))
            if not symbol.behavior:
                findings.append(finding("TYPO-01", symbol.name, entry="behavioral response"))

            if symbol.symbol_type in (SymbolType.SUBJECT, SymbolType.OBJECT):
                if not symbol.attributes and not self.derivation.extract_attribute_candidates(symbol, lexicon):
                    findings.append(finding("TYPO-02", symbol.name, kind=symbol.symbol_type.value))
            elif symbol.symbol_type == SymbolType.VERB:
                if not self._references_type(lexicon, symbol, EntryKind.NOTION, SymbolType.SUBJECT, SymbolType.OBJECT):
                    findings.append(finding("TYPO-03", symbol.name))
            elif symbol.symbol_type == SymbolType.STATE:
                if not self._references_type(lexicon, symbol, EntryKind.BEHAVIOR, SymbolType.STATE, SymbolType.VERB):
                    findings.append(finding("TYPO-04", symbol.name))

            if symbol.symbol_type == SymbolType.OBJECT:
                for method in symbol.methods:
                    if method.kind in (MethodKind.ACTION, MethodKind.EVENT_TRIGGER) and method.name not in declared:
                        findings.append(finding("TYPO-05", symbol.name, method=method.rendered))
        return findings

    @staticmethod
    def _references_type(lexicon: Lexicon, symbol: LexiconSymbol, entry: EntryKind, *types: SymbolType) -> bool:
        for kind, _, sentence in symbol.entries():
            if kind != entry:
                continue
            for ref in sentence.resolved_refs:
                target = lexicon.get(ref.target_symbol)
                if target is not None and target.symbol_type in types:
                    return True
        return False

    # Links and parameters

    def check_links(self, lexicon: Lexicon) -> List[LintFinding]:
        lexicon = resolve_references(lexicon)
        findings = []
        for link in lexicon.links:
            source, target = lexicon.get(link.source), lexicon.get(link.target)
            forward = any(ref.target_symbol == target.name for ref in source.references())
            backward = any(ref.target_symbol == source.name for ref in target.references())
            if not (forward or backward):
                findings.append(finding("LINK-01", source.name, link=link.name, source=source.name, target=target.name))
        return findings

    def check_parameters(self, lexicon: Lexicon) -> List[LintFinding]:
        findings = []
        for symbol in lexicon.symbols:
            codes = {a.code for a in symbol.attributes}
            for method in symbol.methods:
                for parameter in method.parameters:
                    if parameter.role == ParameterRole.SYMBOL_REF:
                        if lookup(lexicon, parameter.target) is None:
                            findings.append(finding("REF-01", symbol.name, method=method.rendered,
                                                    parameter=parameter.target, role="symbol"))
                    elif codes and parameter.target not in codes:
                        findings.append(finding("REF-01", symbol.name, method=method.rendered,
                                                parameter=parameter.target, role="attribute"))
        return findings

    # Aggregate

    def lint(self, lexicon: Lexicon) -> LintReport:
        lexicon = resolve_references(lexicon)
        details = self.closure_details(lexicon)
        foreign: Counter = Counter()
        findings: List[LintFinding] = []
        for name, (closure, words) in details.items():
            foreign.update(words)
            if closure.closure_ratio < self.closure_threshold:
                findings.append(finding("CLOSURE-01", name, ratio=closure.closure_ratio,
                                        threshold=self.closure_threshold))
            if words:
                findings.append(finding("VOCAB-01", name, count=sum(words.values()),
                                        words=", ".join(sorted(words))))
        findings.extend(self.check_typology(lexicon))
        findings.extend(self.check_links(lexicon))
        findings.extend(self.check_parameters(lexicon))
        findings.sort(key=LintFinding.sort_key)
        closure = ClosureReport(
            per_symbol={name: closure for name, (closure, _) in details.items()},
            foreign_words=dict(sorted(foreign.items())),
        )
        report = LintReport(closure=closure, findings=tuple(findings))
        errors = sum(1 for f in findings if f.severity == Severity.ERROR)
        logger.info("lint: %d finding(s), %d error(s)", len(findings), errors)
        return report


def check_closure(lexicon: Lexicon) -> ClosureReport:
    return ValidationService.from_config().check_closure(lexicon)


def check_typology(lexicon: Lexicon) -> List[LintFinding]:
    return ValidationService.from_config().check_typology(lexicon)


def lint(lexicon: Lexicon, closure_threshold: Optional[float] = None) -> LintReport:
    return ValidationService.from_config(closure_threshold).lint(lexicon)
