import logging
import re
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from ..dal.wordlist_dal import WordListDAL
from ..models.lexicon import (
    AttributeSpec, CircularityLink, CreatedElement, EntryKind, FormatKind, Lexicon,
    LexiconSymbol, MethodKind, MethodSpec, ParameterRef, ParameterRole, SymbolType,
)
from ..schemas import DerivationTrace, EntryRef, TraceStep
from ..utils.naming import accessor_suffix, code_for, method_identifier, verb_method_name
from ..utils.text import ARTICLES, WORD_PATTERN, normalize_term
from .errors import NoTriggerVerbError, SymbolTypeError
from .resolution_service import ReferenceResolver, resolve_references

logger = logging.getLogger(__name__)

CHARACTERIZATION_RE = re.compile(
    r"(?<![^\W_])(?:characteri[sz]ed\s+by|contains|(?:is\s+)?made\s+up\s+of|consists?\s+of)\s+",
    re.IGNORECASE,
)
FRAGMENT_SEPARATOR_RE = re.compile(r",\s*and\s+|,|\s+and\s+", re.IGNORECASE)
FRAGMENT_TRIM_RE = re.compile(r"^\s*(.*?)[\s.;:!?]*$", re.DOTALL)
LEADING_ARTICLES_RE = re.compile(r"^(?:(?:a|an|the)\s+)+", re.IGNORECASE)
TOKEN_RE = re.compile(rf"{WORD_PATTERN}|[^\w\s]")

PARTICLES = frozenset({"in", "out", "up", "on"})
QUANTITY_NOUNS = frozenset({"number", "amount", "quantity", "list", "set", "count"})
PHRASE_BOUNDARIES = frozenset({
    "about", "after", "and", "at", "before", "between", "by", "during", "following", "for",
    "from", "in", "into", "of", "on", "or", "that", "to", "until", "when", "which", "who",
    "with", "within",
})

# (keyword, format, size); first keyword found in the name wins.
METADATA_KEYWORDS: Tuple[Tuple[str, FormatKind, int], ...] = (
    ("date", FormatKind.DATE, 8),
    ("number", FormatKind.DIGIT, 6),
    ("num", FormatKind.DIGIT, 2),
    ("year", FormatKind.DIGIT, 4),
    ("month", FormatKind.DIGIT, 2),
    ("day", FormatKind.DIGIT, 2),
    ("hour", FormatKind.DIGIT, 2),
    ("minute", FormatKind.DIGIT, 2),
)

CLASS_TYPES = (SymbolType.SUBJECT, SymbolType.OBJECT)


def _require_type(symbol: LexiconSymbol, *expected: SymbolType) -> None:
    if symbol.symbol_type not in expected:
        raise SymbolTypeError(symbol.name, symbol.symbol_type.value, [t.value for t in expected])


def _is_plural(word: str) -> bool:
    return len(word) > 3 and word.endswith("s") and not word.endswith(("ss", "us", "is"))


def _capitalized(text: str) -> str:
    return text[:1].upper() + text[1:]


def default_metadata(attribute_name: str, hints: Optional[Tuple[FormatKind, int]] = None,
                     definition: Optional[str] = None) -> AttributeSpec:
    """Fill code, definition, format and size of an attribute from its name."""
    name = " ".join(attribute_name.split())
    if hints is not None:
        format_kind, size = hints
    else:
        format_kind, size = FormatKind.TEXT, 25
        lowered = name.lower()
        for keyword, keyword_format, keyword_size in METADATA_KEYWORDS:
            if keyword in lowered:
                format_kind, size = keyword_format, keyword_size
                break
    return AttributeSpec(
        name=name,
        code=code_for(name),
        definition=definition if definition is not None else _capitalized(name),
        format=format_kind,
        size=size,
    )


def synthesize_accessors(attr: AttributeSpec) -> Tuple[MethodSpec, MethodSpec]:
    suffix = accessor_suffix(attr.code)
    parameter = (ParameterRef(target=attr.code, role=ParameterRole.ATTRIBUTE_REF),)
    return (
        MethodSpec(name=f"get{suffix}", kind=MethodKind.ACCESSOR, parameters=parameter),
        MethodSpec(name=f"set{suffix}", kind=MethodKind.MUTATOR, parameters=parameter),
    )


def _fragments(text: str, start: int) -> Iterable[Tuple[int, int]]:
    position = start
    for separator in FRAGMENT_SEPARATOR_RE.finditer(text, start):
        yield position, separator.start()
        position = separator.end()
    yield position, len(text)


def _unique_code(code: str, taken: set) -> str:
    candidate, counter = code, 2
    while candidate in taken:
        candidate = f"{code}_{counter}"
        counter += 1
    taken.add(candidate)
    return candidate


class DerivationService:
    """Mechanized construction steps over a lexicon."""

    def __init__(self, enablement_prefixes: Optional[Sequence[str]] = None):
        if enablement_prefixes is None:
            enablement_prefixes = WordListDAL().enablement_prefixes()
        prefixes = {tuple(t.lower() for t in TOKEN_RE.findall(p)) for p in enablement_prefixes}
        self.prefixes: List[Tuple[str, ...]] = sorted((p for p in prefixes if p), key=lambda p: (-len(p), p))

    # Attributes

    def extract_attribute_candidates(self, symbol: LexiconSymbol, lexicon: Lexicon) -> List[str]:
        return [name for name, _ in self._attribute_candidates(symbol, lexicon)]

    def _attribute_candidates(self, symbol: LexiconSymbol, lexicon: Lexicon) -> List[Tuple[str, int]]:
        _require_type(symbol, *CLASS_TYPES)
        resolver = ReferenceResolver(lexicon)
        seen = set()
        found: List[Tuple[str, int]] = []
        for index, sentence in enumerate(symbol.notion):
            text = sentence.text
            match = CHARACTERIZATION_RE.search(text)
            if match is None:
                continue
            refs = resolver.find(text, symbol.name)
            for start, end in _fragments(text, match.end()):
                if any(ref.span_start < end and ref.span_end > start for ref in refs):
                    continue
                fragment = FRAGMENT_TRIM_RE.match(text[start:end]).group(1)
                fragment = LEADING_ARTICLES_RE.sub("", fragment).strip()
                key = normalize_term(fragment)
                if not re.search(r"[^\W_]", fragment) or key in seen:
                    continue
                seen.add(key)
                found.append((fragment, index))
        return found

    # Subject methods

    def render_behavior(self, text: str) -> Optional[str]:
        """Method name for one behavioral-response sentence, e.g. "It can enable us to declare the birth" -> DeclareBirth."""
        tokens = [t.lower() for t in TOKEN_RE.findall(text)]
        for prefix in self.prefixes:
            if tuple(tokens[:len(prefix)]) == prefix:
                tokens = tokens[len(prefix):]
                break
        while tokens and tokens[0] == "to":
            tokens = tokens[1:]
        if not tokens or not re.match(r"[^\W_]", tokens[0]):
            return None
        words = [tokens[0]]
        position = 1
        if position < len(tokens) and tokens[position] in PARTICLES:
            position += 1
        while position < len(tokens):
            token = tokens[position]
            position += 1
            if not re.match(r"[^\W_]", token):
                break
            if token in ARTICLES:
                continue
            if token == "of" and len(words) > 1 and words[-1] in QUANTITY_NOUNS:
                continue
            if token in PHRASE_BOUNDARIES:
                # "the days between ..." counts days
                if token == "between" and len(words) > 1 and words[1] not in QUANTITY_NOUNS \
                        and _is_plural(words[-1]):
                    words.insert(1, "number")
                break
            words.append(token)
        return method_identifier(words)

    def _subject_methods(self, symbol: LexiconSymbol) -> List[Tuple[MethodSpec, int]]:
        _require_type(symbol, SymbolType.SUBJECT)
        methods: List[Tuple[MethodSpec, int]] = []
        names = set()
        for index, sentence in enumerate(symbol.behavior):
            name = self.render_behavior(sentence.text)
            if name is None or name in names:
                continue
            names.add(name)
            methods.append((MethodSpec(name=name, kind=MethodKind.ACTION), index))
        return methods

    def derive_subject_methods(self, symbol: LexiconSymbol) -> List[MethodSpec]:
        return [method for method, _ in self._subject_methods(symbol)]

    # Verbs and states

    def _derived_verb_members(self, symbol: LexiconSymbol, lexicon: Lexicon
                              ) -> Tuple[List[Tuple[AttributeSpec, EntryRef]], MethodSpec]:
        resolved = ReferenceResolver(lexicon).resolve_symbol(symbol)
        attributes: List[Tuple[AttributeSpec, EntryRef]] = []
        seen, codes = set(), set()
        for kind, index, sentence in resolved.entries():
            for ref in sentence.resolved_refs:
                target = lexicon.get(ref.target_symbol)
                if target is None or target.symbol_type not in CLASS_TYPES or target.name in seen:
                    continue
                seen.add(target.name)
                spec = default_metadata(target.name, hints=(FormatKind.COMPLEX, 1))
                spec = spec.model_copy(update={"code": _unique_code(spec.code, codes)})
                attributes.append((spec, EntryRef(kind=kind, index=index)))
        name = verb_method_name(symbol.name) or "Perform"
        method = MethodSpec(
            name=name,
            kind=MethodKind.ACTION,
            parameters=tuple(ParameterRef(target=a.code) for a, _ in attributes),
        )
        return attributes, method

    def derive_verb(self, symbol: LexiconSymbol, lexicon: Lexicon) -> Tuple[List[AttributeSpec], MethodSpec]:
        """Effective verb members: authored attributes and action method win over derived ones."""
        _require_type(symbol, SymbolType.VERB)
        derived_attributes, derived_method = self._derived_verb_members(symbol, lexicon)
        attributes = list(symbol.attributes) or [a for a, _ in derived_attributes]
        actions = [m for m in symbol.methods if m.kind in (MethodKind.ACTION, MethodKind.EVENT_TRIGGER)]
        if actions:
            method = actions[0]
        else:
            method = derived_method.model_copy(update={
                "parameters": tuple(ParameterRef(target=a.code) for a in attributes),
            })
        return attributes, method

    def trigger_verbs(self, symbol: LexiconSymbol, lexicon: Lexicon) -> List[Tuple[LexiconSymbol, EntryRef]]:
        """Verb symbols referenced in a state's notion, in textual order."""
        resolved = ReferenceResolver(lexicon).resolve_symbol(symbol)
        verbs: List[Tuple[LexiconSymbol, EntryRef]] = []
        for index, sentence in enumerate(resolved.notion):
            for ref in sentence.resolved_refs:
                target = lexicon.get(ref.target_symbol)
                if target is not None and target.symbol_type == SymbolType.VERB \
                        and all(v.name != target.name for v, _ in verbs):
                    verbs.append((target, EntryRef(kind=EntryKind.NOTION, index=index)))
        return verbs

    def derive_state(self, symbol: LexiconSymbol, lexicon: Lexicon) -> Tuple[List[AttributeSpec], MethodSpec]:
        _require_type(symbol, SymbolType.STATE)
        verbs = self.trigger_verbs(symbol, lexicon)
        if not verbs:
            raise NoTriggerVerbError(symbol.name)
        if len(verbs) > 1:
            logger.warning("state '%s' references %d verbs; using '%s'", symbol.name, len(verbs), verbs[0][0].name)
        attributes, method = self.derive_verb(verbs[0][0], lexicon)
        return attributes, method.model_copy(update={"kind": MethodKind.EVENT_TRIGGER})

    # Circularity

    def build_circularity_traced(self, lexicon: Lexicon) -> Tuple[List[CircularityLink], List[DerivationTrace]]:
        resolved = resolve_references(lexicon)
        found: List[Tuple[CircularityLink, EntryRef]] = []
        pairs = set()
        for symbol in resolved.symbols:
            for kind, index, sentence in symbol.entries():
                for ref in sentence.resolved_refs:
                    pair = frozenset({normalize_term(symbol.name), normalize_term(ref.target_symbol)})
                    if pair in pairs:
                        continue
                    pairs.add(pair)
                    link = CircularityLink(
                        name=f"{symbol.name}_{ref.target_symbol}".replace(" ", "_"),
                        source=symbol.name,
                        target=ref.target_symbol,
                        elements=(
                            CreatedElement(name=symbol.name, symbol=symbol.name),
                            CreatedElement(name=ref.target_symbol, symbol=ref.target_symbol),
                        ),
                    )
                    found.append((link, EntryRef(kind=kind, index=index)))

        authored = list(lexicon.links)
        used = [False] * len(authored)
        links: List[CircularityLink] = []
        traces: List[DerivationTrace] = []
        names = {a.name for a in authored}
        for link, entry in found:
            match = next(
                (i for i, a in enumerate(authored) if not used[i] and a.pair == link.pair),
                None,
            )
            if match is not None:
                used[match] = True
                links.append(authored[match])
                continue
            name = _unique_code(link.name, names)
            if name != link.name:
                link = link.model_copy(update={"name": name})
            links.append(link)
            traces.append(DerivationTrace(
                symbol=link.source, step=TraceStep.S13, produced=f"link {link.name}", source_entry=entry,
            ))
        links.extend(a for a, was_used in zip(authored, used) if not was_used)
        return links, traces

    def build_circularity(self, lexicon: Lexicon) -> List[CircularityLink]:
        return self.build_circularity_traced(lexicon)[0]

    # Whole lexicon

    def derive(self, lexicon: Lexicon) -> Tuple[Lexicon, List[DerivationTrace]]:
        """Run every derivation step; authored members are kept and only gaps are filled."""
        lexicon = resolve_references(lexicon)
        traces: List[DerivationTrace] = []

        symbols = [self._derive_class_symbol(s, lexicon, traces) if s.symbol_type in CLASS_TYPES else s
                   for s in lexicon.symbols]
        lexicon = lexicon.model_copy(update={"symbols": tuple(symbols)})

        symbols = [self._derive_verb_symbol(s, lexicon, traces) if s.symbol_type == SymbolType.VERB else s
                   for s in lexicon.symbols]
        lexicon = lexicon.model_copy(update={"symbols": tuple(symbols)})

        symbols = [self._derive_state_symbol(s, lexicon, traces) if s.symbol_type == SymbolType.STATE else s
                   for s in lexicon.symbols]
        lexicon = lexicon.model_copy(update={"symbols": tuple(symbols)})

        links, link_traces = self.build_circularity_traced(lexicon)
        traces.extend(link_traces)
        logger.info("derivation produced %d artifact(s)", len(traces))
        return lexicon.model_copy(update={"links": tuple(links)}), traces

    def _derive_class_symbol(self, symbol: LexiconSymbol, lexicon: Lexicon,
                             traces: List[DerivationTrace]) -> LexiconSymbol:
        attributes = list(symbol.attributes)
        methods = list(symbol.methods)
        if not attributes:
            step = TraceStep.S5 if symbol.symbol_type == SymbolType.SUBJECT else TraceStep.S7
            codes = set()
            for name, index in self._attribute_candidates(symbol, lexicon):
                spec = default_metadata(name)
                spec = spec.model_copy(update={"code": _unique_code(spec.code, codes)})
                attributes.append(spec)
                traces.append(DerivationTrace(
                    symbol=symbol.name, step=step, produced=f"attribute {spec.name} ({spec.code})",
                    source_entry=EntryRef(kind=EntryKind.NOTION, index=index),
                ))

        if symbol.symbol_type == SymbolType.OBJECT:
            covered = {m.attribute_target for m in methods if m.attribute_target is not None}
            names = {m.name for m in methods}
            for attribute in attributes:
                if attribute.code in covered:
                    continue
                for accessor in synthesize_accessors(attribute):
                    if accessor.name in names:
                        continue
                    names.add(accessor.name)
                    methods.append(accessor)
                    traces.append(DerivationTrace(
                        symbol=symbol.name, step=TraceStep.S6, produced=f"method {accessor.rendered}",
                        note=f"{accessor.kind.value} of {attribute.code}",
                    ))
        elif not any(m.kind == MethodKind.ACTION for m in methods):
            names = {m.name for m in methods}
            for method, index in self._subject_methods(symbol):
                if method.name in names:
                    continue
                names.add(method.name)
                methods.append(method)
                traces.append(DerivationTrace(
                    symbol=symbol.name, step=TraceStep.S8, produced=f"method {method.rendered}",
                    source_entry=EntryRef(kind=EntryKind.BEHAVIOR, index=index),
                ))
        return symbol.model_copy(update={"attributes": tuple(attributes), "methods": tuple(methods)})

    def _derive_verb_symbol(self, symbol: LexiconSymbol, lexicon: Lexicon,
                            traces: List[DerivationTrace]) -> LexiconSymbol:
        derived_attributes, _ = self._derived_verb_members(symbol, lexicon)
        attributes, method = self.derive_verb(symbol, lexicon)
        if not symbol.attributes:
            for spec, entry in derived_attributes:
                traces.append(DerivationTrace(
                    symbol=symbol.name, step=TraceStep.S9, produced=f"attribute {spec.name} ({spec.code})",
                    source_entry=entry,
                ))
        methods = list(symbol.methods)
        if method not in methods:
            methods.append(method)
            traces.append(DerivationTrace(symbol=symbol.name, step=TraceStep.S9, produced=f"method {method.rendered}"))
        return symbol.model_copy(update={"attributes": tuple(attributes), "methods": tuple(methods)})

    def _derive_state_symbol(self, symbol: LexiconSymbol, lexicon: Lexicon,
                             traces: List[DerivationTrace]) -> LexiconSymbol:
        has_trigger = any(m.kind in (MethodKind.EVENT_TRIGGER, MethodKind.ACTION) for m in symbol.methods)
        if symbol.attributes and has_trigger:
            return symbol
        try:
            attributes, method = self.derive_state(symbol, lexicon)
        except NoTriggerVerbError as exc:
            logger.warning("%s; state left as authored", exc)
            return symbol
        verbs = self.trigger_verbs(symbol, lexicon)
        note = None
        if len(verbs) > 1:
            note = f"{len(verbs)} verbs referenced; first one used"
        entry = verbs[0][1]
        new_attributes = list(symbol.attributes)
        if not new_attributes:
            new_attributes = attributes
            for spec in attributes:
                traces.append(DerivationTrace(
                    symbol=symbol.name, step=TraceStep.S10, produced=f"attribute {spec.name} ({spec.code})",
                    source_entry=entry, note=note,
                ))
        methods = list(symbol.methods)
        if not has_trigger:
            methods.append(method)
            traces.append(DerivationTrace(
                symbol=symbol.name, step=TraceStep.S10, produced=f"method {method.rendered}",
                source_entry=entry, note=note,
            ))
        return symbol.model_copy(update={"attributes": tuple(new_attributes), "methods": tuple(methods)})


def extract_attribute_candidates(symbol: LexiconSymbol, lexicon: Lexicon) -> List[str]:
    return DerivationService(enablement_prefixes=()).extract_attribute_candidates(symbol, lexicon)


def derive_subject_methods(symbol: LexiconSymbol, enablement_prefixes: Optional[Sequence[str]] = None) -> List[MethodSpec]:
    return DerivationService(enablement_prefixes).derive_subject_methods(symbol)


def derive_verb(symbol: LexiconSymbol, lexicon: Lexicon) -> Tuple[List[AttributeSpec], MethodSpec]:
    return DerivationService(enablement_prefixes=()).derive_verb(symbol, lexicon)


def derive_state(symbol: LexiconSymbol, lexicon: Lexicon) -> Tuple[List[AttributeSpec], MethodSpec]:
    return DerivationService(enablement_prefixes=()).derive_state(symbol, lexicon)


def build_circularity(lexicon: Lexicon) -> List[CircularityLink]:
    return DerivationService(enablement_prefixes=()).build_circularity(lexicon)


def derive(lexicon: Lexicon) -> Tuple[Lexicon, List[DerivationTrace]]:
    return DerivationService().derive(lexicon)
