import logging
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple

from pydantic import ValidationError

from ..models.lexicon import (
    AttributeSpec, CircularityLink, CreatedElement, FormatKind, Lexicon, LexiconSymbol,
    MethodKind, MethodSpec, OccurrenceBounds, ParameterRef, ParameterRole, Sentence,
    Severity, SymbolType,
)
from ..schemas import ParseDiagnostic
from ..utils.text import normalize_term
from .base_dal import BaseDAL, PathLike

logger = logging.getLogger(__name__)

_QUOTED = r'"((?:[^"\\]|\\.)*)"'

SYMBOL_RE = re.compile(rf'^symbol\s+{_QUOTED}\s*$', re.IGNORECASE)
ALIASES_RE = re.compile(r'^aliases\s*:\s*(.*)$', re.IGNORECASE)
TYPE_RE = re.compile(r'^type\s*:\s*(.*)$', re.IGNORECASE)
SECTION_RE = re.compile(r'^(notion|behavior|behaviour)\s*:\s*$', re.IGNORECASE)
ITEM_RE = re.compile(r'^-(.*)$')
ATTRIBUTE_RE = re.compile(rf'^attribute\s+{_QUOTED}\s*:\s*(.*)$', re.IGNORECASE)
METHOD_RE = re.compile(
    rf'^method\s+{_QUOTED}\s*:\s*kind\s*=\s*(\S+)(?:\s+params\s*=\s*(.*?))?\s*$', re.IGNORECASE)
LINK_RE = re.compile(
    rf'^link\s+{_QUOTED}\s*:'
    rf'\s*source\s*=\s*{_QUOTED}\s*(?:\[([^\]]*)\])?(?:\s+as\s+{_QUOTED})?'
    rf'\s+target\s*=\s*{_QUOTED}\s*(?:\[([^\]]*)\])?(?:\s+as\s+{_QUOTED})?\s*$',
    re.IGNORECASE)
VOCABULARY_RE = re.compile(r'^vocabulary\s*:\s*(.*)$', re.IGNORECASE)
KEY_VALUE_RE = re.compile(rf'(\w+)\s*=\s*(?:{_QUOTED}|(\S+))')
PARAM_RE = re.compile(rf'{_QUOTED}|([^,\s"]+)')
BOUNDS_RE = re.compile(r'^\s*(\d+)\s*\.\.\s*(\d+|\*)\s*$')

METHOD_KINDS = {kind.value: kind for kind in MethodKind}
SYMBOL_TYPES = {kind.value: kind for kind in SymbolType}


def unescape(value: str) -> str:
    return re.sub(r'\\(.)', r'\1', value)


def quote(value: str) -> str:
    escaped = value.replace('\\', '\\\\').replace('"', '\\"')
    return f'"{escaped}"'


def parse_bounds(raw: Optional[str]) -> OccurrenceBounds:
    """Parse `lo..hi` or `lo..*`; a missing bracket means [0..*]."""
    if raw is None:
        return OccurrenceBounds()
    match = BOUNDS_RE.match(raw)
    if not match:
        raise ValueError(f"malformed occurrence bounds '[{raw}]'")
    upper = match.group(2)
    try:
        return OccurrenceBounds(lower=int(match.group(1)), upper=upper if upper == "*" else int(upper))
    except ValidationError:
        raise ValueError(f"malformed occurrence bounds '[{raw}]'") from None


def term_index(symbols: Iterable[LexiconSymbol]) -> Dict[str, str]:
    """Map every normalized name and alias to its symbol's canonical name (names first)."""
    symbols = list(symbols)
    index: Dict[str, str] = {}
    for symbol in symbols:
        index.setdefault(normalize_term(symbol.name), symbol.name)
    for symbol in symbols:
        for alias in symbol.aliases:
            index.setdefault(normalize_term(alias), symbol.name)
    return index


@dataclass
class _SymbolDraft:
    line: int
    name: str
    discard: bool = False
    symbol_type: Optional[SymbolType] = None
    type_invalid: bool = False
    aliases: List[str] = field(default_factory=list)
    alias_line: int = 0
    section: Optional[str] = None
    notion: List[Sentence] = field(default_factory=list)
    behavior: List[Sentence] = field(default_factory=list)
    attributes: List[AttributeSpec] = field(default_factory=list)
    methods: List[MethodSpec] = field(default_factory=list)


@dataclass
class _LinkDraft:
    line: int
    match: "re.Match"


class LexiconParser:
    """Line-oriented reader for the eLEL DSL; problems become diagnostics, never exceptions."""

    def __init__(self):
        self.diagnostics: List[ParseDiagnostic] = []
        self.symbols: List[Tuple[_SymbolDraft, LexiconSymbol]] = []
        self.links: List[_LinkDraft] = []
        self.vocabulary: Set[str] = set()
        self.seen_names: Set[str] = set()
        self.current: Optional[_SymbolDraft] = None

    def error(self, line: int, message: str) -> None:
        self.diagnostics.append(ParseDiagnostic(line=line, severity=Severity.ERROR, message=message))

    def warning(self, line: int, message: str) -> None:
        self.diagnostics.append(ParseDiagnostic(line=line, severity=Severity.WARNING, message=message))

    def parse(self, text: str) -> Tuple[Lexicon, List[ParseDiagnostic]]:
        lines = text.replace("\r\n", "\n").replace("\r", "\n").split("\n")
        for number, raw in enumerate(lines, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                self._parse_line(number, line)
            except ValueError as exc:
                self.error(number, str(exc))
        self._close_symbol()
        lexicon = self._build()
        self.diagnostics.sort(key=lambda d: d.line)
        if self.diagnostics:
            logger.info("parsed lexicon with %d diagnostic(s)", len(self.diagnostics))
        return lexicon, self.diagnostics

    # Statements

    def _parse_line(self, number: int, line: str) -> None:
        match = SYMBOL_RE.match(line)
        if match:
            self._open_symbol(number, unescape(match.group(1)).strip())
            return
        match = LINK_RE.match(line)
        if match:
            self.links.append(_LinkDraft(number, match))
            return
        if line.lower().startswith("link"):
            raise ValueError("malformed link declaration")
        match = VOCABULARY_RE.match(line)
        if match:
            self.vocabulary.update(w.lower() for w in re.split(r"[,\s]+", match.group(1)) if w)
            return

        draft = self.current
        if draft is None:
            raise ValueError(f"statement outside a symbol block: '{line}'")
        if draft.discard:
            return

        match = ITEM_RE.match(line)
        if match:
            self._add_entry(number, draft, match.group(1).strip())
            return
        match = SECTION_RE.match(line)
        if match:
            draft.section = "behavior" if match.group(1).lower().startswith("behav") else "notion"
            return
        draft.section = None
        match = TYPE_RE.match(line)
        if match:
            self._set_type(number, draft, match.group(1).strip())
            return
        match = ALIASES_RE.match(line)
        if match:
            draft.aliases.extend(a.strip() for a in match.group(1).split("|") if a.strip())
            draft.alias_line = number
            return
        match = ATTRIBUTE_RE.match(line)
        if match:
            self._add_attribute(number, draft, unescape(match.group(1)), match.group(2))
            return
        match = METHOD_RE.match(line)
        if match:
            self._add_method(number, draft, unescape(match.group(1)), match.group(2), match.group(3))
            return
        raise ValueError(f"unrecognized statement '{line}'")

    def _open_symbol(self, number: int, name: str) -> None:
        self._close_symbol()
        draft = _SymbolDraft(line=number, name=name)
        key = normalize_term(name)
        if not key:
            self.error(number, "symbol name is empty")
            draft.discard = True
        elif key in self.seen_names:
            self.error(number, f"duplicate symbol name '{name}'")
            draft.discard = True
        else:
            self.seen_names.add(key)
        self.current = draft

    def _set_type(self, number: int, draft: _SymbolDraft, raw: str) -> None:
        symbol_type = SYMBOL_TYPES.get(raw.lower())
        if symbol_type is None:
            draft.type_invalid = True
            raise ValueError(f"unknown symbol type '{raw}' (expected subject, object, verb or state)")
        if draft.symbol_type is not None and draft.symbol_type != symbol_type:
            self.warning(number, f"type of '{draft.name}' redeclared as {symbol_type.value}")
        draft.symbol_type = symbol_type

    def _add_entry(self, number: int, draft: _SymbolDraft, text: str) -> None:
        if draft.section is None:
            raise ValueError("entry outside a notion or behavior section")
        if not text:
            raise ValueError("empty entry")
        target = draft.notion if draft.section == "notion" else draft.behavior
        target.append(Sentence(text=text))

    def _add_attribute(self, number: int, draft: _SymbolDraft, name: str, rest: str) -> None:
        values = {}
        for match in KEY_VALUE_RE.finditer(rest):
            key = match.group(1).lower()
            values[key] = unescape(match.group(2)) if match.group(2) is not None else match.group(3)
        missing = [key for key in ("code", "format", "size") if key not in values]
        if missing:
            raise ValueError(f"attribute '{name}' lacks {', '.join(missing)}")
        unknown = set(values) - {"code", "definition", "format", "size"}
        if unknown:
            self.warning(number, f"attribute '{name}' ignores {', '.join(sorted(unknown))}")
        try:
            size = int(values["size"])
        except ValueError:
            raise ValueError(f"attribute '{name}' has a non-integer size '{values['size']}'") from None
        try:
            attribute = AttributeSpec(
                name=name,
                code=values["code"],
                definition=values.get("definition", ""),
                format=FormatKind.parse(values["format"]),
                size=size,
            )
        except ValidationError as exc:
            raise ValueError(f"invalid attribute '{name}': {_first_error(exc)}") from None
        if any(a.code == attribute.code for a in draft.attributes):
            raise ValueError(f"duplicate attribute code '{attribute.code}' in '{draft.name}'")
        draft.attributes.append(attribute)

    def _add_method(self, number: int, draft: _SymbolDraft, name: str, kind: str,
                    params: Optional[str]) -> None:
        method_kind = METHOD_KINDS.get(kind.lower())
        if method_kind is None:
            raise ValueError(f"unknown method kind '{kind}' (expected accessor, mutator, action or event)")
        parameters = []
        for match in PARAM_RE.finditer(params or ""):
            if match.group(1) is not None:
                parameters.append(ParameterRef(target=unescape(match.group(1)), role=ParameterRole.SYMBOL_REF))
            else:
                parameters.append(ParameterRef(target=match.group(2), role=ParameterRole.ATTRIBUTE_REF))
        name = name.strip()
        if name.endswith("()"):
            name = name[:-2]
        try:
            method = MethodSpec(name=name, kind=method_kind, parameters=tuple(parameters))
        except ValidationError as exc:
            raise ValueError(f"invalid method '{name}': {_first_error(exc)}") from None
        if any(m.name == method.name for m in draft.methods):
            raise ValueError(f"duplicate method '{method.name}' in '{draft.name}'")
        draft.methods.append(method)

    def _close_symbol(self) -> None:
        draft, self.current = self.current, None
        if draft is None or draft.discard:
            return
        if draft.symbol_type is None:
            if not draft.type_invalid:
                self.error(draft.line, f"symbol '{draft.name}' has no type")
            return
        try:
            symbol = LexiconSymbol(
                name=draft.name,
                symbol_type=draft.symbol_type,
                notion=tuple(draft.notion),
                behavior=tuple(draft.behavior),
                attributes=tuple(draft.attributes),
                methods=tuple(draft.methods),
            )
        except ValidationError as exc:
            self.error(draft.line, f"invalid symbol '{draft.name}': {_first_error(exc)}")
            return
        self.symbols.append((draft, symbol))

    # Whole-document checks

    def _build(self) -> Lexicon:
        names = {normalize_term(symbol.name): symbol.name for _, symbol in self.symbols}
        owners: Dict[str, str] = {}
        symbols = []
        for draft, symbol in self.symbols:
            kept: List[str] = []
            for alias in draft.aliases:
                key = normalize_term(alias)
                owner = names.get(key)
                if owner == symbol.name or any(normalize_term(a) == key for a in kept):
                    continue
                if owner is not None:
                    self.error(draft.alias_line, f"alias '{alias}' of '{symbol.name}' is the name of '{owner}'")
                    continue
                if key in owners:
                    self.warning(draft.alias_line, f"alias '{alias}' is shared with '{owners[key]}'")
                else:
                    owners[key] = symbol.name
                kept.append(alias)
            symbols.append(symbol.model_copy(update={"aliases": tuple(kept)}) if kept else symbol)

        index = term_index(symbols)
        links = []
        for draft in self.links:
            link = self._build_link(draft, index)
            if link is not None:
                links.append(link)
        try:
            return Lexicon(symbols=tuple(symbols), links=tuple(links), base_vocabulary=frozenset(self.vocabulary))
        except ValidationError as exc:
            self.error(1, f"inconsistent lexicon: {_first_error(exc)}")
            return Lexicon(symbols=tuple(symbols), base_vocabulary=frozenset(self.vocabulary))

    def _build_link(self, draft: _LinkDraft, index: Dict[str, str]) -> Optional[CircularityLink]:
        groups = draft.match.groups()
        name = unescape(groups[0]).strip()
        ends = []
        for text, bounds, element in ((groups[1], groups[2], groups[3]), (groups[4], groups[5], groups[6])):
            written = unescape(text).strip()
            symbol = index.get(normalize_term(written))
            if symbol is None:
                self.error(draft.line, f"link '{name}' endpoint '{written}' is not a symbol")
                return None
            try:
                occurrence = parse_bounds(bounds)
            except ValueError as exc:
                self.error(draft.line, f"link '{name}': {exc}")
                return None
            element_name = unescape(element).strip() if element is not None else written
            ends.append((symbol, element_name, occurrence))
        try:
            return CircularityLink(
                name=name,
                source=ends[0][0],
                target=ends[1][0],
                elements=tuple(
                    CreatedElement(name=element_name, symbol=symbol, occurrence=occurrence)
                    for symbol, element_name, occurrence in ends
                ),
            )
        except ValidationError as exc:
            self.error(draft.line, f"invalid link '{name}': {_first_error(exc)}")
            return None


def _first_error(exc: ValidationError) -> str:
    errors = exc.errors()
    return errors[0]["msg"] if errors else str(exc)


def parse_lexicon(text: str) -> Tuple[Lexicon, List[ParseDiagnostic]]:
    """Parse eLEL DSL text into a Lexicon plus line diagnostics."""
    return LexiconParser().parse(text)


# Serialization

def _format_sentences(header: str, sentences: Sequence[Sentence]) -> List[str]:
    if not sentences:
        return []
    return [f"{header}:", *(f"  - {s.text}" for s in sentences)]


def format_attribute(attribute: AttributeSpec) -> str:
    return (
        f"attribute {quote(attribute.name)}: code={attribute.code} "
        f"definition={quote(attribute.definition)} format={attribute.format.value} size={attribute.size}"
    )


def format_method(method: MethodSpec) -> str:
    line = f"method {quote(method.name)}: kind={method.kind.value}"
    if method.parameters:
        params = ",".join(
            quote(p.target) if p.role == ParameterRole.SYMBOL_REF else p.target
            for p in method.parameters
        )
        line += f" params={params}"
    return line


def format_symbol(symbol: LexiconSymbol) -> str:
    lines = [f"symbol {quote(symbol.name)}"]
    if symbol.aliases:
        lines.append(f"aliases: {' | '.join(symbol.aliases)}")
    lines.append(f"type: {symbol.symbol_type.value}")
    lines.extend(_format_sentences("notion", symbol.notion))
    lines.extend(_format_sentences("behavior", symbol.behavior))
    lines.extend(format_attribute(a) for a in symbol.attributes)
    lines.extend(format_method(m) for m in symbol.methods)
    return "\n".join(lines)


def format_link(link: CircularityLink, index: Dict[str, str]) -> str:
    ends = []
    for role, element in zip(("source", "target"), link.elements):
        if index.get(normalize_term(element.name)) == element.symbol:
            ends.append(f"{role}={quote(element.name)}[{element.occurrence.render()}]")
        else:
            ends.append(f"{role}={quote(element.symbol)}[{element.occurrence.render()}] as {quote(element.name)}")
    return f"link {quote(link.name)}: {' '.join(ends)}"


def serialize_lexicon(lexicon: Lexicon) -> str:
    """Emit DSL text; parse_lexicon of the result reproduces the lexicon."""
    blocks = []
    if lexicon.base_vocabulary:
        blocks.append(f"vocabulary: {', '.join(sorted(lexicon.base_vocabulary))}")
    blocks.extend(format_symbol(symbol) for symbol in lexicon.symbols)
    if lexicon.links:
        index = term_index(lexicon.symbols)
        blocks.append("\n".join(format_link(link, index) for link in lexicon.links))
    return "\n\n".join(blocks) + "\n" if blocks else ""


class LexiconDAL(BaseDAL[Lexicon]):
    def load(self, path: PathLike) -> Tuple[Lexicon, List[ParseDiagnostic]]:
        """Read and parse an `.elel` file."""
        return parse_lexicon(self.read_text(path))

    def save(self, path: PathLike, lexicon: Lexicon) -> Path:
        """Write a lexicon back as DSL text."""
        return self.write_text(path, serialize_lexicon(lexicon))
