import re
from enum import Enum
from typing import Annotated, FrozenSet, Iterator, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, StringConstraints, model_validator

from ..utils.text import normalize_term

NonEmptyStr = Annotated[str, StringConstraints(strip_whitespace=True, min_length=1)]
Identifier = Annotated[str, StringConstraints(pattern=r"^[A-Za-z][A-Za-z0-9_]*$")]
# "|" separates aliases on one line
AliasStr = Annotated[str, StringConstraints(strip_whitespace=True, min_length=1, pattern=r"^[^|\r\n]+$")]
# attribute references are written bare, so no whitespace, comma or quote
BARE_REFERENCE_RE = re.compile(r"^[^\s,\"]+$")

UNBOUNDED = "*"


class SymbolType(str, Enum):
    SUBJECT = "subject"
    OBJECT = "object"
    VERB = "verb"
    STATE = "state"


class FormatKind(str, Enum):
    TEXT = "Text"
    DIGIT = "Digit"
    DATE = "Date"
    COMPLEX = "Complex"

    @classmethod
    def parse(cls, raw: str) -> "FormatKind":
        """Case-insensitive lookup; "Digital" is read as Digit."""
        key = raw.strip().lower()
        if key == "digital":
            return cls.DIGIT
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(f"unknown format '{raw}'")


class MethodKind(str, Enum):
    ACCESSOR = "accessor"
    MUTATOR = "mutator"
    ACTION = "action"
    EVENT_TRIGGER = "event"


class ParameterRole(str, Enum):
    ATTRIBUTE_REF = "attribute"
    SYMBOL_REF = "symbol"


class EntryKind(str, Enum):
    NOTION = "notion"
    BEHAVIOR = "behavior"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


class FrozenModel(BaseModel):
    model_config = ConfigDict(frozen=True)


class ReferenceOccurrence(FrozenModel):
    target_symbol: str
    span_start: int = Field(..., ge=0)
    span_end: int = Field(..., ge=0)
    matched_text: str

    @model_validator(mode="after")
    def _check_span(self) -> "ReferenceOccurrence":
        if self.span_end - self.span_start != len(self.matched_text):
            raise ValueError("span does not match the matched text")
        return self


class Sentence(FrozenModel):
    text: NonEmptyStr
    resolved_refs: Tuple[ReferenceOccurrence, ...] = ()

    @model_validator(mode="after")
    def _check_refs(self) -> "Sentence":
        previous_end = 0
        for ref in sorted(self.resolved_refs, key=lambda r: r.span_start):
            if ref.span_start < previous_end or ref.span_end > len(self.text):
                raise ValueError("reference spans overlap or leave the sentence")
            if self.text[ref.span_start:ref.span_end] != ref.matched_text:
                raise ValueError("matched text differs from the sentence substring")
            previous_end = ref.span_end
        return self


class AttributeSpec(FrozenModel):
    name: NonEmptyStr
    code: Identifier
    definition: str = ""
    format: FormatKind = FormatKind.TEXT
    size: int = Field(25, ge=1)


class ParameterRef(FrozenModel):
    target: NonEmptyStr
    role: ParameterRole = ParameterRole.ATTRIBUTE_REF

    @model_validator(mode="after")
    def _check_bare_target(self) -> "ParameterRef":
        if self.role == ParameterRole.ATTRIBUTE_REF and not BARE_REFERENCE_RE.match(self.target):
            raise ValueError(f"attribute reference '{self.target}' must not contain whitespace, commas or quotes")
        return self


class MethodSpec(FrozenModel):
    name: Identifier
    kind: MethodKind = MethodKind.ACTION
    parameters: Tuple[ParameterRef, ...] = ()

    @model_validator(mode="after")
    def _check_accessor_shape(self) -> "MethodSpec":
        prefix = {MethodKind.ACCESSOR: "get", MethodKind.MUTATOR: "set"}.get(self.kind)
        if prefix is None:
            return self
        if not self.name.startswith(prefix):
            raise ValueError(f"{self.kind.value} '{self.name}' must start with '{prefix}'")
        attribute_refs = [p for p in self.parameters if p.role == ParameterRole.ATTRIBUTE_REF]
        if len(self.parameters) != 1 or len(attribute_refs) != 1:
            raise ValueError(f"{self.kind.value} '{self.name}' must reference exactly one attribute")
        return self

    @property
    def rendered(self) -> str:
        return f"{self.name}()"

    @property
    def attribute_target(self) -> Optional[str]:
        """Attribute code an accessor or mutator works on."""
        if self.kind in (MethodKind.ACCESSOR, MethodKind.MUTATOR) and self.parameters:
            return self.parameters[0].target
        return None


class OccurrenceBounds(FrozenModel):
    lower: int = Field(0, ge=0)
    upper: Union[Annotated[int, Field(ge=1)], Literal["*"]] = UNBOUNDED

    @model_validator(mode="after")
    def _check_order(self) -> "OccurrenceBounds":
        if self.upper != UNBOUNDED and self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")
        return self

    @property
    def is_unbounded(self) -> bool:
        return self.upper == UNBOUNDED

    def render(self) -> str:
        return f"{self.lower}..{self.upper}"


class CreatedElement(FrozenModel):
    name: NonEmptyStr
    symbol: NonEmptyStr
    occurrence: OccurrenceBounds = OccurrenceBounds()


class CircularityLink(FrozenModel):
    name: NonEmptyStr
    source: NonEmptyStr
    target: NonEmptyStr
    elements: Tuple[CreatedElement, CreatedElement]

    @model_validator(mode="after")
    def _check_endpoints(self) -> "CircularityLink":
        if normalize_term(self.source) == normalize_term(self.target):
            raise ValueError("a circularity link needs two distinct symbols")
        if self.elements[0].symbol != self.source or self.elements[1].symbol != self.target:
            raise ValueError("created elements must belong to the source and target symbols")
        return self

    @property
    def pair(self) -> FrozenSet[str]:
        return frozenset({normalize_term(self.source), normalize_term(self.target)})


class LexiconSymbol(FrozenModel):
    name: NonEmptyStr
    aliases: Tuple[AliasStr, ...] = ()
    symbol_type: SymbolType
    notion: Tuple[Sentence, ...] = ()
    behavior: Tuple[Sentence, ...] = ()
    attributes: Tuple[AttributeSpec, ...] = ()
    methods: Tuple[MethodSpec, ...] = ()

    @property
    def terms(self) -> List[str]:
        return [self.name, *self.aliases]

    def entries(self) -> Iterator[Tuple[EntryKind, int, Sentence]]:
        """Notion then behavioral-response entries, in authored order."""
        for index, sentence in enumerate(self.notion):
            yield EntryKind.NOTION, index, sentence
        for index, sentence in enumerate(self.behavior):
            yield EntryKind.BEHAVIOR, index, sentence

    def references(self) -> Iterator[ReferenceOccurrence]:
        for _, _, sentence in self.entries():
            yield from sentence.resolved_refs


class Lexicon(FrozenModel):
    symbols: Tuple[LexiconSymbol, ...] = ()
    links: Tuple[CircularityLink, ...] = ()
    base_vocabulary: FrozenSet[str] = frozenset()

    @model_validator(mode="after")
    def _check_integrity(self) -> "Lexicon":
        names = {}
        for symbol in self.symbols:
            key = normalize_term(symbol.name)
            if key in names:
                raise ValueError(f"duplicate symbol name '{symbol.name}'")
            names[key] = symbol.name
        for symbol in self.symbols:
            for alias in symbol.aliases:
                owner = names.get(normalize_term(alias))
                if owner is not None and owner != symbol.name:
                    raise ValueError(f"alias '{alias}' of '{symbol.name}' names symbol '{owner}'")
        for link in self.links:
            for endpoint in (link.source, link.target):
                if normalize_term(endpoint) not in names:
                    raise ValueError(f"link '{link.name}' endpoint '{endpoint}' is not a symbol")
        return self

    def get(self, name: str) -> Optional[LexiconSymbol]:
        """Symbol by canonical name (case-insensitive)."""
        key = normalize_term(name)
        for symbol in self.symbols:
            if normalize_term(symbol.name) == key:
                return symbol
        return None

    def of_type(self, *types: SymbolType) -> List[LexiconSymbol]:
        return [s for s in self.symbols if s.symbol_type in types]
