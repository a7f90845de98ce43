from enum import Enum
from typing import Dict, FrozenSet, Optional, Tuple

from pydantic import Field, PositiveInt, model_validator

from .models.lexicon import EntryKind, FrozenModel, NonEmptyStr, Severity, SymbolType


class EntryRef(FrozenModel):
    kind: EntryKind
    index: int = Field(..., ge=0)


# Format layer

class ParseDiagnostic(FrozenModel):
    line: PositiveInt
    severity: Severity
    message: str

    def render(self, label: str = "<input>") -> str:
        return f"{label}:{self.line}: {self.severity.value}: {self.message}"


class SourceDocument(FrozenModel):
    path_label: str
    sentences: Tuple[NonEmptyStr, ...] = ()


# Term extraction

class ExtractionConfig(FrozenModel):
    min_frequency: PositiveInt = 2
    max_ngram: int = Field(3, ge=1, le=4)
    stopwords: FrozenSet[str] = Field(..., min_length=1)
    action_verbs: FrozenSet[str] = frozenset()


class CandidateTerm(FrozenModel):
    phrase: NonEmptyStr
    frequency: PositiveInt
    score: int = Field(..., ge=0)
    suggested_type: Optional[SymbolType] = None

    @property
    def word_count(self) -> int:
        return len(self.phrase.split())

    @model_validator(mode="after")
    def _check_score(self) -> "CandidateTerm":
        if not 1 <= self.word_count <= 4:
            raise ValueError("a candidate phrase has one to four words")
        if self.score != self.frequency * self.word_count:
            raise ValueError("score must equal frequency times word count")
        return self


# Validation

class LintFinding(FrozenModel):
    rule_id: str
    symbol: str
    severity: Severity
    message: str
    location: Optional[EntryRef] = None

    def sort_key(self) -> Tuple:
        location = (self.location.kind.value, self.location.index) if self.location else ("", -1)
        return (self.symbol, self.rule_id, location, self.message)


class SymbolClosure(FrozenModel):
    referenced_terms: int = Field(..., ge=0)
    covered_words: int = Field(..., ge=0)
    content_words: int = Field(..., ge=0)
    closure_ratio: float = Field(..., ge=0.0, le=1.0)


class ClosureReport(FrozenModel):
    per_symbol: Dict[str, SymbolClosure] = Field(default_factory=dict)
    foreign_words: Dict[str, PositiveInt] = Field(default_factory=dict)


class LintReport(FrozenModel):
    closure: ClosureReport
    findings: Tuple[LintFinding, ...] = ()

    @property
    def has_errors(self) -> bool:
        return any(f.severity == Severity.ERROR for f in self.findings)


# Derivation

class TraceStep(str, Enum):
    S5 = "S5"
    S6 = "S6"
    S7 = "S7"
    S8 = "S8"
    S9 = "S9"
    S10 = "S10"
    S13 = "S13"


class DerivationTrace(FrozenModel):
    symbol: str
    step: TraceStep
    produced: str
    source_entry: Optional[EntryRef] = None
    note: Optional[str] = None


# Presentation

class EmitOptions(FrozenModel):
    include_accessors: bool = True
    sort_members: bool = False


class CommandOutcome(FrozenModel):
    exit_code: int = 0
    stdout_payload: str = ""
    stderr_payload: str = ""
