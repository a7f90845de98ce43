import pytest
from hypothesis import given, strategies as st

from src.bll.validation_service import RULES, ValidationService
from src.dal.lexicon_dal import parse_lexicon
from src.models.lexicon import LexiconSymbol, Sentence, Severity, SymbolType
from src.utils.text import normalize_term
from .strategies import FILLERS, FRESH_WORDS, PROPERTY_SETTINGS, WORDS, lexicons

STOPWORDS = frozenset({"the", "a", "it", "is", "of", "and", "by", "to"})

CLOSURE_TEXT = '''symbol "Officer"
type: subject
notion:
  - The officer checks the form.
behavior:
  - It fills the form.

symbol "Form"
type: object
notion:
  - It is a sheet.
behavior:
  - The officer signs it.
'''


def _parse(text):
    lexicon, diagnostics = parse_lexicon(text)
    assert [d for d in diagnostics if d.severity == Severity.ERROR] == []
    return lexicon


def _rules(findings, symbol=None):
    return sorted(f.rule_id for f in findings if symbol is None or f.symbol == symbol)


@pytest.fixture
def small_validator():
    return ValidationService(stopwords=STOPWORDS, closure_threshold=0.5)


def test_closure_counts(small_validator):
    report = small_validator.check_closure(_parse(CLOSURE_TEXT))
    officer = report.per_symbol["Officer"]
    assert (officer.referenced_terms, officer.covered_words, officer.content_words) == (2, 2, 5)
    assert officer.closure_ratio == pytest.approx(0.4)
    form = report.per_symbol["Form"]
    assert (form.covered_words, form.content_words) == (1, 3)
    assert report.foreign_words == {"checks": 1, "fills": 1, "sheet": 1, "signs": 1}


def test_lexicon_vocabulary_is_not_foreign(small_validator):
    lexicon = _parse("vocabulary: checks, fills\n\n" + CLOSURE_TEXT)
    assert small_validator.check_closure(lexicon).foreign_words == {"sheet": 1, "signs": 1}


def test_closure_and_vocabulary_findings(small_validator):
    report = small_validator.lint(_parse(CLOSURE_TEXT))
    assert _rules(report.findings, "Officer") == ["CLOSURE-01", "TYPO-02", "VOCAB-01"]
    vocab = next(f for f in report.findings if f.rule_id == "VOCAB-01" and f.symbol == "Officer")
    assert vocab.severity == Severity.INFO
    assert vocab.message.endswith("checks, fills")
    assert not report.has_errors


def test_empty_entries_are_errors(small_validator):
    lexicon = _parse('symbol "Clerk"\ntype: subject\nnotion:\n  - It is characterized by a name.\n')
    findings = small_validator.check_typology(lexicon)
    (empty,) = [f for f in findings if f.rule_id == "TYPO-01"]
    assert empty.severity == Severity.ERROR
    assert "behavioral response" in empty.message


def test_attributes_derivable_from_notion_silence_typo02(small_validator):
    text = '''symbol "Clerk"
type: subject
notion:
  - It is characterized by a name and a desk.
behavior:
  - It works.

symbol "Form"
type: object
notion:
  - It is paper.
behavior:
  - It is filled.
'''
    findings = small_validator.check_typology(_parse(text))
    assert _rules(findings, "Clerk") == []
    assert _rules(findings, "Form") == ["TYPO-02"]


def test_verb_and_state_typology(small_validator):
    text = '''symbol "Clerk"
type: subject
notion:
  - It is characterized by a name.
behavior:
  - It can stamp the form.

symbol "Form"
type: object
notion:
  - It is characterized by a number.
behavior:
  - The clerk stamps it.

symbol "Stamp the form"
type: verb
notion:
  - Something happens.
behavior:
  - The form is stamped.

symbol "Form stamped"
type: state
notion:
  - The form is stamped.
behavior:
  - Nothing follows.

symbol "Form archived"
type: state
notion:
  - The form is kept.
behavior:
  - It follows form stamped.
'''
    findings = small_validator.check_typology(_parse(text))
    assert _rules(findings, "Stamp the form") == ["TYPO-03"]
    assert _rules(findings, "Form stamped") == ["TYPO-04"]
    assert _rules(findings, "Form archived") == []


def test_object_actions_need_a_verb(small_validator):
    text = '''symbol "Form"
type: object
notion:
  - It is characterized by a number.
behavior:
  - It is stamped.
method "StampForm": kind=action
method "Shred": kind=action

symbol "Stamp the form"
type: verb
notion:
  - The form is stamped.
behavior:
  - The form is ready.
'''
    findings = small_validator.check_typology(_parse(text))
    (typo,) = [f for f in findings if f.rule_id == "TYPO-05"]
    assert typo.severity == Severity.ERROR
    assert "Shred()" in typo.message


def test_links_need_a_mention(small_validator):
    text = CLOSURE_TEXT + '''
symbol "Desk"
type: object
notion:
  - A desk.
behavior:
  - It stands.

link "uses": source="Officer"[1..1] target="Form"[0..*]
link "sits": source="Officer"[1..1] target="Desk"[0..1]
'''
    findings = small_validator.check_links(_parse(text))
    (dangling,) = findings
    assert dangling.rule_id == "LINK-01"
    assert "'sits'" in dangling.message


def test_parameters_must_resolve(small_validator):
    text = '''symbol "Form"
type: object
notion:
  - A form.
behavior:
  - A form.
attribute "Number": code=number format=Digit size=6
method "getNumber": kind=accessor params=number
method "getColour": kind=accessor params=colour
method "Send": kind=action params="Ghost","form"
'''
    findings = small_validator.check_parameters(_parse(text))
    assert [(f.rule_id, f.message) for f in findings] == [
        ("REF-01", "method 'getColour()' parameter 'colour' names no attribute of the lexicon"),
        ("REF-01", "method 'Send()' parameter 'Ghost' names no symbol of the lexicon"),
    ]


def test_fixture_lints_without_errors(lexicon, validator):
    report = validator.lint(lexicon)
    assert not report.has_errors
    assert set(report.closure.per_symbol) == {s.name for s in lexicon.symbols}
    assert list(report.findings) == sorted(report.findings, key=lambda f: f.sort_key())


def test_rule_registry_severities():
    errors = {rule_id for rule_id, rule in RULES.items() if rule.severity == Severity.ERROR}
    assert errors == {"TYPO-01", "TYPO-05", "LINK-01", "REF-01"}


validator_for_properties = ValidationService(stopwords=frozenset(FILLERS))


def _with_symbol(lexicon, name):
    return lexicon.model_copy(update={"symbols": lexicon.symbols + (
        LexiconSymbol(name=name, symbol_type=SymbolType.OBJECT, notion=(Sentence(text=f"A {name.lower()}."),)),
    )})


def test_overlapping_symbol_can_shadow_references():
    lexicon, _ = parse_lexicon('''symbol "Owner"
type: object
notion:
  - The bravo cargo delta.

symbol "Bravo"
type: object

symbol "Cargo delta"
type: object
''')
    before = validator_for_properties.check_closure(lexicon).per_symbol["Owner"]
    after = validator_for_properties.check_closure(_with_symbol(lexicon, "Bravo cargo")).per_symbol["Owner"]
    # leftmost-longest: "bravo cargo" wins and "delta" is left alone
    assert (before.referenced_terms, before.covered_words) == (2, 3)
    assert (after.referenced_terms, after.covered_words) == (1, 2)


@PROPERTY_SETTINGS
@given(lexicons(with_members=False, with_links=False), st.data())
def test_closure_grows_with_word_disjoint_symbols(lexicon, data):
    used = {word for symbol in lexicon.symbols for term in symbol.terms for word in normalize_term(term).split()}
    free = [word for word in WORDS + FRESH_WORDS if word not in used]
    name = " ".join(data.draw(st.lists(st.sampled_from(free), min_size=1, max_size=3, unique=True)))

    before = validator_for_properties.check_closure(lexicon).per_symbol
    after = validator_for_properties.check_closure(_with_symbol(lexicon, name.capitalize())).per_symbol
    for symbol_name, closure in before.items():
        assert 0.0 <= closure.closure_ratio <= 1.0
        assert after[symbol_name].content_words == closure.content_words
        assert after[symbol_name].referenced_terms >= closure.referenced_terms
        assert after[symbol_name].covered_words >= closure.covered_words
        assert after[symbol_name].closure_ratio >= closure.closure_ratio
