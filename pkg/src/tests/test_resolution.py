from hypothesis import given

from src.bll.resolution_service import ReferenceResolver, lookup, resolve_references, term_pattern
from src.dal.lexicon_dal import parse_lexicon
from .strategies import PROPERTY_SETTINGS, brute_force_references, lexicons

SMALL = '''symbol "Civil Status Officer"
aliases: officer
type: subject
notion:
  - The civil status officer signs the birth form.
  - The  Civil   status officer is an officer.

symbol "Birth form"
aliases: form
type: object
notion:
  - A form filled in by the officer.

symbol "Civil status"
type: object
notion:
  - The civil status of a person.
'''


def _small():
    lexicon, diagnostics = parse_lexicon(SMALL)
    assert diagnostics == []
    return lexicon


def test_lookup_prefers_names_then_aliases():
    lexicon = _small()
    assert lookup(lexicon, "  BIRTH   form ").name == "Birth form"
    assert lookup(lexicon, "officer").name == "Civil Status Officer"
    assert lookup(lexicon, "clerk") is None
    assert lookup(lexicon, "   ") is None


def test_term_pattern_is_longest_first_and_word_bounded():
    pattern = term_pattern(["form", "birth form"])
    assert pattern.search("the birth form").group(0) == "birth form"
    assert pattern.search("the formal birthform") is None
    assert term_pattern([]) is None


def test_references_are_leftmost_longest():
    lexicon = resolve_references(_small())
    form = lexicon.get("Birth form")
    (ref,) = form.notion[0].resolved_refs
    assert ref.target_symbol == "Civil Status Officer"
    assert ref.matched_text == "officer"


def test_own_terms_hide_nested_names():
    lexicon = resolve_references(_small())
    officer = lexicon.get("Civil Status Officer")
    first, second = officer.notion
    # "civil status officer" names the owner, so "Civil status" inside it is not a reference
    assert [(r.target_symbol, r.matched_text) for r in first.resolved_refs] == [("Birth form", "birth form")]
    assert second.resolved_refs == ()


def test_inner_whitespace_runs_match():
    resolver = ReferenceResolver(_small())
    (ref,) = resolver.find("A  birth\tform here.", "Civil status")
    assert ref.matched_text == "birth\tform"
    assert (ref.span_start, ref.span_end) == (3, 13)


def test_fixture_references(lexicon):
    resolved = resolve_references(lexicon)
    declarant = resolved.get("Declarant")
    provides = declarant.notion[2]
    targets = [(r.target_symbol, r.matched_text) for r in provides.resolved_refs]
    assert ("Region", "Region") in targets
    assert ("Newborn's father", "father of the newborn") in targets
    assert ("Newborn's mother", "newborn's mother") in targets


@PROPERTY_SETTINGS
@given(lexicons(with_members=False, with_links=False))
def test_resolution_is_idempotent_and_disjoint(lexicon):
    once = resolve_references(lexicon)
    assert resolve_references(once) == once
    for symbol in once.symbols:
        for _, _, sentence in symbol.entries():
            previous_end = 0
            for ref in sentence.resolved_refs:
                assert ref.span_start >= previous_end
                assert sentence.text[ref.span_start:ref.span_end] == ref.matched_text
                assert lookup(once, ref.matched_text).name == ref.target_symbol
                assert ref.target_symbol != symbol.name
                previous_end = ref.span_end


@PROPERTY_SETTINGS
@given(lexicons(with_members=False, with_links=False))
def test_resolution_matches_a_brute_force_scan(lexicon):
    resolved = resolve_references(lexicon)
    for symbol in resolved.symbols:
        for _, _, sentence in symbol.entries():
            found = [(ref.target_symbol, ref.span_start, ref.span_end) for ref in sentence.resolved_refs]
            assert found == brute_force_references(lexicon, sentence.text, symbol.name)
