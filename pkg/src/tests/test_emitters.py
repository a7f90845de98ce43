import json

from src.models.class_model import ClassModel
from src.pl.emitters import (
    emit_candidates_tsv, emit_circularity_dot, emit_lint_json, emit_lint_table, emit_model_json, emit_plantuml,
    emit_trace, read_model_json,
)
from src.schemas import CandidateTerm, EmitOptions
from src.models.lexicon import SymbolType

FORM = "Birth certificate declaration form"


def test_model_json_is_canonical(model):
    text = emit_model_json(model)
    assert text == emit_model_json(model)
    assert text.endswith("}\n")
    payload = json.loads(text)
    declarant = next(c for c in payload["classes"] if c["name"] == "Declarant")
    assert any(p["size"] == 25 for p in declarant["properties"])
    assert read_model_json(text) == model


def test_empty_model_json():
    assert json.loads(emit_model_json(ClassModel())) == {"associations": [], "classes": []}


def test_plantuml_members_and_multiplicities(model):
    text = emit_plantuml(model)
    lines = text.splitlines()
    assert lines[0] == "@startuml"
    assert lines[-1] == "@enduml"
    assert f'class "{FORM}" {{' in lines
    assert "  num_cert_birth : Digit(6)" in lines
    assert "  getBirthMonth()" in lines
    assert f'"Declarant" "1..1" -- "0..*" "{FORM}" : fills' in lines


def test_plantuml_line_count(model):
    lines = emit_plantuml(model).splitlines()
    members = sum(len(c.data_attributes) + len(c.operations) for c in model.classes)
    assert len(lines) == 2 + 2 * len(model.classes) + members + len(model.associations)


def test_plantuml_options(model):
    text = emit_plantuml(model, EmitOptions(include_accessors=False, sort_members=True))
    lines = text.splitlines()
    assert "  getBirthMonth()" not in lines
    assert "  num_cert_birth : Digit(6)" in lines
    start = lines.index('class "Declarant" {')
    fields = lines[start + 1:start + 8]
    assert fields == sorted(fields)


def test_empty_plantuml():
    assert emit_plantuml(ClassModel()).splitlines() == ["@startuml", "@enduml"]


def test_circularity_dot(derived):
    lexicon, _ = derived
    lines = emit_circularity_dot(lexicon).splitlines()
    assert lines[0] == "digraph circularity {"
    assert lines[-1] == "}"
    assert '  "Declarant" [label="Declarant", shape=box];' in lines
    assert '  "Issue the birth certificate" [label="Issue the birth certificate", shape=diamond];' in lines
    assert f'  "Declarant" -> "{FORM}" [label="fills"];' in lines
    assert len([line for line in lines if "->" in line]) == len(lexicon.links)


def test_lint_outputs(lexicon, validator):
    report = validator.lint(lexicon)
    payload = json.loads(emit_lint_json(report))
    assert payload["has_errors"] is False
    assert len(payload["findings"]) == len(report.findings)
    table = emit_lint_table(report)
    assert table.splitlines()[-1].startswith("0 error(s)")
    assert "Declarant" in table


def test_trace_lines(derived):
    _, traces = derived
    lines = emit_trace(traces).splitlines()
    assert len(lines) == len(traces)
    first = json.loads(lines[0])
    assert set(first) >= {"symbol", "step", "produced"}


def test_candidates_tsv():
    candidates = [
        CandidateTerm(phrase="civil status officer", frequency=5, score=15, suggested_type=SymbolType.SUBJECT),
        CandidateTerm(phrase="birth", frequency=7, score=7),
    ]
    assert emit_candidates_tsv(candidates) == (
        "phrase\tfrequency\tscore\tsuggested_type\n"
        "civil status officer\t5\t15\tsubject\n"
        "birth\t7\t7\t\n"
    )
