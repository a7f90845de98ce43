import json
from collections import Counter
from typing import Iterable, Sequence

from jinja2 import Environment, FileSystemLoader

from .. import config
from ..models.class_model import ClassModel
from ..models.lexicon import Lexicon, MethodKind, Severity, SymbolType
from ..schemas import CandidateTerm, DerivationTrace, EmitOptions, LintReport

NODE_SHAPES = {
    SymbolType.SUBJECT: "box",
    SymbolType.OBJECT: "ellipse",
    SymbolType.VERB: "diamond",
    SymbolType.STATE: "octagon",
}

ACCESS_KINDS = (MethodKind.ACCESSOR, MethodKind.MUTATOR)


def _dot_escape(value: str) -> str:
    return value.replace("\\", "\\\\").replace('"', '\\"')


def _puml_escape(value: str) -> str:
    return value.replace('"', "'")


templates = Environment(
    loader=FileSystemLoader(str(config.TEMPLATE_DIR)),
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
    autoescape=False,
)
templates.filters["dot"] = _dot_escape
templates.filters["puml"] = _puml_escape


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def emit_model_json(model: ClassModel) -> str:
    """Canonical JSON of the class model: sorted keys, model order, 2-space indent."""
    return canonical_json(model.model_dump(mode="json"))


def read_model_json(text: str) -> ClassModel:
    return ClassModel.model_validate(json.loads(text))


def emit_plantuml(model: ClassModel, options: EmitOptions = EmitOptions()) -> str:
    classes = []
    for class_def in model.classes:
        fields = list(class_def.data_attributes)
        operations = [op for op in class_def.operations
                      if options.include_accessors or op.kind not in ACCESS_KINDS]
        if options.sort_members:
            fields.sort(key=lambda p: p.name)
            operations.sort(key=lambda o: o.name)
        classes.append({"name": class_def.name, "fields": fields, "operations": operations})
    return templates.get_template("model.puml.j2").render(classes=classes, associations=model.associations)


def emit_circularity_dot(lexicon: Lexicon) -> str:
    return templates.get_template("circularity.dot.j2").render(
        symbols=lexicon.symbols, links=lexicon.links, shapes=NODE_SHAPES,
    )


def emit_lint_json(report: LintReport) -> str:
    payload = report.model_dump(mode="json")
    payload["has_errors"] = report.has_errors
    return canonical_json(payload)


def emit_lint_table(report: LintReport) -> str:
    counts = Counter(f.severity for f in report.findings)
    return templates.get_template("lint_report.txt.j2").render(
        findings=report.findings,
        closure=report.closure,
        counts={severity.value: counts.get(severity, 0) for severity in Severity},
    )


def emit_trace(traces: Iterable[DerivationTrace]) -> str:
    """One JSON object per line."""
    return "".join(json.dumps(t.model_dump(mode="json"), sort_keys=True, ensure_ascii=False) + "\n" for t in traces)


def emit_candidates_tsv(candidates: Sequence[CandidateTerm]) -> str:
    lines = ["phrase\tfrequency\tscore\tsuggested_type"]
    for candidate in candidates:
        suggested = candidate.suggested_type.value if candidate.suggested_type else ""
        lines.append(f"{candidate.phrase}\t{candidate.frequency}\t{candidate.score}\t{suggested}")
    return "\n".join(lines) + "\n"
