import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from pydantic import ValidationError

from . import config
from .bll.authoring_service import questions
from .bll.derivation_service import DerivationService
from .bll.errors import ElelError, TransformRefusedError
from .bll.extraction_service import ExtractionService, default_config
from .bll.transform_service import TransformService
from .bll.validation_service import ValidationService
from .dal.base_dal import BaseDAL
from .dal.corpus_dal import CorpusDAL
from .dal.lexicon_dal import LexiconDAL, format_link, serialize_lexicon, term_index
from .models.lexicon import Lexicon, Severity, SymbolType
from .pl.emitters import (
    emit_candidates_tsv, emit_circularity_dot, emit_lint_json, emit_lint_table, emit_model_json,
    emit_plantuml, emit_trace, read_model_json,
)
from .schemas import CommandOutcome, EmitOptions

logger = logging.getLogger("elel")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2

PIPELINE_FILES = ("model.json", "model.puml", "circularity.dot", "trace.txt")


class CommandError(Exception):
    def __init__(self, message: str, exit_code: int = EXIT_USAGE):
        super().__init__(message)
        self.exit_code = exit_code


def _not_utf8(path: str, exc: UnicodeDecodeError) -> str:
    return f"cannot read {path}: not UTF-8 text (byte {exc.start}: {exc.reason})"


def _load_lexicon(path: str) -> Lexicon:
    """Parse a lexicon file; Error diagnostics abort the command with exit 2."""
    try:
        lexicon, diagnostics = LexiconDAL().load(path)
    except OSError as exc:
        raise CommandError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise CommandError(_not_utf8(path, exc)) from exc
    label = Path(path).name
    for diagnostic in diagnostics:
        if diagnostic.severity == Severity.WARNING:
            logger.warning(diagnostic.render(label))
    errors = [d for d in diagnostics if d.severity == Severity.ERROR]
    if errors:
        raise CommandError("\n".join(d.render(label) for d in errors))
    return lexicon


def _findings_text(error: TransformRefusedError) -> str:
    lines = [str(error)]
    lines.extend(f"  {f.rule_id} {f.symbol}: {f.message}" for f in error.findings)
    return "\n".join(lines)


# Commands

def cmd_extract(args: argparse.Namespace) -> CommandOutcome:
    try:
        extraction_config = default_config(args.min_freq, args.max_ngram, args.stopwords, args.action_verbs)
    except OSError as exc:
        raise CommandError(f"cannot read {exc.filename}: {exc.strerror or exc}") from exc
    except UnicodeDecodeError as exc:
        raise CommandError(f"cannot read word list: not UTF-8 text (byte {exc.start}: {exc.reason})") from exc
    docs = []
    for path in args.corpus:
        try:
            docs.append(CorpusDAL().load(path))
        except OSError as exc:
            raise CommandError(f"cannot read {path}: {exc.strerror or exc}") from exc
        except UnicodeDecodeError as exc:
            raise CommandError(_not_utf8(path, exc)) from exc
    service = ExtractionService(extraction_config)
    candidates = service.extract_candidates(docs)
    if args.suggest_types:
        candidates = service.with_suggestions(candidates, docs)
    return CommandOutcome(stdout_payload=emit_candidates_tsv(candidates))


def cmd_lint(args: argparse.Namespace) -> CommandOutcome:
    lexicon = _load_lexicon(args.lexicon)
    report = ValidationService.from_config(args.closure_threshold).lint(lexicon)
    payload = emit_lint_json(report) if args.format == "json" else emit_lint_table(report)
    return CommandOutcome(exit_code=EXIT_INVALID if report.has_errors else EXIT_OK, stdout_payload=payload)


def cmd_derive(args: argparse.Namespace) -> CommandOutcome:
    lexicon = _load_lexicon(args.lexicon)
    derived, traces = DerivationService().derive(lexicon)
    text = serialize_lexicon(derived)
    if args.trace:
        BaseDAL().write_text(args.trace, emit_trace(traces))
    if args.write:
        LexiconDAL().write_text(args.lexicon, text)
        return CommandOutcome(stderr_payload=f"derived {len(traces)} artifact(s) into {args.lexicon}\n")
    return CommandOutcome(stdout_payload=text)


def cmd_link(args: argparse.Namespace) -> CommandOutcome:
    lexicon = _load_lexicon(args.lexicon)
    links = DerivationService().build_circularity(lexicon)
    linked = lexicon.model_copy(update={"links": tuple(links)})
    if args.format == "dot":
        return CommandOutcome(stdout_payload=emit_circularity_dot(linked))
    index = term_index(linked.symbols)
    return CommandOutcome(stdout_payload="".join(format_link(link, index) + "\n" for link in links))


def _derive_and_transform(lexicon: Lexicon, closure_threshold: Optional[float]):
    derived, traces = DerivationService().derive(lexicon)
    model = TransformService(ValidationService.from_config(closure_threshold)).transform(derived)
    return derived, traces, model


def cmd_transform(args: argparse.Namespace) -> CommandOutcome:
    lexicon = _load_lexicon(args.lexicon)
    try:
        _, _, model = _derive_and_transform(lexicon, args.closure_threshold)
    except TransformRefusedError as exc:
        return CommandOutcome(exit_code=EXIT_INVALID, stderr_payload=_findings_text(exc) + "\n")
    return CommandOutcome(stdout_payload=emit_model_json(model))


def cmd_render(args: argparse.Namespace) -> CommandOutcome:
    try:
        model = read_model_json(BaseDAL().read_text(args.model))
    except OSError as exc:
        raise CommandError(f"cannot read {args.model}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise CommandError(f"{args.model} is not a class model: {exc}") from exc
    if args.format == "json":
        return CommandOutcome(stdout_payload=emit_model_json(model))
    options = EmitOptions(include_accessors=not args.no_accessors, sort_members=args.sort_members)
    return CommandOutcome(stdout_payload=emit_plantuml(model, options))


def cmd_pipeline(args: argparse.Namespace) -> CommandOutcome:
    lexicon = _load_lexicon(args.lexicon)
    try:
        derived, traces, model = _derive_and_transform(lexicon, args.closure_threshold)
    except TransformRefusedError as exc:
        # a refused run leaves no model files behind, stale ones included
        stale = BaseDAL(args.out_dir)
        removed = [name for name in PIPELINE_FILES if stale.delete(name)]
        if removed:
            logger.info("removed %s from %s", ", ".join(removed), args.out_dir)
        return CommandOutcome(exit_code=EXIT_INVALID, stderr_payload=_findings_text(exc) + "\n")

    outputs: List[Tuple[str, str]] = list(zip(PIPELINE_FILES, (
        emit_model_json(model),
        emit_plantuml(model),
        emit_circularity_dot(derived),
        emit_trace(traces),
    )))
    writer = BaseDAL(args.out_dir)
    written: List[str] = []
    try:
        for name, text in outputs:
            writer.write_text(name, text)
            written.append(name)
    except OSError as exc:
        for name in written:
            writer.delete(name)
        raise CommandError(f"cannot write into {args.out_dir}: {exc.strerror or exc}") from exc
    logger.info("pipeline wrote %s into %s", ", ".join(written), args.out_dir)
    return CommandOutcome(stderr_payload=f"{len(model.classes)} class(es), {len(model.associations)} association(s)\n")


def cmd_questions(args: argparse.Namespace) -> CommandOutcome:
    return CommandOutcome(stdout_payload=questions(SymbolType(args.symbol_type)))


# Argument parsing

def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elel", description="eLEL lexicon compiler")
    parser.add_argument("--log-level", default=config.LOG_LEVEL, help="logging level on stderr")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    extract = commands.add_parser("extract", help="list candidate terms of corpus files")
    extract.add_argument("corpus", nargs="+", help="`.uofd.txt` corpus files")
    extract.add_argument("--min-freq", type=_positive_int, default=None)
    extract.add_argument("--max-ngram", type=int, default=None, choices=range(1, 5))
    extract.add_argument("--stopwords", metavar="FILE")
    extract.add_argument("--action-verbs", metavar="FILE")
    extract.add_argument("--suggest-types", action="store_true")
    extract.set_defaults(handler=cmd_extract)

    lint = commands.add_parser("lint", help="check closure, vocabulary and typology rules")
    lint.add_argument("lexicon")
    lint.add_argument("--format", choices=("table", "json"), default="table")
    lint.add_argument("--closure-threshold", type=float, default=None)
    lint.set_defaults(handler=cmd_lint)

    derive = commands.add_parser("derive", help="derive attributes, methods and links")
    derive.add_argument("lexicon")
    derive.add_argument("--write", action="store_true", help="rewrite the lexicon file in place")
    derive.add_argument("--trace", metavar="FILE", help="write the derivation trace (JSON lines)")
    derive.set_defaults(handler=cmd_derive)

    link = commands.add_parser("link", help="build the circularity links")
    link.add_argument("lexicon")
    link.add_argument("--format", choices=("dsl", "dot"), default="dsl")
    link.set_defaults(handler=cmd_link)

    transform = commands.add_parser("transform", help="derive, then emit the class model as JSON")
    transform.add_argument("lexicon")
    transform.add_argument("--closure-threshold", type=float, default=None)
    transform.set_defaults(handler=cmd_transform)

    render = commands.add_parser("render", help="render a model.json file")
    render.add_argument("model")
    render.add_argument("--format", choices=("puml", "json"), default="puml")
    render.add_argument("--no-accessors", action="store_true")
    render.add_argument("--sort-members", action="store_true")
    render.set_defaults(handler=cmd_render)

    pipeline = commands.add_parser("pipeline", help="derive, link, transform and write every artifact")
    pipeline.add_argument("lexicon")
    pipeline.add_argument("--out-dir", required=True)
    pipeline.add_argument("--closure-threshold", type=float, default=None)
    pipeline.set_defaults(handler=cmd_pipeline)

    guide = commands.add_parser("questions", help="print authoring questions for a symbol type")
    guide.add_argument("symbol_type", choices=[t.value for t in SymbolType])
    guide.set_defaults(handler=cmd_questions)
    return parser


def run_command(argv: Optional[Sequence[str]] = None) -> CommandOutcome:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandOutcome(exit_code=exc.code if isinstance(exc.code, int) else EXIT_USAGE)
    logging.basicConfig(stream=sys.stderr, level=args.log_level.upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args)
    except CommandError as exc:
        return CommandOutcome(exit_code=exc.exit_code, stderr_payload=f"elel: {exc}\n")
    except ElelError as exc:
        return CommandOutcome(exit_code=EXIT_USAGE, stderr_payload=f"elel: {exc}\n")
    except ValidationError as exc:
        return CommandOutcome(exit_code=EXIT_USAGE, stderr_payload=f"elel: invalid settings: {exc}\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    outcome = run_command(argv)
    if outcome.stdout_payload:
        sys.stdout.write(outcome.stdout_payload)
    if outcome.stderr_payload:
        sys.stderr.write(outcome.stderr_payload)
    return outcome.exit_code
