import re
from pathlib import Path

from ..schemas import SourceDocument
from .base_dal import BaseDAL, PathLike

# Terminators split unless they sit between two digits ("1.5").
_TERMINATOR_RE = re.compile(r"[.!?]+(?!\d)|(?<!\d)[.!?]+")
_HAS_WORD_RE = re.compile(r"[^\W_]")


def parse_corpus(text: str, label: str) -> SourceDocument:
    """Split Universe-of-Discourse text into trimmed, non-empty sentences."""
    sentences = []
    for fragment in _TERMINATOR_RE.split(text):
        fragment = " ".join(fragment.split())
        if fragment and _HAS_WORD_RE.search(fragment):
            sentences.append(fragment)
    return SourceDocument(path_label=label, sentences=tuple(sentences))


class CorpusDAL(BaseDAL[SourceDocument]):
    def load(self, path: PathLike) -> SourceDocument:
        """Read a `.uofd.txt` corpus file."""
        return parse_corpus(self.read_text(path), Path(path).name)
