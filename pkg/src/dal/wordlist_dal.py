from pathlib import Path
from typing import FrozenSet, List, Optional

from .. import config
from .base_dal import BaseDAL, PathLike


def parse_word_list(text: str) -> List[str]:
    """One entry per line; '#' starts a comment; entries are lower-cased."""
    words = []
    for raw in text.splitlines():
        entry = raw.split("#", 1)[0].strip().lower()
        if entry:
            words.append(entry)
    return words


class WordListDAL(BaseDAL[FrozenSet[str]]):
    def __init__(self, base_dir: Optional[PathLike] = None):
        super().__init__(base_dir if base_dir is not None else config.DATA_DIR)

    def load(self, path: PathLike) -> FrozenSet[str]:
        """Load a word list as a set."""
        return frozenset(parse_word_list(self.read_text(path)))

    def load_ordered(self, path: PathLike) -> List[str]:
        """Load a word list keeping file order (used for prefix lists)."""
        return parse_word_list(self.read_text(path))

    def stopwords(self, path: Optional[PathLike] = None) -> FrozenSet[str]:
        return self.load(Path(path).resolve() if path else config.stopwords_path())

    def action_verbs(self, path: Optional[PathLike] = None) -> FrozenSet[str]:
        return self.load(Path(path).resolve() if path else config.action_verbs_path())

    def base_vocabulary(self) -> FrozenSet[str]:
        """Bundled common-English list plus the optional user list."""
        words = self.load(config.BASE_VOCABULARY_FILE)
        extra: Optional[Path] = config.extra_vocabulary_path()
        if extra is not None:
            words = words | self.load(extra)
        return words

    def enablement_prefixes(self) -> List[str]:
        return self.load_ordered(config.ENABLEMENT_PREFIXES_FILE)
