import os
from pathlib import Path
from typing import Optional
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

PROJECT_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = Path(os.getenv("ELEL_DATA_DIR", str(PROJECT_ROOT / "data"))).resolve()
TEMPLATE_DIR = Path(__file__).resolve().parent / "pl" / "templates"

CLOSURE_THRESHOLD = float(os.getenv("ELEL_CLOSURE_THRESHOLD", "0.15"))
MIN_FREQUENCY = int(os.getenv("ELEL_MIN_FREQUENCY", "2"))
MAX_NGRAM = int(os.getenv("ELEL_MAX_NGRAM", "3"))
LOG_LEVEL = os.getenv("ELEL_LOG_LEVEL", "WARNING")

STOPWORDS_FILE = "stopwords.txt"
ACTION_VERBS_FILE = "action_verbs.txt"
BASE_VOCABULARY_FILE = "base_vocabulary.txt"
ENABLEMENT_PREFIXES_FILE = "enablement_prefixes.txt"


def _path_from_env(name: str) -> Optional[Path]:
    value = os.getenv(name)
    return Path(value).resolve() if value else None


def stopwords_path() -> Path:
    """Stopword list: ELEL_STOPWORDS when set, otherwise the bundled file."""
    return _path_from_env("ELEL_STOPWORDS") or DATA_DIR / STOPWORDS_FILE


def action_verbs_path() -> Path:
    """Action-verb cue list used by type suggestion."""
    return _path_from_env("ELEL_ACTION_VERBS") or DATA_DIR / ACTION_VERBS_FILE


def extra_vocabulary_path() -> Optional[Path]:
    """Optional user list added on top of the bundled base vocabulary."""
    return _path_from_env("ELEL_BASE_VOCABULARY")
