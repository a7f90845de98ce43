import pytest

from src import config
from src.bll.derivation_service import DerivationService
from src.bll.extraction_service import default_config
from src.bll.transform_service import TransformService
from src.bll.validation_service import ValidationService
from src.dal.corpus_dal import CorpusDAL
from src.dal.lexicon_dal import parse_lexicon
from src.models.lexicon import Severity

FIXTURE_PATH = config.PROJECT_ROOT / "data" / "birth_certificate.elel"
CORPUS_PATH = config.PROJECT_ROOT / "data" / "example1.uofd.txt"


@pytest.fixture(scope="session")
def fixture_path():
    return FIXTURE_PATH


@pytest.fixture(scope="session")
def corpus_path():
    return CORPUS_PATH


@pytest.fixture(scope="session")
def fixture_text():
    return FIXTURE_PATH.read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def lexicon(fixture_text):
    lexicon, diagnostics = parse_lexicon(fixture_text)
    assert [d for d in diagnostics if d.severity == Severity.ERROR] == []
    return lexicon


@pytest.fixture(scope="session")
def deriver():
    return DerivationService()


@pytest.fixture(scope="session")
def derived(lexicon, deriver):
    """(derived lexicon, traces) of the birth-certificate fixture."""
    return deriver.derive(lexicon)


@pytest.fixture(scope="session")
def validator():
    return ValidationService.from_config()


@pytest.fixture(scope="session")
def model(derived, validator):
    return TransformService(validator).transform(derived[0])


@pytest.fixture(scope="session")
def corpus():
    return CorpusDAL().load(CORPUS_PATH)


@pytest.fixture(scope="session")
def extraction_config():
    return default_config(min_frequency=2, max_ngram=3)
