from typing import Sequence

from ..schemas import LintFinding


class ElelError(Exception):
    """Base class for domain failures raised by the business layer."""


class NoCorpusError(ElelError):
    def __init__(self):
        super().__init__("no corpus documents were given")


class SymbolTypeError(ElelError):
    def __init__(self, symbol: str, actual: str, expected: Sequence[str]):
        self.symbol = symbol
        super().__init__(f"'{symbol}' is a {actual} symbol; expected {' or '.join(expected)}")


class NoTriggerVerbError(ElelError):
    def __init__(self, state: str):
        self.state = state
        super().__init__(f"state '{state}' references no verb symbol in its notion")


class DanglingLinkError(ElelError):
    def __init__(self, link: str, endpoint: str):
        self.link = link
        self.endpoint = endpoint
        super().__init__(f"link '{link}' ends at '{endpoint}', which has no class")


class TransformRefusedError(ElelError):
    """The lexicon has Error findings; carries them for reporting."""

    def __init__(self, findings: Sequence[LintFinding]):
        self.findings = tuple(findings)
        super().__init__(f"transformation refused: {len(self.findings)} lint error(s)")
