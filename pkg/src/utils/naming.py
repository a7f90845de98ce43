import re
from typing import Iterable, Optional

from .text import ARTICLES, tokenize_words

_NON_ALNUM_RE = re.compile(r"[^0-9a-z]+")
_IDENTIFIER_RE = re.compile(r"^[A-Za-z][A-Za-z0-9_]*$")


def upper_camel(words: Iterable[str]) -> str:
    """Join words capitalising the first letter of each ("birth", "month" -> "BirthMonth").

    Characters outside ASCII letters and digits are dropped.
    """
    parts = (re.sub(r"[^0-9A-Za-z]", "", word) for word in words)
    return "".join(part[:1].upper() + part[1:] for part in parts if part)


def code_for(name: str) -> str:
    """Attribute code: lower case, non-alphanumerics collapsed to one underscore."""
    code = _NON_ALNUM_RE.sub("_", name.lower()).strip("_")
    if not code:
        return "attr"
    if not code[0].isalpha():
        code = f"attr_{code}"
    return code


def accessor_suffix(code: str) -> str:
    """CamelCase of a code split on underscores (birth_month -> BirthMonth)."""
    return upper_camel(code.split("_"))


def method_identifier(words: Iterable[str]) -> Optional[str]:
    """UpperCamel method name, or None when the words give no valid identifier."""
    name = upper_camel(words)
    return name if _IDENTIFIER_RE.match(name) else None


def verb_method_name(verb: str) -> Optional[str]:
    """Render a verb symbol name as a method name ("To issue a birth certificate" -> IssueBirthCertificate)."""
    words = tokenize_words(verb)
    if words and words[0] == "to":
        words = words[1:]
    return method_identifier(w for w in words if w not in ARTICLES)
