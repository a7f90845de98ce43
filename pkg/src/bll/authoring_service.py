from typing import Dict, NamedTuple, Tuple

from ..models.lexicon import SymbolType


class Guidance(NamedTuple):
    description: str
    notion: Tuple[str, ...]
    behavior: Tuple[str, ...]
    attributes: str
    methods: str


GUIDANCE: Dict[SymbolType, Guidance] = {
    SymbolType.SUBJECT: Guidance(
        description="An active entity that plays a role in the application.",
        notion=("Who is it?", "Which characteristics describe it?", "Which objects does it handle?"),
        behavior=("Which functions does it carry out?",),
        attributes="Characteristics named in the notion that are not themselves lexicon symbols.",
        methods="One action per behavioral-response entry.",
    ),
    SymbolType.OBJECT: Guidance(
        description="A passive entity that subjects act upon.",
        notion=("What is it?", "Which characteristics describe it?", "Which other objects relate to it?"),
        behavior=("Which actions are applied to it?",),
        attributes="Characteristics named in the notion that are not themselves lexicon symbols.",
        methods="A get and a set method for every attribute.",
    ),
    SymbolType.VERB: Guidance(
        description="A functionality performed by a subject on objects.",
        notion=("Who takes part?", "Which object does the subject handle?", "What goal is pursued?"),
        behavior=("What does it change in the environment?", "Which state results?",
                  "Under which conditions is the goal reached?"),
        attributes="The subjects and objects the verb involves.",
        methods="The verb itself, taking its attributes as parameters.",
    ),
    SymbolType.STATE: Guidance(
        description="A configuration of attribute values at some point while the system runs.",
        notion=("What does it stand for?", "Which actions lead to it?"),
        behavior=("Which other states can be reached from it, and how are they recognised?",),
        attributes="The subjects and objects whose change produces the state.",
        methods="The verb action that triggers the state.",
    ),
}


def questions(symbol_type: SymbolType) -> str:
    """Authoring prompts for one symbol type, as plain text."""
    guide = GUIDANCE[symbol_type]
    lines = [f"{symbol_type.value}: {guide.description}", "", "notion:"]
    lines.extend(f"  - {q}" for q in guide.notion)
    lines.append("behavior:")
    lines.extend(f"  - {q}" for q in guide.behavior)
    lines.append(f"attributes: {guide.attributes}")
    lines.append(f"methods: {guide.methods}")
    return "\n".join(lines) + "\n"
