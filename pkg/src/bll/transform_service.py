import logging
from typing import Dict, List, Optional

from ..models.class_model import (
    AssociationDef, AssociationEnd, ClassDef, ClassModel, OperationDef, ParameterDef, PropertyDef, PropertyKind,
)
from ..models.lexicon import Lexicon, LexiconSymbol, ParameterRole, Severity, SymbolType
from .errors import DanglingLinkError, TransformRefusedError
from .resolution_service import lookup
from .validation_service import ValidationService

logger = logging.getLogger(__name__)

CLASS_TYPES = (SymbolType.SUBJECT, SymbolType.OBJECT)


def mangle(name: str) -> str:
    return name.replace(" ", "_")


def _free_name(name: str, taken: set) -> str:
    candidate, counter = name, 2
    while candidate in taken:
        candidate = f"{name}_{counter}"
        counter += 1
    return candidate


class TransformService:
    """Maps a derived lexicon onto the class-diagram model."""

    def __init__(self, validator: Optional[ValidationService] = None):
        self.validator = validator

    def rule1_classes(self, lexicon: Lexicon) -> List[ClassDef]:
        """One empty class per subject or object symbol, in lexicon order."""
        return [ClassDef(name=s.name, origin=s.name) for s in lexicon.of_type(*CLASS_TYPES)]

    def _operation(self, symbol: LexiconSymbol, lexicon: Lexicon, method) -> OperationDef:
        formats = {a.code: a.format.value for a in symbol.attributes}
        parameters = []
        for parameter in method.parameters:
            if parameter.role == ParameterRole.SYMBOL_REF:
                target = lookup(lexicon, parameter.target)
                parameters.append(ParameterDef(
                    name=mangle(target.name if target else parameter.target),
                    type_ref=target.name if target else parameter.target,
                ))
            else:
                parameters.append(ParameterDef(name=parameter.target, type_ref=formats.get(parameter.target, "Complex")))
        return OperationDef(name=method.rendered, kind=method.kind, parameters=tuple(parameters))

    def rule2_rule3_populate(self, model: ClassModel, lexicon: Lexicon) -> ClassModel:
        classes = []
        for class_def in model.classes:
            symbol = lexicon.get(class_def.origin)
            if symbol is None:
                classes.append(class_def)
                continue
            properties = list(class_def.properties)
            names = {p.name for p in properties}
            for attribute in symbol.attributes:
                if attribute.code in names:
                    continue
                names.add(attribute.code)
                properties.append(PropertyDef(
                    name=attribute.code,
                    kind=PropertyKind.DATA_ATTRIBUTE,
                    format=attribute.format,
                    size=attribute.size,
                    definition=attribute.definition,
                ))
            operations = list(class_def.operations)
            seen = {o.name for o in operations}
            for method in symbol.methods:
                operation = self._operation(symbol, lexicon, method)
                if operation.name in seen:
                    continue
                seen.add(operation.name)
                operations.append(operation)
            classes.append(class_def.model_copy(update={
                "properties": tuple(properties), "operations": tuple(operations),
            }))
        return model.model_copy(update={"classes": tuple(classes)})

    def rule4_rule5_associations(self, model: ClassModel, lexicon: Lexicon) -> ClassModel:
        """Each created element becomes an association end owned by the opposite class."""
        classes: Dict[str, ClassDef] = {c.name: c for c in model.classes}
        associations = list(model.associations)
        for link in lexicon.links:
            source, target = lexicon.get(link.source), lexicon.get(link.target)
            if source is None or target is None \
                    or source.symbol_type not in CLASS_TYPES or target.symbol_type not in CLASS_TYPES:
                logger.debug("link '%s' touches a verb or state; no association", link.name)
                continue
            for symbol in (source, target):
                if symbol.name not in classes:
                    raise DanglingLinkError(link.name, symbol.name)

            name = mangle(link.name)
            source_element, target_element = link.elements
            # the source element is a property of the target class and vice versa
            source_role = _free_name(mangle(source_element.name), {p.name for p in classes[target.name].properties})
            classes[target.name] = self._with_end(classes[target.name], source_role, source.name,
                                                  source_element.occurrence, name)
            target_role = _free_name(mangle(target_element.name), {p.name for p in classes[source.name].properties})
            classes[source.name] = self._with_end(classes[source.name], target_role, target.name,
                                                  target_element.occurrence, name)
            associations.append(AssociationDef(
                name=name,
                end_a=AssociationEnd(class_name=source.name, role=source_role, bounds=source_element.occurrence),
                end_b=AssociationEnd(class_name=target.name, role=target_role, bounds=target_element.occurrence),
            ))
        return ClassModel(
            classes=tuple(classes[c.name] for c in model.classes),
            associations=tuple(associations),
        )

    @staticmethod
    def _with_end(owner: ClassDef, role: str, end_type: str, bounds, association: str) -> ClassDef:
        end = PropertyDef(
            name=role,
            kind=PropertyKind.ASSOCIATION_END,
            end_type=end_type,
            bounds=bounds,
            association=association,
        )
        return owner.model_copy(update={"properties": owner.properties + (end,)})

    def transform(self, lexicon: Lexicon) -> ClassModel:
        validator = self.validator or ValidationService.from_config()
        report = validator.lint(lexicon)
        if report.has_errors:
            raise TransformRefusedError([f for f in report.findings if f.severity == Severity.ERROR])
        model = ClassModel(classes=tuple(self.rule1_classes(lexicon)))
        model = self.rule2_rule3_populate(model, lexicon)
        model = self.rule4_rule5_associations(model, lexicon)
        logger.info("transformed %d class(es), %d association(s)", len(model.classes), len(model.associations))
        return model


def rule1_classes(lexicon: Lexicon) -> List[ClassDef]:
    return TransformService().rule1_classes(lexicon)


def rule2_rule3_populate(model: ClassModel, lexicon: Lexicon) -> ClassModel:
    return TransformService().rule2_rule3_populate(model, lexicon)


def rule4_rule5_associations(model: ClassModel, lexicon: Lexicon) -> ClassModel:
    return TransformService().rule4_rule5_associations(model, lexicon)


def transform(lexicon: Lexicon) -> ClassModel:
    return TransformService().transform(lexicon)
