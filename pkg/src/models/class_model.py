from enum import Enum
from typing import List, Optional, Tuple

from pydantic import Field, model_validator

from .lexicon import FormatKind, FrozenModel, MethodKind, NonEmptyStr, OccurrenceBounds


class PropertyKind(str, Enum):
    DATA_ATTRIBUTE = "data_attribute"
    ASSOCIATION_END = "association_end"


class PropertyDef(FrozenModel):
    name: NonEmptyStr
    kind: PropertyKind = PropertyKind.DATA_ATTRIBUTE
    format: FormatKind = FormatKind.COMPLEX
    size: int = Field(1, ge=1)
    definition: str = ""
    end_type: Optional[str] = None
    bounds: Optional[OccurrenceBounds] = None
    association: Optional[str] = None

    @model_validator(mode="after")
    def _check_end(self) -> "PropertyDef":
        is_end = self.kind == PropertyKind.ASSOCIATION_END
        if is_end != (self.end_type is not None) or is_end != (self.bounds is not None):
            raise ValueError("end type and bounds are present exactly for association ends")
        if is_end and " " in self.name:
            raise ValueError("association end names contain no spaces")
        return self


class ParameterDef(FrozenModel):
    name: NonEmptyStr
    type_ref: str


class OperationDef(FrozenModel):
    name: NonEmptyStr
    kind: MethodKind = MethodKind.ACTION
    parameters: Tuple[ParameterDef, ...] = ()


class ClassDef(FrozenModel):
    name: NonEmptyStr
    origin: NonEmptyStr
    properties: Tuple[PropertyDef, ...] = ()
    operations: Tuple[OperationDef, ...] = ()

    @model_validator(mode="after")
    def _check_unique_properties(self) -> "ClassDef":
        names = [p.name for p in self.properties]
        if len(names) != len(set(names)):
            raise ValueError(f"class '{self.name}' has duplicate property names")
        return self

    @property
    def data_attributes(self) -> List[PropertyDef]:
        return [p for p in self.properties if p.kind == PropertyKind.DATA_ATTRIBUTE]

    @property
    def association_ends(self) -> List[PropertyDef]:
        return [p for p in self.properties if p.kind == PropertyKind.ASSOCIATION_END]


class AssociationEnd(FrozenModel):
    class_name: NonEmptyStr
    role: NonEmptyStr
    bounds: OccurrenceBounds


class AssociationDef(FrozenModel):
    name: NonEmptyStr
    end_a: AssociationEnd
    end_b: AssociationEnd


class ClassModel(FrozenModel):
    classes: Tuple[ClassDef, ...] = ()
    associations: Tuple[AssociationDef, ...] = ()

    @model_validator(mode="after")
    def _check_references(self) -> "ClassModel":
        names = [c.name for c in self.classes]
        if len(names) != len(set(names)):
            raise ValueError("class names must be unique")
        known = set(names)
        for association in self.associations:
            for end in (association.end_a, association.end_b):
                if end.class_name not in known:
                    raise ValueError(f"association '{association.name}' ends at unknown class '{end.class_name}'")
        return self

    def get(self, name: str) -> Optional[ClassDef]:
        for cls in self.classes:
            if cls.name == name:
                return cls
        return None
