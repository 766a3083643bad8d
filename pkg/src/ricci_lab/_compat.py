from __future__ import annotations

import json
from typing import TYPE_CHECKING, Any, TypeVar, cast

import pydantic
from pydantic.fields import FieldInfo

_ModelT = TypeVar("_ModelT", bound=pydantic.BaseModel)

# --------------- Pydantic v2 compatibility ---------------

# Pyright incorrectly reports some of our functions as overriding a method when they don't
# pyright: reportIncompatibleMethodOverride=false

PYDANTIC_V2 = pydantic.VERSION.startswith("2.")

# refactored config
if TYPE_CHECKING:
    from pydantic import ConfigDict as ConfigDict
else:
    if PYDANTIC_V2:
        from pydantic import ConfigDict
    else:
        ConfigDict = None


# renamed methods / properties
def parse_obj(model: type[_ModelT], value: object) -> _ModelT:
    if PYDANTIC_V2:
        return model.model_validate(value)
    else:
        return cast(_ModelT, model.parse_obj(value))  # pyright: ignore[reportDeprecated, reportUnnecessaryCast]


def parse_json(model: type[_ModelT], raw: str) -> _ModelT:
    if PYDANTIC_V2:
        return model.model_validate_json(raw)
    return cast(_ModelT, model.parse_raw(raw))  # pyright: ignore[reportDeprecated, reportUnnecessaryCast]


def get_model_fields(model: type[pydantic.BaseModel]) -> dict[str, FieldInfo]:
    if PYDANTIC_V2:
        return model.model_fields
    return model.__fields__  # type: ignore


def model_copy(model: _ModelT, *, update: dict[str, Any] | None = None) -> _ModelT:
    if PYDANTIC_V2:
        return model.model_copy(update=update)
    return model.copy(update=update)  # type: ignore


def model_json(model: pydantic.BaseModel, *, indent: int | None = None) -> str:
    if PYDANTIC_V2:
        return model.model_dump_json(indent=indent)
    return model.json(indent=indent)  # type: ignore


def model_dump(model: pydantic.BaseModel) -> dict[str, Any]:
    if PYDANTIC_V2:
        return model.model_dump(mode="json")
    # v1 `.dict()` keeps enum members, round-trip through JSON to match v2 "json" mode
    return cast("dict[str, Any]", json.loads(model.json()))  # type: ignore
