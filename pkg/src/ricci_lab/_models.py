from __future__ import annotations

from typing import Any, Dict
from typing_extensions import ClassVar

import pydantic

from ._compat import PYDANTIC_V2, ConfigDict, model_dump, model_json

__all__ = ["BaseModel"]


class BaseModel(pydantic.BaseModel):
    if PYDANTIC_V2:
        model_config: ClassVar[ConfigDict] = ConfigDict(frozen=True, extra="forbid")
    else:

        class Config(pydantic.BaseConfig):  # pyright: ignore[reportDeprecated]
            frozen = True
            extra: Any = pydantic.Extra.forbid  # type: ignore

    def __str__(self) -> str:
        # mypy complains about an invalid self arg
        return f'{self.__repr_name__()}({self.__repr_str__(", ")})'  # type: ignore[misc]

    def to_dict(self) -> Dict[str, Any]:
        """JSON compatible dictionary of the record's fields."""
        return model_dump(self)

    def to_json(self, *, indent: int | None = 2) -> str:
        return model_json(self, indent=indent)

