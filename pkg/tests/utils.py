from __future__ import annotations

from typing import Any, Sequence

import numpy as np

from ricci_lab._utils import is_dict
from ricci_lab._compat import model_dump, get_model_fields
from ricci_lab._models import BaseModel


def assert_allclose(actual: Sequence[float], expected: Sequence[float], *, rtol: float = 1e-9, atol: float = 1e-12) -> None:
    np.testing.assert_allclose(np.asarray(actual, dtype=np.float64), np.asarray(expected, dtype=np.float64), rtol=rtol, atol=atol)


def assert_json_fields(model: BaseModel) -> None:
    """Every field survives the JSON dump under its own name."""
    dumped: Any = model_dump(model)
    assert is_dict(dumped)
    assert set(dumped) == set(get_model_fields(type(model)))
