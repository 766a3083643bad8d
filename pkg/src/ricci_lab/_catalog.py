from __future__ import annotations

from typing import Dict, List
from pathlib import Path

from ._exceptions import UnknownSpaceError

CATALOG_NAMES: List[str] = ["wallach_su3", "g2_u2", "f4_u3su2"]


def _get_catalog_path(name: str) -> Path:
    return Path(__file__).parent / "catalog" / f"{name}.json"


_documents: Dict[str, str] = {}


def get_document(name: str) -> str:
    """Raw JSON text of a bundled space document."""
    cached = _documents.get(name)
    if cached is not None:
        return cached

    if name not in CATALOG_NAMES:
        raise UnknownSpaceError(name, known=[*CATALOG_NAMES, "generalized_wallach(d1,d2,d3,c123)"])

    text = _get_catalog_path(name).read_text(encoding="utf-8")
    _documents[name] = text
    return text
