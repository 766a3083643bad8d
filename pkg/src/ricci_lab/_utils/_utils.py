from __future__ import annotations

from typing import Mapping, Iterable, Sequence
from typing_extensions import TypeGuard


def is_mapping(obj: object) -> TypeGuard[Mapping[str, object]]:
    return isinstance(obj, Mapping)


def is_dict(obj: object) -> TypeGuard[dict[object, object]]:
    return isinstance(obj, dict)


def human_join(seq: Sequence[str], *, delim: str = ", ", final: str = "or") -> str:
    size = len(seq)
    if size == 0:
        return ""

    if size == 1:
        return seq[0]

    if size == 2:
        return f"{seq[0]} {final} {seq[1]}"

    return delim.join(seq[:-1]) + f" {final} {seq[-1]}"


def quote(string: str) -> str:
    """Add single quotation marks around the given string. Does *not* do any escaping."""
    return "'" + string + "'"


def coerce_integer(val: str) -> int:
    return int(val, base=10)


def coerce_float(val: str) -> float:
    """Parse a float, accepting simple fractions such as `11/50`."""
    val = val.strip()
    if "/" in val:
        num, _, den = val.partition("/")
        return float(num) / float(den)
    return float(val)


def parse_floats(val: str) -> list[float]:
    """Parse a comma separated list of numbers, e.g. `1.6,0.22,1` or `1/4,1/4,1/2`."""
    parts = [part for part in val.split(",") if part.strip()]
    if not parts:
        raise ValueError(f"expected a comma separated list of numbers, got {quote(val)}")
    return [coerce_float(part) for part in parts]


def format_index_set(indices: Iterable[int]) -> str:
    """1-based index set in the `J-as-sorted-csv` form used by space documents, e.g. `2,4`."""
    return ",".join(str(i) for i in sorted(indices))


def parse_index_set(val: str) -> tuple[int, ...]:
    val = val.strip().strip("{}")
    return tuple(sorted({coerce_integer(part) for part in val.split(",") if part.strip()}))

