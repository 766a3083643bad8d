from __future__ import annotations

from typing import List, TypeVar, Callable, Iterable, Optional
from concurrent.futures import ThreadPoolExecutor

_In = TypeVar("_In")
_Out = TypeVar("_Out")


def parallel_map(fn: Callable[[_In], _Out], items: Iterable[_In], threads: Optional[int]) -> List[_Out]:
    """`map` over a thread pool when `threads` > 1; results keep the input order."""
    if threads is None or threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
