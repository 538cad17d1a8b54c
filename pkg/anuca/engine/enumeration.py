"""
Chunked enumeration of pattern spaces A^n.

Patterns are ranked with the first cell most significant, so rank order is the
lexicographic order of symbol sequences. Work is split into fixed-size chunks
whose boundaries never depend on the thread count; results are collected in
chunk order, which keeps every search scheduling-independent.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterator, List, Optional, Tuple, TypeVar

import numpy as np

from ..config import get_config
from ..exceptions import CapExceededException

logger = logging.getLogger(__name__)

T = TypeVar("T")

# ranks above this no longer fit an int64 code
MAX_CODE_SPACE = 2 ** 62


def space_size(n: int, q: int) -> int:
    return q ** n


def check_cap(what: str, required: int, cap: Optional[int] = None, kind: str = "enumeration", partial=None) -> int:
    """Raise CapExceededException when `required` exceeds the resolved cap; return the cap."""
    cap = get_config().resolve_cap(cap, kind)
    if required > cap:
        raise CapExceededException(what, required, cap, partial)
    return cap


def rank_digits(start: int, stop: int, n: int, q: int) -> np.ndarray:
    """Rows for ranks start..stop-1 over n cells, first cell most significant."""
    codes = np.arange(start, stop, dtype=np.int64)
    powers = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return ((codes[:, None] // powers[None, :]) % q).astype(np.uint8)


def ranks_of(rows: np.ndarray, q: int) -> np.ndarray:
    """Inverse of `rank_digits` (requires q**n < 2**62)."""
    n = rows.shape[1]
    powers = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (rows.astype(np.int64) * powers).sum(axis=1)


def row_keys(rows: np.ndarray, q: int) -> np.ndarray:
    """One sortable key per row: its rank when it fits an int64, else the raw bytes."""
    if space_size(rows.shape[1], q) < MAX_CODE_SPACE:
        return ranks_of(rows, q)
    rows = np.ascontiguousarray(rows, dtype=np.uint8)
    return rows.view(np.dtype((np.void, rows.shape[1]))).reshape(-1)


def first_collision(keys: np.ndarray) -> Optional[Tuple[int, int]]:
    """
    Lexicographically first pair (i, j), i < j, with keys[i] == keys[j]: i is the
    smallest index that has a partner and j its next partner.
    """
    order = np.argsort(keys, kind="stable")
    ordered = keys[order]
    repeated = np.flatnonzero(ordered[1:] == ordered[:-1])
    if repeated.size == 0:
        return None
    # each group's first repeat sits right after the group's first member
    starts = repeated[np.concatenate(([True], ordered[repeated[1:]] != ordered[repeated[:-1]]))]
    firsts = order[starts]
    k = int(np.argmin(firsts))
    return int(firsts[k]), int(order[starts[k] + 1])


def chunks(total: int, chunk_size: Optional[int] = None) -> List[Tuple[int, int]]:
    size = chunk_size or get_config().chunk_size
    return [(start, min(start + size, total)) for start in range(0, total, size)]


def parallel_map(function: Callable[..., T], items: List, threads: Optional[int] = None) -> List[T]:
    """Order-preserving map; runs on a thread pool when more than one thread is configured."""
    threads = threads or get_config().threads
    if threads <= 1 or len(items) <= 1:
        return [function(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(function, items))


def iter_space(n: int, q: int, chunk_size: Optional[int] = None) -> Iterator[Tuple[int, np.ndarray]]:
    """Yield (first rank, rows) chunks covering A^n in rank order."""
    for start, stop in chunks(space_size(n, q), chunk_size):
        yield start, rank_digits(start, stop, n, q)


def map_space(function: Callable[[int, np.ndarray], T], n: int, q: int, threads: Optional[int] = None,
              chunk_size: Optional[int] = None) -> List[T]:
    """Apply `function(first_rank, rows)` to every chunk of A^n; results in chunk order."""
    spans = chunks(space_size(n, q), chunk_size)
    logger.debug("enumerating %d patterns in %d chunks", space_size(n, q), len(spans))
    return parallel_map(lambda span: function(span[0], rank_digits(span[0], span[1], n, q)), spans, threads)


__all__ = [
    "MAX_CODE_SPACE",
    "check_cap",
    "chunks",
    "iter_space",
    "map_space",
    "parallel_map",
    "rank_digits",
    "ranks_of",
    "first_collision",
    "row_keys",
    "space_size",
]
