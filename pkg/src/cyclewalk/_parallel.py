import os
from concurrent.futures import ThreadPoolExecutor

ENV_THREADS = "CYCLEWALK_THREADS"


def thread_count() -> int:
    """Worker cap from CYCLEWALK_THREADS; 0 or unset means os.cpu_count()."""
    raw = os.environ.get(ENV_THREADS, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{ENV_THREADS} must be an integer, got {raw!r}") from None
    if n < 0:
        raise ValueError(f"{ENV_THREADS} must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


def ordered_map(fn, items, min_items: int = 64):
    """map() that fans out to threads for long inputs; result order is input order."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1 or len(items) < min_items:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
