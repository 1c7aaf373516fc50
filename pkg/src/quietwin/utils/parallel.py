from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor


def ordered_map[T, R](fn: Callable[[T], R], items: Iterable[T], *, workers: int) -> list[R]:
    """Map in input order, on a process pool when workers > 1."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items))
