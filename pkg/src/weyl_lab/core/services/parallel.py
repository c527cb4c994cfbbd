from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor


def partitioned_map[T, R](
    func: Callable[[Sequence[T]], list[R]], items: Sequence[T], workers: int = 1
) -> list[R]:
    """
    items を連続ブロックに分割して func を適用し、入力順に連結する。

    結果は workers に依存しない (numpy の重い処理は GIL を解放するためスレッドで十分)。
    """
    if not items:
        return []
    if workers <= 1 or len(items) == 1:
        return func(items)

    count = min(workers, len(items))
    size = -(-len(items) // count)
    blocks = [items[i : i + size] for i in range(0, len(items), size)]
    with ThreadPoolExecutor(max_workers=count) as pool:
        parts = list(pool.map(func, blocks))

    out: list[R] = []
    for part in parts:
        out.extend(part)
    return out
