"""Ordered parallel mapping for embarrassingly parallel sweeps.

Workers must be picklable (module-level functions or partials over them);
results always come back in input order, so output is independent of the
job count.
"""

from concurrent.futures import ProcessPoolExecutor


def parallel_map(fn, items, jobs=1):
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as pool:
        return list(pool.map(fn, items))
