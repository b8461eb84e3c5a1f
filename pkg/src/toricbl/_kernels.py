"""Hot loops over small integer exponent arrays.

Each kernel has a numba version and a numpy version with identical
semantics.  Set ``TORICBL_DISABLE_NUMBA=1`` to force the numpy path.
Callers are responsible for keeping entries inside int64; see ``fits_int64``.
"""

from __future__ import annotations

import os

import numpy as np

_INT64_SAFE = 1 << 62


def _numba_requested() -> bool:
    return os.environ.get("TORICBL_DISABLE_NUMBA", "").strip().lower() not in ("1", "true", "yes")


try:
    if not _numba_requested():
        raise ImportError
    from numba import njit
except ImportError:  # numba missing or disabled
    njit = None

USING_NUMBA = njit is not None


def fits_int64(values) -> bool:
    return all(-_INT64_SAFE < v < _INT64_SAFE for v in values)


# --- divisor search -------------------------------------------------------


def _find_divisor_np(leads: np.ndarray, count: int, target: np.ndarray) -> int:
    if count == 0:
        return -1
    ok = np.all(leads[:count] <= target, axis=1)
    idx = int(np.argmax(ok))
    return idx if ok[idx] else -1


def _find_divisor_py(leads, count, target):
    n = leads.shape[1]
    for i in range(count):
        for j in range(n):
            if leads[i, j] > target[j]:
                break
        else:
            return i
    return -1


# --- lattice widths -------------------------------------------------------


def _widths_np(vertices: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    vals = vertices @ dirs.T
    return vals.max(axis=0) - vals.min(axis=0)


def _widths_py(vertices, dirs):
    out = np.empty(dirs.shape[0], dtype=np.int64)
    for k in range(dirs.shape[0]):
        lo = hi = vertices[0, 0] * dirs[k, 0] + vertices[0, 1] * dirs[k, 1]
        for i in range(1, vertices.shape[0]):
            v = vertices[i, 0] * dirs[k, 0] + vertices[i, 1] * dirs[k, 1]
            if v < lo:
                lo = v
            elif v > hi:
                hi = v
        out[k] = hi - lo
    return out


# --- triple containment scan ----------------------------------------------


def _square_triples_np(plus: np.ndarray, minus: np.ndarray) -> np.ndarray:
    n = plus.shape[1]
    i, j, k = np.array([(a, b, c) for a in range(n) for b in range(a + 1, n) for c in range(b + 1, n)],
                       dtype=np.int64).reshape(-1, 3).T
    dp = plus[:, i] + plus[:, j] + plus[:, k]
    dm = minus[:, i] + minus[:, j] + minus[:, k]
    bad = np.all((dp >= 2) & (dm >= 2), axis=0)
    return np.stack([i[bad], j[bad], k[bad]], axis=1)


def _square_triples_py(plus, minus):
    n = plus.shape[1]
    g = plus.shape[0]
    out = np.empty((n * (n - 1) * (n - 2) // 6, 3), dtype=np.int64)
    cnt = 0
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                inside = True
                for t in range(g):
                    if plus[t, a] + plus[t, b] + plus[t, c] < 2 or minus[t, a] + minus[t, b] + minus[t, c] < 2:
                        inside = False
                        break
                if inside:
                    out[cnt, 0] = a
                    out[cnt, 1] = b
                    out[cnt, 2] = c
                    cnt += 1
    return out[:cnt]


if USING_NUMBA:
    find_divisor = njit(cache=True)(_find_divisor_py)
    widths = njit(cache=True)(_widths_py)
    square_triples = njit(cache=True)(_square_triples_py)
else:
    find_divisor = _find_divisor_np
    widths = _widths_np
    square_triples = _square_triples_np

find_divisor_numpy = _find_divisor_np
widths_numpy = _widths_np
square_triples_numpy = _square_triples_np
