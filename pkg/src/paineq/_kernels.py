"""Hot loops of the permutation-group engine.

Every kernel exists twice: a numba ``@njit`` version and a plain numpy /
Python version with the same signature.  The numba path is used when numba
imports cleanly and the environment variable ``PAINEQ_NO_NUMBA`` is unset
(or ``0``).  ``benchmarks/bench_kernels.py`` times both paths.

Conventions shared by all kernels:

* ``elems`` is an ``(n, degree)`` integer array of permutation images, sorted
  lexicographically, so row 0 is the identity.
* ``table[i, j]`` is the index of ``elems[i] * elems[j]`` where the product
  applies ``elems[i]`` first: ``(a * b)[x] = b[a[x]]``.
"""

from __future__ import annotations

import os
from collections import deque

import numpy as np

_DISABLED = os.environ.get("PAINEQ_NO_NUMBA", "0").lower() not in ("", "0", "false", "no")

try:
    if _DISABLED:
        raise ImportError("numba disabled by PAINEQ_NO_NUMBA")
    from numba import njit
    HAVE_NUMBA = True
except ImportError:
    HAVE_NUMBA = False


# ---------------------------------------------------------------------------
# numpy / Python reference implementations


def _np_mul_table(elems: np.ndarray) -> np.ndarray:
    n, degree = elems.shape
    table = np.empty((n, n), dtype=np.int32)
    if n == 0:
        return table
    if degree == 0:
        table[:] = 0
        return table
    # Lexicographic order on rows equals numeric order of the base-`degree`
    # encoding, so a sorted key array doubles as a search index.
    if degree ** degree < 2**62:
        weights = degree ** np.arange(degree - 1, -1, -1, dtype=np.int64)
        keys = elems.astype(np.int64) @ weights
        for i in range(n):
            # prods[j, x] = elems[j, elems[i, x]] = (elems[i] * elems[j])[x]
            prods = elems[:, elems[i]]
            table[i] = np.searchsorted(keys, prods.astype(np.int64) @ weights)
    else:
        index = {elems[k].tobytes(): k for k in range(n)}
        for i in range(n):
            prods = np.ascontiguousarray(elems[:, elems[i]])
            table[i] = [index[prods[j].tobytes()] for j in range(n)]
    return table


def _np_inverses(table: np.ndarray) -> np.ndarray:
    return np.argmax(table == 0, axis=1).astype(np.int32)


def _np_element_orders(table: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    orders = np.zeros(n, dtype=np.int64)
    base = np.arange(n)
    cur = base.copy()
    k = 1
    remaining = np.ones(n, dtype=bool)
    while remaining.any():
        hit = remaining & (cur == 0)
        orders[hit] = k
        remaining &= ~hit
        cur = table[cur, base]
        k += 1
    return orders


def _np_class_ids(table: np.ndarray, inv: np.ndarray) -> np.ndarray:
    n = table.shape[0]
    ids = np.full(n, -1, dtype=np.int64)
    allg = np.arange(n)
    c = 0
    for x in range(n):
        if ids[x] >= 0:
            continue
        # g^-1 x g for every g
        orbit = table[table[inv, x], allg]
        ids[orbit] = c
        c += 1
    return ids


def _np_propagate_hom(table: np.ndarray, gens: np.ndarray, images: np.ndarray,
                      modulus: int) -> np.ndarray:
    n = table.shape[0]
    vals = np.full(n, -1, dtype=np.int64)
    vals[0] = 0
    queue = deque([0])
    while queue:
        x = queue.popleft()
        vx = vals[x]
        for k in range(len(gens)):
            y = table[x, gens[k]]
            v = (vx + images[k]) % modulus
            if vals[y] < 0:
                vals[y] = v
                queue.append(y)
            elif vals[y] != v:
                vals[0] = -2
                return vals
    return vals


def _np_conjugates(table: np.ndarray, inv: np.ndarray, x: int) -> np.ndarray:
    return table[table[inv, x], np.arange(table.shape[0])]


# ---------------------------------------------------------------------------
# numba implementations

if HAVE_NUMBA:

    @njit(cache=True)
    def _lex_cmp(a, b):
        for t in range(a.shape[0]):
            if a[t] < b[t]:
                return -1
            if a[t] > b[t]:
                return 1
        return 0

    @njit(cache=True)
    def _nb_mul_table(elems):
        n, degree = elems.shape
        table = np.empty((n, n), dtype=np.int32)
        row = np.empty(degree, dtype=elems.dtype)
        for i in range(n):
            for j in range(n):
                for x in range(degree):
                    row[x] = elems[j, elems[i, x]]
                lo = 0
                hi = n
                while lo < hi:
                    mid = (lo + hi) // 2
                    if _lex_cmp(elems[mid], row) < 0:
                        lo = mid + 1
                    else:
                        hi = mid
                table[i, j] = lo
        return table

    @njit(cache=True)
    def _nb_inverses(table):
        n = table.shape[0]
        inv = np.empty(n, dtype=np.int32)
        for i in range(n):
            for j in range(n):
                if table[i, j] == 0:
                    inv[i] = j
                    break
        return inv

    @njit(cache=True)
    def _nb_element_orders(table):
        n = table.shape[0]
        orders = np.empty(n, dtype=np.int64)
        for i in range(n):
            cur = i
            k = 1
            while cur != 0:
                cur = table[cur, i]
                k += 1
            orders[i] = k
        return orders

    @njit(cache=True)
    def _nb_class_ids(table, inv):
        n = table.shape[0]
        ids = np.full(n, -1, dtype=np.int64)
        c = 0
        for x in range(n):
            if ids[x] >= 0:
                continue
            for g in range(n):
                ids[table[table[inv[g], x], g]] = c
            c += 1
        return ids

    @njit(cache=True)
    def _nb_propagate_hom(table, gens, images, modulus):
        n = table.shape[0]
        vals = np.full(n, -1, dtype=np.int64)
        vals[0] = 0
        queue = np.empty(n, dtype=np.int64)
        head = 0
        tail = 1
        queue[0] = 0
        while head < tail:
            x = queue[head]
            head += 1
            vx = vals[x]
            for k in range(gens.shape[0]):
                y = table[x, gens[k]]
                v = (vx + images[k]) % modulus
                if vals[y] < 0:
                    vals[y] = v
                    queue[tail] = y
                    tail += 1
                elif vals[y] != v:
                    vals[0] = -2
                    return vals
        return vals

    @njit(cache=True)
    def _nb_conjugates(table, inv, x):
        n = table.shape[0]
        out = np.empty(n, dtype=np.int64)
        for g in range(n):
            out[g] = table[table[inv[g], x], g]
        return out


def mul_table(elems: np.ndarray) -> np.ndarray:
    elems = np.ascontiguousarray(elems, dtype=np.int64)
    if HAVE_NUMBA and elems.shape[1] > 0:
        return _nb_mul_table(elems)
    return _np_mul_table(elems)


def inverses(table: np.ndarray) -> np.ndarray:
    return _nb_inverses(table) if HAVE_NUMBA else _np_inverses(table)


def element_orders(table: np.ndarray) -> np.ndarray:
    return _nb_element_orders(table) if HAVE_NUMBA else _np_element_orders(table)


def class_ids(table: np.ndarray, inv: np.ndarray) -> np.ndarray:
    return _nb_class_ids(table, inv) if HAVE_NUMBA else _np_class_ids(table, inv)


def propagate_hom(table: np.ndarray, gens, images, modulus: int) -> np.ndarray | None:
    """Extend generator images to a homomorphism into Z/modulus.

    Returns the value array (``-1`` outside the generated subgroup) or
    ``None`` when the assignment is inconsistent.
    """
    gens = np.asarray(gens, dtype=np.int64)
    images = np.asarray(images, dtype=np.int64)
    if HAVE_NUMBA:
        vals = _nb_propagate_hom(table, gens, images, modulus)
    else:
        vals = _np_propagate_hom(table, gens, images, modulus)
    if vals[0] == -2:
        return None
    return vals


def conjugates(table: np.ndarray, inv: np.ndarray, x: int) -> np.ndarray:
    """``g^-1 x g`` for every ``g``, indexed by ``g``."""
    if HAVE_NUMBA:
        return _nb_conjugates(table, inv, x)
    return _np_conjugates(table, inv, x)


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
