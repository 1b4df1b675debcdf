# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled assignment kernel (fast lane).

Same contract as ``_matchcore_py``: solve the square min-cost assignment
problem for non-negative integer costs and return the lexicographically
smallest optimal column vector. Phase 1 is a shortest-augmenting-path solve
with dual potentials; phase 2 canonicalises ties on the zero-reduced-cost
subgraph. Outputs must be byte-identical to the pure-Python lane.
"""

from cpython.mem cimport PyMem_Malloc, PyMem_Free

cdef long long INF = <long long> 1 << 62


cdef bint _augment(Py_ssize_t row, Py_ssize_t n, long long* c,
                   long long* u, long long* v,
                   Py_ssize_t* match_row, Py_ssize_t* match_col,
                   char* fixed_col, char* visited) noexcept:
    cdef Py_ssize_t j, base = row * n
    for j in range(n):
        if fixed_col[j] or visited[j]:
            continue
        if c[base + j] - u[row] - v[j] != 0:
            continue
        visited[j] = 1
        if match_col[j] == -1 or _augment(match_col[j], n, c, u, v,
                                          match_row, match_col,
                                          fixed_col, visited):
            match_row[row] = j
            match_col[j] = row
            return True
    return False


def lexmin_assignment(costs, Py_ssize_t n):
    """Return the lexicographically-smallest optimal column index per row.

    ``costs`` is a flat row-major sequence of ``n * n`` non-negative ints.
    """
    if n == 0:
        return []
    if len(costs) != n * n:
        raise ValueError(f"expected {n * n} costs, got {len(costs)}")

    cdef Py_ssize_t i, j, k, i0, j0, j1, base, cur, rival
    cdef long long delta, reduced, ui0

    cdef long long* c = <long long*> PyMem_Malloc(n * n * sizeof(long long))
    cdef long long* u = <long long*> PyMem_Malloc((n + 1) * sizeof(long long))
    cdef long long* v = <long long*> PyMem_Malloc((n + 1) * sizeof(long long))
    cdef long long* minv = <long long*> PyMem_Malloc((n + 1) * sizeof(long long))
    cdef Py_ssize_t* p = <Py_ssize_t*> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t* way = <Py_ssize_t*> PyMem_Malloc((n + 1) * sizeof(Py_ssize_t))
    cdef char* used = <char*> PyMem_Malloc((n + 1) * sizeof(char))
    cdef Py_ssize_t* match_row = <Py_ssize_t*> PyMem_Malloc(n * sizeof(Py_ssize_t))
    cdef Py_ssize_t* match_col = <Py_ssize_t*> PyMem_Malloc(n * sizeof(Py_ssize_t))
    cdef char* fixed_col = <char*> PyMem_Malloc(n * sizeof(char))
    cdef char* visited = <char*> PyMem_Malloc(n * sizeof(char))
    if (c == NULL or u == NULL or v == NULL or minv == NULL or p == NULL
            or way == NULL or used == NULL or match_row == NULL
            or match_col == NULL or fixed_col == NULL or visited == NULL):
        _free_all(c, u, v, minv, p, way, used, match_row, match_col, fixed_col, visited)
        raise MemoryError()

    try:
        for k in range(n * n):
            c[k] = costs[k]
            if c[k] < 0:
                raise ValueError("costs must be non-negative")

        # Phase 1: shortest augmenting path with potentials (1-indexed core).
        for k in range(n + 1):
            u[k] = 0
            v[k] = 0
            p[k] = 0
            way[k] = 0
        for i in range(1, n + 1):
            p[0] = i
            j0 = 0
            for k in range(n + 1):
                minv[k] = INF
                used[k] = 0
            while True:
                used[j0] = 1
                i0 = p[j0]
                delta = INF
                j1 = 0
                base = (i0 - 1) * n
                ui0 = u[i0]
                for j in range(1, n + 1):
                    if not used[j]:
                        reduced = c[base + j - 1] - ui0 - v[j]
                        if reduced < minv[j]:
                            minv[j] = reduced
                            way[j] = j0
                        if minv[j] < delta:
                            delta = minv[j]
                            j1 = j
                for j in range(n + 1):
                    if used[j]:
                        u[p[j]] += delta
                        v[j] -= delta
                    else:
                        minv[j] -= delta
                j0 = j1
                if p[j0] == 0:
                    break
            while j0:
                j1 = way[j0]
                p[j0] = p[j1]
                j0 = j1
        for j in range(1, n + 1):
            match_row[p[j] - 1] = j - 1
        # Shift potentials to 0-indexed rows/cols for the tightness test.
        for i in range(n):
            u[i] = u[i + 1]
            v[i] = v[i + 1]

        # Phase 2: lexicographic refinement over tight edges.
        for j in range(n):
            match_col[j] = -1
            fixed_col[j] = 0
        for i in range(n):
            match_col[match_row[i]] = i
        for i in range(n):
            cur = match_row[i]
            base = i * n
            for j in range(n):
                if fixed_col[j]:
                    continue
                if c[base + j] - u[i] - v[j] != 0:
                    continue
                if j == cur:
                    break
                rival = match_col[j]
                match_row[i] = j
                match_col[j] = i
                match_col[cur] = -1
                fixed_col[j] = 1
                for k in range(n):
                    visited[k] = 0
                if _augment(rival, n, c, u, v, match_row, match_col,
                            fixed_col, visited):
                    fixed_col[j] = 0
                    break
                fixed_col[j] = 0
                match_row[i] = cur
                match_col[cur] = i
                match_col[j] = rival
            fixed_col[match_row[i]] = 1

        return [match_row[i] for i in range(n)]
    finally:
        _free_all(c, u, v, minv, p, way, used, match_row, match_col, fixed_col, visited)


cdef void _free_all(long long* c, long long* u, long long* v, long long* minv,
                    Py_ssize_t* p, Py_ssize_t* way, char* used,
                    Py_ssize_t* match_row, Py_ssize_t* match_col,
                    char* fixed_col, char* visited) noexcept:
    PyMem_Free(c)
    PyMem_Free(u)
    PyMem_Free(v)
    PyMem_Free(minv)
    PyMem_Free(p)
    PyMem_Free(way)
    PyMem_Free(used)
    PyMem_Free(match_row)
    PyMem_Free(match_col)
    PyMem_Free(fixed_col)
    PyMem_Free(visited)
