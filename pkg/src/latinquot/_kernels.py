"""Hot combinatorial kernels.

All kernels take and return plain numpy arrays with 0-based indices, keep no
state, and avoid recursion so they compile under numba's nopython mode.  Cells
of a cube of side ``k`` are described by an ``(m, 3)`` int64 array.  The line
through cell ``(a, b, c)`` running along axis ``t`` gets the id

    axis 1: b*k + c,   axis 2: k*k + a*k + c,   axis 3: 2*k*k + a*k + b.
"""

import numpy as np

from ._accel import njit


@njit
def cell_lines(cells, k):
    """Return the ``(m, 3)`` array of line ids through each cell."""
    m = cells.shape[0]
    out = np.empty((m, 3), dtype=np.int64)
    kk = k * k
    for i in range(m):
        a = cells[i, 0]
        b = cells[i, 1]
        c = cells[i, 2]
        out[i, 0] = b * k + c
        out[i, 1] = kk + a * k + c
        out[i, 2] = 2 * kk + a * k + b
    return out


@njit
def _disjoint_uncovered(lines, chosen, used):
    # greedy packing of uncovered cells with pairwise distinct lines;
    # each needs its own cover line, so the count is a lower bound
    m = lines.shape[0]
    used[:] = False
    count = 0
    for i in range(m):
        l0 = lines[i, 0]
        l1 = lines[i, 1]
        l2 = lines[i, 2]
        if chosen[l0] or chosen[l1] or chosen[l2]:
            continue
        if used[l0] or used[l1] or used[l2]:
            continue
        used[l0] = True
        used[l1] = True
        used[l2] = True
        count += 1
    return count


@njit
def _first_uncovered(lines, chosen):
    for i in range(lines.shape[0]):
        if not (chosen[lines[i, 0]] or chosen[lines[i, 1]] or chosen[lines[i, 2]]):
            return i
    return -1


@njit
def min_line_cover(cells, k):
    """Minimum number of lines covering every cell (branch and bound)."""
    m = cells.shape[0]
    if m == 0:
        return 0
    lines = cell_lines(cells, k)
    nlines = 3 * k * k
    chosen = np.zeros(nlines, dtype=np.bool_)
    used = np.zeros(nlines, dtype=np.bool_)

    # greedy upper bound: repeatedly take the line covering most uncovered cells
    gain = np.zeros(nlines, dtype=np.int64)
    best = 0
    while True:
        gain[:] = 0
        any_left = False
        for i in range(m):
            l0 = lines[i, 0]
            l1 = lines[i, 1]
            l2 = lines[i, 2]
            if chosen[l0] or chosen[l1] or chosen[l2]:
                continue
            any_left = True
            gain[l0] += 1
            gain[l1] += 1
            gain[l2] += 1
        if not any_left:
            break
        chosen[np.argmax(gain)] = True
        best += 1
    chosen[:] = False

    cell_at = np.empty(m + 1, dtype=np.int64)
    opt = np.empty(m + 1, dtype=np.int64)
    depth = 0
    cell_at[0] = 0
    opt[0] = -1
    while depth >= 0:
        if opt[depth] >= 0:
            chosen[lines[cell_at[depth], opt[depth]]] = False
        opt[depth] += 1
        if opt[depth] == 3:
            depth -= 1
            continue
        chosen[lines[cell_at[depth], opt[depth]]] = True
        taken = depth + 1
        u = _first_uncovered(lines, chosen)
        if u == -1:
            if taken < best:
                best = taken
            continue
        if taken + _disjoint_uncovered(lines, chosen, used) >= best:
            continue
        depth += 1
        cell_at[depth] = u
        opt[depth] = -1
    return best


@njit
def max_independent(cells, k):
    """Largest subset of cells meeting every line at most once."""
    m = cells.shape[0]
    if m == 0:
        return 0
    lines = cell_lines(cells, k)
    nlines = 3 * k * k
    occ = np.zeros(nlines, dtype=np.bool_)
    seen = np.zeros(nlines, dtype=np.bool_)
    # decision[i]: -1 untried, 1 included, 0 excluded
    decision = np.full(m + 1, -1, dtype=np.int64)
    best = 0
    cur = 0
    pos = 0
    while pos >= 0:
        if pos == m:
            if cur > best:
                best = cur
            pos -= 1
            continue
        d = decision[pos]
        l0 = lines[pos, 0]
        l1 = lines[pos, 1]
        l2 = lines[pos, 2]
        if d == 1:
            occ[l0] = False
            occ[l1] = False
            occ[l2] = False
            cur -= 1
            decision[pos] = 0
        elif d == 0:
            decision[pos] = -1
            pos -= 1
            continue
        else:
            if not (occ[l0] or occ[l1] or occ[l2]):
                occ[l0] = True
                occ[l1] = True
                occ[l2] = True
                cur += 1
                decision[pos] = 1
            else:
                decision[pos] = 0
        # bound: per axis, count free lines still reachable by later cells
        bound = m - pos - 1
        for t in range(3):
            seen[:] = False
            cnt = 0
            for i in range(pos + 1, m):
                ln = lines[i, t]
                if not occ[ln] and not seen[ln]:
                    seen[ln] = True
                    cnt += 1
            if cnt < bound:
                bound = cnt
        if cur + bound <= best:
            continue
        pos += 1
        decision[pos] = -1
    return best


@njit
def _augment(adj, start, match_row, match_col, visited):
    # iterative Kuhn search for an augmenting path from an unmatched row;
    # columns are scanned in ascending order
    n = adj.shape[1]
    stack = np.empty(adj.shape[0] + 1, dtype=np.int64)
    ptr = np.empty(adj.shape[0] + 1, dtype=np.int64)
    via = np.empty(adj.shape[0] + 1, dtype=np.int64)
    depth = 0
    stack[0] = start
    ptr[0] = 0
    while depth >= 0:
        r = stack[depth]
        pushed = False
        while ptr[depth] < n:
            c = ptr[depth]
            ptr[depth] += 1
            if adj[r, c] and not visited[c]:
                visited[c] = True
                via[depth] = c
                if match_col[c] == -1:
                    for d in range(depth + 1):
                        match_row[stack[d]] = via[d]
                        match_col[via[d]] = stack[d]
                    return True
                depth += 1
                stack[depth] = match_col[c]
                ptr[depth] = 0
                pushed = True
                break
        if not pushed:
            depth -= 1
    return False


@njit
def lex_perfect_matching(adj):
    """Lexicographically first perfect matching of a square 0/1 matrix.

    Returns ``cols`` with ``cols[i]`` the column matched to row ``i``, or an
    array filled with -1 when no perfect matching exists.
    """
    n = adj.shape[0]
    match_row = np.full(n, -1, dtype=np.int64)
    match_col = np.full(n, -1, dtype=np.int64)
    visited = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        visited[:] = False
        if not _augment(adj, i, match_row, match_col, visited):
            return np.full(n, -1, dtype=np.int64)

    frozen = np.zeros(n, dtype=np.bool_)
    for i in range(n):
        for j in range(n):
            if not adj[i, j] or frozen[j]:
                continue
            if match_row[i] == j:
                break
            j0 = match_row[i]
            i2 = match_col[j]
            match_row[i] = j
            match_col[j] = i
            match_col[j0] = -1
            match_row[i2] = -1
            visited[:] = frozen
            visited[j] = True
            if _augment(adj, i2, match_row, match_col, visited):
                break
            match_row[i] = j0
            match_col[j0] = i
            match_row[i2] = j
            match_col[j] = i2
        frozen[match_row[i]] = True
    return match_row


@njit
def _support_avoids(vals, k, avoid):
    # True when no pattern in ``avoid`` has its support inside supp(vals)
    for q in range(avoid.shape[0]):
        inside = True
        for a in range(k):
            for b in range(k):
                for c in range(k):
                    if avoid[q, a, b, c] and vals[(a * k + b) * k + c] == 0:
                        inside = False
                        break
                if not inside:
                    break
            if not inside:
                break
        if inside:
            return False
    return True


@njit
def enumerate_cubes(t1, t2, t3, cap, avoid, limit):
    """Enumerate k*k*k nonnegative integer cubes with prescribed line sums.

    ``t1[b, c]``, ``t2[a, c]`` and ``t3[a, b]`` are the required sums of the
    lines running along axes 1, 2 and 3; every entry is at most ``cap``.
    Cubes whose support contains the support of any pattern in ``avoid``
    (shape ``(q, k, k, k)``) are skipped.  Cubes are produced in
    lexicographic order of their row-major entry vector, at most ``limit`` of
    them; the result has shape ``(count, k*k*k)``.
    """
    k = t3.shape[0]
    ncell = k * k * k
    s1 = np.zeros((k, k), dtype=np.int64)
    s2 = np.zeros((k, k), dtype=np.int64)
    s3 = np.zeros((k, k), dtype=np.int64)
    vals = np.full(ncell + 1, -1, dtype=np.int64)
    out = np.empty((limit, ncell), dtype=np.int64)
    count = 0
    pos = 0
    while pos >= 0 and count < limit:
        if pos == ncell:
            if _support_avoids(vals, k, avoid):
                for i in range(ncell):
                    out[count, i] = vals[i]
                count += 1
            pos -= 1
            continue
        a = pos // (k * k)
        b = (pos // k) % k
        c = pos % k
        v = vals[pos]
        if v >= 0:
            s1[b, c] -= v
            s2[a, c] -= v
            s3[a, b] -= v
        lo = 0
        hi = cap
        r = t1[b, c] - s1[b, c]
        if r < hi:
            hi = r
        r = t2[a, c] - s2[a, c]
        if r < hi:
            hi = r
        r = t3[a, b] - s3[a, b]
        if r < hi:
            hi = r
        if a == k - 1:
            lo = max(lo, t1[b, c] - s1[b, c])
        if b == k - 1:
            lo = max(lo, t2[a, c] - s2[a, c])
        if c == k - 1:
            lo = max(lo, t3[a, b] - s3[a, b])
        nv = lo if v < 0 else max(v + 1, lo)
        if nv > hi:
            vals[pos] = -1
            pos -= 1
            continue
        vals[pos] = nv
        s1[b, c] += nv
        s2[a, c] += nv
        s3[a, b] += nv
        pos += 1
        vals[pos] = -1
    return out[:count]
