"""Compiled inner loops shared by the enumeration and isomorphism modules.

Tables are flat ``int64`` arrays of length ``n*n`` with ``t[x*n + y] = x*y``
and ``-1`` marking an undefined cell.  The companion array ``inv`` holds the
dual operation: ``inv[y*n + v] = x`` whenever ``t[x*n + y] = v``.

Every kernel is plain numpy-on-arrays code, so it also runs un-jitted when
``NUMBA_DISABLE_JIT=1`` is set.
"""
from __future__ import annotations

import numpy as np
from numba import njit

# failure codes written to ``info[0]`` by ``propagate``
ASSIGN_CONFLICT = 0
COLUMN_UNIQUENESS = 6

# layout of the scalar state vector used by the resumable search
S_DEPTH = 0
S_TP = 1
S_DONE = 2
S_SYMBREAK = 3
S_MAXDEPTH = 4


@njit(cache=True)
def setcell(t, inv, colcnt, intro, trail, tp, work, wp, n, x, y, v):
    p = x * n + y
    cur = t[p]
    if cur >= 0:
        return cur == v, tp, wp
    q = y * n + v
    if inv[q] >= 0:
        return False, tp, wp
    t[p] = v
    inv[q] = x
    colcnt[y] += 1
    intro[x] += 1
    intro[y] += 1
    intro[v] += 1
    trail[tp] = p
    tp += 1
    work[wp] = p
    wp += 1
    return True, tp, wp


@njit(cache=True)
def undo(t, inv, colcnt, intro, trail, tp, mark, n):
    while tp > mark:
        tp -= 1
        p = trail[tp]
        x = p // n
        y = p % n
        v = t[p]
        t[p] = -1
        inv[y * n + v] = -1
        colcnt[y] -= 1
        intro[x] -= 1
        intro[y] -= 1
        intro[v] -= 1
    return tp


@njit(cache=True)
def _fail(info, rule, x, y):
    info[0] = rule
    info[1] = x
    info[2] = y


@njit(cache=True)
def propagate(t, inv, colcnt, intro, trail, tp, work, wp, n, info):
    """Close the pending assignments in ``work[:wp]`` under the five rules.

    Besides the forward deductions, a rule whose outer product ``u*z`` is
    pinned while the inner cell ``u`` is not also fills ``u`` from the dual
    operation when that is already known (columns are bijections).  Returns ``(ok, tp)``.  On failure ``info`` holds the rule id and the cell
    whose assignment or check failed.
    """
    # Cell writes are inlined: a helper call per deduction costs more than
    # the deduction itself.
    while wp > 0:
        wp -= 1
        p = work[wp]
        j = p // n
        i = p % n
        k = t[p]
        for a in range(n):
            ka = t[k * n + a]
            ja = t[j * n + a]
            ia = t[i * n + a]
            xa = -1
            for rule in range(1, 6):
                sx = sy = sv = -1
                if rule == 1:
                    # k*a = (j*a)*(i*a)
                    if ja >= 0 and ia >= 0:
                        r = t[ja * n + ia]
                        if r < 0:
                            if ka >= 0:
                                sx, sy, sv = ja, ia, ka
                        elif ka < 0:
                            sx, sy, sv = k, a, r
                        elif r != ka:
                            _fail(info, 1, k, a)
                            return False, tp
                    elif ia >= 0 and ka >= 0:
                        # j*a = (k*a) /(i*a)
                        sx, sy, sv = j, a, inv[ia * n + ka]
                elif rule == 2:
                    # (a*j)*i = (a*i)*k
                    aj = t[a * n + j]
                    ai = t[a * n + i]
                    lhs = t[aj * n + i] if aj >= 0 else -1
                    rhs = t[ai * n + k] if ai >= 0 else -1
                    if lhs >= 0:
                        if rhs >= 0:
                            if lhs != rhs:
                                _fail(info, 2, ai, k)
                                return False, tp
                        elif ai >= 0:
                            sx, sy, sv = ai, k, lhs
                    elif rhs >= 0:
                        if aj >= 0:
                            sx, sy, sv = aj, i, rhs
                        else:
                            # a*j = ((a*i)*k) /i
                            sx, sy, sv = a, j, inv[i * n + rhs]
                elif rule == 3:
                    # (j*a)*i = k*(a*i)
                    ja = t[j * n + a]
                    ai = t[a * n + i]
                    lhs = t[ja * n + i] if ja >= 0 else -1
                    rhs = t[k * n + ai] if ai >= 0 else -1
                    if lhs >= 0:
                        if rhs >= 0:
                            if lhs != rhs:
                                _fail(info, 3, k, ai)
                                return False, tp
                        elif ai >= 0:
                            sx, sy, sv = k, ai, lhs
                    elif rhs >= 0:
                        if ja >= 0:
                            sx, sy, sv = ja, i, rhs
                        else:
                            # j*a = (k*(a*i)) /i
                            sx, sy, sv = j, a, inv[i * n + rhs]
                elif rule == 4:
                    # ((j /a) * (i /a)) * a = k
                    xa = inv[a * n + j]
                    ya = inv[a * n + i]
                    if xa >= 0 and ya >= 0:
                        xy = t[xa * n + ya]
                        if xy >= 0:
                            sx, sy, sv = xy, a, k
                        else:
                            sx, sy, sv = xa, ya, inv[a * n + k]
                else:
                    # k = ((j /a) * i) * (a*i)
                    ai = t[a * n + i]
                    if xa >= 0 and ai >= 0:
                        xi = t[xa * n + i]
                        if xi >= 0:
                            sx, sy, sv = xi, ai, k
                        else:
                            sx, sy, sv = xa, i, inv[ai * n + k]
                if sx < 0 or sv < 0:
                    continue
                q = sx * n + sy
                cur = t[q]
                if cur >= 0:
                    if cur != sv:
                        _fail(info, rule, sx, sy)
                        return False, tp
                    continue
                if inv[sy * n + sv] >= 0:
                    _fail(info, rule, sx, sy)
                    return False, tp
                t[q] = sv
                inv[sy * n + sv] = sx
                colcnt[sy] += 1
                intro[sx] += 1
                intro[sy] += 1
                intro[sv] += 1
                trail[tp] = q
                tp += 1
                work[wp] = q
                wp += 1
        # a column with one hole left is forced (axiom 2)
        if colcnt[i] == n - 1:
            row = -1
            val = -1
            for x in range(n):
                if t[x * n + i] < 0:
                    row = x
                if inv[i * n + x] < 0:
                    val = x
            ok, tp, wp = setcell(t, inv, colcnt, intro, trail, tp, work, wp, n, row, i, val)
            if not ok:
                _fail(info, COLUMN_UNIQUENESS, row, i)
                return False, tp
    return True, tp


@njit(cache=True)
def assign(t, inv, colcnt, intro, trail, tp, work, n, x, y, v, info):
    """Set ``x*y = v`` and propagate.  Returns ``(ok, tp)``."""
    ok, tp, wp = setcell(t, inv, colcnt, intro, trail, tp, work, 0, n, x, y, v)
    if not ok:
        _fail(info, ASSIGN_CONFLICT, x, y)
        return False, tp
    return propagate(t, inv, colcnt, intro, trail, tp, work, wp, n, info)


@njit(cache=True)
def next_cell(t, n, pos):
    """First undefined cell at or after ``pos`` in column-major order."""
    nn = n * n
    while pos < nn and t[(pos % n) * n + pos // n] >= 0:
        pos += 1
    return pos


@njit(cache=True)
def is_candidate(t, inv, intro, n, r, c, v, symbreak, fresh_taken):
    """Whether value ``v`` may be tried in cell ``(r, c)``.

    ``fresh_taken`` says a not-yet-introduced value was already offered here.
    """
    if inv[c * n + v] >= 0:
        return False
    if symbreak and intro[v] == 0 and v != r and v != c and fresh_taken:
        return False
    return True


@njit(cache=True)
def search(t, inv, colcnt, intro, trail, work, spos, sval, smark, scal, info, out, maxout):
    """Resumable depth-first completion of a partial table.

    Writes complete tables (and, when ``scal[S_MAXDEPTH] >= 0``, the partial
    tables reached at that depth) into ``out`` in search order.  Returns the
    number of rows written; ``scal[S_DONE]`` is set once the tree is exhausted.
    """
    n = colcnt.shape[0]
    nn = n * n
    depth = scal[S_DEPTH]
    tp = scal[S_TP]
    symbreak = scal[S_SYMBREAK] != 0
    maxdepth = scal[S_MAXDEPTH]
    count = 0
    while depth >= 0:
        if count == maxout:
            break
        pos = next_cell(t, n, spos[depth])
        spos[depth] = pos
        if pos == nn or depth == maxdepth:
            for q in range(nn):
                out[count, q] = t[q]
            count += 1
            depth -= 1
            if depth >= 0:
                tp = undo(t, inv, colcnt, intro, trail, tp, smark[depth], n)
            continue
        c = pos // n
        r = pos % n
        v = sval[depth]
        fresh_taken = False
        if symbreak:
            for u in range(v):
                if inv[c * n + u] < 0 and intro[u] == 0 and u != r and u != c:
                    fresh_taken = True
                    break
        advanced = False
        while v < n:
            if is_candidate(t, inv, intro, n, r, c, v, symbreak, fresh_taken):
                if intro[v] == 0 and v != r and v != c:
                    fresh_taken = True
                mark = tp
                ok, tp = assign(t, inv, colcnt, intro, trail, tp, work, n, r, c, v, info)
                if ok:
                    sval[depth] = v + 1
                    smark[depth] = mark
                    depth += 1
                    spos[depth] = pos + 1
                    sval[depth] = 0
                    advanced = True
                    break
                tp = undo(t, inv, colcnt, intro, trail, tp, mark, n)
            v += 1
        if not advanced:
            depth -= 1
            if depth >= 0:
                tp = undo(t, inv, colcnt, intro, trail, tp, smark[depth], n)
    scal[S_DEPTH] = depth
    scal[S_TP] = tp
    if depth < 0:
        scal[S_DONE] = 1
    return count


@njit(cache=True)
def is_quandle(t, n):
    """Full axiom check of a complete flat table."""
    seen = np.zeros(n, np.int64)
    for y in range(n):
        if t[y * n + y] != y:
            return False
        seen[:] = 0
        for x in range(n):
            v = t[x * n + y]
            if seen[v]:
                return False
            seen[v] = 1
    for a in range(n):
        for b in range(n):
            ab = t[a * n + b]
            for c in range(n):
                if t[ab * n + c] != t[t[a * n + c] * n + t[b * n + c]]:
                    return False
    return True


@njit(cache=True)
def inverse_flat(t, n):
    inv = np.empty(n * n, np.int64)
    for x in range(n):
        for y in range(n):
            inv[y * n + t[x * n + y]] = x
    return inv


@njit(cache=True)
def column_codes(t, n):
    """Cycle type of every column, packed as a base-(n+1) integer.

    Digit ``L-1`` of the code is the number of cycles of length ``L``.
    """
    codes = np.zeros(n, np.int64)
    seen = np.zeros(n, np.int64)
    hist = np.zeros(n + 1, np.int64)
    for y in range(n):
        seen[:] = 0
        hist[:] = 0
        for s in range(n):
            if seen[s]:
                continue
            length = 0
            x = s
            while not seen[x]:
                seen[x] = 1
                x = t[x * n + y]
                length += 1
            hist[length] += 1
        code = 0
        for length in range(n, 0, -1):
            code = code * (n + 1) + hist[length]
        codes[y] = code
    return codes


@njit(cache=True)
def column_cycle_counts(t, n):
    counts = np.zeros(n, np.int64)
    seen = np.zeros(n, np.int64)
    for y in range(n):
        seen[:] = 0
        for s in range(n):
            if seen[s]:
                continue
            counts[y] += 1
            x = s
            while not seen[x]:
                seen[x] = 1
                x = t[x * n + y]
    return counts


@njit(cache=True)
def fingerprint_rows(tables, n, level):
    """Exact bucket keys for a batch of tables, one row of ``n`` ints each."""
    m = tables.shape[0]
    keys = np.zeros((m, n), np.int64)
    for r in range(m):
        t = tables[r]
        if level == 1:
            keys[r, 0] = column_cycle_counts(t, n).sum()
        elif level == 2:
            keys[r] = np.sort(column_cycle_counts(t, n))
        elif level == 3:
            keys[r] = np.sort(column_codes(t, n))
    return keys


_HASH_MOD = 2147483647


@njit(cache=True)
def _mix(a, b):
    return (a * 1000003 + b * 998244353 + 12345) % _HASH_MOD


@njit(cache=True)
def refine_colors(t, n):
    """Isomorphism-invariant colouring of the elements.

    Starts from the cycle type of each column and repeatedly folds in the
    colours of ``x*y`` and ``y*x`` over all ``y`` until the partition stops
    splitting.  Equal tables up to relabelling get equal colourings, so the
    colours can restrict which bindings an isomorphism search tries.
    """
    codes = column_codes(t, n)
    c = np.empty(n, np.int64)
    for x in range(n):
        c[x] = codes[x] % _HASH_MOD
    classes = np.unique(c).shape[0]
    new = np.empty(n, np.int64)
    for _ in range(n):
        for x in range(n):
            acc = 0
            for y in range(n):
                h = _mix(_mix(c[y], c[t[x * n + y]]), c[t[y * n + x]])
                acc = (acc + _mix(h * h % _HASH_MOD, h)) % _HASH_MOD
            new[x] = _mix(c[x], acc)
        c[:] = new
        k = np.unique(c).shape[0]
        if k == classes:
            break
        classes = k
    return c


# -- partial isomorphisms -----------------------------------------------------


@njit(cache=True)
def bind(fwd, bwd, ca, cb, trail, tp, work, wp, x, y):
    if fwd[x] >= 0:
        return fwd[x] == y, tp, wp
    if bwd[y] >= 0 or ca[x] != cb[y]:
        return False, tp, wp
    fwd[x] = y
    bwd[y] = x
    trail[tp] = x
    tp += 1
    work[wp] = x
    wp += 1
    return True, tp, wp


@njit(cache=True)
def unbind(fwd, bwd, trail, tp, mark):
    while tp > mark:
        tp -= 1
        x = trail[tp]
        bwd[fwd[x]] = -1
        fwd[x] = -1
    return tp


@njit(cache=True)
def propagate_iso(A, Ainv, B, Binv, n, fwd, bwd, ca, cb, trail, tp, work, wp):
    """Extend a partial map under the three isomorphism rules.

    ``ca``/``cb`` are per-element compatibility classes; a binding across
    classes counts as a contradiction.  Returns ``(ok, tp)``.
    """
    while wp > 0:
        wp -= 1
        i = work[wp]
        j = fwd[i]
        for b in range(n):
            for rule in range(3):
                fb = fwd[b]
                if rule == 0:
                    # phi(b) *' j = phi(b*i)
                    bi = A[b * n + i]
                    if fb >= 0:
                        x = bi
                        y = B[fb * n + j]
                    elif fwd[bi] >= 0:
                        x = b
                        y = Binv[j * n + fwd[bi]]
                    else:
                        continue
                elif fb < 0:
                    break
                elif rule == 1:
                    # j *' phi(b) = phi(i*b)
                    x = A[i * n + b]
                    y = B[j * n + fb]
                else:
                    # phi(i /b) *' phi(b) = j
                    x = Ainv[b * n + i]
                    y = Binv[fb * n + j]
                # inlined bind()
                if fwd[x] >= 0:
                    if fwd[x] != y:
                        return False, tp
                    continue
                if bwd[y] >= 0 or ca[x] != cb[y]:
                    return False, tp
                fwd[x] = y
                bwd[y] = x
                trail[tp] = x
                tp += 1
                work[wp] = x
                wp += 1
    return True, tp


@njit(cache=True)
def is_homomorphism(A, B, n, fwd):
    for a in range(n):
        for b in range(n):
            if fwd[A[a * n + b]] != B[fwd[a] * n + fwd[b]]:
                return False
    return True


@njit(cache=True)
def iso_search(A, Ainv, ca, B, Binv, cb, n, collect, out):
    """Backtracking over bindings ``x -> y`` with rule propagation.

    With ``collect`` false, stops at the first isomorphism and returns 1
    (written to ``out[0]``) or 0.  Otherwise writes every isomorphism into
    ``out`` and returns their number, or -1 when ``out`` is too small.
    """
    # fail-first: rarest compatibility class first
    rarity = np.zeros(n, np.int64)
    for x in range(n):
        for y in range(n):
            if cb[y] == ca[x]:
                rarity[x] += 1
        if rarity[x] == 0:
            return 0
    order = np.argsort(rarity * n + np.arange(n), kind="mergesort")
    fwd = -np.ones(n, np.int64)
    bwd = -np.ones(n, np.int64)
    trail = np.zeros(n, np.int64)
    work = np.zeros(n + 1, np.int64)
    src = np.zeros(n + 1, np.int64)
    nxt = np.zeros(n + 1, np.int64)
    mark = np.zeros(n + 1, np.int64)
    tp = 0
    depth = 0
    found = 0
    nxt[0] = 0
    src[0] = -1
    while depth >= 0:
        if src[depth] < 0:
            x = -1
            for q in range(n):
                if fwd[order[q]] < 0:
                    x = order[q]
                    break
            if x < 0:
                if is_homomorphism(A, B, n, fwd):
                    if found == out.shape[0]:
                        return -1
                    out[found, :] = fwd
                    found += 1
                    if not collect:
                        return found
                depth -= 1
                if depth >= 0:
                    tp = unbind(fwd, bwd, trail, tp, mark[depth])
                continue
            src[depth] = x
        x = src[depth]
        y = nxt[depth]
        advanced = False
        while y < n:
            if bwd[y] < 0 and cb[y] == ca[x]:
                m = tp
                ok, tp, wp = bind(fwd, bwd, ca, cb, trail, tp, work, 0, x, y)
                ok, tp = propagate_iso(A, Ainv, B, Binv, n, fwd, bwd, ca, cb, trail, tp, work, wp)
                if ok:
                    nxt[depth] = y + 1
                    mark[depth] = m
                    depth += 1
                    src[depth] = -1
                    nxt[depth] = 0
                    advanced = True
                    break
                tp = unbind(fwd, bwd, trail, tp, m)
            y += 1
        if not advanced:
            src[depth] = -1
            depth -= 1
            if depth >= 0:
                tp = unbind(fwd, bwd, trail, tp, mark[depth])
    return found


@njit(cache=True)
def match_any(A, B_all, Binv_all, cb_all, cb_sorted, candidates, out):
    """Index (into ``candidates``) of the first table isomorphic to ``A``.

    ``cb_all`` holds the :func:`refine_colors` of every stored table and
    ``cb_sorted`` the same rows sorted.
    """
    n = cb_all.shape[1]
    Ainv = inverse_flat(A, n)
    ca = refine_colors(A, n)
    ca_sorted = np.sort(ca)
    for q in range(candidates.shape[0]):
        c = candidates[q]
        same = True
        for x in range(n):
            if ca_sorted[x] != cb_sorted[c, x]:
                same = False
                break
        if not same:
            continue
        if iso_search(A, Ainv, ca, B_all[c], Binv_all[c], cb_all[c], n, False, out) > 0:
            return q
    return -1
