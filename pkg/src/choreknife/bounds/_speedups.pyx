# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled evaluation kernel for entitlement-only bound search.

Semantics mirror choreknife.bounds._pykernel exactly: same candidate
families, same pruning rules, same abandonment contract. The pure-Python
module is the reference; this one exists because the sampling experiments
evaluate the search on millions of weight vectors.
"""

from libc.math cimport INFINITY, sqrt

import numpy as np

cdef double K2 = (sqrt(3.0) + 1.0) / 2.0
cdef double SYM3 = 15.0 / 13.0
cdef double SYM47 = 20.0 / 17.0
cdef double SYM8 = 13.0 / 11.0

cdef int FAMILY_AUTO = 0
cdef int FAMILY_EXHAUSTIVE = 1
cdef int FAMILY_HEURISTIC = 2
cdef int FAMILY_PAPER3 = 3
cdef int FAMILY_PAPER4 = 4

cdef int EXHAUSTIVE_MAX_N = 10
DEF MAX_N = 32


cdef inline double _sym_const(int n) noexcept:
    if n == 3:
        return SYM3
    if n <= 7:
        return SYM47
    return SYM8


cdef inline double _base_case(double* w, int n) noexcept:
    if n == 1:
        return 1.0
    if n == 2:
        return 1.0 if w[0] == w[1] else K2
    if w[0] == w[n - 1]:
        return _sym_const(n)
    return INFINITY


cdef double _lpt_alpha(double* w, int n, double* rep_w, int g) noexcept:
    """Greedy heaviest-first placement; a valid (not necessarily optimal)
    max load/representative ratio for the given representative weights."""
    cdef double[MAX_N] loads
    cdef int[MAX_N] counts
    cdef int j, agent, pos, pick, empties
    cdef double ratio, best_ratio, out
    for j in range(g):
        loads[j] = 0.0
        counts[j] = 0
    pos = 0
    for agent in range(n - 1, -1, -1):
        empties = 0
        for j in range(g):
            if counts[j] == 0:
                empties += 1
        pick = -1
        best_ratio = INFINITY
        for j in range(g):
            if empties >= n - pos and counts[j] != 0:
                continue
            ratio = (loads[j] + w[agent]) / rep_w[j]
            if ratio < best_ratio:
                best_ratio = ratio
                pick = j
        loads[pick] += w[agent]
        counts[pick] += 1
        pos += 1
    out = 0.0
    for j in range(g):
        ratio = loads[j] / rep_w[j]
        if ratio > out:
            out = ratio
    return out


cdef double _min_alpha(double* w, int n, int* reps, int g, double cutoff) noexcept:
    """Min over partitions into g labeled nonempty groups of the max
    load/representative-weight ratio; branches at or above the incumbent
    are cut. The incumbent starts at the better of the cutoff and a greedy
    placement (itself a valid candidate), so the return value is exact
    whenever it beats the cutoff. Agents are placed heaviest-first."""
    cdef double[MAX_N] loads
    cdef int[MAX_N] counts
    cdef double[MAX_N] rep_w
    cdef int j
    for j in range(g):
        loads[j] = 0.0
        counts[j] = 0
        rep_w[j] = w[reps[j]]
    cdef double best = _lpt_alpha(w, n, rep_w, g)
    if cutoff < best:
        best = cutoff
    _place(w, n, n - 1, 0.0, loads, counts, rep_w, g, &best)
    return best


cdef void _place(double* w, int n, int pos, double running, double* loads,
                 int* counts, double* rep_w, int g, double* best) noexcept:
    if running >= best[0]:
        return
    cdef int empty = 0
    cdef int j
    for j in range(g):
        if counts[j] == 0:
            empty += 1
    if empty > pos + 1:
        return
    if pos < 0:
        if empty == 0:
            best[0] = running
        return
    cdef double wa = w[pos]
    cdef double ratio, nxt
    for j in range(g):
        loads[j] += wa
        counts[j] += 1
        ratio = loads[j] / rep_w[j]
        nxt = ratio if ratio > running else running
        _place(w, n, pos - 1, nxt, loads, counts, rep_w, g, best)
        loads[j] -= wa
        counts[j] -= 1


cdef double _eval(double* w, int n, int family, int depth, double cap) noexcept:
    cdef int i, j, g, mask, start
    cdef double best, red2, rep_total, childval, alpha, value, seg, ratio
    cdef double b1, b2, b3
    cdef double[MAX_N] child
    cdef int[MAX_N] reps

    if family == FAMILY_AUTO:
        family = FAMILY_EXHAUSTIVE if n <= EXHAUSTIVE_MAX_N else FAMILY_HEURISTIC
    if n <= 2:
        return _base_case(w, n)
    if family == FAMILY_PAPER3:
        b1 = K2 * (w[0] + w[2]) / w[2]
        b2 = SYM3 * w[2] / w[0]
        return b1 if b1 < b2 else b2
    if family == FAMILY_PAPER4:
        b1 = 1.0 / w[3]
        b2 = (w[0] + w[2]) / w[2]
        b3 = (w[1] + w[3]) / w[3]
        if b3 > b2:
            b2 = b3
        b3 = w[3] / w[2]
        if K2 < b3:
            b3 = K2
        b2 = b2 * b3
        b3 = SYM47 * w[3] / w[0]
        if b2 < b1:
            b1 = b2
        if b3 < b1:
            b1 = b3
        return b1

    best = _base_case(w, n)
    red2 = (w[n - 1] / w[0]) * _sym_const(n)
    if red2 < best:
        best = red2
    if depth <= 0 or best <= cap:
        return best

    cdef double alpha_lb
    cdef double[MAX_N] rep_w
    if family == FAMILY_EXHAUSTIVE:
        # Cheap openers: heavy representative sets with greedy placement.
        # Valid family members, so they may lower `best` (and trigger
        # abandonment) before the full scan tightens anything.
        for g in range(1, 4):
            if g > n - 1:
                break
            rep_total = 0.0
            for j in range(g):
                rep_w[j] = w[n - g + j]
                rep_total += rep_w[j]
            for j in range(g):
                child[j] = w[n - g + j] / rep_total
            childval = _eval(child, g, FAMILY_AUTO, depth - 1, 0.0)
            value = _lpt_alpha(w, n, rep_w, g) * childval
            if value < best:
                best = value
                if best <= cap:
                    return best
        # Children are evaluated exactly; only the caller-facing value may
        # be abandoned. A cap-derived child budget is unsound here because
        # alpha is not known until after the child value is.
        for mask in range(1, (1 << n) - 1):
            g = 0
            rep_total = 0.0
            for i in range(n):
                if mask >> i & 1:
                    reps[g] = i
                    rep_total += w[i]
                    g += 1
            # The heaviest agent sits in some group, so alpha >= w_max over
            # the heaviest representative weight; and alpha >= 1/rep_total.
            alpha_lb = 1.0 / rep_total
            value = w[n - 1] / w[reps[g - 1]]
            if value > alpha_lb:
                alpha_lb = value
            if alpha_lb >= best:
                continue
            for j in range(g):
                child[j] = w[reps[j]] / rep_total
            childval = _eval(child, g, FAMILY_AUTO, depth - 1, 0.0)
            if alpha_lb * childval >= best:
                continue
            alpha = _min_alpha(w, n, reps, g, best / childval)
            value = alpha * childval
            if value < best:
                best = value
                if best <= cap:
                    return best
        return best

    # heuristic family: contiguous groups over the sorted vector with the
    # group maximum as representative, plus the odd/even pairing pattern
    cdef double[MAX_N + 1] prefix
    prefix[0] = 0.0
    for i in range(n):
        prefix[i + 1] = prefix[i] + w[i]
    cdef int full = (1 << (n - 1)) - 1
    for mask in range(1 << (n - 1)):
        if mask == full:
            continue
        alpha = 0.0
        g = 0
        start = 0
        rep_total = 0.0
        for i in range(n):
            if i == n - 1 or (mask >> i & 1):
                seg = prefix[i + 1] - prefix[start]
                ratio = seg / w[i]
                if ratio > alpha:
                    alpha = ratio
                reps[g] = i
                rep_total += w[i]
                g += 1
                start = i + 1
        if alpha >= best:
            continue
        for j in range(g):
            child[j] = w[reps[j]] / rep_total
        childval = _eval(child, g, FAMILY_AUTO, depth - 1, cap / alpha)
        value = alpha * childval
        if value < best:
            best = value
            if best <= cap:
                return best
    if n >= 4:
        seg = 0.0  # weight of the group holding the top agent
        i = n - 1
        while i >= 0:
            seg += w[i]
            i -= 2
        alpha = seg / w[n - 1]
        ratio = (prefix[n] - seg) / w[n - 2]
        if ratio > alpha:
            alpha = ratio
        if alpha < best:
            rep_total = w[n - 2] + w[n - 1]
            child[0] = w[n - 2] / rep_total
            child[1] = w[n - 1] / rep_total
            value = alpha * _base_case(child, 2)
            if value < best:
                best = value
    return best


def eval_bound(weights, int family=0, int depth=3, double cap=0.0):
    """Evaluate the bound for one weight vector (any order, entries > 0)."""
    cdef double[MAX_N] w
    values = sorted(float(x) for x in weights)
    cdef int n = len(values)
    if n < 1 or n > MAX_N:
        raise ValueError(f"need 1 <= n <= {MAX_N} agents")
    if values[0] <= 0.0:
        raise ValueError("weights must be strictly positive")
    cdef int i
    for i in range(n):
        w[i] = values[i]
    _check_family(family, n)
    return _eval(w, n, family, depth, cap)


def _check_family(int family, int n):
    if family < 0 or family > 4:
        raise ValueError(f"unknown family {family}")
    if family == FAMILY_PAPER3 and n != 3:
        raise ValueError("paper3 family is defined for n = 3 only")
    if family == FAMILY_PAPER4 and n != 4:
        raise ValueError("paper4 family is defined for n = 4 only")


def batch_max(weights_2d, int family=0, int depth=3, double running_max=0.0):
    """Maximum bound over rows of a 2D float64 array: (max, argmax index).

    Rows are sorted internally; rows that cannot beat the running maximum
    are abandoned as early as the pruning allows.
    """
    cdef double[:, ::1] data = np.ascontiguousarray(
        np.sort(np.asarray(weights_2d, dtype=np.float64), axis=1)
    )
    cdef Py_ssize_t rows = data.shape[0]
    cdef int n = <int> data.shape[1]
    if n < 1 or n > MAX_N:
        raise ValueError(f"need 1 <= n <= {MAX_N} agents")
    _check_family(family, n)
    cdef double best = running_max
    cdef Py_ssize_t best_row = -1
    cdef Py_ssize_t r
    cdef double v
    for r in range(rows):
        v = _eval(&data[r, 0], n, family, depth, best)
        if v > best:
            best = v
            best_row = r
    return best, best_row
