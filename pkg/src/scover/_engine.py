"""Internal existence search for non-trivial subsequence covers.

Operates on canonical words (letters 0..k-1 introduced in order).  The
candidate tree fixes the first letter, forbids equal adjacent letters and
squares, introduces new letters in first-occurrence order, and embeds the
candidate greedily left to right; a branch dies as soon as the embedding
frontier skips a position whose letter has not been placed yet, since such
a position can never lie on an occurrence.  Complete candidates that end
with the last letter of the text and use its whole alphabet get the full
linear-time cover check.

A numba-compiled twin of the pure-Python walker is used automatically when
numba is importable; both implementations are cross-checked in the tests.
"""

from __future__ import annotations

from .errors import BudgetError

try:  # optional acceleration
    import numpy as _np
    from numba import njit as _njit
except ImportError:  # pragma: no cover - exercised only without numba
    _np = None
    _njit = None


def next_table(text: tuple[int, ...], k: int) -> list[list[int]]:
    """next_table[i][c] = least position >= i with letter c, else len(text)."""
    n = len(text)
    table = [[n] * k for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        row = table[i]
        row[:] = table[i + 1]
        row[text[i]] = i
    return table


def prev_table(text: tuple[int, ...], k: int) -> list[list[int]]:
    """prev_table[i][c] = greatest position <= i - 1 with letter c, else -1."""
    n = len(text)
    table = [[-1] * k for _ in range(n + 1)]
    for i in range(n):
        row = table[i + 1]
        row[:] = table[i]
        row[text[i]] = i
    return table


def _covers_py(text: tuple[int, ...], cand: list[int], first_pos: list[int],
               last_buf: list[int], prev_t: list[list[int]]) -> bool:
    """Full cover check for a complete candidate whose greedy left embedding
    is already known (first_pos) and whose last letter matches the text."""
    n = len(text)
    m = len(cand)
    i = n - 1
    for j in range(m - 1, -1, -1):
        p = prev_t[i + 1][cand[j]]
        if p < 0:
            return False
        last_buf[j] = p
        i = p - 1
    pred = [-1] * (max(text) + 1)
    k_idx = 0
    for i in range(n):
        letter = text[i]
        if i == first_pos[k_idx]:
            pred[letter] = k_idx
            if k_idx < m - 1:
                k_idx += 1
        j = pred[letter]
        if j == -1:
            return False
        if j + 1 < m and last_buf[j + 1] <= i:
            return False
    return True


def cover_exists_py(text: tuple[int, ...], cap: int | None = None,
                    budget: int | None = None) -> bool:
    """True iff the canonical word has an s-cover of length < len(text)
    (at most ``cap`` when given).  Raises BudgetError when the node budget
    runs out before the search is decided."""
    n = len(text)
    if n <= 1:
        return False
    k = max(text) + 1
    limit = n - 1 if cap is None else min(cap, n - 1)
    if limit < k:
        return False
    nxt = next_table(text, k)
    prv = prev_table(text, k)
    last_letter = text[-1]
    full_mask = (1 << k) - 1
    cand = [0]
    first_pos = [0] * (limit + 1)
    last_buf = [0] * (limit + 1)
    nodes = 0

    def rec(depth: int, mask: int, frontier: int, placed: int) -> bool:
        nonlocal nodes
        nodes += 1
        if budget is not None and nodes > budget:
            raise BudgetError("cover-existence search budget exhausted")
        if (mask == full_mask and cand[-1] == last_letter
                and _covers_py(text, cand, first_pos, last_buf, prv)):
            return True
        if depth == limit:
            return False
        prev_letter = cand[-1]
        hi = placed if placed < k else k - 1
        for x in range(hi + 1):
            if x == prev_letter:
                continue
            p = nxt[frontier][x]
            if p >= n:
                continue
            skipped_unplaced = False
            for i in range(frontier, p):
                if not (mask >> text[i]) & 1:
                    skipped_unplaced = True
                    break
            if skipped_unplaced:
                continue
            cand.append(x)
            # reject squares ending at the new letter (adjacent pair done above)
            d = depth  # index of the new letter
            is_square = False
            for half in range(2, (d + 1) // 2 + 1):
                lo = d + 1 - 2 * half
                for t in range(half):
                    if cand[lo + t] != cand[lo + half + t]:
                        break
                else:
                    is_square = True
                    break
            if not is_square:
                first_pos[depth] = p
                if rec(depth + 1, mask | (1 << x),
                       p + 1, placed + (0 if (mask >> x) & 1 else 1)):
                    return True
            cand.pop()
        return False

    first_pos[0] = 0
    return rec(1, 1, 1, 1)


if _njit is not None:

    @_njit(cache=True)
    def _cover_exists_nb(text, k, limit):  # pragma: no cover - compiled
        n = text.shape[0]
        nxt = _np.empty((n + 1) * k, dtype=_np.int64)
        for c in range(k):
            nxt[n * k + c] = n
        for i in range(n - 1, -1, -1):
            base = i * k
            above = base + k
            for c in range(k):
                nxt[base + c] = nxt[above + c]
            nxt[base + text[i]] = i
        prv = _np.empty((n + 1) * k, dtype=_np.int64)
        for c in range(k):
            prv[c] = -1
        for i in range(n):
            base = (i + 1) * k
            below = base - k
            for c in range(k):
                prv[base + c] = prv[below + c]
            prv[base + text[i]] = i

        last_letter = text[n - 1]
        full_mask = (1 << k) - 1
        cand = _np.empty(limit + 1, dtype=_np.int64)
        first_pos = _np.empty(limit + 1, dtype=_np.int64)
        last_buf = _np.empty(limit + 1, dtype=_np.int64)
        mask_st = _np.empty(limit + 2, dtype=_np.int64)
        front_st = _np.empty(limit + 2, dtype=_np.int64)
        placed_st = _np.empty(limit + 2, dtype=_np.int64)
        next_x = _np.empty(limit + 2, dtype=_np.int64)
        pred = _np.empty(k, dtype=_np.int64)

        cand[0] = 0
        first_pos[0] = 0
        depth = 1
        mask_st[1] = 1
        front_st[1] = 1
        placed_st[1] = 1
        next_x[1] = 0
        if k == 1 and last_letter == 0:
            # the single-letter candidate; covers any unary text
            return True

        while depth >= 1:
            if depth >= limit:
                depth -= 1
                continue
            mask = mask_st[depth]
            frontier = front_st[depth]
            placed = placed_st[depth]
            hi = placed if placed < k else k - 1
            x = next_x[depth]
            advanced = False
            while x <= hi:
                if x == cand[depth - 1]:
                    x += 1
                    continue
                p = nxt[frontier * k + x]
                if p >= n:
                    x += 1
                    continue
                bad = False
                for i in range(frontier, p):
                    if not (mask >> text[i]) & 1:
                        bad = True
                        break
                if bad:
                    x += 1
                    continue
                cand[depth] = x
                d = depth
                is_square = False
                for half in range(2, (d + 1) // 2 + 1):
                    lo = d + 1 - 2 * half
                    eq = True
                    for t in range(half):
                        if cand[lo + t] != cand[lo + half + t]:
                            eq = False
                            break
                    if eq:
                        is_square = True
                        break
                if is_square:
                    x += 1
                    continue
                next_x[depth] = x + 1
                first_pos[depth] = p
                new_mask = mask | (1 << x)
                depth += 1
                mask_st[depth] = new_mask
                front_st[depth] = p + 1
                placed_st[depth] = placed + (0 if (mask >> x) & 1 else 1)
                next_x[depth] = 0
                if new_mask == full_mask and x == last_letter:
                    # full check of the complete candidate cand[0..depth)
                    m = depth
                    i = n - 1
                    ok = True
                    for j in range(m - 1, -1, -1):
                        p2 = prv[i * k + k + cand[j]]
                        if p2 < 0:
                            ok = False
                            break
                        last_buf[j] = p2
                        i = p2 - 1
                    if ok:
                        for c in range(k):
                            pred[c] = -1
                        kk = 0
                        for i in range(n):
                            letter = text[i]
                            if i == first_pos[kk]:
                                pred[letter] = kk
                                if kk < m - 1:
                                    kk += 1
                            j = pred[letter]
                            if j == -1:
                                ok = False
                                break
                            if j + 1 < m and last_buf[j + 1] <= i:
                                ok = False
                                break
                        if ok:
                            return True
                advanced = True
                break
            if not advanced:
                depth -= 1
        return False

    def cover_exists(text: tuple[int, ...], cap: int | None = None,
                     budget: int | None = None) -> bool:
        if budget is not None:
            return cover_exists_py(text, cap, budget)
        n = len(text)
        if n <= 1:
            return False
        k = max(text) + 1
        limit = n - 1 if cap is None else min(cap, n - 1)
        if limit < k:
            return False
        arr = _np.asarray(text, dtype=_np.int64)
        return bool(_cover_exists_nb(arr, k, limit))

else:  # pragma: no cover - exercised only without numba
    cover_exists = cover_exists_py
