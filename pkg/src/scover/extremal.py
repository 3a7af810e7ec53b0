"""Extremal lengths of s-primitive words and the surrounding machinery.

gamma(k) is the maximal length of a word over k letters with no non-trivial
subsequence cover.  The exhaustive search walks the trie of canonical
s-primitive words (s-primitivity is closed under factors, so the trie is
prefix-closed), pruning children first with cheap suffix-local witnesses of
a non-trivial cover (squares, gapped repeats U V U with Alph(V) inside
Alph(U), the a-b-X-b-c pattern, and over-long few-letter windows) and only
then running the full cover-existence search, which is the final arbiter.

The module also evaluates the upper/lower bound recurrences, builds the
explicit word families behind the lower bounds and the many-shortest-covers
construction, and machine-checks the adjacent-pair lemma that powers the
refined upper bound.
"""

from __future__ import annotations

import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import _engine
from .errors import BudgetError, InputError
from .search import KNOWN_GAMMA
from .words import Word, first_word, is_square_free, last_word

CHECKPOINT_VERSION = 1

#: published reference values of the earlier upper-bound recurrence;
#: 32046 departs from the plain recurrence (2*7*2280 = 31920) and is kept
#: as published.
_P_PUBLISHED = {4: 19, 5: 190, 6: 2280, 7: 32046, 8: 512736}


# ---------------------------------------------------------------------------
# bound recurrences


def lower_bound_length(k: int) -> int:
    """Explicit lower bound 5 * 2**(k-2) - 1 on gamma(k), for k >= 4."""
    if k < 4:
        raise InputError("the explicit lower bound applies to k >= 4")
    return 5 * 2 ** (k - 2) - 1


def delta_bound(k: int) -> int:
    """Refined upper-bound recurrence: 19 at k=4, then (2k-2)*prev + 6."""
    if k < 4:
        raise InputError("delta bound is defined for k >= 4")
    value = 19
    for i in range(5, k + 1):
        value = (2 * i - 2) * value + 6
    return value


def conference_bound(k: int) -> int:
    """Earlier upper-bound recurrence, pinned to its published values up to
    k = 8 and extended by p(k) = 2k * p(k-1) beyond."""
    if k < 4:
        raise InputError("conference bound is defined for k >= 4")
    if k in _P_PUBLISHED:
        return _P_PUBLISHED[k]
    value = _P_PUBLISHED[8]
    for i in range(9, k + 1):
        value = 2 * i * value
    return value


def preliminary_upper_bound(k: int) -> int:
    """Block-partition upper bound (2k+2)*(B(k-1)+1) - 1, seeded with the
    known exact gamma values for up to four letters."""
    if k < 2:
        raise InputError("preliminary upper bound is defined for k >= 2")
    prev = KNOWN_GAMMA[k - 1] if k - 1 <= 4 else preliminary_upper_bound(k - 1)
    return (2 * k + 2) * (prev + 1) - 1


@dataclass(frozen=True)
class BoundsRow:
    k: int
    known_gamma: int | None
    lower: int | None
    preliminary_upper: int | None
    delta: int | None
    conference: int | None


@dataclass(frozen=True)
class BoundsTable:
    rows: tuple[BoundsRow, ...]

    def row(self, k: int) -> BoundsRow:
        return self.rows[k - 1]

    def as_text(self) -> str:
        header = f"{'k':>3} {'gamma':>8} {'lower':>12} {'prelim':>16} {'delta':>20} {'conference':>20}"
        lines = [header, "-" * len(header)]
        for r in self.rows:
            cells = [
                f"{r.k:>3}",
                f"{r.known_gamma if r.known_gamma is not None else '?':>8}",
                f"{r.lower if r.lower is not None else '-':>12}",
                f"{r.preliminary_upper if r.preliminary_upper is not None else '-':>16}",
                f"{r.delta if r.delta is not None else '-':>20}",
                f"{r.conference if r.conference is not None else '-':>20}",
            ]
            lines.append(" ".join(cells))
        return "\n".join(lines)


def bounds_table(k_max: int) -> BoundsTable:
    """Exact integer bound table for k = 1..k_max (big integers allowed)."""
    if not 1 <= k_max <= 64:
        raise InputError("bounds table supports 1 <= k_max <= 64")
    rows = []
    for k in range(1, k_max + 1):
        rows.append(
            BoundsRow(
                k=k,
                known_gamma=KNOWN_GAMMA.get(k),
                lower=lower_bound_length(k) if k >= 4 else None,
                preliminary_upper=preliminary_upper_bound(k) if k >= 2 else None,
                delta=delta_bound(k) if k >= 4 else None,
                conference=conference_bound(k) if k >= 4 else None,
            )
        )
    return BoundsTable(tuple(rows))


# ---------------------------------------------------------------------------
# explicit word families

_BASE_PRIMITIVE = {
    1: (0,),
    2: (0, 1, 0),
    3: (0, 1, 2, 0, 1, 0, 2, 1),
    4: (0, 1, 0, 2, 0, 3, 1, 0, 1, 3, 2, 0, 1, 2, 1, 0, 3, 0, 2),
}

# length-15 seed with two distinct shortest covers
_MULTICOVER_SEED = (0, 1, 2, 0, 3, 1, 2, 0, 2, 1, 3, 0, 2, 1, 0)


def lower_bound_word(k: int) -> Word:
    """A maximal-length s-primitive word for k <= 4; beyond, the doubling
    construction prev + fresh-letter + prev, of length 5 * 2**(k-2) - 1."""
    if not 1 <= k <= 12:
        raise InputError("lower_bound_word supports 1 <= k <= 12")
    if k in _BASE_PRIMITIVE:
        return _BASE_PRIMITIVE[k]
    prev = lower_bound_word(k - 1)
    return prev + (k - 1,) + prev


def multicover_word(n: int) -> Word:
    """Length-n prefix of the infinite word doubling the 15-letter seed with
    fresh letters; it has exactly 2**((n+1)//16) distinct shortest covers."""
    if not 1 <= n <= 2**20:
        raise InputError("multicover_word supports 1 <= n <= 2**20")
    word = _MULTICOVER_SEED
    fresh = 4
    while len(word) < n:
        word = word + (fresh,) + word
        fresh += 1
    return word[:n]


def fl_word(word: Word) -> Word:
    """first(S) + last(S), dropping the first letter of last(S) when it
    repeats the last letter of first(S); never has equal adjacent letters."""
    first = first_word(word)
    last = last_word(word)
    if first[-1] == last[0]:
        last = last[1:]
    return first + last


# ---------------------------------------------------------------------------
# adjacent-pair predicates


def phi(x: Word, y: Word) -> bool:
    """True if some adjacent pairs a1 a2 of x and b1 b2 of y satisfy
    a1 not in {b1, b2} and b2 not in {a1, a2}."""
    if len(x) < 2 or len(y) < 2:
        raise InputError("phi needs words of length >= 2")
    for i in range(len(x) - 1):
        a1, a2 = x[i], x[i + 1]
        for j in range(len(y) - 1):
            b1, b2 = y[j], y[j + 1]
            if a1 != b1 and a1 != b2 and b2 != a2:
                return True
    return False


def psi(word: Word) -> bool:
    """phi of the first and last adjacent pair; true for length <= 3."""
    if len(word) <= 3:
        return True
    return phi(word[:2], word[-2:])


def matches(x: Word, y: Word) -> bool:
    """x matches y when phi holds for x against the reverse of y."""
    return phi(x, tuple(reversed(y)))


@dataclass(frozen=True)
class XYCounterexample:
    x: Word
    y: Word
    witness: tuple[int, int] | None  # (i, j) adjacent-pair indices, or None


@dataclass(frozen=True)
class XYLemmaVerification:
    pairs_checked: int
    counterexamples: tuple[XYCounterexample, ...]

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def _square_free_words(length: int, used: int, prefix: list[int], max_letters: int):
    """Yield square-free words of the given length whose fresh letters appear
    in canonical order after the ``used`` already-introduced ones."""
    if len(prefix) == length:
        yield tuple(prefix)
        return
    top = min(used, max_letters - 1)
    for x in range(top + 1):
        prefix.append(x)
        d = len(prefix) - 1
        square = False
        for half in range(1, (d + 1) // 2 + 1):
            lo = d + 1 - 2 * half
            if prefix[lo : lo + half] == prefix[lo + half : d + 1]:
                square = True
                break
        if not square:
            yield from _square_free_words(length, max(used, x + 1), prefix, max_letters)
        prefix.pop()


def xy_pairs():
    """All jointly-canonical pairs (x, y): x square-free of length 4, y
    square-free of length 6, letters numbered by first occurrence across
    the concatenation x + y (at most 10 letters)."""
    for x in _square_free_words(4, 0, [], 10):
        used = max(x) + 1
        for y in _square_free_words(6, used, [], 10):
            yield x, y


def verify_xy_lemma(*, drop_first_clause: bool = False,
                    drop_second_clause: bool = False,
                    stop_after: int | None = None) -> XYLemmaVerification:
    """Machine check that every jointly-canonical square-free pair (|x| = 4,
    |y| = 6) admits adjacent pairs satisfying both phi clauses.

    The witness search scans pair indices in order and can be mutated (a
    clause dropped) for self-testing; found witnesses are always validated
    against the full two-clause condition, so a weakened search surfaces as
    counterexamples instead of silently passing.
    """
    counterexamples: list[XYCounterexample] = []
    pairs_checked = 0
    for x, y in xy_pairs():
        pairs_checked += 1
        witness = None
        for i in range(len(x) - 1):
            a1, a2 = x[i], x[i + 1]
            for j in range(len(y) - 1):
                b1, b2 = y[j], y[j + 1]
                first_ok = a1 != b1 and a1 != b2
                second_ok = b2 != a1 and b2 != a2
                if (drop_first_clause or first_ok) and (drop_second_clause or second_ok):
                    witness = (i, j)
                    break
            if witness is not None:
                break
        if witness is None:
            counterexamples.append(XYCounterexample(x, y, None))
        else:
            i, j = witness
            a1, a2 = x[i], x[i + 1]
            b1, b2 = y[j], y[j + 1]
            if not (a1 != b1 and a1 != b2 and b2 != a1 and b2 != a2):
                counterexamples.append(XYCounterexample(x, y, witness))
        if stop_after is not None and len(counterexamples) >= stop_after:
            break
    return XYLemmaVerification(pairs_checked, tuple(counterexamples))


@dataclass(frozen=True)
class PsiFactor:
    start: int
    stop: int
    word: Word


def find_psi_factor(word: Word) -> PsiFactor:
    """A factor of a square-free word, of length >= len(word) - 6, whose
    first and last adjacent pairs satisfy both phi clauses.

    Short words keep their three-letter prefix.  Otherwise the witness
    pairs inside the length-4 prefix and the length-6 suffix locate the
    factor; the two-clause condition on those pairs is exactly psi of the
    extracted factor.
    """
    if not is_square_free(word):
        raise InputError("find_psi_factor needs a square-free word")
    n = len(word)
    if n < 10:
        stop = min(3, n)
        return PsiFactor(0, stop, word[:stop])
    x = word[:4]
    y = word[-6:]
    for i in range(3):
        a1, a2 = x[i], x[i + 1]
        for j in range(5):
            b1, b2 = y[j], y[j + 1]
            if a1 != b1 and a1 != b2 and b2 != a1 and b2 != a2:
                start, stop = i, n - 6 + j + 2
                return PsiFactor(start, stop, word[start:stop])
    raise AssertionError("adjacent-pair lemma violated; verify_xy_lemma would fail")


# ---------------------------------------------------------------------------
# gamma search


@dataclass(frozen=True)
class GammaReport:
    k: int
    gamma: int
    canonical_count: int
    total_count: int
    canonical_words: tuple[Word, ...] | None
    nodes_explored: int
    complete: bool

    def as_text(self) -> str:
        word_count = f"{self.total_count} words" if self.total_count != 1 else "1 word"
        note = "" if self.complete else " [truncated]"
        return f"gamma({self.k}) = {self.gamma} ({word_count}){note}"


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def _suffix_window_ok(word: list[int], window_gamma: dict[int, int]) -> bool:
    """Every suffix using at most j distinct letters must be no longer than
    gamma(j); longer ones contain a non-primitive few-letter factor."""
    if not window_gamma:
        return True
    max_j = max(window_gamma)
    seen: set[int] = set()
    length = 0
    for letter in reversed(word):
        if letter not in seen:
            seen.add(letter)
            if len(seen) > max_j:
                return True
        length += 1
        limit = window_gamma.get(len(seen))
        if limit is not None and length > limit:
            return False
    return True


def _suffix_square(word: list[int]) -> bool:
    n = len(word)
    for half in range(1, n // 2 + 1):
        if word[n - 2 * half : n - half] == word[n - half :]:
            return True
    return False


def _suffix_gapped_repeat(word: list[int]) -> bool:
    """Gapped repeat U V U with Alph(V) inside Alph(U) ending at the last
    position (squares are handled separately)."""
    n = len(word)
    for u_len in range(1, (n - 1) // 2 + 1):
        u_start = n - u_len
        u = word[u_start:]
        u_alph = set(u)
        for v_len in range(1, n - 2 * u_len + 1):
            s = u_start - v_len - u_len
            if word[s : s + u_len] != u:
                continue
            if set(word[s + u_len : u_start]) <= u_alph:
                return True
    return False


def _suffix_abxbc(word: list[int]) -> bool:
    """Pattern a b X b c ending at the last position, with X over {a, b, c}."""
    n = len(word)
    if n < 4:
        return False
    c = word[-1]
    b = word[-2]
    if b == c:
        return False
    x_letters: set[int] = set()  # letters of word[i+2 : n-2] for the current i
    for i in range(n - 4, -1, -1):
        if word[i + 1] == b:
            a = word[i]
            if a != b and a != c and x_letters <= {a, b, c}:
                return True
        x_letters.add(word[i + 1])
        if len(x_letters - {b, c}) > 1:
            # two distinct non-{b,c} letters inside X: no single a absorbs both
            return False
    return False


def _extension_is_primitive(word: list[int], window_gamma: dict[int, int]) -> bool:
    """Decide s-primitivity of a canonical word whose parent (all but the
    last letter) is already known to be s-primitive."""
    if not _suffix_window_ok(word, window_gamma):
        return False
    if _suffix_square(word):
        return False
    if _suffix_gapped_repeat(word):
        return False
    if _suffix_abxbc(word):
        return False
    return not _engine.cover_exists(tuple(word))


def _window_limits(k: int) -> dict[int, int]:
    """Exact maximal s-primitive lengths usable as window filters for a
    k-letter run: only values for strictly smaller alphabets."""
    return {j: KNOWN_GAMMA[j] for j in (1, 2, 3, 4) if j < k}


def _explore(word: list[int], k: int, max_len: int | None,
             window_gamma: dict[int, int]):
    """DFS from a canonical s-primitive word; returns (best_len, best_words,
    nodes, truncated) over the subtree of s-primitive extensions."""
    best_len = len(word)
    best_words = [tuple(word)]
    nodes = 0
    truncated = False
    stack = [(list(word), len(set(word)))]
    while stack:
        current, used = stack.pop()
        if max_len is not None and len(current) >= max_len:
            truncated = True
            continue
        top = min(used, k - 1)
        for x in range(top, -1, -1):
            if x == current[-1]:
                continue
            child = current + [x]
            nodes += 1
            if _extension_is_primitive(child, window_gamma):
                depth = len(child)
                if depth > best_len:
                    best_len = depth
                    best_words = [tuple(child)]
                elif depth == best_len:
                    best_words.append(tuple(child))
                stack.append((child, max(used, x + 1)))
    return best_len, sorted(best_words), nodes, truncated


def _explore_task(args):
    seed, k, max_len = args
    return _explore(list(seed), k, max_len, _window_limits(k))


def _seed_phase(k: int, seed_depth: int, max_len: int | None,
                window_gamma: dict[int, int]):
    """Collect all canonical s-primitive words at seed_depth (the parallel
    work units) while tracking the best shallower maxima."""
    best_len, best_words, nodes = 1, [(0,)], 1
    seeds: list[Word] = []
    stack: list[tuple[list[int], int]] = [([0], 1)]
    while stack:
        current, used = stack.pop()
        if len(current) == seed_depth:
            seeds.append(tuple(current))
            continue
        if max_len is not None and len(current) >= max_len:
            continue
        top = min(used, k - 1)
        for x in range(top, -1, -1):
            if x == current[-1]:
                continue
            child = current + [x]
            nodes += 1
            if _extension_is_primitive(child, window_gamma):
                depth = len(child)
                if depth > best_len:
                    best_len = depth
                    best_words = [tuple(child)]
                elif depth == best_len:
                    best_words.append(tuple(child))
                stack.append((child, max(used, x + 1)))
    return best_len, sorted(best_words), nodes, sorted(seeds)


def _merge_best(best_len, best_words, other_len, other_words):
    if other_len > best_len:
        return other_len, list(other_words)
    if other_len == best_len:
        return best_len, sorted(set(best_words) | set(other_words))
    return best_len, best_words


class _Checkpoint:
    """Periodic JSON snapshot of the seed queue and the partial best."""

    def __init__(self, path: str | None, k: int, max_len: int | None,
                 filters: dict[int, int]):
        self.path = path
        self.k = k
        self.max_len = max_len
        self.filters = {str(j): limit for j, limit in sorted(filters.items())}

    def load(self):
        if not self.path or not os.path.exists(self.path):
            return None
        with open(self.path) as fh:
            data = json.load(fh)
        if data.get("version") != CHECKPOINT_VERSION or data.get("k") != self.k:
            raise InputError("checkpoint does not match this run")
        if data.get("max_len") != self.max_len or data.get("filters") != self.filters:
            raise InputError("checkpoint was produced with a different configuration")
        return data

    def save(self, pending, best_len, best_words, nodes, truncated):
        if not self.path:
            return
        data = {
            "version": CHECKPOINT_VERSION,
            "k": self.k,
            "max_len": self.max_len,
            "filters": self.filters,
            "pending": [list(s) for s in pending],
            "best_len": best_len,
            "best_words": [list(w) for w in best_words],
            "nodes": nodes,
            "truncated": truncated,
            "saved_at": time.time(),
        }
        tmp = f"{self.path}.tmp"
        with open(tmp, "w") as fh:
            json.dump(data, fh)
        os.replace(tmp, self.path)


def gamma_search(k: int, max_len: int | None = None, *, workers: int = 1,
                 checkpoint_path: str | None = None, seed_depth: int | None = None,
                 checkpoint_every: int = 25) -> GammaReport:
    """Exhaustively compute gamma(k) with the number of maximal words.

    Exact for k <= 4; k >= 5 requires an explicit max_len (exploration only,
    reported as truncated when the cap is reached).  The canonical count is
    multiplied by k! for the total, since maximal words use all k letters.
    Work is split at a fixed seed depth, so reports are identical for any
    worker count, and the seed queue is checkpointed for resumption.
    """
    if k < 1:
        raise InputError("alphabet size must be positive")
    if k >= 5 and max_len is None:
        raise BudgetError(
            "gamma search beyond 4 letters is exploratory; pass max_len"
        )
    if k == 1:
        return GammaReport(1, 1, 1, 1, ((0,),), 1, True)
    window_gamma = _window_limits(k)
    if seed_depth is None:
        seed_depth = 6 if k <= 3 else 10
    if max_len is not None:
        seed_depth = min(seed_depth, max_len)

    checkpoint = _Checkpoint(checkpoint_path, k, max_len)
    state = checkpoint.load()
    if state is not None:
        best_len = state["best_len"]
        best_words = [tuple(w) for w in state["best_words"]]
        nodes = state["nodes"]
        truncated = state["truncated"]
        pending = [tuple(s) for s in state["pending"]]
    else:
        best_len, best_words, nodes, pending = _seed_phase(
            k, seed_depth, max_len, window_gamma
        )
        truncated = False
        checkpoint.save(pending, best_len, best_words, nodes, truncated)

    pending = list(pending)
    done_since_save = 0

    def finish_seed(result):
        nonlocal best_len, best_words, nodes, truncated
        sub_len, sub_words, sub_nodes, sub_trunc = result
        best_len, best_words = _merge_best(best_len, best_words, sub_len, sub_words)
        nodes += sub_nodes
        truncated = truncated or sub_trunc

    if workers > 1 and pending:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            while pending:
                batch = pending[: workers * 4]
                args = [(seed, k, max_len) for seed in batch]
                for result in pool.map(_explore_task, args):
                    finish_seed(result)
                pending = pending[len(batch) :]
                checkpoint.save(pending, best_len, best_words, nodes, truncated)
    else:
        while pending:
            seed = pending.pop()
            finish_seed(_explore(list(seed), k, max_len, window_gamma))
            done_since_save += 1
            if done_since_save >= checkpoint_every:
                checkpoint.save(pending, best_len, best_words, nodes, truncated)
                done_since_save = 0
    checkpoint.save([], best_len, best_words, nodes, truncated)

    words = tuple(sorted(set(best_words)))
    canonical_count = len(words)
    # renaming a canonical word with j distinct letters into the k-letter
    # alphabet gives k!/(k-j)! words; maximal words of a complete run use all
    # k letters, so this reduces to canonical_count * k!
    total = sum(
        _factorial(k) // _factorial(k - len(set(w))) for w in words
    )
    complete = not truncated
    return GammaReport(k, best_len, canonical_count, total, words, nodes, complete)
