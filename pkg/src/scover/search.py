"""Shortest subsequence covers, s-primitivity testing, and cover counting.

Candidate covers are enumerated depth first by increasing length and, per
length, in lexicographic order over normalized letters, so single-witness
results are deterministic.  Every s-cover of a text starts with its first
letter, ends with its last letter, contains its whole alphabet, introduces
letters in the same first-occurrence order, and a shortest one is itself
s-primitive (hence square-free with no equal adjacent letters); the
corresponding prunings never change verdicts, only running time, and the
two aggressive ones can be switched off for cross-checking.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

from . import _engine
from .cover import is_s_cover
from .errors import BudgetError, InputError, UnsupportedAlphabetError
from .words import Word, canonicalize, first_word

# Exact maximal s-primitive lengths for small alphabets; the values are
# reproduced by extremal.gamma_search and pinned in the test suite.
KNOWN_GAMMA = {1: 1, 2: 3, 3: 8, 4: 19}

_DEFAULT_NODE_BUDGET = 5_000_000


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for the candidate search.

    The pruning flags are sound (they cannot exclude an actual s-cover), so
    they affect speed only.  ``max_candidate_len`` bounds the explored
    candidate length; ``enumerate_all``/``count_only`` request the full set
    or just the number of shortest covers.
    """

    prune_square_free: bool = True
    prune_subsequence: bool = True
    max_candidate_len: int | None = None
    enumerate_all: bool = False
    count_only: bool = False


@dataclass(frozen=True)
class ShortestResult:
    length: int
    witness: Word
    all: tuple[Word, ...] | None = None
    count: int | None = None


@dataclass(frozen=True)
class PrimitivityResult:
    primitive: bool
    witness: Word | None = None

    def __bool__(self) -> bool:
        return self.primitive


@dataclass(frozen=True)
class UniqueLetterDecomposition:
    """Split of a word at a letter occurring exactly once: the s-covers of
    the whole word are exactly left-cover + letter + right-cover."""

    position: int
    letter: int
    left: Word
    right: Word


def _require_nonempty(word: Word) -> None:
    if len(word) < 1:
        raise InputError("operation needs a nonempty word")


def _renamer(word: Word):
    """Map letters of the canonical form back to the word's own letters."""
    order = first_word(word)
    return lambda canon: tuple(order[c] for c in canon)


class _Candidates:
    """Depth-first enumeration of cover candidates for one canonical text."""

    def __init__(self, text: Word, square_free: bool, subseq: bool):
        self.text = text
        self.n = len(text)
        self.k = max(text) + 1
        self.square_free = square_free
        self.subseq = subseq
        self.next_t = _engine.next_table(text, self.k) if subseq else None
        self.full_mask = (1 << self.k) - 1
        self.last_letter = text[-1]

    def run(self, length: int, on_candidate, forced_prefix: Word = (),
            budget: list | None = None) -> bool:
        """Visit candidates of exactly ``length`` letters in lex order; stop
        early when ``on_candidate`` returns True.  ``forced_prefix`` pins the
        first letters (used by the parallel partitioning)."""
        text, n, k = self.text, self.n, self.k
        if length < 1 or (forced_prefix and forced_prefix[0] != text[0]):
            return False
        nxt = self.next_t
        cand = [text[0]]

        def has_square_at(d: int) -> bool:
            for half in range(2, (d + 1) // 2 + 1):
                lo = d + 1 - 2 * half
                for t in range(half):
                    if cand[lo + t] != cand[lo + half + t]:
                        break
                else:
                    return True
            return False

        def rec(depth: int, mask: int, frontier: int, placed: int) -> bool:
            if budget is not None:
                budget[0] -= 1
                if budget[0] < 0:
                    raise BudgetError("candidate search budget exhausted")
            if depth == length:
                if mask == self.full_mask and cand[-1] == self.last_letter:
                    return on_candidate(tuple(cand))
                return False
            if self.k - placed > length - depth:
                return False
            prev_letter = cand[-1]
            if depth < len(forced_prefix):
                letters = (forced_prefix[depth],)
            elif self.subseq:
                letters = range(min(placed, k - 1) + 1)
            else:
                letters = range(k)
            for x in letters:
                if x == prev_letter:
                    continue
                if self.subseq:
                    p = nxt[frontier][x]
                    if p >= n:
                        continue
                    if any(not (mask >> text[i]) & 1 for i in range(frontier, p)):
                        continue
                    new_frontier = p + 1
                else:
                    new_frontier = frontier
                cand.append(x)
                if self.square_free and has_square_at(depth):
                    cand.pop()
                    continue
                stop = rec(depth + 1, mask | (1 << x), new_frontier,
                           placed + (0 if (mask >> x) & 1 else 1))
                cand.pop()
                if stop:
                    return True
            return False

        return rec(1, 1 << text[0], 1, 1)


def _collect_at_length(cands: _Candidates, text: Word, length: int,
                       all_of_them: bool, forced_prefix: Word = (),
                       budget: list | None = None) -> list[Word]:
    found: list[Word] = []

    def check(candidate: Word) -> bool:
        if is_s_cover(candidate, text):
            found.append(candidate)
            return not all_of_them
        return False

    cands.run(length, check, forced_prefix, budget)
    return found


def _shortest_canonical(text: Word, cfg: SearchConfig,
                        forced_prefix: Word = (),
                        budget: list | None = None) -> tuple[int, list[Word]] | None:
    """Smallest candidate length admitting an s-cover, with the covers found
    at that length (all of them when the config asks for sets/counts)."""
    n = len(text)
    k = max(text) + 1
    cap = n - 1 if cfg.max_candidate_len is None else min(cfg.max_candidate_len, n - 1)
    want_all = cfg.enumerate_all or cfg.count_only
    cands = _Candidates(text, cfg.prune_square_free, cfg.prune_subsequence)
    for length in range(k, cap + 1):
        found = _collect_at_length(cands, text, length, want_all,
                                   forced_prefix, budget)
        if found:
            return length, found
    return None


def _subtree_task(args) -> tuple[int, list[Word]] | None:
    text, cfg, prefix = args
    return _shortest_canonical(text, cfg, forced_prefix=prefix)


def _partition_prefixes(text: Word, cfg: SearchConfig, min_count: int) -> list[Word]:
    """Short candidate prefixes partitioning the tree for the parallel mode.

    Candidates shorter than a prefix are revisited by several tasks; the
    merge deduplicates, so the partition only needs to cover the tree.
    """
    k = max(text) + 1
    prefixes: list[Word] = [(text[0],)]
    while len(prefixes) < min_count and len(prefixes[0]) < 3:
        level: list[Word] = []
        for prefix in prefixes:
            placed = len(set(prefix))
            letters = range(min(placed, k - 1) + 1) if cfg.prune_subsequence else range(k)
            level.extend(prefix + (x,) for x in letters if x != prefix[-1])
        if not level:
            break
        prefixes = level
    return prefixes


def shortest_s_cover(word: Word, config: SearchConfig | None = None, *,
                     workers: int = 1) -> ShortestResult:
    """A shortest s-cover of the word (deterministically the lexicographically
    first on normalized letters), optionally with the full set or count of
    shortest covers, optionally searching subtrees in parallel.

    Raises BudgetError when ``max_candidate_len`` is set below the actual
    shortest length, since exhaustion then proves nothing.
    """
    _require_nonempty(word)
    cfg = config or SearchConfig()
    canon = canonicalize(word)
    rename = _renamer(word)
    n = len(canon)
    k = max(canon) + 1

    hit: tuple[int, list[Word]] | None = None
    if workers > 1 and n > 2 and k > 1:
        # candidates shorter than 3 first, then one task per depth-2 prefix
        cap = n - 1 if cfg.max_candidate_len is None else min(cfg.max_candidate_len, n - 1)
        want_all = cfg.enumerate_all or cfg.count_only
        cands = _Candidates(canon, cfg.prune_square_free, cfg.prune_subsequence)
        for length in range(k, min(2, cap) + 1):
            found = _collect_at_length(cands, canon, length, want_all)
            if found:
                hit = length, found
                break
        if hit is None:
            tasks = [(canon, cfg, p)
                     for p in _partition_prefixes(canon, cfg, 2 * workers)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_subtree_task, tasks))
            best = [r for r in results if r is not None]
            if best:
                length = min(r[0] for r in best)
                merged = sorted({w for r in best if r[0] == length for w in r[1]})
                hit = length, merged
    else:
        hit = _shortest_canonical(canon, cfg)

    if hit is None:
        cap = cfg.max_candidate_len
        if cap is not None and cap < n - 1:
            raise BudgetError("no s-cover found within max_candidate_len")
        every = (word,) if cfg.enumerate_all else None
        return ShortestResult(n, word, every, 1 if (cfg.enumerate_all or cfg.count_only) else None)

    length, found = hit
    found = sorted(found)
    witnesses = tuple(rename(c) for c in found)
    return ShortestResult(
        length,
        witnesses[0],
        witnesses if cfg.enumerate_all else None,
        len(witnesses) if (cfg.enumerate_all or cfg.count_only) else None,
    )


@lru_cache(maxsize=1 << 16)
def _primitive_canonical(canon: Word, budget: int | None) -> tuple[bool, Word | None]:
    n = len(canon)
    if n == 1:
        return True, None
    k = max(canon) + 1
    if k <= 4 and n > KNOWN_GAMMA[k]:
        # long words over small alphabets always reduce through their prefix
        head_len = KNOWN_GAMMA[k] + 1
        head = canon[:head_len]
        short = shortest_s_cover(head)
        return False, short.witness + canon[head_len:]
    split = decompose_unique_letter(canon)
    if split is not None:
        left_ok, left_wit = (True, None) if not split.left else _primitive_raw(split.left, budget)
        if not left_ok:
            return False, left_wit + (split.letter,) + split.right
        right_ok, right_wit = (True, None) if not split.right else _primitive_raw(split.right, budget)
        if not right_ok:
            return False, split.left + (split.letter,) + right_wit
        return True, None
    node_budget = budget
    if node_budget is None and k > 4:
        node_budget = _DEFAULT_NODE_BUDGET
    if not _engine.cover_exists(canon, budget=node_budget):
        return True, None
    witness = shortest_s_cover(canon).witness
    return False, witness


def _primitive_raw(word: Word, budget: int | None) -> tuple[bool, Word | None]:
    canon = canonicalize(word)
    primitive, witness = _primitive_canonical(canon, budget)
    if primitive or witness is None:
        return primitive, None
    rename = _renamer(word)
    return False, rename(witness)


def is_s_primitive(word: Word, *, budget: int | None = None) -> PrimitivityResult:
    """Whether the word has no s-cover shorter than itself; when it does, the
    result carries a non-trivial cover as witness.

    Words over more than four letters go through unique-letter decomposition
    where possible and otherwise hit the exhaustive search, which raises
    BudgetError beyond the (configurable) node budget.
    """
    _require_nonempty(word)
    primitive, witness = _primitive_raw(word, budget)
    return PrimitivityResult(primitive, witness)


def decompose_unique_letter(word: Word) -> UniqueLetterDecomposition | None:
    """Split the word at the leftmost letter occurring exactly once."""
    counts: dict[int, int] = {}
    for letter in word:
        counts[letter] = counts.get(letter, 0) + 1
    for position, letter in enumerate(word):
        if counts[letter] == 1:
            return UniqueLetterDecomposition(
                position, letter, word[:position], word[position + 1 :]
            )
    return None


def reduce_to_bounded_cover(word: Word) -> Word:
    """An s-cover of the word no longer than the maximal s-primitive length
    for its alphabet size (known up to four letters).

    Repeatedly replaces the current head by a shortest cover of the head,
    keeping the untouched tail, until the head is s-primitive.
    """
    _require_nonempty(word)
    k = len(set(word))
    if k > 4:
        raise UnsupportedAlphabetError(
            "bounded-cover reduction needs the exact bound, unknown for more than 4 letters"
        )
    gamma = KNOWN_GAMMA[k]
    current = word
    while True:
        head = current[: gamma + 1]
        shortest = shortest_s_cover(head)
        if shortest.length == len(head):
            return current
        current = shortest.witness + current[gamma + 1 :]


def count_shortest_s_covers(word: Word, *, max_leaf_len: int = 18) -> int:
    """Exact number of distinct shortest s-covers.

    Factors through letters occurring exactly once (counts multiply across
    the two sides); remaining blocks are counted by direct enumeration when
    they are at most ``max_leaf_len`` letters long, else BudgetError.
    """
    _require_nonempty(word)
    return _count_shortest(word, max_leaf_len)


def _count_shortest(word: Word, max_leaf_len: int) -> int:
    if len(word) <= 1:
        return 1
    split = decompose_unique_letter(word)
    if split is not None:
        left = _count_shortest(split.left, max_leaf_len) if split.left else 1
        right = _count_shortest(split.right, max_leaf_len) if split.right else 1
        return left * right
    if len(word) > max_leaf_len:
        raise BudgetError(
            "word too long for direct shortest-cover counting and it has no unique letter"
        )
    return shortest_s_cover(word, SearchConfig(count_only=True)).count


def shortest_length_of(word: Word, *, max_leaf_len: int = 18) -> int:
    """Length of a shortest s-cover, via the same unique-letter factoring."""
    _require_nonempty(word)
    if len(word) == 1:
        return 1
    split = decompose_unique_letter(word)
    if split is not None:
        left = shortest_length_of(split.left, max_leaf_len=max_leaf_len) if split.left else 0
        right = shortest_length_of(split.right, max_leaf_len=max_leaf_len) if split.right else 0
        return left + 1 + right
    if len(word) > max_leaf_len:
        raise BudgetError("word too long for direct shortest-cover search")
    return shortest_s_cover(word).length
