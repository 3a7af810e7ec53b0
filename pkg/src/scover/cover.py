"""Subsequence-cover verification and coverage reports.

A word C is a subsequence cover (s-cover) of S when every position of S
lies on some occurrence of C as a subsequence of S.  The linear-time test
builds the leftmost and rightmost position-subsequences of C in S
(``first_occ``/``last_occ``) plus a per-position ``pref`` table; position i
is coverable exactly when ``pref[i] != -1`` and the rightmost embedding of
the remaining suffix starts beyond i.

Two independent brute-force oracles with the same report contract are kept
alongside the fast path so every verdict can be cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InputError
from .words import Word


@dataclass(frozen=True)
class OccurrenceTables:
    """Anchored occurrence tables of a candidate C in a text S.

    ``first_occ``/``last_occ`` are the lexicographically first/last
    position-subsequences spelling C, with first_occ[0] == 0 and
    last_occ[-1] == len(S) - 1.  ``pref[i]`` is the largest j with
    first_occ[j] <= i and S[first_occ[j]] == S[i], or -1.  Checks append a
    sentinel len(S) after last_occ.
    """

    first_occ: tuple[int, ...]
    last_occ: tuple[int, ...]
    pref: tuple[int, ...]


@dataclass(frozen=True)
class CoverReport:
    """Verdict plus per-position coverability for a (candidate, text) pair.

    ``witnesses[i]`` is an increasing position sequence spelling the
    candidate through position i (None when i is not coverable); the whole
    field is None when the candidate is not even a subsequence of the text.
    Tables are the greedy embeddings used, without anchoring requirements.
    """

    is_cover: bool
    covered: tuple[bool, ...]
    coverage: int
    witnesses: tuple[tuple[int, ...] | None, ...] | None = None
    first_occ: tuple[int, ...] | None = None
    last_occ: tuple[int, ...] | None = None
    pref: tuple[int, ...] | None = None


def _require_nonempty(cand: Word, text: Word) -> None:
    if len(cand) < 1 or len(text) < 1:
        raise InputError("cover operations need nonempty words")


def _greedy_first(cand: Word, text: Word) -> tuple[int, ...] | None:
    """Leftmost embedding of cand in text, or None if not a subsequence."""
    positions = []
    i = 0
    n = len(text)
    for letter in cand:
        while i < n and text[i] != letter:
            i += 1
        if i == n:
            return None
        positions.append(i)
        i += 1
    return tuple(positions)


def _greedy_last(cand: Word, text: Word) -> tuple[int, ...] | None:
    """Rightmost embedding of cand in text, or None if not a subsequence."""
    positions = []
    i = len(text) - 1
    for letter in reversed(cand):
        while i >= 0 and text[i] != letter:
            i -= 1
        if i < 0:
            return None
        positions.append(i)
        i -= 1
    positions.reverse()
    return tuple(positions)


def _pref_table(first_occ: tuple[int, ...], text: Word) -> list[int]:
    """pref[i] = max j such that first_occ[j] <= i and the letters match."""
    m = len(first_occ)
    pred = [-1] * (max(text) + 1)
    pref = [0] * len(text)
    k = 0
    for i, letter in enumerate(text):
        if i == first_occ[k]:
            pred[letter] = k
            if k < m - 1:
                k += 1
        pref[i] = pred[letter]
    return pref


def build_tables(cand: Word, text: Word) -> OccurrenceTables | None:
    """Occurrence tables for cand in text, or None when cand does not embed
    with first_occ starting at 0 and last_occ ending at the last position
    (in which case cand is certainly not an s-cover)."""
    _require_nonempty(cand, text)
    first_occ = _greedy_first(cand, text)
    if first_occ is None or first_occ[0] != 0:
        return None
    last_occ = _greedy_last(cand, text)
    assert last_occ is not None
    if last_occ[-1] != len(text) - 1:
        return None
    return OccurrenceTables(first_occ, last_occ, tuple(_pref_table(first_occ, text)))


def is_s_cover(cand: Word, text: Word) -> bool:
    """Linear-time test: is cand a subsequence cover of text?"""
    _require_nonempty(cand, text)
    n = len(text)
    first_occ = _greedy_first(cand, text)
    if first_occ is None or first_occ[0] != 0:
        return False
    last_occ = _greedy_last(cand, text)
    assert last_occ is not None
    if last_occ[-1] != n - 1:
        return False
    m = len(cand)
    pred = [-1] * (max(text) + 1)
    k = 0
    for i, letter in enumerate(text):
        if i == first_occ[k]:
            pred[letter] = k
            if k < m - 1:
                k += 1
        j = pred[letter]
        if j == -1:
            return False
        if j + 1 < m and last_occ[j + 1] <= i:
            return False
    return True


def cover_report(cand: Word, text: Word) -> CoverReport:
    """Full coverage report: which positions of text lie on an occurrence of
    cand, with one canonical witness occurrence per covered position.

    The witness for a covered position i is the length-pref[i] prefix of
    first_occ, then i, then the matching suffix of last_occ.  Coverage is 0
    when cand is not a subsequence of text.
    """
    _require_nonempty(cand, text)
    n = len(text)
    first_occ = _greedy_first(cand, text)
    if first_occ is None:
        return CoverReport(False, (False,) * n, 0)
    last_occ = _greedy_last(cand, text)
    assert last_occ is not None
    m = len(cand)
    pref = _pref_table(first_occ, text)
    covered = []
    witnesses: list[tuple[int, ...] | None] = []
    for i in range(n):
        j = pref[i]
        ok = j != -1 and (j + 1 >= m or last_occ[j + 1] > i)
        covered.append(ok)
        witnesses.append(first_occ[:j] + (i,) + last_occ[j + 1 :] if ok else None)
    coverage = sum(covered)
    return CoverReport(
        is_cover=coverage == n,
        covered=tuple(covered),
        coverage=coverage,
        witnesses=tuple(witnesses),
        first_occ=first_occ,
        last_occ=last_occ,
        pref=tuple(pref),
    )


def oracle_split(cand: Word, text: Word) -> CoverReport:
    """Independent quadratic oracle with the cover_report contract.

    Position i is coverable iff for some j with cand[j] == text[i] the
    prefix cand[:j] embeds in text[:i] and the suffix cand[j+1:] embeds in
    text[i+1:].  Embeddability thresholds are computed by direct greedy
    scans; no pref table is involved.
    """
    _require_nonempty(cand, text)
    m, n = len(cand), len(text)
    if m * n > 10**7:
        raise InputError("oracle_split size guard exceeded (|C|*|S| > 1e7)")
    # prefix_need[j]: least number of leading text letters containing cand[:j]
    prefix_need = [0] * (m + 1)
    i = 0
    for j, letter in enumerate(cand):
        while i < n and text[i] != letter:
            i += 1
        if i == n:
            prefix_need[j + 1 :] = [n + 1] * (m - j)
            break
        i += 1
        prefix_need[j + 1] = i
    # suffix_start[j]: greatest position p such that cand[j:] embeds in text[p:]
    suffix_start = [-1] * (m + 1)
    suffix_start[m] = n
    i = n - 1
    for j in range(m - 1, -1, -1):
        letter = cand[j]
        while i >= 0 and text[i] != letter:
            i -= 1
        if i < 0:
            break
        suffix_start[j] = i
        i -= 1
    covered = []
    witnesses: list[tuple[int, ...] | None] = []
    for i in range(n):
        hit = None
        for j in range(m):
            if cand[j] == text[i] and prefix_need[j] <= i and suffix_start[j + 1] > i:
                hit = j
                break
        covered.append(hit is not None)
        if hit is None:
            witnesses.append(None)
        else:
            left = _greedy_first(cand[:hit], text[:i]) or ()
            right = _greedy_last(cand[hit + 1 :], text[i + 1 :]) or ()
            witnesses.append(left + (i,) + tuple(p + i + 1 for p in right))
    coverage = sum(covered)
    is_subsequence = prefix_need[m] <= n
    return CoverReport(
        is_cover=coverage == n,
        covered=tuple(covered),
        coverage=coverage,
        witnesses=tuple(witnesses) if is_subsequence else None,
    )


def oracle_enumerate(cand: Word, text: Word) -> CoverReport:
    """Ground-truth oracle: enumerate every subsequence occurrence of cand in
    text and take the union of the position sets."""
    _require_nonempty(cand, text)
    n = len(text)
    if n > 18:
        raise InputError("oracle_enumerate size guard exceeded (|S| > 18)")
    m = len(cand)
    covered = [False] * n
    witnesses: list[tuple[int, ...] | None] = [None] * n
    found_any = False
    path: list[int] = []

    def extend(ci: int, start: int) -> None:
        nonlocal found_any
        if ci == m:
            found_any = True
            for p in path:
                if not covered[p]:
                    covered[p] = True
                    witnesses[p] = tuple(path)
            return
        # remaining letters must still fit
        for p in range(start, n - (m - ci) + 1):
            if text[p] == cand[ci]:
                path.append(p)
                extend(ci + 1, p + 1)
                path.pop()

    extend(0, 0)
    coverage = sum(covered)
    return CoverReport(
        is_cover=coverage == n,
        covered=tuple(covered),
        coverage=coverage,
        witnesses=tuple(witnesses) if found_any else None,
    )


@dataclass(frozen=True)
class ShuffleExpansion:
    """Duplication of text positions turning a covered word into a disjoint
    interleaving of copies of the cover.

    ``multiplicities[i]`` counts the witness occurrences through position i;
    the expanded word repeats each letter that many times, and ``parts``
    partitions its positions into increasing sequences each spelling the
    cover.
    """

    multiplicities: tuple[int, ...]
    expanded: Word
    parts: tuple[tuple[int, ...], ...]


def shuffle_expand(cand: Word, text: Word) -> ShuffleExpansion:
    """Realize a covered text as a shuffle power of its cover.

    Takes the canonical witness set from cover_report (one occurrence per
    position, deduplicated), repeats text[i] once per witness through i, and
    reassigns each witness to distinct copies, which yields an exact
    partition into occurrences of cand.  Raises InputError when cand is not
    an s-cover of text.
    """
    report = cover_report(cand, text)
    if not report.is_cover:
        raise InputError("shuffle_expand requires an s-cover")
    assert report.witnesses is not None
    witness_set = sorted({w for w in report.witnesses if w is not None})
    n = len(text)
    mult = [0] * n
    for witness in witness_set:
        for p in witness:
            mult[p] += 1
    offsets = [0] * (n + 1)
    for i in range(n):
        offsets[i + 1] = offsets[i] + mult[i]
    expanded = tuple(text[i] for i in range(n) for _ in range(mult[i]))
    next_copy = offsets[:n]
    parts = []
    for witness in witness_set:
        part = []
        for p in witness:
            part.append(next_copy[p])
            next_copy[p] += 1
        parts.append(tuple(part))
    return ShuffleExpansion(tuple(mult), expanded, tuple(parts))
