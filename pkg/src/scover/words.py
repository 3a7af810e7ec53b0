"""Word representation and structural predicates.

Words are tuples of nonnegative integer letter ids.  Parsing normalizes
external tokens to dense ids numbered by first occurrence, so every
predicate downstream is invariant under renaming of letters by
construction.  This module also provides the square/gapped-repeat
detectors used as fast non-primitivity witnesses and the classic
generator families (Zimin words).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from string import ascii_lowercase

from .errors import InputError

Word = tuple[int, ...]

_TOKEN_SPLIT = re.compile(r"[,\s]+")


@dataclass(frozen=True)
class AlphabetMap:
    """Bijection between external tokens and dense letter ids.

    ``tokens[i]`` is the external spelling of letter id ``i``; the tuple is
    ordered by first occurrence in the parsed input, so parse followed by
    render reproduces the input token sequence.
    """

    tokens: tuple[str, ...]
    mode: str = "chars"

    def id_for(self, token: str) -> int:
        return self.tokens.index(token)

    def token_for(self, letter: int) -> str:
        return self.tokens[letter]

    def render(self, word: Word) -> str:
        parts = [self.tokens[letter] for letter in word]
        return "".join(parts) if self.mode == "chars" else ",".join(parts)


def parse_word(text: str, mode: str = "chars") -> tuple[Word, AlphabetMap]:
    """Parse text into a word over dense ids numbered by first occurrence.

    ``chars`` mode treats each printable non-blank ASCII character as one
    letter; ``tokens`` mode splits on commas and/or whitespace.
    """
    if mode == "chars":
        if not text:
            raise InputError("empty word")
        for ch in text:
            if not (33 <= ord(ch) <= 126):
                raise InputError(f"invalid character {ch!r} in chars mode")
        tokens = list(text)
    elif mode == "tokens":
        tokens = [t for t in _TOKEN_SPLIT.split(text) if t]
        if not tokens:
            raise InputError("empty word")
    else:
        raise InputError(f"unknown parse mode {mode!r}")
    ids: dict[str, int] = {}
    letters = []
    for tok in tokens:
        if tok not in ids:
            ids[tok] = len(ids)
        letters.append(ids[tok])
    return tuple(letters), AlphabetMap(tuple(ids), mode)


def render_word(word: Word) -> str:
    """Canonical rendering: letters a,b,c,... when at most 26 ids are used,
    comma-separated integers otherwise."""
    if not word:
        return ""
    if max(word) < 26:
        return "".join(ascii_lowercase[letter] for letter in word)
    return ",".join(str(letter) for letter in word)


def canonicalize(word: Word) -> Word:
    """Rename letters to 0,1,2,... in order of first occurrence (idempotent)."""
    ids: dict[int, int] = {}
    out = []
    for letter in word:
        if letter not in ids:
            ids[letter] = len(ids)
        out.append(ids[letter])
    return tuple(out)


def alphabet(word: Word) -> frozenset[int]:
    return frozenset(word)


def first_word(word: Word) -> Word:
    """Letters of the word listed in order of their first occurrence."""
    if not word:
        raise InputError("first_word of empty word")
    seen: dict[int, None] = {}
    for letter in word:
        if letter not in seen:
            seen[letter] = None
    return tuple(seen)


def last_word(word: Word) -> Word:
    """Letters of the word listed in order of their last occurrence."""
    if not word:
        raise InputError("last_word of empty word")
    seen: dict[int, None] = {}
    for letter in reversed(word):
        if letter not in seen:
            seen[letter] = None
    return tuple(reversed(seen))


def find_square(word: Word) -> tuple[int, int] | None:
    """Leftmost nonempty square factor XX, as (start, total length).

    Starts are scanned left to right and, per start, shorter squares first.
    Returns None when the word is square-free.
    """
    n = len(word)
    for start in range(n - 1):
        max_half = (n - start) // 2
        for half in range(1, max_half + 1):
            if word[start : start + half] == word[start + half : start + 2 * half]:
                return start, 2 * half
    return None


def is_square_free(word: Word) -> bool:
    return find_square(word) is None


@dataclass(frozen=True)
class GappedRepeatWitness:
    """A factor U V U with Alph(V) a subset of Alph(U); v_len == 0 is a square.

    Such a factor always admits U as a cover of itself, so its presence
    certifies that the whole word has a non-trivial subsequence cover.
    """

    start: int
    u_len: int
    v_len: int

    @property
    def stop(self) -> int:
        return self.start + 2 * self.u_len + self.v_len


def find_gapped_repeat_cover(
    word: Word, max_u_len: int | None = None
) -> GappedRepeatWitness | None:
    """Search for a factor U V U with Alph(V) a subset of Alph(U).

    Squares (empty V) are reported first, via the leftmost-square scan.
    The search is exhaustive unless ``max_u_len`` caps the length of U;
    words up to length 64 are cheap to scan exhaustively.
    """
    square = find_square(word)
    if square is not None:
        start, length = square
        return GappedRepeatWitness(start, length // 2, 0)
    n = len(word)
    u_cap = n // 2 if max_u_len is None else min(max_u_len, n // 2)
    for u_len in range(1, u_cap + 1):
        for start in range(n - 2 * u_len):
            u = word[start : start + u_len]
            u_alph = set(u)
            for v_len in range(1, n - start - 2 * u_len + 1):
                mid_end = start + u_len + v_len
                if word[mid_end : mid_end + u_len] != u:
                    continue
                if set(word[start + u_len : mid_end]) <= u_alph:
                    return GappedRepeatWitness(start, u_len, v_len)
    return None


def find_abxbc_factor(word: Word) -> tuple[int, int] | None:
    """Find a factor a b X b c with a, b, c pairwise distinct and X a (possibly
    empty) word over {a, b, c}, returned as a (start, stop) span.

    Any such factor has the three-letter word abc as a subsequence cover, so
    on ternary words this detects exactly the structure that forces a
    non-trivial cover.
    """
    n = len(word)
    for i in range(n - 3):
        a, b = word[i], word[i + 1]
        if a == b:
            continue
        extra = -1  # the single letter outside {a, b} allowed inside X
        for j in range(i + 2, n - 1):
            # candidate factor word[i : j + 2] with the trailing pair (b, c)
            if word[j] == b:
                c = word[j + 1]
                if c != a and c != b and (extra == -1 or extra == c):
                    return i, j + 2
            prev = word[j]
            if prev != a and prev != b:
                if extra == -1:
                    extra = prev
                elif extra != prev:
                    break
    return None


def zimin(k: int) -> Word:
    """The k-th Zimin word over ids 0..k-1; id i-1 plays the classic letter i.

    Defined by w(1) = 0 and w(i) = w(i-1) + (i-1) + w(i-1); length 2**k - 1.
    """
    if not 1 <= k <= 26:
        raise InputError("zimin index must be between 1 and 26")
    word: Word = (0,)
    for letter in range(1, k):
        word = word + (letter,) + word
    return word
