"""Reduced words over the four involutive generators.

The group is the free product of four copies of Z/2 generated by
A, B, C, D. A word is stored in display order ("AB" is the letter A
followed by the letter B); the path action reads it right to left, so
the last letter of the string acts first. Reduction only ever cancels
adjacent equal letters, and the reduced form is unique.
"""

from __future__ import annotations

from .colors import COLOR_NAMES, color_from_name

Word = tuple[int, ...]

IDENTITY: Word = ()


def word_from_string(s: str) -> Word:
    return tuple(color_from_name(ch) for ch in s)


def word_to_string(w: Word) -> str:
    return "".join(COLOR_NAMES[c] for c in w)


def is_reduced(w: Word) -> bool:
    return all(w[i] != w[i + 1] for i in range(len(w) - 1))


def reduce(letters) -> Word:
    """Free-product normal form: cancel adjacent equal letters until none remain.

    A stack pass is enough: pushing a letter equal to the top cancels
    both, and no earlier cancellation can be re-enabled later without
    the top changing, which the stack tracks.
    """
    out: list[int] = []
    for c in letters:
        if out and out[-1] == c:
            out.pop()
        else:
            out.append(c)
    return tuple(out)


def concat(u: Word, v: Word) -> Word:
    return reduce(u + v)


def words_of_length(length: int, alphabet=range(4)):
    """All reduced words of exactly this length, lexicographic order."""
    if length == 0:
        yield IDENTITY
        return
    alphabet = list(alphabet)

    def rec(prefix: list[int]):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for c in alphabet:
            if prefix and prefix[-1] == c:
                continue
            prefix.append(c)
            yield from rec(prefix)
            prefix.pop()

    yield from rec([])


def enumerate_words(alphabet=range(4)):
    """Nonempty reduced words in length-then-lexicographic order: A, B, C, D, AB, AC, AD, BA, ..."""
    length = 1
    while True:
        yield from words_of_length(length, alphabet)
        length += 1


def nth_word(n: int) -> Word:
    """The n-th nonempty reduced word (1-based) in length-then-lex order.

    Counting: there are 4*3^(L-1) reduced words of length L. Within a
    length the ranking is mixed-radix: first letter from 4 choices, each
    later letter from the 3 letters different from its predecessor, in
    ascending color order.
    """
    if n < 1:
        raise ValueError("word index is 1-based")
    remaining = n - 1
    length = 1
    count = 4
    while remaining >= count:
        remaining -= count
        length += 1
        count *= 3
    # digits of `remaining` in radix 4, 3, 3, ...
    digits = []
    for pos in range(length):
        radix = 4 if pos == 0 else 3
        count //= radix
        digits.append(remaining // count)
        remaining %= count
    letters = [digits[0]]
    for d in digits[1:]:
        options = [c for c in range(4) if c != letters[-1]]
        letters.append(options[d])
    return tuple(letters)
