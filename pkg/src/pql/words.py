"""Free-group words over an indexed alphabet.

A letter is a nonzero integer: ``+(i + 1)`` for generator ``i`` and
``-(i + 1)`` for its inverse.  A :class:`Word` is always freely reduced.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence


class Letter(NamedTuple):
    generator_index: int
    sign: int

    def encode(self) -> int:
        return self.sign * (self.generator_index + 1)

    @classmethod
    def decode(cls, code: int) -> "Letter":
        return cls(abs(code) - 1, 1 if code > 0 else -1)


class AlphabetMismatch(ValueError):
    pass


def _free_reduce(codes: Iterable[int]) -> tuple[int, ...]:
    stack: list[int] = []
    for c in codes:
        if stack and stack[-1] == -c:
            stack.pop()
        else:
            stack.append(c)
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    rank: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        for c in self.letters:
            if c == 0 or abs(c) > self.rank:
                raise ValueError(f"letter {c} outside alphabet of rank {self.rank}")
        if _free_reduce(self.letters) != self.letters:
            raise ValueError("Word letters must be freely reduced; use reduce()")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return invert(self) ** -k
        out = identity(self.rank)
        for _ in range(k):
            out = multiply(out, self)
        return out

    def is_identity(self) -> bool:
        return not self.letters

    def letter_pairs(self) -> list[Letter]:
        return [Letter.decode(c) for c in self.letters]


def identity(rank: int) -> Word:
    return Word(rank, ())


def generator(rank: int, index: int, sign: int = 1) -> Word:
    return Word(rank, (sign * (index + 1),))


def reduce(rank: int, raw: Iterable[int | Letter]) -> Word:
    """Freely reduce a raw letter sequence (stack scan, linear time)."""
    codes = [c.encode() if isinstance(c, Letter) else int(c) for c in raw]
    return Word(rank, _free_reduce(codes))


def _check_rank(w1: Word, w2: Word) -> None:
    if w1.rank != w2.rank:
        raise AlphabetMismatch(f"rank {w1.rank} vs rank {w2.rank}")


def multiply(w1: Word, w2: Word) -> Word:
    _check_rank(w1, w2)
    left = list(w1.letters)
    right = w2.letters
    i = 0
    while left and i < len(right) and left[-1] == -right[i]:
        left.pop()
        i += 1
    return Word(w1.rank, tuple(left) + right[i:])


def product(rank: int, words: Iterable[Word]) -> Word:
    out = identity(rank)
    for w in words:
        out = multiply(out, w)
    return out


def invert(w: Word) -> Word:
    return Word(w.rank, tuple(-c for c in reversed(w.letters)))


def commutator(w1: Word, w2: Word) -> Word:
    _check_rank(w1, w2)
    return product(w1.rank, (w1, w2, invert(w1), invert(w2)))


def cyclic_reduce(w: Word) -> Word:
    letters = w.letters
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    return Word(w.rank, letters[i : j + 1])


def conjugacy_equal(w1: Word, w2: Word) -> bool:
    """Free-group conjugacy: cyclic reductions are rotations of each other."""
    _check_rank(w1, w2)
    c1 = cyclic_reduce(w1).letters
    c2 = cyclic_reduce(w2).letters
    if len(c1) != len(c2):
        return False
    if not c1:
        return True
    doubled = c2 + c2
    n = len(c1)
    return any(doubled[k : k + n] == c1 for k in range(n))


def exponent_sums(w: Word) -> list[int]:
    sums = [0] * w.rank
    for c in w.letters:
        sums[abs(c) - 1] += 1 if c > 0 else -1
    return sums


# --- string form: "a1 b1 A1 B1", capital letter = inverse -------------------

def surface_names(genus: int) -> list[str]:
    names = []
    for i in range(1, genus + 1):
        names += [f"a{i}", f"b{i}"]
    return names


FREE2_NAMES = ["a", "b"]


def format_word(w: Word, names: Sequence[str] | None = None) -> str:
    if names is None:
        names = default_names(w.rank)
    if len(names) != w.rank:
        raise AlphabetMismatch(f"{len(names)} names for rank {w.rank}")
    out = []
    for c in w.letters:
        name = names[abs(c) - 1]
        out.append(name if c > 0 else name[0].upper() + name[1:])
    return " ".join(out)


def parse_word(text: str, names: Sequence[str]) -> Word:
    lookup = {}
    for i, name in enumerate(names):
        lookup[name] = i + 1
        lookup[name[0].upper() + name[1:]] = -(i + 1)
    codes = []
    for token in text.split():
        if token not in lookup:
            raise ValueError(f"unknown letter {token!r}")
        codes.append(lookup[token])
    return reduce(len(names), codes)


def default_names(rank: int) -> list[str]:
    if rank == 2:
        return list(FREE2_NAMES)
    if rank % 2 == 0:
        return surface_names(rank // 2)
    return [f"x{i}" for i in range(1, rank + 1)]
