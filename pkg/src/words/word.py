import re
import string
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple


@dataclass(frozen=True)
class Alphabet:
    names: Tuple[str, ...]

    def __post_init__(self):
        if len(self.names) < 1:
            raise ValueError("Alphabet needs at least one generator")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"Generator names must be distinct, got {self.names}")
        for name in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ValueError(f"Invalid generator name: {name!r}")

    @property
    def size(self) -> int:
        return len(self.names)

    @classmethod
    def of_size(cls, size: int) -> "Alphabet":
        if size < 1:
            raise ValueError(f"Alphabet size must be positive, got {size}")
        if size <= 26:
            return cls(tuple(string.ascii_lowercase[:size]))
        return cls(tuple(f"x{i}" for i in range(size)))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValueError(f"Unknown generator {name!r} for alphabet {self.names}")

    def letters(self) -> List["Letter"]:
        """All letters in shortlex order: a, a^-1, b, b^-1, ..."""
        return [Letter(g, e) for g in range(self.size) for e in (1, -1)]


@dataclass(frozen=True, order=True)
class Letter:
    generator: int
    exponent: int

    def __post_init__(self):
        if self.generator < 0:
            raise ValueError(f"Generator index must be non-negative, got {self.generator}")
        if self.exponent not in (1, -1):
            raise ValueError(f"Letter exponent must be +1 or -1, got {self.exponent}")

    def inverse(self) -> "Letter":
        return Letter(self.generator, -self.exponent)

    @property
    def code(self) -> int:
        # a -> 0, a^-1 -> 1, b -> 2, ...; code ^ 1 is the inverse letter
        return 2 * self.generator + (0 if self.exponent == 1 else 1)

    @classmethod
    def from_code(cls, code: int) -> "Letter":
        return cls(code // 2, 1 if code % 2 == 0 else -1)


@dataclass(frozen=True)
class Word:
    """A freely reduced word over an alphabet. Construct through `reduce` for raw input."""
    letters: Tuple[Letter, ...]
    alphabet: Alphabet

    def __post_init__(self):
        for letter in self.letters:
            if letter.generator >= self.alphabet.size:
                raise ValueError(f"Letter {letter} out of range for alphabet of size {self.alphabet.size}")
        for left, right in zip(self.letters, self.letters[1:]):
            if left.generator == right.generator and left.exponent == -right.exponent:
                raise ValueError(f"Word is not freely reduced: {format_word_letters(self.letters, self.alphabet)}")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __str__(self) -> str:
        return format_word(self)

    def is_empty(self) -> bool:
        return not self.letters

    def inverse(self) -> "Word":
        return invert(self)

    def codes(self) -> Tuple[int, ...]:
        return tuple(letter.code for letter in self.letters)


def _free_reduce(raw: Iterable[Letter]) -> List[Letter]:
    stack: List[Letter] = []
    for letter in raw:
        if stack and stack[-1].generator == letter.generator and stack[-1].exponent == -letter.exponent:
            stack.pop()
        else:
            stack.append(letter)
    return stack


def reduce(raw: Sequence[Letter], alphabet: Alphabet) -> Word:
    return Word(tuple(_free_reduce(raw)), alphabet)


def empty_word(alphabet: Alphabet) -> Word:
    return Word((), alphabet)


def concat(u: Word, v: Word) -> Word:
    if u.alphabet != v.alphabet:
        raise ValueError(f"Alphabet mismatch: {u.alphabet.names} vs {v.alphabet.names}")
    return reduce(u.letters + v.letters, u.alphabet)


def invert(u: Word) -> Word:
    return Word(tuple(letter.inverse() for letter in reversed(u.letters)), u.alphabet)


def power(u: Word, n: int) -> Word:
    if n < 0:
        return power(invert(u), -n)
    return reduce(u.letters * n, u.alphabet)


def exponent_sums(u: Word) -> List[int]:
    sums = [0] * u.alphabet.size
    for letter in u.letters:
        sums[letter.generator] += letter.exponent
    return sums


def enumerate_words(alphabet: Alphabet, max_len: int) -> List[Word]:
    """All reduced words of length <= max_len, shortlex order."""
    if max_len < 0:
        raise ValueError(f"max_len must be non-negative, got {max_len}")
    letters = alphabet.letters()
    layer: List[Tuple[Letter, ...]] = [()]
    words = [Word((), alphabet)]
    for _ in range(max_len):
        next_layer = []
        for prefix in layer:
            for letter in letters:
                if prefix and prefix[-1] == letter.inverse():
                    continue
                next_layer.append(prefix + (letter,))
        words.extend(Word(w, alphabet) for w in next_layer)
        layer = next_layer
    return words


def count_reduced_words(rank: int, max_len: int) -> int:
    if rank == 1:
        return 2 * max_len + 1
    return 1 + 2 * rank * ((2 * rank - 1) ** max_len - 1) // (2 * rank - 2)


def format_word_letters(letters: Sequence[Letter], alphabet: Alphabet) -> str:
    return " ".join(alphabet.names[l.generator] + ("" if l.exponent == 1 else "^-1") for l in letters)


def format_word(u: Word) -> str:
    return format_word_letters(u.letters, u.alphabet)


_TOKEN = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def parse_letters(text: str, alphabet: Alphabet) -> List[Letter]:
    """Parse "a b^-1 a" (also "a^3") into raw letters. "1" and "" denote the empty word."""
    raw: List[Letter] = []
    text = text.strip()
    if text in ("", "1"):
        return raw
    for token in text.split():
        match = _TOKEN.match(token)
        if not match:
            raise ValueError(f"Cannot parse word token {token!r}")
        generator = alphabet.index(match.group(1))
        exponent = int(match.group(2)) if match.group(2) is not None else 1
        sign = 1 if exponent > 0 else -1
        raw.extend(Letter(generator, sign) for _ in range(abs(exponent)))
    return raw


def parse_word(text: str, alphabet: Alphabet) -> Word:
    return reduce(parse_letters(text, alphabet), alphabet)
