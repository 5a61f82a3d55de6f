"""Exact symbolic model of a Cantor-type space.

Points are the eventually constant binary sequences, written as a finite
prefix plus one repeated tail symbol.  Finite unions of cylinders give the
clopen sets, and the middle-thirds embedding pins the whole code space to
the classical ternary Cantor set inside [0, 1], which is what makes
"clopen", "diameter" and "distance" concrete here.  All arithmetic is
rational, so set and metric identities are asserted exactly, never within
a tolerance.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

__all__ = [
    "Address",
    "AddressMap",
    "ClopenSet",
    "ComposedMap",
    "Cylinder",
    "FULL_SPACE",
    "OutsideDomainError",
    "PrefixRewrite",
    "clopen_complement",
    "clopen_union",
    "code_distance",
    "complete_prefix_code",
    "compose",
    "embed_cmts",
    "identity_map",
    "map_clopen",
    "prepend_map",
    "random_address",
    "recode_between",
    "recode_homeomorphism",
]

_SYMBOLS = ("0", "1")


class OutsideDomainError(ValueError):
    """An address or cylinder fell outside a partial map's domain."""


def _check_word(word: str) -> None:
    if not set(word) <= {"0", "1"}:
        raise ValueError(f"not a binary word: {word!r}")


@total_ordering
@dataclass(frozen=True)
class Address:
    """An eventually constant binary sequence: ``prefix``, then ``tail`` forever.

    Stored in canonical form (the prefix never ends in the tail symbol), so
    value equality coincides with equality of the sequences, and every
    eventually constant sequence has exactly one representation.
    """

    prefix: str
    tail: str

    def __post_init__(self) -> None:
        _check_word(self.prefix)
        if self.tail not in _SYMBOLS:
            raise ValueError(f"tail must be '0' or '1', got {self.tail!r}")
        trimmed = self.prefix.rstrip(self.tail)
        if trimmed != self.prefix:
            object.__setattr__(self, "prefix", trimmed)

    def symbols(self, n: int) -> str:
        """The first ``n`` symbols of the sequence."""
        if n <= len(self.prefix):
            return self.prefix[:n]
        return self.prefix + self.tail * (n - len(self.prefix))

    def drop(self, n: int) -> "Address":
        """The sequence with its first ``n`` symbols removed."""
        return Address(self.prefix[n:], self.tail)

    def starts_with(self, word: str) -> bool:
        return self.symbols(len(word)) == word

    def __lt__(self, other: "Address") -> bool:
        if not isinstance(other, Address):
            return NotImplemented
        # Beyond both prefixes every symbol is the tail, so one extra
        # position decides the lexicographic order of the sequences.
        n = max(len(self.prefix), len(other.prefix)) + 1
        return self.symbols(n) < other.symbols(n)

    def __str__(self) -> str:
        return f"{self.prefix}({self.tail})^inf"


def embed_cmts(a: Address) -> Fraction:
    """Middle-thirds embedding of an address, as an exact rational.

    Symbol i contributes 2*s_i/3**i; a constant tail of ones sums in
    closed form to 3**-len(prefix).
    """
    total = Fraction(0)
    for i, sym in enumerate(a.prefix, start=1):
        if sym == "1":
            total += Fraction(2, 3**i)
    if a.tail == "1":
        total += Fraction(1, 3 ** len(a.prefix))
    return total


def code_distance(a: Address, b: Address) -> Fraction:
    """Metric on the code space: pullback of |.| under the embedding."""
    return abs(embed_cmts(a) - embed_cmts(b))


@dataclass(frozen=True)
class Cylinder:
    """The set of all infinite sequences beginning with ``word``."""

    word: str

    def __post_init__(self) -> None:
        _check_word(self.word)

    @property
    def depth(self) -> int:
        return len(self.word)

    def contains(self, a: Address) -> bool:
        return a.starts_with(self.word)

    def contains_cylinder(self, other: "Cylinder") -> bool:
        return other.word.startswith(self.word)

    def disjoint(self, other: "Cylinder") -> bool:
        return not (self.contains_cylinder(other) or other.contains_cylinder(self))

    def min_address(self) -> Address:
        return Address(self.word, "0")

    def max_address(self) -> Address:
        return Address(self.word, "1")

    def diameter(self) -> Fraction:
        return Fraction(1, 3 ** len(self.word))


def _canonical_words(words) -> tuple[str, ...]:
    ws = set(words)
    # a cylinder refining another is absorbed by the shorter one
    ws = {w for w in ws if not any(u != w and w.startswith(u) for u in ws)}
    # complete sibling pairs w0, w1 merge upward until none remain
    merged = True
    while merged:
        merged = False
        for w in sorted(ws, key=len, reverse=True):
            if w and w in ws:
                sibling = w[:-1] + ("1" if w[-1] == "0" else "0")
                if sibling in ws:
                    ws.discard(w)
                    ws.discard(sibling)
                    ws.add(w[:-1])
                    merged = True
    return tuple(sorted(ws))


def _subtract(word: str, removal_words) -> list[str]:
    """Cylinder words covering [word] minus the union of the removals."""
    related = [r for r in removal_words if r.startswith(word) or word.startswith(r)]
    if any(word.startswith(r) for r in related):
        return []
    if not related:
        return [word]
    out: list[str] = []
    for sym in _SYMBOLS:
        out.extend(_subtract(word + sym, related))
    return out


@dataclass(frozen=True)
class ClopenSet:
    """A finite union of cylinders, kept canonical.

    Canonical means no member cylinder contains another, no two sibling
    cylinders w0 and w1 are both present (they merge to w), and the list is
    sorted by word.  The empty union is a valid value; operations that need
    a non-empty set say so.
    """

    cylinders: tuple[Cylinder, ...]

    def __post_init__(self) -> None:
        words = _canonical_words(c.word for c in self.cylinders)
        object.__setattr__(self, "cylinders", tuple(Cylinder(w) for w in words))

    @classmethod
    def from_words(cls, words) -> "ClopenSet":
        return cls(tuple(Cylinder(w) for w in words))

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(c.word for c in self.cylinders)

    @property
    def is_empty(self) -> bool:
        return not self.cylinders

    def contains(self, a: Address) -> bool:
        return any(c.contains(a) for c in self.cylinders)

    def subset_of(self, other: "ClopenSet") -> bool:
        ow = other.words
        return all(not _subtract(w, ow) for w in self.words)

    def refine(self, depth: int) -> tuple[str, ...]:
        """All member words expanded to one uniform depth."""
        out: list[str] = []
        for w in self.words:
            if len(w) > depth:
                raise ValueError(f"cylinder [{w}] is deeper than {depth}")
            out.extend(w + "".join(bits) for bits in itertools.product("01", repeat=depth - len(w)))
        return tuple(sorted(out))

    def min_address(self) -> Address:
        if self.is_empty:
            raise ValueError("empty set has no points")
        # canonical words are prefix-free, so plain string order agrees
        # with the order of the cylinders on the line
        return Address(min(self.words), "0")

    def max_address(self) -> Address:
        if self.is_empty:
            raise ValueError("empty set has no points")
        return Address(max(self.words), "1")


FULL_SPACE = ClopenSet((Cylinder(""),))


def clopen_union(*sets: ClopenSet) -> ClopenSet:
    words: list[str] = []
    for s in sets:
        words.extend(s.words)
    return ClopenSet.from_words(words)


def clopen_complement(x: ClopenSet, within: ClopenSet) -> ClopenSet:
    """The clopen difference ``within - x``; requires ``x`` inside ``within``."""
    if not x.subset_of(within):
        raise ValueError("not a subset")
    xw = x.words
    remaining: list[str] = []
    for w in within.words:
        remaining.extend(_subtract(w, xw))
    return ClopenSet.from_words(remaining)


def complete_prefix_code(count: int) -> tuple[str, ...]:
    """A balanced complete binary prefix code with ``count`` codewords.

    Grown from the empty codeword by repeatedly splitting the first
    codeword, in lexicographic order, that still stands for two or more
    leaves of the final code; each split hands the floor half of the
    leaves to the 0-child.  The codeword lengths match an equal-weight
    Huffman code and the construction is deterministic.
    """
    if count < 1:
        raise ValueError("count must be positive")
    nodes: list[tuple[str, int]] = [("", count)]
    while len(nodes) < count:
        i = next(k for k, (_, c) in enumerate(nodes) if c >= 2)
        word, c = nodes[i]
        nodes[i : i + 1] = [(word + "0", c // 2), (word + "1", c - c // 2)]
    return tuple(word for word, _ in nodes)


def _check_prefix_free(words, what: str) -> None:
    ws = sorted(words)
    for u, v in zip(ws, ws[1:]):
        if v.startswith(u):
            raise ValueError(f"{what} words are not prefix-free: {u!r}, {v!r}")


@dataclass(frozen=True)
class PrefixRewrite:
    """A partial address map that rewrites one initial block of symbols.

    ``rules`` pairs source words with replacement words.  Sources are
    pairwise prefix-free so at most one rule applies to a sequence, and
    replacements are prefix-free too, making the map a bijection from the
    union of its source cylinders onto the union of its replacement
    cylinders.  Sequences agreeing on a long prefix map to sequences
    agreeing on a prefix of comparable length, so both directions are
    uniformly continuous.
    """

    rules: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if not self.rules:
            raise ValueError("a rewrite needs at least one rule")
        for src, dst in self.rules:
            _check_word(src)
            _check_word(dst)
        _check_prefix_free((src for src, _ in self.rules), "source")
        _check_prefix_free((dst for _, dst in self.rules), "replacement")

    def __call__(self, a: Address) -> Address:
        for src, dst in self.rules:
            if a.starts_with(src):
                rest = a.drop(len(src))
                return Address(dst + rest.prefix, rest.tail)
        raise OutsideDomainError(f"{a} lies outside the map's source cylinders")

    def word_image(self, word: str) -> str | None:
        """Image cylinder word, or None when [word] must be refined first."""
        for src, dst in self.rules:
            if word.startswith(src):
                return dst + word[len(src):]
            if src.startswith(word):
                return None
        raise OutsideDomainError(f"cylinder [{word}] lies outside the map's domain")

    def inverse(self) -> "PrefixRewrite":
        return PrefixRewrite(tuple((dst, src) for src, dst in self.rules))

    @property
    def source(self) -> ClopenSet:
        return ClopenSet.from_words(src for src, _ in self.rules)

    @property
    def target(self) -> ClopenSet:
        return ClopenSet.from_words(dst for _, dst in self.rules)


@dataclass(frozen=True)
class ComposedMap:
    """Address maps applied left to right."""

    stages: tuple[PrefixRewrite, ...]

    def __call__(self, a: Address) -> Address:
        for stage in self.stages:
            a = stage(a)
        return a

    def word_image(self, word: str) -> str | None:
        img: str | None = word
        for stage in self.stages:
            img = stage.word_image(img)
            if img is None:
                return None
        return img

    def inverse(self) -> "ComposedMap":
        return ComposedMap(tuple(s.inverse() for s in reversed(self.stages)))


AddressMap = PrefixRewrite | ComposedMap


def compose(*maps: AddressMap) -> ComposedMap:
    """Compose address maps; the first argument is applied first."""
    stages: list[PrefixRewrite] = []
    for m in maps:
        if isinstance(m, ComposedMap):
            stages.extend(m.stages)
        else:
            stages.append(m)
    return ComposedMap(tuple(stages))


def identity_map() -> PrefixRewrite:
    return PrefixRewrite((("", ""),))


def prepend_map(symbol: str) -> PrefixRewrite:
    """The branch map s -> symbol.s of the full code space."""
    if symbol not in _SYMBOLS:
        raise ValueError(f"symbol must be '0' or '1', got {symbol!r}")
    return PrefixRewrite((("", symbol),))


def recode_homeomorphism(target: ClopenSet) -> PrefixRewrite:
    """A homeomorphism from the full code space onto ``target``.

    Pairs the codewords of a balanced complete prefix code with the
    target's cylinders, lexicographically on both sides; the map rewrites
    the matched codeword into the matched cylinder word and passes every
    later symbol through unchanged.
    """
    if target.is_empty:
        raise ValueError("empty subspace")
    code = complete_prefix_code(len(target.cylinders))
    return PrefixRewrite(tuple(zip(code, target.words)))


def recode_between(source: ClopenSet, target: ClopenSet) -> ComposedMap:
    """A homeomorphism carrying ``source`` onto ``target``."""
    return compose(recode_homeomorphism(source).inverse(), recode_homeomorphism(target))


def push_word(m, word: str) -> list[str]:
    """Image cylinder words of [word] under an address map, refining as needed."""
    out: list[str] = []
    stack = [word]
    while stack:
        w = stack.pop()
        if len(w) > 4096:
            raise RuntimeError("cylinder image does not stabilize")
        img = m.word_image(w)
        if img is None:
            stack.append(w + "0")
            stack.append(w + "1")
        else:
            out.append(img)
    return out


def map_clopen(m, cs: ClopenSet) -> ClopenSet:
    """Exact image of a clopen set under an address map."""
    out: list[str] = []
    for w in cs.words:
        out.extend(push_word(m, w))
    return ClopenSet.from_words(out)


def random_address(rng: random.Random, max_prefix: int = 20, within: ClopenSet | None = None) -> Address:
    """A random eventually constant address, optionally inside ``within``."""
    base = ""
    if within is not None:
        if within.is_empty:
            raise ValueError("empty subspace")
        base = rng.choice(within.words)
    n = rng.randrange(max_prefix + 1)
    body = "".join(rng.choice(_SYMBOLS) for _ in range(n))
    return Address(base + body, rng.choice(_SYMBOLS))
