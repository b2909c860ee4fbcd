"""Surface-group presentations, words, conjugacy classes, enumeration.

Words are tuples of nonzero signed generator indices (1-based): +k is the
k-th generator, -k its inverse.  For punctured surfaces (n >= 1) the group
is free on the first 2g + n - 1 generators and the last puncture generator
is carried by the presentation only (it equals the inverse of the rest of
the relator).  Closed surfaces (n = 0) use all 2g generators together with
Dehn reduction by the surface relator.
"""

from __future__ import annotations

from dataclasses import dataclass

from .mobius import Mat2, identity

Word = tuple[int, ...]


class WordError(Exception):
    pass


class EmptyWord(WordError):
    pass


@dataclass(frozen=True)
class Presentation:
    """Genus-g surface with n punctures; generators a_i, b_i (i<=g), g_j (j<=n)."""

    genus: int
    punctures: int

    def __post_init__(self):
        if 2 * self.genus + self.punctures < 2:
            raise ValueError("need 2g + n >= 2 (non-elementary)")

    @property
    def num_generators(self) -> int:
        """All presentation generators, punctures included."""
        return 2 * self.genus + self.punctures

    @property
    def free_rank(self) -> int:
        """Rank of the group: free basis for n >= 1, all 2g generators for n = 0."""
        if self.punctures >= 1:
            return 2 * self.genus + self.punctures - 1
        return 2 * self.genus

    def generator_name(self, k: int) -> str:
        g = self.genus
        if k <= 2 * g:
            i = (k + 1) // 2
            return f"a{i}" if k % 2 == 1 else f"b{i}"
        return f"g{k - 2 * g}"


def free_reduce(raw) -> Word:
    out: list[int] = []
    for x in raw:
        if x == 0:
            raise WordError("letter 0 is not a generator")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def cyclic_reduce(w: Word) -> Word:
    w = free_reduce(w)
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


def _letter_order(x: int) -> int:
    # a1 < a1^-1 < b1 < b1^-1 < a2 < ...
    return 2 * (abs(x) - 1) + (0 if x > 0 else 1)


def least_rotation(w: Word) -> Word:
    if not w:
        return w
    key = tuple(_letter_order(x) for x in w)
    best = min(range(len(w)), key=lambda i: key[i:] + key[:i])
    return w[best:] + w[:best]


def relator(p: Presentation) -> Word:
    raw: list[int] = []
    for i in range(1, p.genus + 1):
        a, b = 2 * i - 1, 2 * i
        raw += [a, b, -a, -b]
    for j in range(1, p.punctures + 1):
        raw.append(2 * p.genus + j)
    return free_reduce(raw)


def _dehn_reduce(w: Word, rel: Word) -> Word:
    """Dehn's algorithm: replace any cyclic subword longer than half the
    relator by the inverse complement, until no such subword remains."""
    variants = []
    for r in (rel, invert(rel)):
        for k in range(len(r)):
            variants.append(r[k:] + r[:k])
    half = len(rel) // 2
    w = cyclic_reduce(w)
    changed = True
    while changed and w:
        changed = False
        L = len(w)
        doubled = w + w
        for size in range(min(L, len(rel) - 1), half, -1):
            for start in range(L):
                piece = doubled[start : start + size]
                for r in variants:
                    if r[:size] == piece:
                        # piece * tail = relator  =>  piece = tail^-1
                        tail = r[size:]
                        replacement = invert(tail)
                        neww = doubled[start + size : start + L] + replacement
                        w = cyclic_reduce(neww)
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return w


@dataclass(frozen=True)
class ConjClassKey:
    word: Word
    inverse_paired: bool = False

    def __str__(self) -> str:
        # compact letter syntax (a..z, uppercase = inverse); signed-int
        # fallback for ranks past 26
        if all(1 <= abs(x) <= 26 for x in self.word):
            return "".join(
                chr(ord("A" if x < 0 else "a") + abs(x) - 1) for x in self.word
            )
        return " ".join(str(x) for x in self.word)


def canonical_class(w, p: Presentation, merge_inverse: bool = False) -> ConjClassKey:
    """Canonical cyclic form naming the conjugacy class of w."""
    w = cyclic_reduce(free_reduce(w))
    if not w:
        raise EmptyWord("trivial class has no key")
    if p.punctures == 0:
        w = _dehn_reduce(w, relator(p))
        if not w:
            raise EmptyWord("word is trivial in the closed surface group")
    key = least_rotation(w)
    if merge_inverse:
        ikey = least_rotation(cyclic_reduce(invert(w)))
        key = min(key, ikey, key=lambda v: (len(v), tuple(_letter_order(x) for x in v)))
    return ConjClassKey(key, inverse_paired=merge_inverse)


def reduced_words(rank: int, length: int):
    """All freely reduced words of the given exact length."""
    if length == 0:
        yield ()
        return
    letters = [x for k in range(1, rank + 1) for x in (k, -k)]
    def rec(prefix):
        if len(prefix) == length:
            yield tuple(prefix)
            return
        for x in letters:
            if prefix and prefix[-1] == -x:
                continue
            prefix.append(x)
            yield from rec(prefix)
            prefix.pop()
    yield from rec([])


def enumerate_classes(p: Presentation, maxlen: int, merge_inverse: bool = False) -> list[ConjClassKey]:
    """One key per conjugacy class of cyclic length <= maxlen, sorted by
    (length, letter order).  Deterministic and duplicate-free."""
    if maxlen < 1:
        raise ValueError("maxlen must be >= 1")
    rank = p.free_rank
    seen = {}
    for L in range(1, maxlen + 1):
        for w in reduced_words(rank, L):
            if cyclic_reduce(w) != w:
                continue
            try:
                key = canonical_class(w, p, merge_inverse=merge_inverse)
            except EmptyWord:
                continue
            if len(key.word) > maxlen:
                continue
            seen.setdefault(key.word, key)
    order = sorted(seen, key=lambda v: (len(v), tuple(_letter_order(x) for x in v)))
    return [seen[w] for w in order]


def evaluate(w, rep) -> Mat2:
    """Product of generator matrices along the word."""
    out = identity()
    for x in w:
        m = rep.matrix(abs(x))
        out = out * (m if x > 0 else m.inverse())
    return out


# -- text serialization ------------------------------------------------------

def format_word(w, p: Presentation) -> str:
    toks = []
    for x in w:
        name = p.generator_name(abs(x))
        toks.append(name.upper() if x < 0 else name)
    return " ".join(toks)


def parse_word(text: str, p: Presentation) -> Word:
    """Parse `a1 B1 a1` tokens or compact single-letter `abAB` syntax."""
    text = text.strip()
    if not text:
        return ()
    toks = text.split()
    if len(toks) == 1 and not any(ch.isdigit() for ch in toks[0]) and len(toks[0]) > 1:
        toks = list(toks[0])
    name_to_index = {}
    for k in range(1, p.num_generators + 1):
        name_to_index[p.generator_name(k)] = k
    # compact syntax: a, b, c, ... in generator order
    for k in range(1, min(p.num_generators, 26) + 1):
        name_to_index.setdefault(chr(ord("a") + k - 1), k)
    out = []
    for t in toks:
        low = t.lower()
        if low not in name_to_index:
            raise WordError(f"unknown generator token {t!r}")
        k = name_to_index[low]
        out.append(-k if t[0].isupper() else k)
    return free_reduce(out)
