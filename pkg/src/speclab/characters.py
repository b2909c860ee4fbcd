"""Trace polynomials in the 2^m - 1 character variables, exact integers.

Every SL2 trace identity used here follows from Cayley-Hamilton:
    tr(U^-1) = tr(U),   tr(UV) = tr(VU),   tr(UV) + tr(UV^-1) = tr(U) tr(V),
plus the symmetrized product rule
    tr(MABN) = -tr(MBAN) + tr(B) tr(MAN) + tr(A) tr(MBN)
               + (tr(AB) - tr(A) tr(B)) tr(MN)
for single letters A, B.  Rewriting terminates because every step strictly
decreases (length, inverse letters, index inversions) lexicographically.

A character variable is a nonempty subset S of {1..m}, encoded as a bitmask;
t_S stands for tr of the ascending product of the generators in S.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import surface_group as sg
from .mobius import Mat2

Monomial = tuple[tuple[int, int], ...]  # ((mask, exponent), ...) sorted by mask


def subset_name(mask: int) -> str:
    idx = [str(i + 1) for i in range(mask.bit_length()) if mask >> i & 1]
    return "t{" + ",".join(idx) + "}"


class TracePoly:
    """Integer polynomial in character variables; canonical sparse form."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, int] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c != 0}

    @classmethod
    def const(cls, c: int) -> "TracePoly":
        return cls({(): c})

    @classmethod
    def var(cls, mask: int) -> "TracePoly":
        return cls({((mask, 1),): 1})

    def __eq__(self, other) -> bool:
        return isinstance(other, TracePoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other: "TracePoly") -> "TracePoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return TracePoly(out)

    def __sub__(self, other: "TracePoly") -> "TracePoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) - c
        return TracePoly(out)

    def __neg__(self) -> "TracePoly":
        return TracePoly({m: -c for m, c in self.terms.items()})

    def __mul__(self, other: "TracePoly") -> "TracePoly":
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                merged: dict[int, int] = {}
                for mask, e in m1 + m2:
                    merged[mask] = merged.get(mask, 0) + e
                key = tuple(sorted(merged.items()))
                out[key] = out.get(key, 0) + c1 * c2
        return TracePoly(out)

    def scale(self, c: int) -> "TracePoly":
        return TracePoly({m: c * v for m, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def evaluate(self, char_values: dict[int, object]):
        """Substitute numeric character values keyed by subset bitmask."""
        total = 0
        for mono, coeff in self.terms.items():
            v = coeff
            for mask, e in mono:
                v *= char_values[mask] ** e
            total += v
        return total

    def _sorted_terms(self):
        def mono_key(m):
            return (sum(e for _, e in m), m)
        return sorted(self.terms.items(), key=lambda kv: mono_key(kv[0]), reverse=True)

    def text(self) -> str:
        """Canonical text form, terms in graded order, bit-exact."""
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in self._sorted_terms():
            sign = "+" if coeff >= 0 else "-"
            factors = []
            for mask, e in mono:
                factors.append(subset_name(mask) + (f"^{e}" if e > 1 else ""))
            body = str(abs(coeff))
            if factors:
                body += "*" + "*".join(factors)
            parts.append(f"{sign}{body}")
        return " ".join(parts)

    def __repr__(self):
        return f"TracePoly({self.text()})"


# ---------------------------------------------------------------------------
# Rewriting tr(w) into the character basis.
# ---------------------------------------------------------------------------

def _canonical_trace_key(w: sg.Word) -> sg.Word:
    """Minimal representative under cyclic rotation and inversion (both are
    trace-preserving), used as the memo key.  Candidates with fewer inverse
    letters win so canonicalization never increases the rewriting measure."""
    if not w:
        return w
    cands = []
    for v in (w, sg.invert(w)):
        for k in range(len(v)):
            cands.append(v[k:] + v[:k])

    def key(v):
        neg = sum(1 for x in v if x < 0)
        return (neg, tuple((abs(x), 0 if x > 0 else 1) for x in v))

    return min(cands, key=key)


def _measure(w: sg.Word) -> tuple[int, int, int]:
    neg = sum(1 for x in w if x < 0)
    inv = 0
    if w and neg == 0:
        lin = _rotate_to_min(w)
        inv = sum(
            1
            for i in range(len(lin))
            for j in range(i + 1, len(lin))
            if lin[i] > lin[j]
        )
    return (len(w), neg, inv)


def _rotate_to_min(w: sg.Word) -> sg.Word:
    k = min(range(len(w)), key=lambda i: w[i:] + w[:i])
    return w[k:] + w[:k]


class _Rewriter:
    def __init__(self, m: int):
        self.m = m
        self.memo: dict[sg.Word, TracePoly] = {}

    def trace(self, w) -> TracePoly:
        w = sg.cyclic_reduce(sg.free_reduce(w))
        if any(abs(x) > self.m for x in w):
            raise ValueError(f"word uses generators beyond rank {self.m}")
        return self._trace_reduced(w)

    def _trace_reduced(self, w: sg.Word) -> TracePoly:
        key = _canonical_trace_key(w)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        result = self._rewrite(key)
        self.memo[key] = result
        return result

    def _child(self, parent_measure, w) -> TracePoly:
        w = sg.cyclic_reduce(sg.free_reduce(w))
        assert _measure(w) < parent_measure, (w, parent_measure)
        return self._trace_reduced(w)

    def _rewrite(self, w: sg.Word) -> TracePoly:
        n = len(w)
        if n == 0:
            return TracePoly.const(2)
        if n == 1:
            return TracePoly.var(1 << (abs(w[0]) - 1))
        meas = _measure(w)

        # 1. eliminate inverse letters: tr(U s^-1) = tr(U) tr(s) - tr(U s)
        for k in range(n):
            if w[k] < 0:
                i = -w[k]
                U = w[k + 1 :] + w[:k]
                t_i = TracePoly.var(1 << (i - 1))
                return self._child(meas, U) * t_i - self._child(meas, U + (i,))

        # 2. eliminate cyclically adjacent squares: tr(s s V) = tr(s) tr(s V) - tr(V)
        for k in range(n):
            if w[k] == w[(k + 1) % n]:
                i = w[k]
                rot = w[k:] + w[:k]  # square in front, remainder follows
                V = rot[2:]
                t_i = TracePoly.var(1 << (i - 1))
                return t_i * self._child(meas, (i,) + V) - self._child(meas, V)

        # 3. split a repeated letter: tr(s U s V) = tr(sU) tr(sV) - tr(U V^-1)
        positions: dict[int, int] = {}
        for k in range(n):
            i = w[k]
            if i in positions:
                p = positions[i]
                rot = w[p:] + w[:p]  # starts with s at position 0
                q = k - p
                U = rot[1:q]
                V = rot[q + 1 :]
                return self._child(meas, (i,) + U) * self._child(meas, (i,) + V) - self._child(
                    meas, U + sg.invert(V)
                )
            positions[i] = k

        # 4. distinct positive letters: sort toward the ascending basis word
        lin = _rotate_to_min(w)
        descent = None
        for j in range(len(lin) - 1):
            if lin[j] > lin[j + 1]:
                descent = j
                break
        if descent is None:
            mask = 0
            for x in lin:
                mask |= 1 << (x - 1)
            return TracePoly.var(mask)
        a, b = lin[descent], lin[descent + 1]
        M = lin[:descent]
        N = lin[descent + 2 :]
        t_a = TracePoly.var(1 << (a - 1))
        t_b = TracePoly.var(1 << (b - 1))
        t_ab = TracePoly.var((1 << (a - 1)) | (1 << (b - 1)))
        swapped = M + (b, a) + N
        assert _measure(sg.cyclic_reduce(swapped)) < meas
        return (
            -self._trace_reduced(sg.cyclic_reduce(swapped))
            + t_b * self._child(meas, M + (a,) + N)
            + t_a * self._child(meas, M + (b,) + N)
            + (t_ab - t_a * t_b) * self._child(meas, M + N)
        )


_rewriters: dict[int, _Rewriter] = {}


def trace_poly(w, m: int) -> TracePoly:
    """Universal polynomial with tr(phi(w)) = P_w(characters) for all SL2 phi."""
    rw = _rewriters.get(m)
    if rw is None:
        rw = _rewriters[m] = _Rewriter(m)
    return rw.trace(tuple(w))


# ---------------------------------------------------------------------------
# Numeric / exact evaluation and the R_min relation.
# ---------------------------------------------------------------------------

def basis_word(mask: int) -> sg.Word:
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def character_values(rep, m: int) -> dict[int, object]:
    """tr of every ascending square-free basis word of the first m generators."""
    out = {}
    for mask in range(1, 1 << m):
        out[mask] = sg.evaluate(basis_word(mask), rep).tr()
    return out


def eval_trace_poly(p: TracePoly, rep, m: int | None = None):
    if m is None:
        m = rep.presentation.free_rank
    return p.evaluate(character_values(rep, m))


def random_exact_rep(m: int, rng: random.Random, factors: int = 4):
    """Random integer SL2 representation (products of elementary matrices)."""
    from .fricke import SurfaceRep  # local import to avoid a cycle

    mats = []
    for _ in range(m):
        mat = Mat2(1, 0, 0, 1)
        for _ in range(factors):
            r = rng.randint(-3, 3)
            if rng.random() < 0.5:
                mat = mat * Mat2(1, r, 0, 1)
            else:
                mat = mat * Mat2(1, 0, r, 1)
        mats.append(mat)
    return SurfaceRep.free_rep(mats)


@dataclass(frozen=True)
class RminVerdict:
    kind: str  # "equal" | "probably_equal" | "distinct"
    witness_rep: object = None
    traces: tuple = ()

    EQUAL = "equal"
    PROBABLY_EQUAL = "probably_equal"
    DISTINCT = "distinct"


def rmin_test(w1, w2, m: int, seed: int = 0, n_reps: int = 16) -> RminVerdict:
    """Decide the minimal-pattern relation between two words.

    Polynomial identity P1^2 = P2^2 is a proof of equality; otherwise the
    squared traces are compared at seeded exact representations and any
    disagreement is decisive.
    """
    p1 = trace_poly(w1, m)
    p2 = trace_poly(w2, m)
    if (p1 * p1 - p2 * p2).is_zero():
        return RminVerdict(RminVerdict.EQUAL)
    rng = random.Random(seed)
    for _ in range(n_reps):
        rep = random_exact_rep(m, rng)
        chars = character_values(rep, m)
        v1 = p1.evaluate(chars)
        v2 = p2.evaluate(chars)
        if v1 * v1 != v2 * v2:
            return RminVerdict(RminVerdict.DISTINCT, witness_rep=rep, traces=(v1, v2))
    return RminVerdict(RminVerdict.PROBABLY_EQUAL)


def squared_poly_key(w, m: int) -> str:
    p = trace_poly(w, m)
    return (p * p).text()


def rmin_pairs(classes, m: int, seed: int = 0, n_reps: int = 16):
    """Partition classes by provable R_min equality; flag numeric-only
    coincidences (equal at every sampled rep, distinct as polynomials)."""
    blocks: dict[str, list] = {}
    polys: dict[str, TracePoly] = {}
    for key in classes:
        p = trace_poly(key.word, m)
        sq = (p * p).text()
        blocks.setdefault(sq, []).append(key)
        polys.setdefault(sq, p * p)
    partition = [tuple(v) for _, v in sorted(blocks.items())]
    # numeric fingerprints across blocks
    rng = random.Random(seed)
    reps = [random_exact_rep(m, rng) for _ in range(n_reps)]
    char_sets = [character_values(r, m) for r in reps]
    fingerprints: dict[tuple, list[str]] = {}
    for sq, poly in polys.items():
        fp = tuple(poly.evaluate(cv) for cv in char_sets)
        fingerprints.setdefault(fp, []).append(sq)
    flagged = []
    for fp, group in fingerprints.items():
        if len(group) > 1:
            for i in range(len(group)):
                for j in range(i + 1, len(group)):
                    flagged.append((blocks[group[i]][0], blocks[group[j]][0]))
    return partition, flagged
