"""The transvection matrix group H_Λ ≤ SL(n, Z) of a class digraph.

Matrices act on column vectors and rows/columns follow the graph's vertex
order, so the transvection ``t_vw`` abelianizes to ``T_wv = I + E_wv``.  With
classes listed in ascending order every element of H_Λ is block lower
triangular.  All arithmetic is exact (``dtype=object``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graphs import DominanceData, Graph, check_properties, compute_domination
from .relations import ZCharacter

__all__ = [
    "HGenerators",
    "TDecision",
    "Counterexample",
    "h_generators",
    "elementary",
    "mat_commutator",
    "verify_block_structure",
    "perfectness_witness",
    "commutator_signs",
    "decide_property_T",
    "falsify_character",
    "congruence_clear_offdiagonal",
    "structure_report",
    "random_product",
]


def elementary(n: int, s: int, t: int, c: int = 1) -> np.ndarray:
    """``I + c E_st`` as an exact integer matrix."""
    m = np.eye(n, dtype=np.int64).astype(object)
    m[s, t] += c
    return m


def _inv(m: np.ndarray) -> np.ndarray:
    """Exact inverse of a unimodular integer matrix (Gauss-Jordan over Q)."""
    n = m.shape[0]
    aug = np.concatenate([m.astype(object), np.eye(n, dtype=np.int64).astype(object)], axis=1)
    a = [[Fraction(int(x)) for x in row] for row in aug]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    out = np.array([[int(x) for x in row[n:]] for row in a], dtype=object)
    return out


def mat_commutator(a: np.ndarray, b: np.ndarray, style: str = "a^-1 b^-1 a b") -> np.ndarray:
    ai, bi = _inv(a), _inv(b)
    if style == "a^-1 b^-1 a b":
        return ai.dot(bi).dot(a).dot(b)
    return a.dot(b).dot(ai).dot(bi)


@dataclass(frozen=True)
class HGenerators:
    graph: Graph
    dominance: DominanceData
    blocks: tuple          # vertex indices per class, ascending class order
    gens: tuple            # admissible (s, t), row s and column t
    arrows: frozenset      # (j, i) class positions, arrow V_j -> V_i

    @property
    def n(self) -> int:
        return self.graph.n

    def class_of(self, i: int) -> int:
        return self.dominance.class_of[i]

    def admissible(self, s: int, t: int) -> bool:
        return s != t and (self.class_of(t), self.class_of(s)) in self.arrows

    def matrix(self, s: int, t: int, power: int = 1) -> np.ndarray:
        return elementary(self.n, s, t, power)

    def name(self, s: int, t: int) -> str:
        V = self.graph.vertices
        return f"T_{V[s]},{V[t]}"


def h_generators(g: Graph) -> HGenerators:
    dom = compute_domination(g)
    blocks = tuple(tuple(i for i in range(g.n) if m >> i & 1) for m in dom.class_masks)
    gens = []
    for s in range(g.n):
        for t in range(g.n):
            if s != t and (dom.class_of[t], dom.class_of[s]) in dom.arrows:
                gens.append((s, t))
    return HGenerators(g, dom, blocks, tuple(gens), dom.arrows)


def verify_block_structure(h: HGenerators, m: np.ndarray) -> bool:
    """Every nonzero off-diagonal block (i, j) needs an arrow V_j -> V_i."""
    m = np.asarray(m)
    if m.shape != (h.n, h.n):
        raise ValueError(f"expected a {h.n}x{h.n} matrix, got shape {m.shape}")
    for i, rows in enumerate(h.blocks):
        for j, cols in enumerate(h.blocks):
            if i == j or (j, i) in h.arrows:
                continue
            if any(m[r, c] != 0 for r in rows for c in cols):
                return False
    return True


def commutator_signs(h: HGenerators, s: int, l: int, t: int) -> dict:
    """Which of ``T_st``, ``T_st^-1`` each commutator style produces from ``T_sl``, ``T_lt``."""
    a, b = h.matrix(s, l), h.matrix(l, t)
    out = {}
    for style in ("a^-1 b^-1 a b", "a b a^-1 b^-1"):
        c = mat_commutator(a, b, style)
        if np.array_equal(c, h.matrix(s, t)):
            out[style] = 1
        elif np.array_equal(c, h.matrix(s, t, -1)):
            out[style] = -1
        else:
            out[style] = 0
    return out


def perfectness_witness(h: HGenerators, s: int, t: int) -> int | None:
    """Least ``l`` with ``T_st = [T_sl, T_lt]``, both factors admissible."""
    if (s, t) not in h.gens:
        raise ValueError(f"({s},{t}) is not an admissible generator")
    target = h.matrix(s, t)
    for l in range(h.n):
        if l in (s, t) or not (h.admissible(s, l) and h.admissible(l, t)):
            continue
        if np.array_equal(mat_commutator(h.matrix(s, l), h.matrix(l, t)), target):
            return l
    return None


@dataclass
class TDecision:
    has_T: bool
    b2_witness_pair: tuple | None = None
    witness_class_sizes: tuple | None = None
    character: ZCharacter | None = None
    diagnostic: str = ""


def decide_property_T(g: Graph) -> TDecision:
    """Property (T) for the transvection-and-partial-conjugation subgroup, via (B2)."""
    rep = check_properties(g)
    if rep.b2:
        return TDecision(True, diagnostic="(B2) holds")
    v, w = rep.b2_failure_witness
    dom = compute_domination(g)
    sizes = (len(dom.classes[dom.class_of[g.idx(v)]]), len(dom.classes[dom.class_of[g.idx(w)]]))
    if sizes == (1, 1):
        key = ("T", g.idx(w), g.idx(v))
        ch = ZCharacter(g, {key: 1}, "H", names={key: f"T_{w},{v}"})
        return TDecision(False, (v, w), sizes, ch, "singleton-class witness")
    return TDecision(False, (v, w), sizes, None, "two-element-class witness")


@dataclass(frozen=True)
class Counterexample:
    word: tuple            # ((s, t), exponent) letters
    total: int

    def text(self, h: HGenerators) -> str:
        return " ".join(h.name(s, t) + ("" if e > 0 else "^-1") for (s, t), e in self.word)


def _reduce(word: list) -> tuple:
    out: list = []
    for x in word:
        if out and out[-1][0] == x[0] and out[-1][1] == -x[1]:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def _word_key(word: tuple, order: dict) -> tuple:
    return (len(word), tuple((order[g], -e) for g, e in word))


def falsify_character(
    g: Graph,
    char: ZCharacter,
    budget: int = 24,
    seed: int = 0,
    samples: int = 20000,
    max_exhaustive: int = 20000,
    h: HGenerators | None = None,
) -> Counterexample | None:
    """Look for a generator word equal to I on which ``char`` has nonzero sum.

    Words of length up to ``budget // 2`` are collected (all reduced words
    while their count stays under ``max_exhaustive``, then ``samples`` seeded
    random reduced words) and bucketed by matrix.  Two words ``u``, ``v`` with
    the same matrix give the identity word ``u v^-1``.  The least such word
    by (length, generator order) with nonzero character sum is returned;
    ``None`` only means nothing was found.
    """
    h = h or h_generators(g)
    n = h.n
    gens = list(h.gens)
    if not gens:
        return None
    order = {gen: k for k, gen in enumerate(gens)}
    letters = [(gen, e) for gen in gens for e in (1, -1)]
    mats = {}
    for gen, e in letters:
        m = np.eye(n, dtype=np.int64)
        m[gen[0], gen[1]] += e
        mats[(gen, e)] = m
    val = {(gen, e): e * char(("T",) + gen) for gen, e in letters}
    half = max(0, budget // 2)

    buckets: dict[bytes, dict[int, tuple]] = {}

    def record(word, m, total):
        key = m.tobytes()
        slot = buckets.setdefault(key, {})
        best = slot.get(total)
        if best is None or _word_key(word, order) < _word_key(best, order):
            slot[total] = word

    ident = np.eye(n, dtype=np.int64)
    record((), ident, 0)
    layer = [((), ident, 0)]
    exhaustive_len = 0
    for L in range(1, half + 1):
        nxt_count = len(layer) * (2 * len(gens) - (1 if L > 1 else 0))
        if nxt_count > max_exhaustive:
            break
        nxt = []
        for word, m, total in layer:
            for x in letters:
                if word and word[-1][0] == x[0] and word[-1][1] == -x[1]:
                    continue
                w2 = word + (x,)
                m2 = m @ mats[x]
                t2 = total + val[x]
                record(w2, m2, t2)
                nxt.append((w2, m2, t2))
        layer = nxt
        exhaustive_len = L
    if exhaustive_len < half:
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            L = int(rng.integers(exhaustive_len + 1, half + 1))
            word: list = []
            m = ident.copy()
            total = 0
            while len(word) < L:
                x = letters[int(rng.integers(len(letters)))]
                if word and word[-1][0] == x[0] and word[-1][1] == -x[1]:
                    continue
                word.append(x)
                m = m @ mats[x]
                total += val[x]
            record(tuple(word), m, total)

    best = None
    for slot in buckets.values():
        if len(slot) < 2:
            continue
        reps = sorted(slot.items())
        for a in range(len(reps)):
            for b in range(a + 1, len(reps)):
                (ta, u), (tb, v) = reps[a], reps[b]
                w = _reduce(list(u) + [(gen, -e) for gen, e in reversed(v)])
                cand = Counterexample(w, ta - tb)
                if best is None or _word_key(w, order) < _word_key(best.word, order):
                    best = cand
    if best is not None:
        # exact re-check with unbounded integers
        m = np.eye(n, dtype=np.int64).astype(object)
        for (s, t), e in best.word:
            m = m.dot(elementary(n, s, t, e))
        assert np.array_equal(m, np.eye(n, dtype=np.int64).astype(object))
        assert best.total == sum(e * char(("T", s, t)) for (s, t), e in best.word)
    return best


def random_product(h: HGenerators, length: int, rng: np.random.Generator) -> np.ndarray:
    m = np.eye(h.n, dtype=np.int64).astype(object)
    for _ in range(length):
        s, t = h.gens[int(rng.integers(len(h.gens)))]
        m = m.dot(elementary(h.n, s, t, 1 if rng.integers(2) else -1))
    return m


def congruence_clear_offdiagonal(h: HGenerators, m: np.ndarray, level: int) -> list[tuple[int, int, int]]:
    """Factors ``(s, t, k)`` meaning ``T_st^k``, in the order they are applied on the left.

    Requires identity diagonal blocks, ``m ≡ I (mod level)`` and nonzero
    off-diagonal blocks only where Λ has an arrow.  Column blocks are
    cleared from the highest class down, so each row operation only
    touches columns that are still to be cleared.
    """
    m = np.array(m, dtype=object)
    n = h.n
    if m.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got shape {m.shape}")
    if level < 1:
        raise ValueError("level must be positive")
    for blk in h.blocks:
        for r in blk:
            for c in blk:
                if m[r, c] != (1 if r == c else 0):
                    raise ValueError("diagonal blocks must be exactly the identity")
    if not verify_block_structure(h, m):
        raise ValueError("nonzero entry in a block with no arrow")
    for r in range(n):
        for c in range(n):
            if r != c and m[r, c] % level:
                raise ValueError(f"entry ({r},{c}) = {m[r, c]} is not divisible by {level}")
    factors = []
    work = m.copy()
    for j in range(len(h.blocks) - 1, -1, -1):
        for t in h.blocks[j]:
            for s in range(n):
                if h.class_of(s) == j:
                    continue
                c = work[s, t]
                if c:
                    work[s, :] = work[s, :] - c * work[t, :]
                    factors.append((s, t, -int(c)))
    assert np.array_equal(work, np.eye(n, dtype=np.int64).astype(object))
    return factors


def structure_report(h: HGenerators) -> dict:
    """Generators of N1 and N2, the central piece C, and the two semidirect shapes."""
    k = len(h.blocks)
    sizes = [len(b) for b in h.blocks]
    loops_that_matter = {(i, i) for i in range(k) if sizes[i] > 1}
    proper = {(j, i) for (j, i) in h.arrows if j != i}
    relevant = proper | loops_that_matter
    n1 = [(s, t) for (s, t) in h.gens if h.class_of(t) == 0]
    n2 = [(s, t) for (s, t) in h.gens if h.class_of(s) == k - 1]
    central = None
    if k >= 2 and sizes[0] == 1 and sizes[-1] == 1 and (0, k - 1) in h.arrows:
        central = (h.blocks[-1][0], h.blocks[0][0])
    case_i = sizes[0] > 2 and all(j == 0 for (j, i) in relevant)
    case_ii = sizes[-1] > 2 and all(i == k - 1 for (j, i) in relevant)
    report = {
        "class_sizes": sizes,
        "N1": n1,
        "N2": n2,
        "C": central,
        "case_i": case_i,
        "case_ii": case_ii,
    }
    if case_i:
        report["m_case_i"] = sum(sizes[i] for (j, i) in proper if j == 0)
    if case_ii:
        report["m_case_ii"] = sum(sizes[j] for (j, i) in proper if i == k - 1)
    return report
