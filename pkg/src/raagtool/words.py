"""Exact arithmetic in the right-angled Artin group of a graph.

A word is a tuple of non-zero ints: ``k`` is the generator for vertex index
``k - 1`` and ``-k`` its inverse.  Letters are ordered ``v1 < v1^-1 < v2 <
v2^-1 < ...`` following the graph's vertex order.

The normal form is the freely reduced word (cancellation allowed across
commuting letters) rearranged into the lexicographically least order among
its commutation class.  Two words represent the same element iff their normal
forms are identical.
"""
from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .graphs import Graph, GraphError

__all__ = [
    "Word",
    "WordBudgetExceeded",
    "letter",
    "parse_word",
    "format_word",
    "letter_key",
    "inverse",
    "normal_form",
    "multiply",
    "group_ops",
    "power",
    "commutator",
    "words_equal",
    "brute_force_equal",
    "move_classes",
]

Word = tuple


class WordBudgetExceeded(RuntimeError):
    """The brute-force search visited more states than its budget allows."""


def letter(g: Graph, v, sign: int = 1) -> int:
    return (g.idx(v) + 1) * (1 if sign > 0 else -1)


def letter_key(x: int) -> int:
    return 2 * x - 2 if x > 0 else -2 * x - 1


def parse_word(g: Graph, text: str) -> Word:
    """Parse whitespace-separated tokens ``v`` / ``v^-1``."""
    out = []
    for tok in text.split():
        sign = 1
        if tok.endswith("^-1"):
            tok, sign = tok[:-3], -1
        elif tok.endswith("^1"):
            tok = tok[:-2]
        if tok not in g.index:
            raise GraphError(f"unknown vertex {tok!r} in word")
        out.append(letter(g, tok, sign))
    return tuple(out)


def format_word(g: Graph, w: Sequence[int]) -> str:
    return " ".join(
        str(g.vertices[x - 1]) if x > 0 else f"{g.vertices[-x - 1]}^-1" for x in w
    )


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def _check(g: Graph, w: Sequence[int]) -> None:
    n = g.n
    for x in w:
        if x == 0 or abs(x) > n:
            raise GraphError(f"letter {x} does not name a vertex of the graph")


def _pile(adj: Sequence[int], w: Iterable[int]) -> list[int]:
    """Insert letters one at a time, keeping the output reduced and lex-least.

    A new letter ``x`` slides left over letters of adjacent vertices.  If it
    meets ``x^-1`` the two cancel.  Otherwise it is placed at the first slot in
    its reachable range whose current letter sorts after ``x``.
    """
    out: list[int] = []
    for x in w:
        i = abs(x) - 1
        nb = adj[i]
        q = len(out) - 1
        while q >= 0:
            y = out[q]
            j = (y if y > 0 else -y) - 1
            if j == i or not nb >> j & 1:
                break
            q -= 1
        if q >= 0 and out[q] == -x:
            del out[q]
            continue
        kx = 2 * x - 2 if x > 0 else -2 * x - 1
        p = q + 1
        L = len(out)
        while p < L:
            y = out[p]
            if (2 * y - 2 if y > 0 else -2 * y - 1) > kx:
                break
            p += 1
        out.insert(p, x)
    return out


def _lexmin_greedy(adj: Sequence[int], w: Sequence[int]) -> Word:
    """Reference: repeatedly pull out the least letter that can move to the front."""
    rest = list(w)
    out = []
    while rest:
        seen = 0
        best_pos, best_key = -1, None
        for p, x in enumerate(rest):
            i = abs(x) - 1
            if not seen & ~adj[i]:
                k = letter_key(x)
                if best_key is None or k < best_key:
                    best_pos, best_key = p, k
            seen |= 1 << i
        out.append(rest.pop(best_pos))
    return tuple(out)


def normal_form(g: Graph, w: Sequence[int]) -> Word:
    w = tuple(w)
    cache = g._nf
    if cache is None:
        cache = g._nf = {}
    hit = cache.get(w)
    if hit is not None:
        return hit
    _check(g, w)
    nf = tuple(_pile(g.adj, w))
    if len(cache) < 2_000_000:
        cache[w] = nf
    return nf


def multiply(g: Graph, *words: Sequence[int]) -> Word:
    flat = []
    for w in words:
        flat.extend(w)
    return normal_form(g, flat)


def group_ops(g: Graph, a: Sequence[int], b: Sequence[int]) -> tuple[Word, Word]:
    """Return ``(a*b, a^-1)``, both in normal form."""
    return multiply(g, a, b), normal_form(g, inverse(a))


def power(g: Graph, w: Sequence[int], m: int) -> Word:
    if m < 0:
        w, m = inverse(w), -m
    return normal_form(g, tuple(w) * m)


def commutator(g: Graph, a: Sequence[int], b: Sequence[int]) -> Word:
    """``[a, b] = a^-1 b^-1 a b``."""
    return multiply(g, inverse(a), inverse(b), a, b)


def words_equal(g: Graph, a: Sequence[int], b: Sequence[int]) -> bool:
    return normal_form(g, a) == normal_form(g, b)


# ---------------------------------------------------------------------------
# brute-force oracle

def _neighbours(adj: Sequence[int], n: int, w: Word):
    """All words one elementary move away: cancel, insert, or commute."""
    L = len(w)
    for p in range(L - 1):
        x, y = w[p], w[p + 1]
        if x == -y:
            yield w[:p] + w[p + 2:]
        elif abs(x) != abs(y) and adj[abs(x) - 1] >> (abs(y) - 1) & 1:
            yield w[:p] + (y, x) + w[p + 2:]
    for p in range(L + 1):
        for k in range(1, n + 1):
            yield w[:p] + (k, -k) + w[p:]
            yield w[:p] + (-k, k) + w[p:]


def brute_force_equal(
    g: Graph, a: Sequence[int], b: Sequence[int], radius: int, budget: int = 2_000_000
) -> bool:
    """Is there a chain of at most ``radius`` elementary moves from ``a`` to ``b``?

    Moves are free cancellation, insertion of ``x x^-1`` and swapping two
    adjacent letters whose vertices span an edge.  The search is breadth
    first from both ends.  Raises :class:`WordBudgetExceeded` when more than
    ``budget`` words get visited; ``False`` means "not within radius".
    """
    a, b = tuple(a), tuple(b)
    _check(g, a)
    _check(g, b)
    if a == b:
        return True
    adj, n = g.adj, g.n
    sides = [{a: 0}, {b: 0}]
    fronts = [[a], [b]]
    depth = [0, 0]
    visited = 2
    while depth[0] + depth[1] < radius:
        s = 0 if len(fronts[0]) <= len(fronts[1]) else 1
        if not fronts[s]:
            s = 1 - s
            if not fronts[s]:
                return False
        nxt = []
        seen, other = sides[s], sides[1 - s]
        for w in fronts[s]:
            for u in _neighbours(adj, n, w):
                if u in other:
                    return True
                if u not in seen:
                    seen[u] = depth[s] + 1
                    nxt.append(u)
                    visited += 1
                    if visited > budget:
                        raise WordBudgetExceeded(f"more than {budget} words visited")
        fronts[s] = nxt
        depth[s] += 1
    return False


def move_classes(g: Graph, max_len: int) -> tuple[list[Word], np.ndarray]:
    """Label every word of length ``<= max_len`` by its move-connectivity class.

    Two words are joined when one elementary move (cancel/insert or a
    commuting swap) turns one into the other without leaving the length
    bound.  Returns ``(words, labels)`` with ``labels[k]`` the component of
    ``words[k]``.  This is an oracle for :func:`normal_form` and shares no
    code with it.
    """
    n = g.n
    A = 2 * n
    # digit d <-> letter: d = 2*i for vertex i, 2*i + 1 for its inverse
    sym = np.array([(d // 2 + 1) * (1 if d % 2 == 0 else -1) for d in range(A)], dtype=np.int64)
    inv_digit = np.array([d ^ 1 for d in range(A)], dtype=np.int64)
    vert = np.arange(A) // 2
    commute = np.zeros((A, A), dtype=bool)
    for a in range(A):
        for b in range(A):
            va, vb = vert[a], vert[b]
            commute[a, b] = va != vb and bool(g.adj[va] >> vb & 1)

    offsets, digits = [], []
    total = 0
    for L in range(max_len + 1):
        count = A ** L
        offsets.append(total)
        total += count
        idx = np.arange(count, dtype=np.int64)
        d = np.empty((count, L), dtype=np.int64)
        for p in range(L):
            d[:, p] = (idx // A ** (L - 1 - p)) % A
        digits.append(d)

    def encode(d, L):
        code = np.zeros(d.shape[0], dtype=np.int64)
        for p in range(L):
            code = code * A + d[:, p]
        return code + offsets[L]

    rows, cols = [], []
    for L in range(2, max_len + 1):
        d = digits[L]
        src = offsets[L] + np.arange(d.shape[0], dtype=np.int64)
        for p in range(L - 1):
            x, y = d[:, p], d[:, p + 1]
            sw = commute[x, y]
            if sw.any():
                e = d[sw].copy()
                e[:, [p, p + 1]] = e[:, [p + 1, p]]
                rows.append(src[sw])
                cols.append(encode(e, L))
            cn = inv_digit[x] == y
            if cn.any():
                e = np.delete(d[cn], [p, p + 1], axis=1)
                rows.append(src[cn])
                cols.append(encode(e, L - 2))
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    m = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(total, total))
    _, labels = connected_components(m, directed=False)
    words = []
    for L in range(max_len + 1):
        words.extend(tuple(row) for row in sym[digits[L]].tolist())
    return words, labels
