"""Automorphisms of A_Γ stored as images of the generators.

Every :class:`Auto` carries the images of all vertices and the images of its
inverse, both in normal form, so inversion is free and composition only
substitutes words.

Composition convention: ``compose(a, b)`` applies ``a`` first and then ``b``,
so ``compose(a, b)(x) = b(a(x))`` and ``abelianize(compose(a, b)) ==
abelianize(b) @ abelianize(a)``.  :func:`product` evaluates a written product
under either reading.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _cartesian
from typing import Iterable, Sequence

import numpy as np

from .graphs import Graph, GraphError, PropertyViolation, _bits, component_masks, leq_masks
from .words import Word, format_word, inverse, letter_key, normal_form

__all__ = [
    "Auto",
    "InvalidAutomorphism",
    "EnumerationBoundExceeded",
    "identity",
    "inversion",
    "transvection",
    "partial_conjugation",
    "tau",
    "sigma",
    "signed_permutation",
    "graphic",
    "whitehead",
    "r1_inverse",
    "make_generator",
    "make_whitehead",
    "compose",
    "product",
    "power",
    "auto_ops",
    "is_identity",
    "abelianize",
    "enumerate_whitehead",
    "exhaustive_whitehead",
    "sym0",
    "random_whitehead",
    "letter_mask",
    "format_letters",
]


class InvalidAutomorphism(ValueError):
    """The proposed map does not extend to an automorphism of A_Γ."""


class EnumerationBoundExceeded(ValueError):
    """Graph too large for an exhaustive enumeration."""


@dataclass(frozen=True, eq=False)
class Auto:
    graph: Graph
    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...]
    kind: tuple = ("composite",)

    def __eq__(self, other):
        if not isinstance(other, Auto):
            return NotImplemented
        return self.images == other.images and self.graph == other.graph

    def __hash__(self):
        return hash(self.images)

    def inverse(self) -> "Auto":
        return Auto(self.graph, self.inverse_images, self.images, ("inverse", self.kind))

    def __call__(self, w: Sequence[int]) -> Word:
        return _apply(self.graph, self.images, w)

    def name(self) -> str:
        return describe(self.graph, self.kind)

    def image_strings(self) -> dict:
        g = self.graph
        return {v: format_word(g, self.images[i]) for i, v in enumerate(g.vertices)}


def _apply(g: Graph, images: Sequence[Word], w: Sequence[int]) -> Word:
    if len(w) == 1:
        x = w[0]
        if x > 0:
            return images[x - 1]
    flat: list[int] = []
    for x in w:
        if x > 0:
            flat.extend(images[x - 1])
        else:
            flat.extend(-y for y in reversed(images[-x - 1]))
    return normal_form(g, flat)


def _kills_relators(g: Graph, images: Sequence[Word]) -> tuple | None:
    """First edge whose commutator relator is not sent to 1, else ``None``."""
    for i, m in enumerate(g.adj):
        for j in _bits(m >> (i + 1) << (i + 1)):
            a, b = images[i], images[j]
            if normal_form(g, inverse(a) + inverse(b) + a + b):
                return g.vertices[i], g.vertices[j]
    return None


def _identity_images(n: int) -> tuple[Word, ...]:
    return tuple((i + 1,) for i in range(n))


def _checked(g: Graph, images, inv_images, kind) -> Auto:
    images = tuple(normal_form(g, w) for w in images)
    inv_images = tuple(normal_form(g, w) for w in inv_images)
    for imgs in (images, inv_images):
        bad = _kills_relators(g, imgs)
        if bad is not None:
            raise InvalidAutomorphism(
                f"{describe(g, kind)}: relator [{bad[0]},{bad[1]}] not sent to 1"
            )
    ident = _identity_images(g.n)
    fwd = tuple(_apply(g, inv_images, w) for w in images)
    bwd = tuple(_apply(g, images, w) for w in inv_images)
    if fwd != ident or bwd != ident:
        raise InvalidAutomorphism(f"{describe(g, kind)}: candidate inverse does not invert")
    return Auto(g, images, inv_images, kind)


# ---------------------------------------------------------------------------
# letter sets

def letter_mask(letters: Iterable[int]) -> int:
    m = 0
    for x in letters:
        m |= 1 << letter_key(x)
    return m


def _mask_letters(mask: int) -> list[int]:
    return [(k // 2 + 1) if k % 2 == 0 else -(k // 2 + 1) for k in _bits(mask)]


def format_letters(g: Graph, letters: Iterable[int]) -> str:
    return "{" + ",".join(format_word(g, (x,)) for x in sorted(letters, key=letter_key)) + "}"


def describe(g: Graph, kind: tuple) -> str:
    tag = kind[0]
    V = g.vertices
    if tag == "whitehead2":
        return f"({format_letters(g, _mask_letters(kind[1]))},{format_word(g, (kind[2],))})"
    if tag == "inversion":
        return f"inv {V[kind[1]]}"
    if tag == "transvection":
        return f"t_{V[kind[1]]},{format_word(g, (kind[2],))}"
    if tag == "partial_conjugation":
        return f"c_{V[kind[1]]},{{{','.join(str(V[i]) for i in _bits(kind[2]))}}}"
    if tag == "tau":
        return f"tau_{V[kind[1]]},{V[kind[2]]},{V[kind[3]]}"
    if tag in ("graphic", "type1"):
        return f"{tag}[{' '.join(format_word(g, (x,)) for x in kind[1])}]"
    if tag == "sigma":
        return f"sigma_{format_word(g, (kind[1],))},{format_word(g, (kind[2],))}"
    if tag == "inverse":
        return f"({describe(g, kind[1])})^-1"
    if tag == "identity":
        return "id"
    return tag


# ---------------------------------------------------------------------------
# Laurence–Servatius generators and friends

def identity(g: Graph) -> Auto:
    ident = _identity_images(g.n)
    return Auto(g, ident, ident, ("identity",))


def inversion(g: Graph, v) -> Auto:
    i = g.idx(v)
    imgs = list(_identity_images(g.n))
    imgs[i] = (-(i + 1),)
    imgs = tuple(imgs)
    return Auto(g, imgs, imgs, ("inversion", i))


def transvection(g: Graph, v, w, sign: int = 1) -> Auto:
    """``t_vw``: v -> v w^sign, requires v <= w and v != w."""
    i, j = g.idx(v), g.idx(w)
    if i == j:
        raise PropertyViolation("transvection needs two distinct vertices")
    if g.adj[i] & ~(g.adj[j] | 1 << j):
        raise PropertyViolation(f"lk({v}) is not contained in st({w})")
    x, y = i + 1, (j + 1) * (1 if sign > 0 else -1)
    imgs = list(_identity_images(g.n))
    inv = list(imgs)
    imgs[i] = normal_form(g, (x, y))
    inv[i] = normal_form(g, (x, -y))
    return Auto(g, tuple(imgs), tuple(inv), ("transvection", i, y))


def partial_conjugation(g: Graph, v, Y: Iterable) -> Auto:
    """``c_{v,Y}``: conjugate the component Y of Γ − st(v) by v."""
    i = g.idx(v)
    ymask = g.mask(Y)
    if ymask not in component_masks(g, i):
        raise PropertyViolation(f"{sorted(map(str, Y))} is not a component of Γ − st({v})")
    x = i + 1
    imgs = list(_identity_images(g.n))
    inv = list(imgs)
    for j in _bits(ymask):
        imgs[j] = (-x, j + 1, x)
        inv[j] = (x, j + 1, -x)
    return Auto(g, tuple(imgs), tuple(inv), ("partial_conjugation", i, ymask))


def tau(g: Graph, u, v, w) -> Auto:
    """``tau_{u,v,w}``: v -> v [u, w], requires lk(v) ⊆ st(u) ∩ st(w)."""
    a, b, c = g.idx(u), g.idx(v), g.idx(w)
    lk = g.adj[b]
    for z, name in ((a, u), (c, w)):
        if lk & ~(g.adj[z] | 1 << z):
            raise PropertyViolation(f"lk({v}) is not contained in st({name})")
    U, V, W = a + 1, b + 1, c + 1
    comm = (-U, -W, U, W)
    imgs = list(_identity_images(g.n))
    inv = list(imgs)
    imgs[b] = normal_form(g, (V,) + comm)
    inv[b] = normal_form(g, (V,) + inverse(comm))
    return _checked(g, imgs, inv, ("tau", a, b, c))


def signed_permutation(g: Graph, mapping: dict[int, int], kind: tuple | None = None) -> Auto:
    """Type (1) automorphism from a letter map given on positive letters."""
    n = g.n
    imgs = [None] * n
    inv = [None] * n
    for i in range(n):
        y = mapping.get(i + 1, i + 1)
        imgs[i] = (y,)
        j = abs(y) - 1
        inv[j] = ((i + 1) * (1 if y > 0 else -1),)
    if any(x is None for x in inv):
        raise InvalidAutomorphism("letter map is not a bijection on vertices")
    if kind is None:
        kind = ("type1", tuple(imgs[i][0] for i in range(n)))
    return _checked(g, imgs, inv, kind)


def sigma(g: Graph, v: int, w: int) -> Auto:
    """``sigma_{v,w}`` on letters: v -> w^-1, w -> v.  Requires v ~ w."""
    if abs(v) == abs(w):
        raise PropertyViolation("sigma needs letters of two distinct vertices")
    leq = leq_masks(g.adj)
    i, j = abs(v) - 1, abs(w) - 1
    if not (leq[i] >> j & 1 and leq[j] >> i & 1):
        raise PropertyViolation("sigma needs equivalent vertices")
    # images on the positive letters of v's and w's vertices
    mapping = {}
    for src, dst in ((v, -w), (w, v)):
        if src > 0:
            mapping[src] = dst
        else:
            mapping[-src] = -dst
    return signed_permutation(g, mapping, ("sigma", v, w))


def graphic(g: Graph, perm: Sequence[int]) -> Auto:
    """Graph automorphism given as a permutation of vertex indices."""
    mapping = {i + 1: perm[i] + 1 for i in range(g.n)}
    a = signed_permutation(g, mapping, ("graphic", tuple(p + 1 for p in perm)))
    return a


def whitehead(g: Graph, A: Iterable[int], v: int, check: bool = True) -> Auto:
    """Type (2) Whitehead automorphism ``(A, v)`` for a letter set A and letter v."""
    A = frozenset(A)
    if v not in A or -v in A:
        raise InvalidAutomorphism("need v in A and v^-1 not in A")
    n = g.n
    if any(x == 0 or abs(x) > n for x in A):
        raise GraphError("letter set mentions an unknown vertex")
    kind = ("whitehead2", letter_mask(A), v)
    imgs = _whitehead_images(g, A, v)
    Ainv = (A - {v}) | {-v}
    inv = _whitehead_images(g, Ainv, -v)
    if not check:
        return Auto(g, imgs, inv, kind)
    return _checked(g, imgs, inv, kind)


def _whitehead_images(g: Graph, A: frozenset, v: int) -> tuple[Word, ...]:
    out = []
    pv = abs(v) - 1
    for i in range(g.n):
        x = i + 1
        if i == pv:
            out.append((x,))
            continue
        a, b = x in A, -x in A
        if a and b:
            w = (-v, x, v)
        elif a:
            w = (x, v)
        elif b:
            w = (-v, x)
        else:
            w = (x,)
        out.append(normal_form(g, w))
    return tuple(out)


def r1_inverse(g: Graph, A: Iterable[int], v: int) -> tuple[frozenset, int]:
    A = frozenset(A)
    return (A - {v}) | {-v}, -v


def make_whitehead(g: Graph, A: Iterable, v) -> Auto:
    """``(A, v)`` from vertex names, with letters given as ``name`` or ``(name, -1)``."""

    def conv(x):
        if isinstance(x, tuple):
            return (g.idx(x[0]) + 1) * (1 if x[1] > 0 else -1)
        if isinstance(x, str) and x.endswith("^-1"):
            return -(g.idx(x[:-3]) + 1)
        return g.idx(x) + 1

    return whitehead(g, [conv(a) for a in A], conv(v))


def make_generator(g: Graph, spec: str) -> Auto:
    """Parse ``inv v``, ``trans v w``, ``pconj v {a,b}``, ``tau u v w``, ``wh {v,w^-1} w``."""
    spec = spec.strip()
    head, _, rest = spec.partition(" ")
    rest = rest.strip()

    def braces(text):
        text = text.strip()
        if not (text.startswith("{") and "}" in text):
            raise ValueError(f"expected {{...}} in {spec!r}")
        inner, _, tail = text[1:].partition("}")
        return [t.strip() for t in inner.replace(",", " ").split() if t.strip()], tail.strip()

    if head == "inv":
        return inversion(g, rest)
    if head == "trans":
        v, w = rest.split()
        sign = 1
        if w.endswith("^-1"):
            w, sign = w[:-3], -1
        return transvection(g, v, w, sign)
    if head == "pconj":
        v, _, tail = rest.partition(" ")
        Y, _ = braces(tail)
        return partial_conjugation(g, v, Y)
    if head == "tau":
        u, v, w = rest.split()
        return tau(g, u, v, w)
    if head == "wh":
        A, tail = braces(rest)
        return make_whitehead(g, A, tail)
    raise ValueError(f"unknown generator spec {spec!r}")


# ---------------------------------------------------------------------------
# algebra

def compose(*autos: Auto) -> Auto:
    """Apply the arguments left to right: ``compose(a, b)(x) = b(a(x))``."""
    if not autos:
        raise ValueError("compose needs at least one automorphism")
    g = autos[0].graph
    imgs = autos[0].images
    inv = autos[0].inverse_images
    for b in autos[1:]:
        bi = b.images
        imgs = tuple(_apply(g, bi, w) for w in imgs)
        inv = tuple(_apply(g, inv, w) for w in b.inverse_images)
    return Auto(g, imgs, inv, ("composite",))


def product(factors: Sequence[Auto], convention: str = "functional") -> Auto:
    """Evaluate the written product ``f1 f2 ... fk``.

    ``functional`` reads it as ``f1 ∘ f2 ∘ ... ∘ fk`` (``fk`` acts first);
    ``sequential`` applies ``f1`` first.
    """
    if convention == "functional":
        return compose(*reversed(factors))
    if convention == "sequential":
        return compose(*factors)
    raise ValueError(f"unknown convention {convention!r}")


def power(a: Auto, m: int) -> Auto:
    if m == 0:
        return identity(a.graph)
    base = a if m > 0 else a.inverse()
    out = base
    for _ in range(abs(m) - 1):
        out = compose(out, base)
    return out


def is_identity(a: Auto) -> bool:
    return a.images == _identity_images(a.graph.n)


def auto_ops(g: Graph, a: Auto, b: Auto) -> tuple[Auto, Auto, bool]:
    if a.graph != g or b.graph != g:
        raise GraphError("automorphisms live on a different graph")
    return compose(a, b), a.inverse(), is_identity(a)


def abelianize(a: Auto) -> np.ndarray:
    """Integer matrix on column exponent vectors; column v is the image of v."""
    n = a.graph.n
    m = np.zeros((n, n), dtype=object)
    for col, w in enumerate(a.images):
        for x in w:
            m[abs(x) - 1, col] += 1 if x > 0 else -1
    return m


# ---------------------------------------------------------------------------
# enumeration

def _candidate_sets(g: Graph, v: int) -> Iterable[frozenset]:
    """Letter sets A with multiplier v that could give a Whitehead automorphism.

    Adjacent vertices and singleton components of Γ − st(v) may contribute any
    of ∅, {x}, {x^-1}, {x, x^-1}; a larger component is all-or-nothing.  The
    relator test decides which candidates are genuine.
    """
    for pick in _cartesian(*_candidate_choices(g, v)):
        A = {v}
        for part in pick:
            A.update(part)
        yield frozenset(A)


def _candidate_choices(g: Graph, v: int) -> list[tuple]:
    p = abs(v) - 1
    choices = []
    for j in _bits(g.adj[p]):
        x = j + 1
        choices.append(((), (x,), (-x,), (x, -x)))
    for comp in component_masks(g, p):
        members = list(_bits(comp))
        if len(members) == 1:
            x = members[0] + 1
            choices.append(((), (x,), (-x,), (x, -x)))
        else:
            choices.append(((), tuple(s * (j + 1) for j in members for s in (1, -1))))
    return choices


def random_whitehead(g: Graph, count: int, rng) -> list[Auto]:
    """Up to ``count`` distinct valid moves drawn from the candidate generator.

    ``rng`` is a ``numpy.random.Generator``.  Each draw picks a multiplier
    letter and then one option per group; invalid draws are discarded, so
    the loop stops after ``20 * count`` attempts at the latest.
    """
    found: dict[tuple, Auto] = {}
    letters = [s * (i + 1) for i in range(g.n) for s in (1, -1)]
    for _ in range(20 * count):
        if len(found) >= count:
            break
        v = letters[int(rng.integers(len(letters)))]
        A = {v}
        for opts in _candidate_choices(g, v):
            A.update(opts[int(rng.integers(len(opts)))])
        A = frozenset(A)
        key = (letter_mask(A), v)
        if key not in found:
            a = _try_whitehead(g, A, v)
            if a is not None:
                found[key] = a
    return [found[k] for k in sorted(found, key=lambda k: (letter_key(k[1]), k[0]))]


def _try_whitehead(g: Graph, A: frozenset, v: int) -> Auto | None:
    try:
        return whitehead(g, A, v)
    except InvalidAutomorphism:
        return None


def enumerate_whitehead(g: Graph, max_vertices: int = 8, include_trivial: bool = True) -> list[Auto]:
    """All valid type (2) Whitehead automorphisms ``(A, v)``, ordered by (v, A).

    ``include_trivial`` keeps the moves ``({v}, v)``, which act as the identity.
    """
    if g.n > max_vertices:
        raise EnumerationBoundExceeded(f"{g.n} vertices exceeds bound {max_vertices}")
    out = []
    for i in range(g.n):
        for v in (i + 1, -(i + 1)):
            for A in sorted(_candidate_sets(g, v), key=letter_mask):
                if not include_trivial and len(A) == 1:
                    continue
                a = _try_whitehead(g, A, v)
                if a is not None:
                    out.append(a)
    return out


def exhaustive_whitehead(g: Graph, max_vertices: int = 5) -> list[Auto]:
    """Same as :func:`enumerate_whitehead` but scans every subset of L."""
    if g.n > max_vertices:
        raise EnumerationBoundExceeded(f"{g.n} vertices exceeds bound {max_vertices}")
    letters = [s * (i + 1) for i in range(g.n) for s in (1, -1)]
    out = []
    for i in range(g.n):
        for v in (i + 1, -(i + 1)):
            others = [x for x in letters if abs(x) != i + 1]
            found = []
            for bits in range(1 << len(others)):
                A = frozenset([v] + [others[k] for k in range(len(others)) if bits >> k & 1])
                a = _try_whitehead(g, A, v)
                if a is not None:
                    found.append(a)
            found.sort(key=lambda a: a.kind[1])
            out.extend(found)
    return out


def sym0(g: Graph, max_vertices: int = 8) -> list[Auto]:
    """Graph automorphisms preserving every domination class, by backtracking."""
    if g.n > max_vertices:
        raise EnumerationBoundExceeded(f"{g.n} vertices exceeds bound {max_vertices}")
    n = g.n
    leq = leq_masks(g.adj)
    cls = [leq[i] & sum(1 << j for j in range(n) if leq[j] >> i & 1) for i in range(n)]
    perms: list[tuple[int, ...]] = []
    image = [-1] * n
    used = [False] * n

    def extend(i):
        if i == n:
            perms.append(tuple(image))
            return
        for j in _bits(cls[i]):
            if used[j]:
                continue
            ok = True
            for k in range(i):
                if (g.adj[i] >> k & 1) != (g.adj[j] >> image[k] & 1):
                    ok = False
                    break
            if ok:
                image[i] = j
                used[j] = True
                extend(i + 1)
                used[j] = False
        image[i] = -1

    extend(0)
    return [graphic(g, p) for p in perms]
