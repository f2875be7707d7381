"""Day's relations, integer characters with relation certificates, and the
group identities behind the finite-abelianization argument.

Generators are addressed by hashable keys:

* ``("wh", mask, v)``: the type (2) move ``(A, v)`` with ``mask = letter_mask(A)``
* ``("inv", i)``: the inversion of vertex index ``i``
* ``("sym", images)``: a type (1) automorphism given by the signed images of
  the positive letters

A written product is a tuple of ``(key, exponent)`` pairs.  Products of
automorphisms are read right to left (``functional``): ``X Y`` means "apply
``Y`` first".  The relation list is verified under this reading; see
:func:`convention_report` for the evidence.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .autos import (
    Auto,
    EnumerationBoundExceeded,
    describe,
    enumerate_whitehead,
    identity,
    inversion,
    is_identity,
    letter_mask,
    partial_conjugation,
    product,
    signed_permutation,
    sym0,
    tau,
    transvection,
    whitehead,
)
from .graphs import Graph, PropertyViolation, _bits, component_masks, leq_masks
from .words import letter_key

__all__ = [
    "ALL_TYPES",
    "R0_TYPES",
    "RelationInstance",
    "RelationInconsistency",
    "GeneratorSystem",
    "ZCharacter",
    "CertificateEntry",
    "IdentityCheck",
    "iter_day_instances",
    "enumerate_day_instances",
    "convention_report",
    "build_pi",
    "build_surjection",
    "check_inner_kernel",
    "check_crossed_lantern",
    "check_tau_identity",
    "check_m_transvection",
]

ALL_TYPES = ("R1", "R2", "R3", "R4", "R5", "R6", "R7", "R9", "R10")
R0_TYPES = ALL_TYPES


class RelationInconsistency(RuntimeError):
    """An enumerated relation instance failed to hold: an implementation bug."""


# ---------------------------------------------------------------------------
# generator bookkeeping

def _bit(x: int) -> int:
    return 1 << letter_key(x)


def _pair(x: int) -> int:
    return 3 << (2 * (abs(x) - 1))


class GeneratorSystem:
    """All type (2) moves, inversions and Sym⁰ elements of a graph, by key."""

    def __init__(self, g: Graph, max_vertices: int = 7, moves: Iterable[Auto] | None = None,
                 with_sym: bool = True):
        self.graph = g
        self.sampled = moves is not None
        if moves is None:
            if g.n > max_vertices:
                raise EnumerationBoundExceeded(f"{g.n} vertices exceeds bound {max_vertices}")
            moves = enumerate_whitehead(g, max_vertices=max(8, max_vertices))
        self.moves: dict[tuple, Auto] = {}
        self.by_multiplier: dict[int, list[tuple]] = {}
        for a in moves:
            key = ("wh", a.kind[1], a.kind[2])
            if key in self.moves:
                continue
            self.moves[key] = a
            self.by_multiplier.setdefault(a.kind[2], []).append(key)
        self.inversions = {("inv", i): inversion(g, g.vertices[i]) for i in range(g.n)}
        self.sym: dict[tuple, Auto] = {}
        if with_sym:
            for s in sym0(g, max_vertices=max(8, max_vertices, g.n)):
                self.sym[("sym", tuple(w[0] for w in s.images))] = s
        self.full = (1 << (2 * g.n)) - 1
        self._extra: dict[tuple, Auto] = {}

    @classmethod
    def sampled_system(cls, g: Graph, count: int, seed: int) -> "GeneratorSystem":
        """Random valid moves plus their (R1) inverses and all inner moves; no Sym⁰."""
        import numpy as np

        from .autos import random_whitehead

        rng = np.random.default_rng(np.random.SeedSequence([seed, g.n]))
        picked = random_whitehead(g, count, rng)
        extra = []
        full = (1 << (2 * g.n)) - 1
        for a in picked:
            A, v = a.kind[1], a.kind[2]
            extra.append(whitehead(g, _letters(A & ~_bit(v) | _bit(-v)), -v))
        for i in range(g.n):
            for x in (i + 1, -(i + 1)):
                extra.append(whitehead(g, _letters(full & ~_bit(-x)), x))
        return cls(g, moves=picked + extra, with_sym=False)

    def __getitem__(self, key: tuple) -> Auto:
        tag = key[0]
        if tag == "wh":
            return self.moves[key]
        if tag == "inv":
            return self.inversions[key]
        hit = self.sym.get(key) or self._extra.get(key)
        if hit is None:
            mapping = {i + 1: y for i, y in enumerate(key[1])}
            hit = self._extra[key] = signed_permutation(self.graph, mapping)
        return hit

    def inner_key(self, x: int) -> tuple:
        """Key of ``(L - x^-1, x)``, conjugation by the letter ``x``."""
        return ("wh", self.full & ~_bit(-x), x)

    def name(self, key: tuple) -> str:
        g = self.graph
        if key[0] == "wh":
            return describe(g, ("whitehead2", key[1], key[2]))
        if key[0] == "inv":
            return describe(g, ("inversion", key[1]))
        return describe(g, ("type1", key[1]))

    def evaluate(self, word: Sequence[tuple], convention: str = "functional") -> Auto:
        if not word:
            return identity(self.graph)
        factors = []
        for key, e in word:
            a = self[key]
            factors.extend([a if e > 0 else a.inverse()] * abs(e))
        return product(factors, convention)

    def generator_keys(self) -> list[tuple]:
        return list(self.moves) + list(self.inversions) + list(self.sym)


@dataclass(frozen=True)
class RelationInstance:
    relation_type: str
    lhs: tuple
    rhs: tuple
    side_conditions: dict = field(default_factory=dict, compare=False, hash=False)

    def generators(self) -> tuple:
        return tuple(k for k, _ in self.lhs) + tuple(k for k, _ in self.rhs)


# ---------------------------------------------------------------------------
# enumeration

def _holds(gs: GeneratorSystem, inst: RelationInstance, convention: str) -> bool:
    return gs.evaluate(inst.lhs, convention).images == gs.evaluate(inst.rhs, convention).images


def _signed_image(key: tuple, x: int) -> int:
    y = key[1][abs(x) - 1]
    return y if x > 0 else -y


def _type1_generators(gs: GeneratorSystem) -> list[tuple]:
    return list(gs.sym) + list(gs.inversions)


def _inv_as_sym(gs: GeneratorSystem, key: tuple) -> tuple:
    i = key[1]
    return ("sym", tuple(-(j + 1) if j == i else j + 1 for j in range(gs.graph.n)))


def _raw_instances(gs: GeneratorSystem, types: set, r0_only: bool, stats: dict) -> Iterator[RelationInstance]:
    g = gs.graph
    adj = g.adj
    moves = gs.moves
    mults = sorted(gs.by_multiplier, key=letter_key)

    def adjacent(x, y):
        return adj[abs(x) - 1] >> (abs(y) - 1) & 1

    if "R1" in types:
        for key in moves:
            _, A, v = key
            other = ("wh", A & ~_bit(v) | _bit(-v), -v)
            yield RelationInstance("R1", ((key, -1),), ((other, 1),))

    if "R2" in types:
        for v in mults:
            keys = gs.by_multiplier[v]
            bv = _bit(v)
            for ka in keys:
                for kb in keys:
                    if ka[1] & kb[1] == bv:
                        union = ("wh", ka[1] | kb[1], v)
                        if union not in moves:
                            stats["R2 union not a Whitehead automorphism"] = stats.get("R2 union not a Whitehead automorphism", 0) + 1
                            continue
                        yield RelationInstance("R2", ((ka, 1), (kb, 1)), ((union, 1),))

    if "R3" in types or "R4" in types:
        for v in mults:
            for w in mults:
                if abs(v) == abs(w):
                    continue
                near = adjacent(v, w)
                pv, pw, bw, bwi, bv = _pair(v), _pair(w), _bit(w), _bit(-w), _bit(v)
                Bs = [k for k in gs.by_multiplier[w] if not k[1] & pv]
                if "R3" in types:
                    As = [k for k in gs.by_multiplier[v] if not k[1] & pw]
                    for kb in Bs:
                        B = kb[1]
                        for ka in As:
                            if near or not ka[1] & B:
                                yield RelationInstance("R3", ((kb, 1), (ka, 1), (kb, -1)), ((ka, 1),))
                if "R4" in types:
                    As = [k for k in gs.by_multiplier[v] if k[1] & pw == bwi]
                    for kb in Bs:
                        B = kb[1]
                        shifted = ("wh", B & ~bw | bv, v)
                        for ka in As:
                            if near or not ka[1] & B:
                                if shifted not in moves:
                                    stats["R4 right side not a Whitehead automorphism"] = stats.get("R4 right side not a Whitehead automorphism", 0) + 1
                                    continue
                                yield RelationInstance(
                                    "R4", ((kb, 1), (ka, 1), (kb, -1)), ((ka, 1), (shifted, 1))
                                )

    if "R5" in types and r0_only:
        # sigma_{v,w} sends v to w^-1, so it is never a graphic automorphism
        pass
    elif "R5" in types:
        leq = leq_masks(adj)
        for v in mults:
            i = abs(v) - 1
            for ka in gs.by_multiplier[v]:
                A = ka[1]
                for j in range(g.n):
                    if j == i or not (leq[i] >> j & 1 and leq[j] >> i & 1):
                        continue
                    for w in (j + 1, -(j + 1)):
                        if not A & _bit(w) or A & _bit(-w):
                            continue
                        left = ("wh", A & ~_bit(v) | _bit(-v), w)
                        right = ("wh", A & ~_bit(w) | _bit(-w), v)
                        if left not in moves or right not in moves:
                            stats["R5 factor not a Whitehead automorphism"] = stats.get("R5 factor not a Whitehead automorphism", 0) + 1
                            continue
                        images = list(range(1, g.n + 1))
                        images[i] = -w if v > 0 else w
                        images[j] = v if w > 0 else -v
                        sig = ("sym", tuple(images))
                        yield RelationInstance(
                            "R5", ((left, 1), (ka, 1)), ((right, 1), (sig, 1)), {"v": v, "w": w}
                        )

    if "R6" in types:
        for s in (list(gs.sym) if r0_only else _type1_generators(gs)):
            sk = _inv_as_sym(gs, s) if s[0] == "inv" else s
            for key in moves:
                _, A, v = key
                A2 = letter_mask(_signed_image(sk, x) for x in _letters(A))
                yield RelationInstance(
                    "R6", ((s, 1), (key, 1), (s, -1)), ((("wh", A2, _signed_image(sk, v)), 1),)
                )

    if "R7" in types:
        syms = list(gs.sym)
        # Sym⁰ multiplication table; the product key is read off the images
        for a in syms:
            for b in syms:
                ab = tuple(_signed_image(a, _signed_image(b, i + 1)) for i in range(g.n))
                yield RelationInstance("R7", ((a, 1), (b, 1)), ((("sym", ab), 1),), {"kind": "table"})
        invs = [] if r0_only else list(gs.inversions)
        for a in invs:
            yield RelationInstance("R7", ((a, 2),), (), {"kind": "order"})
        for a in invs:
            for b in invs:
                if a < b:
                    yield RelationInstance("R7", ((a, 1), (b, 1)), ((b, 1), (a, 1)), {"kind": "commute"})
        for s in syms:
            for a in invs:
                j = abs(s[1][a[1]]) - 1
                yield RelationInstance("R7", ((s, 1), (a, 1), (s, -1)), ((("inv", j), 1),), {"kind": "action"})

    if "R9" in types or "R10" in types:
        letters = [s * (i + 1) for i in range(g.n) for s in (1, -1)]
        for key in moves:
            _, A, v = key
            for w in letters:
                inner = gs.inner_key(w)
                if not A & _pair(w):
                    if "R9" in types:
                        yield RelationInstance("R9", ((key, 1), (inner, 1), (key, -1)), ((inner, 1),))
                elif "R10" in types and A & _bit(w) and not A & _bit(-w) and abs(w) != abs(v):
                    yield RelationInstance(
                        "R10", ((key, 1), (inner, 1), (key, -1)), ((gs.inner_key(v), 1), (inner, 1))
                    )


def _letters(mask: int) -> list[int]:
    return [(k // 2 + 1) if k % 2 == 0 else -(k // 2 + 1) for k in _bits(mask)]


def iter_day_instances(
    g: Graph | GeneratorSystem,
    types: Iterable[str] = ALL_TYPES,
    r0_only: bool = True,
    max_vertices: int = 7,
    convention: str = "functional",
    stats: dict | None = None,
) -> Iterator[RelationInstance]:
    """Yield every relation instance, each one checked before it is yielded.

    With ``r0_only`` every type (1) factor is a graphic automorphism in
    Sym⁰: (R6) conjugates by Sym⁰ elements, (R7) is the Sym⁰ multiplication
    table, and (R5) is dropped because ``sigma_{v,w}`` is not graphic.
    Without it the type (1) factors range over the group generated by Sym⁰
    and the inversions.  ``stats`` counts emitted instances per type and the
    pattern matches whose named factors are not Whitehead automorphisms.
    """
    gs = g if isinstance(g, GeneratorSystem) else GeneratorSystem(g, max_vertices)
    types = set(types)
    unknown = types - set(ALL_TYPES)
    if unknown:
        raise ValueError(f"unknown relation types {sorted(unknown)}")
    stats = {} if stats is None else stats
    for inst in _raw_instances(gs, types, r0_only, stats):
        if not _holds(gs, inst, convention):
            raise RelationInconsistency(
                f"{inst.relation_type} instance fails: "
                + " ".join(f"{gs.name(k)}^{e}" for k, e in inst.lhs)
                + " != "
                + " ".join(f"{gs.name(k)}^{e}" for k, e in inst.rhs)
            )
        stats[inst.relation_type] = stats.get(inst.relation_type, 0) + 1
        yield inst


def enumerate_day_instances(
    g: Graph, types: Iterable[str] = ALL_TYPES, r0_only: bool = True, max_vertices: int = 7
) -> list[RelationInstance]:
    return list(iter_day_instances(g, types, r0_only, max_vertices))


def convention_report(g: Graph, types: Iterable[str] = ALL_TYPES, max_vertices: int = 7,
                      r0_only: bool = False) -> dict:
    """For each reading of written products, how many instances fail, by type."""
    gs = GeneratorSystem(g, max_vertices)
    out = {}
    for conv in ("functional", "sequential"):
        fails: dict[str, int] = {}
        for inst in _raw_instances(gs, set(types), r0_only, {}):
            if not _holds(gs, inst, conv):
                fails[inst.relation_type] = fails.get(inst.relation_type, 0) + 1
        out[conv] = fails
    return out


# ---------------------------------------------------------------------------
# characters

@dataclass(frozen=True)
class CertificateEntry:
    relation_type: str
    generators: tuple
    total: int


@dataclass
class ZCharacter:
    """Integer values on a generating set, zero off ``values``.

    ``certificate`` holds one entry per verified relation instance; a
    well-defined character has ``total == 0`` on every entry.
    """

    graph: Graph
    values: dict
    domain_tag: str = "whitehead"
    domain: tuple = ()
    certificate: list = field(default_factory=list)
    certificate_counts: dict = field(default_factory=dict)
    names: dict = field(default_factory=dict)

    def __call__(self, key) -> int:
        return self.values.get(key, 0)

    def evaluate(self, word: Sequence[tuple]) -> int:
        return sum(e * self.values.get(k, 0) for k, e in word)

    def named_values(self, nonzero_only: bool = True) -> dict:
        return {
            self.names.get(k, str(k)): v for k, v in self.values.items() if v or not nonzero_only
        }

    @property
    def certified(self) -> bool:
        return bool(self.certificate) and all(e.total == 0 for e in self.certificate)

    def __sub__(self, other: "ZCharacter") -> "ZCharacter":
        keys = set(self.values) | set(other.values)
        vals = {k: self(k) - other(k) for k in keys}
        return ZCharacter(self.graph, {k: v for k, v in vals.items() if v}, self.domain_tag,
                          self.domain, names={**other.names, **self.names})


def _check_witness_hypotheses(g: Graph, wi: int, ymask: int) -> None:
    leq = leq_masks(g.adj)
    for j in range(g.n):
        if j != wi and leq[j] >> wi & 1:
            raise PropertyViolation(f"{g.vertices[j]} <= {g.vertices[wi]}: w is not minimal")
    if ymask not in component_masks(g, wi):
        raise PropertyViolation("Y is not a component of Γ − st(w)")


def build_pi(g: Graph, w, Y: Iterable, system: GeneratorSystem | None = None) -> ZCharacter:
    """π_Y: 1 on (A, w) and -1 on (A, w^-1) when Y ∪ Y^-1 ⊆ A, else 0."""
    wi = g.idx(w)
    ymask = g.mask(Y)
    _check_witness_hypotheses(g, wi, ymask)
    gs = system or GeneratorSystem(g)
    yl = 0
    for j in _bits(ymask):
        yl |= 3 << 2 * j
    x = wi + 1
    values = {}
    for key in gs.moves:
        _, A, v = key
        if abs(v) == x and A & yl == yl:
            values[key] = 1 if v > 0 else -1
    names = {k: gs.name(k) for k in values}
    return ZCharacter(g, values, "whitehead", tuple(gs.generator_keys()), names=names)


def build_surjection(g: Graph, w, Y: Iterable, Z: Iterable, max_vertices: int = 7,
                     keep_entries: bool = True, r0_only: bool = True) -> ZCharacter:
    """π = π_Y − π_Z with a certificate over every enumerated R⁰ instance.

    Raises :class:`RelationInconsistency` naming the first instance with a
    nonzero exponent sum.
    """
    if g.mask(Y) == g.mask(Z):
        raise PropertyViolation("Y and Z must be different components")
    gs = GeneratorSystem(g, max_vertices)
    pi = build_pi(g, w, Y, gs) - build_pi(g, w, Z, gs)
    pi.names.update({k: gs.name(k) for k in pi.values})
    counts: dict = {}
    vals = pi.values
    for inst in iter_day_instances(gs, R0_TYPES, r0_only, max_vertices, stats=counts):
        total = sum(e * vals.get(k, 0) for k, e in inst.lhs) - sum(e * vals.get(k, 0) for k, e in inst.rhs)
        if total:
            raise RelationInconsistency(
                f"character does not vanish on {inst.relation_type}: "
                + " ".join(f"{gs.name(k)}^{e}" for k, e in inst.lhs)
                + " = "
                + " ".join(f"{gs.name(k)}^{e}" for k, e in inst.rhs)
            )
        if keep_entries:
            pi.certificate.append(CertificateEntry(inst.relation_type, inst.generators(), total))
    pi.certificate_counts = counts
    return pi


def check_inner_kernel(g: Graph, char: ZCharacter) -> bool:
    """Does ``char`` vanish on conjugation by every letter, ``(L - u^-1, u)`` and ``(L - u, u^-1)``?"""
    full = (1 << (2 * g.n)) - 1
    for i in range(g.n):
        for x in (i + 1, -(i + 1)):
            if char(("wh", full & ~_bit(-x), x)):
                return False
    return True


# ---------------------------------------------------------------------------
# identities

CONVENTIONS = (
    ("functional", "a^-1 b^-1 a b"),
    ("functional", "a b a^-1 b^-1"),
    ("sequential", "a^-1 b^-1 a b"),
    ("sequential", "a b a^-1 b^-1"),
)


@dataclass(frozen=True)
class IdentityCheck:
    """Outcome of an identity check under every reading of products and commutators."""

    holds: bool
    passing: tuple

    def __bool__(self):
        return self.holds


def _comm(a: list, b: list, style: str) -> list:
    ai = [x.inverse() for x in reversed(a)]
    bi = [x.inverse() for x in reversed(b)]
    if style == "a^-1 b^-1 a b":
        return ai + bi + a + b
    return a + b + ai + bi


def _check(builder) -> IdentityCheck:
    passing = []
    for conv, style in CONVENTIONS:
        lhs, rhs = builder(style)
        if product(lhs, conv).images == product(rhs, conv).images:
            passing.append((conv, style))
    return IdentityCheck(bool(passing), tuple(passing))


def _pw(a: Auto, m: int) -> list:
    return [a if m > 0 else a.inverse()] * abs(m)


def _with_identity(g: Graph, factors: list) -> list:
    return factors or [identity(g)]


def check_crossed_lantern(g: Graph, v, w, m: int) -> IdentityCheck:
    """``c1^m = [t^m, c2^-1]`` with ``c1 = c_{w,v}``, ``t = t_{v w^-1}``, ``c2 = c_{v,w}``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    i, j = g.idx(v), g.idx(w)
    if i == j or g.adj[i] >> j & 1:
        raise PropertyViolation("need distinct non-adjacent v and w")
    leq = leq_masks(g.adj)
    if not (leq[i] >> j & 1 and leq[j] >> i & 1):
        raise PropertyViolation(f"{v} and {w} are not equivalent")
    c1 = partial_conjugation(g, w, [v])
    c2 = partial_conjugation(g, v, [w])
    t = transvection(g, v, w, -1)

    def build(style):
        lhs = _with_identity(g, _pw(c1, m))
        rhs = _with_identity(g, _comm(_pw(t, m), [c2.inverse()], style))
        return lhs, rhs

    return _check(build)


def check_tau_identity(g: Graph, u, v, w) -> IdentityCheck:
    """``tau_{u,v,w} = c^-1 t_vw^-1 c t_vw`` with ``c = c_{u,v}``; identity when u ∈ lk(v)."""
    a, b, c_ = g.idx(u), g.idx(v), g.idx(w)
    if b in (a, c_):
        raise PropertyViolation("v must differ from u and w")
    t_map = tau(g, u, v, w)
    if g.adj[b] >> a & 1:
        ok = is_identity(t_map)
        return IdentityCheck(ok, tuple(CONVENTIONS) if ok else ())
    c = partial_conjugation(g, u, [v])
    t = transvection(g, v, w)

    def build(style):
        return [t_map], [c.inverse(), t.inverse(), c, t]

    return _check(build)


def check_m_transvection(g: Graph, v, u, w, m: int) -> IdentityCheck:
    """``[t_vu^m, t_uw^m]`` against ``t_vw^{-m^2}`` (u ∈ lk(v)) or ``c^-m (c t_vw^-m)^m`` with ``c = c_{u,v}``."""
    if m < 1:
        raise ValueError("m must be at least 1")
    iv, iu, iw = g.idx(v), g.idx(u), g.idx(w)
    if iu in (iv, iw) or iv == iw:
        raise PropertyViolation("need three distinct vertices")
    t_vu = transvection(g, v, u)
    t_uw = transvection(g, u, w)
    t_vw = transvection(g, v, w)
    near = bool(g.adj[iv] >> iu & 1)
    if not near:
        c = partial_conjugation(g, u, [v])

    def build(style):
        lhs = _comm(_pw(t_vu, m), _pw(t_uw, m), style)
        if near:
            rhs = _pw(t_vw, -m * m)
        else:
            rhs = _pw(c, -m) + ([c] + _pw(t_vw, -m)) * m
        return lhs, rhs

    return _check(build)
