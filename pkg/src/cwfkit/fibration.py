"""Grothendieck fibrations between finite categories.

Cartesianness is always decided by brute-force search over the tables; a
cleavage is just a lookup table whose entries are re-certified by that same
search whenever a fibration is checked.
"""
from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import NamedTuple

from .kernel import (
    Arr, BoundaryError, FinCategory, FrozenMap, Functor, KernelError, NatTransf, Obj,
    Report, check_functor, check_nat, compose_functors, identity_functor, tag, unique_arrow,
)

__all__ = [
    "Fibration", "FibMorphism", "Fib2Cell", "PresheafPair", "Square",
    "NotAFibration", "SquareError",
    "is_cartesian", "cartesian_arrows", "check_fibration", "make_cleavage",
    "is_discrete", "is_split", "is_vertical", "is_pullback",
    "check_fib_morphism", "check_fib_2cell", "preserves_cleavage",
    "check_presheaf_pair", "grothendieck", "cartesian_factor",
    "identity_fib_morphism", "compose_fib_morphisms",
]


class NotAFibration(KernelError):
    def __init__(self, obj: Obj, base_arrow: Arr):
        super().__init__(f"no cartesian lift of {base_arrow} at {obj}")
        self.witness = (obj, base_arrow)


class SquareError(KernelError):
    """A square handed to the pullback oracle does not commute."""


def _functor(p) -> Functor:
    return p.functor if isinstance(p, Fibration) else p


@lru_cache(maxsize=512)
def _cartesian_set(p: Functor) -> frozenset:
    return frozenset(f for f in p.dom.arrows if _is_cartesian(p, f))


def _is_cartesian(p: Functor, f: Arr) -> bool:
    E, B = p.dom, p.cod
    a, b = E.arrows[f]
    sigma = p.ar(f)
    pa = p.ob(a)
    for g in E.arrows_into(b):
        c = E.src(g)
        pg = p.ar(g)
        candidates = E.hom(c, a)
        for w in B.hom(p.ob(c), pa):
            if B.compose(sigma, w) != pg:
                continue
            n = 0
            for h in candidates:
                if p.ar(h) == w and E.compose(f, h) == g:
                    n += 1
                    if n > 1:
                        return False
            if n != 1:
                return False
    return True


def is_cartesian(p, f: Arr) -> bool:
    """Decide cartesianness of ``f`` for ``p`` (a functor or a fibration) by search."""
    return f in _cartesian_set(_functor(p))


def cartesian_arrows(p) -> frozenset:
    return _cartesian_set(_functor(p))


def is_vertical(p, f: Arr) -> bool:
    P = _functor(p)
    return P.cod.is_identity(P.ar(f))


def cartesian_factor(p, f: Arr, g: Arr, w: Arr) -> Arr:
    """The unique ``h`` over ``w`` with ``f∘h = g``."""
    P = _functor(p)
    E = P.dom
    return unique_arrow(E, E.src(g), E.src(f),
                        lambda h: P.ar(h) == w and E.compose(f, h) == g,
                        f"factor of {g} through {f} over {w}")


@dataclass(frozen=True, eq=False)
class Fibration:
    """A functor ``total -> base`` with an optional cleavage.

    ``cleavage[(E, sigma)]`` is the chosen lift of ``sigma`` with codomain ``E``.
    """

    functor: Functor
    cleavage: FrozenMap | None = None
    name: str = ""

    def __post_init__(self):
        if self.cleavage is not None and not isinstance(self.cleavage, FrozenMap):
            object.__setattr__(self, "cleavage", FrozenMap(self.cleavage))

    @property
    def total(self) -> FinCategory:
        return self.functor.dom

    @property
    def base(self) -> FinCategory:
        return self.functor.cod

    def ob(self, x: Obj) -> Obj:
        return self.functor.ob(x)

    def ar(self, f: Arr) -> Arr:
        return self.functor.ar(f)

    @property
    def cartesian(self) -> frozenset:
        return _cartesian_set(self.functor)

    def is_cartesian(self, f: Arr) -> bool:
        return f in self.cartesian

    def is_vertical(self, f: Arr) -> bool:
        return self.base.is_identity(self.functor.ar(f))

    def lift(self, e: Obj, sigma: Arr) -> Arr:
        if self.cleavage is None:
            raise KernelError(f"fibration {self.name or '?'} has no cleavage")
        return self.cleavage[(e, sigma)]

    def reindex(self, e: Obj, sigma: Arr) -> Obj:
        return self.total.src(self.lift(e, sigma))

    def lifts(self) -> list[tuple[Obj, Arr]]:
        """All pairs ``(E, sigma)`` that a cleavage has to cover."""
        return [(e, s) for e in self.total.objects for s in self.base.arrows_into(self.ob(e))]

    def factor(self, f: Arr, g: Arr, w: Arr) -> Arr:
        return cartesian_factor(self.functor, f, g, w)

    def with_cleavage(self, cleavage: Mapping | None) -> "Fibration":
        return Fibration(self.functor, None if cleavage is None else FrozenMap(cleavage), self.name)

    @cached_property
    def _key(self):
        return (self.functor, self.cleavage)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Fibration):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"<Fibration {self.name or '?'} over {self.base.name or '?'}>"


def _lift_index(P: Functor) -> dict:
    idx: dict[tuple[Obj, Arr], list[Arr]] = {}
    for f in P.dom.sorted_arrows:
        idx.setdefault((P.dom.tgt(f), P.ar(f)), []).append(f)
    return idx


def check_fibration(p) -> Report:
    fib = p if isinstance(p, Fibration) else Fibration(p)
    P = fib.functor
    r = Report(f"fibration {fib.name or P.name or '?'}")
    fr = check_functor(P)
    if not fr.ok:
        r.add(fr)
        return r
    cart = fib.cartesian
    idx = _lift_index(P)
    for e, s in fib.lifts():
        if not any(f in cart for f in idx.get((e, s), ())):
            r.fail("not-a-fibration", e, s, detail="no cartesian lift")
    if fib.cleavage is not None:
        for (e, s), f in fib.cleavage.items():
            if f not in P.dom.arrows:
                r.error("dangling id", f, detail=f"chosen lift at ({e}, {s})")
            elif P.dom.tgt(f) != e or P.ar(f) != s:
                r.fail("cleavage lift misplaced", e, s, f)
            elif f not in cart:
                r.fail("cleavage lift not cartesian", e, s, f)
        for e, s in fib.lifts():
            if (e, s) not in fib.cleavage:
                r.fail("cleavage incomplete", e, s)
        extra = set(fib.cleavage) - set(fib.lifts())
        for e, s in sorted(extra):
            r.error("cleavage entry out of range", e, s)
    r.info["cartesian"] = len(cart)
    return r


def make_cleavage(p, tiebreak: Callable[[Arr], object] | None = None) -> Fibration:
    """Choose, for each ``(E, sigma)``, the least certified cartesian lift.

    The order is the arrow id itself unless ``tiebreak`` supplies a key.
    """
    fib = p if isinstance(p, Fibration) else Fibration(p)
    cart = fib.cartesian
    idx = _lift_index(fib.functor)
    key = tiebreak or (lambda f: f)
    cl = {}
    for e, s in fib.lifts():
        options = [f for f in idx.get((e, s), ()) if f in cart]
        if not options:
            raise NotAFibration(e, s)
        cl[(e, s)] = min(options, key=key)
    return fib.with_cleavage(cl)


def is_discrete(p) -> bool:
    """Every ``(E, sigma)`` has exactly one lift among *all* arrows."""
    fib = p if isinstance(p, Fibration) else Fibration(p)
    idx = _lift_index(fib.functor)
    return all(len(idx.get(k, ())) == 1 for k in fib.lifts())


def is_split(fib: Fibration) -> bool:
    E, B = fib.total, fib.base
    for e in E.objects:
        if fib.lift(e, B.id(fib.ob(e))) != E.id(e):
            return False
    for e, s in fib.lifts():
        f = fib.lift(e, s)
        d = E.src(f)
        for t in B.arrows_into(B.src(s)):
            if fib.lift(e, B.compose(s, t)) != E.compose(f, fib.lift(d, t)):
                return False
    return True


# ---------------------------------------------------------------------------
# morphisms

@dataclass(frozen=True, eq=False)
class FibMorphism:
    dom: Fibration
    cod: Fibration
    base: Functor
    total: Functor
    name: str = ""

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.base, self.total)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FibMorphism):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)


@dataclass(frozen=True, eq=False)
class Fib2Cell:
    dom: FibMorphism
    cod: FibMorphism
    base: NatTransf
    total: NatTransf


def check_fib_morphism(m: FibMorphism) -> Report:
    r = Report(f"fibration morphism {m.name or '?'}")
    if m.base.dom != m.dom.base or m.base.cod != m.cod.base:
        r.error("boundary mismatch", "base")
    if m.total.dom != m.dom.total or m.total.cod != m.cod.total:
        r.error("boundary mismatch", "total")
    if r.errors:
        return r
    for sub in (check_functor(m.base), check_functor(m.total)):
        if not sub.ok:
            r.add(sub)
    if not r.ok:
        return r
    P, Q, B, H = m.dom.functor, m.cod.functor, m.base, m.total
    for x in m.dom.total.objects:
        if Q.ob(H.ob(x)) != B.ob(P.ob(x)):
            r.fail("square not commuting", x)
    for f in m.dom.total.sorted_arrows:
        if Q.ar(H.ar(f)) != B.ar(P.ar(f)):
            r.fail("square not commuting", f)
    cart = m.cod.cartesian
    for f in sorted(m.dom.cartesian):
        if H.ar(f) not in cart:
            r.fail("cartesianness lost", f, H.ar(f))
    return r


def check_fib_2cell(t: Fib2Cell) -> Report:
    r = Report("fibration 2-cell")
    if t.base.dom != t.dom.base or t.base.cod != t.cod.base:
        r.error("boundary mismatch", "base")
    if t.total.dom != t.dom.total or t.total.cod != t.cod.total:
        r.error("boundary mismatch", "total")
    if r.errors:
        return r
    for sub in (check_nat(t.base), check_nat(t.total)):
        if not sub.ok:
            r.add(sub)
    if not r.ok:
        return r
    Q, P = t.dom.cod.functor, t.dom.dom.functor
    for x in t.dom.dom.total.objects:
        if Q.ar(t.total[x]) != t.base[P.ob(x)]:
            r.fail("2-cell not over base", x)
    return r


def preserves_cleavage(m: FibMorphism) -> bool:
    """Chosen lifts go to chosen lifts.  Morphisms are not required to do this."""
    for (e, s), f in m.dom.cleavage.items():
        if m.total.ar(f) != m.cod.lift(m.total.ob(e), m.base.ar(s)):
            return False
    return True


def identity_fib_morphism(fib: Fibration) -> FibMorphism:
    return FibMorphism(fib, fib, identity_functor(fib.base), identity_functor(fib.total))


def compose_fib_morphisms(m2: FibMorphism, m1: FibMorphism) -> FibMorphism:
    if m1.cod != m2.dom:
        raise BoundaryError("fibration morphisms are not composable")
    return FibMorphism(m1.dom, m2.cod, compose_functors(m2.base, m1.base),
                       compose_functors(m2.total, m1.total))


# ---------------------------------------------------------------------------
# pullbacks

class Square(NamedTuple):
    """A square in a category::

        P --top--> X
        |          |
       left      right
        v          v
        Y -bottom-> Z
    """

    top: Arr
    left: Arr
    right: Arr
    bottom: Arr


def is_pullback(base: FinCategory, sq: Square) -> bool:
    """Exhaustive universal-cone test.  Raises :class:`SquareError` if ``sq`` does not commute."""
    top, left, right, bottom = sq
    B = base
    if B.src(top) != B.src(left) or B.tgt(top) != B.src(right) \
            or B.tgt(left) != B.src(bottom) or B.tgt(right) != B.tgt(bottom):
        raise SquareError(f"square {tuple(sq)} has mismatched corners")
    if B.compose(right, top) != B.compose(bottom, left):
        raise SquareError(f"square {tuple(sq)} does not commute")
    P, X, Y = B.src(top), B.tgt(top), B.tgt(left)
    for c in B.objects:
        for a in B.hom(c, X):
            ra = B.compose(right, a)
            for b in B.hom(c, Y):
                if ra != B.compose(bottom, b):
                    continue
                n = sum(1 for h in B.hom(c, P)
                        if B.compose(top, h) == a and B.compose(left, h) == b)
                if n != 1:
                    return False
    return True


# ---------------------------------------------------------------------------
# presheaves of types and terms

@dataclass(frozen=True, eq=False)
class PresheafPair:
    """Finite presheaves of types and terms over ``base``.

    ``type_restriction[(sigma, A)]`` is ``A[sigma]`` for ``sigma: X -> Y`` and
    ``A`` a type over ``Y``; terms likewise.  ``terms[X][t]`` is the type of ``t``.
    """

    base: FinCategory
    types: FrozenMap
    type_restriction: FrozenMap
    terms: FrozenMap
    term_restriction: FrozenMap
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "types", FrozenMap({x: tuple(v) for x, v in dict(self.types).items()}))
        object.__setattr__(self, "terms", FrozenMap({x: FrozenMap(v) for x, v in dict(self.terms).items()}))
        for attr in ("type_restriction", "term_restriction"):
            v = getattr(self, attr)
            if not isinstance(v, FrozenMap):
                object.__setattr__(self, attr, FrozenMap(v))

    def ty(self, x: Obj) -> tuple:
        return self.types.get(x, ())

    def tm(self, x: Obj) -> Mapping:
        return self.terms.get(x, FrozenMap())


def _check_presheaf(r: Report, B: FinCategory, elems, restr, what: str) -> None:
    for f in B.sorted_arrows:
        x, y = B.arrows[f]
        for a in elems(y):
            if (f, a) not in restr:
                r.error(f"{what} restriction missing", f, a)
            elif restr[(f, a)] not in elems(x):
                r.error(f"{what} restriction out of range", f, a)
    if r.errors:
        return
    for x in B.objects:
        for a in elems(x):
            if restr[(B.id(x), a)] != a:
                r.fail(f"{what} identity restriction", x, a)
    for (g, f), gf in B.composition.items():
        for a in elems(B.tgt(g)):
            if restr[(gf, a)] != restr[(f, restr[(g, a)])]:
                r.fail(f"{what} restriction not functorial", g, f, a)


def check_presheaf_pair(P: PresheafPair) -> Report:
    r = Report(f"presheaf pair {P.name or '?'}")
    _check_presheaf(r, P.base, P.ty, P.type_restriction, "type")
    _check_presheaf(r, P.base, lambda x: tuple(P.tm(x)), P.term_restriction, "term")
    for x in P.base.objects:
        for t, a in P.tm(x).items():
            if a not in P.ty(x):
                r.error("term type out of range", x, t, a)
    if r.errors:
        return r
    for f in P.base.sorted_arrows:
        for t, a in P.tm(P.base.tgt(f)).items():
            t2 = P.term_restriction[(f, t)]
            if P.tm(P.base.src(f))[t2] != P.type_restriction[(f, a)]:
                r.fail("non-natural projection", f, t)
    return r


def _elements(B: FinCategory, elems, restr, name: str) -> Fibration:
    objects = [tag("el", x, a) for x in B.objects for a in elems(x)]
    arrows, over = {}, {}
    for f in B.sorted_arrows:
        x, y = B.arrows[f]
        for a in elems(y):
            h = tag("res", f, a)
            arrows[h] = (tag("el", x, restr[(f, a)]), tag("el", y, a))
            over[h] = (f, a)
    ids = {tag("el", x, a): tag("res", B.id(x), a) for x in B.objects for a in elems(x)}

    def compose(h2, h1):
        g, a = over[h2]
        f, _ = over[h1]
        return tag("res", B.compose(g, f), a)

    E = FinCategory.build(objects, arrows, ids, compose, name)
    ob = {tag("el", x, a): x for x in B.objects for a in elems(x)}
    p = Functor(E, B, ob, {h: over[h][0] for h in arrows}, f"p_{name}")
    cleavage = {(tag("el", B.tgt(f), a), f): tag("res", f, a) for f, a in over.values()}
    return Fibration(p, cleavage, name)


def grothendieck(P: PresheafPair) -> tuple[Fibration, Fibration, FibMorphism]:
    """Categories of elements of types and terms, and the typing projection between them."""
    r = check_presheaf_pair(P)
    if not r.ok:
        raise KernelError(f"invalid presheaf pair: {r.first_failure()}")
    B = P.base
    ty = _elements(B, P.ty, P.type_restriction, f"Ty_{P.name}" if P.name else "Ty")
    tm = _elements(B, lambda x: tuple(P.tm(x)), P.term_restriction, f"Tm_{P.name}" if P.name else "Tm")
    typing = {}
    for x in B.objects:
        for t, a in P.tm(x).items():
            typing[tag("el", x, t)] = tag("el", x, a)
    arr = {}
    for f in B.sorted_arrows:
        for t, a in P.tm(B.tgt(f)).items():
            arr[tag("res", f, t)] = tag("res", f, a)
    sigma = Functor(tm.total, ty.total, typing, arr, "typing")
    return ty, tm, FibMorphism(tm, ty, identity_functor(B), sigma, "typing")
