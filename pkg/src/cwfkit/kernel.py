"""Finite categories, functors and natural transformations.

Everything is stored as fully materialised tables keyed by opaque string
identifiers.  Equality is extensional on those tables, so two independently
constructed categories with the same objects, arrows and composition compare
equal.  Law checking is exhaustive; every checker returns a :class:`Report`
whose issues carry the offending ids as witnesses.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property
import re

Obj = str
Arr = str

__all__ = [
    "FrozenMap", "Issue", "Report", "KernelError", "BoundaryError",
    "CompositionError", "BudgetExceeded", "tag", "is_valid_id",
    "FinCategory", "Functor", "NatTransf",
    "check_category", "check_functor", "check_nat",
    "identity_functor", "constant_functor", "identity_nat",
    "compose_functors", "vcomp", "hcomp", "whisker_left", "whisker_right",
    "UniquenessError", "unique_arrow", "inverse", "is_iso", "is_monic", "nat_inverse", "is_nat_iso",
    "is_identity_nat", "functor_eq", "nat_eq",
    "poset", "discrete_category", "chaotic_category", "group_category",
    "product_category", "terminal_category",
    "SearchBudget", "enumerate_functors", "enumerate_nats",
]


class KernelError(Exception):
    pass


class BoundaryError(KernelError):
    """Raised when two cells are composed along mismatched boundaries."""


class CompositionError(KernelError):
    pass


class BudgetExceeded(Exception):
    """An exhaustive search visited more nodes than its budget allows."""

    def __init__(self, what: str, budget: int):
        super().__init__(f"{what}: enumeration budget of {budget} steps exceeded")
        self.what = what
        self.budget = budget


class FrozenMap(Mapping):
    """Hashable read-only dict."""

    __slots__ = ("_d", "_h")

    def __init__(self, *args, **kwargs):
        self._d = dict(*args, **kwargs)
        self._h = None

    def __getitem__(self, key):
        return self._d[key]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __contains__(self, key):
        return key in self._d

    def get(self, key, default=None):
        return self._d.get(key, default)

    def __hash__(self):
        if self._h is None:
            self._h = hash(frozenset(self._d.items()))
        return self._h

    def __eq__(self, other):
        if self is other:
            return True
        if isinstance(other, FrozenMap):
            return self._d == other._d
        if isinstance(other, Mapping):
            return self._d == dict(other.items())
        return NotImplemented

    def __repr__(self):
        return f"FrozenMap({self._d!r})"


def _frozen(m) -> FrozenMap:
    return m if isinstance(m, FrozenMap) else FrozenMap(m)


# ---------------------------------------------------------------------------
# identifiers

_ATOM = re.compile(r"[^\s(),\"]+")


def tag(head: str, *parts: str) -> str:
    """Canonical compound identifier ``head(p1,p2,...)``.

    Atomic ids never contain parentheses or commas, so compound ids built
    from well-formed parts parse back uniquely.
    """
    return f"{head}({','.join(parts)})"


def is_valid_id(s: str) -> bool:
    """True for atoms and well-formed ``head(part,...)`` compounds."""
    pos = _parse_id(s, 0)
    return pos == len(s)


def _parse_id(s: str, i: int) -> int:
    m = _ATOM.match(s, i)
    if not m:
        return -1
    i = m.end()
    if i < len(s) and s[i] == "(":
        i += 1
        while True:
            i = _parse_id(s, i)
            if i < 0 or i >= len(s):
                return -1
            if s[i] == ",":
                i += 1
                continue
            if s[i] == ")":
                return i + 1
            return -1
    return i


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class Issue:
    law: str
    witness: tuple
    detail: str = ""

    def to_dict(self):
        d = {"law": self.law, "witness": list(self.witness)}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class Report:
    """Outcome of a checker.

    ``errors`` are structural problems (dangling ids, mismatched boundaries)
    and ``violations`` are failed laws.  Nested reports from sub-checks live
    in ``children``; ``ok`` is false if anything anywhere failed.
    """

    subject: str
    errors: list[Issue] = field(default_factory=list)
    violations: list[Issue] = field(default_factory=list)
    info: dict = field(default_factory=dict)
    children: list["Report"] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors and not self.violations and all(c.ok for c in self.children)

    def __bool__(self):
        return self.ok

    def error(self, law: str, *witness, detail: str = "") -> None:
        self.errors.append(Issue(law, tuple(witness), detail))

    def fail(self, law: str, *witness, detail: str = "") -> None:
        self.violations.append(Issue(law, tuple(witness), detail))

    def add(self, child: "Report") -> "Report":
        self.children.append(child)
        return child

    def issues(self) -> Iterator[Issue]:
        yield from self.errors
        yield from self.violations
        for c in self.children:
            yield from c.issues()

    def laws(self) -> set[str]:
        return {i.law for i in self.issues()}

    def find(self, law: str) -> list[Issue]:
        return [i for i in self.issues() if i.law == law]

    def first_failure(self) -> Issue | None:
        return next(self.issues(), None)

    def to_dict(self) -> dict:
        d = {"subject": self.subject, "ok": self.ok}
        if self.errors:
            d["errors"] = [i.to_dict() for i in self.errors]
        if self.violations:
            d["violations"] = [i.to_dict() for i in self.violations]
        if self.info:
            d["info"] = {k: self.info[k] for k in sorted(self.info)}
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    def __repr__(self):
        status = "ok" if self.ok else f"FAILED {sorted(self.laws())}"
        return f"<Report {self.subject}: {status}>"


# ---------------------------------------------------------------------------
# categories

@dataclass(frozen=True, eq=False)
class FinCategory:
    """A finite category given by its tables.

    ``composition[(g, f)]`` is ``g∘f``; it is defined exactly on the pairs
    with ``tgt(f) == src(g)``.  Construction performs no validation so that
    corrupted tables can be built and fed to :func:`check_category`.
    """

    objects: tuple
    arrows: FrozenMap
    identities: FrozenMap
    composition: FrozenMap
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))
        object.__setattr__(self, "arrows", FrozenMap({f: tuple(st) for f, st in dict(self.arrows).items()}))
        object.__setattr__(self, "identities", _frozen(self.identities))
        object.__setattr__(self, "composition", _frozen(self.composition))

    @classmethod
    def build(cls, objects: Iterable[Obj], arrows: Mapping[Arr, tuple[Obj, Obj]],
              identities: Mapping[Obj, Arr], compose: Callable[[Arr, Arr], Arr],
              name: str = "") -> "FinCategory":
        """Materialise the composition table from a function on composable pairs."""
        arrows = dict(arrows)
        into: dict[Obj, list[Arr]] = {}
        for f, (_, t) in arrows.items():
            into.setdefault(t, []).append(f)
        comp = {}
        for g, (s, _) in arrows.items():
            for f in into.get(s, ()):
                comp[(g, f)] = compose(g, f)
        return cls(tuple(objects), arrows, identities, comp, name)

    # -- equality ---------------------------------------------------------
    @cached_property
    def _key(self):
        return (frozenset(self.objects), self.arrows, self.identities, self.composition)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCategory):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        label = self.name or "FinCategory"
        return f"<{label}: {len(self.objects)} objects, {len(self.arrows)} arrows>"

    # -- access -----------------------------------------------------------
    def src(self, f: Arr) -> Obj:
        return self.arrows[f][0]

    def tgt(self, f: Arr) -> Obj:
        return self.arrows[f][1]

    def id(self, x: Obj) -> Arr:
        return self.identities[x]

    def is_identity(self, f: Arr) -> bool:
        s, t = self.arrows[f]
        return s == t and self.identities.get(s) == f

    def compose(self, *fs: Arr) -> Arr:
        """``compose(h, g, f) == h∘g∘f``."""
        if not fs:
            raise CompositionError("empty composite")
        it = reversed(fs)
        acc = next(it)
        for g in it:
            try:
                acc = self.composition[(g, acc)]
            except KeyError:
                raise CompositionError(f"{g} ∘ {acc} undefined in {self.name or 'category'}") from None
        return acc

    def composable(self, g: Arr, f: Arr) -> bool:
        return (g, f) in self.composition

    @cached_property
    def _hom_index(self):
        idx: dict[tuple[Obj, Obj], list[Arr]] = {}
        into: dict[Obj, list[Arr]] = {}
        out: dict[Obj, list[Arr]] = {}
        for f in sorted(self.arrows):
            s, t = self.arrows[f]
            idx.setdefault((s, t), []).append(f)
            into.setdefault(t, []).append(f)
            out.setdefault(s, []).append(f)
        freeze = lambda d: {k: tuple(v) for k, v in d.items()}
        return freeze(idx), freeze(into), freeze(out)

    def hom(self, x: Obj, y: Obj) -> tuple[Arr, ...]:
        return self._hom_index[0].get((x, y), ())

    def arrows_into(self, y: Obj) -> tuple[Arr, ...]:
        return self._hom_index[1].get(y, ())

    def arrows_from(self, x: Obj) -> tuple[Arr, ...]:
        return self._hom_index[2].get(x, ())

    @cached_property
    def sorted_arrows(self) -> tuple[Arr, ...]:
        return tuple(sorted(self.arrows))

    def renamed(self, name: str) -> "FinCategory":
        return FinCategory(self.objects, self.arrows, self.identities, self.composition, name)


def check_category(c: FinCategory) -> Report:
    r = Report(f"category {c.name or '?'}")
    objs = set(c.objects)
    for f, (s, t) in c.arrows.items():
        for x in (s, t):
            if x not in objs:
                r.error("dangling id", f, x, detail="arrow endpoint is not an object")
    for x in c.objects:
        if x not in c.identities:
            r.error("missing identity", x)
    for x, i in c.identities.items():
        if x not in objs:
            r.error("dangling id", x, detail="identity assigned to a non-object")
        if i not in c.arrows:
            r.error("dangling id", i, detail="identity is not an arrow")
    for (g, f), h in c.composition.items():
        for a in (g, f, h):
            if a not in c.arrows:
                r.error("dangling id", a, detail=f"in composition entry ({g}, {f})")
    if r.errors:
        return r

    for (g, f), h in c.composition.items():
        if c.tgt(f) != c.src(g):
            r.fail("composite of non-composable pair", g, f)
        elif c.arrows[h] != (c.src(f), c.tgt(g)):
            r.fail("src/tgt mismatch", g, f, detail=f"composite {h}")
    for g, (s, _) in c.arrows.items():
        for f in c.arrows_into(s):
            if (g, f) not in c.composition:
                r.fail("composition undefined", g, f)
    for x, i in c.identities.items():
        if c.arrows[i] != (x, x):
            r.fail("identity endpoints", x, i)
    if r.violations:
        return r
    for f, (s, t) in c.arrows.items():
        if c.composition[(c.id(t), f)] != f:
            r.fail("left identity", f)
        if c.composition[(f, c.id(s))] != f:
            r.fail("right identity", f)
    for (g, f), gf in c.composition.items():
        for h in c.arrows_from(c.tgt(g)):
            if c.composition[(h, gf)] != c.composition[(c.composition[(h, g)], f)]:
                r.fail("associativity", h, g, f)
    return r


# ---------------------------------------------------------------------------
# functors and transformations

@dataclass(frozen=True, eq=False)
class Functor:
    dom: FinCategory
    cod: FinCategory
    obj_map: FrozenMap
    arr_map: FrozenMap
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "obj_map", _frozen(self.obj_map))
        object.__setattr__(self, "arr_map", _frozen(self.arr_map))

    def ob(self, x: Obj) -> Obj:
        return self.obj_map[x]

    def ar(self, f: Arr) -> Arr:
        return self.arr_map[f]

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.obj_map, self.arr_map)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Functor):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"<Functor {self.name or '?'}: {self.dom.name or '?'} -> {self.cod.name or '?'}>"

    def named(self, name: str) -> "Functor":
        return Functor(self.dom, self.cod, self.obj_map, self.arr_map, name)


@dataclass(frozen=True, eq=False)
class NatTransf:
    dom: Functor
    cod: Functor
    components: FrozenMap
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "components", _frozen(self.components))

    def __getitem__(self, x: Obj) -> Arr:
        return self.components[x]

    @property
    def source_category(self) -> FinCategory:
        return self.dom.dom

    @property
    def target_category(self) -> FinCategory:
        return self.dom.cod

    @cached_property
    def _key(self):
        return (self.dom, self.cod, self.components)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, NatTransf):
            return NotImplemented
        return self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"<NatTransf {self.name or '?'}: {self.dom.name or '?'} => {self.cod.name or '?'}>"


def functor_eq(f: Functor, g: Functor) -> bool:
    return f == g


def nat_eq(s: NatTransf, t: NatTransf) -> bool:
    return s == t


def check_functor(F: Functor) -> Report:
    r = Report(f"functor {F.name or '?'}")
    C, D = F.dom, F.cod
    for x in F.obj_map:
        if x not in C.identities:
            r.error("domain mismatch", x, detail="object map key is not an object of the domain")
    for f in F.arr_map:
        if f not in C.arrows:
            r.error("domain mismatch", f, detail="arrow map key is not an arrow of the domain")
    for x in C.objects:
        if x not in F.obj_map:
            r.error("map not total", x)
        elif F.obj_map[x] not in D.identities:
            r.error("dangling id", F.obj_map[x], detail=f"image of object {x}")
    for f in C.arrows:
        if f not in F.arr_map:
            r.error("map not total", f)
        elif F.arr_map[f] not in D.arrows:
            r.error("dangling id", F.arr_map[f], detail=f"image of arrow {f}")
    if r.errors:
        return r
    for f, (s, t) in C.arrows.items():
        if D.arrows[F.ar(f)] != (F.ob(s), F.ob(t)):
            r.fail("src/tgt not preserved", f)
    for x in C.objects:
        if F.ar(C.id(x)) != D.id(F.ob(x)):
            r.fail("identity not preserved", x)
    for (g, f), h in C.composition.items():
        if D.composition.get((F.ar(g), F.ar(f))) != F.ar(h):
            r.fail("composition not preserved", g, f)
    return r


def check_nat(t: NatTransf) -> Report:
    r = Report(f"transformation {t.name or '?'}")
    F, G = t.dom, t.cod
    if F.dom != G.dom or F.cod != G.cod:
        r.error("boundary mismatch", F.name, G.name, detail="functors are not parallel")
        return r
    C, D = F.dom, F.cod
    for x in C.objects:
        if x not in t.components:
            r.error("map not total", x)
            continue
        a = t.components[x]
        if a not in D.arrows:
            r.error("dangling id", a, detail=f"component at {x}")
        elif D.arrows[a] != (F.ob(x), G.ob(x)):
            r.error("component endpoint mismatch", x, a)
    for x in t.components:
        if x not in C.identities:
            r.error("domain mismatch", x)
    if r.errors:
        return r
    for f, (s, tt) in C.arrows.items():
        if D.compose(t[tt], F.ar(f)) != D.compose(G.ar(f), t[s]):
            r.fail("naturality", f)
    return r


def identity_functor(c: FinCategory) -> Functor:
    return Functor(c, c, {x: x for x in c.objects}, {f: f for f in c.arrows}, f"Id_{c.name}")


def constant_functor(c: FinCategory, d: FinCategory, x: Obj) -> Functor:
    return Functor(c, d, {y: x for y in c.objects}, {f: d.id(x) for f in c.arrows}, f"const_{x}")


def identity_nat(F: Functor) -> NatTransf:
    return NatTransf(F, F, {x: F.cod.id(F.ob(x)) for x in F.dom.objects}, f"id_{F.name}")


def compose_functors(g: Functor, f: Functor) -> Functor:
    """``g∘f``."""
    if f.cod != g.dom:
        raise BoundaryError(f"cannot compose {g!r} after {f!r}")
    return Functor(
        f.dom, g.cod,
        {x: g.obj_map[y] for x, y in f.obj_map.items()},
        {a: g.arr_map[b] for a, b in f.arr_map.items()},
        f"{g.name}{f.name}" if g.name and f.name else "",
    )


def vcomp(t2: NatTransf, t1: NatTransf) -> NatTransf:
    """Vertical composite ``t2·t1`` (``t1`` first)."""
    if t1.cod != t2.dom:
        raise BoundaryError(f"vertical composite {t2!r} · {t1!r}")
    D = t1.dom.cod
    return NatTransf(t1.dom, t2.cod, {x: D.compose(t2[x], t1[x]) for x in t1.dom.dom.objects})


def whisker_left(F: Functor, t: NatTransf) -> NatTransf:
    """``F t``: apply ``F`` to every component of ``t``."""
    if t.dom.cod != F.dom:
        raise BoundaryError(f"whisker {F!r} after {t!r}")
    return NatTransf(compose_functors(F, t.dom), compose_functors(F, t.cod),
                     {x: F.ar(a) for x, a in t.components.items()})


def whisker_right(t: NatTransf, F: Functor) -> NatTransf:
    """``t F``: the components of ``t`` at objects of the form ``F x``."""
    if F.cod != t.dom.dom:
        raise BoundaryError(f"whisker {t!r} before {F!r}")
    return NatTransf(compose_functors(t.dom, F), compose_functors(t.cod, F),
                     {x: t[F.ob(x)] for x in F.dom.objects})


def hcomp(t2: NatTransf, t1: NatTransf) -> NatTransf:
    """Horizontal composite ``t2 * t1`` for ``t1: F⇒F'`` and ``t2: G⇒G'``."""
    return vcomp(whisker_right(t2, t1.cod), whisker_left(t2.dom, t1))


# ---------------------------------------------------------------------------
# arrows with special properties

class UniquenessError(KernelError):
    """A search that must find exactly one arrow found some other number."""

    def __init__(self, what: str, found: int):
        super().__init__(f"{what}: expected exactly one arrow, found {found}")
        self.what = what
        self.found = found


def unique_arrow(c: FinCategory, x: Obj, y: Obj, pred: Callable[[Arr], bool], what: str = "") -> Arr:
    """The single arrow ``x -> y`` satisfying ``pred``; raises :class:`UniquenessError` otherwise."""
    hits = [h for h in c.hom(x, y) if pred(h)]
    if len(hits) != 1:
        raise UniquenessError(what or f"arrow {x} -> {y}", len(hits))
    return hits[0]


def inverse(c: FinCategory, f: Arr) -> Arr | None:
    s, t = c.arrows[f]
    for g in c.hom(t, s):
        if c.composition[(g, f)] == c.id(s) and c.composition[(f, g)] == c.id(t):
            return g
    return None


def is_iso(c: FinCategory, f: Arr) -> bool:
    return inverse(c, f) is not None


def is_monic(c: FinCategory, f: Arr) -> bool:
    s = c.src(f)
    for x in c.objects:
        seen: dict[Arr, Arr] = {}
        for h in c.hom(x, s):
            fh = c.composition[(f, h)]
            if fh in seen:
                return False
            seen[fh] = h
    return True


def nat_inverse(t: NatTransf) -> NatTransf | None:
    D = t.dom.cod
    comps = {}
    for x, a in t.components.items():
        b = inverse(D, a)
        if b is None:
            return None
        comps[x] = b
    return NatTransf(t.cod, t.dom, comps)


def is_nat_iso(t: NatTransf) -> bool:
    return nat_inverse(t) is not None


def is_identity_nat(t: NatTransf) -> bool:
    return t.dom == t.cod and all(t.dom.cod.is_identity(a) for a in t.components.values())


# ---------------------------------------------------------------------------
# small constructions

def poset(elements: Iterable[Obj], leq: Callable[[Obj, Obj], bool], name: str = "") -> FinCategory:
    """Thin category of a finite preorder; the arrow ``x<=y`` exists iff ``leq(x, y)``."""
    elements = list(elements)
    arrows = {f"{x}<={y}": (x, y) for x in elements for y in elements if leq(x, y)}
    ids = {x: f"{x}<={x}" for x in elements}

    def compose(g, f):
        return f"{arrows[f][0]}<={arrows[g][1]}"

    return FinCategory.build(elements, arrows, ids, compose, name)


def discrete_category(objects: Iterable[Obj], name: str = "") -> FinCategory:
    objects = list(objects)
    arrows = {f"id_{x}": (x, x) for x in objects}
    return FinCategory.build(objects, arrows, {x: f"id_{x}" for x in objects}, lambda g, f: f, name)


def chaotic_category(objects: Iterable[Obj], name: str = "") -> FinCategory:
    """Exactly one arrow ``x~y`` between any two objects."""
    objects = list(objects)
    arrows = {f"{x}~{y}": (x, y) for x in objects for y in objects}

    def compose(g, f):
        return f"{arrows[f][0]}~{arrows[g][1]}"

    return FinCategory.build(objects, arrows, {x: f"{x}~{x}" for x in objects}, compose, name)


def group_category(elements: Iterable[str], mul: Callable[[str, str], str], unit: str,
                   obj: Obj = "*", name: str = "") -> FinCategory:
    """One-object category of a finite group (or monoid)."""
    arrows = {g: (obj, obj) for g in elements}
    return FinCategory.build([obj], arrows, {obj: unit}, mul, name)


def product_category(c: FinCategory, d: FinCategory, name: str = "") -> FinCategory:
    objects = [tag("pr", x, y) for x in c.objects for y in d.objects]
    arrows = {}
    parts = {}
    for f in c.sorted_arrows:
        for g in d.sorted_arrows:
            a = tag("pr", f, g)
            arrows[a] = (tag("pr", c.src(f), d.src(g)), tag("pr", c.tgt(f), d.tgt(g)))
            parts[a] = (f, g)
    ids = {tag("pr", x, y): tag("pr", c.id(x), d.id(y)) for x in c.objects for y in d.objects}

    def compose(a2, a1):
        (f2, g2), (f1, g1) = parts[a2], parts[a1]
        return tag("pr", c.compose(f2, f1), d.compose(g2, g1))

    return FinCategory.build(objects, arrows, ids, compose, name or f"{c.name}x{d.name}")


def terminal_category(name: str = "One") -> FinCategory:
    """The terminal category with object ``*``."""
    return FinCategory(("*",), {"id_*": ("*", "*")}, {"*": "id_*"}, {("id_*", "id_*"): "id_*"}, name)


# ---------------------------------------------------------------------------
# exhaustive enumeration

class SearchBudget:
    """A step counter shared by nested searches; ``None`` means unlimited."""

    def __init__(self, budget: int | None, what: str = "enumeration"):
        self.what, self.budget, self.steps = what, budget, 0

    def tick(self):
        self.steps += 1
        if self.budget is not None and self.steps > self.budget:
            raise BudgetExceeded(self.what, self.budget)


def _budget(what: str, budget) -> SearchBudget:
    return budget if isinstance(budget, SearchBudget) else SearchBudget(budget, what)


def enumerate_functors(
    c: FinCategory,
    d: FinCategory,
    *,
    obj_candidates: Callable[[Obj], Iterable[Obj]] | None = None,
    arr_candidates: Callable[[Arr, Obj, Obj], Iterable[Arr]] | None = None,
    budget: "int | SearchBudget | None" = None,
) -> Iterator[Functor]:
    """All functors ``c -> d`` by backtracking, optionally restricted.

    ``obj_candidates(x)`` limits the images of ``x``; ``arr_candidates(f, X, Y)``
    limits the images of ``f`` given the already-chosen endpoint images.
    Raises :class:`BudgetExceeded` after ``budget`` search nodes.
    """
    counter = _budget("functor enumeration", budget)
    objs = list(c.objects)
    non_ids = [f for f in c.sorted_arrows if not c.is_identity(f)]
    obj_opts = {x: list(obj_candidates(x)) if obj_candidates else list(d.objects) for x in objs}

    def assign_objects(i, om):
        if i == len(objs):
            yield from assign_arrows(0, om, {c.id(x): d.id(om[x]) for x in objs})
            return
        x = objs[i]
        for y in obj_opts[x]:
            counter.tick()
            om[x] = y
            yield from assign_objects(i + 1, om)
        om.pop(x, None)

    def consistent(f, am):
        for (g, h), k in _pairs_touching(f):
            if g in am and h in am and k in am:
                if d.composition.get((am[g], am[h])) != am[k]:
                    return False
        return True

    touching: dict[Arr, list] = {}
    for (g, h), k in c.composition.items():
        for a in {g, h, k}:
            touching.setdefault(a, []).append(((g, h), k))

    def _pairs_touching(f):
        return touching.get(f, ())

    def assign_arrows(i, om, am):
        if i == len(non_ids):
            if all(consistent(f, am) for f in c.identities.values()):
                yield Functor(c, d, dict(om), dict(am))
            return
        f = non_ids[i]
        s, t = om[c.src(f)], om[c.tgt(f)]
        opts = arr_candidates(f, s, t) if arr_candidates else d.hom(s, t)
        for a in opts:
            counter.tick()
            am[f] = a
            if consistent(f, am):
                yield from assign_arrows(i + 1, om, am)
        am.pop(f, None)

    yield from assign_objects(0, {})


def enumerate_nats(
    F: Functor,
    G: Functor,
    *,
    isos_only: bool = False,
    component_filter: Callable[[Obj, Arr], bool] | None = None,
    budget: "int | SearchBudget | None" = None,
) -> Iterator[NatTransf]:
    """All natural transformations ``F ⇒ G`` by backtracking over components."""
    counter = _budget("transformation enumeration", budget)
    C, D = F.dom, F.cod
    objs = list(C.objects)

    def ok_so_far(comps, x):
        for f in C.arrows_from(x):
            y = C.tgt(f)
            if y in comps and D.compose(comps[y], F.ar(f)) != D.compose(G.ar(f), comps[x]):
                return False
        for f in C.arrows_into(x):
            w = C.src(f)
            if w in comps and D.compose(comps[x], F.ar(f)) != D.compose(G.ar(f), comps[w]):
                return False
        return True

    def go(i, comps):
        if i == len(objs):
            yield NatTransf(F, G, dict(comps))
            return
        x = objs[i]
        for a in D.hom(F.ob(x), G.ob(x)):
            counter.tick()
            if isos_only and not is_iso(D, a):
                continue
            if component_filter and not component_filter(x, a):
                continue
            comps[x] = a
            if ok_so_far(comps, x):
                yield from go(i + 1, comps)
            del comps[x]

    yield from go(0, {})
