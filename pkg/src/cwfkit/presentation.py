"""Reading and writing presentations, generating presets, and rendering reports.

A presentation is a JSON document (schema in ``schema/presentation.schema.json``)
with shared tables of categories, functors, transformations and fibrations,
and a ``payload`` that assembles them into one structure of the given kind.
Serialisation is canonical: sorted keys, sorted composition and cleavage
lists, two-space indentation and a trailing newline.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
import json
from pathlib import Path

import jsonschema

from . import presets as P
from .comonad import Adjunction, Comonad
from .fibration import Fibration, PresheafPair
from .kernel import FinCategory, Functor, KernelError, NatTransf, Report, is_valid_id
from .structures import (
    CompCat, CompCat2Cell, CompCatMorphism, Gcwf, GcwfCell, GcwfMorphism, WC2Cell,
    WCComonad, WCMorphism, arrow_category,
)

__all__ = [
    "FORMAT", "KINDS", "Presentation", "PresentationError", "IntegrityError",
    "parse", "parse_text", "encode", "decode", "emit", "generate", "PRESETS",
]

FORMAT = "cwfkit-presentation/1"
KINDS = ("category", "functor", "nat", "fibration", "presheaf_pair",
         "compcat", "wccmd", "gcwf", "morphism", "twocell")
STRUCTURES = ("compcat", "wccmd", "gcwf")


class PresentationError(ValueError):
    """Unreadable or ill-formed input; ``location`` says where."""

    def __init__(self, message: str, location: str = ""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


class IntegrityError(PresentationError):
    def __init__(self, ident: str, where: str):
        super().__init__(f"unknown id {ident!r}", where)
        self.ident = ident


@lru_cache(maxsize=None)
def _schema() -> dict:
    text = resources.files("cwfkit").joinpath("schema/presentation.schema.json").read_text()
    return json.loads(text)


@dataclass
class Presentation:
    kind: str
    name: str
    payload: dict
    description: str = ""
    categories: dict = field(default_factory=dict)
    functors: dict = field(default_factory=dict)
    transformations: dict = field(default_factory=dict)
    fibrations: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {"format": FORMAT, "kind": self.kind, "name": self.name, "payload": self.payload}
        if self.description:
            d["description"] = self.description
        for key in ("categories", "functors", "transformations", "fibrations"):
            if getattr(self, key):
                d[key] = getattr(self, key)
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Presentation":
        return cls(d["kind"], d["name"], d["payload"], d.get("description", ""),
                   d.get("categories", {}), d.get("functors", {}),
                   d.get("transformations", {}), d.get("fibrations", {}))


# ---------------------------------------------------------------------------
# parsing

def parse_text(text: str, source: str = "<input>") -> Presentation:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise PresentationError(exc.msg, f"{source}:{exc.lineno}:{exc.colno}") from None
    try:
        jsonschema.validate(data, _schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "(root)"
        raise PresentationError(exc.message, f"{source}: at {path}") from None
    pres = Presentation.from_dict(data)
    _check_ids(pres, source)
    _Decoder(pres, source).integrity()
    return pres


def parse(path) -> Presentation:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise PresentationError(exc.strerror or "cannot read file", str(p)) from None
    return parse_text(text, str(p))


def _check_ids(pres: Presentation, source: str) -> None:
    for cname, c in pres.categories.items():
        if "objects" not in c:
            continue
        for x in list(c["objects"]) + list(c["arrows"]):
            if not is_valid_id(x):
                raise PresentationError(f"malformed id {x!r}", f"{source}: categories/{cname}")


# ---------------------------------------------------------------------------
# decoding

def _need(d: dict, key: str, where: str):
    if key not in d:
        raise PresentationError(f"missing field {key!r}", where)
    return d[key]


class _Decoder:
    def __init__(self, pres: Presentation, source: str = "<input>"):
        self.p = pres
        self.source = source
        self._cats: dict = {}
        self._funs: dict = {}
        self._nats: dict = {}
        self._fibs: dict = {}

    def where(self, *parts) -> str:
        return f"{self.source}: " + "/".join(parts)

    def category(self, name: str, _seen=()) -> FinCategory:
        if name in self._cats:
            return self._cats[name]
        entry = self.p.categories.get(name)
        if entry is None:
            raise IntegrityError(name, self.where("categories"))
        if "arrow_category_of" in entry:
            if name in _seen:
                raise PresentationError("cyclic arrow_category_of", self.where("categories", name))
            c = arrow_category(self.category(entry["arrow_category_of"], _seen + (name,)))
        else:
            w = self.where("categories", name)
            objs = set(entry["objects"])
            for f, (s, t) in entry["arrows"].items():
                for x in (s, t):
                    if x not in objs:
                        raise IntegrityError(x, f"{w}/arrows/{f}")
            for x, i in entry["identities"].items():
                if x not in objs:
                    raise IntegrityError(x, f"{w}/identities")
                if i not in entry["arrows"]:
                    raise IntegrityError(i, f"{w}/identities/{x}")
            for g, f, h in entry["composition"]:
                for a in (g, f, h):
                    if a not in entry["arrows"]:
                        raise IntegrityError(a, f"{w}/composition")
            c = FinCategory(tuple(entry["objects"]), {f: tuple(st) for f, st in entry["arrows"].items()},
                            entry["identities"], {(g, f): h for g, f, h in entry["composition"]}, name)
        self._cats[name] = c
        return c

    def functor(self, name: str) -> Functor:
        if name in self._funs:
            return self._funs[name]
        entry = self.p.functors.get(name)
        if entry is None:
            raise IntegrityError(name, self.where("functors"))
        C, D = self.category(entry["dom"]), self.category(entry["cod"])
        w = self.where("functors", name)
        for x, y in entry["objects"].items():
            if x not in C.identities:
                raise IntegrityError(x, f"{w}/objects")
            if y not in D.identities:
                raise IntegrityError(y, f"{w}/objects/{x}")
        for f, g in entry["arrows"].items():
            if f not in C.arrows:
                raise IntegrityError(f, f"{w}/arrows")
            if g not in D.arrows:
                raise IntegrityError(g, f"{w}/arrows/{f}")
        F = Functor(C, D, entry["objects"], entry["arrows"], name)
        self._funs[name] = F
        return F

    def nat(self, name: str) -> NatTransf:
        if name in self._nats:
            return self._nats[name]
        entry = self.p.transformations.get(name)
        if entry is None:
            raise IntegrityError(name, self.where("transformations"))
        F, G = self.functor(entry["dom"]), self.functor(entry["cod"])
        w = self.where("transformations", name)
        for x, a in entry["components"].items():
            if x not in F.dom.identities:
                raise IntegrityError(x, f"{w}/components")
            if a not in F.cod.arrows:
                raise IntegrityError(a, f"{w}/components/{x}")
        t = NatTransf(F, G, entry["components"], name)
        self._nats[name] = t
        return t

    def fibration(self, name: str) -> Fibration:
        if name in self._fibs:
            return self._fibs[name]
        entry = self.p.fibrations.get(name)
        if entry is None:
            raise IntegrityError(name, self.where("fibrations"))
        F = self.functor(entry["functor"])
        cl = None
        if "cleavage" in entry:
            w = self.where("fibrations", name, "cleavage")
            cl = {}
            for e, s, f in entry["cleavage"]:
                if e not in F.dom.identities:
                    raise IntegrityError(e, w)
                if s not in F.cod.arrows:
                    raise IntegrityError(s, w)
                if f not in F.dom.arrows:
                    raise IntegrityError(f, w)
                cl[(e, s)] = f
        fib = Fibration(F, cl, name)
        self._fibs[name] = fib
        return fib

    def integrity(self) -> None:
        for n in self.p.categories:
            self.category(n)
        for n in self.p.functors:
            self.functor(n)
        for n in self.p.transformations:
            self.nat(n)
        for n in self.p.fibrations:
            self.fibration(n)
        self.build()

    # -- structures -----------------------------------------------------
    def structure(self, kind: str, d: dict, where: str):
        if kind == "compcat":
            return CompCat(self.fibration(_need(d, "fibration", where)),
                           self.functor(_need(d, "comprehension", where)), d.get("name", self.p.name))
        if kind == "wccmd":
            K = Comonad(self.functor(_need(d, "functor", where)), self.nat(_need(d, "counit", where)),
                        self.nat(_need(d, "comultiplication", where)))
            return WCComonad(self.fibration(_need(d, "fibration", where)), K, d.get("name", self.p.name))
        if kind == "gcwf":
            adj = Adjunction(self.functor(_need(d, "sigma", where)), self.functor(_need(d, "delta", where)),
                             self.nat(_need(d, "unit", where)), self.nat(_need(d, "counit", where)))
            return Gcwf(self.fibration(_need(d, "types", where)), self.fibration(_need(d, "terms", where)),
                        adj, d.get("name", self.p.name))
        raise PresentationError(f"unknown structure kind {kind!r}", where)

    def morphism(self, d: dict, where: str, default_name: str = ""):
        of = _need(d, "of", where)
        name = d.get("name", default_name)
        dom = self.structure(of, _need(d, "dom", where), f"{where}/dom")
        cod = self.structure(of, _need(d, "cod", where), f"{where}/cod")
        base = self.functor(_need(d, "base", where))
        total = self.functor(_need(d, "total", where))
        if of == "compcat":
            return CompCatMorphism(dom, cod, base, total, self.nat(_need(d, "zeta", where)), name)
        if of == "wccmd":
            return WCMorphism(dom, cod, base, total, self.nat(_need(d, "theta", where)), name)
        return GcwfMorphism(dom, cod, base, total, self.functor(_need(d, "terms", where)),
                            self.nat(_need(d, "zeta", where)), name)

    def twocell(self, d: dict, where: str):
        of = _need(d, "of", where)
        m1 = self.morphism({**_need(d, "dom", where), "of": of}, f"{where}/dom")
        m2 = self.morphism({**_need(d, "cod", where), "of": of}, f"{where}/cod")
        base, total = self.nat(_need(d, "base", where)), self.nat(_need(d, "total", where))
        if of == "compcat":
            return CompCat2Cell(m1, m2, base, total)
        if of == "wccmd":
            return WC2Cell(m1, m2, base, total)
        return GcwfCell(m1, m2, base, total, self.nat(_need(d, "terms", where)))

    def build(self):
        k, d = self.p.kind, self.p.payload
        w = self.where("payload")
        if k == "category":
            return self.category(_need(d, "category", w))
        if k == "functor":
            return self.functor(_need(d, "functor", w))
        if k == "nat":
            return self.nat(_need(d, "transformation", w))
        if k == "fibration":
            return self.fibration(_need(d, "fibration", w))
        if k == "presheaf_pair":
            B = self.category(_need(d, "base", w))
            return PresheafPair(
                B, _need(d, "types", w),
                {(s, a): b for s, a, b in _need(d, "type_restriction", w)},
                _need(d, "terms", w),
                {(s, a): b for s, a, b in _need(d, "term_restriction", w)}, self.p.name)
        if k in STRUCTURES:
            return self.structure(k, d, w)
        if k == "morphism":
            return self.morphism(d, w, self.p.name)
        if k == "twocell":
            return self.twocell(d, w)
        raise PresentationError(f"unknown kind {k!r}", w)


def decode(pres: Presentation):
    """The Python object a presentation describes."""
    return _Decoder(pres).build()


# ---------------------------------------------------------------------------
# encoding

class _Encoder:
    def __init__(self):
        self.categories: dict = {}
        self.functors: dict = {}
        self.transformations: dict = {}
        self.fibrations: dict = {}
        self._names: dict = {}

    def _fresh(self, table: dict, base: str) -> str:
        base = base or "x"
        name, i = base, 2
        while name in table:
            name, i = f"{base}#{i}", i + 1
        return name

    def category(self, c: FinCategory) -> str:
        key = ("c", c)
        if key in self._names:
            return self._names[key]
        for (kind, B), bname in list(self._names.items()):
            if kind == "c" and len(B.arrows) == len(c.objects) and arrow_category(B) == c:
                name = self._fresh(self.categories, f"{bname}^2")
                self.categories[name] = {"arrow_category_of": bname}
                self._names[key] = name
                return name
        name = self._fresh(self.categories, c.name or "C")
        self._names[key] = name
        self.categories[name] = {
            "objects": list(c.objects),
            "arrows": {f: list(c.arrows[f]) for f in c.sorted_arrows},
            "identities": {x: c.identities[x] for x in c.objects},
            "composition": sorted([g, f, h] for (g, f), h in c.composition.items()),
        }
        return name

    def functor(self, F: Functor) -> str:
        key = ("f", F)
        if key in self._names:
            return self._names[key]
        dom, cod = self.category(F.dom), self.category(F.cod)
        name = self._fresh(self.functors, F.name or "F")
        self._names[key] = name
        self.functors[name] = {"dom": dom, "cod": cod, "objects": dict(F.obj_map), "arrows": dict(F.arr_map)}
        return name

    def nat(self, t: NatTransf) -> str:
        key = ("t", t)
        if key in self._names:
            return self._names[key]
        dom, cod = self.functor(t.dom), self.functor(t.cod)
        name = self._fresh(self.transformations, t.name or "t")
        self._names[key] = name
        self.transformations[name] = {"dom": dom, "cod": cod, "components": dict(t.components)}
        return name

    def fibration(self, p: Fibration) -> str:
        key = ("p", p)
        if key in self._names:
            return self._names[key]
        self.category(p.base)
        fn = self.functor(p.functor)
        name = self._fresh(self.fibrations, p.name or "p")
        self._names[key] = name
        entry = {"functor": fn}
        if p.cleavage is not None:
            entry["cleavage"] = sorted([e, s, f] for (e, s), f in p.cleavage.items())
        self.fibrations[name] = entry
        return name

    def structure(self, x) -> tuple[str, dict]:
        if isinstance(x, CompCat):
            return "compcat", {"fibration": self.fibration(x.fibration), "comprehension": self.functor(x.chi)}
        if isinstance(x, WCComonad):
            K = x.comonad
            return "wccmd", {"fibration": self.fibration(x.fibration), "functor": self.functor(K.functor),
                             "counit": self.nat(K.counit), "comultiplication": self.nat(K.comult)}
        if isinstance(x, Gcwf):
            a = x.adjunction
            types = self.fibration(x.types)
            return "gcwf", {"types": types, "terms": self.fibration(x.terms),
                            "sigma": self.functor(a.left), "delta": self.functor(a.right),
                            "unit": self.nat(a.unit), "counit": self.nat(a.counit)}
        raise TypeError(f"cannot encode {type(x).__name__}")

    def morphism(self, m) -> tuple[str, dict]:
        of, dom = self.structure(m.dom)
        _, cod = self.structure(m.cod)
        d = {"of": of, "dom": dom, "cod": cod, "base": self.functor(m.base), "total": self.functor(m.total)}
        if isinstance(m, CompCatMorphism):
            d["zeta"] = self.nat(m.zeta)
        elif isinstance(m, WCMorphism):
            d["theta"] = self.nat(m.theta)
        else:
            d["terms"] = self.functor(m.terms)
            d["zeta"] = self.nat(m.zeta)
        return of, d

    def encode(self, x) -> tuple[str, dict]:
        if isinstance(x, FinCategory):
            return "category", {"category": self.category(x)}
        if isinstance(x, Functor):
            return "functor", {"functor": self.functor(x)}
        if isinstance(x, NatTransf):
            return "nat", {"transformation": self.nat(x)}
        if isinstance(x, Fibration):
            return "fibration", {"fibration": self.fibration(x)}
        if isinstance(x, PresheafPair):
            return "presheaf_pair", {
                "base": self.category(x.base),
                "types": {k: list(v) for k, v in x.types.items()},
                "type_restriction": sorted([s, a, b] for (s, a), b in x.type_restriction.items()),
                "terms": {k: dict(v) for k, v in x.terms.items()},
                "term_restriction": sorted([s, a, b] for (s, a), b in x.term_restriction.items()),
            }
        if isinstance(x, (CompCat, WCComonad, Gcwf)):
            return self.structure(x)
        if isinstance(x, (CompCatMorphism, WCMorphism, GcwfMorphism)):
            return "morphism", self.morphism(x)[1]
        if isinstance(x, (CompCat2Cell, WC2Cell, GcwfCell)):
            of, dom = self.morphism(x.dom)
            _, cod = self.morphism(x.cod)
            dom.pop("of")
            cod.pop("of")
            d = {"of": of, "dom": dom, "cod": cod, "base": self.nat(x.base), "total": self.nat(x.total)}
            if isinstance(x, GcwfCell):
                d["terms"] = self.nat(x.terms)
            return "twocell", d
        raise TypeError(f"cannot encode {type(x).__name__}")


def encode(x, name: str = "", description: str = "") -> Presentation:
    enc = _Encoder()
    kind, payload = enc.encode(x)
    return Presentation(kind, name or getattr(x, "name", "") or kind, payload, description,
                        enc.categories, enc.functors, enc.transformations, enc.fibrations)


# ---------------------------------------------------------------------------
# presets

def _lattice(spec: str) -> FinCategory:
    head, _, arg = spec.partition(":")
    try:
        if head == "boolean_poset":
            return P.boolean_poset(int(arg or 2))
        if head == "chain":
            return P.chain(int(arg or 2))
    except ValueError as exc:
        raise P.PresetError(str(exc)) from None
    simple = {"terminal": P.terminal, "walking_arrow": P.walking_arrow, "walking_cospan": P.walking_cospan}
    if head in simple:
        return simple[head]()
    raise P.PresetError(f"unknown category preset {spec!r}")


def _int(params, i, default):
    try:
        return int(params[i]) if len(params) > i else default
    except ValueError:
        raise P.PresetError(f"expected an integer, got {params[i]!r}") from None


def _presheaf_from_tables(params) -> Gcwf:
    named = {"dcwf1": P.dcwf1, "two_cwf": P.two_cwf, "two_types": P.two_type_cwf, "empty": P.empty_cwf}
    if not params:
        return P.dcwf1()
    if params[0] in named:
        return named[params[0]]()
    try:
        tables = json.loads(Path(params[0]).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise P.PresetError(f"cannot read presheaf tables from {params[0]!r}: {exc}") from None
    base = _lattice(tables.get("base", "terminal"))
    try:
        return P.presheaf_cwf(base, tables.get("types", {}),
                              {(s, a): b for s, a, b in tables.get("type_restriction", [])},
                              tables.get("terms", {}),
                              {(s, a): b for s, a, b in tables.get("term_restriction", [])},
                              {(g, a): tuple(v) for g, a, *v in tables.get("extension", [])},
                              tables.get("name", "cwf"))
    except (KernelError, ValueError, TypeError) as exc:
        raise P.PresetError(f"inconsistent presheaf tables in {params[0]!r}: {exc}") from None


PRESETS = {
    "terminal": lambda ps: P.terminal(),
    "walking_arrow": lambda ps: P.walking_arrow(),
    "walking_cospan": lambda ps: P.walking_cospan(),
    "boolean_poset": lambda ps: P.boolean_poset(_int(ps, 0, 2)),
    "chain": lambda ps: P.chain(_int(ps, 0, 3)),
    "cod_fibration": lambda ps: P.cod_compcat(_lattice(ps[0] if ps else "boolean_poset:2")),
    "display_map": lambda ps: P.display_map(_lattice(ps[0] if ps else "boolean_poset:2"),
                                            ps[1] if len(ps) > 1 else "all"),
    "predicate_compcat": lambda ps: P.predicate_compcat(_lattice(ps[0]) if ps else None),
    "chaotic_compcat": lambda ps: P.chaotic_compcat(_lattice(ps[0]) if ps else None),
    "identity_wc": lambda ps: P.identity_wc(_lattice(ps[0]) if ps else None),
    "chaotic_gcwf": lambda ps: P.chaotic_gcwf(_lattice(ps[0]) if ps else None),
    "presheaf_cwf": _presheaf_from_tables,
    "swap_morphism": lambda ps: P.swap_morphism(),
    "chaotic_swap": lambda ps: P.chaotic_swap(_lattice(ps[0]) if ps else None),
    "initial_to_identities": lambda ps: P.initial_to_identities(),
    "corrupt_b2": lambda ps: P.corrupt_b2(),
    "corrupt_cod_compcat": lambda ps: P.corrupt_cod_compcat(),
}


def generate(preset: str, params=()) -> Presentation:
    """Build a named preset.  Raises :class:`~cwfkit.presets.PresetError` on bad parameters."""
    if preset not in PRESETS:
        raise P.PresetError(f"unknown preset {preset!r}; known: {', '.join(sorted(PRESETS))}")
    params = list(params)
    obj = PRESETS[preset](params)
    label = preset + (f"({','.join(params)})" if params else "")
    return encode(obj, getattr(obj, "name", "") or label, f"generated by preset {label}")


# ---------------------------------------------------------------------------
# report rendering

def _walk(r: Report, path: str):
    here = f"{path}/{r.subject}" if path else r.subject
    yield here, r
    for c in r.children:
        yield from _walk(c, here)


def emit(report: Report, fmt: str = "text") -> bytes:
    """Render a report as indented text or as one JSON object per line."""
    if fmt == "structured":
        lines = []
        for path, r in _walk(report, ""):
            rec = {"check": path, "ok": r.ok}
            if r.errors:
                rec["errors"] = [i.to_dict() for i in r.errors]
            if r.violations:
                rec["violations"] = [i.to_dict() for i in r.violations]
            if r.info:
                rec["info"] = r.info
            lines.append(json.dumps(rec, sort_keys=True, ensure_ascii=False, default=str))
        return ("\n".join(lines) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown format {fmt!r}")
    out = []

    def render(r: Report, depth: int):
        pad = "  " * depth
        out.append(f"{pad}{'PASS' if r.ok else 'FAIL'} {r.subject}")
        for i in r.errors:
            out.append(f"{pad}  error {i.law}: {', '.join(map(str, i.witness))}" + (f" ({i.detail})" if i.detail else ""))
        for i in r.violations:
            out.append(f"{pad}  violation {i.law}: {', '.join(map(str, i.witness))}" + (f" ({i.detail})" if i.detail else ""))
        for k in sorted(r.info):
            out.append(f"{pad}  {k} = {r.info[k]}")
        for c in r.children:
            render(c, depth + 1)

    render(report, 0)
    return ("\n".join(out) + "\n").encode()
