"""Command-line driver.

Exit status is 0 when every check passes, 1 when some check fails (the
first failure is named on stderr) and 2 when the input cannot be read.
"""
from __future__ import annotations

import argparse
from concurrent.futures import ThreadPoolExecutor
import sys
import time

from . import __version__
from .comonad import check_adjunction, check_comonad, comonad_of_adjunction
from .factorization import (
    DEFAULT_BUDGET, check_factorization, enumerate_compcat_morphisms, factor, heart,
    heart_reflection_check, pseudo_cwf_homset,
)
from .fibration import check_fibration, check_presheaf_pair
from .kernel import (
    BudgetExceeded, FinCategory, Functor, KernelError, NatTransf, Report, SearchBudget,
    check_category, check_functor, check_nat,
)
from .fibration import Fibration, PresheafPair
from .presentation import PRESETS, PresentationError, decode, emit, encode, generate, parse
from .presets import PresetError
from .structures import (
    CompCat, CompCat2Cell, CompCatMorphism, Gcwf, GcwfCell, GcwfMorphism, WC2Cell, WCComonad,
    WCMorphism, check_compcat, check_compcat_2cell, check_compcat_morphism, check_gcwf,
    check_gcwf_cell, check_gcwf_morphism, check_wc_2cell, check_wc_morphism, check_wccmd,
    gcwf_lemma_suite, is_cwf, is_fully_faithful,
)
from . import translations as T

__all__ = ["main", "run", "check_object", "InputError"]

STRUCTURE_KINDS = ("compcat", "wccmd", "gcwf")


class InputError(Exception):
    """Bad command-line input; maps to exit status 2."""


# ---------------------------------------------------------------------------
# dispatch

_CHECKERS = [
    (FinCategory, check_category), (Functor, check_functor), (NatTransf, check_nat),
    (Fibration, check_fibration), (PresheafPair, check_presheaf_pair),
    (CompCat, check_compcat), (WCComonad, check_wccmd), (Gcwf, check_gcwf),
    (CompCatMorphism, check_compcat_morphism), (WCMorphism, check_wc_morphism),
    (GcwfMorphism, check_gcwf_morphism), (CompCat2Cell, check_compcat_2cell),
    (WC2Cell, check_wc_2cell), (GcwfCell, check_gcwf_cell),
]


def check_object(x) -> Report:
    for cls, fn in _CHECKERS:
        if isinstance(x, cls):
            return fn(x)
    raise TypeError(f"no checker for {type(x).__name__}")


def _kind_of(x) -> str:
    for kind, classes in (("compcat", (CompCat, CompCatMorphism, CompCat2Cell)),
                          ("wccmd", (WCComonad, WCMorphism, WC2Cell)),
                          ("gcwf", (Gcwf, GcwfMorphism, GcwfCell))):
        if isinstance(x, classes):
            return kind
    return ""


_STEPS = {
    ("compcat", "wccmd"): (T.compcat_to_wccmd, T.compcat_morphism_to_wc, T.compcat_2cell_to_wc),
    ("wccmd", "compcat"): (T.wccmd_to_compcat, T.wc_morphism_to_compcat, T.wc_2cell_to_compcat),
    ("wccmd", "gcwf"): (T.wccmd_to_gcwf, T.wc_morphism_to_gcwf, T.wc_2cell_to_gcwf),
    ("gcwf", "wccmd"): (T.gcwf_to_wccmd, T.gcwf_morphism_to_wc, T.gcwf_cell_to_wc),
}


def translate(x, target: str):
    """Move ``x`` (a structure, morphism or 2-cell) along compcat - wccmd - gcwf."""
    order = list(STRUCTURE_KINDS)
    here = _kind_of(x)
    if not here:
        raise InputError(f"cannot translate a {type(x).__name__}")
    if target not in order:
        raise InputError(f"unknown target kind {target!r}")
    if isinstance(x, (CompCat, WCComonad, Gcwf)):
        level = 0
    elif isinstance(x, (CompCatMorphism, WCMorphism, GcwfMorphism)):
        level = 1
    else:
        level = 2
    i, j = order.index(here), order.index(target)
    step = 1 if j > i else -1
    while i != j:
        x = _STEPS[(order[i], order[i + step])][level](x)
        i += step
    return x


def _as_gcwf(x) -> Gcwf:
    if isinstance(x, (CompCat, WCComonad)):
        return translate(x, "gcwf")
    if isinstance(x, Gcwf):
        return x
    raise InputError(f"expected a compcat, wccmd or gcwf, got {type(x).__name__}")


def _as_compcat(x) -> CompCat:
    if isinstance(x, (WCComonad, Gcwf)):
        return translate(x, "compcat")
    if isinstance(x, CompCat):
        return x
    raise InputError(f"expected a compcat, wccmd or gcwf, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# tasks

def _guarded(name: str, fn, timing: bool) -> Report:
    start = time.perf_counter()
    try:
        r = fn()
        if not isinstance(r, Report):
            r = r.report()
    except BudgetExceeded as exc:
        r = Report(name)
        r.error("budget exceeded", exc.what, detail=str(exc))
    except (KernelError, ValueError) as exc:
        r = Report(name)
        r.error(type(exc).__name__, detail=str(exc))
    if timing:
        r.info["seconds"] = round(time.perf_counter() - start, 6)
    return r


def _run_tasks(title: str, tasks: list, jobs: int, timing: bool) -> Report:
    """Run ``(name, thunk)`` pairs, possibly in parallel; children keep task order."""
    top = Report(title)
    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda t: _guarded(t[0], t[1], timing), tasks))
    else:
        results = [_guarded(name, fn, timing) for name, fn in tasks]
    for r in results:
        top.add(r)
    return top


def _structure_guard(x) -> Report | None:
    r = check_object(x)
    return None if r.ok else r


def roundtrip_tasks(x) -> list:
    tasks = []
    if isinstance(x, CompCat):
        tasks.append(("compcat round trip", lambda: T.compcat_roundtrip(x)))
        w = T.compcat_to_wccmd(x)
    elif isinstance(x, WCComonad):
        tasks.append(("compcat round trip", lambda: T.compcat_roundtrip(T.wccmd_to_compcat(x))))
        w = x
    elif isinstance(x, Gcwf):
        w = T.gcwf_to_wccmd(x)
        tasks.append(("compcat round trip", lambda: T.compcat_roundtrip(T.wccmd_to_compcat(w))))
    else:
        raise InputError(f"roundtrip needs a compcat, wccmd or gcwf, got {type(x).__name__}")
    tasks.append(("wccmd round trip", lambda: T.wccmd_roundtrip(w)))
    tasks.append(("wc comparison", lambda: T.wc_roundtrip_iso(w)))
    g = x if isinstance(x, Gcwf) else None
    tasks.append(("unit equivalence", lambda: T.gcwf_unit_equivalence(g or T.wccmd_to_gcwf(w))))
    if g is not None and is_cwf(g):
        tasks.append(("discrete round trip", lambda: T.discrete_roundtrip(g)))
    return tasks


def lemma_tasks(x) -> list:
    g = _as_gcwf(x)
    return [
        ("gcwf axioms", lambda: check_gcwf(g)),
        ("adjunction", lambda: check_adjunction(g.adjunction)),
        ("induced comonad", lambda: check_comonad(comonad_of_adjunction(g.adjunction))),
        ("induced wccmd", lambda: check_wccmd(T.gcwf_to_wccmd(g))),
        ("induced compcat", lambda: check_compcat(T.gcwf_to_compcat(g))),
        ("lemma suite", lambda: gcwf_lemma_suite(g)),
    ]


def heart_tasks(x, target, budget) -> list:
    c = _as_compcat(x)

    def ff():
        r = Report("heart fully faithful")
        h = heart(c)
        r.info["input_full"] = c.full
        if not is_fully_faithful(h.chi):
            r.fail("heart comprehension not fully faithful")
        return r

    tgt = _as_compcat(target) if target is not None else None
    return [
        ("factorization", lambda: check_factorization(factor(c.chi))),
        ("heart", lambda: check_compcat(heart(c))),
        ("heart fully faithful", ff),
        ("reflection", lambda: heart_reflection_check(c, tgt or heart(c), budget=budget)),
    ]


def _describe(m) -> dict:
    return {"base": dict(sorted(m.base.obj_map.items())),
            "total": dict(sorted(m.total.obj_map.items())),
            "zeta": dict(sorted(m.zeta.components.items()))}


def homset_report(a, b, budget, klass) -> Report:
    r = Report("homset")
    counter = SearchBudget(budget, "homset enumeration")
    if isinstance(a, Gcwf) and isinstance(b, Gcwf) and is_cwf(a) and is_cwf(b):
        found = pseudo_cwf_homset(a, b, budget=counter)
        r.info["count"] = len(found)
        r.info["preserving_chosen_lifts"] = sum(1 for _, keep in found if keep)
        ms = [m for m, _ in found]
    else:
        ms = list(enumerate_compcat_morphisms(_as_compcat(a), _as_compcat(b), klass=klass, budget=counter))
        r.info["count"] = len(ms)
        r.info["class"] = klass
    r.info["steps"] = counter.steps
    descs = sorted((_describe(m) for m in ms), key=lambda d: repr(sorted(d.items())))
    for i, d in enumerate(descs):
        child = r.add(Report(f"morphism {i}"))
        child.info.update(d)
    return r


# ---------------------------------------------------------------------------
# entry points

def _load(path):
    try:
        return decode(parse(path))
    except (PresentationError, KernelError) as exc:
        raise InputError(str(exc)) from None


def _first_failure_path(r: Report, path: str = "") -> tuple[str, object] | None:
    here = f"{path}/{r.subject}" if path else r.subject
    issues = r.errors + r.violations
    if issues:
        return here, issues[0]
    for c in r.children:
        hit = _first_failure_path(c, here)
        if hit:
            return hit
    return None


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text",
                        help="report format (default: text)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help=f"step budget for exhaustive searches (default: {DEFAULT_BUDGET})")
    common.add_argument("--jobs", type=int, default=1, help="run independent checks in N threads")
    common.add_argument("--timing", action="store_true", help="record wall-clock time per check")
    common.add_argument("-o", "--output", help="write the main output here instead of stdout")

    ap = argparse.ArgumentParser(prog="cwfkit", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"cwfkit {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", parents=[common], help="validate presentations")
    p.add_argument("files", nargs="+")
    p = sub.add_parser("gen", parents=[common], help="write a preset presentation")
    p.add_argument("preset", help=", ".join(sorted(PRESETS)))
    p.add_argument("params", nargs="*")
    p = sub.add_parser("translate", parents=[common], help="translate between structure kinds")
    p.add_argument("--from", dest="source", required=True, choices=STRUCTURE_KINDS)
    p.add_argument("--to", dest="target", required=True, choices=STRUCTURE_KINDS)
    p.add_argument("file")
    for name, helptext in (("roundtrip", "strict round trips and the unit equivalence"),
                           ("equivalence", "the unit equivalence certificate"),
                           ("lemmas", "gcwf lemma battery")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("file")
    p = sub.add_parser("heart", parents=[common], help="heart construction and its reflection")
    p.add_argument("file")
    p.add_argument("target", nargs="?", help="full comprehension category to reflect into")
    p = sub.add_parser("enumerate-homset", parents=[common], help="enumerate morphisms between two structures")
    p.add_argument("dom")
    p.add_argument("cod")
    p.add_argument("--class", dest="klass", choices=("strict", "pseudo", "lax"), default="pseudo")
    return ap


def run(args: argparse.Namespace) -> tuple[Report | None, bytes | None]:
    """Execute a parsed command; returns the report and any presentation output."""
    cmd, jobs, timing = args.command, max(1, args.jobs), args.timing
    if cmd == "gen":
        try:
            pres = generate(args.preset, args.params)
        except PresetError as exc:
            raise InputError(str(exc)) from None
        return None, pres.dumps().encode()
    if cmd == "check":
        objs = [(f, _load(f)) for f in args.files]
        tasks = [(f"check {f}", (lambda x=x: check_object(x))) for f, x in objs]
        return _run_tasks("check", tasks, jobs, timing), None
    if cmd == "enumerate-homset":
        a, b = _load(args.dom), _load(args.cod)
        for x in (a, b):
            if _kind_of(x) not in STRUCTURE_KINDS or not isinstance(x, (CompCat, WCComonad, Gcwf)):
                raise InputError("enumerate-homset needs two structures")
        return _run_tasks("enumerate-homset", [
            ("homset", lambda: homset_report(a, b, args.budget, args.klass))], 1, timing), None

    x = _load(args.file)
    bad = _structure_guard(x)
    if bad is not None:
        top = Report(cmd)
        top.add(bad)
        return top, None
    if cmd == "translate":
        if _kind_of(x) != args.source:
            raise InputError(f"input is a {_kind_of(x) or type(x).__name__}, not a {args.source}")
        try:
            y = translate(x, args.target)
        except KernelError as exc:
            top = Report("translate")
            top.error(type(exc).__name__, detail=str(exc))
            return top, None
        top = _run_tasks("translate", [("check output", lambda: check_object(y))], 1, timing)
        return top, encode(y, getattr(y, "name", "")).dumps().encode()
    if cmd == "roundtrip":
        return _run_tasks("roundtrip", roundtrip_tasks(x), jobs, timing), None
    if cmd == "equivalence":
        g = _as_gcwf(x)
        return _run_tasks("equivalence", [("unit equivalence", lambda: T.gcwf_unit_equivalence(g))],
                          jobs, timing), None
    if cmd == "lemmas":
        return _run_tasks("lemmas", lemma_tasks(x), jobs, timing), None
    if cmd == "heart":
        target = _load(args.target) if args.target else None
        return _run_tasks("heart", heart_tasks(x, target, args.budget), jobs, timing), None
    raise InputError(f"unknown command {cmd!r}")


def _write(data: bytes, path: str | None) -> None:
    if path:
        with open(path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        report, output = run(args)
    except InputError as exc:
        print(f"cwfkit: input error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"cwfkit: input error: {exc}", file=sys.stderr)
        return 2

    if output is not None and (report is None or report.ok):
        _write(output, args.output)
        if report is not None and args.format == "structured":
            sys.stderr.buffer.write(emit(report, "structured"))
    elif report is not None:
        data = emit(report, args.format)
        if args.command in ("gen", "translate"):
            sys.stderr.buffer.write(data)
        else:
            _write(data, args.output)
    if report is not None and not report.ok:
        hit = _first_failure_path(report)
        if hit:
            where, issue = hit
            wit = ", ".join(map(str, issue.witness))
            print(f"cwfkit: check failed: {where}: {issue.law}" + (f" [{wit}]" if wit else ""),
                  file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
