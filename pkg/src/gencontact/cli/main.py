"""Command-line front end: ``gencontact check|homogenize|dehomogenize|induce-im|examples``."""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .. import atiyah, gcs, hitchin, homog, imgroupoid
from ..report import CONVENTIONS_NOTE, GENERIC_POINT_NOTE, CheckResult
from ..symkernel import ExprSyntaxError, ZeroDenominator, format_expr
from . import catalog
from .fileformat import Structure, StructureError, parse, serialize

SCHEMA = 1
EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
TRUNCATE = 120
MAX_ENTRIES = 8

CHECK_FLAGS = ["almost", "integrable", "jacobi", "contact", "hitchin", "gc", "im", "multiplicative", "atlas"]


@dataclass
class Outcome:
    name: str
    verdict: str
    residuals: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    error: str | None = None
    seconds: float = 0.0

    def to_json(self):
        return {"name": self.name, "verdict": self.verdict, "residuals": self.residuals,
                "notes": self.notes, "error": self.error, "seconds": round(self.seconds, 4)}


def _triple(s: Structure):
    if s.triple is not None:
        return s.triple, None
    if s.theta is not None:
        return hitchin.contact_triple(s.theta), "triple derived from theta as (0, Omega^-1, -Omega)"
    return None, None


def _has_triple(s):
    return s.triple is not None or s.theta is not None


def _almost(s):
    t, note = _triple(s)
    r = gcs.check_almost(t)
    if note:
        r.notes.append(note)
    return [r]


def _integrable(s):
    t, note = _triple(s)
    out = []
    for fn, name in ((gcs.check_integrable, "integrable"), (gcs.check_equations, "equations")):
        try:
            out.append(fn(t))
        except gcs.NotAlmost as exc:
            out.append(_named(exc, name))
    if note:
        for r in out:
            if isinstance(r, CheckResult):
                r.notes.append(note)
    return out


def _jacobi(s):
    t, _ = _triple(s)
    return [gcs.check_jacobi(t.J)]


def _contact(s):
    Om, ok = hitchin.contact_to_atiyah(s.theta)
    r = CheckResult("contact")
    r.add("d_DL Omega", atiyah.atiyah_d(Om))
    r.declare("nondegenerate")
    if not ok:
        r.residuals["nondegenerate"]["det"] = s.chart.one
        r.notes.append("d_DL sigma* theta is degenerate: theta is not a contact form")
    return [r]


def _hitchin(s):
    Om = hitchin.contact_to_atiyah(s.theta).form
    phi = s.triple.phi if s.triple is not None else atiyah.EndoDL.from_blocks(s.chart)
    return [hitchin.check_hitchin_pair(hitchin.HitchinPair(Om, phi))]


def _gc(s):
    if s.gc is not None:
        g, note = s.gc, None
    else:
        t, _ = _triple(s)
        g, note = homog.homogenize(t), "homogenized from the triple on the base"
    out = [homog.check_homogeneity(g), homog.check_gc(g)]
    if note:
        for r in out:
            r.notes.append(note)
    return out


def _im(s):
    out = []
    if s.algebroid is not None:
        out += [imgroupoid.check_lie_algebroid(s.algebroid), imgroupoid.check_flat_connection(s.algebroid)]
        if s.im is not None:
            try:
                out.append(imgroupoid.check_im_form(s.algebroid, s.im))
            except imgroupoid.InvalidAlgebroid as exc:
                out.append(_named(exc, "im_form"))
    if s.groupoid is not None and s.form is not None:
        try:
            prop = CheckResult("induced defining property")
            F = imgroupoid.induced_im_form(s.groupoid, s.form, prop)
            A = imgroupoid.lie_functor(s.groupoid)
            r = imgroupoid.check_im_form(A, F)
            r.name = "induced im_form"
            out += [prop, r]
        except (imgroupoid.NotMultiplicative, imgroupoid.UnsupportedGroupoid) as exc:
            out.append(_named(exc, "induced im_form"))
    return out


def _multiplicative(s):
    return [imgroupoid.check_groupoid(s.groupoid), imgroupoid.check_multiplicative(s.groupoid, s.form)]


def _atlas(s):
    return [atiyah.atlas_compat(s.theta, s.theta2, s.transition)]


def _named(exc, name):
    exc.check_name = name
    return exc


DISPATCH = {
    "almost": (_has_triple, _almost, "almost"),
    "integrable": (_has_triple, _integrable, "integrable"),
    "jacobi": (_has_triple, _jacobi, "jacobi"),
    "contact": (lambda s: s.theta is not None, _contact, "contact"),
    "hitchin": (lambda s: s.theta is not None, _hitchin, "hitchin"),
    "gc": (lambda s: s.gc is not None or _has_triple(s), _gc, "gc"),
    "im": (lambda s: s.im is not None or (s.groupoid is not None and s.form is not None), _im, "im_form"),
    "multiplicative": (lambda s: s.groupoid is not None and s.form is not None, _multiplicative,
                       "multiplicative"),
    "atlas": (lambda s: s.transition is not None and s.theta is not None and s.theta2 is not None, _atlas,
              "atlas"),
}


def _render(res: CheckResult) -> dict:
    return {name: {lab: format_expr(v) for lab, v in entries.items()} for name, entries in res.residuals.items()}


def run(s: Structure, flags: list[str]) -> list[Outcome]:
    """Run the requested checks (all applicable ones when ``flags`` is empty or
    contains 'all').  Engine errors become ``error`` outcomes."""
    explicit = bool(flags) and "all" not in flags
    wanted = [f for f in CHECK_FLAGS if (f in flags if explicit else True)]
    outcomes: dict[str, Outcome] = {}
    for flag in wanted:
        applicable, fn, default_name = DISPATCH[flag]
        if not applicable(s):
            if explicit:
                outcomes[default_name] = Outcome(default_name, "error",
                                                 error=f"the file has no data for --{flag}")
            continue
        start = time.perf_counter()
        try:
            results = fn(s)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            results = [_named(exc, default_name)]
        elapsed = time.perf_counter() - start
        for r in results:
            if isinstance(r, CheckResult):
                o = Outcome(r.name, "pass" if r.passed else "fail", _render(r), list(r.notes))
            else:
                name = getattr(r, "check_name", None) or default_name
                o = Outcome(name, "error", error=f"{type(r).__name__}: {r}")
            o.seconds = elapsed / max(len(results), 1)
            outcomes[o.name] = o
    return [outcomes[k] for k in sorted(outcomes)]


def _verdict(outcomes) -> str:
    if not outcomes:
        return "error"
    return "pass" if all(o.verdict == "pass" for o in outcomes) else "fail"


def report_json(path: str, outcomes: list[Outcome]) -> dict:
    return {
        "schema": SCHEMA,
        "file": path,
        "verdict": _verdict(outcomes),
        "checks": [o.to_json() for o in outcomes],
        "conventions": CONVENTIONS_NOTE,
        "generic_point": GENERIC_POINT_NOTE,
    }


def _clip(text: str, full: bool) -> str:
    if full or len(text) <= TRUNCATE:
        return text
    return text[:TRUNCATE] + f"... ({len(text)} chars, use --full)"


def format_outcomes(outcomes: list[Outcome], full: bool = False) -> str:
    lines = []
    for o in outcomes:
        lines.append(f"{o.verdict.upper():5} {o.name}")
        if o.error:
            lines.append(f"      {o.error}")
        for rname, entries in o.residuals.items():
            if not entries:
                continue
            lines.append(f"      {rname}:")
            items = list(entries.items())
            shown = items if full else items[:MAX_ENTRIES]
            for lab, val in shown:
                lines.append(f"        {lab}: {_clip(val, full)}")
            if len(shown) < len(items):
                lines.append(f"        ... {len(items) - len(shown)} more entries (use --full)")
        for note in o.notes:
            lines.append(f"      note: {note}")
    return "\n".join(lines)


# commands -----------------------------------------------------------------

def _load(path: str) -> Structure:
    text = Path(path).read_text(encoding="utf-8")
    return parse(text)


def cmd_check(args) -> int:
    s = _load(args.file)
    flags = [f for f in CHECK_FLAGS + ["all"] if getattr(args, f, False)]
    outcomes = run(s, flags)
    print(format_outcomes(outcomes, args.full))
    verdict = _verdict(outcomes)
    print(f"verdict: {verdict}")
    if args.report:
        Path(args.report).write_text(json.dumps(report_json(args.file, outcomes), indent=2, sort_keys=True) + "\n",
                                     encoding="utf-8")
    return EXIT_PASS if verdict == "pass" else EXIT_FAIL


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_homogenize(args) -> int:
    s = _load(args.file)
    t, _ = _triple(s)
    if t is None:
        raise StructureError("the file has no triple or theta to homogenize")
    g = homog.homogenize(t, args.fiber)
    _emit(serialize(Structure(g.chart, gc=g), "homogeneous data on the chart with fibre coordinate "
                    + g.fiber), args.output)
    return EXIT_PASS


def cmd_dehomogenize(args) -> int:
    s = _load(args.file)
    if s.gc is None:
        raise StructureError("the file has no [a]/[pi]/[sigma] data")
    try:
        t = homog.dehomogenize(s.gc)
    except homog.NotHomogeneous as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(serialize(Structure(t.chart, triple=t)), args.output)
    return EXIT_PASS


def cmd_induce_im(args) -> int:
    s = _load(args.file)
    if s.groupoid is None or s.form is None:
        raise StructureError("the file needs [groupoid] and [form] sections")
    try:
        F = imgroupoid.induced_im_form(s.groupoid, s.form)
        A = imgroupoid.lie_functor(s.groupoid)
    except (imgroupoid.NotMultiplicative, imgroupoid.UnsupportedGroupoid) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(serialize(Structure(s.chart, algebroid=A, im=F), "IM form induced by a multiplicative form"),
          args.output)
    return EXIT_PASS


def cmd_examples(args) -> int:
    if not args.name:
        for ex in catalog.entries():
            print(f"{ex['name']:28} {ex['description']}")
        return EXIT_PASS
    try:
        text = catalog.read(args.name)
    except catalog.UnknownExample as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(text, args.output)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gencontact",
                                description="Exact checks for generalized contact structures on line bundles.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="run checks on a structure file")
    c.add_argument("file")
    for f in CHECK_FLAGS + ["all"]:
        c.add_argument(f"--{f}", action="store_true")
    c.add_argument("--report", metavar="PATH", help="write a JSON report")
    c.add_argument("--full", action="store_true", help="print residuals untruncated")
    c.set_defaults(func=cmd_check)

    h = sub.add_parser("homogenize", help="write the homogeneous data on M x R^x")
    h.add_argument("file")
    h.add_argument("-o", "--output")
    h.add_argument("--fiber", default=None, help="name of the fibre coordinate (default r)")
    h.set_defaults(func=cmd_homogenize)

    d = sub.add_parser("dehomogenize", help="recover the triple from homogeneous data")
    d.add_argument("file")
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_dehomogenize)

    i = sub.add_parser("induce-im", help="write the IM form induced by a multiplicative form")
    i.add_argument("file")
    i.add_argument("-o", "--output")
    i.set_defaults(func=cmd_induce_im)

    e = sub.add_parser("examples", help="list or print the bundled examples")
    e.add_argument("name", nargs="?")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_examples)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        return args.func(args)
    except (StructureError, ExprSyntaxError, ZeroDenominator) as exc:
        where = getattr(args, "file", "")
        print(f"{where}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"{getattr(args, 'file', '')}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
