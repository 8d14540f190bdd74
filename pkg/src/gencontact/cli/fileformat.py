"""Structure files: ``[section]`` headers followed by ``key = expression`` lines.

A small example::

    [manifold]
    coords = x, y, z

    [theta]
    dx = -y
    dz = 1

Component keys reuse the labels printed by the engine: ``dx^dy`` and ``e^dz``
for Atiyah forms, ``d/dx^d/dy`` for bivectors, ``1^d/dz`` for the vector
field part of a Jacobi bivector, and ``d/dx -> d/dy`` for the d/dy component
of an endomorphism applied to d/dx (``1`` is the identity derivation).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..atiyah import AtiyahForm, EndoDL, JacobiBivector, TransitionData
from ..gcs import GacsTriple
from ..homog import GcTriple
from ..imgroupoid import GroupoidPresentation, ImForm, LieAlgebroidPresentation
from ..symkernel import (
    Chart,
    Endomorphism,
    ExprSyntaxError,
    Form,
    Multivector,
    RationalExpr,
    RationalMap,
    ZeroDenominator,
    format_expr,
    parse_expr,
)
from ..symkernel.calculus import _sort_sign

LITERAL_KEYS = {
    "manifold": {"coords"},
    "linebundle": {"type"},
    "omega": {"degree"},
    "gc": {"fiber"},
    "algebroid": {"rank"},
    "im": {"degree"},
    "groupoid": {"kind", "target", "source", "third", "fiber"},
    "form": {"degree"},
    "chart2": {"coords"},
}

SECTION_ORDER = ["manifold", "linebundle", "theta", "phi", "J", "omega", "gc", "a", "pi", "sigma",
                 "algebroid", "im", "groupoid", "form", "chart2", "transition", "theta.2"]


class StructureError(ValueError):
    """A malformed structure file; carries the 1-based line and column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


@dataclass
class Entry:
    key: str
    value: str
    line: int
    column: int


def read_sections(text: str) -> dict[str, list[Entry]]:
    sections: dict[str, list[Entry]] = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise StructureError("unterminated section header", lineno, line.index("[") + 1)
            current = stripped[1:-1].strip()
            if current not in SECTION_ORDER:
                raise StructureError(f"unknown section [{current}]", lineno, line.index("[") + 1)
            if current in sections:
                raise StructureError(f"duplicate section [{current}]", lineno, 1)
            sections[current] = []
            continue
        if current is None:
            raise StructureError("entry outside of any section", lineno, 1)
        if "=" not in line:
            raise StructureError("expected 'key = value'", lineno, len(line) - len(line.lstrip()) + 1)
        key, value = line.split("=", 1)
        vcol = len(key) + 2 + (len(value) - len(value.lstrip()))
        key = "".join(key.split())
        if not key:
            raise StructureError("empty key", lineno, 1)
        if any(e.key == key for e in sections[current]):
            raise StructureError(f"duplicate key {key!r}", lineno, 1)
        sections[current].append(Entry(key, value.strip(), lineno, vcol))
    return sections


# label decoding -------------------------------------------------------------

def _coord_token(tok: str, prefix: str, chart: Chart, entry: Entry) -> int:
    if not tok.startswith(prefix) or tok[len(prefix):] not in chart.coords:
        raise StructureError(f"bad component {tok!r} in key {entry.key!r}", entry.line, 1)
    return chart.index(tok[len(prefix):])


def _multi_key(tokens, prefix, chart, entry):
    idx = [_coord_token(t, prefix, chart, entry) for t in tokens]
    key, sign = _sort_sign(idx)
    if sign == 0:
        raise StructureError(f"repeated factor in key {entry.key!r}", entry.line, 1)
    return sign, key


def _expr(entry: Entry, chart: Chart) -> RationalExpr:
    try:
        return parse_expr(entry.value, chart)
    except ExprSyntaxError as exc:
        col = entry.column + (exc.column - 1 if exc.column else 0)
        raise type(exc)(exc.message, entry.line, col) from None
    except ZeroDenominator as exc:
        raise ZeroDenominator(f"line {entry.line}, column {entry.column}: {exc}") from None


def _entries(sections, name):
    lit = LITERAL_KEYS.get(name, set())
    return [e for e in sections.get(name, []) if e.key not in lit]


def _literal(sections, name, key, default=None):
    for e in sections.get(name, []):
        if e.key == key:
            return e
    return default


def _int_literal(sections, name, key, default):
    e = _literal(sections, name, key)
    if e is None:
        return default
    try:
        return int(e.value)
    except ValueError:
        raise StructureError(f"{key} must be an integer", e.line, e.column) from None


def _names(entry: Entry) -> list[str]:
    names = [c.strip() for c in entry.value.split(",") if c.strip()]
    for c in names:
        if not c.isidentifier():
            raise StructureError(f"invalid coordinate name {c!r}", entry.line, entry.column)
    if len(set(names)) != len(names):
        raise StructureError("duplicate coordinate names", entry.line, entry.column)
    return names


def build_atiyah(entries, chart: Chart, degree: int | None = None) -> AtiyahForm:
    c0, c1 = {}, {}
    degs = set()
    for e in entries:
        val = _expr(e, chart)
        if e.key == "1":
            c0[()] = c0.get((), chart.zero) + val
            degs.add(0)
            continue
        toks = e.key.split("^")
        if "e" in toks:
            pos = toks.index("e")
            rest = toks[:pos] + toks[pos + 1:]
            if "e" in rest:
                raise StructureError(f"repeated factor in key {e.key!r}", e.line, 1)
            sign, key = _multi_key(rest, "d", chart, e) if rest else (1, ())
            sign *= -1 if pos % 2 else 1
            c1[key] = c1.get(key, chart.zero) + val * sign
            degs.add(len(toks))
        else:
            sign, key = _multi_key(toks, "d", chart, e)
            c0[key] = c0.get(key, chart.zero) + val * sign
            degs.add(len(toks))
    if degree is None:
        if len(degs) > 1:
            raise StructureError("components of mixed degree", entries[0].line, 1)
        degree = degs.pop() if degs else 2
    elif degs and degs != {degree}:
        bad = next(e for e in entries if (0 if e.key == "1" else len(e.key.split("^"))) != degree)
        raise StructureError(f"component {bad.key!r} does not have degree {degree}", bad.line, 1)
    comp0 = Form(chart, degree, c0)
    comp1 = None if degree == 0 else Form(chart, degree - 1, c1)
    return AtiyahForm(comp0, comp1)


def build_form(entries, chart: Chart, degree: int | None = None) -> Form:
    w = build_atiyah(entries, chart, degree)
    if w.comp1 is not None and not w.comp1.is_zero():
        raise StructureError("ordinary forms have no e-components", entries[0].line, 1)
    return w.comp0


def _bundle_matrix(entries, chart: Chart, labels: list[str]):
    N = len(labels)
    m = [[chart.zero] * N for _ in range(N)]
    for e in entries:
        if "->" not in e.key:
            raise StructureError(f"expected 'source -> target' key, got {e.key!r}", e.line, 1)
        src, dst = e.key.split("->", 1)
        if src not in labels or dst not in labels:
            raise StructureError(f"unknown frame element in key {e.key!r}", e.line, 1)
        m[labels.index(dst)][labels.index(src)] = _expr(e, chart)
    return m


def build_endo(entries, chart: Chart) -> EndoDL:
    return EndoDL(chart, _bundle_matrix(entries, chart, [f"d/d{c}" for c in chart.coords] + ["1"]))


def build_tensor(entries, chart: Chart) -> Endomorphism:
    return Endomorphism(chart, _bundle_matrix(entries, chart, [f"d/d{c}" for c in chart.coords]))


def build_multivector(entries, chart: Chart, degree: int) -> Multivector:
    comps = {}
    for e in entries:
        toks = e.key.split("^")
        if len(toks) != degree:
            raise StructureError(f"component {e.key!r} does not have degree {degree}", e.line, 1)
        sign, key = _multi_key(toks, "d/d", chart, e)
        comps[key] = comps.get(key, chart.zero) + _expr(e, chart) * sign
    return Multivector(chart, degree, comps)


def build_jacobi(entries, chart: Chart) -> JacobiBivector:
    lam = [e for e in entries if not e.key.startswith("1^")]
    ev = [e for e in entries if e.key.startswith("1^")]
    E = {}
    for e in ev:
        i = _coord_token(e.key[2:], "d/d", chart, e)
        E[(i,)] = _expr(e, chart)
    return JacobiBivector(build_multivector(lam, chart, 2), Multivector(chart, 1, E))


# the structure ----------------------------------------------------------------

@dataclass
class Structure:
    chart: Chart
    linebundle: str = "trivial"
    theta: Form | None = None
    triple: GacsTriple | None = None
    gc: GcTriple | None = None
    algebroid: LieAlgebroidPresentation | None = None
    im: ImForm | None = None
    groupoid: GroupoidPresentation | None = None
    groupoid_spec: dict = field(default_factory=dict)
    form: AtiyahForm | None = None
    chart2: Chart | None = None
    transition: TransitionData | None = None
    theta2: Form | None = None

    def canonical(self) -> dict[str, dict[str, str]]:
        return canonical_sections(self)

    def __eq__(self, other):
        return isinstance(other, Structure) and self.canonical() == other.canonical()


def parse(text: str) -> Structure:
    """Parse a structure file.  Raises StructureError, ExprSyntaxError
    (including UndeclaredCoordinate) or ZeroDenominator, all with line numbers."""
    sec = read_sections(text)
    man = _literal(sec, "manifold", "coords")
    if man is None:
        raise StructureError("missing [manifold] coords", 1, 1)
    for e in sec["manifold"]:
        if e.key != "coords":
            raise StructureError(f"unknown key {e.key!r} in [manifold]", e.line, 1)
    chart = Chart(_names(man))
    s = Structure(chart)

    lb = _literal(sec, "linebundle", "type")
    if lb is not None:
        if lb.value not in ("trivial", "atlas"):
            raise StructureError("linebundle type is 'trivial' or 'atlas'", lb.line, lb.column)
        s.linebundle = lb.value

    if "theta" in sec:
        s.theta = build_form(sec["theta"], chart, 1)

    if any(k in sec for k in ("phi", "J", "omega")):
        phi = build_endo(sec.get("phi", []), chart)
        J = build_jacobi(sec.get("J", []), chart)
        deg = _int_literal(sec, "omega", "degree", 2)
        if deg != 2:
            raise StructureError("omega has degree 2", _literal(sec, "omega", "degree").line, 1)
        omega = build_atiyah(_entries(sec, "omega"), chart, 2)
        s.triple = GacsTriple(phi, J, omega)

    if any(k in sec for k in ("gc", "a", "pi", "sigma")):
        fe = _literal(sec, "gc", "fiber")
        fiber = fe.value if fe is not None else "r"
        if fiber not in chart.coords:
            raise StructureError(f"fibre coordinate {fiber!r} is not declared", fe.line if fe else 1, 1)
        s.gc = GcTriple(build_tensor(sec.get("a", []), chart), build_multivector(sec.get("pi", []), chart, 2),
                        build_form(sec.get("sigma", []), chart, 2), fiber)

    if "algebroid" in sec:
        s.algebroid = _build_algebroid(sec, chart)
    if "im" in sec:
        if s.algebroid is None:
            raise StructureError("[im] needs an [algebroid] section", sec["im"][0].line if sec["im"] else 1, 1)
        s.im = _build_im(sec, chart, s.algebroid.rank)

    if "groupoid" in sec:
        s.groupoid, s.groupoid_spec = _build_groupoid(sec, chart)
    if "form" in sec:
        if s.groupoid is None:
            raise StructureError("[form] needs a [groupoid] section", 1, 1)
        deg = _int_literal(sec, "form", "degree", None)
        s.form = build_atiyah(_entries(sec, "form"), s.groupoid.G, deg)

    if "chart2" in sec or "transition" in sec:
        c2 = _literal(sec, "chart2", "coords")
        if c2 is None:
            raise StructureError("missing [chart2] coords", 1, 1)
        s.chart2 = Chart(_names(c2))
        tr = {e.key: e for e in sec.get("transition", [])}
        images = []
        for c in s.chart2.coords:
            if c not in tr:
                raise StructureError(f"[transition] lacks {c!r}", 1, 1)
            images.append(_expr(tr[c], chart))
        for k, e in tr.items():
            if k not in s.chart2.coords and k != "cocycle":
                raise StructureError(f"unknown key {k!r} in [transition]", e.line, 1)
        cocycle = _expr(tr["cocycle"], chart) if "cocycle" in tr else chart.one
        s.transition = TransitionData(RationalMap(chart, s.chart2, images), cocycle)
        if "theta.2" in sec:
            s.theta2 = build_form(sec["theta.2"], s.chart2, 1)
    return s


def _build_algebroid(sec, chart):
    rank = _int_literal(sec, "algebroid", "rank", None)
    if rank is None:
        raise StructureError("[algebroid] needs rank", 1, 1)
    n = chart.dim
    anchor = [[chart.zero] * n for _ in range(rank)]
    br = [[[chart.zero] * rank for _ in range(rank)] for _ in range(rank)]
    gamma = [chart.zero] * rank

    def idx(tok, e):
        try:
            i = int(tok)
        except ValueError:
            raise StructureError(f"bad index {tok!r}", e.line, 1) from None
        if not 1 <= i <= rank:
            raise StructureError(f"index {i} out of range 1..{rank}", e.line, 1)
        return i - 1

    for e in _entries(sec, "algebroid"):
        parts = e.key.split(".")
        if parts[0] == "anchor" and len(parts) == 3:
            anchor[idx(parts[1], e)][_coord_token(parts[2], "d/d", chart, e)] = _expr(e, chart)
        elif parts[0] == "bracket" and len(parts) == 4:
            i, j, k = (idx(p, e) for p in parts[1:])
            if i == j:
                raise StructureError("bracket of a frame element with itself", e.line, 1)
            v = _expr(e, chart)
            br[i][j][k] = v
            br[j][i][k] = -v
        elif parts[0] == "connection" and len(parts) == 2:
            gamma[idx(parts[1], e)] = _expr(e, chart)
        else:
            raise StructureError(f"unknown key {e.key!r} in [algebroid]", e.line, 1)
    return LieAlgebroidPresentation.build(chart, anchor, br, gamma)


def _build_im(sec, chart, rank):
    k = _int_literal(sec, "im", "degree", None)
    if k is None or k < 1:
        raise StructureError("[im] needs degree >= 1", 1, 1)
    ls = {i: [] for i in range(rank)}
    Ds = {i: [] for i in range(rank)}
    for e in _entries(sec, "im"):
        parts = e.key.split(".", 2)
        if len(parts) != 3 or parts[0] not in ("l", "D"):
            raise StructureError(f"unknown key {e.key!r} in [im]", e.line, 1)
        try:
            i = int(parts[1]) - 1
        except ValueError:
            raise StructureError(f"bad index {parts[1]!r}", e.line, 1) from None
        if not 0 <= i < rank:
            raise StructureError(f"index {i + 1} out of range", e.line, 1)
        (ls if parts[0] == "l" else Ds)[i].append(Entry(parts[2], e.value, e.line, e.column))
    l_frame = [build_atiyah(ls[i], chart, k - 1) for i in range(rank)]
    D_frame = [build_atiyah(Ds[i], chart, k) for i in range(rank)]
    return ImForm.build(chart, k, l_frame, D_frame)


def _build_groupoid(sec, chart):
    kind_e = _literal(sec, "groupoid", "kind")
    if kind_e is None:
        raise StructureError("[groupoid] needs kind", 1, 1)
    kind = kind_e.value
    spec = {"kind": kind}
    rep_e = _literal(sec, "groupoid", "rep")
    for e in sec["groupoid"]:
        if e.key not in LITERAL_KEYS["groupoid"] | {"rep"}:
            raise StructureError(f"unknown key {e.key!r} in [groupoid]", e.line, 1)
    if kind == "pair":
        names = []
        for key, suffix in (("target", "1"), ("source", "2"), ("third", "3")):
            e = _literal(sec, "groupoid", key)
            ns = _names(e) if e is not None else [f"{c}{suffix}" for c in chart.coords]
            if len(ns) != chart.dim:
                raise StructureError(f"{key} needs {chart.dim} names", e.line, e.column)
            names.append(ns)
            spec[key] = ", ".join(ns)
        G = GroupoidPresentation.pair(chart, names=names)
        if rep_e is not None:
            G = GroupoidPresentation.pair(chart, _expr(rep_e, G.G), names=names)
    elif kind == "bundle":
        e = _literal(sec, "groupoid", "fiber")
        fiber = _names(e) if e is not None else ["a"]
        spec["fiber"] = ", ".join(fiber)
        G = GroupoidPresentation.bundle_of_groups(chart, tuple(fiber))
        if rep_e is not None and not _expr(rep_e, G.G).is_one():
            raise StructureError("bundles of groups carry the trivial cocycle", rep_e.line, rep_e.column)
    elif kind == "unit":
        G = GroupoidPresentation.unit(chart)
    else:
        raise StructureError("groupoid kind is pair, bundle or unit", kind_e.line, kind_e.column)
    return G, spec


# serialization ------------------------------------------------------------

def _items(obj) -> dict[str, str]:
    return {lab: format_expr(v) for lab, v in obj.components() if not v.is_zero()}


def _form_items(w: Form) -> dict[str, str]:
    return {lab: format_expr(v) for lab, v in w.items() if not v.is_zero()}


def _endo_items(m, labels) -> dict[str, str]:
    out = {}
    for b, src in enumerate(labels):
        for a, dst in enumerate(labels):
            if not m[a][b].is_zero():
                out[f"{src} -> {dst}"] = format_expr(m[a][b])
    return out


def canonical_sections(s: Structure) -> dict[str, dict[str, str]]:
    ch = s.chart
    out: dict[str, dict[str, str]] = {"manifold": {"coords": ", ".join(ch.coords)}}
    out["linebundle"] = {"type": s.linebundle}
    if s.theta is not None:
        out["theta"] = _form_items(s.theta)
    if s.triple is not None:
        t = s.triple
        out["phi"] = _endo_items(t.phi.m, [f"d/d{c}" for c in ch.coords] + ["1"])
        out["J"] = _items(t.J)
        out["omega"] = {"degree": "2", **_items(t.omega)}
    if s.gc is not None:
        g = s.gc
        out["gc"] = {"fiber": g.fiber}
        out["a"] = _endo_items(g.a.m, [f"d/d{c}" for c in ch.coords])
        out["pi"] = _form_items(g.pi)
        out["sigma"] = _form_items(g.sigma)
    if s.algebroid is not None:
        A = s.algebroid
        sec = {"rank": str(A.rank)}
        for i, row in enumerate(A.anchor):
            for k, v in enumerate(row):
                if not v.is_zero():
                    sec[f"anchor.{i + 1}.d/d{ch.coords[k]}"] = format_expr(v)
        for i in range(A.rank):
            for j in range(i + 1, A.rank):
                for k in range(A.rank):
                    v = A.brackets[i][j][k]
                    if not v.is_zero():
                        sec[f"bracket.{i + 1}.{j + 1}.{k + 1}"] = format_expr(v)
        for i, g in enumerate(A.gamma):
            if not g.is_zero():
                sec[f"connection.{i + 1}"] = format_expr(g)
        out["algebroid"] = sec
    if s.im is not None:
        F = s.im
        sec = {"degree": str(F.degree)}
        for i, v in enumerate(F.l_frame):
            for lab, val in _items(v).items():
                sec[f"l.{i + 1}.{lab}"] = val
        for i, v in enumerate(F.D_frame):
            for lab, val in _items(v).items():
                sec[f"D.{i + 1}.{lab}"] = val
        out["im"] = sec
    if s.groupoid is not None:
        sec = dict(s.groupoid_spec)
        if not s.groupoid.rep.is_one():
            sec["rep"] = format_expr(s.groupoid.rep)
        out["groupoid"] = sec
    if s.form is not None:
        out["form"] = {"degree": str(s.form.degree), **_items(s.form)}
    if s.chart2 is not None:
        out["chart2"] = {"coords": ", ".join(s.chart2.coords)}
        tr = {c: format_expr(v) for c, v in zip(s.chart2.coords, s.transition.F.images)}
        tr["cocycle"] = format_expr(s.transition.cocycle)
        out["transition"] = tr
        if s.theta2 is not None:
            out["theta.2"] = _form_items(s.theta2)
    return out


def serialize(s: Structure, header: str | None = None) -> str:
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
        lines.append("")
    for name, entries in canonical_sections(s).items():
        lines.append(f"[{name}]")
        for k, v in entries.items():
            lines.append(f"{k} = {v}")
        lines.append("")
    return "\n".join(lines)
