"""Line-based text formats for quivers, superpotentials, groups and theta maps.

Every format uses ``key: value`` lines and ``#`` comments.  Quivers are given
inline (``vertices:`` plus ``arrow NAME TAIL HEAD`` lines) or by reference
(``quiver: other.quiver``, relative to the referencing file).
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from pathlib import Path as FilePath
from typing import Callable

from .cyclotomic import CyclotomicNumber, parse_scalar
from .expr import ParseError
from .quiver import PathAlgebraElement, Quiver, parse_element
from .superpotential import Superpotential, SuperpotentialError, Twist, cyclic_symmetrize

_NAME = re.compile(r"^[A-Za-z0-9_'#>]+$")


@dataclass
class _Line:
    number: int
    text: str


def _lines(text: str) -> list[_Line]:
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        # names may contain '#', so a comment starts at a '#' opening a word
        m = re.search(r"(^|\s)#", raw)
        body = raw[:m.start()] if m else raw
        if body.strip():
            out.append(_Line(i, body.rstrip()))
    return out


def _split_key(line: _Line, source: str) -> tuple[str, str]:
    if ":" in line.text:
        key, value = line.text.split(":", 1)
        key = key.strip()
        if " " not in key:
            return key, value.strip()
    word = line.text.split()[0]
    return word, line.text[len(line.text) - len(line.text.lstrip()) + len(word):].strip()


def _error(source: str, line: _Line, message: str, expected: str | None = None, column: int = 1):
    return ParseError(message, source=source, line=line.number, column=column, expected=expected)


def _yes_no(value: str, source: str, line: _Line) -> bool:
    v = value.lower()
    if v in ("yes", "true", "1"):
        return True
    if v in ("no", "false", "0"):
        return False
    raise _error(source, line, f"bad flag {value!r}", "yes or no")


def _int(value: str, source: str, line: _Line, what: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise _error(source, line, f"bad {what} {value!r}", "an integer") from None


# quivers --------------------------------------------------------------------

def _read_quiver_lines(lines: list[_Line], source: str, base_dir: FilePath) -> tuple[Quiver | None, list[_Line]]:
    vertices: list[str] | None = None
    arrows: list[tuple[str, str, str]] = []
    arrow_lines: list[_Line] = []
    rest = []
    ref: tuple[_Line, str] | None = None
    for line in lines:
        key, value = _split_key(line, source)
        if key == "vertices":
            vertices = value.replace(",", " ").split()
            if not vertices:
                raise _error(source, line, "empty vertex list", "vertex labels")
        elif key == "arrow":
            parts = value.split()
            if len(parts) != 3:
                raise _error(source, line, "malformed arrow line", "arrow NAME TAIL HEAD")
            if not _NAME.match(parts[0]):
                raise _error(source, line, f"bad arrow name {parts[0]!r}", "letters, digits, _ ' # >")
            arrows.append((parts[0], parts[1], parts[2]))
            arrow_lines.append(line)
        elif key == "quiver":
            ref = (line, value)
        else:
            rest.append(line)
    if ref is not None:
        if vertices is not None or arrows:
            raise _error(source, ref[0], "quiver given both inline and by reference")
        path = base_dir / ref[1]
        if not path.exists():
            raise _error(source, ref[0], f"quiver file {ref[1]!r} not found", "an existing file")
        return parse_quiver_file(path), rest
    if vertices is None:
        if arrows:
            raise _error(source, arrow_lines[0], "arrows given before any vertex list", "vertices: ...")
        return None, rest
    try:
        q = Quiver(vertices, [])
        for (name, t, h), line in zip(arrows, arrow_lines):
            for v in (t, h):
                if v not in q._vindex:
                    raise _error(source, line, f"unknown vertex {v!r}", "a declared vertex")
        return Quiver(vertices, arrows), rest
    except (KeyError, ValueError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise _error(source, arrow_lines[0] if arrow_lines else lines[0], str(exc)) from None


def parse_quiver(text: str, source: str = "<quiver>", base_dir: FilePath | None = None) -> Quiver:
    lines = _lines(text)
    q, rest = _read_quiver_lines(lines, source, base_dir or FilePath("."))
    if rest:
        raise _error(source, rest[0], f"unexpected line {rest[0].text.strip()!r}", "vertices:, arrow or quiver:")
    if q is None:
        raise ParseError("no quiver defined", source=source, line=1, expected="vertices: ...")
    return q


def parse_quiver_file(path) -> Quiver:
    path = FilePath(path)
    return parse_quiver(path.read_text(), str(path), path.parent)


def emit_quiver(q: Quiver) -> str:
    lines = ["vertices: " + " ".join(q.vertices)]
    for a in q.arrows:
        lines.append(f"arrow {a.name} {q.vertices[a.tail]} {q.vertices[a.head]}")
    return "\n".join(lines) + "\n"


# superpotentials --------------------------------------------------------------

def parse_superpotential(text: str, source: str = "<superpotential>",
                         base_dir: FilePath | None = None) -> Superpotential:
    lines = _lines(text)
    quiver, rest = _read_quiver_lines(lines, source, base_dir or FilePath("."))
    degree: int | None = None
    expand = False
    tw_vertices: dict[str, str] = {}
    tw_arrows: dict[str, str] = {}
    terms: list[_Line] = []
    twist_line = None
    for line in rest:
        key, value = _split_key(line, source)
        if key == "degree":
            degree = _int(value, source, line, "degree")
        elif key == "expand_cyclic":
            expand = _yes_no(value, source, line)
        elif key == "twist":
            parts = value.split()
            if len(parts) != 3 or parts[0] not in ("vertex", "arrow"):
                raise _error(source, line, "malformed twist line", "twist vertex U V or twist arrow X Y")
            (tw_vertices if parts[0] == "vertex" else tw_arrows)[parts[1]] = parts[2]
            twist_line = twist_line or line
        elif key == "term":
            terms.append(line)
        elif key == "name":
            pass
        else:
            raise _error(source, line, f"unknown key {key!r}",
                         "vertices, arrow, quiver, degree, expand_cyclic, twist or term")
    if quiver is None:
        raise ParseError("no quiver defined", source=source, line=1, expected="vertices: ... or quiver: FILE")
    if degree is None:
        raise ParseError("missing degree", source=source, line=lines[-1].number if lines else 1,
                         expected="degree: N")
    twist = None
    if tw_vertices or tw_arrows:
        try:
            twist = Twist.from_names(quiver, tw_vertices, tw_arrows)
        except (KeyError, SuperpotentialError) as exc:
            raise _error(source, twist_line, str(exc.args[0] if exc.args else exc)) from None
    total = PathAlgebraElement.zero(quiver)
    for line in terms:
        _, value = _split_key(line, source)
        offset = line.text.index(value) if value else 0
        try:
            x = parse_element(quiver, value, source=source, line=line.number)
        except ParseError as exc:
            exc.column += offset
            raise ParseError(exc.message, source=source, line=line.number, column=exc.column,
                             expected=exc.expected) from None
        total = total + x
    if expand:
        top = total.homogeneous_part(degree)
        try:
            total = cyclic_symmetrize(top, degree, twist) + (total - top)
        except SuperpotentialError as exc:
            raise _error(source, terms[0] if terms else lines[0], str(exc)) from None
    return Superpotential(total, degree, twist)


def parse_superpotential_file(path) -> Superpotential:
    path = FilePath(path)
    return parse_superpotential(path.read_text(), str(path), path.parent)


def emit_superpotential(phi: Superpotential) -> str:
    q = phi.quiver
    out = [emit_quiver(q).rstrip("\n"), f"degree: {phi.degree}", "expand_cyclic: no"]
    if phi.twist is not None:
        for v, w in enumerate(phi.twist.vertex_map):
            if v != w:
                out.append(f"twist vertex {q.vertices[v]} {q.vertices[w]}")
        for a, b in enumerate(phi.twist.arrow_map):
            if a != b:
                out.append(f"twist arrow {q.arrows[a].name} {q.arrows[b].name}")
    for p in phi.element.support():
        single = PathAlgebraElement(q, {p: phi.element.terms[p]})
        out.append(f"term: {single}")
    return "\n".join(out) + "\n"


# groups -------------------------------------------------------------------------

@dataclass
class GroupSpec:
    name: str
    dimension: int
    generators: list[list[list[CyclotomicNumber]]]
    generator_names: list[str]
    order: int | None = None
    dual: bool = False
    aliases: dict[str, str] = field(default_factory=dict)


def substitute(text: str, values: dict[str, str]) -> str:
    def repl(m):
        key = m.group(1)
        if key not in values:
            raise KeyError(key)
        return values[key]
    return re.sub(r"\$([A-Za-z_][A-Za-z0-9_]*)", repl, text)


def parse_group(text: str, source: str = "<group>", values: dict[str, str] | None = None) -> GroupSpec:
    if values is not None or "$" in text:
        try:
            text = substitute(text, values or {})
        except KeyError as exc:
            key = exc.args[0]
            where = next((i + 1 for i, t in enumerate(text.splitlines()) if f"${key}" in t), 1)
            raise ParseError(f"template parameter ${key} is not set", source=source, line=where,
                             expected=f"--set {key}=VALUE") from None
    lines = _lines(text)
    name = ""
    dimension = None
    order = None
    dual = False
    aliases: dict[str, str] = {}
    gens: list[list[list[CyclotomicNumber]]] = []
    gen_names: list[str] = []
    current: list[list[CyclotomicNumber]] | None = None
    start = None
    for line in lines:
        key, value = _split_key(line, source)
        if current is not None:
            if key == "end":
                gens.append(current)
                current = None
                continue
            row = []
            col = 1
            for cell in line.text.split(","):
                try:
                    row.append(parse_scalar(cell, source=source, line=line.number))
                except ParseError as exc:
                    raise ParseError(exc.message, source=source, line=line.number,
                                     column=col + exc.column - 1, expected=exc.expected) from None
                col += len(cell) + 1
            current.append(row)
            continue
        if key == "name":
            name = value
        elif key == "dimension":
            dimension = _int(value, source, line, "dimension")
        elif key == "cyclotomic":
            order = _int(value, source, line, "cyclotomic order")
        elif key == "dual":
            dual = _yes_no(value, source, line)
        elif key == "generator":
            current = []
            start = line
            gen_names.append(value or f"g{len(gen_names)}")
        elif key == "alias":
            parts = value.split()
            if len(parts) != 2:
                raise _error(source, line, "malformed alias line", "alias I>J#K NAME")
            aliases[parts[0]] = parts[1]
        else:
            raise _error(source, line, f"unknown key {key!r}", "name, cyclotomic, dimension, dual, generator or alias")
    if current is not None:
        raise _error(source, start, "generator block is not closed", "end")
    if dimension is None:
        raise ParseError("missing dimension", source=source, line=1, expected="dimension: D")
    for g, gname in zip(gens, gen_names):
        if len(g) != dimension or any(len(r) != dimension for r in g):
            raise ParseError(f"generator {gname} is not {dimension}x{dimension}", source=source, line=1,
                             expected=f"{dimension} rows of {dimension} entries")
    if order is not None:
        for g, gname in zip(gens, gen_names):
            for r in g:
                for x in r:
                    try:
                        x.in_order(order)
                    except ValueError:
                        raise ParseError(f"entry {x} of generator {gname} is not in Q(z({order}))",
                                         source=source, line=1, expected=f"entries over z({order})") from None
    return GroupSpec(name, dimension, gens, gen_names, order, dual, aliases)


def parse_group_file(path, values: dict[str, str] | None = None) -> GroupSpec:
    path = FilePath(path)
    return parse_group(path.read_text(), str(path), values)


def emit_group(spec: GroupSpec) -> str:
    out = []
    if spec.name:
        out.append(f"name: {spec.name}")
    if spec.order is not None:
        out.append(f"cyclotomic: {spec.order}")
    out.append(f"dimension: {spec.dimension}")
    out.append(f"dual: {'yes' if spec.dual else 'no'}")
    for gname, g in zip(spec.generator_names, spec.generators):
        out.append(f"generator {gname}")
        for row in g:
            out.append("  " + ", ".join(str(x) for x in row))
        out.append("end")
    for k, v in spec.aliases.items():
        out.append(f"alias {k} {v}")
    return "\n".join(out) + "\n"


# theta maps -----------------------------------------------------------------------

@dataclass
class ThetaSpec:
    superpotential: Superpotential
    k: int
    images: dict[int, dict[object, PathAlgebraElement]]


def parse_theta(text: str, source: str = "<theta>", base_dir: FilePath | None = None,
                loader: Callable | None = None) -> ThetaSpec:
    base_dir = base_dir or FilePath(".")
    lines = _lines(text)
    phi = None
    k = None
    entries: list[tuple[_Line, str]] = []
    for line in lines:
        key, value = _split_key(line, source)
        if key == "superpotential":
            path = base_dir / value
            if not path.exists():
                raise _error(source, line, f"superpotential file {value!r} not found", "an existing file")
            phi = (loader or parse_superpotential_file)(path)
        elif key == "k":
            k = _int(value, source, line, "k")
        elif key == "theta":
            entries.append((line, value))
        else:
            raise _error(source, line, f"unknown key {key!r}", "superpotential, k or theta")
    if phi is None:
        raise ParseError("missing superpotential reference", source=source, line=1,
                         expected="superpotential: FILE")
    if k is None:
        raise ParseError("missing k", source=source, line=1, expected="k: K")
    images: dict[int, dict] = {}
    q = phi.quiver
    for line, value in entries:
        m = re.match(r"^(\d+)\s+(\S+)\s*=\s*(.*)$", value)
        if not m:
            raise _error(source, line, "malformed theta line", "theta J PATH = EXPR")
        j = int(m.group(1))
        try:
            p = q.parse_path(m.group(2))
        except (KeyError, ValueError) as exc:
            raise _error(source, line, str(exc.args[0] if exc.args else exc), "a path of the quiver") from None
        x = parse_element(q, m.group(3), source=source, line=line.number)
        table = images.setdefault(j, {})
        table[p] = table.get(p, PathAlgebraElement.zero(q)) + x
    return ThetaSpec(phi, k, images)


def parse_theta_file(path) -> ThetaSpec:
    path = FilePath(path)
    return parse_theta(path.read_text(), str(path), path.parent)


def fixture_path(name: str) -> FilePath:
    return FilePath(os.path.dirname(__file__)) / "fixtures" / name
