"""JSON schemas for complexes, groups, models, fields, transforms, covers and ELGFs.

Wherever a schema expects a sub-document (``"complex"``, ``"model"``,
``"cover"``), it accepts either the object inline or a path string, resolved
relative to the directory of the file that references it.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .algebra import (
    CircleWindingModel,
    CrossedModule,
    DiscreteModel,
    FiniteGroup,
    Globe,
    TwoGroupModel,
    circle_crossed_module,
    cyclic_group,
    group_from_table,
    symmetric_group,
    trivial_group,
)
from .complex import Cover, NestedPair, SimplicialComplex, barycentric_subdivide
from .elgf import ELGF, PathValue
from .errors import InvalidData
from .field import GaugeField, GaugeField1, GaugeField2
from .gauge import GaugeTransform
from .glue import GlobalField, TransitionSystem


class Loader:
    """Resolves references relative to a base directory and caches documents."""

    def __init__(self, basedir: Path | str = ".") -> None:
        self.basedir = Path(basedir)

    def doc(self, ref: Any) -> tuple[dict, "Loader"]:
        if isinstance(ref, dict):
            return ref, self
        if isinstance(ref, str):
            path = (self.basedir / ref) if not Path(ref).is_absolute() else Path(ref)
            return load_json(path), Loader(path.parent)
        raise InvalidData(f"expected an object or a file path, got {ref!r}", ref)


def load_json(path: Path | str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise InvalidData(f"file not found: {path}", str(path)) from exc
    except json.JSONDecodeError as exc:
        raise InvalidData(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})", str(path)) from exc
    if not isinstance(data, dict):
        raise InvalidData(f"{path}: top-level JSON value must be an object", str(path))
    return data


def _need(d: dict, key: str, what: str) -> Any:
    if key not in d:
        raise InvalidData(f"{what} is missing the key {key!r}", key)
    return d[key]


# ---------------------------------------------------------------- complexes


def complex_from_json(d: dict, loader: Loader | None = None) -> SimplicialComplex:
    loader = loader or Loader()
    if "subdivide" in d:
        inner, sub = loader.doc(d["subdivide"])
        return barycentric_subdivide(complex_from_json(inner, sub)).complex
    verts = [str(v) for v in _need(d, "vertices", "complex")]
    simplices = [[str(v) for v in s] for s in d.get("simplices", [])]
    try:
        return SimplicialComplex.from_simplices(verts, simplices)
    except KeyError as exc:
        raise InvalidData(f"complex: {exc.args[0]}", simplices) from exc


def raw_complex_from_json(d: dict) -> SimplicialComplex:
    """The complex exactly as written, without computing the closure."""
    return SimplicialComplex([str(v) for v in _need(d, "vertices", "complex")], [[str(v) for v in s] for s in d.get("simplices", [])])


def complex_to_json(c: SimplicialComplex) -> dict:
    return c.to_json()


# ------------------------------------------------------------------ algebra


def group_from_json(d: dict) -> FiniteGroup:
    named = d.get("named")
    if named == "cyclic":
        return cyclic_group(int(_need(d, "n", "cyclic group")))
    if named == "symmetric":
        return symmetric_group(int(_need(d, "n", "symmetric group")))
    if named == "trivial":
        return trivial_group()
    if named is not None:
        raise InvalidData(f"unknown named group {named!r}", named)
    return group_from_table(_need(d, "elements", "group"), _need(d, "table", "group"), d.get("name", ""))


def crossed_module_from_json(d: dict, loader: Loader | None = None) -> CrossedModule:
    loader = loader or Loader()
    named = d.get("named")
    if named == "circle":
        return circle_crossed_module()
    if named == "identity":
        g, _ = loader.doc(_need(d, "group", "identity crossed module"))
        return CrossedModule.identity_module(group_from_json(g))
    if named == "trivial":
        g, _ = loader.doc(_need(d, "group", "trivial crossed module"))
        return CrossedModule.trivial_over(group_from_json(g))
    if named is not None:
        raise InvalidData(f"unknown named crossed module {named!r}", named)
    H = group_from_json(loader.doc(_need(d, "H", "crossed module"))[0])
    G = group_from_json(loader.doc(_need(d, "G", "crossed module"))[0])
    boundary = [G.parse(x) for x in _need(d, "boundary", "crossed module")]
    action = [[H.parse(x) for x in row] for row in _need(d, "action", "crossed module")]
    if len(boundary) != H.order or len(action) != G.order or any(len(r) != H.order for r in action):
        raise InvalidData("crossed module boundary/action tables have the wrong shape", None)
    return CrossedModule.from_tables(H, G, boundary, action, d.get("name", ""))


def model_from_json(d: dict, loader: Loader | None = None) -> TwoGroupModel:
    loader = loader or Loader()
    kind = d.get("model")
    if kind is None and ("named" in d or "elements" in d):
        return DiscreteModel(group_from_json(d))
    if kind == "discrete":
        return DiscreteModel(group_from_json(loader.doc(_need(d, "group", "discrete model"))[0]))
    if kind == "circle":
        return CircleWindingModel()
    if kind == "crossed_module":
        inner, sub = loader.doc(_need(d, "crossed_module", "crossed-module model"))
        return TwoGroupModel(crossed_module_from_json(inner, sub))
    raise InvalidData(f"unknown model kind {kind!r}", kind)


# ------------------------------------------------------------------- fields


def _vertex_lookup(base: SimplicialComplex, name: str) -> Any:
    if name in base._pos:
        return name
    raise InvalidData(f"unknown vertex {name!r}", name)


def parse_simplex_key(base: SimplicialComplex, key: str, size: int) -> tuple:
    parts = [_vertex_lookup(base, p) for p in str(key).split("-")]
    if len(parts) != size:
        raise InvalidData(f"{key!r} does not name a {size - 1}-simplex", key)
    s = base.ordered(parts)
    if len(s) != size or s not in base.simplices:
        raise InvalidData(f"{key!r} is not a simplex of the complex", key)
    return s


def simplex_key(s: tuple) -> str:
    return "-".join(str(v) for v in s)


def field_from_json(d: dict, loader: Loader | None = None) -> GaugeField:
    loader = loader or Loader()
    base = complex_from_json(*loader.doc(_need(d, "complex", "field")))
    model = model_from_json(*loader.doc(_need(d, "model", "field")))
    return field_body_from_json(d, base, model)


def field_body_from_json(d: dict, base: SimplicialComplex, model: TwoGroupModel) -> GaugeField:
    G = model.group
    edges = {parse_simplex_key(base, k, 2): G.parse(v) for k, v in d.get("edges", {}).items()}
    if "faces" in d or (type(model) is TwoGroupModel):
        faces = {parse_simplex_key(base, k, 3): model.cells.parse(v) for k, v in d.get("faces", {}).items()}
        return GaugeField2(base, model.xmod, edges, faces)
    return GaugeField1(base, model, edges)


def field_to_json(A: GaugeField, complex_ref: Any = None, model_ref: Any = None) -> dict:
    G = A.group
    out: dict[str, Any] = {}
    if complex_ref is not None:
        out["complex"] = complex_ref
    if model_ref is not None:
        out["model"] = model_ref
    out["edges"] = {simplex_key(e): G.format(A.edges[e]) for e in A.base.edges}
    if isinstance(A, GaugeField2):
        H = A.xmod.H
        out["faces"] = {simplex_key(t): H.format(A.faces[t]) for t in A.base.triangles if t in A.faces}
    return out


def _circle_edge(model: TwoGroupModel, data: Any, ux: Any, uy: Any) -> Globe:
    """``{"winding": n}``: the shortest lift of u(y) - u(x) plus n full turns."""
    if not isinstance(model, CircleWindingModel):
        raise InvalidData("the winding shortcut needs the circle model", data)
    n = data.get("winding", 0) if isinstance(data, dict) else 0
    if not isinstance(n, int):
        raise InvalidData(f"winding must be an integer, got {n!r}", n)
    return Globe(ux, (uy - ux) % 1 + n)


def transform_from_json(d: dict, base: SimplicialComplex, model: TwoGroupModel) -> GaugeTransform:
    """Vertex values, plus optional level-1 edge values.

    An edge value is a globe ``{"source", "cell"}`` or, for the circle model,
    ``{"winding": n}``. With the circle model, edges left out get winding 0
    once any edge value is present.
    """
    G = model.group
    verts = {_vertex_lookup(base, k): G.parse(v) for k, v in _need(d, "vertices", "transform").items()}
    edges = None
    if d.get("edges"):
        given = {parse_simplex_key(base, k, 2): v for k, v in d["edges"].items()}
        edges = {}
        for e in base.edges:
            v = given.get(e)
            if v is None or (isinstance(v, dict) and "cell" not in v):
                if isinstance(model, CircleWindingModel) and all(x in verts for x in e):
                    edges[e] = _circle_edge(model, v, verts[e[0]], verts[e[1]])
                elif v is not None:
                    raise InvalidData(f"edge value for {simplex_key(e)} needs a source and a cell", simplex_key(e))
            else:
                edges[e] = model.parse(1, v)
    return GaugeTransform(base, G, verts, edges)


def transform_to_json(u: GaugeTransform, model: TwoGroupModel) -> dict:
    out: dict[str, Any] = {"vertices": {str(v): model.group.format(u.vertices[v]) for v in u.base.vertices}}
    if u.edges:
        out["edges"] = {simplex_key(e): model.format(1, g) for e, g in sorted(u.edges.items(), key=lambda kv: u.base.key(kv[0]))}
    return out


# ------------------------------------------------------------------- covers


def cover_from_json(d: dict, parent: SimplicialComplex, model: TwoGroupModel) -> tuple[Cover, TransitionSystem]:
    pieces, names = [], []
    for p in _need(d, "pieces", "cover"):
        names.append(str(_need(p, "name", "cover piece")))
        try:
            pieces.append(parent.subcomplex([[str(v) for v in s] for s in _need(p, "simplices", "cover piece")]))
        except KeyError as exc:
            raise InvalidData(f"piece {names[-1]}: {exc.args[0]}", names[-1]) from exc
    cover = Cover(parent, tuple(pieces), tuple(names))
    pairs = {}
    for t in d.get("transitions", []):
        i, j = cover.index(str(_need(t, "i", "transition"))), cover.index(str(_need(t, "j", "transition")))
        X = cover.intersection(i, j)
        pairs[(i, j)] = transform_from_json(t, X, model)
    return cover, TransitionSystem.from_pairs(cover, model.group, pairs)


def cover_to_json(cover: Cover, ts: TransitionSystem | None, model: TwoGroupModel) -> dict:
    out: dict[str, Any] = {
        "pieces": [
            {"name": n, "simplices": [list(s) for s in p.all_simplices() if not any(set(s) < set(t) for t in p.simplices)]}
            for n, p in zip(cover.names, cover.pieces)
        ]
    }
    if ts is not None:
        out["transitions"] = [
            dict({"i": cover.names[i], "j": cover.names[j]}, **transform_to_json(ts.psi[(i, j)], model))
            for i, j in cover.overlaps()
        ]
    return out


def global_field_from_json(d: dict, loader: Loader | None = None) -> tuple[GlobalField, TwoGroupModel]:
    loader = loader or Loader()
    parent = complex_from_json(*loader.doc(_need(d, "complex", "global field")))
    model = model_from_json(*loader.doc(_need(d, "model", "global field")))
    cover_doc, _ = loader.doc(_need(d, "cover", "global field"))
    cover, ts = cover_from_json(cover_doc, parent, model)
    locals_doc = _need(d, "locals", "global field")
    fields = []
    for name, piece in zip(cover.names, cover.pieces):
        fields.append(field_body_from_json(_need(locals_doc, name, "locals"), piece, model))
    return GlobalField(cover, ts, tuple(fields)), model


def global_field_to_json(gf: GlobalField, model: TwoGroupModel, complex_ref: Any, model_ref: Any) -> dict:
    return {
        "complex": complex_ref,
        "model": model_ref,
        "cover": cover_to_json(gf.cover, gf.transitions, model),
        "locals": {n: field_to_json(A) for n, A in zip(gf.cover.names, gf.locals)},
    }


# -------------------------------------------------------------------- ELGFs


def elgf_to_json(e: ELGF, complex_ref: Any = None, model_ref: Any = None) -> dict:
    model = e.model
    rows = []
    for p in sorted(e.values, key=lambda p: (p.level, e.base.key(p.tau), e.base.key(p.nu))):
        val = e.values[p]
        if p.level == 0 and not val.cells:
            value: Any = model.group.format(val.corners[p.nu[0]])
        else:
            value = {"corners": {str(x): model.group.format(val.corners[x]) for x in p.nu}}
            if val.cells:
                value["cells"] = {simplex_key(k): model.format(1, c) for k, c in val.cells.items()}
        rows.append({"tau": list(p.tau), "nu": list(p.nu), "level": val.level, "value": value})
    out: dict[str, Any] = {}
    if complex_ref is not None:
        out["complex"] = complex_ref
    if model_ref is not None:
        out["model"] = model_ref
    out["values"] = rows
    return out


def elgf_from_json(d: dict, loader: Loader | None = None) -> ELGF:
    loader = loader or Loader()
    base = complex_from_json(*loader.doc(_need(d, "complex", "ELGF")))
    model = model_from_json(*loader.doc(_need(d, "model", "ELGF")))
    G = model.group
    values = {}
    for row in _need(d, "values", "ELGF"):
        tau = base.ordered([_vertex_lookup(base, str(v)) for v in _need(row, "tau", "ELGF value")])
        nu = base.ordered([_vertex_lookup(base, str(v)) for v in _need(row, "nu", "ELGF value")])
        level = int(row.get("level", len(nu) - 1))
        raw = _need(row, "value", "ELGF value")
        if isinstance(raw, dict):
            corners = {_vertex_lookup(base, str(k)): G.parse(v) for k, v in raw.get("corners", {}).items()}
            cells = {}
            for k, v in raw.get("cells", {}).items():
                x, y = (_vertex_lookup(base, part) for part in str(k).split("-"))
                cells[base.ordered([x, y])] = model.parse(1, v)
        else:
            corners = {nu[0]: G.parse(raw)}
            cells = {}
        values[NestedPair(tau, nu)] = PathValue(level, corners, cells)
    return ELGF(base, model, values)
