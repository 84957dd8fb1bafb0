"""Command line front end: ``hlgf <verb> [options]``.

Exit codes: 0 success, 1 domain violation, 2 usage or parse error,
3 budget exceeded. ``--json`` prints one JSON document instead of text.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import io as hio
from .algebra import TwoGroupModel, validate_crossed_module, validate_group
from .complex import barycentric_subdivide, glue as glue_complexes, validate_complex, validate_cover
from .cubical import check_site_relations
from .elgf import FiberHomotopyData, check_elgf, classify_bundle, extract_elgf, parallel_transport
from .errors import DEFAULT_BUDGET, BudgetExceeded, EdgeNotInComplex, HlgfError, InvalidData, NotComposable
from .field import GaugeField2, enumerate_fields, validate_field2, wilson_loop
from .gauge import act, orbits
from .glue import coarse_grain, equalizer_check, glue_to_single, normalize_transitions, validate_global
from .gpd import EdgeWord, parse_word

WORD_GRAMMAR = """word literals: v1>v2(.v2>v3|~)*
  a>b.b>c     the path a -> b -> c
  c>a~        '~' inverts the preceding letter (here: a -> c)
  a           a bare vertex is the empty word at a"""


class ParseError(Exception):
    pass


class Outcome:
    def __init__(self, ok: bool, text: list[str], data: dict[str, Any]) -> None:
        self.ok = ok
        self.text = text
        self.data = data


# ------------------------------------------------------------------ helpers


def _load(path: str) -> tuple[dict, hio.Loader]:
    return hio.load_json(path), hio.Loader(Path(path).parent)


def _model(args: argparse.Namespace) -> tuple[TwoGroupModel, Any]:
    ref = args.model or args.group
    if ref is None:
        raise ParseError("one of --model or --group is required")
    d, loader = _load(ref)
    return hio.model_from_json(d, loader), str(Path(ref).resolve())


def _complex(path: str | None, flag: str = "--complex"):
    if path is None:
        raise ParseError(f"{flag} is required")
    d, loader = _load(path)
    return hio.complex_from_json(d, loader)


def _violations(vs: list) -> tuple[list[str], list[dict]]:
    return [str(v) for v in vs], [v.to_json() for v in vs]


# -------------------------------------------------------------------- verbs


def cmd_validate(args: argparse.Namespace) -> Outcome:
    d, loader = _load(args.file)
    extra: dict[str, Any] = {}
    if "values" in d:
        kind, vs = "elgf", check_elgf(hio.elgf_from_json(d, loader))
    elif "locals" in d:
        gf, _ = hio.global_field_from_json(d, loader)
        kind, vs = "global field", validate_global(gf)
    elif "pieces" in d:
        parent = _complex(args.complex)
        model, _ = _model(args) if (args.model or args.group) else (None, None)
        if model is None:
            from .algebra import trivial_group, DiscreteModel

            model = DiscreteModel(trivial_group())
        cover, ts = hio.cover_from_json(d, parent, model)
        kind, vs = "cover", validate_cover(cover)
        # collapsibility is a certificate only: False means none was found
        extra["good_cover_certified"] = cover.is_good
        if d.get("transitions"):
            from .glue import GlobalField
            from .field import constant_field

            gf = GlobalField(cover, ts, tuple(constant_field(p, model) for p in cover.pieces))
            vs += [v for v in validate_global(gf) if v.kind != "compatibility"]
    elif "edges" in d and "complex" in d:
        A = hio.field_from_json(d, loader)
        kind, vs = "field", validate_field2(A) if isinstance(A, GaugeField2) else []
    elif "simplices" in d or "vertices" in d or "subdivide" in d:
        c = hio.raw_complex_from_json(d) if args.strict and "subdivide" not in d else hio.complex_from_json(d, loader)
        kind, vs = "complex", validate_complex(c)
    elif "H" in d and "G" in d:
        kind, vs = "crossed module", validate_crossed_module(hio.crossed_module_from_json(d, loader))
    elif "model" in d:
        m = hio.model_from_json(d, loader)
        kind = "model"
        vs = validate_crossed_module(m.xmod) if m.is_finite else []
    elif "named" in d or "elements" in d:
        kind, vs = "group", validate_group(hio.group_from_json(d))
    else:
        raise ParseError("cannot tell which schema this file follows")
    text, data = _violations(vs)
    head = f"{kind}: valid" if not vs else f"{kind}: {len(vs)} violation(s)"
    if "good_cover_certified" in extra:
        head += "; good cover certified" if extra["good_cover_certified"] else "; no good-cover certificate found"
    return Outcome(not vs, [head] + text, {"kind": kind, "violations": data, **extra})


def _parse_grid(text: str) -> Fraction:
    try:
        g = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad grid step {text!r}") from exc
    if g <= 0 or (1 / g).denominator != 1:
        raise ParseError("grid step must have the form 1/N")
    return g


def cmd_check_cubical(args: argparse.Namespace) -> Outcome:
    grid = _parse_grid(args.grid)
    rep = check_site_relations(args.kmax, grid, merge=min if args.perturb else max)
    head = f"checked {rep.relations_checked} relation instances at {rep.points_checked} grid points: {len(rep.failures)} violation(s)"
    shown = [str(f) for f in rep.failures[:20]]
    data = {
        "kmax": args.kmax,
        "grid": str(grid),
        "relations": rep.relations_checked,
        "points": rep.points_checked,
        "violations": len(rep.failures),
        "examples": shown,
    }
    return Outcome(rep.ok, [head] + shown, data)


def cmd_enumerate(args: argparse.Namespace) -> Outcome:
    base = _complex(args.complex)
    model, ref = _model(args)
    if args.dim == 2:
        en = enumerate_fields(base, model.xmod, 2)
    else:
        en = enumerate_fields(base, model, 1)
    from .errors import Budget

    Budget(args.budget).require(en.count, "field listing" if args.list else "field count")
    lines = [f"{en.count} fields"]
    fields = []
    if args.list:
        for A in en:
            doc = hio.field_to_json(A)
            fields.append(doc)
            lines.append(json.dumps(doc, sort_keys=True))
    data: dict[str, Any] = {"count": en.count}
    if args.list:
        data["fields"] = fields
    return Outcome(True, lines, data)


def cmd_orbits(args: argparse.Namespace) -> Outcome:
    base = _complex(args.complex)
    model, _ = _model(args)
    obs = orbits(base, model.xmod if args.dim == 2 else model, args.dim, budget=args.budget)
    lines = [f"{len(obs)} orbits"]
    rows = []
    for k, o in enumerate(obs):
        rep = hio.field_to_json(o.representative)
        rows.append({"size": o.size, "representative": rep})
        lines.append(f"orbit {k + 1}: size {o.size}, representative {json.dumps(rep['edges'], sort_keys=True)}")
    return Outcome(True, lines, {"orbits": len(obs), "details": rows})


def cmd_act(args: argparse.Namespace) -> Outcome:
    d, loader = _load(args.field)
    A = hio.field_from_json(d, loader)
    td, _ = _load(args.transform)
    model = A.model
    u = hio.transform_from_json(td, A.base, model)
    B = act(u, A)
    doc = hio.field_to_json(B, d.get("complex"), d.get("model"))
    return Outcome(True, [json.dumps(doc, sort_keys=True, indent=2)], {"field": doc})


def cmd_glue(args: argparse.Namespace) -> Outcome:
    if args.global_field:
        d, loader = _load(args.global_field)
        gf, _ = hio.global_field_from_json(d, loader)
        A = glue_to_single(gf)
        doc = hio.field_to_json(A, d.get("complex"), d.get("model"))
        return Outcome(True, [json.dumps(doc, sort_keys=True, indent=2)], {"field": doc})
    if not args.complexes or args.shared is None:
        raise ParseError("glue needs --global FILE or --complexes C1 C2 --shared S")
    c1, c2 = (_complex(p) for p in args.complexes)
    c = glue_complexes(c1, c2, _complex(args.shared, "--shared"))
    doc = c.to_json()
    counts = [len(c.simplices_of_dim(k)) for k in range(c.dim + 1)]
    return Outcome(True, [f"glued complex with f-vector {counts}", json.dumps(doc, sort_keys=True)], {"complex": doc, "f_vector": counts})


def cmd_normalize(args: argparse.Namespace) -> Outcome:
    d, loader = _load(args.global_field)
    gf, model = hio.global_field_from_json(d, loader)
    new, us = normalize_transitions(gf)
    doc = hio.global_field_to_json(new, model, d.get("complex"), d.get("model"))
    doc["normalizing_transforms"] = {n: hio.transform_to_json(u, model) for n, u in zip(gf.cover.names, us)}
    return Outcome(True, [json.dumps(doc, sort_keys=True, indent=2)], doc)


def cmd_equalizer(args: argparse.Namespace) -> Outcome:
    X = _complex(args.complex)
    model, _ = _model(args)
    cd, _ = _load(args.cover)
    cover, _ = hio.cover_from_json(cd, X, model)
    rep = equalizer_check(X, cover, model.xmod if args.dim == 2 else model, args.dim, budget=args.budget)
    data = {
        "global_count": rep.global_count,
        "limit_count": rep.limit_count,
        "injective": rep.injective,
        "surjective": rep.surjective,
        "bijective": rep.bijective,
    }
    return Outcome(rep.bijective, [rep.summary()], data)


def cmd_coarse_grain(args: argparse.Namespace) -> Outcome:
    X = _complex(args.complex)
    d, loader = _load(args.field)
    A = hio.field_from_json(d, loader)
    B = coarse_grain(A, X)
    doc = hio.field_to_json(B, args.complex, d.get("model"))
    return Outcome(True, [json.dumps(doc, sort_keys=True, indent=2)], {"field": doc})


def cmd_elgf_extract(args: argparse.Namespace) -> Outcome:
    if args.global_field:
        d, loader = _load(args.global_field)
        source, _ = hio.global_field_from_json(d, loader)
    elif args.field:
        d, loader = _load(args.field)
        source = hio.field_from_json(d, loader)
    else:
        raise ParseError("elgf-extract needs --field or --global")
    e = extract_elgf(source)
    doc = hio.elgf_to_json(e, d.get("complex"), d.get("model"))
    return Outcome(True, [json.dumps(doc, sort_keys=True, indent=2)], doc)


def _elgf_doc(path: str, args: argparse.Namespace) -> tuple[dict, hio.Loader]:
    """Load an ELGF file; ``--complex``/``--model`` fill in missing references."""
    d, loader = _load(path)
    for key, flag in (("complex", args.complex), ("model", args.model or args.group)):
        if key not in d and flag is not None:
            d[key] = str(Path(flag).resolve())
    return d, loader


def cmd_elgf_check(args: argparse.Namespace) -> Outcome:
    d, loader = _elgf_doc(args.file, args)
    vs = check_elgf(hio.elgf_from_json(d, loader))
    text, data = _violations(vs)
    head = "ELGF: valid" if not vs else f"ELGF: {len(vs)} violation(s)"
    return Outcome(not vs, [head] + text, {"violations": data})


def cmd_classify(args: argparse.Namespace) -> Outcome:
    if args.elgf:
        d, loader = _elgf_doc(args.elgf, args)
        source: Any = hio.elgf_from_json(d, loader)
    elif args.field:
        d, loader = _load(args.field)
        source = hio.field_from_json(d, loader)
    elif args.cover:
        X = _complex(args.complex)
        model, _ = _model(args)
        cd, _ = _load(args.cover)
        _, source = hio.cover_from_json(cd, X, model)
    else:
        raise ParseError("classify needs --cover, --elgf or --field")
    res = classify_bundle(source, budget=args.budget)
    return Outcome(True, [f"class: {res.label}"], {"label": res.label, "trivial": res.trivial, "detail": res.detail})


def cmd_transport(args: argparse.Namespace) -> Outcome:
    d, loader = _load(args.field)
    A = hio.field_from_json(d, loader)
    try:
        w: EdgeWord = parse_word(A.base, args.word)
    except (NotComposable, EdgeNotInComplex) as exc:
        raise ParseError(f"bad word literal {args.word!r}: {exc}") from exc
    model = A.model
    element = model.parse(args.level, json.loads(args.element) if args.level else args.element)
    phi = FiberHomotopyData(w.source, element, args.level)
    out = parallel_transport(A, w, phi)
    shown = model.format(out.level, out.element)
    data = {"anchor": str(out.anchor), "level": out.level, "element": shown}
    return Outcome(True, [f"at {out.anchor}: {json.dumps(shown) if out.level else shown}"], data)


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # Accepted before or after the verb; SUPPRESS keeps the subparser from
    # overwriting a value given before the verb.
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="emit a single JSON document")
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="limit on elementary checks (default 10^7)")

    p = argparse.ArgumentParser(
        prog="hlgf",
        description="Lattice gauge fields and higher gauge fields on finite simplicial complexes.",
        epilog=WORD_GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    p.add_argument("--json", action="store_true", help="emit a single JSON document")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="limit on elementary checks (default 10^7)")
    sub = p.add_subparsers(dest="verb", required=True)

    def verb(name: str, fn: Callable, help_text: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text, epilog=WORD_GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=fn)
        return sp

    def model_flags(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--group", help="group file (discrete model)")
        sp.add_argument("--model", help="model file")

    sp = verb("validate", cmd_validate, "validate any supported file (schema detected from its keys)")
    sp.add_argument("file")
    sp.add_argument("--strict", action="store_true", help="for complexes: do not compute the downward closure")
    sp.add_argument("--complex", help="parent complex (for cover files)")
    model_flags(sp)

    sp = verb("check-cubical", cmd_check_cubical, "check the cubical and connection relations on a rational grid")
    sp.add_argument("--kmax", type=int, default=3)
    sp.add_argument("--grid", default="1/4")
    sp.add_argument("--perturb", action="store_true", help="use min instead of max in the connections")

    sp = verb("enumerate", cmd_enumerate, "count (and optionally list) all fields")
    sp.add_argument("--complex", required=True)
    sp.add_argument("--dim", type=int, choices=(1, 2), default=1)
    sp.add_argument("--list", action="store_true")
    model_flags(sp)

    sp = verb("orbits", cmd_orbits, "partition all fields into gauge orbits")
    sp.add_argument("--complex", required=True)
    sp.add_argument("--dim", type=int, choices=(1, 2), default=1)
    model_flags(sp)

    sp = verb("act", cmd_act, "apply a gauge transform to a field")
    sp.add_argument("--field", required=True)
    sp.add_argument("--transform", required=True)

    sp = verb("glue", cmd_glue, "glue a normalized global field, or glue two complexes along a shared subcomplex")
    sp.add_argument("--global", dest="global_field")
    sp.add_argument("--complexes", nargs=2)
    sp.add_argument("--shared")

    sp = verb("normalize", cmd_normalize, "gauge transitions of a global field to the identity on vertices")
    sp.add_argument("--global", dest="global_field", required=True)

    sp = verb("equalizer", cmd_equalizer, "certify that global fields biject with compatible families of local fields")
    sp.add_argument("--complex", required=True)
    sp.add_argument("--cover", required=True)
    sp.add_argument("--dim", type=int, choices=(1, 2), default=1)
    model_flags(sp)

    sp = verb("coarse-grain", cmd_coarse_grain, "coarse-grain a field on the barycentric subdivision")
    sp.add_argument("--complex", required=True, help="the coarse complex")
    sp.add_argument("--field", required=True, help="field on the subdivision")

    sp = verb("elgf-extract", cmd_elgf_extract, "extract the ELGF of a field or global field")
    sp.add_argument("--field")
    sp.add_argument("--global", dest="global_field")

    sp = verb("elgf-check", cmd_elgf_check, "check the cocycle and boundary-assembly conditions of an ELGF")
    sp.add_argument("file")
    sp.add_argument("--complex", help="complex, if the ELGF file does not name one")
    model_flags(sp)

    sp = verb("classify", cmd_classify, "classify bundle data (finite transitions or circle windings)")
    sp.add_argument("--cover")
    sp.add_argument("--complex")
    sp.add_argument("--elgf")
    sp.add_argument("--field")
    model_flags(sp)

    sp = verb("transport", cmd_transport, "parallel transport of fiber data along a word")
    sp.add_argument("--field", required=True)
    sp.add_argument("--word", required=True, help="word literal, see below")
    sp.add_argument("--element", required=True, help="group element (level 0) or JSON globe (level 1)")
    sp.add_argument("--level", type=int, choices=(0, 1), default=0)
    return p


def _emit(args: argparse.Namespace, out: Outcome | None, error: HlgfError | Exception | None, code: int) -> None:
    if getattr(args, "json", False):
        doc: dict[str, Any] = {"verb": getattr(args, "verb", None), "exit_code": code}
        if out is not None:
            doc["ok"] = out.ok
            doc["report"] = out.data
        if error is not None:
            doc["error"] = {"name": type(error).__name__, "message": str(error), "datum": _jsonable(getattr(error, "datum", None))}
        print(json.dumps(doc, sort_keys=True, default=str))
        return
    if out is not None:
        print("\n".join(out.text))
    if error is not None:
        datum = getattr(error, "datum", None)
        extra = f" [datum: {_jsonable(datum)}]" if datum is not None else ""
        print(f"error: {type(error).__name__}: {error}{extra}", file=sys.stderr)


def _jsonable(x: Any) -> Any:
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and 2
    try:
        out = args.func(args)
    except BudgetExceeded as exc:
        _emit(args, None, exc, 3)
        return 3
    except (ParseError, InvalidData) as exc:
        _emit(args, None, exc, 2)
        return 2
    except HlgfError as exc:
        _emit(args, None, exc, 1)
        return 1
    except (ValueError, TypeError, KeyError) as exc:
        _emit(args, None, exc, 1)
        return 1
    code = 0 if out.ok else 1
    _emit(args, out, None, code)
    return code


if __name__ == "__main__":
    sys.exit(main())
