"""Command-line interface: ``omfiber <command> FILE [options]``.

Every command prints one JSON document (sorted keys) to stdout or ``--output``.
Exit codes: 0 success, 1 validation or check failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .arrangement import ArrangementError
from .formats import (
    FormatError,
    format_covectors,
    format_facets,
    format_matching,
    format_poset,
    parse_covectors,
    parse_facets,
    parse_poset,
    read_text,
    sniff,
)
from .homology import homology, os_betti, simplicial_homology, facets_to_simplices
from .milnor import CIRCLE_LABELS, MM, PP, ZM, ZP, FibrationError, milnor_fiber, proof_matching
from .pipeline import Pipeline, default_threads, load_oriented_matroid
from .poset import OrderComplex
from .signs import SignError, format_sign_vector, parse_sign_vector, validate_axioms
from .subdivision import _base_index, rank_subdivide_dual, subdivision_summary, verify_subdivision

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
_CIRCLE = {"PP": PP, "MM": MM, "ZP": ZP, "ZM": ZM}


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _base(om, text: str | None) -> int:
    if text is None:
        return 0
    try:
        if text.lstrip("-").isdigit():
            return _base_index(om, int(text))
        return _base_index(om, parse_sign_vector(text))
    except SignError as exc:
        raise UsageError(f"bad base tope {text!r}: {exc}") from None


def _write(path: str | None, text: str):
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _load(args):
    return Pipeline(load_oriented_matroid(read_text(args.file)))


# -- commands -----------------------------------------------------------------


def cmd_validate(args) -> tuple[dict, int]:
    text = read_text(args.file)
    if sniff(text) == "arr":
        om = load_oriented_matroid(text)
        vectors = om.covectors
    else:
        vectors = parse_covectors(text)
    rep = validate_axioms(vectors)
    return rep.to_json(), EXIT_OK if rep.ok else EXIT_FAIL


def cmd_covectors(args):
    om = _load(args).om
    _write(args.emit, format_covectors(om.covectors, om.ground_size))
    return {
        "n": om.ground_size,
        "covectors": [format_sign_vector(v) for v in om.covectors],
        "topes": [format_sign_vector(t) for t in om.topes],
    }, EXIT_OK


def cmd_info(args):
    om = _load(args).om
    ob = os_betti(om.geometric_lattice)
    out = om.describe()
    out.update(os_betti=ob.betti, chi_projective=ob.chi_projective)
    return out, EXIT_OK


def cmd_salvetti(args):
    sal = _load(args).salvetti
    p = sal.poset
    _write(args.emit, format_poset(p, [sal.label(i) for i in range(len(p))]))
    f = sal.f_vector()
    return {"cells": len(p), "f_vector": f, "euler": sum((-1) ** d * c for d, c in enumerate(f))}, EXIT_OK


def cmd_subdivide(args):
    om = _load(args).om
    base = _base(om, args.base)
    rd = rank_subdivide_dual(om, base)
    labels = [rd.label(i) for i in range(len(rd.poset))]
    _write(args.emit, format_poset(rd.poset, labels))
    out = subdivision_summary(rd)
    code = EXIT_OK
    if args.check:
        rep = verify_subdivision(om, base, rd)
        out["check"] = rep.to_json()
        code = EXIT_OK if rep.ok else EXIT_FAIL
    return out, code


def cmd_rksd(args):
    rs = _load(args).rksd
    p = rs.poset
    _write(args.emit, format_poset(p, [rs.label(i) for i in range(len(p))]))
    return {"cells": len(p), "f_vector": rs.f_vector(), "euler": rs.euler()}, EXIT_OK


def cmd_milnor(args):
    pipe = _load(args)
    if args.emit:
        fiber = milnor_fiber(pipe.fibration)
        sub = pipe.fibration.q.preimage([PP])
        _write(args.emit, format_poset(fiber, [pipe.rksd.label(i) for i in sub]))
    return pipe.milnor.to_json(), EXIT_OK


def cmd_check(args):
    rep = _load(args).check_all(threads=args.threads)
    return rep.to_json(), EXIT_OK if rep.ok else EXIT_FAIL


def cmd_homology(args):
    text = read_text(args.file)
    if sniff(text) == "poset":
        rep = homology(parse_poset(text))
    else:
        rep = simplicial_homology(facets_to_simplices(parse_facets(text)))
    return rep.to_json(), EXIT_OK


def cmd_export(args):
    pipe = _load(args)
    om = pipe.om
    what = args.complex
    if what == "salvetti":
        p, labels = pipe.salvetti.poset, [pipe.salvetti.label(i) for i in range(len(pipe.salvetti.poset))]
    elif what == "dual":
        p = om.dual_poset
        labels = [format_sign_vector(v) for v in om.covectors]
    elif what == "subdivide":
        rd = rank_subdivide_dual(om, _base(om, args.base))
        p, labels = rd.poset, [rd.label(i) for i in range(len(rd.poset))]
    elif what == "rksd":
        p, labels = pipe.rksd.poset, [pipe.rksd.label(i) for i in range(len(pipe.rksd.poset))]
    elif what == "fiber":
        sub = pipe.fibration.q.preimage([PP])
        p, labels = milnor_fiber(pipe.fibration), [pipe.rksd.label(i) for i in sub]
    else:  # matching
        a, b = (_CIRCLE[x] for x in args.pair.split("<"))
        pm = proof_matching(pipe.fibration, a, b)
        text = format_matching(pm.matching, pm.critical)
        _write(args.output_file, text)
        return {
            "pair": [CIRCLE_LABELS[a], CIRCLE_LABELS[b]],
            "pairs": len(pm.matching.pairs),
            "critical": len(pm.critical),
            "acyclic": pm.acyclic,
            "closed_form_ok": pm.closed_form_ok,
        }, EXIT_OK
    if args.facets:
        oc = OrderComplex(p)
        text = format_facets(oc.facets)
        summary = {"complex": what, "facets": len(oc.facets), "vertices": len(p)}
    else:
        text = format_poset(p, labels)
        summary = {"complex": what, "elements": len(p), "covers": len(p.cover_pairs())}
    _write(args.output_file, text)
    return summary, EXIT_OK


# -- argument parsing -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="omfiber", description=__doc__.splitlines()[0])
    ap.add_argument("--threads", type=int, default=None, help="worker threads (default $OMFIBER_THREADS or 1)")
    ap.add_argument("-o", "--output", help="write the JSON report here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, emit=False):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file")
        if emit:
            p.add_argument("--emit", metavar="PATH", help="also write the underlying file (poset / covector format)")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "check the covector axioms and simplicity")
    add("covectors", cmd_covectors, "enumerate covectors and topes", emit=True)
    add("info", cmd_info, "rank, counts and Orlik-Solomon Betti numbers")
    add("salvetti", cmd_salvetti, "Salvetti complex summary", emit=True)
    p = add("subdivide", cmd_subdivide, "rank subdivision of the dual complex", emit=True)
    p.add_argument("--base", help="base tope, as index or sign string (default 0)")
    p.add_argument("--check", action="store_true", help="run the ball/CW checks")
    add("rksd", cmd_rksd, "rank-subdivided Salvetti complex summary", emit=True)
    add("milnor", cmd_milnor, "homology of the Milnor fiber", emit=True)
    add("check", cmd_check, "run every verification")
    add("homology", cmd_homology, "integral homology of a poset or facet file")
    p = add("export", cmd_export, "export a complex as a poset, facet or matching file")
    p.add_argument(
        "--complex",
        default="rksd",
        choices=["dual", "salvetti", "subdivide", "rksd", "fiber", "matching"],
    )
    p.add_argument("--facets", action="store_true", help="write order-complex facets instead of the poset")
    p.add_argument("--base", help="base tope for --complex subdivide")
    p.add_argument("--pair", default="PP<ZP", choices=[f"{a}<{b}" for a in ("PP", "MM") for b in ("ZP", "ZM")])
    p.add_argument("--to", dest="output_file", metavar="PATH", help="destination file (default: JSON summary only)")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    args.threads = args.threads if args.threads is not None else default_threads()
    if args.threads < 1:
        print("omfiber: --threads must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        out, code = args.func(args)
    except (FormatError, UsageError, OSError) as exc:
        print(f"omfiber: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SignError, ArrangementError) as exc:
        report = getattr(exc, "report", None)
        out = report.to_json() if report is not None else {"ok": False, "error": str(exc)}
        code = EXIT_FAIL
    except FibrationError as exc:
        out, code = {"ok": False, "error": f"milnor: {exc}"}, EXIT_FAIL
    text = dumps(out)
    if args.output:
        _write(args.output, text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
