"""Command-line interface: parse documents, dispatch, report.

Reports are JSON with a fixed field order; exit status 0 means every
asserted check in the run passed.
"""

import argparse
import json
import sys

from . import rings as rg
from . import serialize as ser
from .errors import NCSpecError, ParseError
from .latspace import PidLattice, build_semilattice
from .rings import SkewLaurentRing
from .sheafspec import PidNCSpec, is_prim, ncspec, ncspec_morphism, recover_hom


def _load(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}")


def _report(subcommand, status, payload, provenance=None):
    return {
        "schema": ser.REPORT_SCHEMA,
        "subcommand": subcommand,
        "status": status,
        "provenance": provenance or {},
        "payload": payload,
    }


def _emit(args, report, dot=None, text=None):
    if args.format == "dot" and dot is not None:
        sys.stdout.write(dot)
    elif args.format == "text" and text is not None:
        sys.stdout.write(text)
    else:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=False) + "\n")
    return 0 if report["status"] == "pass" else 1


def cmd_ring_validate(args):
    r = ser.parse_ring(_load(args.ring))
    payload = {
        "ring": repr(r),
        "finite": rg.is_finite(r),
        "cardinality": rg.cardinality(r),
        "commutative": rg.is_commutative(r),
    }
    return _emit(args, _report("ring-validate", "pass", payload))


def cmd_semilattice(args):
    r = ser.parse_ring(_load(args.ring))
    lat = build_semilattice(r)
    if isinstance(lat, PidLattice):
        payload = {"ring": repr(r), "lazy": True,
                   "note": "order answered by squarefree divisibility"}
        return _emit(args, _report("semilattice", "pass", payload))
    payload = {
        "ring": repr(r),
        "cells": [c.label for c in lat.cells],
        "bottom": lat.bottom,
        "top": lat.top,
        "order": [[lat.leq(i, j) for j in range(lat.n)] for i in range(lat.n)],
        "joins": [[lat.join(i, j) for j in range(lat.n)] for i in range(lat.n)],
    }
    text = "cells: " + ", ".join(payload["cells"]) + "\n"
    return _emit(args, _report("semilattice", "pass", payload),
                 dot=ser.semilattice_dot(lat), text=text)


def cmd_ncspec(args):
    r = ser.parse_ring(_load(args.ring))
    sp = ncspec(r)
    if isinstance(sp, PidNCSpec):
        payload = {"ring": repr(r), "lazy": True,
                   "note": "points are sets of monic irreducibles plus the zero ideal"}
        return _emit(args, _report("ncspec", "pass", payload))
    payload = {
        "ring": repr(r),
        "points": sp.point_count(),
        "generic": sp.generic,
        "cells": [c.label for c in sp.lattice.cells],
        "sections_on_basics": [repr(d) for d in sp.sheaf.assignment],
        "specialization": [
            sorted(sp.sober.specialization_up(i)) for i in range(sp.sober.n)],
    }
    text = f"points: {payload['points']}, generic: {payload['generic']}\n"
    return _emit(args, _report("ncspec", "pass", payload),
                 dot=ser.space_dot(sp), text=text)


def cmd_morphism(args):
    theta = ser.parse_morphism(_load(args.morphism))
    m = ncspec_morphism(theta)
    ok = m.verify()
    payload = {
        "source_ring": repr(theta.target),
        "target_ring": repr(theta.source),
        "point_map": {str(k): v for k, v in sorted(m.point_map.items())},
        "verified": ok,
        "recovered_equals_input": recover_hom(m) == theta,
    }
    status = "pass" if ok and payload["recovered_equals_input"] else "fail"
    return _emit(args, _report("morphism", status, payload))


def cmd_prim_check(args):
    from .sheafspec import is_prim_report
    theta = ser.parse_morphism(_load(args.morphism))
    m = ncspec_morphism(theta)
    probes = None
    if args.probes:
        docs = _load(args.probes)
        probes = tuple(ser.parse_ring(d, top="schema" in d) for d in docs)
    rep = is_prim_report(m, probes)
    payload = {"prim": rep["prim"], "witness": rep["witness"]}
    return _emit(args, _report("prim-check", "pass" if rep["prim"] else "fail",
                               payload, provenance={"probes": rep["probes"]}))


def cmd_spec(args):
    from .commbridge import spec
    r = ser.parse_ring(_load(args.ring))
    s = spec(r)
    payload = {
        "ring": repr(r),
        "primes": [[ser.element_doc(x) for x in sorted(P, key=repr)] for P in s.primes],
        "distinguished_base": {
            str(ser.element_doc(f)): sorted(s.distinguished(f)) for f in s.elements},
    }
    return _emit(args, _report("spec", "pass", payload))


def cmd_embed(args):
    from .commbridge import embed_phi
    r = ser.parse_ring(_load(args.ring))
    emb = embed_phi(r)
    payload = {
        "ring": repr(r),
        "point_map": {str(k): v for k, v in sorted(emb.point_map.items())},
        "checks": emb.report["checks"],
    }
    return _emit(args, _report("embed", emb.report["status"], payload))


def cmd_exp(args):
    from .commbridge import exp_idempotence_check, spec, spec_exponential_iso
    r = ser.parse_ring(_load(args.ring))
    iso = spec_exponential_iso(r)
    idem = exp_idempotence_check(spec(r).based_space())
    status = "pass" if iso["status"] == "pass" and idem else "fail"
    payload = {
        "ring": repr(r),
        "exponential_points": iso["exponential_points"],
        "sober_points": iso["sober_points"],
        "isomorphism": iso["status"] == "pass",
        "idempotence": idem,
    }
    return _emit(args, _report("exp", status, payload))


def cmd_glue(args):
    from .glueqcoh import glue
    datum = ser.parse_glue(_load(args.glue))
    gl = glue(datum)
    payload = {
        "pieces": [repr(p) for p in datum.pieces],
        "points": gl.n,
        "sections": [repr(d) for d in gl.sections],
        "order": [sorted(gl.leq[i]) for i in range(gl.n)],
    }
    return _emit(args, _report("glue", "pass", payload), dot=ser.glued_dot(gl))


def cmd_qcoh_check(args):
    from .skewproj import SkewQcohDatum, build_proj, qcoh_cocycle_check
    doc = _load(args.datum)
    ser._require_keys(doc, ["schema", "ring", "module", "scalars"], ["box"], "qcoh")
    if doc["schema"] != ser.QCOH_SCHEMA:
        raise ParseError(f"expected schema {ser.QCOH_SCHEMA}")
    r = ser.parse_ring(doc["ring"], top="schema" in doc["ring"])
    if not isinstance(r, SkewLaurentRing):
        raise ParseError("qcoh-check expects a skew Laurent chart cover")
    M = ser.parse_graded_module(r, doc["module"])
    scalars = {}
    for triple in doc["scalars"]:
        i, j, v = int(triple[0]) - 1, int(triple[1]) - 1, ser.parse_rational(triple[2])
        scalars[(i, j)] = v
    X = build_proj(r)
    datum = SkewQcohDatum(X, M, scalars, box=int(doc.get("box", 2)))
    rep = qcoh_cocycle_check(datum)
    payload = {"failures": rep["failures"], "charts": X.n}
    return _emit(args, _report("qcoh-check", rep["status"], payload,
                               provenance={"box": datum.box}))


def cmd_proj_gamma(args):
    from .skewproj import build_proj, free_presentation, gamma
    r = ser.parse_ring(_load(args.ring))
    if not isinstance(r, SkewLaurentRing):
        raise ParseError("proj-gamma expects a skew Laurent ring")
    if args.module:
        M = ser.parse_graded_module(r, _load(args.module))
    else:
        M = free_presentation(r)
    X = build_proj(r)
    g = gamma(X, M, (args.window[0], args.window[1]), box=args.box, k_max=args.k_max)
    dims = {str(d): g["dims"][d] for d in sorted(g["dims"])}
    payload = {"ring": repr(r), "dims": dims, "psi_cocycles": X.psi_report["status"]}
    text = "\n".join(f"{d:>4}  {v}" for d, v in dims.items()) + "\n"
    status = "pass" if X.psi_report["status"] == "pass" else "fail"
    return _emit(args, _report("proj-gamma", status, payload,
                               provenance={"window": args.window, "box": args.box,
                                           "k_max": args.k_max}),
                 text=text)


def cmd_serre_check(args):
    from .skewproj import build_proj, free_presentation, serre_unit
    r = ser.parse_ring(_load(args.ring))
    if not isinstance(r, SkewLaurentRing):
        raise ParseError("serre-check expects a skew Laurent ring")
    if args.module:
        M = ser.parse_graded_module(r, _load(args.module))
    else:
        M = free_presentation(r)
    X = build_proj(r)
    rep = serre_unit(X, M, (args.window[0], args.window[1]),
                     box=args.box, k_max=args.k_max,
                     torsion_bound=args.torsion_bound)
    degrees = {}
    ok = True
    for d, info in rep["degrees"].items():
        degrees[str(d)] = {k: info[k] for k in (
            "module_dim", "sections_dim", "injective", "surjective",
            "kernel_dim", "kernel_torsion", "cokernel_dim", "cokernel_torsion")}
        if not info["kernel_torsion"]:
            ok = False
        if info["cokernel_dim"] and info["cokernel_torsion"] is None:
            ok = None if ok is True else ok
    status = "pass" if ok is True else ("inconclusive" if ok is None else "fail")
    payload = {"ring": repr(r), "degrees": degrees}
    return _emit(args, _report("serre-check", status, payload,
                               provenance={"window": args.window, "box": args.box,
                                           "torsion_bound": args.torsion_bound}))


def build_parser():
    p = argparse.ArgumentParser(prog="ncspec", description=__doc__)
    sub = p.add_subparsers(dest="subcommand", required=True)

    def common(sp):
        sp.add_argument("--format", choices=["json", "dot", "text"], default="json")

    sp = sub.add_parser("ring-validate"); sp.add_argument("--ring", required=True)
    common(sp); sp.set_defaults(fn=cmd_ring_validate)

    sp = sub.add_parser("semilattice"); sp.add_argument("--ring", required=True)
    common(sp); sp.set_defaults(fn=cmd_semilattice)

    sp = sub.add_parser("ncspec"); sp.add_argument("--ring", required=True)
    common(sp); sp.set_defaults(fn=cmd_ncspec)

    sp = sub.add_parser("morphism"); sp.add_argument("--morphism", required=True)
    common(sp); sp.set_defaults(fn=cmd_morphism)

    sp = sub.add_parser("prim-check"); sp.add_argument("--morphism", required=True)
    sp.add_argument("--probes", default=None,
                    help="JSON file with a list of probe ring documents")
    common(sp); sp.set_defaults(fn=cmd_prim_check)

    sp = sub.add_parser("spec"); sp.add_argument("--ring", required=True)
    common(sp); sp.set_defaults(fn=cmd_spec)

    sp = sub.add_parser("embed"); sp.add_argument("--ring", required=True)
    common(sp); sp.set_defaults(fn=cmd_embed)

    sp = sub.add_parser("exp"); sp.add_argument("--ring", required=True)
    common(sp); sp.set_defaults(fn=cmd_exp)

    sp = sub.add_parser("glue"); sp.add_argument("--glue", required=True)
    common(sp); sp.set_defaults(fn=cmd_glue)

    sp = sub.add_parser("qcoh-check"); sp.add_argument("--datum", required=True)
    common(sp); sp.set_defaults(fn=cmd_qcoh_check)

    def bounds(sp):
        sp.add_argument("--box", type=int, default=2)
        sp.add_argument("--k-max", dest="k_max", type=int, default=1)

    sp = sub.add_parser("proj-gamma")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--module", default=None)
    sp.add_argument("--window", nargs=2, type=int, required=True)
    bounds(sp)
    common(sp); sp.set_defaults(fn=cmd_proj_gamma)

    sp = sub.add_parser("serre-check")
    sp.add_argument("--ring", required=True)
    sp.add_argument("--module", default=None)
    sp.add_argument("--window", nargs=2, type=int, required=True)
    bounds(sp)
    sp.add_argument("--torsion-bound", type=int, default=3)
    common(sp); sp.set_defaults(fn=cmd_serre_check)

    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except NCSpecError as exc:
        report = _report(args.subcommand, "fail",
                         {"error": type(exc).__name__, "message": str(exc)})
        sys.stdout.write(json.dumps(report, indent=2) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
