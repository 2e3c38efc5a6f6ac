"""Command-line interface.

Subcommands: axioms, check-hom, check-gp, enumerate, poset, homology,
realize, dressian, dequantize.  Exit code 0 on success, 1 when a check
reports a verification failure, 2 on usage errors.  Identical flags give
byte-identical data files: point streams are canonically sorted JSONL,
posets deterministic DOT, numeric grids fixed-precision CSV.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction
from typing import List, Optional

from hypergrass import dequant, realization, topology
from hypergrass.fields import (
    HF,
    parse_element,
    set_to_json,
    verify_hyperfield_axioms,
)
from hypergrass.grassmannian import (
    enumerate_grassmannian,
    enumerate_stream,
    hasse_dot,
    weak_map_poset,
)
from hypergrass.homs import lookup_hom, verify_homomorphism
from hypergrass.plucker import (
    MatroidBases,
    check_strong,
    check_weak,
    from_chirotope,
    from_json,
)

USAGE_ERROR = 2
CHECK_FAILED = 1


def _field(tag: str) -> HF:
    try:
        return HF(tag)
    except ValueError:
        raise SystemExit(USAGE_ERROR)


def _threads(value: Optional[int]) -> int:
    if value is not None:
        return value
    env = os.environ.get("HYPERGRASS_THREADS")
    return int(env) if env else 1


def _emit(doc) -> None:
    print(json.dumps(doc, sort_keys=True, indent=2))


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hypergrass",
        description="Exact hyperfield and matroid-over-hyperfield computations",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("axioms", help="verify the hyperfield axioms")
    p.add_argument("--field", required=True, help="one of R C TRI P S PHI K TR TC TT")
    p.add_argument("--samples", help="comma-separated element literals to probe")

    p = sub.add_parser("check-hom", help="verify a registered homomorphism")
    p.add_argument("--from", dest="source", required=True)
    p.add_argument("--to", dest="target", required=True)

    p = sub.add_parser("check-gp", help="check Grassmann-Plucker validity")
    p.add_argument("--field", default="S")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--chirotope", help="string over 0+- (S) or 01 (K)")
    p.add_argument("--coords", help="JSON coord document for general fields")
    p.add_argument("--kind", choices=["strong", "weak"], default="strong")

    p = sub.add_parser("enumerate", help="enumerate a finite Grassmannian")
    p.add_argument("--field", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=["strong", "weak"], default="strong")
    p.add_argument("--out", help="write JSONL here instead of stdout")
    p.add_argument("--threads", type=int)
    p.add_argument("--guard", type=int, default=36)
    p.add_argument("--stream", action="store_true",
                   help="emit points as found, without the canonical sort")

    p = sub.add_parser("poset", help="weak-map poset of an enumerated point set")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=["strong", "weak"], default="strong")
    p.add_argument("--dot", help="write the Hasse diagram here as DOT")

    p = sub.add_parser("homology", help="mod-2 homology of the order complex")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--field", required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=["strong", "weak"], default="strong")
    p.add_argument("--cap", type=int, default=topology.DEFAULT_CAP)

    p = sub.add_parser("realize", help="search the realization fiber of a matroid")
    p.add_argument("--hom", default="kappa", choices=["kappa"])
    p.add_argument("--field", default="S", choices=["S"])
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--matroid", required=True,
                   help="fano | nonfano | uniform | JSON list of bases")
    p.add_argument("--first", action="store_true", help="stop at the first witness")
    p.add_argument("--threads", type=int)
    p.add_argument("--out", help="write all witnesses here as JSONL")

    p = sub.add_parser("dressian", help="tropical Plucker membership")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--values", required=True,
                   help='JSON like {"12": "0", "13": "5/2", ...}')
    p.add_argument("--bases", help="JSON list of bases; default the uniform matroid")

    p = sub.add_parser("dequantize", help="emit the deformed-addition surface")
    p.add_argument("--h", required=True, help="positive rational scale, e.g. 1/5")
    p.add_argument("--grid", required=True, help="start:stop:step, rationals")
    p.add_argument("--out", help="CSV path; default stdout")
    p.add_argument("--prec", type=int, default=dequant.DEFAULT_PREC)

    return top


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_axioms(args) -> int:
    f = _field(args.field)
    samples = None
    if args.samples:
        samples = [parse_element(t.strip()) for t in args.samples.split(",")]
    report = verify_hyperfield_axioms(f, samples)
    _emit(report.to_json())
    return 0 if report.passed else CHECK_FAILED


def _cmd_check_hom(args) -> int:
    try:
        h = lookup_hom(_field(args.source), _field(args.target))
    except KeyError as exc:
        print(str(exc), file=sys.stderr)
        return USAGE_ERROR
    report = verify_homomorphism(h)
    _emit(report.to_json())
    return 0 if report.passed else CHECK_FAILED


def _cmd_check_gp(args) -> int:
    f = _field(args.field)
    if bool(args.chirotope) == bool(args.coords):
        print("check-gp needs exactly one of --chirotope / --coords", file=sys.stderr)
        return USAGE_ERROR
    try:
        if args.chirotope:
            v = from_chirotope(f, args.r, args.n, args.chirotope)
        else:
            v = from_json(json.loads(args.coords))
    except (ValueError, KeyError) as exc:
        print(f"bad vector: {exc}", file=sys.stderr)
        return USAGE_ERROR
    ok, witness = (check_strong if args.kind == "strong" else check_weak)(v)
    _emit({
        "kind": args.kind,
        "valid": ok,
        "witness": None if witness is None else _witness_doc(witness),
    })
    return 0 if ok else CHECK_FAILED


def _witness_doc(witness):
    if isinstance(witness, tuple) and witness and witness[0] in ("exchange", "three-term", "empty", "size"):
        return {"type": witness[0], "data": [list(x) if isinstance(x, tuple) else x for x in witness[1:]]}
    I, J = witness
    return {"type": "relation", "I": list(I), "J": list(J)}


def _cmd_enumerate(args) -> int:
    f = _field(args.field)
    sink = open(args.out, "w") if args.out else sys.stdout
    try:
        if args.stream:
            for p in enumerate_stream(f, args.r, args.n, args.kind):
                sink.write(p.chirotope() + "\n")
        else:
            g = enumerate_grassmannian(
                f, args.r, args.n, args.kind,
                threads=_threads(args.threads), guard=args.guard,
            )
            for p in g.points:
                sink.write(p.chirotope() + "\n")
    finally:
        if args.out:
            sink.close()
    return 0


def _read_points(args, f: HF):
    with open(args.infile) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    return [from_chirotope(f, args.r, args.n, ln) for ln in lines]


def _cmd_poset(args) -> int:
    from hypergrass.grassmannian import Grassmannian

    f = _field(args.field)
    points = _read_points(args, f)
    g = Grassmannian(f, args.r, args.n, args.kind, tuple(points))
    P = weak_map_poset(g)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(hasse_dot(P))
    _emit({
        "size": P.size,
        "hasseEdges": len(P.hasse_edges()),
        "maxima": [P.labels[i] for i in P.maxima()],
        "minimaCount": len(P.minima()),
    })
    return 0


def _cmd_homology(args) -> int:
    from hypergrass.grassmannian import Grassmannian

    f = _field(args.field)
    points = _read_points(args, f)
    g = Grassmannian(f, args.r, args.n, args.kind, tuple(points))
    P = weak_map_poset(g)
    C = topology.order_complex(P, cap=args.cap)
    _emit({
        "fvector": list(C.f_vector()),
        "betti": topology.homology_mod2(C),
        "eulerCharacteristic": C.euler_characteristic(),
        "contractibleViaMax": topology.is_contractible_via_max(P),
    })
    return 0


def _cmd_realize(args) -> int:
    if args.matroid == "fano":
        if (args.r, args.n) != (3, 7):
            print("the Fano matroid lives at r=3, n=7", file=sys.stderr)
            return USAGE_ERROR
        m = realization.fano_bases()
    elif args.matroid == "nonfano":
        if (args.r, args.n) != (3, 7):
            print("the non-Fano matroid lives at r=3, n=7", file=sys.stderr)
            return USAGE_ERROR
        m = realization.nonfano_bases()
    elif args.matroid == "uniform":
        m = MatroidBases.uniform(args.n, args.r)
    else:
        try:
            bases = json.loads(args.matroid)
            m = MatroidBases.from_subsets(args.n, args.r, [tuple(b) for b in bases])
        except (ValueError, TypeError) as exc:
            print(f"bad matroid spec: {exc}", file=sys.stderr)
            return USAGE_ERROR
    started = time.perf_counter()
    witnesses = realization.search_orientations(
        m, first_only=args.first, threads=_threads(args.threads)
    )
    elapsed = time.perf_counter() - started
    if args.out:
        with open(args.out, "w") as fh:
            for w in witnesses:
                fh.write(w + "\n")
    _emit({
        "matroid": args.matroid,
        "count": len(witnesses),
        "elapsed": round(elapsed, 3),
        "witnesses": witnesses[:5],
    })
    return 0


def _cmd_dressian(args) -> int:
    if args.bases:
        m = MatroidBases.from_subsets(
            args.n, args.r, [tuple(b) for b in json.loads(args.bases)]
        )
    else:
        m = MatroidBases.uniform(args.n, args.r)
    try:
        raw = json.loads(args.values)
        values = {}
        for key, val in raw.items():
            idx = tuple(int(c) for c in (key.split(",") if "," in key else key))
            values[idx] = Fraction(str(val))
    except (ValueError, TypeError) as exc:
        print(f"bad values: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        member, table = realization.dressian_member(values, m)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return USAGE_ERROR
    _emit({"member": member, "relations": table})
    return 0 if member else CHECK_FAILED


def _cmd_dequantize(args) -> int:
    try:
        h = Fraction(args.h)
        if h <= 0:
            raise ValueError("h must be positive")
        grid = dequant.parse_grid(args.grid)
    except ValueError as exc:
        print(f"bad dequantize flags: {exc}", file=sys.stderr)
        return USAGE_ERROR
    if args.out:
        with open(args.out, "w") as fh:
            rows = dequant.figure_emit(h, grid, fh.write, prec=args.prec)
    else:
        rows = dequant.figure_emit(h, grid, sys.stdout.write, prec=args.prec)
    print(f"wrote {rows} rows", file=sys.stderr)
    return 0


_DISPATCH = {
    "axioms": _cmd_axioms,
    "check-hom": _cmd_check_hom,
    "check-gp": _cmd_check_gp,
    "enumerate": _cmd_enumerate,
    "poset": _cmd_poset,
    "homology": _cmd_homology,
    "realize": _cmd_realize,
    "dressian": _cmd_dressian,
    "dequantize": _cmd_dequantize,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return _DISPATCH[args.command](args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())
