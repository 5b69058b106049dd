"""Command-line entry point: ``kummerlat <group> <command> ...``.

Exit codes: 0 all checks pass, 1 usage or IO error, 2 a verification failed,
3 a scan was incomplete (cap hit or bound not reached).
"""

import argparse
import json
import sys
import time
from fractions import Fraction

from . import __version__, serialize
from .errors import DimensionMismatch, KummerLatError, NotRational, SchemaError

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INCOMPLETE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _out(args, obj, text=None):
    if args.json or text is None:
        print(json.dumps(obj, sort_keys=True))
    else:
        print(text)


def _stream(obj):
    print(json.dumps(obj, sort_keys=True), flush=True)


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path}: invalid JSON at line {e.lineno}: {e.msg}") from None


def _torus(args):
    from .kummer import GeometricInterpretation, standard_geometric_interpretation

    if getattr(args, "torus", None):
        return GeometricInterpretation.from_json(_read_json(args.torus)).validate()
    return standard_geometric_interpretation()


def _kummer_model(args):
    from .kummer import build_mukai_model

    if getattr(args, "model", None):
        return serialize.load_model(args.model, getattr(args, "expect_digest", None))
    return build_mukai_model()


def _gram_arg(args):
    from .lattice import IntegerLattice

    if args.gram:
        return serialize.lattice_from_json(_read_json(args.gram))
    if args.rows:
        rows = [serialize.parse_rationals(r) for r in args.rows.split(";")]
        return IntegerLattice(rows)
    raise UsageError("give --gram FILE or --rows 'a,b;c,d'")


# ---------------------------------------------------------------------------
# lattice


def cmd_lattice_info(args):
    from .lattice import determinant, discriminant_form, is_even_unimodular, signature

    L = _gram_arg(args)
    sig = signature(L)
    info = {"rank": L.rank, "det": determinant(L), "signature": list(sig), "even": L.is_even,
            "even_unimodular": is_even_unimodular(L)}
    if L.is_even:
        D = discriminant_form(L)
        info["discriminant"] = {"order": D.order, "divisors": list(D.elementary_divisors),
                                "q": [str(q) for q in D.q_values]}
    text = "\n".join(f"{k}: {v}" for k, v in info.items())
    _out(args, info, text)
    return EXIT_OK


def cmd_lattice_glue(args):
    from .lattice import (determinant, discriminant_form, glue, glue_map_from_images,
                          is_even_unimodular, signature)

    if args.left or args.right or args.images:
        if not (args.left and args.right and args.images):
            raise UsageError("--left, --right and --images go together")
        A = serialize.lattice_from_json(_read_json(args.left))
        B = serialize.lattice_from_json(_read_json(args.right))
        imgs = [serialize.dec_vector(v, "images") for v in _read_json(args.images)]
        gamma = glue_map_from_images(discriminant_form(A), discriminant_form(B), imgs)
    else:
        from .kummer import build_glue_map

        gamma = build_glue_map()
    G, _ = glue(gamma.domain.lattice, gamma.codomain.lattice, gamma)
    info = {"left_order": gamma.domain.order, "right_order": gamma.codomain.order,
            "anti_isometry": True, "rank": G.rank, "det": determinant(G),
            "signature": list(signature(G)), "even_unimodular": is_even_unimodular(G)}
    _out(args, info, "\n".join(f"{k}: {v}" for k, v in info.items()))
    return EXIT_OK if info["even_unimodular"] else EXIT_FAIL


# ---------------------------------------------------------------------------
# kummer


def cmd_kummer_build(args):
    from .kummer import TORUS, build_mukai_model

    model = TORUS if args.torus_model else build_mukai_model()
    doc = serialize.emit_model(model, args.out)
    info = {"kind": doc["kind"], "digest": doc["digest"], "out": args.out}
    if not args.torus_model:
        cert = model.certification()
        info.update(even=cert["even"], det=cert["det"], signature=list(cert["signature"]))
    _out(args, info, "\n".join(f"{k}: {v}" for k, v in info.items()))
    return EXIT_OK


def cmd_kummer_verify(args):
    from .kummer import glue_h2, k_lattice, build_kummer_lattice
    from .lattice import discriminant_form, is_even_unimodular, signature
    from .scenario import verify_model_certificate

    M = _kummer_model(args)
    ok, details, wit = verify_model_certificate(M)
    H2, _ = glue_h2()
    details["glue"] = {"K_order": discriminant_form(k_lattice()).order,
                       "Pi_order": discriminant_form(build_kummer_lattice()).order,
                       "H2_signature": list(signature(H2)),
                       "H2_even_unimodular": is_even_unimodular(H2)}
    ok = ok and details["glue"]["H2_even_unimodular"]
    details["status"] = "pass" if ok else "fail"
    details["witnesses"] = wit
    _out(args, details, "\n".join(f"{k}: {v}" for k, v in details.items()))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_kummer_rootfree(args):
    from .enumeration import roots_in_complement
    from .errors import CapExceeded
    from .kummer import induced_four_plane, orbifold_map, sample_geometric_interpretation
    import numpy as np

    M = _kummer_model(args)
    t0 = time.perf_counter()
    if args.torus:
        samples = [_torus(args)]
    else:
        rng = np.random.default_rng(args.seed)
        samples = [sample_geometric_interpretation(rng) for _ in range(args.samples)]
    total, complete = 0, True
    for k, g in enumerate(samples):
        b = None
        if args.omit_half_bz:
            b = orbifold_map(g, M)[0] - M.named["B_Z"] * Fraction(1, 2)
        try:
            res = roots_in_complement(M, induced_four_plane(g, M, b_override=b), cap=args.cap)
            roots = res.roots
        except CapExceeded as e:
            complete = False
            roots = []
            _stream({"kind": "cap", "sample": k, "found": e.count})
        for r in roots:
            coords = [int(x) for x in M.to_lattice_coords(np.asarray([r], dtype=object))[0]]
            _stream({"sample": k, "coords": coords, "norm": -2})
        total += len(roots)
    _stream({"kind": "summary", "samples": len(samples), "roots": total, "complete": complete,
             "seconds": round(time.perf_counter() - t0, 3)})
    if not complete:
        return EXIT_INCOMPLETE
    expect_roots = args.omit_half_bz
    return EXIT_OK if (total > 0) == expect_roots else EXIT_FAIL


# ---------------------------------------------------------------------------
# twist


def cmd_twist_kernel(args):
    from .kummer import TORUS, transcendental_lattice, twisted_kernel

    g = _torus(args)
    _, T = transcendental_lattice(TORUS.h2_lattice(), [g.omega1, g.omega2])
    tk = twisted_kernel(T, serialize.parse_rationals(args.B), args.n)
    info = {"rank": T.rank, "n": args.n, "index": tk.index,
            "kernel_basis": serialize.enc_matrix(tk.kernel.basis),
            "kernel_gram": serialize.enc_matrix(tk.kernel.gram())}
    _out(args, info, f"T rank {T.rank}, kernel index {tk.index} (n = {args.n})")
    return EXIT_OK


def cmd_twist_isometry(args):
    from .kummer import verify_twisted_isometry

    g = _torus(args)
    M = _kummer_model(args)
    B_A = serialize.parse_rationals(args.B)
    b = M.pi_star(B_A) * Fraction(1, 2) if args.omit_half_bz else None
    rep = verify_twisted_isometry(g, B_A, M, b_override=b)
    info = {"passed": rep.passed, "image_in_target": rep.image_in_target,
            "gram_doubled": rep.gram_doubled, "closure_equal": rep.image_is_primitive_closure,
            "torus_rank": rep.torus_rank, "kummer_rank": rep.kummer_rank}
    _out(args, info, "\n".join(f"{k}: {v}" for k, v in info.items()))
    return EXIT_OK if rep.passed else EXIT_FAIL


# ---------------------------------------------------------------------------
# stab


def _numerical(args):
    from .stability import NumericalLattice

    if args.model:
        doc = _read_json(args.model)
        if isinstance(doc, dict) and doc.get("kind") == "numerical":
            return serialize.numerical_from_json(doc)
        M = serialize.load_model_doc(doc, args.expect_digest)
    else:
        M = _kummer_model(args)
    return NumericalLattice.from_kummer(M, _torus(args))


def _point(args):
    from .stability import ChamberPoint

    return ChamberPoint(tuple(serialize.parse_rationals(args.B)),
                        tuple(serialize.parse_rationals(args.omega)))


def cmd_stab_charge(args):
    from .stability import central_charge

    N = _numerical(args)
    re, im = central_charge(_point(args), serialize.parse_rationals(args.v), N)
    _out(args, {"re": str(re), "im": str(im)}, f"Z = {re} + i*({im})")
    return EXIT_OK


def cmd_stab_check(args):
    from .scenario import membership_json
    from .stability import exp_vector, membership, sufficiency_check

    N = _numerical(args)
    p = _point(args)
    m = membership(N, exp_vector(p, N), args.r_max)
    s = sufficiency_check(p, N, args.r_max)
    info = {"membership": membership_json(m), "sufficiency": {
        "status": s.status, "complete": s.complete,
        "delta": None if s.delta is None else serialize.mukai_to_json(s.delta),
        "charge": None if s.charge is None else [str(x) for x in s.charge]}}
    print(json.dumps(info, sort_keys=True))
    return EXIT_OK if m.complete and s.complete else EXIT_INCOMPLETE


def cmd_stab_walls(args):
    from .scenario import event_json
    from .stability import wall_crossings

    N = _numerical(args)
    path = serialize.path_from_json(_read_json(args.path))
    vecs = serialize.vectors_from_json(_read_json(args.vectors))
    t0 = time.perf_counter()
    events = wall_crossings(path, vecs, N)
    for e in events:
        _stream(event_json(e))
    _stream({"kind": "summary", "events": len(events),
             "seconds": round(time.perf_counter() - t0, 3)})
    return EXIT_OK


def cmd_stab_lift(args):
    from .stability import lift_path_winding

    N = _numerical(args)
    res = lift_path_winding(serialize.path_from_json(_read_json(args.path)), N)
    info = {"winding": res.winding, "loop": res.is_loop, "half_turns": str(res.half_turns),
            "endpoint_winding": res.endpoint.winding, "endpoint_phase": str(res.endpoint.phase)}
    _out(args, info, f"winding {res.winding}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# run


def cmd_run(args):
    from .scenario import load_scenario, run_scenario

    s = load_scenario(args.scenario)
    rep = run_scenario(s, on_result=(lambda r: _stream(
        {"task": r.task, "index": r.index, "status": r.status})) if args.json else None)
    doc = rep.to_json(timings=not args.no_timings)
    text = json.dumps(doc, indent=1, sort_keys=True)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    if args.json:
        _stream({"kind": "report", "status": rep.status, "exit_code": rep.exit_code})
    else:
        for r in rep.results:
            extra = f"  ({r.error})" if r.error else ""
            print(f"[{r.index}] {r.task:15s} {r.status}{extra}")
        print(f"status: {rep.status}")
        if not args.out:
            print(text)
    return rep.exit_code


# ---------------------------------------------------------------------------


def build_parser():
    p = _Parser(prog="kummerlat", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"kummerlat {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    lat = sub.add_parser("lattice").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    q = lat.add_parser("info", parents=[common])
    q.add_argument("--gram", help="lattice JSON file")
    q.add_argument("--rows", help="inline Gram, rows separated by ';'")
    q.set_defaults(fn=cmd_lattice_info)
    q = lat.add_parser("glue", parents=[common],
                       help="glue two lattices (default: K and Pi of the Kummer construction)")
    q.add_argument("--left")
    q.add_argument("--right")
    q.add_argument("--images", help="JSON list of dual vectors of RIGHT, one per generator of LEFT")
    q.set_defaults(fn=cmd_lattice_glue)

    km = sub.add_parser("kummer").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    q = km.add_parser("build", parents=[common])
    q.add_argument("--out", help="write the model JSON here")
    q.add_argument("--torus-model", action="store_true", help="emit the rank-8 torus model")
    q.set_defaults(fn=cmd_kummer_build)
    for name, fn in (("verify", cmd_kummer_verify), ("rootfree", cmd_kummer_rootfree)):
        q = km.add_parser(name, parents=[common])
        q.add_argument("--model")
        q.add_argument("--expect-digest")
        q.set_defaults(fn=fn)
        if name == "rootfree":
            q.add_argument("--torus", help="single torus datum (JSON)")
            q.add_argument("--samples", type=int, default=25)
            q.add_argument("--seed", type=int, default=7)
            q.add_argument("--cap", type=int)
            q.add_argument("--omit-half-bz", action="store_true",
                           help="positive control: drop the B_Z half from the B-field")

    tw = sub.add_parser("twist").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, fn in (("kernel", cmd_twist_kernel), ("isometry", cmd_twist_isometry)):
        q = tw.add_parser(name, parents=[common], aliases=[] if name == "kernel" else ["lemma51"])
        q.add_argument("--torus", help="torus datum JSON (default: square torus)")
        q.add_argument("--B", required=True, help="B-field on the torus, six rationals")
        q.set_defaults(fn=fn)
        if name == "kernel":
            q.add_argument("--n", type=int, required=True)
        else:
            q.add_argument("--model")
            q.add_argument("--expect-digest")
            q.add_argument("--omit-half-bz", action="store_true")

    st = sub.add_parser("stab").add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, fn in (("charge", cmd_stab_charge), ("check", cmd_stab_check),
                     ("walls", cmd_stab_walls), ("lift", cmd_stab_lift)):
        q = st.add_parser(name, parents=[common])
        q.add_argument("--model", help="numerical-lattice JSON or Kummer model JSON")
        q.add_argument("--expect-digest")
        q.add_argument("--torus", help="torus datum for Kummer models")
        q.set_defaults(fn=fn)
        if name in ("charge", "check"):
            q.add_argument("--B", required=True)
            q.add_argument("--omega", required=True)
        if name == "charge":
            q.add_argument("--v", required=True, help="Mukai vector r,c...,s")
        if name == "check":
            q.add_argument("--r-max", type=int)
        if name in ("walls", "lift"):
            q.add_argument("--path", required=True)
        if name == "walls":
            q.add_argument("--vectors", required=True)

    q = sub.add_parser("run", parents=[common])
    q.add_argument("scenario")
    q.add_argument("--out", help="write the report JSON here")
    q.add_argument("--no-timings", action="store_true")
    q.set_defaults(fn=cmd_run)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, SchemaError, OSError, DimensionMismatch, NotRational) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except KummerLatError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
