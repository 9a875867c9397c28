"""Command line front end.

Exit codes: 0 success, 1 a property failed, 2 malformed input, 3 a size
budget was exceeded.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import codec
from .errors import FidlError, KindMismatch, MalformedInput


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return codec.parse_document(fh.read())
    except OSError as e:
        raise MalformedInput(f"cannot read {path}: {e.strerror}", path=path)


def _load(path, *kinds):
    doc = _read(path)
    if kinds and doc.kind not in kinds:
        raise KindMismatch(f"expected {' or '.join(kinds)}, got {doc.kind}", kind=doc.kind)
    return doc, codec.decode_document(doc)


def _emit(obj):
    sys.stdout.write(codec.dumps(obj))


def cmd_check(args):
    doc, _ = _load(args.file)
    _emit({"kind": doc.kind, "valid": True})
    return 0


def cmd_dualize(args):
    from .frames import canonical_frame, complex_module, counit_iso, representation_iso

    if args.to == "frame":
        _, M = _load(args.file, "module")
        meta = {"source": "canonical frame"}
        if args.roundtrip:
            meta["roundtripIso"] = representation_iso(M).iso
        _emit(codec.frame_document(canonical_frame(M), **meta).to_json())
    else:
        _, F = _load(args.file, "frame")
        meta = {"source": "complex module"}
        if args.roundtrip:
            meta["roundtripIso"] = counit_iso(F).iso
        _emit(codec.module_document(complex_module(F), **meta).to_json())
    return 0


def cmd_congruences(args):
    from .congruences import anti_isomorphism_check, classify, enumerate_strongly_closed, theta_pair
    from .frames import canonical_frame

    _, M = _load(args.file, "module")
    c = classify(M)
    anti = anti_isomorphism_check(M)
    F = canonical_frame(M)
    closed = enumerate_strongly_closed(F)
    bijection = [
        {"closed": codec.encode_closed_pair(z), "congruence": codec.encode_congruence(theta_pair(M, z, F))}
        for z in closed
    ]
    _emit({
        **codec.encode_congruence_lists(M, c.congruences, closed),
        "bijection": bijection,
        "antiIsomorphism": anti.to_json(),
        "classification": c.to_json(),
    })
    return 0 if anti.ok else 1


def cmd_classify(args):
    from .congruences import classify

    _, M = _load(args.file, "module")
    _emit(classify(M).to_json())
    return 0


def cmd_subalg(args):
    from .morphisms import validate_subalgebra_direct, validate_subalgebra_relational

    _, M = _load(args.module, "module")
    doc = _read(args.carriers)
    if doc.kind != "subalgebra":
        raise KindMismatch(f"expected subalgebra, got {doc.kind}", kind=doc.kind)
    cand = codec.decode_carriers(doc.payload, M)
    d, r = validate_subalgebra_direct(cand), validate_subalgebra_relational(cand)

    def js(v):
        return {"fusion": v.fusion_closed, "implication": v.implication_closed, "subalgebra": v.is_subalgebra}

    _emit({"direct": js(d), "relational": js(r), "agree": js(d) == js(r)})
    return 0 if js(d) == js(r) else 1


def cmd_hom(args):
    from .frames import dual_of_hom
    from .morphisms import is_iso

    _, src = _load(args.src, "module")
    _, tgt = _load(args.tgt, "module")
    doc = _read(args.maps)
    if doc.kind != "hom":
        raise KindMismatch(f"expected hom, got {doc.kind}", kind=doc.kind)
    hom = codec.decode_hom(doc.payload, src, tgt)
    iso, _ = is_iso(hom)
    dual = dual_of_hom(hom)
    _emit({"valid": True, "iso": iso, "dual": {"g": list(dual.g), "h": list(dual.h)}})
    return 0


def cmd_fuzz(args):
    from .generators import FuzzConfig, generate_corpus
    from .suite import HARD, hard_failures, run_module_suite

    cfg = FuzzConfig(args.seed, args.count, args.strategy, args.max_a, args.max_b).validate()
    docs, stats = generate_corpus(cfg)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    props = {k: {"pass": 0, "fail": 0, "skipped": 0} for k in HARD}
    failures, diagnostics = [], []
    for name, doc in docs:
        if args.out:
            with open(os.path.join(args.out, name + ".json"), "w", encoding="utf-8") as fh:
                fh.write(doc.dumps())
        M = codec.decode_document(doc)
        res = run_module_suite(M)
        for k in HARD:
            v = res.get(k)
            props[k]["pass" if v == "pass" else "skipped" if v == "skipped" else "fail"] += 1
        for k in hard_failures(res):
            failures.append({"instance": name, "property": k, "record": res[k]})
        for d in res["diagnostics"]:
            diagnostics.append({"instance": name, **d})
    summary = {
        "config": {"seed": cfg.seed, "count": cfg.count, "strategy": cfg.strategy,
                   "maxA": cfg.max_a, "maxB": cfg.max_b},
        "tables": {"proposed": stats.proposed, "accepted": stats.accepted},
        "properties": props,
        "failures": failures,
        "diagnostics": diagnostics,
    }
    if args.out:
        with open(os.path.join(args.out, "summary.json"), "w", encoding="utf-8") as fh:
            fh.write(codec.dumps(summary))
    _emit(summary)
    return 1 if failures else 0


def cmd_export_dot(args):
    from .dot import frame_dot, lattice_dot, module_dot

    doc, value = _load(args.file)
    name = doc.meta.get("name", doc.kind) if isinstance(doc.meta.get("name", ""), str) else doc.kind
    if doc.kind == "lattice":
        sys.stdout.write(lattice_dot(value, name))
    elif doc.kind == "module":
        sys.stdout.write(module_dot(value, name))
    elif doc.kind == "frame":
        sys.stdout.write(frame_dot(value, name))
    else:
        raise KindMismatch(f"cannot draw a {doc.kind} document", kind=doc.kind)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="fidl-lab", description="Finite FIDL-module workbench")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", help="validate a document")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("dualize", help="canonical frame of a module or complex module of a frame")
    s.add_argument("file")
    s.add_argument("--to", choices=("frame", "module"), required=True)
    s.add_argument("--roundtrip", action="store_true")
    s.set_defaults(func=cmd_dualize)

    s = sub.add_parser("congruences", help="congruences, strongly closed pairs and their bijection")
    s.add_argument("file")
    s.set_defaults(func=cmd_congruences)

    s = sub.add_parser("classify", help="simple / subdirectly irreducible verdict")
    s.add_argument("file")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("subalg", help="direct and relational subalgebra checks")
    s.add_argument("module")
    s.add_argument("carriers")
    s.set_defaults(func=cmd_subalg)

    s = sub.add_parser("hom", help="validate a homomorphism")
    s.add_argument("src")
    s.add_argument("tgt")
    s.add_argument("maps")
    s.set_defaults(func=cmd_hom)

    s = sub.add_parser("fuzz", help="generate a corpus and run the property suite")
    s.add_argument("--seed", type=int, default=1)
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--strategy", default="mixed")
    s.add_argument("--max-a", type=int, default=8)
    s.add_argument("--max-b", type=int, default=6)
    s.add_argument("--out")
    s.set_defaults(func=cmd_fuzz)

    s = sub.add_parser("export-dot", help="Hasse diagrams and triples as DOT")
    s.add_argument("file")
    s.set_defaults(func=cmd_export_dot)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FidlError as e:
        _emit(e.to_json())
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
