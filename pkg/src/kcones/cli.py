"""Command-line interface.

Documents and reports go to standard output, diagnostics to standard
error.  Exit codes: 0 for success or an ok verdict, 1 for a verdict
failure (violations, or a mismatch under --assert-identity), 2 for usage,
parse, or IO problems.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .corpus import (FILE_EXTENSIONS, MAX_CONE_DIM, corpus as corpus_entries,
                     gen_random, run_entry)
from .documents import Document, MorphismBundle, document_of, emit, parse
from .elliott import EMorphism, compose_e_morphisms, validate_e_morphism, validate_e_object
from .errors import DocumentError, KConesError, ParseError, TransportError
from .functors import (elliott_to_stevens, roundtrip_morphism, roundtrip_object,
                       stevens_to_elliott, transport_elliott_to_stevens,
                       transport_stevens_to_elliott, verify_iso)
from .stevens import SMorphism, compose_s_morphisms, validate_s_morphism, validate_s_object

OK, VERDICT_FAILURE, USAGE = 0, 1, 2


def _load(path: str) -> Document:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse(fh.read())
    except OSError as exc:
        raise _CliError(f"cannot read {path}: {exc}") from exc


class _CliError(Exception):
    pass


def _print_report(payload):
    print(json.dumps(payload, sort_keys=True, indent=1))


def _validation_report(doc: Document):
    value = doc.value
    if doc.kind == "s-object":
        return validate_s_object(value)
    if doc.kind == "e-object":
        return validate_e_object(value)
    if doc.kind == "s-morphism":
        return validate_s_morphism(value.morphism, value.src, value.dst)
    return validate_e_morphism(value.morphism, value.src, value.dst)


def _cmd_validate(args) -> int:
    report = _validation_report(_load(args.file))
    _print_report({
        "verdict": "ok" if report.ok else "violations",
        "violations": [{"code": v.code, "detail": v.detail} for v in report.violations]})
    return OK if report.ok else VERDICT_FAILURE


def _cmd_apply(args) -> int:
    doc = _load(args.file)
    if args.functor == "f":
        if doc.kind != "s-object":
            raise _CliError("--functor f consumes an s-object document")
        report = validate_s_object(doc.value)
        if not report.ok:
            _print_report({"verdict": "violations",
                           "violations": [{"code": v.code, "detail": v.detail}
                                          for v in report.violations]})
            return VERDICT_FAILURE
        out = stevens_to_elliott(doc.value)
    else:
        if doc.kind != "e-object":
            raise _CliError("--functor g consumes an e-object document")
        report = validate_e_object(doc.value)
        if not report.ok:
            _print_report({"verdict": "violations",
                           "violations": [{"code": v.code, "detail": v.detail}
                                          for v in report.violations]})
            return VERDICT_FAILURE
        out = elliott_to_stevens(doc.value)
    sys.stdout.write(emit(document_of(out)))
    return OK


def _cmd_transport(args) -> int:
    doc = _load(args.morphism)
    if doc.kind not in ("s-morphism", "e-morphism"):
        raise _CliError("transport consumes a morphism document")
    bundle = doc.value
    src, dst = bundle.src, bundle.dst
    if args.src:
        src_doc = _load(args.src)
        src = src_doc.value
    if args.dst:
        dst_doc = _load(args.dst)
        dst = dst_doc.value
    try:
        if args.direction == "s2e":
            if not isinstance(bundle.morphism, SMorphism):
                raise _CliError("direction s2e needs an s-morphism document")
            report = validate_s_morphism(bundle.morphism, src, dst)
            if not report.ok:
                _print_report({"verdict": "violations",
                               "violations": [{"code": v.code, "detail": v.detail}
                                              for v in report.violations]})
                return VERDICT_FAILURE
            out = transport_stevens_to_elliott(bundle.morphism, src, dst)
            out_bundle = MorphismBundle(out, stevens_to_elliott(src), stevens_to_elliott(dst))
        else:
            if not isinstance(bundle.morphism, EMorphism):
                raise _CliError("direction e2s needs an e-morphism document")
            report = validate_e_morphism(bundle.morphism, src, dst)
            if not report.ok:
                _print_report({"verdict": "violations",
                               "violations": [{"code": v.code, "detail": v.detail}
                                              for v in report.violations]})
                return VERDICT_FAILURE
            out = transport_elliott_to_stevens(bundle.morphism, src, dst)
            out_bundle = MorphismBundle(out, elliott_to_stevens(src), elliott_to_stevens(dst))
    except TransportError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return VERDICT_FAILURE
    sys.stdout.write(emit(document_of(out_bundle)))
    return OK


def _cmd_roundtrip(args) -> int:
    doc = _load(args.file)
    if doc.kind in ("s-object", "e-object"):
        report = roundtrip_object(doc.value)
    else:
        bundle = doc.value
        report = roundtrip_morphism(bundle.morphism, bundle.src, bundle.dst)
    payload = {"direction": report.direction, "verdict": report.verdict}
    if report.witness is not None:
        payload["witness"] = {"component": report.witness[0], "detail": report.witness[1]}
    _print_report(payload)
    if args.assert_identity and report.verdict != "identity":
        return VERDICT_FAILURE
    return OK


def _cmd_compose(args) -> int:
    first = _load(args.first)
    second = _load(args.second)
    if first.kind != second.kind or first.kind not in ("s-morphism", "e-morphism"):
        raise _CliError("compose takes two morphism documents of the same kind")
    b1, b2 = first.value, second.value
    if b1.dst != b2.src:
        raise _CliError("the first morphism's target must equal the second's source")
    if first.kind == "s-morphism":
        composed = compose_s_morphisms(b2.morphism, b1.morphism)
    else:
        composed = compose_e_morphisms(b2.morphism, b1.morphism)
    sys.stdout.write(emit(document_of(MorphismBundle(composed, b1.src, b2.dst))))
    return OK


def _cmd_compare(args) -> int:
    a = _load(args.first)
    b = _load(args.second)
    if a.kind not in ("s-object", "e-object") or a.kind != b.kind:
        raise _CliError("compare takes two object documents of the same kind")
    forward = backward = None
    if args.witness:
        fwd_doc, bwd_doc = _load(args.witness[0]), _load(args.witness[1])
        forward, backward = fwd_doc.value.morphism, bwd_doc.value.morphism
    report = verify_iso(a.value, b.value, forward, backward, search=args.search)
    payload = {"verdict": "ok" if report.ok else "violations",
               "violations": [{"code": v.code, "detail": v.detail}
                              for v in report.violations]}
    if report.ok and forward is None and a.value.group.rank <= 6:
        from .functors import search_permutation_witness
        perm = search_permutation_witness(a.value, b.value)
        if perm is not None:
            payload["witness_permutation"] = list(perm)
    _print_report(payload)
    return OK if report.ok else VERDICT_FAILURE


def _cmd_gen(args) -> int:
    doc = gen_random(args.kind, args.seed, args.blocks, args.cone_dim,
                                args.phantom_dim)
    sys.stdout.write(emit(doc))
    return OK


def _use_color() -> bool:
    return sys.stdout.isatty() and not os.environ.get("NO_COLOR")


def _cmd_corpus(args) -> int:
    entries = corpus_entries()
    if args.write:
        os.makedirs(args.write, exist_ok=True)
        for entry in entries:
            ext = FILE_EXTENSIONS[entry.document.kind]
            path = os.path.join(args.write, entry.name + ext)
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(emit(entry.document))
            print(f"wrote {path}", file=sys.stderr)
    if not args.run_all:
        for entry in entries:
            expect = ", ".join(f"{k}={v}" for k, v in sorted(entry.expected.items()))
            print(f"{entry.name}\t{entry.document.kind}\t{expect}")
        return OK
    rows = []
    failures = 0
    color = _use_color()
    for entry in entries:
        actual = run_entry(entry)
        for check in sorted(entry.expected):
            expected = entry.expected[check]
            got = actual[check]
            match = expected == got
            failures += 0 if match else 1
            rows.append((entry.name, check, expected, got))
            tag = "PASS" if match else "FAIL"
            if color:
                tag = f"\x1b[32m{tag}\x1b[0m" if match else f"\x1b[31m{tag}\x1b[0m"
            print(f"{entry.name}\t{check}\texpected={expected}\tactual={got}\t{tag}")
    if args.report_dir:
        from .report import write_corpus_report
        for path in write_corpus_report(rows, args.report_dir):
            print(f"wrote {path}", file=sys.stderr)
    return OK if failures == 0 else VERDICT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kcones",
        description="Exact computation with Elliott- and Stevens-invariant presentations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="run the validator for a document")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_validate)

    p = sub.add_parser("apply", help="apply an invariant functor to an object")
    p.add_argument("--functor", choices=("f", "g"), required=True)
    p.add_argument("file")
    p.set_defaults(fn=_cmd_apply)

    p = sub.add_parser("transport", help="transport a morphism to the other category")
    p.add_argument("--direction", choices=("s2e", "e2s"), required=True)
    p.add_argument("morphism")
    p.add_argument("--src", help="override the embedded source object")
    p.add_argument("--dst", help="override the embedded target object")
    p.set_defaults(fn=_cmd_transport)

    p = sub.add_parser("roundtrip", help="send a document around both functors")
    p.add_argument("file")
    p.add_argument("--assert-identity", action="store_true")
    p.set_defaults(fn=_cmd_roundtrip)

    p = sub.add_parser("compose", help="compose two morphism documents (first, then second)")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(fn=_cmd_compose)

    p = sub.add_parser("compare", help="check two objects for isomorphism")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--witness", nargs=2, metavar=("FWD", "BWD"))
    p.add_argument("--search", action="store_true")
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("gen", help="generate a seeded random valid document")
    p.add_argument("--kind", required=True,
                   choices=("s-object", "e-object", "s-morphism", "e-morphism"))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--blocks", type=int, required=True)
    p.add_argument("--cone-dim", type=int, default=MAX_CONE_DIM, dest="cone_dim")
    p.add_argument("--phantom-dim", type=int, default=None, dest="phantom_dim")
    p.set_defaults(fn=_cmd_gen)

    p = sub.add_parser("corpus", help="list, materialize, or run the named corpus")
    p.add_argument("--run-all", action="store_true", dest="run_all")
    p.add_argument("--write", metavar="DIR")
    p.add_argument("--report-dir", metavar="DIR", dest="report_dir")
    p.set_defaults(fn=_cmd_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ParseError as exc:
        where = f" (line {exc.line}, column {exc.column})" if exc.line else ""
        print(f"parse error: {exc}{where}", file=sys.stderr)
        return USAGE
    except DocumentError as exc:
        field = f" [{exc.field}]" if exc.field else ""
        print(f"document error: {exc}{field}", file=sys.stderr)
        return USAGE
    except KConesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    raise SystemExit(main())
