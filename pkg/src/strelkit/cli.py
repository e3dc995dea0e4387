"""The ``strelkit`` command.

Exit codes: 0 success or positive verdict, 1 negative verdict, 2 usage or
input error.  ``--machine`` switches every verb to one JSON object on stdout.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List

from . import fixtures
from . import relations as rel
from .exactla import field_from_spec, field_name
from .filtration import g_functor, refined_functor
from .io import (FormatError, format_matrix, matrix_rows, parse_kronecker, parse_matrix,
                 parse_relation, parse_representation)
from .kronecker import DecompositionError, decompose
from .presentation import (PresentationError, SignError, assign_signs, parse_presentation,
                           validate_string_algebra)
from .relations import RelationError
from .sigma import is_sigma_pure_injective
from .strmod import (ModuleError, band_module, format_representation, is_indecomposable,
                     string_module)
from .words import (EQUAL, GREATER, WordError, check_word, compare, finite_words,
                    format_word, inverse, parse_word, slice_word)

FORMAL_WARNING = "warning: algebra is not finite-dimensional; criterion applied formally"


class UsageError(Exception):
    pass


def default_seed() -> int:
    raw = os.environ.get("STRELKIT_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"STRELKIT_SEED must be an integer, got {raw!r}")


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")


def _algebra(args):
    if getattr(args, "algebra", None):
        P = parse_presentation(_read(args.algebra))
    else:
        P = fixtures.lambda2()
    if getattr(args, "field", None):
        from .presentation import format_presentation
        text = format_presentation(P).replace(f"field {field_name(P.field)}",
                                              f"field {args.field}", 1)
        P = parse_presentation(text)
    return P


def _field(args):
    return field_from_spec(args.field) if getattr(args, "field", None) else None


def _word(text, P):
    return check_word(parse_word(text), P)


# ---------------------------------------------------------------------------
# enumeration


def enumerate_strings(P, max_len: int) -> List[dict]:
    """Valid finite words up to max_len, one per inverse pair.

    Trivial words are listed with both signs.  Each row has the word, the
    dimension of its string module and whether that module is indecomposable.
    """
    if validate_string_algebra(P):
        raise PresentationError("not a string algebra presentation")
    rows, seen = [], set()
    for w in finite_words(P, max_len):
        if not w.is_trivial:
            if inverse(w) in seen:
                continue
        seen.add(w)
        M = string_module(w, P)
        rows.append({"word": format_word(w), "length": len(w.core), "dim": M.dim,
                     "indecomposable": is_indecomposable(M)})
    return rows


# ---------------------------------------------------------------------------
# verbs; each returns (exit code, plain text, machine dict)


def cmd_validate(args):
    P = parse_presentation(_read(args.file))
    bad = validate_string_algebra(P)
    data = {"string_algebra": not bad, "violations": [str(v) for v in bad],
            "finite_dimensional": P.is_finite_dimensional(), "field": field_name(P.field)}
    lines = [str(v) for v in bad]
    if not bad:
        signs = assign_signs(P)
        data["signs"] = {str(l): s for l, s in signs.items()}
        lines.append("string algebra: yes")
        lines.append("signs: " + " ".join(f"{l}:{s:+d}" for l, s in signs.items()))
    else:
        lines.append("string algebra: no")
    lines.append(f"finite-dimensional: {'yes' if data['finite_dimensional'] else 'no'}")
    return (0 if not bad else 1), "\n".join(lines), data


def cmd_word(args):
    P = _algebra(args)
    signs = assign_signs(P)
    if args.action == "check":
        try:
            w = _word(args.word, P)
        except WordError as exc:
            return 1, f"invalid: {exc}", {"valid": False, "error": str(exc)}
        data = {"valid": True, "word": format_word(w), "kind": w.kind}
        return 0, f"valid {w.kind} word: {format_word(w)}", data
    if args.action == "inverse":
        w = inverse(_word(args.word, P))
        return 0, format_word(w), {"inverse": format_word(w)}
    if args.action == "compare":
        c = compare(_word(args.word, P), _word(args.other, P), P, signs)
        sym = {EQUAL: "=", GREATER: ">"}.get(c, "<")
        return 0, sym, {"compare": c}
    if args.action == "slice":
        le, ri = slice_word(_word(args.word, P), args.position, P, signs)
        data = {"left": format_word(le), "right": format_word(ri)}
        return 0, f"C<=i: {data['left']}\nC>i: {data['right']}", data
    raise UsageError(f"unknown word action {args.action!r}")


def _subspace_text(name, S):
    return f"{name} (dim {S.dim}):\n" + format_matrix(S.basis, "  ")


def cmd_rel(args):
    C = parse_relation(_read(args.file), _field(args))
    data = rel.sharp_flat(C)
    if args.action == "sharpflat":
        out = {"sharp": matrix_rows(data.sharp.basis), "flat": matrix_rows(data.flat.basis),
               "sharp_dim": data.sharp.dim, "flat_dim": data.flat.dim}
        text = _subspace_text("sharp", data.sharp) + "\n" + _subspace_text("flat", data.flat)
        return 0, text, out
    if args.action == "split":
        U = rel.split(C, data)
        phi = rel.find_retraction(C, U)
        out = {"U": matrix_rows(U.basis), "dim": U.dim,
               "retraction": None if phi is None else matrix_rows(phi)}
        text = _subspace_text("U", U)
        if phi is not None:
            text += "\nretraction onto sharp:\n" + format_matrix(phi, "  ")
        return 0, text, out
    if args.action == "taction":
        tm = rel.induced_T(C, data)
        out = {"dim": tm.dim, "t_matrix": matrix_rows(tm.t_matrix), "lifts": matrix_rows(tm.lifts)}
        text = f"sharp/flat dim {tm.dim}\nT:\n" + format_matrix(tm.t_matrix, "  ")
        return 0, text, out
    raise UsageError(f"unknown rel action {args.action!r}")


def cmd_kron(args):
    M = parse_kronecker(_read(args.file), _field(args))
    dec = decompose(M, seed=args.seed)
    out = {"blocks": [str(b) for b in dec.blocks], "x_basis": matrix_rows(dec.x_basis),
           "y_basis": matrix_rows(dec.y_basis), "seed": args.seed}
    text = (str(dec) + "\nx basis:\n" + format_matrix(dec.x_basis, "  ")
            + "\ny basis:\n" + format_matrix(dec.y_basis, "  "))
    return 0, text, out


def _rep_data(M):
    return {"vertex_dims": M.vertex_dims(),
            "arrows": {a.name: matrix_rows(M.arrow_matrix(a.name)) for a in M.presentation.arrows}}


def cmd_module(args):
    P = _algebra(args)
    w = _word(args.word, P)
    if args.kind == "string":
        M = string_module(w, P)
    else:
        if not args.t_matrix:
            raise UsageError("module band needs --t-matrix <file>")
        M = band_module(w, parse_matrix(_read(args.t_matrix), P.field), P)
    return 0, format_representation(M).rstrip("\n"), _rep_data(M)


def cmd_functor(args):
    P = _algebra(args)
    if bool(args.module) == bool(args.string):
        raise UsageError("give exactly one of --module <file> or --string <word>")
    if args.module:
        M = parse_representation(_read(args.module), P)
    else:
        M = string_module(_word(args.string, P), P)
    B, D = _word(args.B, P), _word(args.D, P)
    fn = refined_functor if args.name == "F" else g_functor
    val = fn(B, D, M)
    out = {"functor": args.name, "dim": val.quotient_dim,
           "plus_dim": val.plus.dim, "minus_dim": val.minus.dim}
    text = f"{args.name}_{{B,D}}(M) has dim {val.quotient_dim} (plus {val.plus.dim}, minus {val.minus.dim})"
    if val.t_matrix is not None:
        out["t_matrix"] = matrix_rows(val.t_matrix)
        text += "\nT:\n" + format_matrix(val.t_matrix, "  ")
    return 0, text, out


def cmd_sigma(args):
    P = _algebra(args)
    warnings = []
    if not P.is_finite_dimensional():
        warnings.append(FORMAL_WARNING)
    cert = is_sigma_pure_injective(_word(args.word, P), P)
    out = cert.as_dict()
    out["formal"] = bool(warnings)
    label = "Sigma-pure-injective" if cert.verdict else "not Sigma-pure-injective"
    if warnings:
        label += " (criterion applied formally)"
    lines = [label, cert.reason]
    if args.certificate and cert.witness is not None:
        w = cert.witness
        lines.append(f"witness: vertex {w.vertex}, sign {w.eps:+d}, positions {w.start} + k*({w.step})")
        lines.append("chain: " + " > ".join(cert.chain) + " > ...")
    return (0 if cert.verdict else 1), "\n".join(lines), out, warnings


def cmd_enumerate(args):
    P = _algebra(args)
    rows = enumerate_strings(P, args.max_len)
    width = max((len(r["word"]) for r in rows), default=4)
    lines = [f"{'word':<{width}}  dim  indecomposable"]
    for r in rows:
        lines.append(f"{r['word']:<{width}}  {r['dim']:>3}  {'yes' if r['indecomposable'] else 'no'}")
    lines.append(f"{len(rows)} words")
    return 0, "\n".join(lines), {"words": rows, "count": len(rows)}


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    # SUPPRESS keeps a subcommand from resetting flags given before the verb
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--machine", action="store_true", default=argparse.SUPPRESS,
                        help="print one JSON object")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="random seed (default: STRELKIT_SEED or 0)")

    alg = argparse.ArgumentParser(add_help=False)
    alg.add_argument("--algebra", metavar="FILE",
                     help="presentation file (default: two loops x, y with xx = yy = 0)")

    fld = argparse.ArgumentParser(add_help=False)
    fld.add_argument("--field", metavar="SPEC", help="override the field, e.g. Q or 'F 5'")

    ap = argparse.ArgumentParser(prog="strelkit",
                                 description="String algebras, words, linear relations and Kronecker modules.")
    ap.add_argument("--machine", action="store_true", help="print one JSON object")
    ap.add_argument("--seed", type=int, default=None,
                    help="random seed (default: STRELKIT_SEED or 0)")
    sub = ap.add_subparsers(dest="verb", required=True, metavar="verb")

    p = sub.add_parser("validate", parents=[common], help="check a presentation")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("word", parents=[common, alg], help="word operations")
    ws = p.add_subparsers(dest="action", required=True, metavar="action")
    for name in ("check", "inverse"):
        q = ws.add_parser(name, parents=[common, alg])
        q.add_argument("word")
    q = ws.add_parser("compare", parents=[common, alg])
    q.add_argument("word")
    q.add_argument("other")
    q = ws.add_parser("slice", parents=[common, alg])
    q.add_argument("word")
    q.add_argument("position", type=int)
    p.set_defaults(func=cmd_word)

    p = sub.add_parser("rel", parents=[common], help="linear relation operators")
    p.add_argument("action", choices=["sharpflat", "split", "taction"])
    p.add_argument("file")
    p.add_argument("--field", metavar="SPEC")
    p.set_defaults(func=cmd_rel)

    p = sub.add_parser("kron", parents=[common], help="Kronecker modules")
    p.add_argument("action", choices=["decompose"])
    p.add_argument("file")
    p.add_argument("--field", metavar="SPEC")
    p.set_defaults(func=cmd_kron)

    p = sub.add_parser("module", parents=[common, alg, fld], help="string and band modules")
    p.add_argument("kind", choices=["string", "band"])
    p.add_argument("word")
    p.add_argument("--t-matrix", metavar="FILE")
    p.set_defaults(func=cmd_module)

    p = sub.add_parser("functor", parents=[common, alg, fld], help="refined functors")
    p.add_argument("name", choices=["F", "G"])
    p.add_argument("B")
    p.add_argument("D")
    p.add_argument("--module", metavar="FILE")
    p.add_argument("--string", metavar="WORD", help="use the string module of WORD")
    p.set_defaults(func=cmd_functor)

    p = sub.add_parser("sigma", parents=[common, alg], help="Sigma-pure-injectivity of M(C)")
    p.add_argument("word")
    p.add_argument("--certificate", action="store_true", help="print the descending chain")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("enumerate", parents=[common, alg, fld], help="list string modules")
    p.add_argument("--max-len", type=int, default=2)
    p.set_defaults(func=cmd_enumerate)
    return ap


ERRORS = (UsageError, FormatError, PresentationError, SignError, WordError, RelationError,
          ModuleError, DecompositionError, ValueError, KeyError, IndexError)


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        if args.seed is None:
            args.seed = default_seed()
        res = args.func(args)
    except ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"strelkit: error: {msg}", file=sys.stderr)
        if getattr(args, "machine", False):
            print(json.dumps({"error": str(msg)}))
        return 2
    code, text, data = res[:3]
    warnings = res[3] if len(res) > 3 else []
    for w in warnings:
        print(w, file=sys.stderr)
    if args.machine:
        data = dict(data)
        if warnings:
            data["warnings"] = warnings
        data["exit"] = code
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
