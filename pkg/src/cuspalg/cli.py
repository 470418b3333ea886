"""Command-line interface.

Exit codes: 0 success, 1 malformed input, 2 not algebraic,
3 not simple / not a cusp algebra, 4 inequivalent.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import algebra, embedding, moduli
from .algebra import CuspAlgebraError, MembershipError, NotAlgebraicError, NotCuspError
from .documents import (
    ConnectionDocument,
    DocumentError,
    ModuliDocument,
    dumps,
    load_any,
    load_json,
    pair,
    parse_vector,
)
from .functionals import pushforward_connection
from .jet import Jet, TruncationError
from .roots import trim

EXIT_OK, EXIT_MALFORMED, EXIT_NOT_ALGEBRAIC, EXIT_NOT_CUSP, EXIT_INEQUIVALENT = 0, 1, 2, 3, 4
DIGITS = 12


class CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def fmt(z: complex) -> str:
    re, im = pair(z, DIGITS)
    return f"[{re:.12g}, {im:.12g}]"


def fmt_vec(v) -> str:
    return "[" + ", ".join(fmt(z) for z in v) + "]"


def _algebra(doc: ConnectionDocument, tol: float) -> algebra.CuspAlgebra:
    try:
        return algebra.from_connection(doc.to_connection(), tol=tol)
    except NotAlgebraicError as e:
        raise CommandError(EXIT_NOT_ALGEBRAIC, f"not algebraic: {e}") from None
    except NotCuspError as e:
        raise CommandError(EXIT_NOT_CUSP, f"not a cusp algebra: {e}") from None
    except TruncationError as e:
        raise CommandError(EXIT_MALFORMED, str(e)) from None


def _simple_algebra(path: str, tol: float) -> algebra.CuspAlgebra:
    doc = load_any(path)
    if isinstance(doc, ModuliDocument):
        return algebra.algebra_from_primitive(doc.to_point())
    A = _algebra(doc, tol)
    if not A.simple:
        raise CommandError(EXIT_NOT_CUSP, f"not simple: contact {A.con}")
    return A


def _load_connection(path: str) -> ConnectionDocument:
    doc = load_any(path)
    if not isinstance(doc, ConnectionDocument):
        raise DocumentError(f"{path} is not a connection document")
    return doc


def _load_moduli(path: str) -> ModuliDocument:
    return ModuliDocument.from_dict(load_json(path))


def _parse_jet_arg(text: str, N: int) -> Jet:
    try:
        data = json.loads(text) if not text.startswith("@") else load_json(text[1:])
    except json.JSONDecodeError as e:
        raise DocumentError(f"bad jet: {e}") from None
    v = parse_vector(data)
    if len(v) > N + 1:
        raise DocumentError(f"jet has {len(v)} coefficients, truncation is {N}")
    return Jet(v, N)


def cmd_invariants(args, out) -> int:
    A = _algebra(_load_connection(args.input), args.tolerance)
    print(f"cod={A.cod} ord={A.ord} con={A.con} simple={str(A.simple).lower()} "
          f"algebraic=true", file=out)
    return EXIT_OK


def cmd_canonical(args, out) -> int:
    A = _simple_algebra(args.input, args.tolerance)
    m = moduli.canonical_form(A)
    coords = moduli.moduli_coordinates(m)
    doc = ModuliDocument.from_point(m).to_dict(DIGITS)
    doc["coordinates"] = ModuliDocument.from_point(coords).to_dict(DIGITS)["alphas"]
    print(dumps(doc), file=out)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(dumps(ModuliDocument.from_point(m).to_dict(DIGITS)) + "\n")
    return EXIT_OK


def cmd_equiv(args, out) -> int:
    a, b = _load_moduli(args.a), _load_moduli(args.b)
    if a.n != b.n:
        raise DocumentError(f"moduli dimension mismatch: {a.n} vs {b.n}")
    tau = moduli.equivalent_cusps(a.to_point(), b.to_point(), tol=args.tolerance)
    if tau is None:
        print("inequivalent", file=out)
        return EXIT_INEQUIVALENT
    print(f"tau={fmt(tau)}", file=out)
    return EXIT_OK


def cmd_pushforward(args, out) -> int:
    doc = _load_connection(args.input)
    psi = _parse_jet_arg(args.psi, doc.truncation)
    try:
        pushed = pushforward_connection(doc.to_connection(), psi)
    except ValueError as e:
        raise DocumentError(f"invalid psi: {e}") from None
    print(dumps(ConnectionDocument.from_connection(pushed, DIGITS).to_dict()), file=out)
    return EXIT_OK


def cmd_decompose(args, out) -> int:
    A = _simple_algebra(args.input, args.tolerance)
    f = _parse_jet_arg(args.jet, A.truncation)
    pi = moduli.canonical_form(A).primitive(A.truncation)
    try:
        dec = algebra.decompose(A, f, pi)
    except MembershipError as e:
        raise DocumentError(str(e)) from None
    print(f"pi={fmt_vec(pi.coeffs)}", file=out)
    print(f"p={fmt_vec(dec.coeffs)}", file=out)
    print(f"g={fmt_vec(dec.remainder.coeffs)}", file=out)
    return EXIT_OK


def _fmt_polyexp(name: str, h: embedding.PolyExpFunction) -> str:
    return f"{name}: p={fmt_vec(trim(h.p))} q={fmt_vec(trim(h.q))}"


def write_csv(samples: np.ndarray, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["re_z", "im_z", "re_w", "im_w"])
    for z, wv in samples:
        w.writerow([repr(float(z.real)), repr(float(z.imag)),
                    repr(float(wv.real)), repr(float(wv.imag))])


def write_svg(samples: np.ndarray, radial_steps: int, angular_steps: int, fh,
              projection: str = "re", size: int = 512, pad: int = 16) -> None:
    """One closed polyline per radial ring; x from z, y from w."""
    part = np.real if projection == "re" else np.imag
    x, y = part(samples[:, 0]), part(samples[:, 1])
    span = max(np.ptp(x), np.ptp(y), 1e-300)
    sx = pad + (x - x.min()) / span * (size - 2 * pad)
    sy = size - pad - (y - y.min()) / span * (size - 2 * pad)
    fh.write(f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
             f'viewBox="0 0 {size} {size}">\n')
    fh.write(f'<rect width="{size}" height="{size}" fill="white"/>\n')
    for i in range(radial_steps):
        sl = slice(i * angular_steps, (i + 1) * angular_steps)
        pts = " ".join(f"{a:.4f},{b:.4f}" for a, b in zip(sx[sl], sy[sl]))
        fh.write(f'<polyline fill="none" stroke="black" stroke-width="0.5" points="{pts}"/>\n')
    fh.write("</svg>\n")


def cmd_embed(args, out) -> int:
    A = _simple_algebra(args.input, args.tolerance)
    pair_ = embedding.embedding_pair(A)
    print(_fmt_polyexp("h1", pair_.h1), file=out)
    print(_fmt_polyexp("h2", pair_.h2), file=out)
    csv_path, svg_path = args.csv, args.svg
    if args.render and not (csv_path or svg_path):
        csv_path, svg_path = "cusp.csv", "cusp.svg"
    if csv_path or svg_path:
        samples = embedding.render_cusp(pair_, args.radial_steps, args.angular_steps)
        if csv_path:
            with open(csv_path, "w", newline="") as fh:
                write_csv(samples, fh)
        if svg_path:
            with open(svg_path, "w") as fh:
                write_svg(samples, args.radial_steps, args.angular_steps, fh, args.projection)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cuspalg", description="Simple cusp algebra toolkit.")
    ap.add_argument("--tolerance", type=float, default=1e-9)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invariants", help="codimension, order, contact of a connection")
    p.add_argument("input")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("canonical", help="canonical moduli point and orbit coordinates")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="also write the moduli document here")
    p.set_defaults(func=cmd_canonical)

    p = sub.add_parser("equiv", help="decide global equivalence of two moduli points")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("pushforward", help="push a connection along a germ psi")
    p.add_argument("input")
    p.add_argument("--psi", required=True,
                   help="JSON list of [re, im] Taylor coefficients, or @file")
    p.set_defaults(func=cmd_pushforward)

    p = sub.add_parser("decompose", help="write a jet as p(pi) + z^(2n+2) g")
    p.add_argument("input")
    p.add_argument("--jet", required=True,
                   help="JSON list of [re, im] Taylor coefficients, or @file")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("embed", help="two-function embedding and optional rendering")
    p.add_argument("input")
    p.add_argument("--render", action="store_true")
    p.add_argument("--csv")
    p.add_argument("--svg")
    p.add_argument("--radial-steps", type=int, default=64)
    p.add_argument("--angular-steps", type=int, default=256)
    p.add_argument("--projection", choices=("re", "im"), default="re")
    p.set_defaults(func=cmd_embed)
    return ap


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, out)
    except CommandError as e:
        print(str(e), file=out)
        return e.code
    except (DocumentError, TruncationError) as e:
        print(f"error: {e}", file=out)
        return EXIT_MALFORMED
    except CuspAlgebraError as e:
        print(f"error: {e}", file=out)
        return EXIT_NOT_CUSP


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
