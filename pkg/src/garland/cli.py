"""Command line interface.

Exit codes: 0 when every requested verdict passes, 1 for usage errors
(bad arguments, unreadable files, budget refusals), 2 when a mathematical
check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import __version__
from .cochains import curvature_spectrum, hodge, laplacian, minimal_polynomial
from .complex import (
    GroupAction,
    SimplicialComplex,
    apartment_torus,
    from_text,
    join,
    quotient,
    standard_simplex,
    to_text,
)
from .errors import DaggerViolation, GarlandError
from .exact import poly_str
from .flags import FlagComplex, FlagComplexSpec, build_flag_complex
from .verify import (
    asymptotics_table,
    fundamental_inequality_report,
    identity_suite,
    vanishing_certificate,
    zuk_check,
)

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with status 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _round(x):
    """Floats to 12 significant digits, recursively; rationals to "p/q"."""
    if isinstance(x, float):
        return float(f"{x:.12g}")
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, dict):
        return {k: _round(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v) for v in x]
    return x


def _dump(obj, out: str | None) -> None:
    text = json.dumps(_round(obj), indent=2, sort_keys=False) + "\n"
    _emit(text, out)


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _kv(tokens: Sequence[str]) -> dict[str, str]:
    out = {}
    for tok in tokens:
        if "=" not in tok:
            raise UsageError(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.strip("()[] ").replace(",", " ").split())


def _flag_spec(tokens: Sequence[str], flag_file: str | None = None) -> FlagComplexSpec:
    kv = _kv(tokens)
    try:
        q = int(kv["q"])
    except (KeyError, ValueError):
        raise UsageError("flag complexes need q=<prime power>") from None
    if flag_file:
        data = json.loads(Path(flag_file).read_text(encoding="utf-8"))
        return FlagComplexSpec.from_vectors(int(data["n"]), q, data["flag"])
    if "t" in kv:
        t = _ints(kv["t"])
        if "n" in kv and int(kv["n"]) + 2 != sum(t):
            raise UsageError("t-array entries must sum to n + 2")
        return FlagComplexSpec.from_t_array(q, t)
    if "n" not in kv:
        raise UsageError("flag complexes need n=<int> or t=<t-array>")
    return FlagComplexSpec.from_t_array(q, (int(kv["n"]) + 2,))


def _load(args) -> tuple[SimplicialComplex, str, FlagComplex | None]:
    """Resolve the complex named by a subcommand's source arguments."""
    budget = getattr(args, "budget", None)
    if getattr(args, "flag", None):
        fc = build_flag_complex(_flag_spec(args.flag, getattr(args, "flag_file", None)), budget=budget)
        return fc.complex, fc.spec.label(), fc
    if getattr(args, "apartment", None):
        kv = _kv(args.apartment)
        n, m = int(kv.get("n", 1)), int(kv["m"])
        X, _ = apartment_torus(n, m)
        return X, f"apartment(n={n},m={m})", None
    if getattr(args, "simplex", None) is not None:
        return standard_simplex(args.simplex), f"simplex(n={args.simplex})", None
    if getattr(args, "complex", None):
        path = Path(args.complex)
        X = from_text(path.read_text(encoding="utf-8"))
        return X, path.name, None
    raise UsageError("no complex given (path, --flag, --apartment or --simplex)")


def _load_types(args, X: SimplicialComplex, fc: FlagComplex | None):
    if fc is not None:
        return fc.vertex_types
    side = getattr(args, "sidecar", None)
    if side is None and getattr(args, "complex", None):
        guess = Path(args.complex + ".json")
        side = str(guess) if guess.exists() else None
    if side is None:
        return None
    data = json.loads(Path(side).read_text(encoding="utf-8"))
    types = [0] * X.num_vertices
    for entry in data["vertices"]:
        types[int(entry["id"])] = int(entry["type"])
    return types


def _add_source(p: argparse.ArgumentParser) -> None:
    p.add_argument("complex", nargs="?", help="complex file (one maximal simplex per line)")
    p.add_argument("--flag", nargs="+", metavar="KEY=VALUE", help="flag complex, e.g. n=2 q=2 or q=2 t=1,3")
    p.add_argument("--flag-file", help="JSON file {n, flag: [[vectors...], ...]} with spanning vectors")
    p.add_argument("--apartment", nargs="+", metavar="KEY=VALUE", help="apartment torus, e.g. n=1 m=4")
    p.add_argument("--simplex", type=int, metavar="N", help="standard N-simplex")
    p.add_argument("--budget", type=int, help="override the enumeration budget on q^(n+2)")


# -- subcommands -------------------------------------------------------------


def cmd_build(args) -> int:
    if args.join:
        parts = [from_text(Path(p).read_text(encoding="utf-8")) for p in args.join]
        X = parts[0]
        for Y in parts[1:]:
            X = join(X, Y)
        _emit(to_text(X), args.out)
        return EXIT_OK
    X, label, fc = _load(args)
    _emit(f"# {label}\n" + to_text(X), args.out)
    if fc is not None and args.out not in (None, "-"):
        side = args.sidecar or args.out + ".json"
        Path(side).write_text(json.dumps(fc.sidecar(), indent=1) + "\n", encoding="utf-8")
    elif fc is not None and args.sidecar:
        Path(args.sidecar).write_text(json.dumps(fc.sidecar(), indent=1) + "\n", encoding="utf-8")
    return EXIT_OK


def spectrum_report(X: SimplicialComplex, label: str, degree: int, exact: bool, seed: int = 0) -> dict:
    L = laplacian(X)
    spec = curvature_spectrum(L, degree)
    h = hodge(L, degree)
    report = {
        "complex_id": label,
        "degree": degree,
        "eigenvalues": [{"value": v, "multiplicity": k} for v, k in zip(spec.values, spec.multiplicities)],
        "m": spec.m,
        "M": spec.M,
        "betti": h.betti_rank,
        "minpoly_coeffs": None,
    }
    if exact:
        poly = minimal_polynomial(L, degree, seed=seed)
        report["minpoly_coeffs"] = [Fraction(c) for c in poly]
        report["minpoly"] = poly_str(poly)
    return report


def cmd_spectrum(args) -> int:
    X, label, _ = _load(args)
    _dump(spectrum_report(X, label, args.degree, args.exact, args.seed), args.out)
    return EXIT_OK


def cmd_hodge(args) -> int:
    X, label, _ = _load(args)
    L = laplacian(X)
    degrees = [args.degree] if args.degree is not None else list(range(X.dim + 1))
    rows = []
    agree = True
    for i in degrees:
        h = hodge(L, i)
        agree &= h.agree
        rows.append({"degree": i, "betti_harmonic": h.betti, "betti_rank": h.betti_rank,
                     "reduced_betti": h.reduced_betti, "dims": list(h.dims)})
    _dump({"complex_id": label, "degrees": rows, "agree": agree}, args.out)
    return EXIT_OK if agree else EXIT_VIOLATION


def cmd_verify(args) -> int:
    X, label, fc = _load(args)
    types = _load_types(args, X, fc)
    ids = identity_suite(X, trials=args.trials, seed=args.seed, types=types)
    report = fundamental_inequality_report(X, trials=args.trials, seed=args.seed)
    certs = []
    unsound = False
    for i in range(1, X.dim):
        for j in range(i):
            cert = vanishing_certificate(X, i, j)
            unsound |= cert.status.startswith("UNSOUND")
            certs.append(cert.to_dict())
    ok = ids.passed and report.passed and not unsound
    out = {
        "complex_id": label,
        "passed": ok,
        "identities": ids.to_dict(),
        "inequalities": report.to_dict(),
        "certificates": certs,
    }
    out["identities"]["complex_id"] = label
    out["inequalities"]["complex_id"] = label
    _dump(out, args.out)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_zuk(args) -> int:
    X, label, _ = _load(args)
    verdict = zuk_check(X)
    _dump(dict(verdict.to_dict(), complex_id=label), args.out)
    return EXIT_OK if verdict.passes else EXIT_VIOLATION


def cmd_asymptotics(args) -> int:
    table = asymptotics_table(args.n, args.i, args.q, budget=args.budget)
    _emit(table.to_csv(), args.out)
    return EXIT_OK


def cmd_quotient(args) -> int:
    X, _, _ = _load(args)
    gens = json.loads(Path(args.generators).read_text(encoding="utf-8"))
    action = GroupAction(tuple(tuple(g) for g in gens), X.num_vertices)
    try:
        Q = quotient(X, action)
    except DaggerViolation as exc:
        sys.stderr.write(f"star separation fails: {exc} (witness {exc.witness})\n")
        return EXIT_VIOLATION
    _emit(to_text(Q), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="garland", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="write a complex file (flag complex, apartment torus, simplex or join)")
    _add_source(p)
    p.add_argument("--join", nargs="+", metavar="FILE", help="join of the given complex files")
    p.add_argument("--out", "-o", help="output path (default stdout)")
    p.add_argument("--sidecar", help="vertex type/subspace JSON (default OUT.json for flag complexes)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("spectrum", help="spectrum of Delta on C^i as JSON")
    _add_source(p)
    p.add_argument("--degree", "-i", type=int, default=0)
    p.add_argument("--exact", action="store_true", help="also compute the exact minimal polynomial")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("hodge", help="Betti numbers by harmonic dimension and by exact rank")
    _add_source(p)
    p.add_argument("--degree", "-i", type=int)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_hodge)

    p = sub.add_parser("verify", help="identities, inequalities and vanishing certificates")
    _add_source(p)
    p.add_argument("--sidecar", help="vertex type JSON written by build (enables type-graded identities)")
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("zuk", help="connected links and lambda^0_min > 1/2 for a 2-complex")
    _add_source(p)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_zuk)

    p = sub.add_parser("asymptotics", help="spectra of X^n_empty across q as CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, default=0)
    p.add_argument("--q", type=int, nargs="+", required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_asymptotics)

    p = sub.add_parser("quotient", help="quotient by a vertex permutation group")
    _add_source(p)
    p.add_argument("--generators", required=True, help="JSON list of vertex permutations")
    p.add_argument("--out", "-o")
    p.set_defaults(func=cmd_quotient)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DaggerViolation as exc:
        sys.stderr.write(f"garland: {exc} (witness {exc.witness})\n")
        return EXIT_VIOLATION
    except (UsageError, GarlandError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"garland: {exc}\n")
        return EXIT_USAGE

if __name__ == "__main__":
    sys.exit(main())
