"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 a verification failed.
Output is JSON unless ``--format text`` is given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import warnings
from fractions import Fraction
from typing import List, Optional

from . import covar, graph, mldeg, pd, sdr
from .errors import HomaloidalError, RankDeficiencyWarning, VerificationFailed
from .graph import DIAMOND_GRAPH, Graph
from .pencil import SymPencil
from .poly import MPoly, parse

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _resolve_seed(seed: Optional[int]) -> int:
    if seed is not None:
        return seed
    env = os.environ.get("HOMALOIDAL_SEED")
    if env is None or env == "":
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"HOMALOIDAL_SEED must be an integer, got {env!r}") from None


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _load_graph(path: Optional[str], builtin: Optional[str]) -> Graph:
    if builtin:
        return builtin_graph(builtin)
    if not path:
        raise UsageError("one of --file/--graph or --builtin is required")
    try:
        return Graph.load(path)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def builtin_graph(name: str) -> Graph:
    """``diamond``, ``C<n>`` (cycle), ``K<n>`` (complete) or ``P<n>`` (path)."""
    if name.lower() == "diamond":
        return DIAMOND_GRAPH
    kind, rest = name[:1].upper(), name[1:]
    if kind in "CKP" and rest.isdigit():
        n = int(rest)
        return {"C": Graph.cycle, "K": Graph.complete, "P": Graph.path}[kind](n)
    raise UsageError(f"unknown builtin graph {name!r}")


def _load_poly(arg: str) -> MPoly:
    if os.path.exists(arg):
        with open(arg) as fh:
            text = fh.read()
        if text.lstrip().startswith("{"):
            data = json.loads(text)
            if "terms" in data and "vars" in data:
                return MPoly.from_json(data)
            if "poly" in data:
                p = data["poly"]
                return MPoly.from_json(p) if isinstance(p, dict) else parse(p)
            raise UsageError(f"{arg}: no polynomial found")
        return parse(text)
    return parse(arg)


def _load_pencil(path: str) -> SymPencil:
    return SymPencil.from_json(_read_json(path))


# -- subcommands ----------------------------------------------------------------------

def cmd_graph(args) -> tuple:
    g = _load_graph(args.file, args.builtin)
    P = graph.spanning_tree_poly(g)
    L = graph.laplacian(g)
    ks = [args.k] if args.k else g.vertices
    mt = {k: graph.symbolic_det(graph.principal_minor(L, k)) == P for k in ks}
    chordal, peo = graph.is_chordal(g)
    cert = graph.ml_degree_certificate(g, args.k)
    out = {
        "graph": g.to_json(),
        "chordal": chordal,
        "peo": peo,
        "ml_degree": cert.ml_degree,
        "certificate": cert.to_json(),
        "spanning_tree_poly": str(P),
        "spanning_trees": len(P),
        "matrix_tree": {str(k): ok for k, ok in mt.items()},
    }
    return out, all(mt.values())


def cmd_mldeg_cycle(args) -> tuple:
    n = args.n
    pts = mldeg.cycle_fiber(n)
    out = {"n": n, "ml_degree": len(pts), "eulerian": mldeg.eulerian(n)}
    ok = True
    fiber = []
    for p in pts:
        entry = p.to_json()
        if args.verify:
            grad = mldeg.verify_fiber_point(n, p)
            try:
                reg = mldeg.verify_regular_value(n, p)
            except VerificationFailed:
                reg = False
            entry["gradient_ok"] = grad
            entry["regular"] = reg
            ok = ok and grad and reg
        fiber.append(entry)
    out["fiber"] = fiber
    out["all_verified"] = ok if args.verify else None
    if args.verify:
        out["hessian_det_at_ones"] = str(mldeg.hessian_det_at_ones(n))
        ok = ok and mldeg.hessian_det_at_ones(n) == mldeg.closed_form_hessian_det(n)
    return out, ok


def cmd_covar_generators(args) -> tuple:
    g = _load_graph(args.graph, args.builtin)
    seed = _resolve_seed(args.seed)
    gens = covar.rk_generators_labeled(g, args.k)
    ranks = covar.rank_constraint_minors_labeled(g, args.k)
    polys = [x.poly for x in gens] + [p for _, _, p in ranks]
    samples = covar.sample_model_points(g, args.k, args.samples, seed) if args.samples else []
    report = covar.verify_vanishing(polys, samples)
    out = {
        "graph": g.to_json(),
        "k": args.k,
        "seed": seed,
        "generators": [x.to_json() for x in gens],
        "rank_constraints": [{"kind": kind, "index": list(idx), "poly": str(p)} for kind, idx, p in ranks],
        "verification": report.to_json(),
    }
    return out, report.all_zero


def _verification(pencil: SymPencil, target, args, seed: int):
    if isinstance(target, sdr.PowerSumForm):
        return sdr.verify_power_sum(pencil, target, args.trials, seed)
    return sdr.verify_sdr(pencil, target, args.trials, seed, args.tol)


def cmd_sdr_quad(args) -> tuple:
    q = parse(args.poly)
    seed = _resolve_seed(args.seed)
    with warnings.catch_warnings():
        # rank deficiency is reported in the output instead
        warnings.simplefilter("ignore", RankDeficiencyWarning)
        dec = sdr.quadratic_decomposition(q, args.method, args.corner)
        pencil = sdr.bordered_pencil(dec)
    n = len(dec.vars)
    report = _verification(pencil, q, args, seed)
    out = {
        "poly": str(q),
        "seed": seed,
        "rank": dec.rank,
        "rank_deficient": dec.rank < n + 1,
        "lambdas": [str(l) for l in dec.lambdas],
        "pencil": pencil.to_json(),
        "verification": report.to_json(),
    }
    return out, report.passed


def cmd_sdr_powersum(args) -> tuple:
    data = _read_json(args.file)
    if "power_sum" in data:
        data = data["power_sum"]
    ps = sdr.PowerSumForm.from_json(data)
    seed = _resolve_seed(args.seed)
    pencil = sdr.power_sum_sdr(ps, max_size=args.max_size)
    report = _verification(pencil, ps, args, seed)
    general, pow2 = sdr.size_bound(ps.d, ps.r)
    out = {
        "power_sum": ps.to_json(),
        "seed": seed,
        "size": pencil.size,
        "bound": {"general": general, "power_of_two": pow2},
        "pencil": pencil.to_json(),
        "verification": report.to_json(),
    }
    return out, report.passed


def cmd_sdr_product(args) -> tuple:
    a, b = _load_pencil(args.a), _load_pencil(args.b)
    c = sdr.product_sdr(a, b)
    return {"size": c.size, "pencil": c.to_json()}, True


def cmd_sdr_verify(args) -> tuple:
    pencil = _load_pencil(args.pencil)
    p = _load_poly(args.poly)
    seed = _resolve_seed(args.seed)
    report = _verification(pencil, p, args, seed)
    out = {"poly": str(p), "seed": seed, "verification": report.to_json()}
    return out, report.passed


def cmd_sdr_bound(args) -> tuple:
    general, pow2 = sdr.size_bound(args.d, args.r)
    return {"d": args.d, "r": args.r, "m": args.d.bit_length(), "general": general, "power_of_two": pow2}, True


def cmd_pd_check(args) -> tuple:
    pencil = _load_pencil(args.pencil)
    seed = _resolve_seed(args.seed)
    try:
        box = Fraction(args.box)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--box must be a number, got {args.box!r}") from None
    report = pd.pd_feasibility_sample(pencil, args.samples, seed, box)
    out = report.to_json()
    out["seed"] = seed
    return out, True


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default=argparse.SUPPRESS, help="output format (default json)")

    parser = _Parser(prog="homaloidal", description="Spanning-tree models, ML degrees and symmetric determinantal representations.")
    parser.add_argument("--format", choices=["json", "text"], default="json")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    g = sub.add_parser("graph", parents=[common], help="chordality, spanning-tree polynomial, ML degree certificate")
    g.add_argument("--file", help="graph as JSON or edge list")
    g.add_argument("--builtin", help="diamond, C<n>, K<n> or P<n>")
    g.add_argument("--k", type=int, default=None, help="only check the minor without vertex k")
    g.set_defaults(func=cmd_graph)

    m = sub.add_parser("mldeg", help="ML degree computations")
    msub = m.add_subparsers(dest="what", parser_class=_Parser)
    msub.required = True
    mc = msub.add_parser("cycle", parents=[common], help="fiber of the cycle gradient map over the ones vector")
    mc.add_argument("--n", type=int, required=True)
    mc.add_argument("--verify", action="store_true", help="check gradient proportionality and Hessian regularity")
    mc.set_defaults(func=cmd_mldeg_cycle)

    c = sub.add_parser("covar", help="covariance-side generators")
    csub = c.add_subparsers(dest="what", parser_class=_Parser)
    csub.required = True
    cg = csub.add_parser("generators", parents=[common])
    cg.add_argument("--graph", help="graph file")
    cg.add_argument("--builtin")
    cg.add_argument("--k", type=int, required=True)
    cg.add_argument("--samples", type=int, default=100)
    cg.add_argument("--seed", type=int, default=None)
    cg.set_defaults(func=cmd_covar_generators)

    s = sub.add_parser("sdr", help="symmetric determinantal representations")
    ssub = s.add_subparsers(dest="what", parser_class=_Parser)
    ssub.required = True

    def checks(p, trials=50):
        p.add_argument("--trials", type=int, default=trials)
        p.add_argument("--tol", type=float, default=1e-8)
        p.add_argument("--seed", type=int, default=None)

    sq = ssub.add_parser("quad", parents=[common])
    sq.add_argument("--poly", required=True)
    sq.add_argument("--method", choices=["jacobi", "ldl"], default="jacobi")
    sq.add_argument("--corner", choices=["constant", "one"], default="constant")
    checks(sq)
    sq.set_defaults(func=cmd_sdr_quad)

    sp = ssub.add_parser("powersum", parents=[common])
    sp.add_argument("--file", required=True)
    sp.add_argument("--max-size", type=int, default=sdr.DEFAULT_MAX_SIZE)
    checks(sp, trials=20)
    sp.set_defaults(func=cmd_sdr_powersum)

    sx = ssub.add_parser("product", parents=[common])
    sx.add_argument("--a", required=True)
    sx.add_argument("--b", required=True)
    sx.set_defaults(func=cmd_sdr_product)

    sv = ssub.add_parser("verify", parents=[common])
    sv.add_argument("--pencil", required=True)
    sv.add_argument("--poly", required=True, help="polynomial text or a file holding one")
    checks(sv)
    sv.set_defaults(func=cmd_sdr_verify)

    sb = ssub.add_parser("bound", parents=[common])
    sb.add_argument("--d", type=int, required=True)
    sb.add_argument("--r", type=int, required=True)
    sb.set_defaults(func=cmd_sdr_bound)

    p = sub.add_parser("pd", help="positive definiteness of pencils")
    psub = p.add_subparsers(dest="what", parser_class=_Parser)
    psub.required = True
    pc = psub.add_parser("check", parents=[common])
    pc.add_argument("--pencil", required=True)
    pc.add_argument("--samples", type=int, default=1000)
    pc.add_argument("--seed", type=int, default=None)
    pc.add_argument("--box", default="10")
    pc.set_defaults(func=cmd_pd_check)
    return parser


def _text(obj, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {v}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {v}")
    else:
        lines.append(f"{pad}{obj}")
    return lines


def render(out: dict, fmt: str) -> str:
    if fmt == "text":
        return "\n".join(_text(out)) + "\n"
    return json.dumps(out, indent=2) + "\n"


def run(argv: Optional[List[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        fmt = getattr(args, "format", None) or "json"
        out, ok = args.func(args)
        if "seed" not in out:
            out["seed"] = _resolve_seed(getattr(args, "seed", None))
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except HomaloidalError as exc:
        if isinstance(exc, VerificationFailed):
            print(f"verification failed: {exc}", file=stderr)
            return EXIT_FAILED
        print(f"error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, TypeError) as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_USAGE
    stdout.write(render(out, fmt))
    return EXIT_OK if ok else EXIT_FAILED


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
