"""Command-line interface.

Subcommands ``reduce``, ``eval``, ``inner``, ``verify`` and ``table`` print a
single JSON document on stdout (``table`` writes CSV to ``--out``).  Complex
numbers are given as ``re,im`` and forms as ``a,b,c``.

Exit codes: 0 success, 1 verification failure, 2 domain error, 3 singular
point, 4 precision failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from typing import List, Optional, Sequence

from . import __version__, greens, inner, modforms, qform
from .config import resolve
from .errors import DomainError, PolarMaassError, SingularPointError
from .hyperbolic import point_to_json, reduce_point
from .qform import SumPolicy, class_representatives, cm_point
from .verify import SUITES, report, run_suite

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_SINGULAR, EXIT_PRECISION = 0, 1, 2, 3, 4

EVAL_FAMILIES = ("fQ", "fkD", "fkdelta", "GQ", "FnQ", "Fn", "G1", "psi", "green", "raised-green")
INNER_METHODS = ("hybrid", "wnotz", "meromain", "greens", "residue", "psi")


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------


def parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError(f"expected re,im but got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError as exc:
        raise DomainError(f"bad complex number {text!r}") from exc


def parse_form(text: str) -> qform.BinaryQuadraticForm:
    parts = text.split(",")
    if len(parts) != 3:
        raise DomainError(f"expected a,b,c but got {text!r}")
    try:
        return qform.BinaryQuadraticForm(*(int(p) for p in parts))
    except ValueError as exc:
        raise DomainError(f"bad form {text!r}") from exc


def parse_int_list(text: str) -> List[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise DomainError(f"bad integer list {text!r}") from exc


def _need(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise DomainError("missing required option(s): " + ", ".join("--" + m for m in missing))


def _settings(args) -> dict:
    return resolve(
        getattr(args, "config", None),
        bound=getattr(args, "bound", None),
        tail=getattr(args, "tail", None),
        delta=getattr(args, "delta", None),
        y_cap=getattr(args, "y_cap", None),
        cell_tolerance=getattr(args, "cell_tolerance", None),
        seed=getattr(args, "seed", None),
    )


def _policy(cfg: dict) -> SumPolicy:
    return SumPolicy(int(cfg["bound"]), float(cfg["tail"]))


def _form_list(Q) -> List[int]:
    return [Q.a, Q.b, Q.c]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_reduce(args) -> dict:
    _need(args, "form")
    Q = parse_form(args.form)
    R, M = qform.reduce(Q)
    return {"form": _form_list(Q), "reduced": _form_list(R), "matrix": M.as_list(), "class_number": qform.class_number(Q.D)}


def cmd_eval(args) -> dict:
    cfg = _settings(args)
    policy = _policy(cfg)
    fam = args.family
    _need(args, "k", "z")
    z = parse_complex(args.z)
    k = args.k
    if fam == "fQ":
        _need(args, "form")
        res = modforms.eval_fQ(k, parse_form(args.form), z, policy, summation=args.summation)
    elif fam == "fkD":
        _need(args, "D")
        res = modforms.eval_f_kD(k, args.D, z, policy, summation=args.summation)
    elif fam == "fkdelta":
        _need(args, "disc")
        res = modforms.eval_f_kdelta(k, args.disc, z, policy, summation=args.summation)
    elif fam == "GQ":
        _need(args, "form")
        res = modforms.eval_GQ(k, parse_form(args.form), z, policy)
    elif fam == "FnQ":
        _need(args, "n", "form")
        res = modforms.eval_FnQ(k, args.n, parse_form(args.form), z, policy)
    elif fam == "Fn":
        _need(args, "n", "zz")
        res = modforms.eval_Fn_pair(k, args.n, z, parse_complex(args.zz), policy)
    elif fam == "G1":
        _need(args, "zz")
        res = modforms.eval_G1_pair(k, z, parse_complex(args.zz), policy)
    elif fam == "psi":
        _need(args, "m", "zz")
        res = modforms.eval_psi(2 * k, args.m, z, parse_complex(args.zz), policy)
    elif fam == "green":
        _need(args, "zz")
        res = greens.eval_green(k, z, parse_complex(args.zz), policy)
    else:  # raised-green
        _need(args, "j", "zz")
        res = greens.eval_raised_green(k, args.j, z, parse_complex(args.zz), policy)
    out = {"family": fam, "k": k, "z": point_to_json(z)}
    out.update(res.to_dict())
    return out


def cmd_inner(args) -> dict:
    cfg = _settings(args)
    policy = _policy(cfg)
    method = args.method
    _need(args, "k")
    k = args.k
    if method == "psi":
        _need(args, "m", "z", "zz")
        res = inner.inner_psi_pair(k, args.m, parse_complex(args.z), parse_complex(args.zz), policy)
    else:
        _need(args, "form1", "form2")
        Q1, Q2 = parse_form(args.form1), parse_form(args.form2)
        if method == "greens":
            res = inner.inner_greens(k, Q1, Q2, policy)
        elif method == "hybrid":
            quad = inner.QuadConfig(y_cap=cfg["y_cap"], cell_tolerance=cfg["cell_tolerance"], delta=cfg["delta"])
            f, fp = inner.fq_input(k, Q1, policy)
            g, gp = inner.fq_input(k, Q2, policy)
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always")
                res = inner.inner_hybrid(f, fp, g, gp, k, quad)
            for w in caught:
                print(f"warning: {w.message}", file=sys.stderr)
        else:
            _, poles = inner.fq_input(k, Q1, policy)
            route = {"wnotz": inner.inner_wnotz, "residue": inner.inner_residue, "meromain": inner.inner_meromain}[method]
            res = route(poles, k, Q2, policy)
    out = {"method_requested": method, "k": k}
    out.update(res.to_dict())
    out["config"] = dict(out["config"], bound=policy.coefficient_bound)
    return out


def cmd_verify(args) -> tuple:
    cfg = _settings(args)
    policy = _policy(cfg)
    ks = parse_int_list(args.k) if args.k else [2]
    D_list = parse_int_list(args.D_list) if args.D_list else [3, 4]
    checks = run_suite(args.suite, ks, D_list, int(cfg["seed"]), args.tolerance, policy)
    doc = report(checks)
    doc["suite"] = args.suite
    return doc, (EXIT_OK if doc["fail_count"] == 0 else EXIT_VERIFY)


def discriminants_up_to(D_max: int) -> List[int]:
    return [D for D in range(3, D_max + 1) if (-D) % 4 in (0, 1)]


def table_rows(task: str, k: int, D_max: int, policy: SumPolicy):
    """Rows ``(D1, Q1, D2, Q2, value, tail_bound)`` over ordered pairs of distinct CM orbits."""
    forms = [(D, Q) for D in discriminants_up_to(D_max) for Q in class_representatives(D)]
    rows, skipped = [], []
    for D1, Q1 in forms:
        for D2, Q2 in forms:
            t1, t2 = reduce_point(cm_point(Q1))[0], reduce_point(cm_point(Q2))[0]
            if abs(t1 - t2) < 1e-9:
                continue
            try:
                if task == "green-cm":
                    res = greens.eval_green(k, t1, t2, policy)
                    value, tail = res.value.real, res.tail_bound
                else:
                    res = inner.inner_greens(k, Q1, Q2, policy)
                    value, tail = res.value.real, res.error_estimate
            except SingularPointError:
                skipped.append([D1, _form_list(Q1), D2, _form_list(Q2)])
                continue
            rows.append((D1, str(_form_list(Q1)).replace(" ", ""), D2, str(_form_list(Q2)).replace(" ", ""), repr(float(value)), repr(float(tail))))
    return rows, skipped


def cmd_table(args) -> dict:
    cfg = _settings(args)
    policy = _policy(cfg)
    _need(args, "k", "D_max")
    rows, skipped = table_rows(args.task, args.k, args.D_max, policy)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["D1", "Q1", "D2", "Q2", "value", "tail_bound"])
    writer.writerows(rows)
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return {"task": args.task, "k": args.k, "D_max": args.D_max, "rows": len(rows), "out": args.out, "partial": bool(skipped), "skipped": skipped}


# ---------------------------------------------------------------------------
# parser and entry point
# ---------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value file overriding the built-in defaults")
    p.add_argument("--bound", type=int, help="truncation bound (default 500)")
    p.add_argument("--tail", type=float, help="tail tolerance (default 1e-9)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polarmaass", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="reduce a positive-definite binary quadratic form")
    p.add_argument("--form", required=True, help="a,b,c")

    p = sub.add_parser("eval", help="evaluate a function family at a point")
    p.add_argument("--family", required=True, choices=EVAL_FAMILIES)
    p.add_argument("--k", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--form", help="a,b,c")
    p.add_argument("--D", type=int, help="D for discriminant -D")
    p.add_argument("--disc", type=int, help="positive discriminant for fkdelta")
    p.add_argument("--z", help="re,im")
    p.add_argument("--zz", help="re,im of the second variable")
    p.add_argument(
        "--summation",
        choices=("ball", "strip"),
        default="ball",
        help="truncation for fQ, fkD, fkdelta: hyperbolic ball (default) or exact translation strips with |a| <= bound",
    )
    _add_common(p)

    p = sub.add_parser("inner", help="regularised inner product")
    p.add_argument("--method", required=True, choices=INNER_METHODS)
    p.add_argument("--k", type=int)
    p.add_argument("--form1", help="a,b,c (pole of f)")
    p.add_argument("--form2", help="a,b,c")
    p.add_argument("--m", type=int)
    p.add_argument("--z", help="rho for --method psi")
    p.add_argument("--zz", help="second point for --method psi")
    p.add_argument("--delta", type=float)
    p.add_argument("--y-cap", dest="y_cap", type=float)
    p.add_argument("--cell-tolerance", dest="cell_tolerance", type=float)
    _add_common(p)

    p = sub.add_parser("verify", help="run identity-verification suites")
    p.add_argument("--suite", required=True, choices=list(SUITES) + ["all"])
    p.add_argument("--k", help="comma-separated k values (default 2)")
    p.add_argument("--D-list", dest="D_list", help="comma-separated D values (default 3,4)")
    p.add_argument("--tolerance", type=float, help="override every check's tolerance")
    p.add_argument("--seed", type=int)
    _add_common(p)

    p = sub.add_parser("table", help="batch CSV tables over CM points")
    p.add_argument("--task", required=True, choices=("green-cm", "inner-cm"))
    p.add_argument("--k", type=int)
    p.add_argument("--D-max", dest="D_max", type=int)
    p.add_argument("--out", help="CSV path (default stdout)")
    _add_common(p)
    return parser


_VALUE_OPTIONS = {"--z", "--zz", "--form", "--form1", "--form2"}


def _glue_negative_values(argv: Sequence[str]) -> List[str]:
    """Turn ``--z -0.5,0.8`` into ``--z=-0.5,0.8`` so argparse does not read a flag."""
    out: List[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_OPTIONS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and len(nxt) > 1 and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        code = EXIT_OK
        if args.command == "reduce":
            doc = cmd_reduce(args)
        elif args.command == "eval":
            doc = cmd_eval(args)
        elif args.command == "inner":
            doc = cmd_inner(args)
        elif args.command == "verify":
            doc, code = cmd_verify(args)
        else:
            doc = cmd_table(args)
            if not args.out or args.out == "-":
                print(json.dumps(doc), file=sys.stderr)
                return EXIT_OK
    except PolarMaassError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    print(json.dumps(doc))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
