"""Deterministic experiment driver.

Subcommands:
  verify <suite>   run a module property suite (ring, character, residue,
                   approx, poisson, fourier); exit 1 on any failure
  sieve            top-eigenvalue sweep over a Q x N grid for one family,
                   one CSV/JSON report row per cell
  bounds           evaluate a closed-form right-hand side on a grid
  theorem2         nested counting bound plus the sweep row for a custom
                   moduli set read from file
  theorem3         the counting-hypothesis verifier for a custom moduli set

Output is byte-deterministic for a fixed configuration and seed.  A config
file of flat key=value lines can seed any flag; explicit flags win.
IQSIEVE_THREADS caps grid parallelism.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys

from . import checks
from .bounds import BoundParams, ModuliSet, rhs_bound, theorem2_rhs, verify_X
from .qfield import enumerate_by_norm, make_field
from .sieve import CSV_HEADER, SieveReport, build_fractions, lambda_max

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok != ""]
    except ValueError as exc:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from exc


def _load_config(path: str) -> dict[str, str]:
    cfg = {}
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise UsageError(f"{path}:{lineno}: expected key=value, got {line!r}")
                key, val = line.split("=", 1)
                cfg[key.strip()] = val.strip()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    return cfg


def _merge_config(args: argparse.Namespace, defaults: dict):
    """Fill unset flags from the config file, then from hard defaults."""
    cfg = _load_config(args.config) if args.config else {}
    for key, default in defaults.items():
        if getattr(args, key, None) is not None:
            continue
        if key in cfg:
            raw = cfg[key]
            if isinstance(default, bool):
                setattr(args, key, raw.lower() in ("1", "true", "yes", "on"))
            elif isinstance(default, int):
                setattr(args, key, int(raw))
            elif isinstance(default, float):
                setattr(args, key, float(raw))
            else:
                setattr(args, key, raw)
        else:
            setattr(args, key, default)


def _read_moduli_file(field, path: str):
    elems = []
    try:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                parts = line.split()
                if len(parts) != 2:
                    raise UsageError(f"{path}:{lineno}: expected 'a b' coordinates, got {line!r}")
                elems.append(field.element(int(parts[0]), int(parts[1])))
    except OSError as exc:
        raise UsageError(f"cannot read moduli file {path}: {exc}") from exc
    if not elems:
        raise UsageError(f"moduli file {path} is empty")
    return elems


def _thread_count() -> int:
    env = os.environ.get("IQSIEVE_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError as exc:
            raise UsageError(f"IQSIEVE_THREADS must be a positive integer, got {env!r}") from exc
        if n < 1:
            raise UsageError(f"IQSIEVE_THREADS must be a positive integer, got {n}")
        return n
    return min(8, os.cpu_count() or 1)


def _emit(lines: list[str], out_path: str | None):
    text = "\n".join(lines) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _reports_to_lines(reports: list[SieveReport], fmt: str) -> list[str]:
    if fmt == "csv":
        return [CSV_HEADER] + [r.csv_row() for r in reports]
    if fmt == "json":
        payload = [vars(r) for r in reports]
        return [json.dumps(payload, sort_keys=True)]
    raise UsageError(f"unknown output format {fmt!r}")


def _family_rhs(args, family_kind: str, Q: int, N: int) -> float:
    theorem = {"all": "huxley", "power": "power", "square": "square",
               "prime": "prime"}[family_kind]
    params = BoundParams(theorem=theorem, Q=Q, N=N, k=args.k,
                         epsilon=args.epsilon, delta=args.delta)
    return rhs_bound(params)


def _cmd_sieve(args) -> int:
    _merge_config(args, dict(d=-1, family="power", k=1, q="1", n="4", epsilon=0.25,
                             delta=0.5, tol=1e-9, seed=0, dyadic=False,
                             format="csv", out=None))
    field = make_field(args.d)
    q_list = _parse_int_list(args.q)
    n_list = _parse_int_list(args.n)
    if not q_list or not n_list:
        raise UsageError("q and n lists must be nonempty")
    families = {Q: build_fractions(field, args.family, Q, k=args.k, dyadic=args.dyadic)
                for Q in q_list}
    cells = [(Q, N) for Q in q_list for N in n_list]

    def run_cell(cell):
        Q, N = cell
        fam = families[Q]
        res = lambda_max(fam, N, tol=args.tol, seed=args.seed)
        rhs = _family_rhs(args, args.family, Q, N)
        m_count = len(enumerate_by_norm(field, N, include_zero=True))
        return SieveReport(d=args.d, family=args.family, k=fam.k, Q=Q, N=N,
                           F=fam.F, M=m_count, lambda_max=res.value, rhs=rhs,
                           ratio=res.value / rhs, iterations=res.iterations,
                           seed=args.seed)

    with concurrent.futures.ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        reports = list(pool.map(run_cell, cells))
    _emit(_reports_to_lines(reports, args.format), args.out)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    _merge_config(args, dict(theorem="huxley", k=1, q="1", n="4", epsilon=0.0,
                             delta=0.5, out=None))
    q_list = _parse_int_list(args.q)
    n_list = _parse_int_list(args.n)
    lines = ["theorem,k,Q,N,epsilon,delta,rhs"]
    for Q in q_list:
        for N in n_list:
            params = BoundParams(theorem=args.theorem, Q=Q, N=N, k=args.k,
                                 epsilon=args.epsilon, delta=args.delta)
            val = rhs_bound(params)
            lines.append(f"{args.theorem},{args.k},{Q},{N},{args.epsilon:.12g},"
                         f"{args.delta:.12g},{val:.12g}")
    _emit(lines, args.out)
    return EXIT_OK


def _cmd_theorem2(args) -> int:
    _merge_config(args, dict(d=-1, bigq=1, n=16, z_samples=8, tol=1e-9, seed=0,
                             format="csv", out=None))
    field = make_field(args.d)
    elems = _read_moduli_file(field, args.s_file)
    moduli = ModuliSet(field=field, Q=args.bigq, elements=tuple(elems))
    family = build_fractions(field, "custom", args.bigq, custom=elems)
    res = lambda_max(family, args.n, tol=args.tol, seed=args.seed)
    rhs = theorem2_rhs(moduli, args.bigq, args.n, z_samples=args.z_samples)
    m_count = len(enumerate_by_norm(field, args.n, include_zero=True))
    report = SieveReport(d=args.d, family="custom", k=1, Q=args.bigq, N=args.n,
                         F=family.F, M=m_count, lambda_max=res.value, rhs=rhs,
                         ratio=res.value / rhs, iterations=res.iterations,
                         seed=args.seed)
    _emit(_reports_to_lines([report], args.format), args.out)
    return EXIT_OK


def _cmd_theorem3(args) -> int:
    _merge_config(args, dict(d=-1, bigq=1, n=16, out=None))
    field = make_field(args.d)
    elems = _read_moduli_file(field, args.s_file)
    moduli = ModuliSet(field=field, Q=args.bigq, elements=tuple(elems))
    x_val = verify_X(moduli, args.bigq, args.n)
    _emit(["d,Q,N,X", f"{args.d},{args.bigq},{args.n},{x_val:.12g}"], args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    _merge_config(args, dict(d=-1, seed=0, out=None))
    field = make_field(args.d)
    suite = checks.SUITES[args.suite]
    records = suite(field, seed=args.seed)
    lines = []
    any_fail = False
    for name, err, ok in records:
        status = "ok" if ok else "FAIL"
        lines.append(f"{status} {args.suite}.{name} d={args.d} max_err={err:.6g}")
        any_fail = any_fail or not ok
    _emit(lines, args.out)
    return EXIT_VERIFY_FAIL if any_fail else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iqsieve",
                                     description="large-sieve experiments over imaginary quadratic fields")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="key=value config file; flags override it")
        p.add_argument("--out", help="write output to this path instead of stdout")

    p_sieve = sub.add_parser("sieve", help="lambda_max sweep over a Q x N grid")
    p_sieve.add_argument("--d", type=int)
    p_sieve.add_argument("--family", choices=("all", "power", "square", "prime"))
    p_sieve.add_argument("--k", type=int)
    p_sieve.add_argument("--q", help="comma-separated Q list")
    p_sieve.add_argument("--n", help="comma-separated N list")
    p_sieve.add_argument("--epsilon", type=float)
    p_sieve.add_argument("--delta", type=float)
    p_sieve.add_argument("--tol", type=float)
    p_sieve.add_argument("--seed", type=int)
    p_sieve.add_argument("--dyadic", action="store_const", const=True)
    p_sieve.add_argument("--format", choices=("csv", "json"))
    add_common(p_sieve)
    p_sieve.set_defaults(func=_cmd_sieve)

    p_bounds = sub.add_parser("bounds", help="closed-form right-hand sides only")
    p_bounds.add_argument("--theorem", choices=("huxley", "power", "square", "prime"))
    p_bounds.add_argument("--k", type=int)
    p_bounds.add_argument("--q", help="comma-separated Q list")
    p_bounds.add_argument("--n", help="comma-separated N list")
    p_bounds.add_argument("--epsilon", type=float)
    p_bounds.add_argument("--delta", type=float)
    add_common(p_bounds)
    p_bounds.set_defaults(func=_cmd_bounds)

    p_t2 = sub.add_parser("theorem2", help="nested counting bound for a custom moduli set")
    p_t2.add_argument("--d", type=int)
    p_t2.add_argument("--s-file", required=True, help="one 'a b' coordinate pair per line")
    p_t2.add_argument("--bigq", type=int)
    p_t2.add_argument("--n", type=int)
    p_t2.add_argument("--z-samples", type=int, dest="z_samples")
    p_t2.add_argument("--tol", type=float)
    p_t2.add_argument("--seed", type=int)
    p_t2.add_argument("--format", choices=("csv", "json"))
    add_common(p_t2)
    p_t2.set_defaults(func=_cmd_theorem2)

    p_t3 = sub.add_parser("theorem3", help="counting-hypothesis X verifier")
    p_t3.add_argument("--d", type=int)
    p_t3.add_argument("--s-file", required=True)
    p_t3.add_argument("--bigq", type=int)
    p_t3.add_argument("--n", type=int)
    add_common(p_t3)
    p_t3.set_defaults(func=_cmd_theorem3)

    p_verify = sub.add_parser("verify", help="run a module property suite")
    p_verify.add_argument("suite", choices=sorted(checks.SUITES))
    p_verify.add_argument("--d", type=int)
    p_verify.add_argument("--seed", type=int)
    add_common(p_verify)
    p_verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
