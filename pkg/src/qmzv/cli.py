"""Command-line harness: compute z-values, verify identities, scan the cyclic-sum conjectures, estimate limits.

Exit codes: 0 when every check is verified or skipped, 1 when any check
produced a counterexample, 2 on usage or runtime errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Iterable, Sequence

from . import identities as ids
from .exactfield import format_rational
from .limits import LAST_VALUE, RICHARDSON, corollary1_check, xi_estimate, zn_complex
from .qsums import compositions, zn
from .results import COUNTEREXAMPLE, ERROR, VerificationResult

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_ERROR = 0, 1, 2
THREADS_ENV = "QMZV_THREADS"

DEFAULT_WEIGHT = {"duality": 5, "theoremA": 5, "lemma1": 6}
DEFAULT_R = {"eq2": 8, "eq3": 6}
DEFAULT_AB = {"thm1": 5, "thm2": 6}
DEFAULT_NMAX = {"theoremA": 12, "duality": 20, "lemma1": 25, "lemma2": 60, "thm1": 30, "thm2": 30}
CONSTANTS_COLUMNS = ["t", "d", "n", "r", "constant"]


class UsageError(Exception):
    pass


def parse_composition(text: str) -> tuple[int, ...]:
    """Parse '1^3,2' into (1, 1, 1, 2); the empty string is the empty composition."""
    text = text.strip()
    if not text:
        return ()
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        value, _, reps = part.partition("^")
        try:
            v = int(value)
            count = int(reps) if reps else 1
        except ValueError:
            raise UsageError(f"cannot parse composition entry {part!r}") from None
        if v < 1 or count < 0:
            raise UsageError(f"composition entries must be positive integers, got {part!r}")
        out.extend([v] * count)
    return tuple(out)


# ---------------------------------------------------------------------------
# task construction


def _lemma1_samples(count: int, wmax: int, nmin: int, nmax: int, seed: int) -> list[dict]:
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        r = rng.randint(1, 4)
        s = [rng.randint(0, 3) for _ in range(r)]
        if sum(s) > wmax:
            continue
        t = [rng.randint(0, 3) for _ in range(r)]
        out.append({"s": s, "t": t, "n": rng.randint(nmin, nmax), "star": len(out) % 2 == 1})
    return out


def build_tasks(args) -> list[tuple]:
    kind = args.kind
    nmin = args.nmin if args.nmin is not None else (1 if kind == "theoremA" else 2)
    nmax = args.nmax if args.nmax is not None else DEFAULT_NMAX.get(kind, 40)
    if nmin < (1 if kind == "theoremA" else 2):
        raise UsageError(f"--nmin too small for {kind}")
    ns = range(nmin, nmax + 1)
    tasks: list[tuple] = []
    if kind in ("eq1", "eq2", "eq3"):
        rmax = args.rmax if args.rmax is not None else DEFAULT_R.get(kind)
        for n in ns:
            top = n - 1 if rmax is None else rmax
            tasks += [("verify", kind, {"n": n, "r": r}) for r in range(top + 1)]
    elif kind in ("thm1", "thm2"):
        abmax = args.abmax if args.abmax is not None else DEFAULT_AB[kind]
        for n in ns:
            for m in range(abmax + 1):
                tasks += [("verify", kind, {"n": n, "a": a, "b": m - a}) for a in range(m + 1)]
    elif kind == "lemma2":
        tasks = [("lemma2_row", n) for n in ns]
    elif kind == "lemma1":
        wmax = args.wmax if args.wmax is not None else DEFAULT_WEIGHT[kind]
        tasks = [("verify", kind, p) for p in _lemma1_samples(args.samples, wmax, nmin, nmax, args.seed)]
    elif kind in ("duality", "theoremA"):
        wmax = args.wmax if args.wmax is not None else DEFAULT_WEIGHT[kind]
        comps = [c for w in range(1, wmax + 1) for c in compositions(w)]
        if kind == "duality":
            tasks = [("verify", kind, {"s": list(c), "n": n}) for n in ns for c in comps]
        else:
            try:
                qs = [Fraction(q) for q in args.q.split(",")]
            except ValueError:
                raise UsageError(f"cannot parse --q {args.q!r}") from None
            tasks = [("verify", kind, {"s": list(c), "n": n, "q": q}) for q in qs for n in ns for c in comps]
    elif kind in ("conj_i", "conj_ii"):
        tasks = _scan_tasks(kind, args.t, args.dmax, nmax)
    else:
        raise UsageError(f"unknown kind {kind!r}")
    return tasks


def _scan_tasks(pattern: str, t: int, dmax: int, nmax: int) -> list[tuple]:
    if t < 0 or dmax < 0:
        raise UsageError("--t and --dmax must be non-negative")
    reps = ids.cyclic_orbit_representatives(t, dmax)
    return [("verify", pattern, {"t": t, "d": list(d), "n": n}) for d in reps for n in range(2, nmax + 1)]


def run_task(task: tuple) -> list[VerificationResult]:
    if task[0] == "lemma2_row":
        return ids.verify_lemma2_row(task[1])
    _, kind, params = task
    return [ids.verify(kind, params)]


def resolve_jobs(flag: int | None) -> int:
    if flag is not None:
        jobs = flag
    else:
        env = os.environ.get(THREADS_ENV)
        try:
            jobs = int(env) if env else 1
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be a positive integer, got {env!r}") from None
    if jobs < 1:
        raise UsageError("parallelism must be >= 1")
    return jobs


def execute(tasks: Sequence[tuple], jobs: int) -> list[VerificationResult]:
    if jobs == 1 or len(tasks) < 2:
        batches = [run_task(t) for t in tasks]
    else:
        chunk = max(1, len(tasks) // (jobs * 8))
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(run_task, tasks, chunksize=chunk))
    results = [r for batch in batches for r in batch]
    results.sort(key=VerificationResult.sort_key)
    return results


# ---------------------------------------------------------------------------
# output


def render(results: Iterable[VerificationResult], fmt: str, timings: bool = True) -> str:
    rows = []
    for r in results:
        obj = r.to_json()
        if not timings:
            obj["runtime_ms"] = 0
        rows.append(obj)
    if fmt == "json":
        return json.dumps(rows, indent=2, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["kind", "params", "status", "lhs", "rhs", "note", "runtime_ms"])
        for o in rows:
            writer.writerow([
                o["kind"], json.dumps(o["params"]), o["status"],
                json.dumps(o["lhs"]), json.dumps(o["rhs"]), o["note"], o["runtime_ms"],
            ])
        return buf.getvalue()
    lines = []
    counts: dict[str, int] = {}
    for o in rows:
        counts[o["status"]] = counts.get(o["status"], 0) + 1
        params = " ".join(f"{k}={v}" for k, v in o["params"].items())
        line = f"{o['status']:<14} {o['kind']:<9} {params}"
        if o["note"]:
            line += f"  # {o['note']}"
        lines.append(line)
    lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in sorted(counts.items())))
    return "\n".join(lines) + "\n"


def emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def exit_code(results: Iterable[VerificationResult]) -> int:
    statuses = {r.status for r in results}
    if ERROR in statuses:
        return EXIT_ERROR
    if COUNTEREXAMPLE in statuses:
        return EXIT_COUNTEREXAMPLE
    return EXIT_OK


def constants_csv(results: Iterable[VerificationResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CONSTANTS_COLUMNS)
    for r in results:
        if "constant" in r.extra:
            d = ";".join(str(x) for x in r.params["d"])
            writer.writerow([r.params["t"], d, r.params["n"], r.extra["r"], format_rational(r.extra["constant"])])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands


def cmd_compute(args) -> int:
    s = parse_composition(args.index)
    if args.n < 2:
        raise UsageError(f"--n must be >= 2, got {args.n}")
    if args.field == "complex":
        if args.star:
            raise UsageError("--star is only available for the exact field")
        z = zn_complex(s, args.n)
        payload = {"re": z.real, "im": z.imag}
    else:
        payload = zn(s, args.n, star=args.star).to_json()
    if args.format == "text":
        if args.field == "complex":
            out = f"{payload['re']!r} {payload['im']:+.17g}i\n"
        else:
            out = " ".join(payload["coeffs"]) + "\n"
    else:
        out = json.dumps(payload) + "\n"
    emit(out, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    tasks = build_tasks(args)
    results = execute(tasks, resolve_jobs(args.jobs))
    emit(render(results, args.format, timings=not args.no_timings), args.output)
    return exit_code(results)


def cmd_scan(args) -> int:
    tasks = _scan_tasks(args.pattern, args.t, args.dmax, args.nmax)
    results = execute(tasks, resolve_jobs(args.jobs))
    emit(render(results, args.format, timings=not args.no_timings), args.output)
    if args.pattern == "conj_ii":
        with open(args.constants, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(constants_csv(results))
    return exit_code(results)


def cmd_xi(args) -> int:
    if args.nmax < 16:
        raise UsageError("--nmax must be >= 16")
    if args.corollary1:
        result = corollary1_check(args.a, args.b, args.nmax, args.tol, args.scheme)
        emit(json.dumps(result.to_json(), indent=2) + "\n", args.output)
        return exit_code([result])
    if args.index is None:
        raise UsageError("xi needs --index or --corollary1")
    est = xi_estimate(parse_composition(args.index), args.nmax, args.scheme)
    emit(json.dumps(est.to_json(), indent=2) + "\n", args.output)
    return EXIT_OK


def _add_output(p: argparse.ArgumentParser, formats=("json", "csv", "text")) -> None:
    p.add_argument("--format", choices=formats, default="json")
    p.add_argument("--output", "-o", help="write the report here instead of stdout")


def _add_sweep(p: argparse.ArgumentParser) -> None:
    p.add_argument("--jobs", "-j", type=int, default=None, help=f"worker processes (default: ${THREADS_ENV} or 1)")
    p.add_argument("--no-timings", action="store_true", help="write runtime_ms as 0 for reproducible reports")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmzv", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="evaluate z_n(s) or z_n*(s)")
    p.add_argument("--index", required=True, help="composition, e.g. 1^2,2,1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--star", action="store_true")
    p.add_argument("--field", choices=("exact", "complex"), default="exact")
    _add_output(p, ("json", "text"))
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="sweep one identity over a parameter range")
    p.add_argument("--kind", required=True, choices=ids.KINDS)
    p.add_argument("--nmin", type=int, default=None)
    p.add_argument("--nmax", type=int, default=None)
    p.add_argument("--rmax", type=int, default=None)
    p.add_argument("--abmax", type=int, default=None)
    p.add_argument("--wmax", type=int, default=None)
    p.add_argument("--samples", type=int, default=200, help="lemma1: number of random (s, t) draws")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--q", default="2,3/2,-1/2", help="theoremA: comma-separated rational q values")
    p.add_argument("--t", type=int, default=1, help="conj_i/conj_ii: number of separators")
    p.add_argument("--dmax", type=int, default=2)
    _add_output(p)
    _add_sweep(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan", help="scan the cyclic-sum conjectures")
    p.add_argument("--pattern", required=True, choices=("conj_i", "conj_ii"))
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--dmax", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--constants", default="conj_ii_constants.csv", help="conj_ii: CSV of rational constants")
    _add_output(p)
    _add_sweep(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("xi", help="estimate limit values xi(s)")
    p.add_argument("--index", default=None)
    p.add_argument("--corollary1", action="store_true")
    p.add_argument("--a", type=int, default=0)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--nmax", type=int, default=4096)
    p.add_argument("--scheme", choices=(RICHARDSON, LAST_VALUE), default=RICHARDSON)
    p.add_argument("--tol", type=float, default=5e-3)
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_xi)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qmzv {args.command}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # noqa: BLE001
        print(f"qmzv {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
