"""Command-line front end: generation, period scans, reports, file formats.

Point-set files are plain text: a header line

    apset v1 dim=<d> signed=<0|1> window=<lo1,...,lod;hi1,...,hid>

followed by one record per point, ``<x1> ... <xd> <m>`` with round-trip
float formatting and a nonzero integer mass.  Reports are JSON documents
with sorted keys: identical invocations produce byte-identical output except
for the wall_time_s field.

Exit codes: 0 success, 1 a verified claim failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import __version__, kernels, kronecker, matching, measures, one_dim, signed_examples
from .ap_functions import ExpPolynomial, Grid1D
from .core_model import Box, PointMultiSet
from .generators import IndexBox, LatticeMatrix, perturbed_lattice, sine_example
from .matching import MarginTooSmall, MatchPolicy
from .measures import Mollifier
from .signed_examples import VerificationError


class UsageError(ValueError):
    """Bad input or parameters: mapped to exit code 2."""


# -- point-set files ----------------------------------------------------------

def serialize_pointset(A: PointMultiSet) -> str:
    lo = ",".join(repr(float(v)) for v in A.window.lower)
    hi = ",".join(repr(float(v)) for v in A.window.upper)
    lines = [f"apset v1 dim={A.dim} signed={1 if A.signed else 0} window={lo};{hi}"]
    for p, m in A.items():
        lines.append(" ".join(repr(float(c)) for c in p) + f" {m}")
    return "\n".join(lines) + "\n"


def parse_pointset(text: str) -> PointMultiSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise UsageError("empty point-set file")
    header = lines[0].split()
    if len(header) != 5 or header[0] != "apset" or header[1] != "v1":
        raise UsageError("malformed header (expected 'apset v1 dim=... signed=... window=...')")
    fields = {}
    for token in header[2:]:
        if "=" not in token:
            raise UsageError(f"malformed header field {token!r}")
        key, value = token.split("=", 1)
        fields[key] = value
    try:
        dim = int(fields["dim"])
        signed = bool(int(fields["signed"]))
        lo_s, hi_s = fields["window"].split(";")
        lower = [float(v) for v in lo_s.split(",")]
        upper = [float(v) for v in hi_s.split(",")]
    except (KeyError, ValueError) as exc:
        raise UsageError(f"malformed header: {exc}") from None
    if len(lower) != dim or len(upper) != dim:
        raise UsageError("window dimension does not match dim")
    window = Box(lower, upper)
    positions, masses = [], []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != dim + 1:
            raise UsageError(f"record {ln!r} needs {dim} coordinates and a mass")
        try:
            positions.append([float(v) for v in parts[:dim]])
            masses.append(int(parts[dim]))
        except ValueError as exc:
            raise UsageError(f"malformed record {ln!r}: {exc}") from None
        if masses[-1] == 0:
            raise UsageError("zero mass in record")
    try:
        return PointMultiSet(np.array(positions, float).reshape(len(positions), dim),
                             masses, window, signed=signed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def load_pointset(path: str) -> PointMultiSet:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_pointset(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


# -- reports ------------------------------------------------------------------

def make_report(command: str, inputs: dict, results: dict, policy: dict | None = None) -> dict:
    return {
        "command": command,
        "inputs": inputs,
        "policy": policy or {},
        "results": results,
        "provenance": {
            "tool": "apset",
            "version": __version__,
            "report_format": "v1",
            "kernel_backend": kernels.BACKEND,
        },
    }


def emit_report(report: dict, out: str | None, started: float) -> None:
    report = dict(report)
    report["wall_time_s"] = time.perf_counter() - started
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _write_csv(path: str, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


# -- small parsers ------------------------------------------------------------

def parse_matrix(spec: str, dim: int | None = None) -> LatticeMatrix:
    try:
        rows = [[float(v) for v in row.split(",")] for row in spec.split(";")]
        return LatticeMatrix(rows)
    except ValueError as exc:
        raise UsageError(f"bad matrix spec {spec!r}: {exc}") from None


def parse_perturbation(spec: str, dim: int) -> list[ExpPolynomial]:
    """Component specs separated by ';'; each a list of freq:amp sine terms.

    Term ``f:a`` in component j contributes a*sin(f * x_j).  An empty
    component spec means the zero perturbation for that component.
    """
    comps = spec.split(";")
    if len(comps) != dim:
        raise UsageError(f"perturbation needs {dim} components separated by ';'")
    out = []
    for j, comp in enumerate(comps):
        comp = comp.strip()
        if not comp or comp == "0":
            out.append(ExpPolynomial(np.zeros((0, dim)), [], dim=dim))
            continue
        freqs, coeffs = [], []
        for term in comp.split(","):
            try:
                f_s, a_s = term.split(":")
                freq, amp = float(f_s), float(a_s)
            except ValueError:
                raise UsageError(f"bad perturbation term {term!r} (expected freq:amp)") from None
            row_p = np.zeros(dim)
            row_p[j] = freq
            freqs.extend([row_p, -row_p])
            coeffs.extend([amp / 2j, -amp / 2j])
        out.append(ExpPolynomial(np.array(freqs), coeffs, dim=dim))
    return out


def parse_candidates(spec: str) -> list[float]:
    if spec.startswith("list:"):
        try:
            return [float(v) for v in spec[5:].split(",")]
        except ValueError as exc:
            raise UsageError(f"bad candidate list: {exc}") from None
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError("candidates must be 'start:stop:step' or 'list:v1,v2,...'")
    try:
        start, stop, step = (float(v) for v in parts)
    except ValueError as exc:
        raise UsageError(f"bad candidate range: {exc}") from None
    if step <= 0 or stop < start:
        raise UsageError("candidate range needs step > 0 and stop >= start")
    n = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(n)]


def parse_point(spec: str, dim: int) -> list[float]:
    try:
        coords = [float(v) for v in spec.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad point {spec!r}: {exc}") from None
    if len(coords) != dim:
        raise UsageError(f"point {spec!r} needs {dim} coordinates")
    return coords


def parse_grid(spec: str) -> Grid1D:
    parts = spec.split(":")
    if len(parts) != 3:
        raise UsageError("grid must be 'lo:hi:step'")
    try:
        lo, hi, step = (float(v) for v in parts)
    except ValueError as exc:
        raise UsageError(f"bad grid spec: {exc}") from None
    if not (hi > lo and step > 0):
        raise UsageError("grid needs hi > lo and step > 0")
    return Grid1D(Box([lo], [hi]), step)


def _threads(args) -> int:
    if args.threads is not None:
        return max(1, args.threads)
    env = os.environ.get("APSET_THREADS")
    return max(1, int(env)) if env else 1


# -- subcommands --------------------------------------------------------------

def cmd_generate(args) -> int:
    started = time.perf_counter()
    kind = args.kind
    if kind in ("sine", "perturbed"):
        if args.K is None:
            raise UsageError("--K (index half-width) is required")
        K = IndexBox.centered(args.K, args.dim)
        if kind == "sine":
            A = sine_example(args.dim, K)
        else:
            gamma = parse_matrix(args.gamma) if args.gamma else LatticeMatrix.identity(args.dim)
            if gamma.dim != args.dim:
                raise UsageError("--gamma dimension does not match --dim")
            F = (parse_perturbation(args.F, args.dim) if args.F
                 else [ExpPolynomial(np.zeros((0, args.dim)), [], dim=args.dim)] * args.dim)
            A = perturbed_lattice(gamma, F, K, certify_eps=args.certify_eps,
                                  certify_bound=args.certify_bound)
    elif kind in ("theorem1", "theorem2", "corollary"):
        if args.N is None:
            raise UsageError("--N (window bound) is required")
        builder = {"theorem1": signed_examples.dyadic_signed_set,
                   "theorem2": signed_examples.dyadic_unit_signed_set,
                   "corollary": signed_examples.dyadic_positive_set}[kind]
        A = builder(args.N)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown kind {kind}")
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(serialize_pointset(A))
    meta = {k: v for k, v in A.meta.items()}
    results = {"records": A.n_points, "out": args.out, "metadata": meta}
    emit_report(make_report("generate", {"kind": kind, "dim": A.dim}, results), None, started)
    return 0


def _scan_accept(A, eps, candidates, policy, n_threads):
    if n_threads <= 1 or len(candidates) < 8:
        return matching.scan_periods(A, eps, candidates, policy)
    from concurrent.futures import ThreadPoolExecutor

    cands = [float(c) for c in candidates]
    with ThreadPoolExecutor(max_workers=n_threads) as pool:
        flags = list(pool.map(lambda t: matching.is_eps_period(A, [t], eps, policy), cands))
    accepted = [np.array([t]) for t, f in zip(cands, flags) if f]
    keys = [t for t, f in zip(cands, flags) if f]
    gap = kronecker.max_gap(keys, (min(cands), max(cands)))
    return accepted, gap


def cmd_periods(args) -> int:
    started = time.perf_counter()
    A = load_pointset(args.input)
    policy = MatchPolicy(margin=args.margin)
    if args.candidates:
        cands = parse_candidates(args.candidates)
    elif args.kronecker_F:
        if A.dim != 1 and args.gamma is None:
            raise UsageError("--gamma is required with --kronecker-F in d > 1")
        gamma = parse_matrix(args.gamma) if args.gamma else LatticeMatrix.identity(A.dim)
        F = parse_perturbation(args.kronecker_F, A.dim)
        eps_f = args.kronecker_eps if args.kronecker_eps else args.eps / A.dim
        rs = kronecker.common_integer_almost_periods(F, eps_f, args.kronecker_bound)
        cands = [float(gamma.map_indices(r.reshape(1, -1))[0][0]) if A.dim == 1
                 else gamma.map_indices(r.reshape(1, -1))[0].tolist() for r in rs]
    else:
        raise UsageError("need --candidates or --kronecker-F")
    accepted, gap = _scan_accept(A, args.eps, cands, policy, _threads(args))
    table = []
    for t in accepted:
        rep = matching.bottleneck_eps(A, t, policy)
        table.append({"tau": np.atleast_1d(t).tolist(), "eps_star": rep.eps_star})
    results = {
        "n_candidates": len(cands),
        "accepted": [np.atleast_1d(t).tolist() for t in accepted],
        "eps_star_table": table,
        "max_gap": gap if np.isfinite(gap) else "inf",
    }
    emit_report(make_report("periods", {"input": args.input, "eps": args.eps},
                            results, {"margin": args.margin}), args.out, started)
    return 0


def cmd_check(args) -> int:
    started = time.perf_counter()
    A = load_pointset(args.input)
    tau = parse_point(args.tau, A.dim)
    policy = MatchPolicy(margin=args.margin)
    verdict = matching.is_eps_period(A, tau, args.eps, policy)
    rep = matching.bottleneck_eps(A, tau, policy)
    results = {
        "tau": tau,
        "eps": args.eps,
        "is_eps_period": bool(verdict),
        "eps_star": rep.eps_star,
        "inner_counts": list(rep.inner_counts),
    }
    emit_report(make_report("check", {"input": args.input}, results,
                            {"margin": args.margin}), args.out, started)
    return 0


def cmd_density(args) -> int:
    started = time.perf_counter()
    A = load_pointset(args.input)
    radii = [float(v) for v in args.radii.split(",")]
    centers = [parse_point(c, A.dim) for c in args.centers.split(";")]
    try:
        report = measures.ball_density_table(A, centers, radii)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    results = {
        "table": [{"center": list(c), "radius": r, "count": n, "density": v}
                  for c, r, n, v in report.rows],
        "estimate": report.estimate,
    }
    emit_report(make_report("density", {"input": args.input}, results), args.out, started)
    return 0


def cmd_convolve(args) -> int:
    started = time.perf_counter()
    A = load_pointset(args.input)
    if A.dim != 1:
        raise UsageError("convolve traces are 1-d")
    phi = Mollifier(scale=args.scale)
    grid = parse_grid(args.grid)
    taus = [float(v) for v in args.tau_list.split(",")]
    rows = []
    for t in taus:
        try:
            sup = measures.weak_ap_sup_diff(A, phi, [t], grid)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rows.append({"tau": t, "sup_diff": sup})
    if args.csv:
        trace = measures.convolution_trace(A, phi, grid)
        _write_csv(args.csv, ["x", "g"], zip(trace.nodes, trace.values))
    results = {"sup_diffs": rows, "deriv_sup": phi.deriv_sup,
               "csv": args.csv or None}
    emit_report(make_report("convolve", {"input": args.input, "scale": args.scale,
                                         "grid": args.grid}, results), args.out, started)
    return 0


def cmd_decompose(args) -> int:
    started = time.perf_counter()
    A = load_pointset(args.input)
    if A.dim != 1:
        raise UsageError("decompose works on 1-d samples")
    try:
        line = one_dim.sort_line(A)
        result = one_dim.decompose(line)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    shift_rows = []
    if args.q_list:
        for q_s in args.q_list.split(","):
            q = int(q_s)
            shift_rows.append({"q": q,
                               "quality": one_dim.f_shift_quality(result.remainder, q)})
    if args.csv:
        ks = np.arange(result.remainder.k_min, result.remainder.k_max + 1)
        _write_csv(args.csv, ["k", "f"], zip(ks, result.remainder.values))
    results = {
        "slope": result.slope,
        "anchor_offset": result.anchor_offset,
        "discrepancy": result.discrepancy_value,
        "shift_quality": shift_rows,
        "csv": args.csv or None,
    }
    emit_report(make_report("decompose", {"input": args.input}, results), args.out, started)
    return 0


def cmd_counterexample(args) -> int:
    started = time.perf_counter()
    name = args.name
    results: dict = {"name": name}
    if name == "theorem1":
        K = args.K if args.K is not None else 12
        N = args.N if args.N is not None else 2 ** (K + 1)
        rows = signed_examples.verify_unbounded_variation(K, N)
        results["variation_rows"] = [{"k": k, "center": c, "variation": v}
                                     for k, c, v in rows]
        A = signed_examples.dyadic_signed_set(N)
        phi = Mollifier(scale=0.4)
        grid = Grid1D(Box([-min(2000.0, N / 4)], [min(2000.0, N / 4)]), 1e-3)
        drows = signed_examples.verify_distributional_ap(A, phi, range(3, 9), grid)
        results["distributional_rows"] = [
            {"level": l, "tau": t, "sup_diff": s, "bound": b} for l, t, s, b in drows]
    elif name == "theorem2":
        N = args.N if args.N is not None else 2 ** 13
        best, witness, rows = signed_examples.positive_part_defect_scan(
            N, eps=0.2, tau_candidates=range(2, 65))
        results["min_eps_star"] = best
        results["witness_tau"] = witness
        results["rows"] = [{"tau": t, "eps_star": e} for t, e in rows]
        from .core_model import split_signs

        plus, _ = split_signs(signed_examples.dyadic_unit_signed_set(N))
        residual = signed_examples.even_offset_residual(plus)
        results["even_offset_residual"] = residual
        if residual >= 0.25:
            raise VerificationError("pairwise offsets left the 1/4 band")
    elif name == "corollary":
        N = args.N if args.N is not None else 2 ** 13
        A = signed_examples.dyadic_positive_set(N)
        dens = measures.ball_density_table(A, [[0.0]], [min(1000.0, N / 2)])
        results["density_estimate"] = dens.estimate
        best, witness, rows = signed_examples.positive_part_defect_scan(
            N, eps=0.2, tau_candidates=range(2, 33))
        results["min_eps_star_positive_part"] = best
        results["witness_tau"] = witness
    else:  # pragma: no cover
        raise UsageError(f"unknown counterexample {name}")
    emit_report(make_report("counterexample", {"name": name}, results), args.out, started)
    return 0


# -- entry point ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apset",
        description="Almost periodic point sets: generation, period scans, "
                    "densities, convolution tests, decomposition.")
    parser.add_argument("--threads", type=int, default=None,
                        help="worker threads for scans (or APSET_THREADS)")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    g = sub.add_parser("generate", help="construct a point set and write it to a file")
    g.add_argument("kind", choices=["perturbed", "sine", "theorem1", "theorem2", "corollary"])
    g.add_argument("--dim", type=int, default=1)
    g.add_argument("--K", type=int, help="index half-width for lattice constructions")
    g.add_argument("--N", type=int, help="window bound for the dyadic families")
    g.add_argument("--gamma", help="lattice matrix, rows ';'-separated, entries ','")
    g.add_argument("--F", help="perturbation: per-component freq:amp sine terms")
    g.add_argument("--certify-eps", type=float, dest="certify_eps")
    g.add_argument("--certify-bound", type=int, dest="certify_bound")
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    p = sub.add_parser("periods", help="scan candidate shifts for eps-almost periods")
    p.add_argument("input")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--candidates", help="'start:stop:step' or 'list:v1,v2,...'")
    p.add_argument("--kronecker-F", dest="kronecker_F",
                   help="derive candidates from certified integer periods of this perturbation")
    p.add_argument("--kronecker-eps", dest="kronecker_eps", type=float)
    p.add_argument("--kronecker-bound", dest="kronecker_bound", type=int, default=1000)
    p.add_argument("--gamma")
    p.add_argument("--margin", type=float, default=10.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_periods)

    c = sub.add_parser("check", help="single is-eps-period verdict with the match report")
    c.add_argument("input")
    c.add_argument("--tau", required=True)
    c.add_argument("--eps", type=float, required=True)
    c.add_argument("--margin", type=float, default=10.0)
    c.add_argument("--out")
    c.set_defaults(func=cmd_check)

    d = sub.add_parser("density", help="ball-counting density table")
    d.add_argument("input")
    d.add_argument("--radii", required=True, help="comma-separated radii")
    d.add_argument("--centers", default="0", help="';'-separated points, ',' coords")
    d.add_argument("--out")
    d.set_defaults(func=cmd_density)

    v = sub.add_parser("convolve", help="mollifier-smoothed shift suprema")
    v.add_argument("input")
    v.add_argument("--scale", type=float, default=0.4)
    v.add_argument("--tau-list", dest="tau_list", required=True)
    v.add_argument("--grid", default="-100:100:0.001")
    v.add_argument("--csv", help="write the g(x) trace to this CSV")
    v.add_argument("--out")
    v.set_defaults(func=cmd_convolve)

    de = sub.add_parser("decompose", help="slope + remainder decomposition of a 1-d sample")
    de.add_argument("input")
    de.add_argument("--q-list", dest="q_list", help="integer shifts for the quality table")
    de.add_argument("--csv", help="write the remainder samples to this CSV")
    de.add_argument("--out")
    de.set_defaults(func=cmd_decompose)

    ce = sub.add_parser("counterexample", help="bundled verification tables")
    ce.add_argument("name", choices=["theorem1", "theorem2", "corollary"])
    ce.add_argument("--N", type=int)
    ce.add_argument("--K", type=int)
    ce.add_argument("--out")
    ce.set_defaults(func=cmd_counterexample)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1
    except (MarginTooSmall, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
