"""Command-line front end: ``sweep``, ``point`` and ``certify``.

Exit codes: 0 success, 1 failed certification check, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
import threading
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

from . import oracle
from .errors import DegenerateInput, IllConditioned, TruncationWarning
from .gaussian import output_squeezing, reduce_to_mode_b, symplectic_eigenvalue_closed
from .interferometer import (
    InterferometerConfig,
    db_to_r,
    mean_photon_number,
    photon_number_variance,
)
from .precision import n_precision_value, sql
from .qfim import qfim, two_mode_qfi

COLUMNS = ("n_precision", "sql", "qfi", "qfi_pure_limit", "cfi_oracle", "qfi_oracle", "lambda", "r_out")
NORMALIZED = {"n_precision", "sql", "qfi", "qfi_pure_limit", "cfi_oracle", "qfi_oracle"}
ORACLE_COLUMNS = {"cfi_oracle", "qfi_oracle"}
DEFAULT_CERTIFY_THETAS = (0.4, 0.8, 1.6, 2.4)


class UsageError(Exception):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class SweepSpec:
    alpha_sq: float
    r: float
    phi: float
    theta_min: float
    theta_max: float
    points: int
    columns: List[str]
    cutoff: Optional[int] = None

    def __post_init__(self):
        if not self.alpha_sq > 0:
            raise DegenerateInput(f"--alpha-sq must be > 0, got {self.alpha_sq:g}")
        if not self.theta_min < self.theta_max:
            raise UsageError("theta range must satisfy min < max")
        if self.points < 2:
            raise UsageError("--points must be >= 2")
        unknown = [c for c in self.columns if c not in COLUMNS]
        if unknown:
            raise UsageError(f"unknown column(s): {', '.join(unknown)}")
        if ORACLE_COLUMNS & set(self.columns) and self.cutoff is None:
            raise UsageError("oracle columns require --cutoff")

    @property
    def thetas(self) -> List[float]:
        step = (self.theta_max - self.theta_min) / (self.points - 1)
        return [self.theta_min + i * step for i in range(self.points)]

    def header(self) -> List[str]:
        names = ["theta"]
        for col in self.columns:
            names.append(col)
            if col in NORMALIZED:
                names.append(col + "_norm")
        if ORACLE_COLUMNS & set(self.columns):
            names.append("tail_mass")
        return names


def _sweep_row(spec: SweepSpec, theta: float, local) -> List[float]:
    cfg = InterferometerConfig.standard(math.sqrt(spec.alpha_sq), spec.r, theta, spec.phi)
    values = {}
    needs_qfim = {"qfi", "qfi_pure_limit"} & set(spec.columns)
    if needs_qfim:
        res = qfim(cfg)
        values["qfi"] = res.q_theta_theta
        values["qfi_pure_limit"] = res.theta_limit
    if "n_precision" in spec.columns:
        values["n_precision"] = n_precision_value(cfg)
    if "sql" in spec.columns:
        values["sql"] = sql(cfg)
    if "lambda" in spec.columns:
        values["lambda"] = symplectic_eigenvalue_closed(cfg)
    if "r_out" in spec.columns:
        values["r_out"] = output_squeezing(cfg)
    tail = None
    if ORACLE_COLUMNS & set(spec.columns):
        ws = getattr(local, "ws", None)
        if ws is None:
            ws = local.ws = oracle.FockWorkspace(cfg.alpha, cfg.r, spec.cutoff)
        pt = ws.point(theta, spec.phi)
        rho, drho = pt.rho, pt.drho("theta")
        tail = pt.tail
        if "cfi_oracle" in spec.columns:
            values["cfi_oracle"] = oracle.photon_counting_fisher(rho, drho)
        if "qfi_oracle" in spec.columns:
            values["qfi_oracle"] = oracle.sld_qfi(rho, drho)
    row = [theta]
    for col in spec.columns:
        row.append(values[col])
        if col in NORMALIZED:
            row.append(values[col] / spec.alpha_sq)
    if tail is not None:
        row.append(tail)
    return row


def run_sweep(spec: SweepSpec, jobs: int = 1) -> List[List[float]]:
    """Rows in grid order, whatever the number of worker threads."""
    local = threading.local()
    if jobs <= 1:
        return [_sweep_row(spec, t, local) for t in spec.thetas]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(lambda t: _sweep_row(spec, t, local), spec.thetas))


def write_csv(header: Sequence[str], rows, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])


def cmd_sweep(args) -> int:
    lo, hi = _parse_range(args.theta_range, args.degrees)
    spec = SweepSpec(
        alpha_sq=args.alpha_sq,
        r=_squeezing(args),
        phi=args.phi,
        theta_min=lo,
        theta_max=hi,
        points=args.points,
        columns=[c.strip() for c in args.columns.split(",") if c.strip()],
        cutoff=args.cutoff,
    )
    rows = run_sweep(spec, args.jobs)
    if ORACLE_COLUMNS & set(spec.columns):
        worst = max(r[-1] for r in rows)
        if worst > oracle.TAIL_THRESHOLD:
            print(f"note: Fock truncation tail mass up to {worst:.2e}; see tail_mass column", file=sys.stderr)
    _emit(lambda out: write_csv(spec.header(), rows, out), args.output)
    return 0


def point_report(cfg: InterferometerConfig) -> List[tuple]:
    lines = [
        ("alpha_sq", cfg.alpha_sq),
        ("r", cfg.r),
        ("theta", cfg.theta),
        ("phi", cfg.phi),
        ("mean_N", mean_photon_number(cfg)),
        ("var_N", photon_number_variance(cfg)),
    ]
    if cfg.alpha_sq > 0:
        lines.append(("P_theta", n_precision_value(cfg)))
    res = qfim(cfg)
    lines += [
        ("lambda", symplectic_eigenvalue_closed(cfg)),
        ("r_out", output_squeezing(cfg)),
        ("regime", res.regime.value),
        ("Q_phi_phi", res.q_phi_phi),
        ("Q_phi_theta", res.q_phi_theta),
        ("Q_theta_theta", res.q_theta_theta),
    ]
    if res.limit is not None:
        lines += [("Q0", res.q_theta_theta), ("Q0+", res.limit.q_theta_theta)]
    lines.append(("F0_two_mode", two_mode_qfi(cfg.alpha_sq, cfg.r)))
    return lines


def cmd_point(args) -> int:
    theta = math.radians(args.theta) if args.degrees else args.theta
    cfg = InterferometerConfig(_alpha(args), _squeezing(args), theta, args.phi)
    text = "".join(f"{k}: {v if isinstance(v, str) else fmt(v)}\n" for k, v in point_report(cfg))
    _emit(lambda out: out.write(text), args.output)
    return 0


@dataclass
class Check:
    theta: float
    name: str
    value: float
    reference: float
    error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.error <= self.tolerance


def _rel(x, ref, floor=1e-12) -> float:
    return abs(x - ref) / max(abs(ref), floor)


def certify(alpha: complex, r: float, cutoff: int, thetas: Sequence[float], phi: float = 0.0) -> List[Check]:
    """Closed-form vs Fock-oracle comparisons at each theta of the grid."""
    ws = oracle.FockWorkspace(alpha, r, cutoff)
    checks: List[Check] = []
    f0 = two_mode_qfi(abs(alpha) ** 2, r)
    for theta in thetas:
        cfg = InterferometerConfig(alpha, r, theta, phi)

        def add(name, value, ref, tol, err=None):
            checks.append(Check(theta, name, value, ref, _rel(value, ref) if err is None else err, tol))

        pt = ws.point(theta, phi)
        add("tail_mass", pt.tail, 0.0, oracle.TAIL_THRESHOLD, err=pt.tail)
        rho = pt.rho
        mean, var = oracle.photon_statistics(rho)
        add("mean_N", mean, mean_photon_number(cfg), 1e-8)
        add("var_N", var, photon_number_variance(cfg), 1e-8)
        mom, ref = oracle.gaussian_moments(rho), reduce_to_mode_b(cfg)
        add("d", abs(mom.d), abs(ref.d), 1e-8, err=_rel(mom.d, ref.d))
        add("C_N", mom.c_n, ref.c_n, 1e-8)
        add("C_A", abs(mom.c_a), abs(ref.c_a), 1e-8, err=_rel(mom.c_a, ref.c_a))
        add("purity", rho.purity(), 1 / symplectic_eigenvalue_closed(cfg), 1e-6)

        q = qfim(cfg)
        try:
            qo = oracle.sld_qfim(rho, [pt.drho("phi"), pt.drho("theta")])
            cfi = oracle.photon_counting_fisher(rho, pt.drho("theta"))
        except IllConditioned:
            add("sld_conditioning", 1.0, 0.0, 0.0, err=math.inf)
            continue
        add("qfi_theta", qo[1, 1], q.q_theta_theta, 1e-3)
        add("qfi_phi", qo[0, 0], q.q_phi_phi, 1e-3)
        add("qfi_cross", qo[0, 1], 0.0, 1e-4, err=abs(qo[0, 1]) / max(qo[1, 1], 1e-12))
        two = oracle.pure_two_mode_qfi(pt.state, pt.d_theta)
        add("two_mode_qfi", two, f0, 1e-6)
        slack = 1e-6
        if abs(alpha) > 0:
            p = n_precision_value(cfg)
            add("chain P<=CFI", p, cfi, slack, err=max(0.0, p - cfi))
        add("chain CFI<=QFI", cfi, qo[1, 1], slack, err=max(0.0, cfi - qo[1, 1]))
        add("chain QFI<=F0", qo[1, 1], f0, slack, err=max(0.0, qo[1, 1] - f0))
    return checks


def format_checks(checks: Sequence[Check], alpha, r, cutoff) -> str:
    buf = io.StringIO()
    buf.write(f"certify alpha={alpha} r={r:g} cutoff={cutoff}\n")
    buf.write("Fock oracle certification covers desk-scale inputs only (|alpha| <= 2, r <= 0.8);\n")
    buf.write("larger parameters rely on the closed forms.\n")
    buf.write(f"{'theta':>8} {'check':<16} {'oracle':>22} {'closed form':>22} {'error':>10} {'tol':>8}  status\n")
    for c in checks:
        buf.write(
            f"{c.theta:>8.4g} {c.name:<16} {c.value:>22.15g} {c.reference:>22.15g} "
            f"{c.error:>10.2e} {c.tolerance:>8.0e}  {'PASS' if c.passed else 'FAIL'}\n"
        )
    failed = sum(not c.passed for c in checks)
    buf.write(f"{len(checks) - failed}/{len(checks)} checks passed\n")
    return buf.getvalue()


def cmd_certify(args) -> int:
    alpha = _alpha(args)
    r = _squeezing(args)
    thetas = [float(t) for t in args.theta.split(",")] if args.theta else list(DEFAULT_CERTIFY_THETAS)
    if args.degrees:
        thetas = [math.radians(t) for t in thetas]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        checks = certify(alpha, r, args.cutoff, thetas, args.phi)
    report = format_checks(checks, alpha, r, args.cutoff)
    _emit(lambda out: out.write(report), args.output)
    return 0 if all(c.passed for c in checks) else 1


def _emit(write, path):
    if path:
        with open(path, "w", newline="") as fh:
            write(fh)
    else:
        write(sys.stdout)


def _squeezing(args) -> float:
    r = db_to_r(args.db) if args.db is not None else args.r
    if r is None:
        r = 0.0
    if r < 0:
        raise UsageError("squeezing must be >= 0")
    return r


def _alpha(args) -> complex:
    if getattr(args, "alpha_im", None) is not None:
        return 1j * args.alpha_im
    if args.alpha_sq is None:
        raise UsageError("one of --alpha-sq / --alpha-im is required")
    if args.alpha_sq < 0:
        raise UsageError("--alpha-sq must be >= 0")
    return -1j * math.sqrt(args.alpha_sq)


def _parse_range(text: str, degrees: bool):
    try:
        lo, hi = (float(x) for x in text.split(".."))
    except ValueError:
        raise UsageError(f"theta range must look like MIN..MAX, got {text!r}") from None
    if degrees:
        lo, hi = math.radians(lo), math.radians(hi)
    return lo, hi


def _add_squeezing(p, required=True):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--r", type=float, help="squeezing parameter")
    g.add_argument("--db", type=float, help="squeezing in dB")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mziqfi",
        description="Phase-estimation limits of a squeezing-enhanced MZI with single-mode readout.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="CSV of figures of merit over a theta range")
    sw.add_argument("--alpha-sq", type=float, required=True, help="mean coherent photon number |alpha|^2")
    _add_squeezing(sw)
    sw.add_argument("--phi", type=float, default=0.0)
    sw.add_argument("--theta-range", "--theta", dest="theta_range", required=True, help="MIN..MAX in radians")
    sw.add_argument("--points", type=int, default=401)
    sw.add_argument("--columns", default="n_precision,sql,qfi", help=f"comma list from {','.join(COLUMNS)}")
    sw.add_argument("--cutoff", type=int, help="Fock cutoff per mode (oracle columns)")
    sw.add_argument("--jobs", type=int, default=1, help="worker threads")
    sw.add_argument("--degrees", action="store_true", help="theta inputs are in degrees")
    sw.add_argument("--output", help="write to this path instead of stdout")
    sw.set_defaults(func=cmd_sweep)

    pt = sub.add_parser("point", help="report every quantity at one working point")
    pt.add_argument("--alpha-sq", type=float)
    pt.add_argument("--alpha-im", type=float, help="alpha = i * ALPHA_IM")
    _add_squeezing(pt)
    pt.add_argument("--phi", type=float, default=0.0)
    pt.add_argument("--theta", type=float, required=True)
    pt.add_argument("--degrees", action="store_true")
    pt.add_argument("--output")
    pt.set_defaults(func=cmd_point)

    ce = sub.add_parser("certify", help="compare closed forms with the Fock oracle")
    ce.add_argument("--alpha-im", type=float, help="alpha = i * ALPHA_IM")
    ce.add_argument("--alpha-sq", type=float)
    _add_squeezing(ce)
    ce.add_argument("--cutoff", type=int, required=True)
    ce.add_argument("--phi", type=float, default=0.0)
    ce.add_argument("--theta", help="comma list of theta values")
    ce.add_argument("--degrees", action="store_true")
    ce.add_argument("--output")
    ce.set_defaults(func=cmd_certify)
    return parser


def _glue_negative_values(argv: Sequence[str]) -> List[str]:
    # argparse reads "-0.2..0.2" as an option; rewrite to "--theta=-0.2..0.2".
    out: List[str] = []
    it = iter(argv)
    for tok in it:
        if tok in ("--theta", "--theta-range"):
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-"):
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        return args.func(args)
    except (UsageError, DegenerateInput, ValueError) as exc:
        print(f"mziqfi {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
