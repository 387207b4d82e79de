"""Command-line entry point.

Every subcommand is deterministic given its flags (seed defaults to 0), and
output bodies are independent of the thread count.  Exit codes: 0 success,
1 a verification-style check failed, 2 usage error (argparse default).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

from . import charsum, fourier, randmodel, tails
from .charsum import parse_alpha
from .primes import primes_up_to


def _emit(text: str, out_path: str | None) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")


def _rows_to_text(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rows, indent=2)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue().rstrip("\n")


def _default_threads() -> int:
    return int(os.environ.get("LEGSUMS_THREADS", "1"))


# --------------------------------------------------------------------------
# subcommands

def _cmd_density(args) -> int:
    alpha = parse_alpha(args.alpha)
    report = charsum.density_scan(alpha, args.primes, mode=args.mode, threads=args.threads)
    if args.format == "json":
        text = report.as_json()
    else:
        text = report.as_csv().rstrip("\n")
    _emit(text, args.out)
    if args.verify is not None and report.count != args.verify:
        print(f"verify failed: expected {args.verify}, got {report.count}", file=sys.stderr)
        return 1
    return 0


def _cmd_dirichlet(args) -> int:
    rows = []
    failed = 0
    for p in primes_up_to(args.max_p).tolist():
        if p == 2:
            continue
        chk = charsum.dirichlet_check(p)
        if not chk.ok:
            failed += 1
        rows.append(
            {"p": chk.p, "lhs": chk.lhs, "rhs": chk.rhs,
             "excluded": chk.excluded, "ok": chk.ok}
        )
    if not args.all:
        rows = [r for r in rows if not r["ok"] or r["excluded"]]
        rows.append({"p": "total", "lhs": "", "rhs": "",
                     "excluded": "", "ok": failed == 0})
    _emit(_rows_to_text(rows, args.format), args.out)
    return 1 if failed else 0


def _cmd_fourier_check(args) -> int:
    alpha = parse_alpha(args.alpha)
    rows = []
    for M in args.truncation:
        exact = charsum.legendre_sum(alpha, args.p)
        approx = fourier.fourier_partial(alpha, args.p, M)
        rows.append(
            {"alpha": str(alpha), "p": args.p, "M": M, "exact": exact,
             "truncated": approx, "abs_error": abs(approx - exact)}
        )
    _emit(_rows_to_text(rows, args.format), args.out)
    return 0


def _parse_rational_or_float(text: str):
    value = parse_alpha(text)
    return value


def _cmd_simulate(args) -> int:
    alpha = parse_alpha(args.alpha)
    parities = ["plus", "minus"] if args.parity == "both" else [args.parity]
    rows = []
    estimates = {}
    for parity in parities:
        spec = randmodel.CoefficientSpec(parity, alpha)
        est = randmodel.estimate_positivity(
            spec,
            samples=args.samples,
            seed=args.seed,
            truncation=args.truncation,
            prime_cutoff=args.prime_cutoff,
            evaluator=args.evaluator,
        )
        estimates[parity] = est
        rows.append(
            {"alpha": str(alpha), "parity": parity, "evaluator": args.evaluator,
             "samples": est.n_samples, "strict_fraction": est.strict_fraction,
             "nonneg_fraction": est.nonneg_fraction,
             "ci95_strict": est.ci95_strict, "ci95_nonneg": est.ci95_nonneg}
        )
    if len(parities) == 2:
        combined = sum(e.nonneg_fraction for e in estimates.values()) / 2
        rows.append(
            {"alpha": str(alpha), "parity": "combined", "evaluator": args.evaluator,
             "samples": args.samples, "strict_fraction": "",
             "nonneg_fraction": combined, "ci95_strict": "", "ci95_nonneg": ""}
        )
    _emit(_rows_to_text(rows, args.format), args.out)
    return 0


def _cmd_decompose(args) -> int:
    decomp = randmodel.decompose_rational(args.alpha, args.parity)
    rows = [
        {
            "coeff": format(complex(t.coeff), "g") if complex(t.coeff).imag else
            format(complex(t.coeff).real, "g"),
            "character": t.chi.name,
            "period": t.chi.period,
            "values": " ".join(
                format(complex(v), "g") if complex(v).imag else
                format(complex(v).real, "g")
                for v in t.chi.values
            ),
            "dilation": t.dilation,
        }
        for t in decomp.terms
    ]
    if not rows:
        rows = [{"coeff": 0, "character": "(empty)", "period": 1,
                 "values": "", "dilation": 1}]
    _emit(_rows_to_text(rows, args.format), args.out)
    return 0


def _cmd_moments(args) -> int:
    alpha = parse_alpha(args.alpha)
    spec = randmodel.CoefficientSpec(args.parity, alpha)
    coeffs = spec.coefficients(args.truncation)
    mc = randmodel.sample_series_matrix(
        coeffs[:, None], args.truncation, args.samples, args.seed
    )[:, 0]
    rows = []
    for k in args.k:
        direct = randmodel.moment_direct(coeffs, k, cutoff=args.cutoff)
        powers = mc**k
        mc_mean = float(powers.mean())
        mc_se = float(powers.std(ddof=1) / math.sqrt(args.samples))
        rows.append(
            {"alpha": str(alpha), "parity": args.parity, "k": k,
             "direct": direct, "mc": mc_mean, "mc_se": mc_se,
             "z": (mc_mean - direct) / mc_se if mc_se else 0.0}
        )
    _emit(_rows_to_text(rows, args.format), args.out)
    return 0


def _cmd_certify(args) -> int:
    alpha = parse_alpha(args.alpha)
    report = tails.certify_neighborhood(float(alpha), constants=args.constants)
    _emit(json.dumps(report.as_dict(), indent=2), args.out)
    return 0


def _cmd_constants(args) -> int:
    partial, tail, total = tails.sigma2_one_third(10**5)
    zr = tails.zeta_ratio_check(10**5)
    xi = randmodel.xi_statistics(10**5)
    d1 = tails.distance_bound(2 * math.pi, 1, 1)
    delta = 2e-6
    opt_m_printed = tails.optimize_u(tails.SIGMA2, tails.PRINTED[0] * delta ** (2 / 3))
    opt_p_printed = tails.optimize_u(tails.SIGMA2, tails.PRINTED[1] * delta ** (2 / 3))
    cert_p = tails.certify_neighborhood(1 / 3 + delta, constants="printed")
    cert_r = tails.certify_neighborhood(1 / 3 + delta, constants="recomputed")
    rows = [
        {"constant": "sigma2 (sign variance bound)", "recomputed": total, "printed": 0.395},
        {"constant": "zeta(4/3)^3/zeta(8/3) * 2^(4/3)", "recomputed": zr.scaled, "printed": 92.0},
        {"constant": "distance prefactor at L=2pi, C=1", "recomputed": d1, "printed": 313.3},
        {"constant": "minus-series prefactor", "recomputed": tails.RECOMPUTED[0], "printed": 94.0},
        {"constant": "plus-series prefactor", "recomputed": tails.RECOMPUTED[1], "printed": 282.0},
        {"constant": "D_minus at delta=2e-6", "recomputed": cert_r.d_minus, "printed": 0.015},
        {"constant": "D_plus at delta=2e-6", "recomputed": cert_r.d_plus, "printed": 0.0447},
        {"constant": "u_minus", "recomputed": opt_m_printed.u, "printed": 0.0756},
        {"constant": "u_plus", "recomputed": opt_p_printed.u, "printed": 0.12957},
        {"constant": "neg-probability bound (minus)", "recomputed": opt_m_printed.value, "printed": 0.32},
        {"constant": "neg-probability bound (plus)", "recomputed": opt_p_printed.value, "printed": 0.612},
        {"constant": "c_lower (printed prefactors)", "recomputed": cert_p.c_lower, "printed": 0.534},
        {"constant": "c_lower (recomputed prefactors)", "recomputed": cert_r.c_lower, "printed": 0.534},
        {"constant": "quintic angle variance", "recomputed": xi.variance, "printed": 0.35355},
        {"constant": "quintic reference angle phi", "recomputed": xi.phi, "printed": 0.553},
        {"constant": "quintic Chebyshev quotient", "recomputed": xi.chebyshev_bound, "printed": 1 / 3},
        {"constant": "conditional mean, alpha=1/8, X_2=-1",
         "recomputed": (math.sqrt(2) - 1) * math.pi**2 / 16,
         "printed": (math.sqrt(2) - 1) * math.pi**2 / 18},
        {"constant": "twist product, alpha=1/8 (odd-prime zeta(2))",
         "recomputed": math.pi**2 / 8, "printed": math.pi**2 / 9},
        {"constant": "twist product, alpha=1/5",
         "recomputed": 4 * math.pi**2 / 25, "printed": 4 * math.pi**2 / 25},
    ]
    _emit(_rows_to_text(rows, args.format), args.out)
    return 0


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="legsums",
        description="Legendre partial sums, positivity densities, and the "
        "random multiplicative model.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="also write the output to this path")

    p = sub.add_parser("density", help="scan partial-sum signs over the first N primes")
    p.add_argument("--alpha", required=True)
    p.add_argument("--primes", type=int, required=True)
    p.add_argument("--mode", choices=("ge", "gt"), default="ge")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.add_argument("--verify", type=int, default=None,
                   help="exit 1 unless the selected count equals this value")
    common(p)
    p.set_defaults(func=_cmd_density)

    p = sub.add_parser("dirichlet", help="half-length sum vs class-number formula")
    p.add_argument("--max-p", type=int, default=2000)
    p.add_argument("--all", action="store_true", help="print every prime's row")
    common(p)
    p.set_defaults(func=_cmd_dirichlet)

    p = sub.add_parser("fourier-check", help="truncated Fourier reconstruction error")
    p.add_argument("--alpha", required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--truncation", type=int, nargs="+", default=[1000, 100000])
    common(p)
    p.set_defaults(func=_cmd_fourier_check)

    p = sub.add_parser("simulate", help="Monte Carlo positivity estimates")
    p.add_argument("--alpha", required=True)
    p.add_argument("--parity", choices=("plus", "minus", "both"), default="both")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--truncation", type=int, default=100000)
    p.add_argument("--prime-cutoff", type=int, default=1000)
    p.add_argument("--evaluator", choices=("series", "euler"), default="euler")
    common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("decompose", help="periodic-character expansion of a_n")
    p.add_argument("--alpha", required=True)
    p.add_argument("--parity", choices=("plus", "minus"), required=True)
    common(p)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("moments", help="direct vs Monte Carlo moments")
    p.add_argument("--alpha", required=True)
    p.add_argument("--parity", choices=("plus", "minus"), required=True)
    p.add_argument("--k", type=int, nargs="+", default=[2, 3, 4])
    p.add_argument("--truncation", type=int, default=10000)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cutoff", type=int, default=300,
                   help="outer cutoff for the k=5,6 divisor enumeration")
    common(p)
    p.set_defaults(func=_cmd_moments)

    p = sub.add_parser("certify", help="positivity certificate near alpha=1/3")
    p.add_argument("--alpha", required=True)
    p.add_argument("--constants", choices=("printed", "recomputed"), default="printed")
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_certify)

    p = sub.add_parser("constants", help="recomputed vs printed constants")
    common(p)
    p.set_defaults(func=_cmd_constants)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
