"""Command-line front end: parameter sweeps, bound tables, oracle verification,
simulated experiment runs, and an invariant suite.  All CSV output starts with
'#'-prefixed header comments echoing the resolved configuration; identical
configurations produce byte-identical files.

Exit codes: 0 success, 1 invariant failure, 2 usage error.
"""

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import __version__, bound, measures, states, tomo
from .bound import LN2SQRT3, TWO_LN2

DEFAULT_THETAS = ("0", "1/16", "1/8", "3/16", "1/4", "9/32", "11/32", "3/8",
                  "13/32", "7/16", "15/32", "1/2")


def parse_theta(text):
    """Angle as a multiple of pi, given as a fraction ('9/32') or decimal."""
    frac = Fraction(text)
    theta = float(frac) * np.pi
    if not 0.0 <= theta <= np.pi / 2 + 1e-12:
        raise argparse.ArgumentTypeError(f"theta {text} outside [0, pi/2]")
    return text, theta


def fmt(x):
    return format(float(x), ".17g")


def build_parser():
    p = argparse.ArgumentParser(
        prog="qtradeoff",
        description="Monogamy tradeoff between internal concurrence and external "
        "mutual information: sweeps, bound tables, oracle checks, and a "
        "simulated tomography experiment.",
    )
    p.add_argument("--command", required=True,
                   choices=["sweep", "bound", "oracle", "experiment", "verify"])
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--shots", type=int, default=10000)
    p.add_argument("--theta", action="append", type=parse_theta, default=None,
                   help="angle as a multiple of pi, e.g. 9/32; repeatable")
    p.add_argument("--p-step", type=float, default=0.02)
    p.add_argument("--q-step", type=float, default=0.02)
    p.add_argument("--resolution", type=int, default=200)
    p.add_argument("--visibility", type=float, default=1.0)
    p.add_argument("--depolarizing", type=float, default=0.0)
    p.add_argument("--bootstrap", type=int, default=200)
    p.add_argument("--exact", action="store_true", help="infinite-shot mode")
    p.add_argument("--oracle", action="store_true", help="add oracle column to bound table")
    return p


def config_header(args):
    skip = {"out"}
    lines = [f"# version={__version__}", f"# command={args.command}"]
    for key in sorted(vars(args)):
        if key in ("command",) or key in skip:
            continue
        val = getattr(args, key)
        if key == "theta":
            val = ",".join(t for t, _ in val) if val else ",".join(DEFAULT_THETAS)
        lines.append(f"# {key}={val}")
    return lines


def emit(args, lines):
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_sweep(args):
    if args.p_step <= 0 or args.q_step <= 0:
        raise ValueError("steps must be positive")
    lines = config_header(args)
    lines.append("family,p,q,I,E,zeta_of_I,margin")
    rows = []
    ps = np.arange(0.0, 1.0 + 1e-12, args.p_step)
    qs = np.arange(0.0, 1.0 + 1e-12, args.q_step)
    for p in ps:
        for q in qs:
            rows.append(("grid", p, q))
    for p in np.arange(0.0, 0.5 + 1e-12, args.p_step):
        rows.append(("red_line", p, 1.0 - p))
    worst = np.inf
    for family, p, q in rows:
        i_val = measures.closed_form_I(p, q)
        e_val = measures.closed_form_E(p, q)
        z = bound.zeta(min(i_val, TWO_LN2))
        margin = z - e_val
        worst = min(worst, margin)
        lines.append(
            f"{family},{fmt(p)},{fmt(q)},{fmt(i_val)},{fmt(e_val)},{fmt(z)},{fmt(margin)}"
        )
    emit(args, lines)
    return 0 if worst >= -1e-9 else 1


def cmd_bound(args):
    if args.resolution < 2:
        raise ValueError("resolution must be at least 2")
    lines = config_header(args)
    cs = np.linspace(0.0, TWO_LN2, args.resolution)
    if args.oracle:
        lines.append("c,zeta_closed,zeta_oracle")
        for c in cs:
            lines.append(f"{fmt(c)},{fmt(bound.zeta(c))},{fmt(bound.oracle_zeta(c))}")
    else:
        lines.append("c,zeta_closed")
        for c in cs:
            lines.append(f"{fmt(c)},{fmt(bound.zeta(c))}")
    emit(args, lines)
    return 0


def cmd_oracle(args):
    lines = config_header(args)
    lines.append("c,zeta_closed,zeta_oracle,abs_diff")
    cs = np.linspace(0.0, TWO_LN2, 50)
    worst = 0.0
    for c in cs:
        z = bound.zeta(c)
        o = bound.oracle_zeta(c, resolution=args.resolution, band=0.01)
        worst = max(worst, abs(z - o))
        lines.append(f"{fmt(c)},{fmt(z)},{fmt(o)},{fmt(abs(z - o))}")
    lines.append(f"# max_abs_diff={fmt(worst)}")
    emit(args, lines)
    return 0 if worst <= 0.02 else 1


def cmd_experiment(args):
    thetas = args.theta if args.theta else [parse_theta(t) for t in DEFAULT_THETAS]
    noise = tomo.NoiseParams(args.visibility, args.depolarizing)
    lines = config_header(args)
    lines.append("theta,p,I_hat,E_hat,I_err,E_err,fidelity")
    for label, theta in thetas:
        run = tomo.run_experiment(theta, shots=args.shots, seed=args.seed,
                                  noise=noise, exact=args.exact)
        if args.exact or args.bootstrap <= 0:
            i_err = e_err = 0.0
        else:
            boot = tomo.bootstrap_measures(run.records, args.bootstrap, args.seed)
            i_err, e_err = boot.i_err, boot.e_err
        m = run.result.measures
        lines.append(
            f"{label},{fmt(run.params.p)},{fmt(m.mutual_information)},"
            f"{fmt(m.concurrence)},{fmt(i_err)},{fmt(e_err)},"
            f"{fmt(run.result.fidelity_to_target)}"
        )
    emit(args, lines)
    return 0


def invariant_suite(seed=0):
    """Named invariant checks; each entry is (name, ok, detail)."""
    checks = []

    def add(name, ok, detail=""):
        checks.append((name, bool(ok), detail))

    z0 = bound.zeta(0.0)
    add("zeta_at_zero", abs(z0 - 1.0) <= 1e-9, f"zeta(0)={z0!r}")
    tail = np.asarray(bound.zeta(np.linspace(LN2SQRT3, TWO_LN2, 100)))
    add("zeta_vanishing_tail", np.max(np.abs(tail)) <= 1e-9, f"max={np.max(np.abs(tail))!r}")
    es = np.linspace(0.0, 1.0, 1000)
    zi = np.asarray(bound.zeta_inv(es))
    add("zeta_inv_strictly_decreasing", np.all(np.diff(zi) < 0))
    rt = np.asarray(bound.zeta(np.clip(zi, 0.0, TWO_LN2)))
    add("zeta_roundtrip", np.max(np.abs(rt - es)) <= 1e-9, f"max={np.max(np.abs(rt - es))!r}")

    ps = np.arange(0.0, 0.5 + 1e-12, 0.01)
    pts = [(measures.closed_form_I(p, 1 - p), measures.closed_form_E(p, 1 - p)) for p in ps]
    verdicts = bound.region_check(pts)
    add("red_curve_contained", all(v.inside_separable_region for v in verdicts),
        f"worst margin={min(v.margin for v in verdicts)!r}")

    rng = np.random.default_rng(seed)
    pq = rng.random((100, 2))
    pts = [(measures.closed_form_I(p, q), measures.closed_form_E(p, q)) for p, q in pq]
    verdicts = bound.region_check(pts)
    add("two_parameter_family_contained", all(v.inside_separable_region for v in verdicts))

    for name, ok in bound.validate_bound_curve(bound.closed_form_curve(200)):
        add(name, ok)

    devs = [abs(bound.zeta(c) - bound.oracle_zeta(c, 150, 0.01))
            for c in np.linspace(0.0, TWO_LN2, 8)]
    add("oracle_matches_closed_form", max(devs) <= 0.03, f"max dev={max(devs)!r}")

    probs = np.full(16, 1.0 / 16)
    c1 = tomo.sample_counts(probs, 1000, (seed, 0))
    c2 = tomo.sample_counts(probs, 1000, (seed, 0))
    add("sampling_deterministic", np.array_equal(c1, c2))

    ok = True
    for p in rng.random(5):
        theta = float(np.arccos(np.sqrt(p)))
        tb = states.timebin_mix(states.dephase(states.spdc_state(theta)), p)
        cc = states.cc_family(p, 1.0 - p)
        ok = ok and np.max(np.abs(tb.mat - cc.mat)) <= 1e-12
    add("timebin_matches_cc_family", ok)
    return checks


def cmd_verify(args):
    checks = invariant_suite(args.seed)
    lines = config_header(args)
    lines.append("invariant,status,detail")
    failed = 0
    for name, ok, detail in checks:
        status = "pass" if ok else "FAIL"
        if not ok:
            failed += 1
        lines.append(f"{name},{status},{detail}")
        print(f"[{status}] {name}" + (f"  ({detail})" if detail else ""))
    if args.out:
        emit(args, lines)
    print(f"{len(checks) - failed}/{len(checks)} invariants passed")
    return 0 if failed == 0 else 1


def main(argv=None):
    args = build_parser().parse_args(argv)
    handlers = {
        "sweep": cmd_sweep,
        "bound": cmd_bound,
        "oracle": cmd_oracle,
        "experiment": cmd_experiment,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
