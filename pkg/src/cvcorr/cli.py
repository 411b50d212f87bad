"""Command-line interface.

Exit codes: 0 success, 2 bad input or usage, 3 unphysical state or Mueller
matrix, 4 file-system error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

import numpy as np

from . import __version__
from .gaussian import GaussianState, PhysicalityError
from .io import RunManifest, dumps_json, emit, load_json
from .measures import correlation_report
from .polarimetry import (
    KinematicSensor,
    MuellerMatrix,
    UnphysicalMuellerError,
    apply_mueller,
    conventional_polarimetry,
    radial_probe,
    recover_mueller_single_shot,
)
from .protocols import DistributionConfig, run_bs_discord_entanglement, run_distribution
from .random_states import SamplerSpec, records_to_csv, scatter
from .vector_fields import (
    TDoFField,
    coherence_and_predictability,
    concurrence,
    entanglement_degree,
    polarization_degree,
    polarization_stokes,
    schmidt_weight,
    tdof_stokes,
    verify_entanglement_identity,
)

EXIT_OK, EXIT_INPUT, EXIT_PHYSICAL, EXIT_IO = 0, 2, 3, 4
DEFAULT_SWEEP = tuple(round(0.1 * k, 1) for k in range(1, 16))


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _csv(header_line: str, columns, rows) -> str:
    buf = io.StringIO()
    buf.write(header_line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"expected comma-separated numbers, got {text!r}") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


# -- commands ---------------------------------------------------------------


def cmd_measures(args) -> int:
    state = GaussianState.from_dict(load_json(args.inp))
    if state.n_modes != 2:
        raise ValueError("measures needs a two-mode state")
    report = correlation_report(state, n_max=args.nmax)
    manifest = RunManifest("measures", (args.inp,), {"nmax": args.nmax}, None, args.out)
    emit(dumps_json(report.to_dict(), manifest), args.out)
    return EXIT_OK


def cmd_scatter(args) -> int:
    spec = SamplerSpec(
        count=args.n, seed=args.seed, nu_max=args.nu_max, squeeze_max=args.squeeze_max, nu_power=args.nu_power, n_max=args.nmax
    )
    params = {"n": args.n, "nu_max": args.nu_max, "squeeze_max": args.squeeze_max, "nu_power": args.nu_power, "nmax": args.nmax}
    manifest = RunManifest("scatter", (), params, args.seed, args.out)
    if args.out not in (None, "-"):
        open(args.out, "w").close()  # fail fast on unwritable paths
    records = scatter(spec)
    emit(records_to_csv(records, (manifest.csv_header(),)), args.out)
    return EXIT_OK


def _distribution_rows(args, rs):
    for r in rs:
        tr = run_distribution(DistributionConfig(r, eta_b=args.eta, gain_min=args.gain_min, gain_max=args.gain_max))
        c_sep = all(s.cuts["C|AB"].separable for s in tr.stages)
        a_ent = not tr.stage("after_bs1").cuts["A|BC"].separable
        yield r, tr.g_opt, tr.duan_value, tr.gain_bracketed, c_sep, a_ent


def cmd_protocol(args) -> int:
    if args.protocol == "distribute":
        params = {"r": args.r, "eta": args.eta, "gain_min": args.gain_min, "gain_max": args.gain_max}
        if args.sweep is not None:
            rs = DEFAULT_SWEEP if args.sweep == "default" else _float_list(args.sweep)
            params["sweep"] = list(rs)
            manifest = RunManifest("protocol distribute", (), params, None, args.out)
            columns = ("r", "g_opt", "duan_value", "gain_bracketed", "C_separable_all_stages", "A_entangled_after_bs1")
            emit(_csv(manifest.csv_header(), columns, _distribution_rows(args, rs)), args.out)
            return EXIT_OK
        trace = run_distribution(DistributionConfig(args.r, eta_b=args.eta, gain_min=args.gain_min, gain_max=args.gain_max))
    else:
        params = {"nbar": args.nbar, "correlation": args.correlation}
        trace = run_bs_discord_entanglement(args.nbar, args.correlation)
    manifest = RunManifest(f"protocol {args.protocol}", (), params, None, args.out)
    emit(dumps_json(trace.to_dict(), manifest), args.out)
    return EXIT_OK


def cmd_polarimetry(args) -> int:
    if args.mode == "mueller":
        if args.inp is None:
            raise ValueError("polarimetry mueller needs --in")
        obj = MuellerMatrix.from_dict(load_json(args.inp))
        single = recover_mueller_single_shot(apply_mueller(radial_probe(), obj))
        conventional = conventional_polarimetry(obj)
        result = {
            "single_shot": single.m.tolist(),
            "conventional": conventional.m.tolist(),
            "max_error_vs_object": float(np.max(np.abs(single.m - obj.m))),
            "max_difference_single_vs_conventional": float(np.max(np.abs(single.m - conventional.m))),
        }
        inputs = [args.inp]
        if args.ref is not None:
            ref = MuellerMatrix.from_dict(load_json(args.ref))
            result["max_error_vs_reference"] = float(np.max(np.abs(single.m - ref.m)))
            inputs.append(args.ref)
        manifest = RunManifest("polarimetry mueller", tuple(inputs), {}, None, args.out)
        emit(dumps_json(result, manifest), args.out)
        return EXIT_OK
    x0s = _float_list(args.x0) if args.x0 is not None else [-1.0, -0.5, 0.0, 0.3, 1.0]
    sensor = KinematicSensor()
    rows = []
    for x0 in x0s:
        s, est = sensor.sense(x0)
        rows.append((x0, s.s0, s.s1, s.s2, s.s3, est))
    manifest = RunManifest("polarimetry kinematics", (), {"x0": x0s}, None, args.out)
    emit(_csv(manifest.csv_header(), ("x0", "S0", "S1", "S2", "S3", "x0_hat"), rows), args.out)
    return EXIT_OK


def cmd_field(args) -> int:
    field = TDoFField.from_dict(load_json(args.inp))
    gamma = field.normalized().coherence()
    result = {
        "entanglement_degree": entanglement_degree(gamma),
        "polarization_degree": polarization_degree(gamma),
        "schmidt_weight": schmidt_weight(field),
        "concurrence": concurrence(field),
        "polarization_stokes": polarization_stokes(gamma).as_array().tolist(),
        "tdof_stokes": tdof_stokes(gamma).tolist(),
    }
    try:
        mu, delta = coherence_and_predictability(gamma, "spatial")
        result["coherence_mu"] = [mu.real, mu.imag]
        result["predictability_delta"] = delta
    except ValueError:
        result["coherence_mu"] = None
        result["predictability_delta"] = None
    result["identity_residual"] = verify_entanglement_identity(gamma)
    manifest = RunManifest("field analyze", (args.inp,), {}, None, args.out)
    emit(dumps_json(result, manifest), args.out)
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cvcorr", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"cvcorr {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measures", help="correlation report for a two-mode state")
    m.add_argument("--in", dest="inp", required=True)
    m.add_argument("--out")
    m.add_argument("--nmax", type=_positive_int, help="photon-number cutoff for the MID (adaptive if omitted)")
    m.set_defaults(func=cmd_measures)

    s = sub.add_parser("scatter", help="measures of random two-mode states as CSV")
    s.add_argument("--n", type=_positive_int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.add_argument("--nmax", type=_positive_int)
    s.add_argument("--nu-max", type=float, default=5.0)
    s.add_argument("--squeeze-max", type=float, default=1.5)
    s.add_argument("--nu-power", type=float, default=3.0)
    s.set_defaults(func=cmd_scatter)

    pr = sub.add_parser("protocol", help="protocol simulations")
    pr.add_argument("protocol", choices=("distribute", "bs"))
    pr.add_argument("--r", type=float, default=0.5)
    pr.add_argument("--eta", type=float, default=0.5)
    pr.add_argument("--gain-min", type=float, default=0.0)
    pr.add_argument("--gain-max", type=float, default=3.0)
    pr.add_argument("--sweep", nargs="?", const="default", help="comma-separated r values (CSV output)")
    pr.add_argument("--nbar", type=float, default=2.0)
    pr.add_argument("--correlation", type=float, default=-1.0)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_protocol)

    po = sub.add_parser("polarimetry", help="Mueller recovery and knife-edge sensing")
    po.add_argument("mode", choices=("mueller", "kinematics"))
    po.add_argument("--in", dest="inp")
    po.add_argument("--ref")
    po.add_argument("--x0", help="comma-separated edge positions in waist units")
    po.add_argument("--out")
    po.set_defaults(func=cmd_polarimetry)

    f = sub.add_parser("field", help="two-DoF field analysis")
    f.add_argument("action", choices=("analyze",))
    f.add_argument("--in", dest="inp", required=True)
    f.add_argument("--out")
    f.set_defaults(func=cmd_field)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PhysicalityError, UnphysicalMuellerError) as exc:
        print(f"error: unphysical input: {exc} (min eigenvalue {exc.min_eigenvalue:.3e})", file=sys.stderr)
        return EXIT_PHYSICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
