"""Command-line entry point.

Every subcommand is a reproducible run: model in (built-in or JSON file),
CSV/PGM/SVG artifacts plus a manifest out.  Reruns with the same arguments
produce byte-identical files.

NHSKIN_THREADS caps BLAS worker threads; it must take effect before numpy
loads, which is why all numeric imports live inside the command handlers.
"""

from __future__ import annotations

import argparse
import os
import sys

from .errors import NHSkinError

_BUILTIN_PARAMS = {
    "hatano-nelson": ("jl", "jr"),
    "nh-ssh": ("t1", "t2", "gamma"),
    "asym2d": ("jl", "jr", "tp"),
}


def _apply_thread_cap() -> None:
    val = os.environ.get("NHSKIN_THREADS")
    if not val:
        return
    for var in (
        "OMP_NUM_THREADS",
        "OPENBLAS_NUM_THREADS",
        "MKL_NUM_THREADS",
        "NUMEXPR_NUM_THREADS",
    ):
        os.environ.setdefault(var, val)


def _add_model_args(sp: argparse.ArgumentParser) -> None:
    g = sp.add_argument_group("model source (exactly one of --model/--builtin)")
    g.add_argument("--model", metavar="FILE", help="JSON model file")
    g.add_argument("--builtin", choices=sorted(_BUILTIN_PARAMS), help="built-in model")
    g.add_argument("--jl", type=float, help="left-hopping amplitude J_L")
    g.add_argument("--jr", type=float, help="right-hopping amplitude J_R")
    g.add_argument("--t1", type=float, help="intra-cell hopping t1")
    g.add_argument("--t2", type=float, help="inter-cell hopping t2")
    g.add_argument("--gamma", type=float, help="non-reciprocal part gamma")
    g.add_argument("--tp", type=float, help="diagonal hopping t'")


def _add_run_args(sp: argparse.ArgumentParser, sizes_default=None) -> None:
    sp.add_argument(
        "-N",
        "--sizes",
        type=int,
        nargs="+",
        default=sizes_default,
        help="lattice size(s); meaning is per-command (see each command's help)",
    )
    sp.add_argument("--out", default="nhskin_out", help="output directory")
    sp.add_argument(
        "--format",
        default="csv,svg,pgm",
        help="comma-separated artifact formats to write",
    )
    sp.add_argument("--tol", type=float, default=None, help="override the command's tolerance")


def _resolve_model(args, parser: argparse.ArgumentParser):
    if bool(args.model) == bool(args.builtin):
        parser.error("exactly one of --model or --builtin is required")
    if args.model:
        from .model import load_model

        return load_model(args.model)
    from . import model as M

    name = args.builtin
    missing = [f"--{p}" for p in _BUILTIN_PARAMS[name] if getattr(args, p) is None]
    if missing:
        parser.error(f"--builtin {name} requires {', '.join(missing)}")
    if name == "hatano-nelson":
        return M.builtin_hatano_nelson(args.jl, args.jr)
    if name == "nh-ssh":
        return M.builtin_nh_ssh(args.t1, args.t2, args.gamma)
    return M.builtin_2d(args.jl, args.jr, args.tp)


def _formats(args) -> set:
    return {f.strip() for f in args.format.split(",") if f.strip()}


def _prepare_outdir(args) -> str:
    os.makedirs(args.out, exist_ok=True)
    return args.out


def _write_run_manifest(args) -> None:
    from .io import write_manifest

    config = {
        k: v
        for k, v in vars(args).items()
        if k != "func" and (v is None or isinstance(v, (bool, int, float, str, list)))
    }
    write_manifest(args.out, {"command": args.command, "config": config})


# ------------------------------------------------------------------ commands


def _cmd_spectrum(args, parser) -> int:
    import numpy as np

    from .io import write_csv, write_svg_scatter
    from .realspace import build
    from .spectral import eig_biorthogonal, export_spectrum_csv

    model = _resolve_model(args, parser)
    if model.dimension != 1:
        raise ValueError("spectrum expects a 1D model")
    from .model import bloch_samples

    N = (args.sizes or [100])[0]
    ks = np.linspace(0.0, 2 * np.pi, args.k_samples, endpoint=False)
    bands = np.sort(np.linalg.eigvals(bloch_samples(model, ks)), axis=1)
    system = eig_biorthogonal(build(model, [N], "obc"))

    outdir = _prepare_outdir(args)
    fmts = _formats(args)
    if "csv" in fmts:
        header = ["k"]
        for b in range(bands.shape[1]):
            header += [f"re_e{b}", f"im_e{b}"]
        rows = (
            [float(k)] + [f(bands[i, b]) for b in range(bands.shape[1]) for f in (lambda z: float(z.real), lambda z: float(z.imag))]
            for i, k in enumerate(ks)
        )
        write_csv(os.path.join(outdir, "pbc_bands.csv"), header, rows)
        export_spectrum_csv(os.path.join(outdir, "obc_spectrum.csv"), system)
    if "svg" in fmts:
        write_svg_scatter(
            os.path.join(outdir, "spectrum.svg"),
            [
                (bands.real.ravel(), bands.imag.ravel(), "steelblue", "PBC"),
                (system.eigenvalues.real, system.eigenvalues.imag, "crimson", "OBC"),
            ],
            title=f"{model.name or 'model'}: PBC vs OBC spectrum",
        )
    _write_run_manifest(args)
    print(
        f"pbc: {bands.shape[1]} band(s) x {len(ks)} k-points; "
        f"obc: {len(system.eigenvalues)} eigenvalues, "
        f"max |Im E| = {np.abs(system.eigenvalues.imag).max():.3e}"
    )
    return 0


def _cmd_winding(args, parser) -> int:
    from .io import parse_complex, write_csv
    from .topology import predict_skin_side, winding_map, winding_number

    model = _resolve_model(args, parser)
    base = parse_complex(args.base)
    res = winding_number(model, base, gap_tol=args.tol if args.tol else 1e-6)
    outdir = _prepare_outdir(args)
    if "csv" in _formats(args):
        write_csv(
            os.path.join(outdir, "winding.csv"),
            ["re_base", "im_base", "w", "re_raw", "im_raw", "k_samples"],
            [
                (
                    base.real,
                    base.imag,
                    res.w,
                    float(res.raw_integral.real),
                    float(res.raw_integral.imag),
                    res.k_samples_used,
                )
            ],
        )
        if args.grid:
            rows = winding_map(
                model,
                (args.window[0], args.window[1]),
                (args.window[2], args.window[3]),
                resolution=args.grid,
                gap_tol=args.tol if args.tol else 1e-6,
            )
            write_csv(os.path.join(outdir, "winding_map.csv"), ["re_base", "im_base", "w"], rows)
    _write_run_manifest(args)
    print(f"w = {res.w}")
    side = predict_skin_side(res)
    print(f"skin side: {side if side else 'none'}")
    return 0


def _cmd_gbz(args, parser) -> int:
    import numpy as np

    from .io import write_svg_scatter
    from .nonbloch import export_gbz_csv, gbz_curve

    model = _resolve_model(args, parser)
    samples = gbz_curve(
        model,
        N_seed=(args.sizes or [400])[0],
        gbz_tol=args.tol if args.tol else 1e-6,
    )
    outdir = _prepare_outdir(args)
    fmts = _formats(args)
    if "csv" in fmts:
        export_gbz_csv(os.path.join(outdir, "gbz.csv"), samples)
    if "svg" in fmts:
        groups = []
        for side, color in (("left", "seagreen"), ("right", "crimson"), ("bloch", "steelblue")):
            pts = [s.beta for s in samples if s.side == side]
            groups.append(
                ([z.real for z in pts], [z.imag for z in pts], color, f"{side} ({len(pts)})")
            )
        write_svg_scatter(
            os.path.join(outdir, "gbz.svg"),
            groups,
            title=f"{model.name or 'model'}: generalized Brillouin zone",
            xlabel="Re beta",
            ylabel="Im beta",
        )
    _write_run_manifest(args)
    mods = np.array([abs(s.beta) for s in samples])
    print(
        f"samples: {len(samples)}; |beta| in [{mods.min():.6f}, {mods.max():.6f}]; "
        f"max | |beta| - 1 | = {np.abs(mods - 1).max():.3e}"
    )
    return 0


def _cmd_amoeba(args, parser) -> int:
    from .io import parse_complex, write_svg_heatmap
    from .nonbloch import amoeba_points, export_raster_csv, export_raster_pgm, has_hole

    model = _resolve_model(args, parser)
    E = parse_complex(args.energy)
    window = ((args.window[0], args.window[1]), (args.window[2], args.window[3]))
    raster = amoeba_points(
        model,
        E,
        r_x_samples=args.resolution,
        phase_samples=args.phases,
        window=window,
    )
    hole = has_hole(raster, min_hole_cells=args.min_hole_cells)
    outdir = _prepare_outdir(args)
    fmts = _formats(args)
    if "pgm" in fmts:
        export_raster_pgm(raster, os.path.join(outdir, "amoeba.pgm"))
    if "csv" in fmts:
        export_raster_csv(raster, os.path.join(outdir, "amoeba_points.csv"))
    if "svg" in fmts:
        write_svg_heatmap(
            os.path.join(outdir, "amoeba.svg"),
            raster.occupancy.T[::-1].astype(float),
            title=f"amoeba at E = {args.energy}",
        )
    _write_run_manifest(args)
    print(f"hole: {'true' if hole else 'false'}")
    return 0


def _cmd_localize(args, parser) -> int:
    from collections import Counter

    from .io import write_csv, write_svg_scatter
    from .localization import classify_spectrum, density_profile
    from .realspace import build
    from .spectral import eig_biorthogonal

    model = _resolve_model(args, parser)
    if model.dimension != 1:
        raise ValueError("localize expects a 1D model")
    N = (args.sizes or [40])[0]
    op = build(model, [N], "obc")
    system = eig_biorthogonal(op)
    classes = classify_spectrum(system, op)

    outdir = _prepare_outdir(args)
    fmts = _formats(args)
    if "csv" in fmts:
        write_csv(
            os.path.join(outdir, "states.csv"),
            ["index", "re_e", "im_e", "label", "side", "edge_fraction", "pr_scaled"],
            (
                (
                    i,
                    float(system.eigenvalues[i].real),
                    float(system.eigenvalues[i].imag),
                    c.label,
                    c.side or "",
                    c.metrics["right_edge_fraction"],
                    c.metrics["biorthogonal_participation_ratio_scaled"],
                )
                for i, c in enumerate(classes)
            ),
        )
        profiles = [density_profile(system.right[:, i], op.index_map) for i in range(op.n)]
        from .localization import export_profiles_csv

        export_profiles_csv(
            os.path.join(outdir, "profiles.csv"),
            profiles,
            labels=[c.label for c in classes],
        )
    if "svg" in fmts:
        colors = {"skin": "crimson", "topological_boundary": "goldenrod", "bulk": "steelblue"}
        groups = []
        for label, color in colors.items():
            idx = [i for i, c in enumerate(classes) if c.label == label]
            groups.append(
                (
                    [float(system.eigenvalues[i].real) for i in idx],
                    [float(system.eigenvalues[i].imag) for i in idx],
                    color,
                    f"{label} ({len(idx)})",
                )
            )
        write_svg_scatter(
            os.path.join(outdir, "localize.svg"),
            groups,
            title=f"{model.name or 'model'}: state classification",
        )
    _write_run_manifest(args)
    counts = Counter((c.label, c.side) for c in classes)
    summary = ", ".join(
        f"{label}{'/' + side if side else ''}: {n}" for (label, side), n in sorted(counts.items())
    )
    print(summary)
    return 0


def _cmd_funnel(args, parser) -> int:
    import numpy as np

    from .io import write_csv, write_svg_heatmap
    from .response import funnel_model, time_evolve

    op = funnel_model(args.jl, args.jr, args.half)
    if not (0 <= args.site < op.n):
        raise ValueError(f"--site must lie in [0, {op.n - 1}]")
    psi0 = np.zeros(op.n, dtype=complex)
    psi0[args.site] = 1.0
    traj = time_evolve(op, psi0, args.tmax, args.dt)

    outdir = _prepare_outdir(args)
    fmts = _formats(args)
    if "csv" in fmts:
        write_csv(
            os.path.join(outdir, "trajectory.csv"),
            ["t", "site", "density"],
            (
                (float(traj.times[k]), s, float(traj.densities[k, s]))
                for k in range(len(traj.times))
                for s in range(op.n)
            ),
        )
    if "svg" in fmts:
        write_svg_heatmap(
            os.path.join(outdir, "funnel.svg"),
            traj.densities,
            title=f"funnel |psi|^2 (t down, site across), J_L={args.jl}, J_R={args.jr}",
        )
    _write_run_manifest(args)
    center = args.half - 0.5  # interface sits between sites half-1 and half
    near = np.abs(np.arange(op.n) - center) <= 5
    mass = float(traj.densities[-1, near].sum())
    print(f"final density within 5 sites of the interface: {mass:.4f}")
    return 0


def _cmd_sensor(args, parser) -> int:
    import numpy as np

    from .io import parse_complex, write_csv
    from .response import sensor_sweep

    model = _resolve_model(args, parser)
    sizes = args.sizes or [10, 14, 18, 22]
    rows = sensor_sweep(model, args.epsilon, sizes, target=parse_complex(args.target))
    outdir = _prepare_outdir(args)
    if "csv" in _formats(args):
        write_csv(
            os.path.join(outdir, "sensor.csv"),
            ["N", "delta_e"],
            ((r["N"], r["delta_E"]) for r in rows),
        )
    _write_run_manifest(args)
    ns = np.array([r["N"] for r in rows], dtype=float)
    des = np.array([max(r["delta_E"], 1e-300) for r in rows])
    if len(ns) >= 2:
        slope = float(np.polyfit(ns, np.log(des), 1)[0])
        print(f"slope of ln|dE| vs N: {slope:+.6f}")
    for r in rows:
        print(f"N={r['N']}: |dE| = {r['delta_E']:.6e}")
    return 0


def _cmd_crossover(args, parser) -> int:
    import numpy as np

    from .io import write_csv
    from .response import boundary_crossover

    model = _resolve_model(args, parser)
    N = (args.sizes or [40])[0]
    epsilons = np.logspace(
        np.log10(args.eps_min), np.log10(args.eps_max), args.eps_count
    )
    rows = boundary_crossover(model, N, epsilons)
    outdir = _prepare_outdir(args)
    if "csv" in _formats(args):
        write_csv(
            os.path.join(outdir, "crossover.csv"),
            ["epsilon", "distance", "max_imag"],
            ((r["epsilon"], r["distance"], r["max_imag"]) for r in rows),
        )
    _write_run_manifest(args)
    final = rows[-1]["distance"]
    eps_star = next((r["epsilon"] for r in rows if r["distance"] >= 0.5 * final), None)
    print(f"distance at eps={rows[-1]['epsilon']:.3e}: {final:.6f}")
    if eps_star is not None:
        print(f"half-distance crossover eps* = {eps_star:.6e}")
    return 0


def _cmd_reciprocity(args, parser) -> int:
    from .io import parse_complex, write_csv
    from .realspace import build
    from .response import reciprocity_test

    model = _resolve_model(args, parser)
    if model.dimension != 1:
        raise ValueError("reciprocity expects a 1D model")
    N = (args.sizes or [20])[0]
    op = build(model, [N], "obc")
    omegas = [parse_complex(w) for w in args.omegas]
    rows = reciprocity_test(op, omegas, tol=args.tol if args.tol else 1e-10)
    outdir = _prepare_outdir(args)
    if "csv" in _formats(args):
        write_csv(
            os.path.join(outdir, "reciprocity.csv"),
            ["re_omega", "im_omega", "asymmetry", "reciprocal"],
            (
                (r["omega"].real, r["omega"].imag, r["asymmetry"], r["reciprocal"])
                for r in rows
            ),
        )
    _write_run_manifest(args)
    worst = max(r["asymmetry"] for r in rows)
    verdict = all(r["reciprocal"] for r in rows)
    print(f"reciprocal: {'true' if verdict else 'false'} (max asymmetry {worst:.3e})")
    return 0


# -------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nhskin",
        description="Non-Hermitian skin-effect analysis: spectra, winding numbers, "
        "generalized Brillouin zones, amoebas, and response experiments.",
    )
    sub = p.add_subparsers(dest="command", required=True, metavar="command")

    sp = sub.add_parser("spectrum", help="PBC bands vs OBC spectrum")
    _add_model_args(sp)
    _add_run_args(sp, sizes_default=None)
    sp.add_argument("--k-samples", type=int, default=512, help="Bloch sampling resolution")
    sp.set_defaults(func=_cmd_spectrum)

    sp = sub.add_parser("winding", help="spectral winding number around a base energy")
    _add_model_args(sp)
    _add_run_args(sp)
    sp.add_argument("--base", default="0+0i", help="base energy, a+bi literal")
    sp.add_argument("--grid", type=int, default=0, help="also map w on an n x n base grid")
    sp.add_argument(
        "--window",
        type=float,
        nargs=4,
        default=[-2.0, 2.0, -2.0, 2.0],
        metavar=("RE_MIN", "RE_MAX", "IM_MIN", "IM_MAX"),
        help="base-energy window for --grid",
    )
    sp.set_defaults(func=_cmd_winding)

    sp = sub.add_parser("gbz", help="generalized Brillouin zone curve")
    _add_model_args(sp)
    _add_run_args(sp)
    sp.set_defaults(func=_cmd_gbz)

    sp = sub.add_parser("amoeba", help="amoeba raster and hole verdict at one energy")
    _add_model_args(sp)
    _add_run_args(sp)
    sp.add_argument("--energy", required=True, help="test energy, a+bi literal")
    sp.add_argument("--resolution", type=int, default=300, help="raster cells per axis")
    sp.add_argument("--phases", type=int, default=600, help="phase samples per column")
    sp.add_argument(
        "--window",
        type=float,
        nargs=4,
        default=[-3.0, 3.0, -3.0, 3.0],
        metavar=("X_MIN", "X_MAX", "Y_MIN", "Y_MAX"),
        help="log-modulus window",
    )
    sp.add_argument("--min-hole-cells", type=int, default=4, help="smallest hole that counts")
    sp.set_defaults(func=_cmd_amoeba)

    sp = sub.add_parser("localize", help="classify eigenstates: skin / topological / bulk")
    _add_model_args(sp)
    _add_run_args(sp)
    sp.set_defaults(func=_cmd_localize)

    sp = sub.add_parser("funnel", help="wave-packet evolution on a two-half funnel chain")
    _add_run_args(sp)
    sp.add_argument("--jl", type=float, default=0.5, help="left-half forward hopping")
    sp.add_argument("--jr", type=float, default=1.0, help="left-half backward hopping")
    sp.add_argument("--half", type=int, default=30, help="sites per half")
    sp.add_argument("--site", type=int, default=5, help="initial delta-pulse site")
    sp.add_argument("--tmax", type=float, default=40.0, help="total evolution time")
    sp.add_argument("--dt", type=float, default=0.05, help="time step")
    sp.set_defaults(func=_cmd_funnel)

    sp = sub.add_parser("sensor", help="boundary-coupling eigenvalue shift vs size")
    _add_model_args(sp)
    _add_run_args(sp)
    sp.add_argument("--epsilon", type=float, default=1e-4, help="boundary coupling")
    sp.add_argument("--target", default="0+0i", help="tracked reference energy, a+bi literal")
    sp.set_defaults(func=_cmd_sensor)

    sp = sub.add_parser("crossover", help="OBC-to-PBC spectral migration vs coupling")
    _add_model_args(sp)
    _add_run_args(sp)
    sp.add_argument("--eps-min", type=float, default=1e-16, help="smallest coupling")
    sp.add_argument("--eps-max", type=float, default=1.0, help="largest coupling")
    sp.add_argument("--eps-count", type=int, default=25, help="number of log-spaced couplings")
    sp.set_defaults(func=_cmd_crossover)

    sp = sub.add_parser("reciprocity", help="susceptibility symmetry test |chi| vs |chi|^T")
    _add_model_args(sp)
    _add_run_args(sp)
    sp.add_argument(
        "--omegas",
        nargs="+",
        default=["3", "2+1i"],
        help="probe frequencies, a+bi literals",
    )
    sp.set_defaults(func=_cmd_reciprocity)

    return p


def main(argv=None) -> int:
    _apply_thread_cap()
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, parser)
    except (NHSkinError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
