"""Command-line front door.

Subcommands: spectrum, sweep, phase-study, winding, freqspace, stark,
deform-check, quench.  Each reads a model file (JSON), writes a CSV
table or JSON report, and renders a matplotlib figure next to the
output (suppress with --no-plot).  Exit codes: 0 success, 2
configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import deformation, evolution, freqspace, plotting, topology
from .diagnostics import localization_factor, write_csv, write_json
from .errors import ConfigError, NumericalError
from .linalg import is_hermitian, quasienergies
from .models import (BipartiteChainSpec, StarkChainSpec, StepQuenchSpec,
                     hermitian_counterpart_params, load_model)


def _parse_grid(text: str) -> np.ndarray:
    try:
        a, b, n = text.split(":")
        return np.linspace(float(a), float(b), int(n))
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}; expected A:B:N") from exc


def _out_path(args, default: str) -> Path:
    return Path(args.out) if args.out else Path(default)


def _maybe_plot(args, fig_builder, out: Path):
    if args.no_plot:
        return
    fig = fig_builder()
    plotting.save_figure(fig, out.with_suffix(".png"))


def _emit(args, out: Path, columns, rows, scalars=None):
    if args.format == "json":
        doc = {"columns": list(columns), "rows": [list(map(_jsonable, r)) for r in rows]}
        doc.update(scalars or {})
        write_json(out, doc)
    else:
        write_csv(out, columns, rows)


def _jsonable(x):
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    return x


def _override_model(model, args):
    if getattr(args, "omega", None) is not None:
        if not isinstance(model, BipartiteChainSpec):
            raise ConfigError("--omega applies to bipartite_chain models")
        model = replace(model, drive=replace(model.drive, omega=args.omega))
    if getattr(args, "mu0", None) is not None:
        if not isinstance(model, BipartiteChainSpec):
            raise ConfigError("--mu0 applies to bipartite_chain models")
        model = replace(model, mu0=args.mu0)
    return model


def cmd_spectrum(args) -> int:
    model = _override_model(load_model(args.model), args)
    spec = evolution.floquet_spectrum(model, slices=args.slices)
    loc = localization_factor(spec.states).factors
    out = _out_path(args, "spectrum.csv" if args.format == "csv" else "spectrum.json")
    rows = [(j, e.real, e.imag, loc[j]) for j, e in enumerate(spec.quasienergies)]
    _emit(args, out, ["index", "re_eps", "im_eps", "loc_factor"], rows)
    _maybe_plot(args, lambda: plotting.spectrum_figure(spec, loc), out)
    return 0


def cmd_sweep(args) -> int:
    model = _override_model(load_model(args.model), args)
    grid = _parse_grid(args.mu0_grid)
    rows = evolution.obc_sweep(model, grid, slices=args.slices)
    out = _out_path(args, "sweep.csv" if args.format == "csv" else "sweep.json")
    table = []
    for row in rows:
        for j, e in enumerate(row.spectrum.quasienergies):
            table.append((row.mu0, j, e.real, e.imag, row.localization[j], bool(row.edge_modes[j])))
    _emit(args, out, ["mu0", "index", "re_eps", "im_eps", "loc_factor", "edge_mode"], table)
    _maybe_plot(args, lambda: plotting.sweep_figure(rows), out)
    return 0


def cmd_phase_study(args) -> int:
    model = _override_model(load_model(args.model), args)
    phis = _parse_grid(args.phi_grid)
    rows = evolution.starting_point_study(model, phis, slices=args.slices)
    out = _out_path(args, "phase_study.csv" if args.format == "csv" else "phase_study.json")
    table = []
    for row in rows:
        for j, e in enumerate(row.spectrum.quasienergies):
            table.append((row.phi, j, e.real, e.imag, row.localization[j]))
    _emit(args, out, ["phi", "index", "re_eps", "im_eps", "loc_factor"], table)
    _maybe_plot(args, lambda: plotting.phase_study_figure(rows), out)
    return 0


def cmd_winding(args) -> int:
    model = _override_model(load_model(args.model), args)
    if not isinstance(model, BipartiteChainSpec):
        raise ConfigError("winding expects a bipartite_chain model")
    report = topology.winding_numbers(model, Nk=args.nk, slices=args.slices)
    out = _out_path(args, "winding.json")
    write_json(out, {
        "W1": report.W1, "W2": report.W2,
        "nu0": report.nu0, "nu_pi": report.nu_pi,
        "k_points": report.k_points,
        "phase_accumulations": list(report.phase_accumulations),
        "upper_right_windings": list(report.upper_right_windings),
        "entries_consistent": report.entries_consistent,
    })
    if not args.no_plot:
        _, q1, q2, _, _ = topology.chiral_couplings(model, args.nk, slices=args.slices)
        plotting.save_figure(plotting.winding_figure(q1, q2), out.with_suffix(".png"))
    return 0


def cmd_freqspace(args) -> int:
    model = _override_model(load_model(args.model), args)
    if not isinstance(model, BipartiteChainSpec):
        raise ConfigError("freqspace expects a bipartite_chain model")
    M = args.cutoff
    ks = np.linspace(0, 2 * np.pi, args.nk, endpoint=False)
    hsets = freqspace.harmonics_bloch(model, ks, P=2 * M)
    table, eig_per_k, int_per_k = [], [], []
    herm0 = 0.0
    ratio = 0.0
    for k, h in zip(ks, hsets):
        ss = freqspace.sambe_spectrum(freqspace.sambe_build(h, M))
        herm0 = max(herm0, freqspace.hermitization_residual(h, 0.0))
        ratio = max(ratio, freqspace.coupling_to_frequency_ratio(h))
        eig_per_k.append(ss.eigenvalues)
        int_per_k.append(ss.interior)
        for j, e in enumerate(ss.eigenvalues):
            table.append((k, j, e.real, e.imag, int(ss.m_peak[j]), bool(ss.interior[j])))
    out = _out_path(args, "freqspace.csv" if args.format == "csv" else "freqspace.json")
    _emit(args, out, ["k", "index", "re_eps", "im_eps", "m_peak", "interior"], table,
          scalars={"hermitization_residual_eta0": herm0,
                   "coupling_to_frequency_ratio": ratio})
    _maybe_plot(args, lambda: plotting.freqspace_figure(ks, eig_per_k, int_per_k), out)
    return 0


def cmd_stark(args) -> int:
    model = load_model(args.model)
    if not isinstance(model, StarkChainSpec):
        raise ConfigError("stark expects a stark_chain model")
    study = freqspace.stark_chain_study(model)
    out = _out_path(args, "stark.csv" if args.format == "csv" else "stark.json")
    rows = [(j, e.real, e.imag, int(study.populations[j].argmax() + 1), study.populations[j].max())
            for j, e in enumerate(study.eigenvalues)]
    _emit(args, out, ["index", "re_E", "im_E", "argmax_site", "peak_population"], rows,
          scalars={"gauge_residual": study.gauge_residual,
                   "ladder_spacing_estimate": study.ladder_spacing_estimate})
    _maybe_plot(args, lambda: plotting.stark_figure(study), out)
    return 0


def cmd_deform_check(args) -> int:
    model = _override_model(load_model(args.model), args)
    if not isinstance(model, BipartiteChainSpec):
        raise ConfigError("deform-check expects a bipartite_chain model")
    om = model.drive.omega
    if args.deformation == "full":
        if model.variant != "non_hermitian":
            raise ConfigError("full deformation applies to the non_hermitian variant")
        *_, beta = hermitian_counterpart_params(model.r1, model.r2, model.v, model.q1, model.q2)
        gamma = deformation.bipartite_full_deformation(model.L, om, beta)
    else:
        gamma = deformation.bipartite_temporal_deformation(model.L, om)
    times = (np.arange(args.times) + 0.5) * model.period / args.times
    per_time = [deformation.pseudo_hermiticity_residual(model, gamma, [t]).residual_norm
                for t in times]
    res = float(max(per_time))
    transformed = deformation.transform_model(model, gamma)
    hermitian_after = all(is_hermitian(transformed.sample(t)) for t in times)
    shift = deformation.generalized_shift(gamma, model.period)
    out = _out_path(args, "deform_check.json")
    write_json(out, {
        "residual_norm": res,
        "hermitian_transformed": bool(hermitian_after),
        "period_preserved": transformed.metadata["period_preserved"],
        "shift_sublattice_a": [shift[0].real, shift[0].imag],
        "shift_sublattice_b": [shift[1].real, shift[1].imag],
        "times_sampled": len(times),
    })
    _maybe_plot(args, lambda: plotting.deform_check_figure(times, per_time), out)
    return 0


def cmd_quench(args) -> int:
    model = load_model(args.model)
    if not isinstance(model, StepQuenchSpec):
        raise ConfigError("quench expects a step_quench model")
    if args.r:
        steps = list(model.steps)
        marked = {int(s) for s in args.r_steps.split(",")} if args.r_steps else {1}
        for n in marked:
            if not 1 <= n <= len(steps):
                raise ConfigError(f"--r-steps index {n} out of range")
            s = steps[n - 1]
            steps[n - 1] = replace(s, J1=s.J1 + args.r, J2=s.J2 - args.r)
        model = replace(model, steps=tuple(steps))
    kappas = np.linspace(0, 2 * np.pi, args.nk, endpoint=False)
    ks = np.stack([kappas, np.zeros_like(kappas)], axis=-1)
    U = evolution.bloch_floquet(model, ks)
    T = model.period
    eps = np.stack([quasienergies(U[i], T).quasienergies for i in range(len(kappas))])
    out = _out_path(args, "quench.csv" if args.format == "csv" else "quench.json")
    table = []
    for i, kap in enumerate(kappas):
        for band in range(eps.shape[1]):
            table.append((kap, band, eps[i, band].real, eps[i, band].imag))
    flat = [{"band": b,
             "re_mean": float(eps[:, b].real.mean()), "re_std": float(eps[:, b].real.std()),
             "im_mean": float(eps[:, b].imag.mean()), "im_std": float(eps[:, b].imag.std())}
            for b in range(eps.shape[1])]
    _emit(args, out, ["k", "band", "re_eps", "im_eps"], table, scalars={"bands": flat})
    _maybe_plot(args, lambda: plotting.quench_figure(kappas, eps), out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nonfloquet",
                                     description="driven non-Hermitian chain diagnostics")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, *, slices=True):
        p.add_argument("--model", required=True, help="model specification file (JSON)")
        p.add_argument("--out", default=None, help="output path")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        if slices:
            p.add_argument("--slices", type=int, default=evolution.DEFAULT_SLICES)
        p.add_argument("--seed", type=int, default=None,
                       help="seed for randomized property tests (unused by reports)")
        p.add_argument("--no-plot", action="store_true", help="skip figure rendering")

    p = sub.add_parser("spectrum", help="one-period quasienergy spectrum")
    common(p)
    p.add_argument("--mu0", type=float, default=None)
    p.add_argument("--omega", type=float, default=None)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("sweep", help="open-boundary sweep over mu0")
    common(p)
    p.add_argument("--mu0-grid", dest="mu0_grid", required=True, help="A:B:N")
    p.add_argument("--omega", type=float, default=None)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("phase-study", help="starting-point (constant-phase) study")
    common(p)
    p.add_argument("--phi-grid", dest="phi_grid", required=True, help="A:B:N (rad)")
    p.add_argument("--mu0", type=float, default=None)
    p.add_argument("--omega", type=float, default=None)
    p.set_defaults(fn=cmd_phase_study)

    p = sub.add_parser("winding", help="chiral winding numbers")
    common(p)
    p.add_argument("--nk", type=int, default=256)
    p.add_argument("--mu0", type=float, default=None)
    p.add_argument("--omega", type=float, default=None)
    p.set_defaults(fn=cmd_winding)

    p = sub.add_parser("freqspace", help="frequency-space spectrum over a k grid")
    common(p)
    p.add_argument("--cutoff", type=int, required=True, help="harmonic cutoff M")
    p.add_argument("--nk", type=int, default=17)
    p.add_argument("--mu0", type=float, default=None)
    p.add_argument("--omega", type=float, default=None)
    p.set_defaults(fn=cmd_freqspace)

    p = sub.add_parser("stark", help="static asymmetric Stark chain study")
    common(p, slices=False)
    p.set_defaults(fn=cmd_stark)

    p = sub.add_parser("deform-check", help="dynamical pseudo-Hermiticity check")
    common(p, slices=False)
    p.add_argument("--deformation", choices=("full", "temporal"), default="full")
    p.add_argument("--times", type=int, default=64)
    p.add_argument("--mu0", type=float, default=None)
    p.add_argument("--omega", type=float, default=None)
    p.set_defaults(fn=cmd_deform_check)

    p = sub.add_parser("quench", help="stepwise quench Floquet bands")
    common(p, slices=False)
    p.add_argument("--r", type=float, default=0.0, help="tunneling asymmetry amplitude")
    p.add_argument("--r-steps", dest="r_steps", default="1",
                   help="comma list of 1-based steps carrying the asymmetry")
    p.add_argument("--nk", type=int, default=128)
    p.set_defaults(fn=cmd_quench)
    return parser


def run_cli(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run_cli())
