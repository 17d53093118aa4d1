"""Command-line driver: reproducible experiment runs with CSV/JSON outputs.

Every command writes its data files plus a JSON run manifest echoing the full
configuration, the seed and the code version.  Outputs are deterministic
under a fixed seed; on failure partial outputs are removed and the exit code
is nonzero.  Time grids use start:stop:step, inclusive of start, exclusive
of stop except that a point within 1e-9 of stop is kept.

The calibrated paper-facing defaults are majorana_norm=syk and beta=4; the
`pauli` normalization (psi^2 = 1) remains available through --norm.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, diagnostics, models, noise, protocol, sparsifier, tfd
from .hilbert import HermitianOperator, hamiltonian_matrix
from .pauli import RegisterLayout, commutativity_report


def parse_grid(text: str) -> tuple[float, ...]:
    """start:stop:step -> grid [start, stop) plus stop when it lands on it."""
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"grid '{text}' is not start:stop:step")
    start, stop, step = (float(p) for p in parts)
    if step <= 0 or stop < start:
        raise argparse.ArgumentTypeError(f"grid '{text}' is not increasing")
    values = []
    k = 0
    while True:
        t = start + k * step
        if t > stop - 1e-9:
            break
        values.append(t)
        k += 1
    if abs((start + k * step) - stop) < 1e-9:
        values.append(stop)
    return tuple(values)


def parse_int_list(text: str) -> tuple[int, ...]:
    return tuple(int(tok) for tok in text.split(",") if tok)


def parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok)


def resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("WORMLAB_SEED")
    return int(env) if env else 0


def load_config_file(path: str) -> dict:
    """Flat key=value text; blank lines and # comments ignored."""
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def resolve_model(name: str, n: int | None, seed: int, j_scale: float = 1.0):
    if name in models.CATALOG:
        return models.CATALOG[name]()
    if name == "dense_syk":
        if n is None:
            raise SystemExit("dense_syk needs --n")
        return models.dense_syk(n, j_scale=j_scale, seed=seed)
    raise SystemExit(f"unknown model '{name}' (catalog: {', '.join(models.CATALOG)}, dense_syk)")


_ACTIVE_OUTPUTS: list["OutputSet"] = []


class OutputSet:
    """Tracks written files so failures leave no partial outputs behind."""

    def __init__(self, out_dir: str):
        self.dir = Path(out_dir)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.files: list[Path] = []
        _ACTIVE_OUTPUTS.append(self)

    def path(self, name: str) -> Path:
        p = self.dir / name
        self.files.append(p)
        return p

    def write_csv(self, name: str, header: list[str], rows) -> Path:
        p = self.path(name)
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
        return p

    def write_json(self, name: str, payload: dict) -> Path:
        p = self.path(name)
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return p

    def manifest(self, command: str, config: dict, seed: int):
        return self.write_json("manifest.json", {
            "command": command,
            "config": config,
            "seed": seed,
            "version": __version__,
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "outputs": [f.name for f in self.files],
        })

    def cleanup(self):
        for f in self.files:
            try:
                f.unlink(missing_ok=True)
            except OSError:
                pass


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _protocol_config(args, seed: int) -> protocol.ProtocolConfig:
    return protocol.ProtocolConfig(
        mu=args.mu[0] if isinstance(args.mu, list) else args.mu,
        t0=args.t0,
        t1_grid=args.t1,
        beta=args.beta,
        inject_fermions=tuple(args.inject),
        mode=args.mode,
        trotter_steps=args.steps,
        reuse_q_as_t=args.reuse_q_as_t,
        majorana_norm=args.norm,
        seed=seed,
    )


def cmd_models(args) -> int:
    listing = []
    for name, factory in models.CATALOG.items():
        h = factory()
        report = commutativity_report(h)
        listing.append({
            "name": name,
            "n_majorana": h.n_majorana,
            "q": h.q,
            "n_terms": h.n_terms,
            "fully_commuting": report.fully_commuting,
            "terms": [{"indices": list(m.indices), "coeff": c} for m, c in h.terms],
        })
    if args.json_out:
        out = OutputSet(args.out)
        out.write_json("models.json", {"models": listing})
        out.manifest("models", {"json_out": True}, resolve_seed(args))
    for entry in listing:
        print(f"{entry['name']}: N={entry['n_majorana']} q={entry['q']} "
              f"terms={entry['n_terms']} commuting={entry['fully_commuting']}")
        for term in entry["terms"]:
            idx = ",".join(str(i) for i in term["indices"])
            print(f"  {term['coeff']:+.2f} * psi[{idx}]")
    return 0


def cmd_teleport(args) -> int:
    seed = resolve_seed(args)
    h = resolve_model(args.model, args.n, seed)
    config = _protocol_config(args, seed)
    mus = args.mu
    sweep = protocol.mu_sweep(h, config, mus, threads=args.threads)
    out = OutputSet(args.out)
    rows = []
    for curve in sweep.curves:
        for t1, nats, bits in curve.rows():
            rows.append((t1, curve.config.mu, nats, bits))
    out.write_csv("teleport.csv", ["t1", "mu", "I_PT_nats", "I_PT_bits"], rows)
    summary = {
        "peaks": [
            {"mu": c.config.mu, **vars(c.peak_summary())} for c in sweep.curves
        ],
    }
    if -12.0 in mus and 12.0 in mus:
        summary["asymmetry"] = sweep.asymmetry()
    tallies = [c.gate_tally for c in sweep.curves if c.gate_tally is not None]
    if tallies:
        # per-readout-circuit estimate; the hardware run used 164 two-qubit
        # and 295 single-qubit gates (qualitative comparison only)
        summary["gate_tally"] = {
            "single_qubit": tallies[0].single_qubit,
            "two_qubit": tallies[0].two_qubit,
            "hardware_reference": {"single_qubit": 295, "two_qubit": 164},
        }
    out.write_json("teleport_summary.json", summary)
    out.manifest("teleport", _echo(args), seed)
    return 0


def cmd_tfd(args) -> int:
    seed = resolve_seed(args)
    h = resolve_model(args.model, args.n, seed)
    system = models.double(h, norm=args.norm)
    betas = np.geomspace(args.beta_min, args.beta_max, args.beta_points)
    scan = tfd.tfd_fidelity_scan(system, args.mu, betas, convention=args.convention)
    out = OutputSet(args.out)
    out.write_csv("tfd_scan.csv", ["beta", "fidelity"], scan.rows())
    out.write_json("tfd_summary.json", {
        "beta_star": scan.beta_star,
        "fidelity_max": scan.fidelity_max,
        "convention": scan.convention,
        "mu": scan.mu,
    })
    out.manifest("tfd", _echo(args), seed)
    return 0


def cmd_correlators(args) -> int:
    seed = resolve_seed(args)
    out = OutputSet(args.out)
    combined = []
    if args.model == "dense_syk" and args.seeds > 1:
        series_map = _ensemble_correlators(args, seed)
    else:
        h = resolve_model(args.model, args.n, seed)
        h_op = HermitianOperator(hamiltonian_matrix(h, norm=args.norm))
        fermions = args.fermions or tuple(range(1, h.n_majorana + 1))
        series_map = {}
        for j in fermions:
            if args.kind == "two_point":
                s = diagnostics.two_point(h, j, args.beta, args.t, norm=args.norm, h_op=h_op)
                series_map[f"j{j}"] = s.values
            else:
                partner = args.otoc_partner if args.otoc_partner != j else (j % h.n_majorana) + 1
                s = diagnostics.otoc(h, j, partner, args.beta, args.t, norm=args.norm, h_op=h_op)
                series_map[f"j{j}-{partner}"] = s.values.astype(complex)
        series_map["avg"] = np.mean(np.stack(list(series_map.values())), axis=0)
    times = np.asarray(args.t)
    for label, values in series_map.items():
        rows = [(t, v.real, v.imag) for t, v in zip(times, values)]
        out.write_csv(f"correlators_{label}.csv", ["t", "re", "im"], rows)
        combined.extend((label, t, v.real, v.imag) for t, v in zip(times, values))
    out.write_csv("correlators.csv", ["series", "t", "re", "im"], combined)
    out.manifest("correlators", _echo(args), seed)
    return 0


def _ensemble_correlators(args, seed: int) -> dict:
    acc = None
    for k in range(args.seeds):
        h = models.dense_syk(args.n, seed=seed + k)
        h_op = HermitianOperator(hamiltonian_matrix(h, norm=args.norm))
        per_seed = []
        for j in range(1, h.n_majorana + 1):
            if args.kind == "two_point":
                s = diagnostics.two_point(h, j, args.beta, args.t, norm=args.norm, h_op=h_op)
                per_seed.append(s.values)
            else:
                partner = (j % h.n_majorana) + 1
                s = diagnostics.otoc(h, j, partner, args.beta, args.t, norm=args.norm, h_op=h_op)
                per_seed.append(s.values.astype(complex))
        avg = np.mean(np.stack(per_seed), axis=0)
        acc = avg if acc is None else acc + avg
    return {"avg": acc / args.seeds}


def cmd_winding(args) -> int:
    seed = resolve_seed(args)
    h = resolve_model(args.model, args.n, seed)
    system = models.double(h, norm=args.norm)
    reports = diagnostics.winding_sweep(
        system, args.fermions, args.t, args.beta,
        evolution=args.evolution, mu=args.mu if args.evolution == "tot" else None,
    )
    out = OutputSet(args.out)
    rows = []
    for rep in reports:
        for n, p_n, q_n in zip(rep.sizes, rep.p_n, rep.q_n):
            rows.append((rep.fermion, rep.time, int(n), p_n, q_n.real, q_n.imag,
                         rep.winding_quality, rep.alpha))
    out.write_csv("winding.csv",
                  ["fermion", "t", "n", "p_n", "re_q_n", "im_q_n", "W", "alpha"],
                  rows)
    out.manifest("winding", _echo(args), seed)
    return 0


def cmd_sparsify(args) -> int:
    seed = resolve_seed(args)
    target = resolve_model(args.target, args.n, seed)
    config = sparsifier.SparsifyConfig(
        lambda_l1=args.lambda_l1,
        max_iters=args.iters,
        prune_threshold=args.prune,
        norm=args.norm,
        seed=seed,
    )
    trace = sparsifier.sparsify(target, config)
    out = OutputSet(args.out)
    out.write_csv(
        "sparsify_trace.csv", ["iter", "loss", "l1", "active_terms"],
        [(r["iter"], r["loss"], r["l1"], r["active_terms"]) for r in trace.iterations],
    )
    final = out.path("sparsified_model.json")
    final.write_text(trace.final.to_json() + "\n", encoding="utf-8")
    out.write_json("sparsify_summary.json", {
        "status": trace.status,
        "initial_observable_loss": trace.initial_observable_loss,
        "final_observable_loss": trace.final_observable_loss,
        "active_terms": trace.final.n_terms,
    })
    out.manifest("sparsify", _echo(args), seed)
    return 0


def cmd_noise(args) -> int:
    from dataclasses import replace

    seed = resolve_seed(args)
    h = resolve_model(args.model, args.n, seed)
    base = replace(_protocol_config(args, seed), mode="trotter")
    layout = RegisterLayout(h.n_majorana, reuse_q_as_t=base.reuse_q_as_t)
    system = models.double(h, layout, norm=base.majorana_norm)
    out = OutputSet(args.out)
    rows = []
    for mu in args.mu:
        cfg = replace(base, mu=mu)
        for p in args.p:
            spec = noise.NoiseSpec("depolarizing", p=p) if p > 0 else noise.NoiseSpec("none")
            curve = noise.noisy_protocol(h, cfg, spec, system=system)
            rows.extend((t1, mu, p, "depolarizing", v)
                        for t1, v in zip(curve.t1, curve.i_pt_nats))
        for eps in args.eps:
            curve = noise.noisy_protocol(h, cfg, noise.NoiseSpec("coherent", epsilon=eps),
                                         system=system)
            rows.extend((t1, mu, eps, "coherent", v)
                        for t1, v in zip(curve.t1, curve.i_pt_nats))
    out.write_csv("noise.csv", ["t1", "mu", "p_or_eps", "kind", "I_PT"], rows)
    report = noise.coherent_vs_incoherent_report(
        h, replace(base, mu=args.mu[0]),
        [p for p in args.p if p > 0], list(args.eps), system=system)
    out.write_json("noise_summary.json", {
        "depolarizing_monotone": report.depolarizing_monotone,
        "peak_spread_depolarizing": report.peak_spread_depolarizing,
        "peak_spread_coherent": report.peak_spread_coherent,
        "coherent_shifts_exceed_incoherent": report.coherent_shifts_exceed_incoherent,
        "points": [vars(pt) for pt in report.points],
    })
    out.manifest("noise", _echo(args), seed)
    return 0


def _echo(args) -> dict:
    skip = {"func"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _apply_config_file(argv: list[str]) -> list[str]:
    """Expand --config file entries into leading flags (flags override)."""
    if "--config" not in argv:
        return argv
    k = argv.index("--config")
    path = argv[k + 1]
    rest = argv[:k] + argv[k + 2:]
    pairs = load_config_file(path)
    injected = []
    for key, value in pairs.items():
        injected.extend([f"--{key.replace('_', '-')}", value])
    # injected flags go right after the subcommand so explicit flags win
    return rest[:1] + injected + rest[1:]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wormlab",
        description="Sparse-SYK wormhole teleportation laboratory",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, model=True):
        if model:
            p.add_argument("--model", required=True,
                           help=f"{', '.join(models.CATALOG)} or dense_syk")
            p.add_argument("--n", type=int, default=None, help="N for dense_syk")
        p.add_argument("--seed", type=int, default=None,
                       help="RNG seed (fallback: WORMLAB_SEED, then 0)")
        p.add_argument("--norm", choices=("pauli", "syk"), default="syk",
                       help="Majorana normalization (calibrated default: syk)")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--threads", type=int, default=1,
                       help="worker cap for per-point parallelism")
        p.add_argument("--config", help="flat key=value config file; flags override")

    def protocol_flags(p):
        p.add_argument("--mu", type=float, action="append", required=True)
        p.add_argument("--t0", type=float, default=2.8)
        p.add_argument("--t1", type=parse_grid, default=parse_grid("0:10:0.2"))
        p.add_argument("--beta", type=float, default=4.0)
        p.add_argument("--inject", type=parse_int_list, default=(1, 2))
        p.add_argument("--mode", choices=("exact", "trotter"), default="exact")
        p.add_argument("--steps", type=int, default=1)
        p.add_argument("--reuse-q-as-t", action="store_true")

    p = sub.add_parser("models", help="list the catalog Hamiltonians")
    p.add_argument("--json-out", action="store_true")
    p.add_argument("--out", default="out")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("teleport", help="run the teleportation protocol")
    common(p)
    protocol_flags(p)
    p.set_defaults(func=cmd_teleport)

    p = sub.add_parser("tfd", help="TFD fidelity scan of the coupled Hamiltonian")
    common(p)
    p.add_argument("--mu", type=float, default=-12.0)
    p.add_argument("--beta-min", type=float, default=0.25)
    p.add_argument("--beta-max", type=float, default=32.0)
    p.add_argument("--beta-points", type=int, default=29)
    p.add_argument("--convention", choices=tfd.CONVENTIONS, default="half")
    p.set_defaults(func=cmd_tfd)

    p = sub.add_parser("correlators", help="two-point / OTOC series")
    common(p)
    p.add_argument("--kind", choices=("two_point", "otoc"), default="two_point")
    p.add_argument("--fermions", type=parse_int_list, default=())
    p.add_argument("--otoc-partner", type=int, default=2)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--t", type=parse_grid, default=parse_grid("0:30:0.1"))
    p.add_argument("--seeds", type=int, default=1, help="ensemble size for dense_syk")
    p.set_defaults(func=cmd_correlators)

    p = sub.add_parser("winding", help="operator-size winding reports")
    common(p)
    p.add_argument("--fermions", type=parse_int_list, default=(1, 2, 4, 7))
    p.add_argument("--t", type=parse_grid, default=parse_grid("0:6:0.2"))
    p.add_argument("--beta", type=float, default=4.0)
    p.add_argument("--evolution", choices=("left", "tot"), default="left")
    p.add_argument("--mu", type=float, default=-12.0)
    p.set_defaults(func=cmd_winding)

    p = sub.add_parser("sparsify", help="L1-regularized sparsification run")
    common(p, model=False)
    p.add_argument("--target", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--lambda", dest="lambda_l1", type=float, default=0.05)
    p.add_argument("--iters", type=int, default=60)
    p.add_argument("--prune", type=float, default=0.02)
    p.set_defaults(func=cmd_sparsify)

    p = sub.add_parser("noise", help="noisy density-matrix protocol runs")
    common(p)
    protocol_flags(p)
    p.add_argument("--p", type=parse_float_list, default=(0.0, 0.01, 0.05))
    p.add_argument("--eps", type=parse_float_list, default=())
    p.set_defaults(func=cmd_noise)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    argv = _apply_config_file(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    _ACTIVE_OUTPUTS.clear()
    try:
        return args.func(args)
    except (ValueError, RuntimeError, OSError) as exc:
        for tracker in _ACTIVE_OUTPUTS:
            tracker.cleanup()
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
