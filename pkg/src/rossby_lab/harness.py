"""Experiment orchestration: data recipes, single runs, and epsilon sweeps.

A sweep runs, for each epsilon: the compressible solver from ill-prepared
data, the geostrophic limit flow from the balanced projection of that data,
and the wave system from the leftover oscillatory part. At a fixed sampling
cadence it evaluates the relative energy of the compressible state against
the test pair assembled from the two evolved companions, and writes one CSV
per epsilon plus a cross-epsilon JSON summary. Everything is deterministic
given the configuration and seed; per-epsilon runs are independent and may
execute on a worker pool.

Output conventions: CSV uses CRLF line endings, '.' decimal separator and 17
significant digits; the summary JSON contains plain types only and re-parses
to the in-memory summary.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import kernels
from .acoustic import (
    AcousticState,
    ModePropagator,
    acoustic_energy,
    dispersive_decay_probe,
    recurrence_horizon,
)
from .config import ExperimentConfig, config_to_dict
from .diagnostics import balance_residual_field, build_ansatz, relative_energy
from .errors import RossbyLabError
from .euler import (
    ConservativeState,
    EulerStepper,
    IllPreparedData,
    cfl_number,
    init_ill_prepared,
    total_energy,
    total_mass,
)
from .fields import (
    Grid2,
    ScalarField,
    VecField2,
    divergence,
    gradient,
    integrate,
    perp_gradient,
    random_band_limited,
)
from .qg import QGStepper, qg_energy, qg_enstrophy, solve_initial_elliptic, zeta_from_q
from .snapshot import write_snapshot
from .thermo import PressureLaw

__all__ = [
    "mode_sum_field",
    "gaussian_bump",
    "make_initial_data",
    "oscillatory_remainder",
    "run_convergence_sweep",
    "run_euler_trajectory",
    "run_qg_trajectory",
    "run_acoustic_trajectory",
    "run_decay_probe",
    "emit_report",
    "write_csv",
    "REFERENCE_Q_MODES",
    "REFERENCE_BUMP",
]

# reference preset: two stream-function modes on distinct |k| shells (equal
# shells would make the limit flow trivially steady) plus one potential bump
REFERENCE_Q_MODES = ((1, 2, 0.15, 0.3), (3, 1, 0.12, 1.1))
REFERENCE_BUMP = {"amplitude": 0.25, "width_frac": 1.0 / 16.0}


def mode_sum_field(grid: Grid2, modes) -> ScalarField:
    """Sum of cosine modes given as (kx, ky, amp, phase) integer-wavenumber specs."""
    X, Y = grid.meshgrid()
    base = 2.0 * np.pi / grid.length
    vals = np.zeros(grid.shape)
    for kx, ky, amp, phase in modes:
        vals += amp * np.cos(base * (kx * X + ky * Y) + phase)
    return ScalarField(grid, vals)


def gaussian_bump(
    grid: Grid2,
    amplitude: float,
    width: float,
    center: tuple[float, float] | None = None,
    mean_zero: bool = True,
) -> ScalarField:
    """Gaussian bump; mean-subtracted by default so perturbations stay mean-free
    (the periodic stand-in for decay at infinity)."""
    cx, cy = center if center is not None else (grid.length / 2.0, grid.length / 2.0)
    X, Y = grid.meshgrid()
    vals = amplitude * np.exp(-((X - cx) ** 2 + (Y - cy) ** 2) / (2.0 * width**2))
    if mean_zero:
        vals = vals - vals.mean()
    return ScalarField(grid, vals)


def make_initial_data(cfg: ExperimentConfig, grid: Grid2) -> IllPreparedData:
    """Build ill-prepared data from the configured recipe.

    The recipe prescribes a balanced stream-function part Q, an extra density
    perturbation, and an acoustic potential. The data is then
    s0 = Q + extra, v0 = perp-grad Q, phi0 as given: mean-zero perturbations
    with a divergence-free solenoidal part, off the limit manifold whenever
    phi0 or the extra part is nonzero.
    """
    ini = cfg.initial_data
    if ini.preset == "zero":
        qpart = ScalarField.zeros(grid)
        extra = ScalarField.zeros(grid)
        phi0 = ScalarField.zeros(grid)
    elif ini.preset == "reference":
        qpart = mode_sum_field(grid, REFERENCE_Q_MODES)
        extra = ScalarField.zeros(grid)
        phi0 = gaussian_bump(
            grid,
            REFERENCE_BUMP["amplitude"],
            REFERENCE_BUMP["width_frac"] * grid.length,
        )
    elif ini.preset == "random":
        rng = np.random.default_rng(cfg.seed)
        qpart = random_band_limited(grid, rng, amplitude=0.15, kmax_frac=0.25)
        extra = random_band_limited(grid, rng, amplitude=0.05, kmax_frac=0.25)
        phi0 = random_band_limited(grid, rng, amplitude=0.2, kmax_frac=0.25)
    else:
        qpart = mode_sum_field(grid, [(m.kx, m.ky, m.amp, m.phase) for m in ini.q_modes])
        extra = mode_sum_field(grid, [(m.kx, m.ky, m.amp, m.phase) for m in ini.s0_modes])
        phi0 = mode_sum_field(grid, [(m.kx, m.ky, m.amp, m.phase) for m in ini.phi_modes])
    s0 = ScalarField(grid, qpart.values + extra.values)
    return IllPreparedData(s0=s0, v0=perp_gradient(qpart), phi0=phi0)


def oscillatory_remainder(data: IllPreparedData, q0: ScalarField, epsilon: float) -> AcousticState:
    """Wave-system data orthogonal (in energy) to the balanced part q0.

    Subtracting the balanced pair (q0, perp-grad q0) from (s0, u0) leaves the
    fast content; starting the wave solver from the full data instead would
    double-count the balanced part carried by the limit flow and pin the
    relative energy at O(1).
    """
    g = data.grid
    u0 = data.velocity()
    v_bal = perp_gradient(q0)
    s_ac = ScalarField(g, data.s0.values - q0.values)
    w_ac = VecField2.from_arrays(
        g, u0.x.values - v_bal.x.values, u0.y.values - v_bal.y.values
    )
    return AcousticState(s_ac, w_ac, epsilon)


def _fmt(x) -> str:
    return f"{float(x):.17g}"


def write_csv(path, header: list[str], rows: list[list]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) if not isinstance(v, int) else str(v) for v in row))
    path.write_text("\r\n".join(lines) + "\r\n", encoding="utf-8", newline="")


def _sample_grid(cfg: ExperimentConfig):
    n_samples = max(1, round(cfg.horizon * cfg.cadence))
    sample_dt = cfg.horizon / n_samples
    return n_samples, sample_dt


def run_single_epsilon(cfg: ExperimentConfig, epsilon: float) -> dict:
    """One sweep leg: evolve the three systems, sample relative energy.

    Returns records, CSV rows, weak (time-averaged-field) residual norms, and
    a status flag; solver aborts keep the rows gathered so far.
    """
    grid = Grid2(n=cfg.grid.n, length=cfg.grid.L)
    law = PressureLaw(cfg.gamma)
    data = make_initial_data(cfg, grid)
    q0 = solve_initial_elliptic(data.velocity(), data.s0)
    acoustic0 = oscillatory_remainder(data, q0, epsilon)
    state = init_ill_prepared(data, epsilon)

    n_samples, sample_dt = _sample_grid(cfg)
    n_sub = max(1, math.ceil(sample_dt / cfg.dt_for(epsilon)))
    dt = sample_dt / n_sub
    stepper = EulerStepper(
        grid, law, epsilon, dt, hyperdiffusion=cfg.hyperdiffusion
    )
    n_qg = max(1, math.ceil(sample_dt / cfg.qg_dt))
    qg_stepper = QGStepper(grid, sample_dt / n_qg)
    wave_step = ModePropagator(grid, epsilon, sample_dt)

    zeta_hat = zeta_from_q(q0).hat()
    s_hat = grid.forward(acoustic0.s.values)
    w1_hat = grid.forward(acoustic0.w.x.values)
    w2_hat = grid.forward(acoustic0.w.y.values)

    div_sum = np.zeros(grid.shape)
    bal_sum = (np.zeros(grid.shape), np.zeros(grid.shape))
    records = []
    rows = []
    status, message = "ok", ""

    def sample(t: float):
        q_now = ScalarField(grid, grid.inverse(-zeta_hat / (1.0 + grid.k2)))
        wave_now = AcousticState(
            ScalarField(grid, grid.inverse(s_hat)),
            VecField2.from_arrays(grid, grid.inverse(w1_hat), grid.inverse(w2_hat)),
            epsilon,
        )
        ansatz = build_ansatz(q_now, wave_now, epsilon)
        rec = replace(relative_energy(state, ansatz, law), time=t)
        records.append(rec)
        rows.append(
            [epsilon, t, rec.e_total, rec.e_kinetic, rec.e_potential,
             rec.div_residual, rec.balance_residual]
        )
        div_sum[:] += divergence(state.m).values
        bal = balance_residual_field(state)
        bal_sum[0][:] += bal.x.values
        bal_sum[1][:] += bal.y.values

    initial_energy = total_energy(state, law)
    sample(0.0)
    try:
        for j in range(1, n_samples + 1):
            for _ in range(n_sub):
                state = stepper.step(state)
            for _ in range(n_qg):
                zeta_hat = qg_stepper.step(zeta_hat)
            wave_step.apply(s_hat, w1_hat, w2_hat)
            sample(j * sample_dt)
    except RossbyLabError as exc:
        status, message = "failed", str(exc)

    n_taken = len(records)
    area = grid.cell_area
    weak_div = float(np.sqrt(np.sum((div_sum / n_taken) ** 2) * area))
    weak_bal = float(
        np.sqrt(np.sum((bal_sum[0] / n_taken) ** 2 + (bal_sum[1] / n_taken) ** 2) * area)
    )
    return {
        "epsilon": epsilon,
        "status": status,
        "message": message,
        "records": records,
        "rows": rows,
        "initial_total_energy": initial_energy,
        "sup_E": max(r.e_total for r in records),
        "mean_div_residual": float(np.mean([r.div_residual for r in records])),
        "mean_balance_residual": float(np.mean([r.balance_residual for r in records])),
        "weak_div_residual": weak_div,
        "weak_balance_residual": weak_bal,
    }


def _csv_name(epsilon: float) -> str:
    return f"relative_energy_eps{epsilon:g}.csv"


def run_convergence_sweep(cfg: ExperimentConfig, out_dir=None, workers: int = 1) -> dict:
    """Run every configured epsilon, write per-run CSVs and the summary JSON."""
    out = Path(out_dir if out_dir is not None else cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    eps_list = list(cfg.epsilons)
    if workers > 1 and len(eps_list) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_single_epsilon, [cfg] * len(eps_list), eps_list))
    else:
        results = [run_single_epsilon(cfg, eps) for eps in eps_list]

    header = ["epsilon", "time", "E", "E_kin", "E_pot", "div_res", "bal_res"]
    runs_summary = []
    for res in results:
        name = _csv_name(res["epsilon"])
        write_csv(out / name, header, res["rows"])
        runs_summary.append(
            {
                "epsilon": res["epsilon"],
                "status": res["status"],
                "message": res["message"],
                "csv": name,
                "samples": len(res["records"]),
                "initial_total_energy": res["initial_total_energy"],
                "sup_E": res["sup_E"],
                "mean_div_residual": res["mean_div_residual"],
                "mean_balance_residual": res["mean_balance_residual"],
                "weak_div_residual": res["weak_div_residual"],
                "weak_balance_residual": res["weak_balance_residual"],
            }
        )

    def ratio_chain(key):
        vals = [r[key] for r in runs_summary]
        out_r = []
        for a, b in zip(vals, vals[1:]):
            out_r.append(b / a if a != 0.0 else (1.0 if b == 0.0 else math.inf))
        return out_r

    summary = {
        "config": config_to_dict(cfg),
        "runs": runs_summary,
        "ratios": {
            "sup_E": ratio_chain("sup_E"),
            "weak_div_residual": ratio_chain("weak_div_residual"),
            "weak_balance_residual": ratio_chain("weak_balance_residual"),
        },
        "metadata": {
            "kernel_backend": kernels.BACKEND,
            "hyperdiffusion": cfg.hyperdiffusion,
        },
    }
    emit_report(summary, out / "summary.json")
    return summary


def emit_report(summary: dict, path) -> str:
    """Serialize a summary to JSON; the text re-parses to the same object."""
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    Path(path).write_text(text, encoding="utf-8")
    return text


def _snapshot_indices(cfg: ExperimentConfig, n_samples: int, sample_dt: float):
    if cfg.snapshots_per_unit_time <= 0.0:
        return set()
    every = max(1, round(1.0 / (cfg.snapshots_per_unit_time * sample_dt)))
    return {j for j in range(0, n_samples + 1, every)} | {n_samples}


def run_euler_trajectory(cfg: ExperimentConfig, epsilon: float, out_dir) -> dict:
    """Single compressible run; emits time,mass,total_energy,min_rho,cfl CSV."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = Grid2(n=cfg.grid.n, length=cfg.grid.L)
    law = PressureLaw(cfg.gamma)
    data = make_initial_data(cfg, grid)
    state = init_ill_prepared(data, epsilon)
    n_samples, sample_dt = _sample_grid(cfg)
    n_sub = max(1, math.ceil(sample_dt / cfg.dt_for(epsilon)))
    dt = sample_dt / n_sub
    stepper = EulerStepper(grid, law, epsilon, dt, hyperdiffusion=cfg.hyperdiffusion)
    snaps = _snapshot_indices(cfg, n_samples, sample_dt)
    rows = []
    snap_files = {}
    status, message = "ok", ""

    def sample(j: int, t: float):
        rows.append(
            [t, total_mass(state), total_energy(state, law),
             float(state.rho.values.min()), cfl_number(state, dt)]
        )
        if j in snaps:
            name = f"euler_snap_{j:06d}.rlab"
            write_snapshot(
                out / name,
                grid,
                {"rho": state.rho.values, "m1": state.m.x.values, "m2": state.m.y.values},
            )
            snap_files[name] = t

    sample(0, 0.0)
    try:
        for j in range(1, n_samples + 1):
            for _ in range(n_sub):
                state = stepper.step(state)
            sample(j, j * sample_dt)
    except RossbyLabError as exc:
        status, message = "failed", str(exc)
        write_snapshot(
            out / "euler_abort.rlab",
            grid,
            {"rho": state.rho.values, "m1": state.m.x.values, "m2": state.m.y.values},
        )
    write_csv(out / "euler.csv", ["time", "mass", "total_energy", "min_rho", "cfl"], rows)
    meta = {
        "status": status,
        "message": message,
        "epsilon": epsilon,
        "dt": dt,
        "hyperdiffusion": cfg.hyperdiffusion,
        "snapshots": snap_files,
    }
    emit_report(meta, out / "euler_meta.json")
    return meta


def run_qg_trajectory(cfg: ExperimentConfig, out_dir) -> dict:
    """Limit-flow run; emits time,energy,enstrophy,mean_zeta CSV and snapshots."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = Grid2(n=cfg.grid.n, length=cfg.grid.L)
    data = make_initial_data(cfg, grid)
    q0 = solve_initial_elliptic(data.velocity(), data.s0)
    n_samples, sample_dt = _sample_grid(cfg)
    n_qg = max(1, math.ceil(sample_dt / cfg.qg_dt))
    stepper = QGStepper(grid, sample_dt / n_qg)
    zeta_hat = zeta_from_q(q0).hat()
    snaps = _snapshot_indices(cfg, n_samples, sample_dt)
    rows = []
    snap_files = {}
    status, message = "ok", ""

    def sample(j: int, t: float):
        q_now = ScalarField(grid, grid.inverse(-zeta_hat / (1.0 + grid.k2)))
        zeta = zeta_from_q(q_now)
        rows.append(
            [t, qg_energy(q_now), qg_enstrophy(q_now),
             integrate(zeta) / grid.length**2]
        )
        if j in snaps:
            name = f"qg_snap_{j:06d}.rlab"
            write_snapshot(out / name, grid, {"q": q_now.values})
            snap_files[name] = t

    sample(0, 0.0)
    try:
        for j in range(1, n_samples + 1):
            for _ in range(n_qg):
                zeta_hat = stepper.step(zeta_hat)
            sample(j, j * sample_dt)
    except RossbyLabError as exc:
        status, message = "failed", str(exc)
    write_csv(out / "qg.csv", ["time", "energy", "enstrophy", "mean_zeta"], rows)
    meta = {"status": status, "message": message, "snapshots": snap_files}
    emit_report(meta, out / "qg_meta.json")
    return meta


def run_acoustic_trajectory(cfg: ExperimentConfig, epsilon: float, out_dir) -> dict:
    """Wave-system run from the literal data (s0, grad phi0); emits
    time,energy,sup_s,sup_w,recurrence_flag CSV."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = Grid2(n=cfg.grid.n, length=cfg.grid.L)
    data = make_initial_data(cfg, grid)
    state = AcousticState(data.s0, gradient(data.phi0), epsilon)
    n_samples, sample_dt = _sample_grid(cfg)
    step = ModePropagator(grid, epsilon, sample_dt)
    horizon = recurrence_horizon(grid, epsilon)
    s_hat = grid.forward(state.s.values)
    w1_hat = grid.forward(state.w.x.values)
    w2_hat = grid.forward(state.w.y.values)
    rows = []
    for j in range(n_samples + 1):
        if j > 0:
            step.apply(s_hat, w1_hat, w2_hat)
        t = j * sample_dt
        s = grid.inverse(s_hat)
        w1 = grid.inverse(w1_hat)
        w2 = grid.inverse(w2_hat)
        snap = AcousticState(
            ScalarField(grid, s), VecField2.from_arrays(grid, w1, w2), epsilon
        )
        rows.append(
            [t, acoustic_energy(snap), float(np.max(np.abs(s))),
             float(np.max(np.hypot(w1, w2))), int(t > horizon)]
        )
    write_csv(
        out / "acoustic.csv",
        ["time", "energy", "sup_s", "sup_w", "recurrence_flag"],
        rows,
    )
    return {"status": "ok", "recurrence_horizon": horizon}


def run_decay_probe(cfg: ExperimentConfig, epsilon: float, out_dir, with_oracle: bool = False) -> dict:
    """Torus decay probe on a compact bump, optionally with the free-space oracle."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = Grid2(n=cfg.grid.n, length=cfg.grid.L)
    width = cfg.probe.bump_width
    bump = gaussian_bump(grid, cfg.probe.bump_amplitude, width, mean_zero=True)
    zero = ScalarField.zeros(grid)
    times = [epsilon * tau for tau in cfg.probe.taus]
    probe_rows = dispersive_decay_probe(zero, bump, epsilon, times)
    header = ["tau", "time", "sup_s", "sup_w", "recurrence_flag"]
    rows = []
    for tau, rec in zip(sorted(cfg.probe.taus), probe_rows):
        rows.append([tau, rec["time"], rec["sup_s"], rec["sup_w"], rec["recurrence_flag"]])
    oracle = None
    if with_oracle:
        from .freespace import freespace_acoustic_probe

        half = min(8.0 * width, grid.length / 2.0 * 0.5)
        npatch = int(min(grid.n, max(32, round(2 * half / grid.dx))))
        xs = (np.arange(npatch) - (npatch - 1) / 2.0) * grid.dx
        X, Y = np.meshgrid(xs, xs, indexing="ij")
        phi_patch = cfg.probe.bump_amplitude * np.exp(-(X**2 + Y**2) / (2.0 * width**2))
        pts = [(0.0, 0.0)] + [
            (r * width * np.cos(a), r * width * np.sin(a))
            for r in (1.0, 2.0, 3.0)
            for a in np.linspace(0.0, 2.0 * np.pi, 8, endpoint=False)
        ]
        oracle = []
        for i, tau in enumerate(sorted(cfg.probe.taus)):
            res = freespace_acoustic_probe(
                np.zeros_like(phi_patch), phi_patch, grid.dx, tau, pts, tol=1e-5
            )
            sup_s = float(np.max(np.abs(res["s"])))
            sup_w = float(np.max(np.hypot(res["w1"], res["w2"])))
            oracle.append((sup_s, sup_w))
            rows[i].extend([sup_s, sup_w])
        header = header + ["oracle_sup_s", "oracle_sup_w"]
    write_csv(out / "decay_probe.csv", header, rows)
    return {"status": "ok", "rows": len(rows), "oracle": oracle is not None}
