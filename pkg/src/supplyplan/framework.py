"""Rolling-horizon comparison of the planning methods.

For each prefix length tau the box parameters are re-estimated on scenarios
1..tau (expanding window), each method books vehicles using only that prefix,
and the booking is priced against the next realization by solving the
recourse problem. Infeasible evaluations are recorded as ``inf`` and poison
the column aggregate.
"""

from __future__ import annotations

import concurrent.futures
import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .cone import solve_cone
from .formulations import (FirstStage, MethodId, PhiPositive, build_recourse,
                           build_ro_box, build_ro_ell, build_sp, build_trsocp,
                           build_ws, extract_first_stage,
                           recover_adjustable_m5)
from .linprog import SolverConfig, Status, solve_lp
from .mip import solve_mip
from .model import Instance, booking_cost, recourse_cost
from .projection import project_simplex_lsq
from .rng import Stream
from .uncertainty import EllipseParams, ScenarioSet, estimate_box, sample_costs

METHOD_COLUMNS = ["m1", "m2", "m3", "m4", "m5"]
ALL_COLUMNS = METHOD_COLUMNS + ["ws"]

_METHOD_IDS = {"m1": MethodId.M1_SP, "m2": MethodId.M2_ROBOX,
               "m3": MethodId.M3_ROELL, "m4": MethodId.M4_TRSOCP,
               "m5": MethodId.M5_ARC}


@dataclass
class ComparisonReport:
    taus: list[int]
    methods: list[str]                      # subset of METHOD_COLUMNS
    cells: dict[tuple[str, int], float] = field(default_factory=dict)
    times: dict[tuple[str, int], float] = field(default_factory=dict)
    first_stages: dict[tuple[str, int], FirstStage] = field(default_factory=dict)

    def cost(self, column: str, tau: int) -> float:
        return self.cells[(column, tau)]

    def aggregate(self, column: str) -> float:
        vals = [self.cells[(column, t)] for t in self.taus]
        return math.inf if any(math.isinf(v) for v in vals) else sum(vals)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("tau," + ",".join(ALL_COLUMNS) + "\n")
        active = set(self.methods) | {"ws"}
        for tau in self.taus:
            cells = [_fmt(self.cells[(c, tau)]) if c in active else ""
                     for c in ALL_COLUMNS]
            out.write(f"{tau}," + ",".join(cells) + "\n")
        aggs = [_fmt(self.aggregate(c)) if c in active else ""
                for c in ALL_COLUMNS]
        out.write("aggregate," + ",".join(aggs) + "\n")
        return out.getvalue()


def _fmt(v: float) -> str:
    return "inf" if math.isinf(v) else f"{v:.6f}"


@dataclass
class StabilityCurve:
    entries: list[tuple[int, float]]   # (scenario count, SP optimum)
    seed: int

    def __post_init__(self):
        sizes = [s for s, _ in self.entries]
        if sizes != sorted(set(sizes)):
            raise ValueError("scenario counts must be strictly increasing")


def _objective_or_inf(sol) -> float:
    return sol.objective if sol.optimal else math.inf


def _solve_first_stage(inst, method, prefix, box, omega, relax, cfg):
    """Solve method ``m`` on the prefix; returns (first_stage, trsocp_solution)."""
    if method == "m1":
        p = build_sp(inst, prefix, relax)
        sol = solve_lp(p, cfg) if relax else solve_mip(p, cfg)
    elif method == "m2":
        p = build_ro_box(inst, box, relax)
        sol = solve_lp(p, cfg) if relax else solve_mip(p, cfg)
    elif method == "m3":
        p, cone = build_ro_ell(inst, box, EllipseParams(omega))
        sol = solve_cone(p, cone, cfg)
    elif method in ("m4", "m5"):
        p, cones = build_trsocp(inst, prefix, omega)
        sol = solve_cone(p, cones, cfg)
    else:
        raise ValueError(f"unknown method {method!r}")
    if not sol.optimal:
        return None, sol
    return extract_first_stage(inst, sol, _METHOD_IDS[method], relax), sol


def evaluate_recourse(inst, x_star, d, b, relax=True, cfg=None) -> float:
    """Optimal cost of the fixed-booking recourse problem; inf if infeasible."""
    p = build_recourse(inst, x_star, d, b, relax)
    sol = solve_lp(p, cfg) if relax else solve_mip(p, cfg)
    return _objective_or_inf(sol)


def _compare_tau(inst, scens, tau, methods, omega, relax, cfg,
                 cost_dev_from_sigma, sigma):
    """All cells of one report row. Returns (tau, cells, times, first_stages)."""
    prefix = scens.head(tau)
    box = estimate_box(prefix, tau)
    if cost_dev_from_sigma:
        box.b_dev = sigma * box.b_nominal
    d_next = scens.demands[tau]
    b_next = scens.costs[tau]

    cells, times, stages = {}, {}, {}
    trsocp_sol = None
    trsocp_fs = None
    for m in methods:
        t0 = time.perf_counter()
        if m in ("m4", "m5") and trsocp_sol is not None:
            fs, sol = trsocp_fs, trsocp_sol
        else:
            fs, sol = _solve_first_stage(inst, m, prefix, box, omega, relax, cfg)
            if m in ("m4", "m5"):
                trsocp_sol, trsocp_fs = sol, fs
        if fs is None:
            cells[m] = math.inf
            times[m] = time.perf_counter() - t0
            continue
        stages[m] = fs
        if m == "m5":
            lam, phi = project_simplex_lsq(d_next, list(prefix.demands),
                                           tol=1e-12)
            try:
                y, z = recover_adjustable_m5(inst, sol, lam, phi, d_next)
                # numeric guard: the combination satisfies z <= x up to LP tol
                z = {k: min(v, fs.x.get(k, 0.0)) for k, v in z.items()}
                cells[m] = booking_cost(inst, fs.x) + recourse_cost(
                    inst, fs.x, y, z, b_next)
            except PhiPositive:
                cells[m] = math.inf
        else:
            cells[m] = evaluate_recourse(inst, fs, d_next, b_next, relax, cfg)
        times[m] = time.perf_counter() - t0

    t0 = time.perf_counter()
    ws_p = build_ws(inst, d_next, b_next, relax)
    ws_sol = solve_lp(ws_p, cfg) if relax else solve_mip(ws_p, cfg)
    cells["ws"] = _objective_or_inf(ws_sol)
    times["ws"] = time.perf_counter() - t0
    return tau, cells, times, stages


def run_comparison(inst: Instance, scens: ScenarioSet, sbar: int,
                   methods=None, omega: float = 2.75, relax: bool = True,
                   seed: int = 0, sigma: float = 0.2,
                   cost_dev_from_sigma: bool = False,
                   cfg: SolverConfig | None = None,
                   jobs: int = 1) -> ComparisonReport:
    """Run the full tau sweep, tau in {sbar, ..., S-1}.

    Cost realizations are sampled around the instance's average buying costs
    (seeded) when the scenario set carries none. ``cost_dev_from_sigma``
    switches the box cost deviations from the prefix estimate to the
    sigma band around the nominal cost.
    """
    if not 1 <= sbar < scens.S:
        raise ValueError("need 1 <= sbar < S")
    methods = list(methods) if methods is not None else list(METHOD_COLUMNS)
    for m in methods:
        if m not in METHOD_COLUMNS:
            raise ValueError(f"unknown method {m!r}")
    cfg = cfg or SolverConfig()
    if scens.costs is None:
        costs = sample_costs(inst.b_bar_vector(), sigma, scens.S, seed)
        scens = scens.with_costs(costs)

    taus = list(range(sbar, scens.S))
    report = ComparisonReport(taus=taus, methods=methods)
    args = [(inst, scens, tau, methods, omega, relax, cfg,
             cost_dev_from_sigma, sigma) for tau in taus]
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_compare_tau_star, args))
    else:
        results = [_compare_tau(*a) for a in args]
    for tau, cells, times, stages in sorted(results):  # ordered merge by tau
        for col, v in cells.items():
            report.cells[(col, tau)] = v
        for col, v in times.items():
            report.times[(col, tau)] = v
        for col, fs in stages.items():
            report.first_stages[(col, tau)] = fs
    return report


def _compare_tau_star(args):
    return _compare_tau(*args)


def compute_evpi(sp_value: float, ws_values, probs=None) -> float:
    """Expected value of perfect information: SP optimum minus expected
    wait-and-see optimum."""
    ws_values = np.asarray(ws_values, dtype=float)
    if probs is None:
        probs = np.full(ws_values.size, 1.0 / ws_values.size)
    else:
        probs = np.asarray(probs, dtype=float)
        if abs(probs.sum() - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to 1")
    return float(sp_value - probs @ ws_values)


def in_sample_stability(inst: Instance, scens: ScenarioSet, s_list,
                        seed: int, sigma: float = 0.2,
                        cfg: SolverConfig | None = None) -> StabilityCurve:
    """SP optimum for increasing sampled scenario counts.

    Demands are uniform in the per-destination [min, max] range of the
    historical scenarios; costs uniform in the sigma band around the
    historical mean (or the instance average when no costs are present).
    All counts share one stream, so smaller samples are prefixes of larger
    ones (prefix-stable curves)."""
    s_list = list(s_list)
    if s_list != sorted(set(s_list)):
        raise ValueError("s_list must be strictly increasing")
    cfg = cfg or SolverConfig()
    lo = scens.demands.min(axis=0)
    hi = scens.demands.max(axis=0)
    b_bar = (scens.costs.mean(axis=0) if scens.costs is not None
             else inst.b_bar_vector())
    stream = Stream(seed)
    n_max = s_list[-1]
    # demand and cost drawn jointly per row, so a smaller sample is an exact
    # prefix of a larger one from the same seed
    joint = stream.uniform_matrix(
        np.concatenate([lo, b_bar * (1 - sigma)]),
        np.concatenate([hi, b_bar * (1 + sigma)]), n_max)
    demands = joint[:, :lo.size]
    costs = joint[:, lo.size:]
    entries = []
    for n in s_list:
        sub = ScenarioSet(demands[:n], costs[:n], dest_ids=scens.dest_ids)
        sol = solve_lp(build_sp(inst, sub, relax=True), cfg)
        entries.append((n, _objective_or_inf(sol)))
    return StabilityCurve(entries=entries, seed=seed)


def monte_carlo_validation(inst: Instance, first_stages, n: int, seed: int,
                           gamma, sigma: float, d_bar, b_bar,
                           m5_data=None, cfg: SolverConfig | None = None):
    """Aggregate recourse cost per method over ``n`` sampled realizations.

    ``first_stages`` maps method column -> {tau: FirstStage}; the aggregate is
    the sum over tau of the mean evaluated cost over the draws. ``m5_data``
    maps tau -> (prefix demand matrix, trsocp solution, FirstStage); any draw
    outside the hull makes the m5 aggregate inf."""
    if n == 0:
        return {}
    cfg = cfg or SolverConfig()
    d_bar = np.asarray(d_bar, dtype=float)
    b_bar = np.asarray(b_bar, dtype=float)
    gamma = np.broadcast_to(np.asarray(gamma, dtype=float), d_bar.shape)
    stream = Stream(seed)
    lo_d = np.maximum(d_bar * (1.0 - gamma), 0.0)
    ds = stream.uniform_matrix(lo_d, d_bar * (1.0 + gamma), n)
    bs = stream.uniform_matrix(b_bar * (1.0 - sigma), b_bar * (1.0 + sigma), n)

    out = {}
    for method, per_tau in first_stages.items():
        total = 0.0
        for tau, fs in sorted(per_tau.items()):
            if method == "m5":
                if m5_data is None or tau not in m5_data:
                    total = math.inf
                    break
                prefix_demands, trsocp_sol, fs5 = m5_data[tau]
                acc = 0.0
                for i in range(n):
                    lam, phi = project_simplex_lsq(ds[i], list(prefix_demands),
                                                   tol=1e-12)
                    try:
                        y, z = recover_adjustable_m5(inst, trsocp_sol, lam,
                                                     phi, ds[i])
                    except PhiPositive:
                        acc = math.inf
                        break
                    z = {k: min(v, fs5.x.get(k, 0.0)) for k, v in z.items()}
                    acc += booking_cost(inst, fs5.x) + recourse_cost(
                        inst, fs5.x, y, z, bs[i])
                total += acc / n if math.isfinite(acc) else math.inf
            else:
                acc = 0.0
                for i in range(n):
                    acc += evaluate_recourse(inst, fs, ds[i], bs[i], True, cfg)
                total += acc / n
            if math.isinf(total):
                break
        out[method] = total
    return out


def stress_worst_case(inst: Instance, first_stages, gamma, sigma: float,
                      d_bar, b_bar, cfg: SolverConfig | None = None):
    """Single extreme evaluation per method at demand d_bar (1 + gamma) and
    cost b_bar (1 + sigma), using each method's most informed booking (the
    largest tau), plus the wait-and-see cost of that scenario."""
    cfg = cfg or SolverConfig()
    d_bar = np.asarray(d_bar, dtype=float)
    b_bar = np.asarray(b_bar, dtype=float)
    gamma = np.broadcast_to(np.asarray(gamma, dtype=float), d_bar.shape)
    d_ext = d_bar * (1.0 + gamma)
    b_ext = b_bar * (1.0 + sigma)
    out = {}
    for method, per_tau in first_stages.items():
        tau = max(per_tau)
        out[method] = evaluate_recourse(inst, per_tau[tau], d_ext, b_ext,
                                        True, cfg)
    ws_sol = solve_lp(build_ws(inst, d_ext, b_ext, relax=True), cfg)
    out["ws"] = _objective_or_inf(ws_sol)
    return out
