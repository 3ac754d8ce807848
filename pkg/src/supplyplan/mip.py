"""Best-bound branch and bound over LP relaxations."""

from __future__ import annotations

import heapq
import math

from .linprog import LinearProblem, Solution, SolverConfig, Status, solve_lp


def _most_fractional(p: LinearProblem, values: dict[str, float], int_tol: float):
    """Index of the integer variable farthest from integrality; ties go to the
    lowest variable index. Returns None when all marks are satisfied."""
    best_idx, best_frac = None, int_tol
    for i, name in enumerate(p.var_names):
        if not p.integer[i]:
            continue
        v = values[name]
        frac = abs(v - round(v))
        if frac > best_frac + 1e-15:
            best_idx, best_frac = i, frac
    return best_idx


def solve_mip(p: LinearProblem, cfg: SolverConfig | None = None) -> Solution:
    cfg = cfg or SolverConfig()
    if not p.any_integer():
        return solve_lp(p, cfg)

    root = solve_lp(p, cfg)
    if root.status in (Status.INFEASIBLE, Status.UNBOUNDED, Status.ITER_LIMIT):
        return root

    incumbent: Solution | None = None
    best_obj = math.inf
    # heap entries: (lp bound, insertion counter, bound overrides)
    counter = 0
    heap = [(root.objective, counter, {})]
    nodes = 0
    global_lb = root.objective

    while heap:
        bound, _, overrides = heapq.heappop(heap)
        global_lb = bound
        if bound >= best_obj - cfg.mip_gap:
            break  # best-bound order: nothing better remains
        if nodes >= cfg.max_bb_nodes:
            if incumbent is not None:
                incumbent.status = Status.NODE_LIMIT
                incumbent.gap = best_obj - global_lb
                return incumbent
            return Solution(Status.NODE_LIMIT, math.inf, gap=math.inf)
        nodes += 1

        sol = solve_lp(p, cfg, bound_overrides=overrides) if overrides else root
        if not sol.optimal or sol.objective >= best_obj - cfg.mip_gap:
            continue
        branch = _most_fractional(p, sol.values, cfg.int_tol)
        if branch is None:
            # integral within int_tol: round onto the lattice
            vals = dict(sol.values)
            for i, name in enumerate(p.var_names):
                if p.integer[i]:
                    vals[name] = float(round(vals[name]))
            if sol.objective < best_obj:
                best_obj = sol.objective
                incumbent = Solution(Status.OPTIMAL, sol.objective, vals)
            continue
        name = p.var_names[branch]
        v = sol.values[name]
        down, up = math.floor(v), math.ceil(v)
        for lo, hi in (((None, float(down))), ((float(up), None))):
            child = dict(overrides)
            old = child.get(name, (None, None))
            child[name] = (lo if lo is not None else old[0],
                           hi if hi is not None else old[1])
            counter += 1
            heapq.heappush(heap, (sol.objective, counter, child))

    if incumbent is None:
        return Solution(Status.INFEASIBLE, math.inf)
    incumbent.gap = max(0.0, min(best_obj - global_lb, cfg.mip_gap))
    return incumbent
