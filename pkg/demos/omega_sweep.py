"""How the robust price of protection grows with the ellipsoid radius.

Uses a deliberately capacity-tight network (bookable tonnage below worst-case
demand) so every robust plan must buy externally and the cost uncertainty
actually binds. Sweeps the radius Omega of the cost ellipsoid and prints the
static robust objective next to the box counterpart and the adjustable
(scenario hull) counterpart. Omega = 0 collapses to the nominal-cost box
problem; Omega = sqrt(D) dominates the full cost box.

Run:  python3 demos/omega_sweep.py
"""

import math

import supplyplan as sp

inst = sp.Instance(
    q=10.0, alpha=0.5,
    suppliers=(sp.Supplier("s1", 0.0, 60.0, ("p1",)),
               sp.Supplier("s2", 0.0, 60.0, ("p2",))),
    destinations=(sp.Destination("d1", 7.0, 40.0),
                  sp.Destination("d2", 9.0, 50.0)),
    arcs=(sp.Arc("s1", "p1", "d1", 2.0),
          sp.Arc("s2", "p2", "d1", 3.0),
          sp.Arc("s1", "p1", "d2", 2.5),
          sp.Arc("s2", "p2", "d2", 2.2)))

stream = sp.Stream(5)
demands = stream.uniform_matrix([60.0, 70.0], [110.0, 130.0], 12)
costs = stream.uniform_matrix([5.6, 7.2], [8.4, 10.8], 12)
scens = sp.ScenarioSet(demands, costs, dest_ids=inst.dest_ids)

box = sp.estimate_box(scens, scens.S)
cfg = sp.SolverConfig()

box_val = sp.solve_lp(sp.build_ro_box(inst, box), cfg).objective
print(f"box counterpart (worst-corner cost): {box_val:12.2f}")

print(f"{'omega':>8} {'eps bound':>10} {'ellipsoid':>12} {'adjustable':>12}")
for omega in (0.0, 1.0, math.sqrt(2.0), 2.0, 2.75):
    p, cone = sp.build_ro_ell(inst, box, sp.EllipseParams(omega))
    ell = sp.solve_cone(p, cone, cfg).objective
    p4, cones = sp.build_trsocp(inst, scens, omega)
    tr = sp.solve_cone(p4, cones, cfg).objective
    eps = math.exp(-omega ** 2 / 2.0)
    print(f"{omega:8.3f} {eps:10.4f} {ell:12.2f} {tr:12.2f}")

print("\nreading: 'eps bound' is the guaranteed probability that a bounded")
print("zero-mean cost perturbation exceeds the protected objective. The")
print("ellipsoid at omega = sqrt(D) = sqrt(2) already pays nearly the box")
print("price; the adjustable counterpart is never dearer than the static one.")
