"""Score environments against the two spectral-design guidelines.

A good reset environment needs (i) strong decoherence-rate contrast
between the computation and restoring frequencies, and (ii) a rate that
increases with frequency, so that faster restoring also means a lower
thermal target and the controller never has to trade one for the other.
"""

import qreset as q

BOUNDS = q.ControlBounds()

print(f"{'spectrum':10s} {'contrast':>12s} {'trend':>7s} {'restoring f (GHz)':>18s}")
for name, model in [
    ("lz", q.Lorentzian()),
    ("prot", q.Protected()),
    ("mix", q.Mixed()),
    ("jqf", q.JQF()),
]:
    g = q.guideline_report(model, BOUNDS)
    trend = {1: "rising", 0: "flat", -1: "falling"}[g.trend_sign]
    print(f"{name:10s} {g.contrast:>12.3g} {trend:>7s} {g.restoring_f_ghz:>18.4f}")
    for note in g.notes:
        print(f"    note: {note}")

print()
print("Low contrast (jqf, ~0.1) leaves the restoring stage barely faster")
print("than passive decay; a falling trend (mix, jqf) forces the late-time")
print("trade-off between restoring speed and restoring target.")

# Custom spectra come in as CSV tables and run through the same pipeline.
custom = q.load_tabulated("""f_GHz,rate_per_us
2.0,0.05
4.0,0.3
6.0,2.0
8.0,9.0
""")
g = q.guideline_report(custom, BOUNDS)
print()
print(f"tabulated example: contrast {g.contrast:.3g}, trend sign {g.trend_sign:+d}"
      f" -> both guidelines satisfied")

env = q.Environment(0.010)
report, _ = q.run_reset(custom, env, BOUNDS, q.TimeLocalOptimal(), q.Numerics())
print(f"tabulated example reset: tau_st/T1 = {report.tau_st_over_T1:.3g},"
      f" W_ex/(kT ln2) = {report.W_ex_norm:.2f}")
