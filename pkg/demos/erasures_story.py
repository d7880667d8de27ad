##########################################################################
# decoders that only reject: the rate is set by the dead-output mass alone
##########################################################################

import numpy as np

from covertcap import (
    Bdmc,
    CovertInstance,
    erasures_only_capacity,
    erasures_only_metric,
    lower_bound,
    upper_bound,
    weight_parameter,
)

## main channel with one dead output: x=1 never produces y=2

WY = np.array([[0.5, 0.2, 0.3], [0.4, 0.6, 0.0]])
WZ = np.array([[0.8, 0.1, 0.1], [0.2, 0.3, 0.5]])
DELTA = 0.1

## the erasure metric scores live outputs 1 and dead outputs xi < 1;
## any xi in (0,1) declares the same rejection region, so the bounds
## cannot depend on it

print(f"{'xi':>6} {'lower':>14} {'upper':>14} {'closed form':>14}")
results = {}
for xi in (0.9, 0.5, 0.1, 0.01):
    wy = Bdmc(WY)
    inst = CovertInstance(wy=wy, wz=Bdmc(WZ), q=erasures_only_metric(wy, xi),
                          delta=DELTA)
    lo = lower_bound(inst).value
    hi = upper_bound(inst).value
    closed = erasures_only_capacity(inst)
    results[xi] = (lo, hi)
    print(f"{xi:6.2f} {lo:14.10f} {hi:14.10f} {closed:14.10f}")

spread_lo = max(v[0] for v in results.values()) - min(v[0] for v in results.values())
spread_hi = max(v[1] for v in results.values()) - min(v[1] for v in results.values())
print(f"spread across xi: lower {spread_lo:.1e}, upper {spread_hi:.1e}")

## the closed form is t * log(1 / P0(live outputs)): only the chance that
## the innocent symbol lands where x=1 could have landed matters

inst = CovertInstance(wy=Bdmc(WY), wz=Bdmc(WZ),
                      q=erasures_only_metric(Bdmc(WY), 0.5), delta=DELTA)
t = weight_parameter(DELTA, inst.q0, inst.q1).t
p0_live = WY[0, :2].sum()
print()
print(f"P0(live) = {p0_live}")
print(f"t * log(1/P0(live)) = {t * np.log(1 / p0_live):.10f}")
print(f"closed form         = {erasures_only_capacity(inst):.10f}")
