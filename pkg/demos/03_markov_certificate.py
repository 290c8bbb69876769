"""Why stable bounded-error probabilistic programs cannot beat the counter:
reading a block of ones is a Markov chain, and separating counts mod
2**(k+1) forces a class period divisible by 2**(k+1), hence that many
states.  The decomposition below makes the certificate concrete."""

import numpy as np

from obddlab import stable_symbol_chain
from obddlab.constructions import build_det_counter, build_det_partialmod
from obddlab.markov import (
    classify_states,
    limiting_distribution,
    period_lcm_certificate,
)

k = 1
m = 1 << (k + 1)

print(f"== the width-{m} counter for k={k} ==")
chain = stable_symbol_chain(build_det_partialmod(k, 4 * m), 1)
print("symbol-1 chain (column-stochastic):")
print(chain.astype(int))
dec = classify_states(chain)
print("ergodic classes:", [sorted(c) for c in dec.ergodic_classes])
print("periods:", dec.periods, "-> lcm D =", dec.period_lcm)
print("cyclic subsets:", [[sorted(s) for s in c] for c in dec.cyclic_subsets])
cert = period_lcm_certificate(dec, k)
print("certificate:", "pass" if cert.passed else "fail", "-", cert.reason)

print()
print(f"== a width-{m - 1} counter cannot work ==")
narrow = stable_symbol_chain(build_det_counter(m - 1, 4 * m), 1)
dec2 = classify_states(narrow)
print("periods:", dec2.periods, "-> lcm D =", dec2.period_lcm)
cert2 = period_lcm_certificate(dec2, k)
print("certificate:", "pass" if cert2.passed else "fail", "-", cert2.reason)

print()
print("== mixing chains, transients, and the limiting distribution ==")
mixed = np.array([
    [0.9, 0.2, 0.1],
    [0.1, 0.8, 0.2],
    [0.0, 0.0, 0.7],
])
dec3 = classify_states(mixed)
print("transient states:", sorted(dec3.transient))
print("ergodic classes:", [sorted(c) for c in dec3.ergodic_classes])
core = mixed[:2, :2] / mixed[:2, :2].sum(axis=0)
pi = limiting_distribution(core)
print("limiting distribution of the regular core:", np.round(pi, 6))
print("stationarity check |M pi - pi|:", float(np.max(np.abs(core @ pi - pi))))
