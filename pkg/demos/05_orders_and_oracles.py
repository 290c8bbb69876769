"""Variable orders matter: the non-palindrome function needs width 3 under
the outside-in pairing order but more under the natural one, while
symmetric functions cost the same under every order.  The exact oracles
also hand back a witness program of truly minimal width."""

from obddlab import (
    AcceptanceMode,
    computes,
    pairing_order,
    program_width,
    simulate,
    validate_program,
)
from obddlab.constructions import build_det_notpal
from obddlab.functions import eqs, mod_count, not_pal, partial_mod
from obddlab.oracles import (
    min_width_over_orders,
    minimal_obdd,
    prefix_classes,
    subfunction_widths,
)

n = 6
f = not_pal(n)
natural = subfunction_widths(f)
best = min_width_over_orders(not_pal(4))
print(f"NotPAL on {n} bits, natural order: width {natural.max_width}"
      f" (per level {natural.per_level})")
print(f"NotPAL on 4 bits, best of all orders: width {best.max_width}"
      f" with order {best.order}")
print("pairing order for n=4:", pairing_order(4).perm)

p = build_det_notpal(n)
print("explicit pairing-order program: width", program_width(p).max_width,
      "- computes:", computes(p, f, AcceptanceMode.deterministic()).ok)

print()
print("symmetric functions cost the same under every order:")
g = mod_count(3, 6)
print("  MOD(3, 6) over all orders:", min_width_over_orders(g).max_width,
      "== natural:", subfunction_widths(g).max_width)

print()
print("== prefix classes: what a level must remember ==")
h = eqs(4, 8)
for level in (1, 2, 3, 4):
    classes = prefix_classes(h, None, level)
    reps = [c.representative for c in classes]
    print(f"  level {level}: {len(classes)} classes, representatives {reps}")

print()
print("== a minimal-width witness program from the oracle ==")
pm = partial_mod(1, 6)
witness = minimal_obdd(pm)
print("witness widths:", program_width(witness).per_level,
      "valid:", validate_program(witness).ok)
print("computes the promise function:",
      computes(witness, pm, AcceptanceMode.deterministic()).ok)
print("acceptance on 4 ones:", simulate(witness, "111100"),
      "and on 2 ones:", simulate(witness, "110000"))
