"""Pairs of rankings where showing k items helps (good) or hurts (bad).

Swapping item 1 with the algorithm's top choice in both rankings sends each
good pair to a bad one, and the counts match exactly.
"""
from jointpick import events as E

a, h = (3, 1, 2), (2, 1, 3)
print(a, h, E.classify_event(a, h, 2).value)
a2, h2 = E.best_item_map(a, h, 2)
print(a2, h2, E.classify_event(a2, h2, 2).value)
print("back:", E.inverse_best_item_map(a2, h2, 2))

for n in (3, 4, 5):
    for k in range(1, n):
        r = E.verify_bijection(n, k)
        print(f"n={n} k={k}: good={r.good_count:5d} bad={r.bad_count:5d} ok={r.ok}")

# %% Equal counts, unequal probability: accurate agents put more mass on good pairs
for w in (0.0, 1.0):
    good, bad = E.event_mass_comparison(3, 2, 1.0, 1.0, w)
    print(f"anchor weight {w}: P(good)={good:.4f}  P(bad)={bad:.4f}")
