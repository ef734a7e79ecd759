# %% [markdown]
# # How many points does dimension d need?
#
# To push the periodic L2-discrepancy below eps times its initial value
# 3^(-d/2), equal-weight rules need at least (3/2)^d / (1 + eps^2) points,
# while the P sets with a prime N >= (3/2)^d d^2 / eps^2 succeed. Both
# ends grow like (3/2)^d.

# %%
from perdisc import generate, initial_periodic_l2, inverse_bound_table, periodic_l2

for r in inverse_bound_table(range(1, 13, 2), [0.5, 0.1]):
    print(f"d={r.d:2d} eps={r.eps}  lower {r.lower_equal:9.2f}   upper {r.upper_from_psets:>9d}")

# %% [markdown]
# Check one row directly.

# %%
row = inverse_bound_table([3], [0.5])[0]
S = generate("P", row.N_prime, 3)
print(row.N_prime, periodic_l2(S).value, 0.5 * initial_periodic_l2(3))

# %% [markdown]
# A random shift search finds a shifted copy whose plain discrepancy is
# below the shift average.

# %%
from perdisc import find_good_shift, rms_shifted_l2_mc

delta, value = find_good_shift(S, n_candidates=500, seed=4)
print(delta, value, rms_shifted_l2_mc(S, n_shifts=500, seed=4).value)
