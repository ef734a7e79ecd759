# %% [markdown]
# # Complete exponential sums behind the bound
#
# The discrepancy bound for the p-sets rests on estimates of the form
# |sum_n e(f(n)/p)| <= (d-1) sqrt(p) for polynomials f of degree d.
# For the R family the sum is p times the number of roots of
# g(a) = h_1 + h_2 a + ... + h_d a^(d-1).

# %%
import math

from perdisc import exp_sum_P, exp_sum_R, exp_sum_R_roots, weil_sweep

print(exp_sum_P(7, (1, 1)), math.sqrt(7))       # the bound is attained
print(round(exp_sum_R(5, (1, 1)), 12), exp_sum_R_roots(5, (1, 1)))

# %% [markdown]
# An exhaustive sweep over h in [-p, p]^d is cheap. With d < p no
# frequency vector exceeds the bound.

# %%
for fam, p, d in [("P", 11, 4), ("Q", 5, 3), ("R", 13, 4)]:
    s = weil_sweep(fam, p, d)
    print(f"{fam} p={p} d={d}: {s.n_eligible} vectors, max |S| = {s.max_modulus:.3f}, bound {s.bound:.3f}")

# %% [markdown]
# When d >= p the polynomial can vanish identically on F_p, and then the
# sum is p. For p = 2, n + n^2 is even for every n.

# %%
s = weil_sweep("P", 2, 2)
print(s.n_violations, s.violations[:2], s.bound)
