# %% [markdown]
# # Korobov p-sets and their periodic L2-discrepancy
#
# Three explicit point sets are built from a prime p: P (p points, powers
# of n mod p), Q (p^2 points, powers of n mod p^2) and R (p^2 points, the
# union of the rank-1 lattices with generators (1, a, ..., a^(d-1)) mod p).
# Their periodic L2-discrepancy is at most d 2^(-d/2) N^(-1/2).

# %%
from perdisc import gen_korobov_P, generate, periodic_l2, theorem1_bound

P = gen_korobov_P(5, 2)
print(P.numerators.T)          # rows: n mod 5, n^2 mod 5
print(periodic_l2(P, exact=True).exact_value_squared)

# %% [markdown]
# The bound holds with room to spare across the families.

# %%
for fam in "PQR":
    for p in (5, 11, 23):
        for d in (1, 3, 5):
            S = generate(fam, p, d)
            v = periodic_l2(S).value
            b = theorem1_bound(d, S.n_points)
            print(f"{fam} p={p:2d} d={d}  N={S.n_points:4d}  value={v:.5f}  bound={b:.5f}  ratio={v / b:.3f}")
