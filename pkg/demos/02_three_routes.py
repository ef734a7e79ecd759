# %% [markdown]
# # Three ways to compute the same number
#
# The periodic L2-discrepancy has a closed pair sum in the Bernoulli
# polynomial B2, a Fourier series, and its defining integral over all
# wrap-around boxes. They should agree, each within its own error measure.

# %%
import numpy as np

from perdisc import free_point_set, gen_korobov_R, periodic_l2, periodic_l2_fourier, periodic_l2_mc

rng = np.random.default_rng(1)
sets = {"random N=20 d=2": free_point_set(rng.random((20, 2))), "R p=7 d=2": gen_korobov_R(7, 2)}

for name, S in sets.items():
    b2 = periodic_l2(S).value_squared
    f = periodic_l2_fourier(S, K=64)
    mc = periodic_l2_mc(S, n_samples=10**5, seed=2)
    print(name)
    print(f"  B2 pair sum   {b2:.8f}")
    print(f"  Fourier K=64  {f.value_squared:.8f}  (missing at most {f.tail_bound:.1e})")
    print(f"  Monte Carlo   {mc.value_squared:.8f}  +- {mc.std_error:.1e}")

# %% [markdown]
# Averaging the plain (anchored) discrepancy over random shifts of a point
# set gives back the periodic discrepancy.

# %%
from perdisc import plain_l2, rms_shifted_l2_mc

S = sets["R p=7 d=2"]
rms = rms_shifted_l2_mc(S, n_shifts=10**4, seed=3)
print(f"unshifted plain^2 {plain_l2(S).value_squared:.6f}")
print(f"mean over shifts  {rms.value_squared:.6f} +- {rms.std_error:.1e}")
print(f"periodic^2        {periodic_l2(S).value_squared:.6f}")
