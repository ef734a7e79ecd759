"""Periodic L2-discrepancy of Korobov's p-sets.

The submodules are

``pointset``     exact and floating point sets, periodic boxes, file format
``korobov``      the P, Q and R p-set families and primality helpers
``discrepancy``  B2 pair sum, Warnock sum, Fourier series, Monte Carlo oracles
``expsums``      complete exponential sums and their Weil-type bounds
``bounds``       closed-form bounds, averages and inverse-discrepancy table
``cli``          the ``perdisc`` command
"""

from .pointset import (
    FreePointSet,
    PeriodicBox,
    PointSet,
    build_point_set,
    equal_weights,
    free_point_set,
    local_discrepancy,
    periodic_box_volume,
    point_in_periodic_box,
    shift_point_set,
)
from .korobov import (
    PSetFamily,
    gen_korobov_P,
    gen_korobov_Q,
    gen_korobov_R,
    generate,
    is_prime,
    mod_pow,
    next_prime,
)
from .discrepancy import (
    DiscrepancyResult,
    Method,
    ResourceError,
    bernoulli_b2,
    find_good_shift,
    periodic_l2,
    periodic_l2_fourier,
    periodic_l2_mc,
    periodic_l2_weighted,
    plain_l2,
    plain_l2_weighted,
    rms_shifted_l2_mc,
)
from .expsums import (
    check_weil_bounds,
    exp_sum_P,
    exp_sum_Q,
    exp_sum_R,
    exp_sum_R_roots,
    weil_bound,
    weil_sweep,
)
from .bounds import (
    average_periodic_l2,
    check_theorem1,
    initial_periodic_l2,
    inverse_bound_table,
    inverse_lower_equal,
    inverse_lower_posweights,
    inverse_lower_weighted,
    inverse_upper_from_psets,
    theorem1_bound,
)

__version__ = "0.1.0"
