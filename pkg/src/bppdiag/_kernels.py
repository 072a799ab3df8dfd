"""Compiled inner loops for the heat-bath sampler.

Randomness is counter based: the update at tick ``t`` is a pure function of
``(seed, t)``, built from the splitmix64 output function.  Everything here
works in uint64; mixing in signed ints would make numba promote to float.
"""
import numba as nb
import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
M1 = np.uint64(0xBF58476D1CE4E5B9)
M2 = np.uint64(0x94D049BB133111EB)
SALT_U = np.uint64(0x5851F42D4C957F2D)
SALT_SITE = np.uint64(0x14057B7EF767814F)
SALT_DERIVE = np.uint64(0xD1B54A32D192ED03)
S30 = np.uint64(30)
S27 = np.uint64(27)
S31 = np.uint64(31)
S11 = np.uint64(11)
S32 = np.uint64(32)
S21 = np.uint64(21)
LOW32 = np.uint64(0xFFFFFFFF)
ONE = np.uint64(1)

STATUS_OK = 0
STATUS_NO_COALESCENCE = 1


@nb.njit(cache=True)
def mix(x):
    x = x ^ (x >> S30)
    x = x * M1
    x = x ^ (x >> S27)
    x = x * M2
    return x ^ (x >> S31)


@nb.njit(cache=True)
def keys(seed):
    return mix(seed ^ SALT_U), mix(seed ^ SALT_SITE)


@nb.njit(cache=True)
def draw53(key, t):
    """53 uniform bits for tick t."""
    return mix(key + np.uint64(t) * GOLDEN) >> S11


@nb.njit(cache=True)
def scale53(bits, n):
    """floor(bits * n / 2**53) exactly, for n < 2**32."""
    n = np.uint64(n)
    hi = (bits >> S32) * n
    lo = ((bits & LOW32) * n) >> S32
    return np.int64((hi + lo) >> S21)


@nb.njit(cache=True)
def heat_bath(z, r, j, c, bits):
    a, b = z.shape
    lo = 0
    if r + 1 < a:
        lo = z[r + 1, j]
    if j + 1 < b and z[r, j + 1] > lo:
        lo = z[r, j + 1]
    hi = c
    if r > 0:
        hi = z[r - 1, j]
    if j > 0 and z[r, j - 1] < hi:
        hi = z[r, j - 1]
    z[r, j] = lo + scale53(bits, hi - lo + 1)


@nb.njit(cache=True)
def apply_tick(z, c, key_u, key_s, t):
    b = z.shape[1]
    cell = scale53(draw53(key_s, t), z.size)
    heat_bath(z, cell // b, cell % b, c, draw53(key_u, t))


@nb.njit(cache=True)
def run_forward(z, c, seed, t_first, t_last):
    """Apply ticks t_first..t_last (inclusive, increasing) in place."""
    key_u, key_s = keys(np.uint64(seed))
    for t in range(t_first, t_last + 1):
        apply_tick(z, c, key_u, key_s, t)


@nb.njit(cache=True)
def cftp(a, b, c, seed, t_start, t_max):
    """Monotone coupling from the past.

    Tick ``t`` is the update at time ``-t``.  Epoch T replays ticks
    T, T-1, ..., 1 from the bottom and top states.  Returns
    (state, T, status).
    """
    key_u, key_s = keys(np.uint64(seed))
    lo = np.zeros((a, b), dtype=np.int64)
    hi = np.full((a, b), c, dtype=np.int64)
    T = t_start
    while True:
        lo[:, :] = 0
        hi[:, :] = c
        for t in range(T, 0, -1):
            apply_tick(lo, c, key_u, key_s, t)
            apply_tick(hi, c, key_u, key_s, t)
        if np.array_equal(lo, hi):
            return lo, T, STATUS_OK
        if T >= t_max:
            return lo, T, STATUS_NO_COALESCENCE
        T *= 2


@nb.njit(cache=True)
def derive_seed(seed, k):
    return mix(mix(np.uint64(seed) ^ SALT_DERIVE) + (np.uint64(k) + ONE) * GOLDEN)


@nb.njit(cache=True)
def derive_seeds(seed, n):
    out = np.empty(n, dtype=np.uint64)
    for k in range(n):
        out[k] = derive_seed(seed, k)
    return out


@nb.njit(cache=True, nogil=True)
def cftp_batch(a, b, c, seeds, t_start, t_max):
    n = seeds.shape[0]
    out = np.empty((n, a, b), dtype=np.int64)
    times = np.empty(n, dtype=np.int64)
    for k in range(n):
        z, T, status = cftp(a, b, c, seeds[k], t_start, t_max)
        if status != STATUS_OK:
            times[k] = -T
        else:
            times[k] = T
        out[k] = z
    return out, times


@nb.njit(cache=True, nogil=True)
def mcmc_batch(start, c, seeds, n_ticks):
    n = seeds.shape[0]
    a, b = start.shape
    out = np.empty((n, a, b), dtype=np.int64)
    for k in range(n):
        z = start.copy()
        run_forward(z, c, seeds[k], 1, n_ticks)
        out[k] = z
    return out
