"""Pure-Python reference implementations of the scalar hot loops.

Every function here has a twin with the same signature in ``_kernels.pyx``;
``su11squeeze.kernels`` picks one at import time.
"""
import math

import numpy as np

EULER_GAMMA = 0.57721566490153286061
HALF_LOG_2PI = 0.91893853320467274178

# zeta(k) - 1 for k = 2..10; larger k are summed directly
_ZETA_M1_LOW = (
    0.64493406684822643647,
    0.20205690315959428540,
    0.08232323371113819152,
    0.03692775514336992633,
    0.01734306198444913971,
    0.00834927738192282684,
    0.00407735619794433938,
    0.00200839282608221442,
    0.00099457512781808534,
)


def _zeta_minus_one(k):
    if k <= 10:
        return _ZETA_M1_LOW[k - 2]
    return sum(n ** -float(k) for n in range(2, 48))


_ZETA_M1 = tuple(_zeta_minus_one(k) for k in range(2, 64))

# B_{2n} / (2n (2n - 1)) for n = 1..8
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)


def _lgamma_two_plus(z):
    # log Gamma(2 + z) for |z| <= 0.5
    total = z * (1.0 - EULER_GAMMA)
    zk = -z
    for i, c in enumerate(_ZETA_M1):
        k = i + 2
        zk *= -z
        term = c * zk / k
        total += term
        if abs(term) < 1e-18 * abs(total):
            break
    return total


def log_gamma(x):
    if not x > 0.0 or math.isinf(x):
        raise ValueError("log_gamma requires a finite x > 0, got %r" % (x,))
    if x < 0.5:
        return _lgamma_two_plus(x) - math.log1p(x) - math.log(x)
    if x < 1.5:
        z = x - 1.0
        return _lgamma_two_plus(z) - math.log1p(z)
    if x < 2.5:
        return _lgamma_two_plus(x - 2.0)
    if x < 15.0:
        prod = 1.0
        y = x
        while y >= 2.5:
            y -= 1.0
            prod *= y
        return math.log(prod) + _lgamma_two_plus(y - 2.0)
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    p = inv
    for c in _STIRLING:
        series += c * p
        p *= inv2
    return (x - 0.5) * math.log(x) - x + HALF_LOG_2PI + series


def log_gamma_array(x):
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    flat_in = x.ravel()
    flat_out = out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = log_gamma(float(flat_in[i]))
    return out


_LOG_SCALE = 280.0 * math.log(10.0)


def _bessel_i_series_log(nu, x):
    # log I_nu(x) by the ascending series; terms are all positive
    q = 0.25 * x * x
    term = 1.0
    total = 1.0
    rescales = 0
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + nu))
        total += term
        if total > 1e280:
            total *= 1e-280
            term *= 1e-280
            rescales += 1
        if term < 1e-17 * total and k > q / (k + nu + 1.0):
            break
        if k > 100000:
            break
    log_pref = nu * math.log(0.5 * x) - log_gamma(nu + 1.0)
    return log_pref + math.log(total) + rescales * _LOG_SCALE


def _bessel_i_asymptotic(nu, x):
    # large-argument Hankel expansion; returns None when it does not reach 1e-16
    mu = 4.0 * nu * nu
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        odd = 2.0 * k - 1.0
        new = -term * (mu - odd * odd) / (8.0 * k * x)
        if new == 0.0:
            return total
        if abs(new) >= abs(term):
            return None
        term = new
        total += term
        if abs(term) < 1e-17 * abs(total):
            return total
        if k > 200:
            return None


def bessel_i(nu, x):
    """Return I_nu(x); ``inf`` signals overflow."""
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    if x >= 30.0:
        s = _bessel_i_asymptotic(nu, x)
        if s is not None:
            log_val = x - 0.5 * math.log(2.0 * math.pi * x) + math.log(s)
            if log_val > 709.78:
                return math.inf
            if x < 700.0:
                return math.exp(x) / math.sqrt(2.0 * math.pi * x) * s
            return math.exp(log_val)
    log_val = _bessel_i_series_log(nu, x)
    if log_val > 709.78:
        return math.inf
    return math.exp(log_val)


def bessel_i_ratio(nu, x, tol=1e-15, max_iter=200000):
    """I_nu(x) / I_{nu-1}(x) by modified Lentz; returns (ratio, est_error)."""
    if x == 0.0:
        return 0.0, 0.0
    tiny = 1e-300
    x2 = x * x
    f = tiny
    c = f
    d = 0.0
    delta = 0.0
    for j in range(1, max_iter + 1):
        if j == 1:
            a = x
            b = 2.0 * nu
        else:
            a = x2
            b = 2.0 * (nu + j - 1)
        d = b + a * d
        if d == 0.0:
            d = tiny
        c = b + a / c
        if c == 0.0:
            c = tiny
        d = 1.0 / d
        delta = c * d
        f *= delta
        if abs(delta - 1.0) < tol:
            break
    return f, abs(delta - 1.0)


def marching_segments(field):
    """Zero-level marching squares on a 2-D array.

    A node is "inside" when its value is < 0.  Returns an int64 array of shape
    (nseg, 2) of edge ids; edge id ``2*(i*n2 + j)`` is the edge from (i, j) to
    (i, j+1), ``2*(i*n2 + j) + 1`` the edge from (i, j) to (i+1, j).  Cells
    touching a NaN are skipped.
    """
    f = np.asarray(field, dtype=float)
    n1, n2 = f.shape
    segs = []
    for i in range(n1 - 1):
        for j in range(n2 - 1):
            fa = f[i, j]
            fb = f[i, j + 1]
            fc = f[i + 1, j + 1]
            fd = f[i + 1, j]
            if fa != fa or fb != fb or fc != fc or fd != fd:
                continue
            a = fa < 0.0
            b = fb < 0.0
            c = fc < 0.0
            d = fd < 0.0
            e0 = 2 * (i * n2 + j)
            e1 = 2 * (i * n2 + j + 1) + 1
            e2 = 2 * ((i + 1) * n2 + j)
            e3 = 2 * (i * n2 + j) + 1
            crossed = []
            if a != b:
                crossed.append(e0)
            if b != c:
                crossed.append(e1)
            if c != d:
                crossed.append(e2)
            if d != a:
                crossed.append(e3)
            if len(crossed) == 2:
                segs.append((crossed[0], crossed[1]))
            elif len(crossed) == 4:
                centre_in = 0.25 * (fa + fb + fc + fd) < 0.0
                if centre_in == a:
                    segs.append((e0, e1))
                    segs.append((e2, e3))
                else:
                    segs.append((e3, e0))
                    segs.append((e1, e2))
    return np.array(segs, dtype=np.int64).reshape(-1, 2)
