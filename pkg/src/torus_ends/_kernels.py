"""Hot loops, compiled with numba when available.

Set TORUS_ENDS_NO_NUMBA=1 to force the pure numpy/python versions.  Both
paths share the same source; the fallback just skips compilation, except
for the level sweep which has a vectorized numpy twin.
"""

import os

import numpy as np

SAT = 1e120

USE_NUMBA = os.environ.get("TORUS_ENDS_NO_NUMBA", "") not in ("1", "true", "yes")
if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def recurrence(x, y0, y1, n):
    """y_0..y_{n-1} of y_{k+1} = x y_k - y_{k-1}; entries past saturation are inf."""
    out = np.empty(n, dtype=np.complex128)
    if n == 0:
        return out
    out[0] = y0
    if n == 1:
        return out
    out[1] = y1
    a, b = y0, y1
    sat = False
    for k in range(2, n):
        if sat:
            out[k] = np.inf
            continue
        c = x * b - a
        if not (abs(c) <= SAT):
            sat = True
            out[k] = np.inf
            continue
        out[k] = c
        a, b = b, c
    return out


@njit(cache=True)
def scan_ray(x, y0, y1, nmax, lo, r, eps):
    """Walk y_k (k >= 0) and return the first k with |y_k| <= lo or y_k within
    eps of +-r; -1 if none up to nmax.  Stops (returns -2) once |y_k| passes
    the saturation bound, since growth then continues."""
    a, b = y0, y1
    for k in range(nmax):
        v = a
        if abs(v) > SAT:
            return -2
        if abs(v) <= lo or abs(v - r) <= eps or abs(v + r) <= eps:
            return k
        c = x * b - a
        a, b = b, c
    return -1


@njit(cache=True)
def walk_to_sign_change(z, a0, a1, nmax, eps):
    """Real boundary walk a_{j+1} = z a_j - a_{j-1} from (a0, a1).

    Returns (j, kind, a_j, a_{j+1}) where kind is 0 for a sign change between
    a_j and a_{j+1}, 1 for a zero at a_j, and -1 if nothing was found.
    """
    a, b = a0, a1
    for j in range(nmax):
        if abs(a) <= eps:
            return j, 1, a, b
        if abs(b) <= eps:
            return j + 1, 1, b, z * b - a
        if a * b < 0:
            return j, 0, a, b
        c = z * b - a
        a, b = b, c
    return nmax, -1, a, b


@njit(cache=True)
def traces_along(x, y, z, moves):
    """Apply a sequence of moves to the vertex values (x, y, z).

    Move 0 replaces z by xy - z, 1 replaces x by yz - x, 2 replaces y by
    xz - y.  Returns the final triple; saturated values become inf.
    """
    for m in moves:
        if m == 0:
            z = x * y - z
        elif m == 1:
            x = y * z - x
        else:
            y = x * z - y
        if abs(x) > SAT or abs(y) > SAT or abs(z) > SAT:
            return np.inf + 0j, np.inf + 0j, np.inf + 0j
    return x, y, z


@njit(cache=True)
def _level_sweep_jit(xs, ys, zs):
    n = xs.shape[0]
    ox = np.empty(2 * n, dtype=np.complex128)
    oy = np.empty(2 * n, dtype=np.complex128)
    oz = np.empty(2 * n, dtype=np.complex128)
    for i in range(n):
        x, y, z = xs[i], ys[i], zs[i]
        w = x * y - z
        # children: the two triangles across the edges (x, w) and (w, y)
        ox[2 * i] = x
        oy[2 * i] = w
        oz[2 * i] = x * w - y
        ox[2 * i + 1] = w
        oy[2 * i + 1] = y
        oz[2 * i + 1] = w * y - x
    return ox, oy, oz


def _level_sweep_np(xs, ys, zs):
    w = xs * ys - zs
    ox = np.empty(2 * xs.shape[0], dtype=np.complex128)
    oy = np.empty_like(ox)
    oz = np.empty_like(ox)
    ox[0::2], oy[0::2], oz[0::2] = xs, w, xs * w - ys
    ox[1::2], oy[1::2], oz[1::2] = w, ys, w * ys - xs
    return ox, oy, oz


def level_sweep(xs, ys, zs):
    """One level of the Fricke tree below edges (x, y) with explored side z.

    Each input (x, y; z) is an edge with flanking values x, y and the value z
    of the region already seen.  The new region has value w = xy - z and the
    outputs are the two child edges (x, w; y) and (w, y; x).
    """
    xs = np.asarray(xs, dtype=np.complex128)
    ys = np.asarray(ys, dtype=np.complex128)
    zs = np.asarray(zs, dtype=np.complex128)
    if USE_NUMBA:
        return _level_sweep_jit(xs, ys, zs)
    return _level_sweep_np(xs, ys, zs)


def level_sweep_numpy(xs, ys, zs):
    return _level_sweep_np(
        np.asarray(xs, dtype=np.complex128),
        np.asarray(ys, dtype=np.complex128),
        np.asarray(zs, dtype=np.complex128),
    )


def warmup():
    """Trigger compilation so timed code does not pay for it."""
    recurrence(3.0 + 0j, 3.0 + 0j, 6.0 + 0j, 4)
    scan_ray(3.0 + 0j, 3.0 + 0j, 6.0 + 0j, 4, 2.0, 0.0 + 0j, 1e-9)
    walk_to_sign_change(3.0, 1.0, 2.0, 4, 1e-9)
    traces_along(3.0 + 0j, 3.0 + 0j, 3.0 + 0j, np.zeros(2, dtype=np.int64))
    level_sweep(np.ones(2), np.ones(2), np.ones(2))
