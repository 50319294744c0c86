"""Hot loops for truncated power series over a prime field F_p.

Coefficient vectors are ``int64`` arrays with entries in ``[0, p)`` and
``p < 2**31``.  Each kernel exists twice: a numba-compiled loop and a numpy
version built on ``np.convolve``.  :data:`ACTIVE` is the one the rest of the
package calls; which one it is depends on :mod:`wildseries._accel`.
"""
from __future__ import annotations

from types import SimpleNamespace

import numpy as np

from ._accel import USE_NUMBA, njit

_I64_MAX = np.iinfo(np.int64).max


def _acc_limit(p: int) -> int:
    """Number of products (< p**2) that can be summed in int64 before a reduction."""
    sq = (p - 1) * (p - 1)
    return max(1, _I64_MAX // max(sq, 1) - 1)


# --------------------------------------------------------------------------
# numba


@njit(cache=True)
def _nb_mul(a, la, b, lb, n, p, out):
    sq = (p - 1) * (p - 1)
    lim = 9223372036854775807 // max(sq, 1) - 1
    if lim < 1:
        lim = 1
    for k in range(n):
        lo = k - lb + 1
        if lo < 0:
            lo = 0
        hi = k
        if hi > la - 1:
            hi = la - 1
        s = 0
        # reduce once per block of lim products; the inner loop stays branch-free
        start = lo
        while start <= hi:
            # hi + 1 - start <= lim avoids start + lim, which overflows for tiny p
            stop = hi + 1 if hi + 1 - start <= lim else start + lim
            blk = 0
            for i in range(start, stop):
                blk += a[i] * b[k - i]
            s = (s + blk % p) % p
            start = stop
        out[k] = s


@njit(cache=True)
def nb_mul_trunc(a, b, n, p):
    out = np.zeros(n, np.int64)
    la = min(len(a), n)
    lb = min(len(b), n)
    if la == 0 or lb == 0:
        return out
    _nb_mul(a, la, b, lb, n, p, out)
    return out


@njit(cache=True)
def nb_compose(f, g, n, p):
    out = np.zeros(n, np.int64)
    d = min(len(f), n) - 1
    while d > 0 and f[d] == 0:
        d -= 1
    if d < 0:
        return out
    acc = np.zeros(n, np.int64)
    tmp = np.zeros(n, np.int64)
    acc[0] = f[d]
    lg = min(len(g), n)
    for k in range(d - 1, -1, -1):
        m = n - k
        # acc is meaningful mod z^(n-k-1); g mod z^(n-k)
        _nb_mul(acc, m - 1 if m - 1 > 0 else 1, g, min(lg, m), m, p, tmp)
        for i in range(m):
            acc[i] = tmp[i]
        acc[0] = (acc[0] + f[k]) % p
    for i in range(n):
        out[i] = acc[i]
    return out


@njit(cache=True)
def _nb_powmod(a, e, p):
    r = 1
    a = a % p
    while e > 0:
        if e & 1:
            r = (r * a) % p
        a = (a * a) % p
        e >>= 1
    return r


@njit(cache=True)
def nb_inverse(u, n, p):
    out = np.zeros(n, np.int64)
    lu = min(len(u), n)
    inv0 = _nb_powmod(u[0], p - 2, p)
    out[0] = inv0
    sq = (p - 1) * (p - 1)
    lim = 9223372036854775807 // max(sq, 1) - 1
    if lim < 1:
        lim = 1
    for k in range(1, n):
        s = 0
        cnt = 0
        top = k if k < lu - 1 else lu - 1
        for j in range(1, top + 1):
            s += u[j] * out[k - j]
            cnt += 1
            if cnt == lim:
                s %= p
                cnt = 0
        s %= p
        out[k] = ((p - s) % p) * inv0 % p
    return out


# --------------------------------------------------------------------------
# numpy


def np_mul_trunc(a, b, n, p):
    a = a[:n]
    b = b[:n]
    out = np.zeros(n, np.int64)
    if len(a) == 0 or len(b) == 0:
        return out
    if min(len(a), len(b)) < _acc_limit(p):
        c = np.convolve(a, b)[:n] % p
    else:
        c = (np.convolve(a.astype(object), b.astype(object))[:n] % p).astype(np.int64)
    out[: len(c)] = c
    return out


def np_compose(f, g, n, p):
    f = np.trim_zeros(f[:n], "b")
    out = np.zeros(n, np.int64)
    if len(f) == 0:
        return out
    d = len(f) - 1
    acc = np.array([f[d]], np.int64)
    for k in range(d - 1, -1, -1):
        m = n - k
        acc = np_mul_trunc(acc, g[:m], m, p)
        acc[0] = (acc[0] + f[k]) % p
    out[: len(acc)] = acc
    return out


def np_inverse(u, n, p):
    u = u[:n]
    out = np.zeros(n, np.int64)
    inv0 = pow(int(u[0]), p - 2, p)
    out[0] = inv0
    big = len(u) >= _acc_limit(p)
    for k in range(1, n):
        top = min(k, len(u) - 1)
        if top < 1:
            continue
        head = u[1 : top + 1]
        tail = out[k - top : k][::-1]
        if big:
            s = int(np.dot(head.astype(object), tail.astype(object))) % p
        else:
            s = int(np.dot(head, tail)) % p
        out[k] = (-s * inv0) % p
    return out


NUMBA = SimpleNamespace(name="numba", mul_trunc=nb_mul_trunc, compose=nb_compose, inverse=nb_inverse)
NUMPY = SimpleNamespace(name="numpy", mul_trunc=np_mul_trunc, compose=np_compose, inverse=np_inverse)
ACTIVE = NUMBA if USE_NUMBA else NUMPY


def warmup() -> None:
    """Trigger JIT compilation so timings exclude it."""
    a = np.array([0, 1, 2], np.int64)
    ACTIVE.mul_trunc(a, a, 4, 5)
    ACTIVE.compose(a, a, 4, 5)
    ACTIVE.inverse(np.array([1, 2], np.int64), 4, 5)
