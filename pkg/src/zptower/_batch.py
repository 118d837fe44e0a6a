"""Vectorised arithmetic in (Z/N)[X]/(M) for many elements at once.

Elements are rows of an integer array of shape (rows, k).  The monic modulus M
is either shared, shape (k+1,), or given per row, shape (rows, k+1); the same
code handles both through broadcasting.  Rows are int64 when every
intermediate fits, Python ints (dtype=object) otherwise.
"""

import numpy as np


def dtype_for(k, mod):
    return np.int64 if k * (mod - 1) ** 2 < 2**62 else object


def asarray(rows, k, mod):
    arr = np.array(rows, dtype=dtype_for(k, mod))
    return arr.reshape(-1, k) % mod


def modulus_array(M, k, mod):
    arr = np.array(M, dtype=dtype_for(k, mod))
    return arr % mod


def reduce(full, M, mod):
    """Reduce rows of degree < full.shape[1] modulo the monic M.

    Only the folded top coefficient is reduced at each step; the dtype bound
    k*(mod-1)^2 < 2^62 leaves room for the accumulated products.
    """
    k = M.shape[-1] - 1
    c = full % mod
    low = M[..., :k]
    for t in range(c.shape[1] - 1, k - 1, -1):
        top = c[:, t] % mod
        if low.ndim == 1:
            c[:, t - k:t] -= top[:, None] * low[None, :]
        else:
            c[:, t - k:t] -= top[:, None] * low
    return np.ascontiguousarray(c[:, :k] % mod)


def mul(a, b, M, mod):
    n, k = a.shape
    if k == 1:
        return (a * b) % mod
    full = np.zeros((n, 2 * k - 1), dtype=a.dtype)
    for i in range(k):
        full[:, i:i + k] += a[:, i:i + 1] * b
    return reduce(full, M, mod)


def one(n, k, mod):
    out = np.zeros((n, k), dtype=dtype_for(k, mod))
    out[:, 0] = 1
    return out


def power(a, e, M, mod):
    if e < 0:
        raise ValueError("negative exponent")
    result = one(a.shape[0], a.shape[1], mod)
    base = a.copy()
    while e:
        if e & 1:
            result = mul(result, base, M, mod)
        e >>= 1
        if e:
            base = mul(base, base, M, mod)
    return result


def x_class(M, n, mod):
    """The class of X in every row."""
    k = M.shape[-1] - 1
    out = np.zeros((n, k), dtype=dtype_for(k, mod))
    if k >= 2:
        out[:, 1] = 1
    else:
        out[:, 0] = (-M[..., 0]) % mod
    return out


def monomials(M, n, mod, count):
    """X^m mod M for m < count, shape (n, count, k)."""
    k = M.shape[-1] - 1
    low = M[..., :k]
    out = np.zeros((n, count, k), dtype=dtype_for(k, mod))
    cur = one(n, k, mod)
    for m in range(count):
        out[:, m, :] = cur
        top = cur[:, k - 1].copy()
        shifted = np.zeros_like(cur)
        shifted[:, 1:] = cur[:, :-1]
        if low.ndim == 1:
            shifted -= top[:, None] * low[None, :]
        else:
            shifted -= top[:, None] * low
        cur = shifted % mod
    return out


def trace_vector(M, n, mod):
    """Traces of multiplication by X^i (i < k) in the power basis, shape (n, k)."""
    k = M.shape[-1] - 1
    mono = monomials(M, n, mod, 2 * k - 1)
    tv = np.zeros((n, k), dtype=mono.dtype)
    for i in range(k):
        for j in range(k):
            tv[:, i] += mono[:, i + j, j]
    return tv % mod


def trace(a, tv, mod):
    return (a * tv).sum(axis=1) % mod


def teichmuller(a, M, p, prec, degree):
    """Teichmüller representatives of the rows of a (unit or zero residues).

    Each pass y -> y^Q with Q = p^degree gains ``degree`` p-adic digits, so
    ceil((prec - 1) / degree) passes reach the fixed point mod p^prec.
    """
    mod = p**prec
    q = p**degree
    y = a % mod
    passes = -(-(prec - 1) // degree) if prec > 1 else 0
    for _ in range(passes):
        y = power(y, q, M, mod)
    return y
