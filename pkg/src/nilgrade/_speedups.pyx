# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p transform kernels.

Same contract as _modp_fallback: inputs are residue matrices reduced to
0..p-1, outputs are (out, ok) with inadmissible rows zeroed.
"""
import numpy as np


cdef inline long _inv(long x, long p):
    cdef long r = 1
    cdef long b = x % p
    cdef long e = p - 2
    while e:
        if e & 1:
            r = r * b % p
        b = b * b % p
        e >>= 1
    return r


def a6_batch(params, changes, long p):
    cdef long a1 = params[0], a2 = params[1], a3 = params[2]
    cdef long a4 = params[3], a5 = params[4], a6 = params[5]
    cdef long[:, ::1] ch = changes
    cdef Py_ssize_t m = ch.shape[0], r
    out_arr = np.zeros((m, 6), dtype=np.int64)
    ok_arr = np.zeros(m, dtype=np.uint8)
    cdef long[:, ::1] out = out_arr
    cdef unsigned char[::1] ok = ok_arr
    cdef long A1, A2, A3, B2, B3, C2, C3, D, E, Di, Ei
    cdef long hBB, hBC, hCB, hCC, hBA, hCA

    for r in range(m):
        A1 = ch[r, 0]; A2 = ch[r, 1]; A3 = ch[r, 2]
        B2 = ch[r, 3]; B3 = ch[r, 4]; C3 = ch[r, 5]
        if A1 == 0 or C3 == 0:
            continue
        D = (A1 + a2 * A2 + a5 * A3) % p
        if D == 0:
            continue
        E = (A1 * B2 + a2 * A2 * B2 + a3 * A2 * B3
             + a5 * A3 * B2 + a6 * A3 * B3) % p
        if E == 0:
            continue
        Di = _inv(D, p)
        Ei = _inv(E, p)
        C2 = (p - C3 * ((a3 * A2 + a6 * A3) % p) % p) % p * Di % p

        hBA = (a2 * B2 * A2 + a3 * B2 * A3 + a5 * B3 * A2 + a6 * B3 * A3) % p
        hBB = (a2 * B2 * B2 + a3 * B2 * B3 + a5 * B3 * B2 + a6 * B3 * B3) % p
        hBC = (a2 * B2 * C2 + a3 * B2 * C3 + a5 * B3 * C2 + a6 * B3 * C3) % p
        hCA = (a2 * C2 * A2 + a3 * C2 * A3 + a5 * C3 * A2 + a6 * C3 * A3) % p
        hCB = (a2 * C2 * B2 + a3 * C2 * B3 + a5 * C3 * B2 + a6 * C3 * B3) % p
        hCC = (a2 * C2 * C2 + a3 * C2 * C3 + a5 * C3 * C2 + a6 * C3 * C3) % p

        out[r, 0] = (A1 * ((a1 * B2 + a4 * B3) % p) + hBA) % p * Ei % p
        out[r, 1] = hBB * Ei % p
        out[r, 2] = hBC * Ei % p
        out[r, 3] = (A1 * ((a1 * C2 + a4 * C3) % p) + hCA) % p * Ei % p
        out[r, 4] = hCB * Ei % p
        out[r, 5] = hCC * Ei % p
        ok[r] = 1
    return out_arr, ok_arr


def a6_batch_d0(params, changes, long p):
    """D = 0 stratum: C3 = 0, C2 free, A1 determined by (A2, A3).
    Rows are (A2, A3, B2, B3, C2)."""
    cdef long a1 = params[0], a2 = params[1], a3 = params[2]
    cdef long a4 = params[3], a5 = params[4], a6 = params[5]
    cdef long[:, ::1] ch = changes
    cdef Py_ssize_t m = ch.shape[0], r
    out_arr = np.zeros((m, 6), dtype=np.int64)
    ok_arr = np.zeros(m, dtype=np.uint8)
    cdef long[:, ::1] out = out_arr
    cdef unsigned char[::1] ok = ok_arr
    cdef long A1, A2, A3, B2, B3, C2, W, E, Ei

    for r in range(m):
        A2 = ch[r, 0]; A3 = ch[r, 1]; B2 = ch[r, 2]
        B3 = ch[r, 3]; C2 = ch[r, 4]
        if B3 == 0 or C2 == 0:
            continue
        A1 = (p - (a2 * A2 + a5 * A3) % p) % p
        if A1 == 0:
            continue
        W = (a3 * A2 + a6 * A3) % p
        if W == 0:
            continue
        E = B3 * W % p
        Ei = _inv(E, p)

        out[r, 0] = (A1 * ((a1 * B2 + a4 * B3) % p)
                     + (a2 * B2 * A2 + a3 * B2 * A3
                        + a5 * B3 * A2 + a6 * B3 * A3)) % p * Ei % p
        out[r, 1] = (a2 * B2 * B2 + a3 * B2 * B3
                     + a5 * B3 * B2 + a6 * B3 * B3) % p * Ei % p
        out[r, 2] = C2 * ((a2 * B2 + a5 * B3) % p) % p * Ei % p
        out[r, 3] = (A1 * a1 % p * C2
                     + C2 * ((a2 * A2 + a3 * A3) % p)) % p * Ei % p
        out[r, 4] = C2 * ((a2 * B2 + a3 * B3) % p) % p * Ei % p
        out[r, 5] = a2 * C2 % p * C2 % p * Ei % p
        ok[r] = 1
    return out_arr, ok_arr


def b4_batch(params, changes, long p):
    cdef long b1 = params[0], b2 = params[1], b3 = params[2], b4 = params[3]
    cdef long[:, ::1] ch = changes
    cdef Py_ssize_t m = ch.shape[0], r
    out_arr = np.zeros((m, 4), dtype=np.int64)
    ok_arr = np.zeros(m, dtype=np.uint8)
    cdef long[:, ::1] out = out_arr
    cdef unsigned char[::1] ok = ok_arr
    cdef long A1, A2, B2, C2, C3, Dh, Dhi, T

    for r in range(m):
        A1 = ch[r, 0]; A2 = ch[r, 1]; B2 = ch[r, 2]
        C2 = ch[r, 3]; C3 = ch[r, 4]
        if A1 == 0 or B2 == 0:
            continue
        Dh = ((A1 + b3 * A2) % p * C3 % p - b4 * A2 % p * C2 % p + p * p) % p
        if Dh == 0:
            continue
        Dhi = _inv(Dh, p)
        T = (b4 + b2 * b3 + (p - 1) * b1 * b4) % p

        out[r, 0] = ((b1 * A1 + b3 * A2) % p * C3 % p
                     + p * p - (b2 * A1 + b4 * A2) % p * C2 % p) % p * Dhi % p
        out[r, 1] = A1 * B2 % p * ((b2 * A1 + T * A2) % p) % p * Dhi % p
        out[r, 2] = B2 * ((b3 * C3 % p + p * p - b4 * C2 % p) % p) % p * Dhi % p
        out[r, 3] = A1 * B2 % p * B2 % p * b4 % p * Dhi % p
        ok[r] = 1
    return out_arr, ok_arr
