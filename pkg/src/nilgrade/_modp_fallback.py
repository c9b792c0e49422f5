"""Vectorized mod-p transform kernels, used when the compiled module is
unavailable (or disabled with NILGRADE_PURE=1).

Both backends take residue matrices already reduced to 0..p-1 and return
(out, ok): the transformed parameter rows and a mask of admissible changes.
Rows with ok == 0 are zeroed, never meaningful.
"""
from __future__ import annotations

import numpy as np


def _pow_mod(base: np.ndarray, exp: int, p: int) -> np.ndarray:
    result = np.ones_like(base)
    b = base % p
    e = exp
    while e:
        if e & 1:
            result = result * b % p
        b = b * b % p
        e >>= 1
    return result


def _inv_mod(x: np.ndarray, p: int) -> np.ndarray:
    # Fermat inverse; returns 0 on 0, which admissibility masks out anyway
    return _pow_mod(x, p - 2, p)


def a6_batch(params, changes, p: int):
    a1, a2, a3, a4, a5, a6 = (int(x) for x in params)
    ch = np.asarray(changes, dtype=np.int64)
    A1, A2, A3, B2, B3, C3 = (ch[:, k] for k in range(6))

    D = (A1 + a2 * A2 + a5 * A3) % p
    E = (A1 * B2 + a2 * A2 * B2 + a3 * A2 * B3 + a5 * A3 * B2 + a6 * A3 * B3) % p
    ok = (A1 != 0) & (C3 != 0) & (D != 0) & (E != 0)

    Di = _inv_mod(D, p)
    Ei = _inv_mod(E, p)
    C2 = -(C3 * ((a3 * A2 + a6 * A3) % p)) % p * Di % p

    def h(u1, u2, v1, v2):
        return (a2 * u1 * v1 + a3 * u1 * v2 + a5 * u2 * v1 + a6 * u2 * v2) % p

    out = np.empty((ch.shape[0], 6), dtype=np.int64)
    out[:, 0] = (A1 * ((a1 * B2 + a4 * B3) % p) + h(B2, B3, A2, A3)) % p * Ei % p
    out[:, 1] = h(B2, B3, B2, B3) * Ei % p
    out[:, 2] = h(B2, B3, C2, C3) * Ei % p
    out[:, 3] = (A1 * ((a1 * C2 + a4 * C3) % p) + h(C2, C3, A2, A3)) % p * Ei % p
    out[:, 4] = h(C2, C3, B2, B3) * Ei % p
    out[:, 5] = h(C2, C3, C2, C3) * Ei % p
    out[~ok] = 0
    return out, ok.astype(np.uint8)


def a6_batch_d0(params, changes, p: int):
    """The changes the six-parameter chart misses: D = 0, so C3 must vanish
    and C2 runs free.  Rows are (A2, A3, B2, B3, C2); A1 is determined."""
    a1, a2, a3, a4, a5, a6 = (int(x) for x in params)
    ch = np.asarray(changes, dtype=np.int64)
    A2, A3, B2, B3, C2 = (ch[:, k] for k in range(5))

    A1 = -(a2 * A2 + a5 * A3) % p
    W = (a3 * A2 + a6 * A3) % p
    ok = (A1 != 0) & (W != 0) & (B3 != 0) & (C2 != 0)
    E = B3 * W % p
    Ei = _inv_mod(E, p)

    out = np.empty((ch.shape[0], 6), dtype=np.int64)
    out[:, 0] = (A1 * ((a1 * B2 + a4 * B3) % p)
                 + (a2 * B2 * A2 + a3 * B2 * A3
                    + a5 * B3 * A2 + a6 * B3 * A3)) % p * Ei % p
    out[:, 1] = (a2 * B2 * B2 + a3 * B2 * B3
                 + a5 * B3 * B2 + a6 * B3 * B3) % p * Ei % p
    out[:, 2] = C2 * ((a2 * B2 + a5 * B3) % p) % p * Ei % p
    out[:, 3] = (A1 * a1 % p * C2 + C2 * ((a2 * A2 + a3 * A3) % p)) % p * Ei % p
    out[:, 4] = C2 * ((a2 * B2 + a3 * B3) % p) % p * Ei % p
    out[:, 5] = a2 * C2 % p * C2 % p * Ei % p
    out[~ok] = 0
    return out, ok.astype(np.uint8)


def b4_batch(params, changes, p: int):
    b1, b2, b3, b4 = (int(x) for x in params)
    ch = np.asarray(changes, dtype=np.int64)
    A1, A2, B2, C2, C3 = (ch[:, k] for k in range(5))

    Dh = ((A1 + b3 * A2) % p * C3 - b4 * A2 % p * C2) % p
    ok = (A1 != 0) & (B2 != 0) & (Dh != 0)
    Dhi = _inv_mod(Dh, p)
    T = (b4 + b2 * b3 - b1 * b4) % p

    out = np.empty((ch.shape[0], 4), dtype=np.int64)
    out[:, 0] = ((b1 * A1 + b3 * A2) % p * C3
                 - (b2 * A1 + b4 * A2) % p * C2) % p * Dhi % p
    out[:, 1] = A1 * B2 % p * ((b2 * A1 + T * A2) % p) % p * Dhi % p
    out[:, 2] = B2 * ((b3 * C3 - b4 * C2) % p) % p * Dhi % p
    out[:, 3] = A1 * B2 % p * B2 % p * b4 % p * Dhi % p
    out[~ok] = 0
    return out, ok.astype(np.uint8)
