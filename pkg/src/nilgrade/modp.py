"""Batch parameter transforms over F_p, with orbit enumeration on top.

The inner loops live twice: a Cython extension (nilgrade._speedups) and a
numpy fallback (nilgrade._modp_fallback) with the same contract.  The
extension is preferred when importable; set NILGRADE_PURE=1 to force the
fallback.  Everything downstream — orbits, separation sweeps, exhaustive
change searches — is backend-independent and bit-identical either way.
"""
from __future__ import annotations

import os
from typing import Iterator, Optional, Sequence, Set, Tuple

import numpy as np

from . import _modp_fallback

PURE_ENV = "NILGRADE_PURE"

_WIDTH = {"a6": 6, "b4": 5}
_OUT_WIDTH = {"a6": 6, "b4": 4}


def _select():
    if os.environ.get(PURE_ENV) == "1":
        return _modp_fallback, "python"
    try:
        from . import _speedups
    except ImportError:
        return _modp_fallback, "python"
    return _speedups, "compiled"


_impl, BACKEND = _select()


def _residues(values: Sequence, p: int) -> Tuple[int, ...]:
    return tuple(int(v) % p for v in values)


def a6_batch(params: Sequence, changes: np.ndarray, p: int):
    """Transform the a6 tuple by every change row; returns (out, ok)."""
    ch = np.ascontiguousarray(np.asarray(changes, dtype=np.int64) % p)
    return _impl.a6_batch(_residues(params, p), ch, p)


def a6_batch_d0(params: Sequence, changes: np.ndarray, p: int):
    """The D = 0 changes the six-wide chart cannot express; rows are
    (A2, A3, B2, B3, C2) with A1 determined and C3 = 0."""
    ch = np.ascontiguousarray(np.asarray(changes, dtype=np.int64) % p)
    return _impl.a6_batch_d0(_residues(params, p), ch, p)


def b4_batch(params: Sequence, changes: np.ndarray, p: int):
    ch = np.ascontiguousarray(np.asarray(changes, dtype=np.int64) % p)
    return _impl.b4_batch(_residues(params, p), ch, p)


def change_block(p: int, width: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the lexicographic grid F_p^width."""
    idx = np.arange(start, stop, dtype=np.int64)
    block = np.empty((len(idx), width), dtype=np.int64)
    for k in range(width - 1, -1, -1):
        block[:, k] = idx % p
        idx //= p
    return block


def iter_change_blocks(p: int, width: int,
                       chunk: int = 1 << 17) -> Iterator[np.ndarray]:
    total = p ** width
    for start in range(0, total, chunk):
        yield change_block(p, width, start, min(start + chunk, total))


def _encode(rows: np.ndarray, p: int) -> np.ndarray:
    weights = p ** np.arange(rows.shape[1] - 1, -1, -1, dtype=np.int64)
    return rows @ weights


def _charts(kind: str):
    """(batch kernel, grid width) pairs that together cover every valid
    change of the kind.  The a6 chart with C2 determined needs D != 0; the
    D = 0 changes (necessarily C3 = 0) form the second chart.  The b4
    parametrization has no determined slot, so one chart is the whole set."""
    if kind == "a6":
        return ((a6_batch, 6), (a6_batch_d0, 5))
    if kind == "b4":
        return ((b4_batch, 5),)
    raise ValueError(f"unknown family kind {kind!r}")


def orbit(kind: str, params: Sequence, p: int,
          chunk: int = 1 << 17) -> Set[Tuple[int, ...]]:
    """Every parameter tuple isomorphic to ``params`` over F_p.

    One step over all charts suffices: valid changes compose and invert,
    so the one-step image is the whole orbit.
    """
    seen: Set[Tuple[int, ...]] = set()
    for batch, width in _charts(kind):
        for block in iter_change_blocks(p, width, chunk):
            out, ok = batch(params, block, p)
            for row in out[ok.astype(bool)]:
                seen.add(tuple(int(x) for x in row))
    return seen


def _full_a6_change(kind_row: np.ndarray, chart: int, params: Sequence,
                    p: int) -> Tuple[int, ...]:
    """Normalize a chart row to the full (A1, A2, A3, B2, B3, C2, C3)."""
    a1, a2, a3, a4, a5, a6 = _residues(params, p)
    if chart == 0:
        A1, A2, A3, B2, B3, C3 = (int(x) for x in kind_row)
        D = (A1 + a2 * A2 + a5 * A3) % p
        C2 = -(C3 * (a3 * A2 + a6 * A3)) % p * pow(D, p - 2, p) % p
        return (A1, A2, A3, B2, B3, C2, C3)
    A2, A3, B2, B3, C2 = (int(x) for x in kind_row)
    A1 = -(a2 * A2 + a5 * A3) % p
    return (A1, A2, A3, B2, B3, C2, 0)


def find_change(kind: str, src: Sequence, dst: Sequence, p: int,
                chunk: int = 1 << 17) -> Optional[Tuple[int, ...]]:
    """First change (in chart-then-grid order) taking src to dst over F_p.

    For a6 the result is the full (A1, A2, A3, B2, B3, C2, C3); for b4 it
    is the (A1, A2, B2, C2, C3) row itself.  The scan order makes the
    witness deterministic; exhausting every chart without a hit proves the
    two tuples sit in different F_p orbits.
    """
    target = np.asarray(_residues(dst, p), dtype=np.int64)
    for chart, (batch, width) in enumerate(_charts(kind)):
        for block in iter_change_blocks(p, width, chunk):
            out, ok = batch(src, block, p)
            match = ok.astype(bool) & (out == target).all(axis=1)
            hit = np.flatnonzero(match)
            if hit.size:
                row = block[hit[0]]
                if kind == "a6":
                    return _full_a6_change(row, chart, src, p)
                return tuple(int(x) for x in row)
    return None


def a6_apply_full(params: Sequence, change: Sequence, p: int
                  ) -> Optional[Tuple[int, ...]]:
    """Apply a full 7-slot change (A1, A2, A3, B2, B3, C2, C3) exactly.

    Returns the transformed tuple, or None when the change is not a valid
    isomorphism of A(params) over F_p.  Chart-independent: used to verify
    witnesses coming out of find_change.
    """
    a1, a2, a3, a4, a5, a6 = _residues(params, p)
    A1, A2, A3, B2, B3, C2, C3 = _residues(change, p)
    D = (A1 + a2 * A2 + a5 * A3) % p
    W = (a3 * A2 + a6 * A3) % p
    if A1 == 0 or (B2 * C3 - B3 * C2) % p == 0:
        return None
    if (C2 * D + C3 * W) % p != 0:  # e_1' e_7' must stay zero
        return None
    E = (B2 * D + B3 * W) % p
    if E == 0:
        return None
    Ei = pow(E, p - 2, p)

    def h(u1, u2, v1, v2):
        return (a2 * u1 * v1 + a3 * u1 * v2 + a5 * u2 * v1 + a6 * u2 * v2) % p

    return (
        (A1 * (a1 * B2 + a4 * B3) + h(B2, B3, A2, A3)) * Ei % p,
        h(B2, B3, B2, B3) * Ei % p,
        h(B2, B3, C2, C3) * Ei % p,
        (A1 * (a1 * C2 + a4 * C3) + h(C2, C3, A2, A3)) * Ei % p,
        h(C2, C3, B2, B3) * Ei % p,
        h(C2, C3, C2, C3) * Ei % p,
    )


def separated_over_p(kind: str, pa: Sequence, qa: Sequence, p: int = 5,
                     chunk: int = 1 << 17) -> bool:
    """True when no admissible change over F_p maps pa to qa."""
    return find_change(kind, pa, qa, p, chunk) is None
