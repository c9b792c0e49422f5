"""Characteristic sequences and gradation checks for nilpotent algebras.

The characteristic sequence reported here carries witnessed-lower-bound
semantics: the candidate pool is every canonical basis vector outside the
square of the algebra, all pairwise sums of those, and a seeded batch of
random Gaussian-integer vectors.  The true maximum over all elements outside
the square is attained on a dense open set, so the pool finds it in practice,
but the result is certified only as "some element achieves this".
"""
from __future__ import annotations

import random
from typing import List, Optional, Tuple

from .core import Algebra, Matrix, Vector, in_span, mat_mul, rank, rref
from .errors import ElementInSquare, NotNilpotentMatrix
from .scalar import FieldDescriptor, Qi


def echelon_pivots(rows: Matrix, field: FieldDescriptor) -> List[int]:
    """Pivot columns of rows already in echelon form."""
    pivots = []
    for row in rows:
        for c, v in enumerate(row):
            if not field.is_zero(v):
                pivots.append(c)
                break
    return pivots


def jordan_block_sizes(mat: Matrix, field: FieldDescriptor) -> Tuple[int, ...]:
    """Jordan block sizes of a nilpotent matrix, in decreasing order.

    Derived from the rank sequence: the number of blocks of size >= k is
    rank(M^{k-1}) - rank(M^k).
    """
    n = len(mat)
    ranks = [n]
    power = mat
    while ranks[-1] > 0:
        ranks.append(rank(power, field))
        if len(ranks) > n + 1:
            raise NotNilpotentMatrix(f"matrix rank never reaches zero ({ranks[-3:]})")
        if ranks[-1] > 0:
            power = mat_mul(power, mat, field)
    drops = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    sizes: List[int] = []
    for k in range(len(drops), 0, -1):
        exactly_k = drops[k - 1] - (drops[k] if k < len(drops) else 0)
        sizes.extend([k] * exactly_k)
    return tuple(sorted(sizes, reverse=True))


def characteristic_sequence_at(
    alg: Algebra, x: Vector, powers: Optional[List[Matrix]] = None
) -> Tuple[int, ...]:
    """Jordan type of left multiplication by x, for x outside the square."""
    if powers is None:
        powers = alg.power_filtration()
    square = powers[1] if len(powers) > 1 else []
    if in_span(x, square, echelon_pivots(square, alg.field), alg.field):
        raise ElementInSquare("characteristic sequence needs an element outside the square")
    return jordan_block_sizes(alg.left_mult_matrix(x), alg.field)


def _candidate_pool(alg: Algebra, seed: int, samples: int) -> List[Vector]:
    basis = [alg.basis_vector(i) for i in range(1, alg.dim + 1)]
    pool = list(basis)
    for i in range(alg.dim):
        for j in range(i + 1, alg.dim):
            pool.append([a + b for a, b in zip(basis[i], basis[j])])
    rng = random.Random(seed)
    for _ in range(samples):
        if alg.field.kind == "Fp":
            vec = [alg.field.coerce(rng.randrange(alg.field.p)) for _ in range(alg.dim)]
        else:
            vec = [
                alg.field.coerce(Qi(rng.randint(-3, 3), rng.randint(-3, 3)))
                for _ in range(alg.dim)
            ]
        pool.append(vec)
    return pool


def characteristic_sequence(
    alg: Algebra, seed: int = 42, samples: int = 25
) -> Tuple[Tuple[int, ...], Vector]:
    """Largest Jordan type found over the candidate pool, with its witness.

    Returns (sequence, witness).  Candidates inside the square are skipped;
    raises ElementInSquare only if every candidate lands in the square, which
    cannot happen for a nonzero nilpotent algebra since the canonical basis
    cannot be contained in it.
    """
    powers = alg.power_filtration()
    square = powers[1] if len(powers) > 1 else []
    sq_pivots = echelon_pivots(square, alg.field)
    best: Optional[Tuple[int, ...]] = None
    witness: Optional[Vector] = None
    for x in _candidate_pool(alg, seed, samples):
        if in_span(x, square, sq_pivots, alg.field):
            continue
        seq = jordan_block_sizes(alg.left_mult_matrix(x), alg.field)
        if best is None or seq > best:
            best, witness = seq, x
    if best is None:
        raise ElementInSquare("no candidate outside the square")
    return best, witness


# ---------------------------------------------------------------------------
# gradation


def filtration_degrees(alg: Algebra, powers: Optional[List[Matrix]] = None) -> Optional[List[int]]:
    """Degree of each original basis vector in the power filtration.

    deg(e_k) is the largest i with e_k in A^i.  Returns None when the basis
    is not adapted to the filtration (the degree counts fail to match the
    power dimensions).
    """
    if powers is None:
        powers = alg.power_filtration()
    degrees = []
    for k in range(1, alg.dim + 1):
        e = alg.basis_vector(k)
        deg = 1
        for i in range(2, len(powers)):
            rows = powers[i - 1]
            if in_span(e, rows, echelon_pivots(rows, alg.field), alg.field):
                deg = i
            else:
                break
        degrees.append(deg)
    for i in range(1, len(powers)):
        if sum(1 for d in degrees if d >= i) != len(powers[i - 1]):
            return None
    return degrees


def adapted_basis(alg: Algebra, powers: Optional[List[Matrix]] = None) -> Tuple[Matrix, List[int]]:
    """A basis adapted to the power filtration, with the degree of each row.

    When the original basis is already adapted it is returned untouched (in
    its original order); otherwise echelon rows of the powers fill in,
    ordered by increasing degree.
    """
    if powers is None:
        powers = alg.power_filtration()
    degrees = filtration_degrees(alg, powers)
    if degrees is not None:
        return [alg.basis_vector(k) for k in range(1, alg.dim + 1)], list(degrees)
    # greedy: walk the filtration from the deepest power outward
    chosen: List[Vector] = []
    chosen_deg: List[int] = []
    span_rows: Matrix = []
    for i in range(len(powers) - 1, 0, -1):
        for row in powers[i - 1]:
            rows, pivots = rref(span_rows, alg.field)
            if not in_span(row, rows, pivots, alg.field):
                chosen.append(row)
                chosen_deg.append(i)
                span_rows.append(row)
    order = sorted(range(len(chosen)), key=lambda k: (chosen_deg[k], k))
    return [chosen[k] for k in order], [chosen_deg[k] for k in order]


def is_naturally_graded(alg: Algebra) -> Tuple[bool, Optional[List[int]]]:
    """Whether the filtration degrees grade the product, and the degrees.

    The check builds one canonical adapted basis and tests that every product
    is degree-pure in it.  True is a certificate.  False means this basis
    exhibits no gradation; it does not rule out an exotic regrading, so treat
    it as "not visibly graded".  The returned degrees refer to the original
    basis and are None when that basis is not adapted.
    """
    powers = alg.power_filtration()
    degrees = filtration_degrees(alg, powers)
    basis, basis_deg = adapted_basis(alg, powers)
    moved = alg.apply_basis_change(basis)
    for (i, j), coeffs in moved.table.items():
        want = basis_deg[i - 1] + basis_deg[j - 1]
        for k in coeffs:
            if basis_deg[k - 1] != want:
                return False, degrees
    return True, degrees


def associated_graded(alg: Algebra) -> Algebra:
    """The graded algebra on the power filtration, in an adapted basis.

    Products keep only their degree-pure part; components of strictly higher
    degree are truncated away (lower degree cannot occur by the filtration
    property).
    """
    powers = alg.power_filtration()
    basis, basis_deg = adapted_basis(alg, powers)
    moved = alg.apply_basis_change(basis)
    table = {}
    for (i, j), coeffs in moved.table.items():
        want = basis_deg[i - 1] + basis_deg[j - 1]
        kept = {k: c for k, c in coeffs.items() if basis_deg[k - 1] == want}
        if kept:
            table[(i, j)] = kept
    return Algebra(alg.dim, alg.field, table)
