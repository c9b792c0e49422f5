"""Constructors for the graded families and the catalog of representatives.

Both parametric families live in dimension n >= 7 and share the chain part
e_i e_j = e_{i+j} (2 <= i+j <= n-3) together with e_1 e_{n-2} = e_{n-1}.
They differ in where the second tail generator e_n sits: in the six-parameter
family it is a degree-1 generator, in the four-parameter family it appears in
degree 2 as a product component.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence, Tuple

from .core import Algebra, Table
from .errors import ConstraintViolation, DegenerateParams, DimensionTooSmall
from .scalar import FieldDescriptor, Qi, QI_FIELD, Scalar

A6Params = Tuple[Scalar, Scalar, Scalar, Scalar, Scalar, Scalar]
B4Params = Tuple[Scalar, Scalar, Scalar, Scalar]


def _chain_table(n: int, field: FieldDescriptor) -> Table:
    one = field.one()
    table: Table = {}
    for i in range(1, n - 3):
        for j in range(1, n - 3):
            if 2 <= i + j <= n - 3:
                table[(i, j)] = {i + j: one}
    table[(1, n - 2)] = {n - 1: one}
    return table


def null_filiform(n: int, field: FieldDescriptor = QI_FIELD) -> Algebra:
    """The chain algebra e_i e_j = e_{i+j} (i+j <= n); nilindex n."""
    if n < 1:
        raise DimensionTooSmall("need dimension at least 1")
    one = field.one()
    table: Table = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i + j <= n:
                table[(i, j)] = {i + j: one}
    return Algebra(n, field, table)


def family_a6(n: int, params: Sequence, field: FieldDescriptor = QI_FIELD) -> Algebra:
    """Six-parameter family with both tail generators in degree 1.

    Parameters (a1..a6) fill the products of the generators e_1, e_{n-2},
    e_n into the top weight space spanned by e_{n-1}.
    """
    if n < 7:
        raise DimensionTooSmall("the six-parameter family needs n >= 7")
    if len(params) != 6:
        raise ValueError("expected 6 parameters")
    a1, a2, a3, a4, a5, a6 = (field.coerce(p) for p in params)
    table = _chain_table(n, field)

    def put(i: int, j: int, coeff) -> None:
        if not field.is_zero(coeff):
            table[(i, j)] = {n - 1: coeff}

    put(n - 2, 1, a1)
    put(n - 2, n - 2, a2)
    put(n - 2, n, a3)
    put(n, 1, a4)
    put(n, n - 2, a5)
    put(n, n, a6)
    return Algebra(n, field, table)


def family_b4(n: int, params: Sequence, field: FieldDescriptor = QI_FIELD) -> Algebra:
    """Four-parameter family whose second tail generator e_n sits in degree 2.

    Parameters (b1..b4) give e_{n-2} e_1 = b1 e_{n-1} + b2 e_n and
    e_{n-2} e_{n-2} = b3 e_{n-1} + b4 e_n.  (b2, b4) = (0, 0) would drop e_n
    out of the square and is rejected.
    """
    if n < 7:
        raise DimensionTooSmall("the four-parameter family needs n >= 7")
    if len(params) != 4:
        raise ValueError("expected 4 parameters")
    b1, b2, b3, b4 = (field.coerce(p) for p in params)
    if field.is_zero(b2) and field.is_zero(b4):
        raise DegenerateParams("(b2, b4) = (0, 0) leaves e_n outside the square")
    table = _chain_table(n, field)

    def put(i: int, j: int, c1, c2) -> None:
        coeffs = {}
        if not field.is_zero(c1):
            coeffs[n - 1] = c1
        if not field.is_zero(c2):
            coeffs[n] = c2
        if coeffs:
            table[(i, j)] = coeffs

    put(n - 2, 1, b1, b2)
    put(n - 2, n - 2, b3, b4)
    return Algebra(n, field, table)


# ---------------------------------------------------------------------------
# the catalog of pairwise non-isomorphic representatives


@dataclass(frozen=True)
class RepEntry:
    """One catalog entry: a fixed tuple or a one-parameter pencil.

    ``spec`` entries are ints, "i", "p" (the pencil parameter), or "p1m"
    (p*(1-p)); they are realized in any scalar field on demand.
    """

    rep_id: str
    family: str  # "a6" | "b4"
    param_name: Optional[str]
    spec: tuple
    excluded: Callable[[Scalar], bool]  # parameter values outside the pencil
    note: str = ""

    def realize(self, param, field: FieldDescriptor) -> tuple:
        out = []
        for s in self.spec:
            if s == "p":
                out.append(param)
            elif s == "p1m":
                out.append(param * (field.one() - param))
            elif s == "i":
                out.append(field.coerce(Qi(0, 1)))
            else:
                out.append(field.coerce(s))
        return tuple(out)


_never = lambda _p: False
_unit_excluded = lambda p: p.is_zero or (p - 1).is_zero
_zero_excluded = lambda p: p.is_zero

REP_CATALOG: Dict[str, RepEntry] = {
    e.rep_id: e
    for e in [
        RepEntry("teo.1", "a6", "alpha", ("p", 0, 0, 0, 0, 0), _never),
        RepEntry("teo.2", "a6", None, (0, 0, 0, 1, 0, 0), _never),
        RepEntry("teo.3", "a6", None, (1, 1, 0, 0, 0, 0), _never),
        RepEntry("teo.4", "a6", None, (0, 1, 0, 0, 0, 0), _never),
        RepEntry("teo.5", "a6", None, (0, 1, 0, 1, 0, 0), _never,
                 note="theorem-list-discrepancy"),
        RepEntry("teo.6", "a6", "beta", ("p", 0, 0, 0, 0, 1), _never),
        RepEntry("teo.7", "a6", None, (1, 0, 0, 1, 0, 1), _never),
        RepEntry("teo.8", "a6", None, (1, 1, 0, 0, 0, 1), _never),
        RepEntry("teo.9", "a6", None, (0, 1, 0, "i", 0, 1), _never),
        RepEntry("teo.10", "a6", None, (0, 1, 0, 0, 0, 1), _never),
        RepEntry("teo.11", "a6", None, (0, 0, 0, 0, 1, 0), _never),
        RepEntry("teo.12", "a6", None, (1, 0, 0, 0, 1, 0), _never),
        RepEntry("teo.13", "a6", None, (0, 0, 0, 1, 1, 1), _never),
        RepEntry("teo.14", "a6", None, (1, 0, 0, 0, 1, 1), _never),
        RepEntry("teo.15", "a6", "gamma", (0, 1, 0, "p", 1, "p1m"), _unit_excluded),
        RepEntry("teo.16", "a6", "delta", (1, 1, 0, 0, 1, "p"), _zero_excluded),
        RepEntry("extra.1", "a6", "eps", (1, 1, 0, 1, 1, "p"), _zero_excluded,
                 note="unlisted-representative"),
        RepEntry("teo1.1", "b4", None, (0, 1, 0, 0), _never),
        RepEntry("teo1.2", "b4", None, (0, 1, 1, 0), _never),
        RepEntry("teo1.3", "b4", None, (1, 0, 0, 1), _never),
        RepEntry("teo1.4", "b4", "beta", ("p", 1, 0, 1), _never),
    ]
}


def representative_params(
    rep_id: str, param=None, field: FieldDescriptor = QI_FIELD
) -> tuple:
    """Parameter tuple of a catalog representative.

    Parametric entries require ``param``; fixed entries reject it.  Values
    excluded from the pencil (they would collide with another entry) raise
    ConstraintViolation.
    """
    if rep_id not in REP_CATALOG:
        raise KeyError(f"unknown representative {rep_id!r}")
    entry = REP_CATALOG[rep_id]
    if entry.param_name is None:
        if param is not None:
            raise ConstraintViolation(f"{rep_id} takes no parameter")
        return entry.realize(None, field)
    if param is None:
        raise ConstraintViolation(f"{rep_id} needs parameter {entry.param_name}")
    param = field.coerce(param)
    if entry.excluded(param):
        raise ConstraintViolation(
            f"{entry.param_name}={param} is excluded from {rep_id}"
        )
    return entry.realize(param, field)


def construct_representative(
    rep_id: str, n: int = 7, param: Optional[Qi] = None, field: FieldDescriptor = QI_FIELD
) -> Algebra:
    params = representative_params(rep_id, param, field)
    entry = REP_CATALOG[rep_id]
    if entry.family == "b4":
        return family_b4(n, params, field)
    return family_a6(n, params, field)


# ---------------------------------------------------------------------------
# seeded random parameter tuples (used by the test batteries)


def random_qi(rng: random.Random, lo: int = -3, hi: int = 3) -> Qi:
    return Qi(rng.randint(lo, hi), rng.randint(lo, hi))


def random_a6_params(rng: random.Random) -> A6Params:
    return tuple(random_qi(rng) for _ in range(6))


def random_b4_params(rng: random.Random) -> B4Params:
    while True:
        params = tuple(random_qi(rng) for _ in range(4))
        if not (params[1].is_zero and params[3].is_zero):
            return params


# ---------------------------------------------------------------------------
# table-shape recognition


def detect_family(alg: Algebra) -> Optional[Tuple[str, Optional[tuple]]]:
    """Recognize an algebra given by its table, returning (family, params).

    The match is exact: parameters are read off the tail-product slots and
    the whole table is rebuilt and compared.  Tables in a rotated or summed
    basis are not recognized -- classify them from their parameters instead.
    """
    n, field = alg.dim, alg.field
    if alg == null_filiform(n, field):
        return ("nullfiliform", None)
    if n < 7:
        return None
    z = field.zero()

    def slot(i: int, j: int, k: int) -> Scalar:
        return alg.product(i, j).get(k, z)

    a6 = tuple(
        slot(i, j, n - 1)
        for i, j in ((n - 2, 1), (n - 2, n - 2), (n - 2, n),
                     (n, 1), (n, n - 2), (n, n))
    )
    if alg == family_a6(n, a6, field):
        return ("a6", a6)
    b4 = (slot(n - 2, 1, n - 1), slot(n - 2, 1, n),
          slot(n - 2, n - 2, n - 1), slot(n - 2, n - 2, n))
    try:
        if alg == family_b4(n, b4, field):
            return ("b4", b4)
    except DegenerateParams:
        pass
    return None
