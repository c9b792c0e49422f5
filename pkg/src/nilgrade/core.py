"""Structure-constant algebras with exact linear algebra.

Vectors are dense lists indexed from 0 (so basis vector e_1 sits at index 0);
the multiplication table is sparse and 1-based to match the JSON wire format.
All row reduction uses first-nonzero pivoting in row-major order so results
are deterministic for a given input.
"""
from __future__ import annotations

from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .errors import NotNilpotent, SingularMatrix
from .scalar import FieldDescriptor, Scalar, scalar_from_json, scalar_to_json

Vector = List[Scalar]
Matrix = List[List[Scalar]]
Table = Dict[Tuple[int, int], Dict[int, Scalar]]


# ---------------------------------------------------------------------------
# linear algebra


def rref(rows: Matrix, field: FieldDescriptor) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form of a list of row vectors.

    Returns the nonzero echelon rows and the pivot column indices.
    """
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pr = None
        for rr in range(r, len(m)):
            if not field.is_zero(m[rr][c]):
                pr = rr
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        piv = m[r][c]
        m[r] = [v / piv for v in m[r]]
        for rr in range(len(m)):
            if rr != r and not field.is_zero(m[rr][c]):
                f = m[rr][c]
                m[rr] = [a - f * b for a, b in zip(m[rr], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[: len(pivots)], pivots


def rank(rows: Matrix, field: FieldDescriptor) -> int:
    return len(rref(rows, field)[1])


def in_span(v: Vector, echelon_rows: Matrix, pivots: Sequence[int], field: FieldDescriptor) -> bool:
    """Whether v lies in the row space described by echelon rows + pivots."""
    w = list(v)
    for row, pc in zip(echelon_rows, pivots):
        if not field.is_zero(w[pc]):
            f = w[pc]
            w = [a - f * b for a, b in zip(w, row)]
    return all(field.is_zero(x) for x in w)


def kernel_basis(mat: Matrix, field: FieldDescriptor) -> Matrix:
    """Basis of the right kernel {v : mat v = 0}, one vector per free column."""
    if not mat:
        return []
    m, pivots = rref(mat, field)
    ncols = len(mat[0])
    basis = []
    for fc in range(ncols):
        if fc in pivots:
            continue
        v = [field.zero()] * ncols
        v[fc] = field.one()
        for r_idx, pc in enumerate(pivots):
            v[pc] = -m[r_idx][fc]
        basis.append(v)
    return basis


def solve(mat: Matrix, rhs: Vector, field: FieldDescriptor) -> Optional[Vector]:
    """One solution of mat x = rhs (free variables set to zero), or None."""
    if not mat:
        return None
    ncols = len(mat[0])
    aug = [list(row) + [rhs[k]] for k, row in enumerate(mat)]
    m, pivots = rref(aug, field)
    if ncols in pivots:
        return None
    x = [field.zero()] * ncols
    for r_idx, pc in enumerate(pivots):
        x[pc] = m[r_idx][ncols]
    return x


def mat_inverse(mat: Matrix, field: FieldDescriptor) -> Matrix:
    n = len(mat)
    aug = [
        list(row) + [field.one() if i == j else field.zero() for j in range(n)]
        for i, row in enumerate(mat)
    ]
    m, pivots = rref(aug, field)
    if pivots != list(range(n)):
        raise SingularMatrix("basis-change matrix is singular")
    return [row[n:] for row in m]


def mat_mul(a: Matrix, b: Matrix, field: FieldDescriptor) -> Matrix:
    out = []
    for row in a:
        out_row = []
        for c in range(len(b[0])):
            acc = field.zero()
            for k, v in enumerate(row):
                acc = acc + v * b[k][c]
            out_row.append(acc)
        out.append(out_row)
    return out


def mat_vec(mat: Matrix, v: Vector, field: FieldDescriptor) -> Vector:
    return [
        sum((row[k] * v[k] for k in range(len(v))), field.zero())
        for row in mat
    ]


# ---------------------------------------------------------------------------
# the algebra itself


class AssocViolation(NamedTuple):
    i: int
    j: int
    k: int
    defect: Vector


class Algebra:
    """Finite-dimensional algebra given by a sparse multiplication table.

    ``table[(i, j)]`` maps basis index k to the coefficient of e_k in
    e_i * e_j; absent pairs multiply to zero.  Indices are 1-based.
    """

    __slots__ = ("dim", "field", "table")

    def __init__(self, dim: int, field: FieldDescriptor, table: Table):
        self.dim = dim
        self.field = field
        clean: Table = {}
        for (i, j), coeffs in table.items():
            if not (1 <= i <= dim and 1 <= j <= dim):
                raise ValueError(f"table index ({i},{j}) outside 1..{dim}")
            kept = {}
            for k, c in coeffs.items():
                if not 1 <= k <= dim:
                    raise ValueError(f"product component {k} outside 1..{dim}")
                if not field.is_zero(c):
                    kept[k] = c
            if kept:
                clean[(i, j)] = kept
        self.table = clean

    # -- basic operations ---------------------------------------------

    def basis_vector(self, i: int) -> Vector:
        v = [self.field.zero()] * self.dim
        v[i - 1] = self.field.one()
        return v

    def zero_vector(self) -> Vector:
        return [self.field.zero()] * self.dim

    def product(self, i: int, j: int) -> Dict[int, Scalar]:
        """e_i * e_j as a sparse 1-based coefficient dict."""
        return dict(self.table.get((i, j), {}))

    def multiply(self, x: Vector, y: Vector) -> Vector:
        out = self.zero_vector()
        for i in range(self.dim):
            if self.field.is_zero(x[i]):
                continue
            for j in range(self.dim):
                if self.field.is_zero(y[j]):
                    continue
                coeffs = self.table.get((i + 1, j + 1))
                if not coeffs:
                    continue
                xy = x[i] * y[j]
                for k, c in coeffs.items():
                    out[k - 1] = out[k - 1] + xy * c
        return out

    def left_mult_matrix(self, x: Vector) -> Matrix:
        """Matrix of left multiplication by x: column j is x * e_j."""
        cols = [self.multiply(x, self.basis_vector(j)) for j in range(1, self.dim + 1)]
        return [[cols[j][k] for j in range(self.dim)] for k in range(self.dim)]

    # -- verification ---------------------------------------------------

    def verify_associativity(self) -> List[AssocViolation]:
        """All triples where (e_i e_j) e_k != e_i (e_j e_k), in lex order."""
        violations = []
        basis = [self.basis_vector(i) for i in range(1, self.dim + 1)]
        for i in range(1, self.dim + 1):
            for j in range(1, self.dim + 1):
                ij = self.multiply(basis[i - 1], basis[j - 1])
                for k in range(1, self.dim + 1):
                    left = self.multiply(ij, basis[k - 1])
                    right = self.multiply(basis[i - 1], self.multiply(basis[j - 1], basis[k - 1]))
                    defect = [a - b for a, b in zip(left, right)]
                    if any(not self.field.is_zero(d) for d in defect):
                        violations.append(AssocViolation(i, j, k, defect))
        return violations

    def is_associative(self) -> bool:
        return not self.verify_associativity()

    # -- powers ----------------------------------------------------------

    def power_filtration(self) -> List[Matrix]:
        """Echelon bases of A^1 >= A^2 >= ...; the last entry is empty.

        Raises NotNilpotent when the chain has not reached zero after
        dim steps, which for a nilpotent algebra it must have.
        """
        powers: List[Matrix] = [[self.basis_vector(i) for i in range(1, self.dim + 1)]]
        while powers[-1]:
            if len(powers) > self.dim:
                raise NotNilpotent(
                    f"power chain still nonzero after {self.dim} steps"
                )
            prods = [
                self.multiply(x, self.basis_vector(j))
                for x in powers[-1]
                for j in range(1, self.dim + 1)
            ]
            nxt, _ = rref(prods, self.field)
            powers.append(nxt)
        return powers

    def nilindex(self) -> int:
        """Largest s with A^s != 0."""
        return len(self.power_filtration()) - 1

    # -- basis change ------------------------------------------------------

    def apply_basis_change(self, new_basis: Matrix) -> "Algebra":
        """Structure constants in the basis whose rows are given in old coordinates."""
        pinv = mat_inverse(new_basis, self.field)
        table: Table = {}
        for i in range(1, self.dim + 1):
            for j in range(1, self.dim + 1):
                w = self.multiply(new_basis[i - 1], new_basis[j - 1])
                coeffs = {}
                for k in range(self.dim):
                    acc = self.field.zero()
                    for m in range(self.dim):
                        acc = acc + w[m] * pinv[m][k]
                    if not self.field.is_zero(acc):
                        coeffs[k + 1] = acc
                if coeffs:
                    table[(i, j)] = coeffs
        return Algebra(self.dim, self.field, table)

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        entries = []
        for (i, j) in sorted(self.table):
            coeffs = self.table[(i, j)]
            entries.append(
                {
                    "i": i,
                    "j": j,
                    "coeffs": [[k, scalar_to_json(coeffs[k], self.field)] for k in sorted(coeffs)],
                }
            )
        return {"dim": self.dim, "field": self.field.to_json(), "table": entries}

    @classmethod
    def from_json(cls, obj: dict) -> "Algebra":
        field = FieldDescriptor.from_json(obj["field"])
        table: Table = {}
        for entry in obj["table"]:
            coeffs = {
                int(k): scalar_from_json(blob, field) for k, blob in entry["coeffs"]
            }
            table[(int(entry["i"]), int(entry["j"]))] = coeffs
        return cls(int(obj["dim"]), field, table)

    def __eq__(self, other):
        if not isinstance(other, Algebra):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.field == other.field
            and self.table == other.table
        )

    def __repr__(self):
        return f"Algebra(dim={self.dim}, field={self.field.kind}, entries={len(self.table)})"
