"""Canonical forms for both graded families, with verified witness chains.

Every branch of the decision tree carries an explicit generator change (or a
short chain of them) that maps the input parameters onto the catalog
representative; the classifier applies the chain and checks the target is
reached exactly before returning, so a wrong answer cannot escape silently.

A generator change for the six-parameter family is (A1, A2, A3, B2, B3, C3):
the images of the three degree-1 generators, with the e_{n-2}-component of
the new e_n determined by the shape constraint (C2 below).  For the
four-parameter family it is (A1, A2, B2, C2, C3), where the new e_n is
C2 e_{n-1} + C3 e_n.

The whole tree is field-generic: it runs over the Gaussian rationals, over
one quadratic extension when the single square root it may need does not
exist there, or over a prime field F_p with p = 1 mod 4.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    BadPrime,
    DegenerateParams,
    InadmissibleChange,
    SecondExtensionRequired,
    UnclassifiedParameters,
)
from .families import representative_params
from .scalar import (
    FieldDescriptor,
    Fp,
    QI_FIELD,
    Qi,
    Quad,
    Scalar,
    qi_sqrt,
    quad_field,
    sqrt_adjoin,
    sqrt_mod,
)

ParamsA6 = Tuple[Scalar, Scalar, Scalar, Scalar, Scalar, Scalar]
ChangeA6 = Tuple[Scalar, Scalar, Scalar, Scalar, Scalar, Scalar]
ParamsB4 = Tuple[Scalar, Scalar, Scalar, Scalar]
ChangeB4 = Tuple[Scalar, Scalar, Scalar, Scalar, Scalar]


# ---------------------------------------------------------------------------
# parameter transforms


def a6_transform(p: ParamsA6, g: ChangeA6) -> ParamsA6:
    """Parameters after the generator change g; raises InadmissibleChange."""
    a1, a2, a3, a4, a5, a6 = p
    A1, A2, A3, B2, B3, C3 = g
    if A1.is_zero or C3.is_zero:
        raise InadmissibleChange("A1 and C3 must be nonzero")
    D = A1 + a2 * A2 + a5 * A3
    if D.is_zero:
        raise InadmissibleChange("new e_1 chain dies early (D = 0)")
    C2 = -(C3 * (a3 * A2 + a6 * A3)) / D
    E = A1 * B2 + a2 * A2 * B2 + a3 * A2 * B3 + a5 * A3 * B2 + a6 * A3 * B3
    if E.is_zero:
        raise InadmissibleChange("new top weight vector vanishes (E = 0)")

    def h(u1, u2, v1, v2):
        return a2 * u1 * v1 + a3 * u1 * v2 + a5 * u2 * v1 + a6 * u2 * v2

    return (
        (A1 * (a1 * B2 + a4 * B3) + h(B2, B3, A2, A3)) / E,
        h(B2, B3, B2, B3) / E,
        h(B2, B3, C2, C3) / E,
        (A1 * (a1 * C2 + a4 * C3) + h(C2, C3, A2, A3)) / E,
        h(C2, C3, B2, B3) / E,
        h(C2, C3, C2, C3) / E,
    )


def a6_admissible(p: ParamsA6, g: ChangeA6) -> bool:
    a1, a2, a3, a4, a5, a6 = p
    A1, A2, A3, B2, B3, C3 = g
    if A1.is_zero or C3.is_zero:
        return False
    D = A1 + a2 * A2 + a5 * A3
    if D.is_zero:
        return False
    E = A1 * B2 + a2 * A2 * B2 + a3 * A2 * B3 + a5 * A3 * B2 + a6 * A3 * B3
    return not E.is_zero


def a6_full_change(p: ParamsA6, g: ChangeA6) -> Tuple[Scalar, ...]:
    """The change with its determined C2 slot: (A1, A2, A3, B2, B3, C2, C3)."""
    a1, a2, a3, a4, a5, a6 = p
    A1, A2, A3, B2, B3, C3 = g
    D = A1 + a2 * A2 + a5 * A3
    if D.is_zero:
        raise InadmissibleChange("D = 0")
    C2 = -(C3 * (a3 * A2 + a6 * A3)) / D
    return (A1, A2, A3, B2, B3, C2, C3)


def apply_a6_chain(p: ParamsA6, chain: Sequence[ChangeA6]) -> ParamsA6:
    for g in chain:
        p = a6_transform(p, g)
    return p


def b4_transform(b: ParamsB4, g: ChangeB4) -> ParamsB4:
    """Parameters of the four-parameter family after the change g."""
    b1, b2, b3, b4 = b
    A1, A2, B2, C2, C3 = g
    if A1.is_zero or B2.is_zero:
        raise InadmissibleChange("A1 and B2 must be nonzero")
    Dh = (A1 + b3 * A2) * C3 - b4 * A2 * C2
    if Dh.is_zero:
        raise InadmissibleChange("degree-2 part of the change is singular")
    T = b4 + b2 * b3 - b1 * b4
    return (
        ((b1 * A1 + b3 * A2) * C3 - (b2 * A1 + b4 * A2) * C2) / Dh,
        A1 * B2 * (b2 * A1 + T * A2) / Dh,
        B2 * (b3 * C3 - b4 * C2) / Dh,
        A1 * B2 * B2 * b4 / Dh,
    )


def apply_b4_chain(b: ParamsB4, chain: Sequence[ChangeB4]) -> ParamsB4:
    for g in chain:
        b = b4_transform(b, g)
    return b


# ---------------------------------------------------------------------------
# invariants

# d(a5 - a3) terms: each entry is (coefficient, exponents of a1..a6)
NABLA_TERMS: Tuple[Tuple[int, Tuple[int, int, int, int, int, int]], ...] = (
    (1, (0, 0, 3, 1, 0, 0)),
    (1, (0, 0, 2, 1, 1, 0)),
    (-1, (1, 0, 2, 1, 1, 0)),
    (1, (0, 1, 1, 2, 1, 0)),
    (-1, (1, 0, 1, 1, 2, 0)),
    (-1, (1, 0, 2, 0, 0, 1)),
    (-3, (0, 1, 1, 1, 0, 1)),
    (1, (1, 1, 1, 1, 0, 1)),
    (-1, (0, 2, 0, 2, 0, 1)),
    (1, (0, 0, 1, 0, 1, 1)),
    (1, (2, 0, 1, 0, 1, 1)),
    (1, (0, 1, 0, 1, 1, 1)),
    (1, (1, 1, 0, 1, 1, 1)),
    (-1, (1, 0, 0, 0, 2, 1)),
    (-1, (0, 1, 0, 0, 0, 2)),
    (2, (1, 1, 0, 0, 0, 2)),
    (-1, (2, 1, 0, 0, 0, 2)),
)


def nabla(p: ParamsA6, field: FieldDescriptor = QI_FIELD) -> Scalar:
    """The degree-4 obstruction polynomial in the six parameters."""
    total = field.zero()
    for coef, exps in NABLA_TERMS:
        term = field.coerce(coef)
        for base, e in zip(p, exps):
            for _ in range(e):
                term = term * base
        total = total + term
    return total


def invariants_a6(p: ParamsA6, field: FieldDescriptor = QI_FIELD) -> Dict[str, Scalar]:
    """The named (semi-)invariants of a six-parameter tuple.

    I1, I2, I3 and nabla rescale by nonzero factors under every admissible
    change, so their vanishing is always intrinsic.  I4 is intrinsic on the
    a3 = a6 = 0 stratum, I5 on I2 = 0.  delta is an absolute invariant where
    I1 != 0 and is omitted otherwise.
    """
    a1, a2, a3, a4, a5, a6 = p
    out: Dict[str, Scalar] = {
        "I1": a5 - a3,
        "I2": a2 * a6 - a3 * a5,
        "I3": (a3 + a5) * (a3 + a5) - 4 * a2 * a6,
        "I4": a1 * a5 - a2 * a4,
        "I5": a1 * a6 - a3 * a4,
        "nabla": nabla(p, field),
    }
    if not out["I1"].is_zero:
        out["delta"] = out["I2"] / (out["I1"] * out["I1"])
    return out


def invariants_b4(b: ParamsB4, field: FieldDescriptor = QI_FIELD) -> Dict[str, Scalar]:
    """T rescales by a nonzero factor; J is absolute where b4 != 0."""
    b1, b2, b3, b4 = b
    out: Dict[str, Scalar] = {"T": b4 + b2 * b3 - b1 * b4}
    if not b4.is_zero:
        out["J"] = b1 - b2 * b3 / b4
    return out


# ---------------------------------------------------------------------------
# classification result


@dataclass
class ClassifyResult:
    family: str
    rep_id: str
    branch_trace: str
    param: Dict[str, Scalar]
    chain: List[tuple]
    work_field: FieldDescriptor
    target: tuple
    flags: List[str] = dc_field(default_factory=list)
    invariants: Dict[str, Scalar] = dc_field(default_factory=dict)


def _exhausted(field: FieldDescriptor, what: str) -> Exception:
    """Ladder ran dry: impossible in characteristic 0, tells mod p."""
    if field.kind == "Fp":
        return BadPrime(f"{what} has no usable rung mod {field.p}")
    return UnclassifiedParameters(f"{what} exhausted")


def _sqrt_in(x: Scalar, field: FieldDescriptor):
    """A square root of x and the (possibly extended) field it lives in."""
    if field.kind == "Fp":
        r = sqrt_mod(x.val, field.p)
        if r is None:
            raise BadPrime(f"{x.val} is not a square mod {field.p}")
        return Fp(r, field.p), field
    if field.kind == "Qi_sqrt":
        # already one extension deep; only roots that stay inside it work
        if x.b.is_zero:
            r = qi_sqrt(x.a)
            if r is not None:
                return Quad.lift(r, field.d), field
            r = qi_sqrt(x.a / field.d)
            if r is not None:
                return Quad(Qi(0), r, field.d), field
        raise SecondExtensionRequired(f"sqrt of {x!r} needs a second radical")
    root = sqrt_adjoin(x)
    if isinstance(root, Quad):
        return root, quad_field(root.d)
    return root, field


# ---------------------------------------------------------------------------
# the six-parameter tree


def canonical_form_a6(
    params: Sequence, field: FieldDescriptor = QI_FIELD
) -> ClassifyResult:
    p = tuple(field.coerce(x) for x in params)
    if len(p) != 6:
        raise ValueError("expected 6 parameters")
    inv = invariants_a6(p, field)
    a1, a2, a3, a4, a5, a6 = p
    one = field.one()

    def result(trace, rep_id, chain, wf, param=None, flags=()):
        param = dict(param or {})
        entry_param = next(iter(param.values()), None)
        target = representative_params(rep_id, entry_param, wf)
        start = tuple(wf.coerce(x) for x in p) if wf is not field else p
        reached = apply_a6_chain(start, chain)
        for got, want in zip(reached, target):
            if not (got - want).is_zero:
                raise UnclassifiedParameters(
                    f"chain for {trace} missed its target: {reached} != {target}"
                )
        return ClassifyResult(
            family="a6",
            rep_id=rep_id,
            branch_trace=trace,
            param=param,
            chain=list(chain),
            work_field=wf,
            target=target,
            flags=list(flags),
            invariants=inv,
        )

    I1 = inv["I1"]
    if I1.is_zero:
        K = a2 * a6 - a3 * a3  # equals I2 here since a5 = a3
        if K.is_zero:
            if a6.is_zero:
                # K = 0 forces a3 = a5 = 0 as well
                if a2.is_zero:
                    if a4.is_zero:
                        return result("a.1.1.1.1", "teo.1", [], field,
                                      {"alpha": a1})
                    g = (one, field.zero(), field.zero(), one, -a1 / a4, one / a4)
                    return result("a.1.1.1.2", "teo.2", [g], field)
                z = field.zero()
                g1 = (one, z, z, one / a2, z, one)
                if a4.is_zero:
                    if (a1 - one).is_zero:
                        return result("a.1.1.2.1.1", "teo.3", [g1], field)
                    g2 = (one, -a1, z, one - a1, z, one)
                    return result("a.1.1.2.1.2", "teo.4", [g1, g2], field)
                g = (one, z, z, one / a2, -a1 / (a2 * a4), one / (a2 * a4))
                return result("a.1.1.2.2", "teo.5", [g], field,
                              flags=["theorem-list-discrepancy"])
            # a.1.2: a6 != 0, a5 = a3, a3^2 = a2 a6
            z = field.zero()
            g1 = (one, z, z, a6, -a3, one)
            t = a6_transform(p, g1)
            t1, t4 = t[0], t[3]
            if (t1 - one).is_zero:
                if t4.is_zero:
                    return result("a.1.2.1.1", "teo.6", [g1], field,
                                  {"beta": one})
                g2 = (one, z, z, t4 * t4, z, t4)
                return result("a.1.2.1.2", "teo.7", [g1, g2], field)
            g2 = (one, z, -t4 / (one - t1), one, z, one)
            return result("a.1.2.2", "teo.6", [g1, g2], field, {"beta": t1})
        # a.2: one square root may leave the base field
        q0 = a6 * (a1 - one) * (a1 - one) - 2 * a3 * a4 * (a1 - one) + a2 * a4 * a4
        s, wf = _sqrt_in(K, field)
        wp = tuple(wf.coerce(x) for x in p) if wf is not field else p
        w1, wz = wf.one(), wf.zero()
        chain, t = _a2_stage1(wp, s, wf)
        t1, t4 = t[0], t[3]
        if q0.is_zero:
            if (t1 - w1).is_zero:
                return result("a.2.1.1", "teo.8", chain, wf)
            u = w1 - t1
            sigma = t4 / (wf.coerce(Qi(0, 1)) * u)
            steps = [(w1, u - w1, wz, u, wz, u)]
            if (sigma + w1).is_zero:
                steps.append((w1, wz, wz, w1, wz, -w1))
            elif not (sigma - w1).is_zero:
                raise UnclassifiedParameters("a.2.1: t4^2 + (1-t1)^2 != 0")
            return result("a.2.1.2", "teo.9", chain + steps, wf)
        if (t1 - w1).is_zero:
            # rotate t1 off 1 first (circle points (c, s2), c^2 + s2^2 = 1)
            for r in (2, 3, 4):
                den = wf.coerce(1 + r * r)
                if den.is_zero:
                    continue
                c = wf.coerce(1 - r * r) / den
                s2 = wf.coerce(2 * r) / den
                if c.is_zero:
                    continue
                g0 = (w1, c - w1, s2, c, s2, c)
                try:
                    tn = a6_transform(t, g0)
                except InadmissibleChange:
                    continue
                if not (tn[0] - w1).is_zero:
                    chain = chain + [g0]
                    t, t1, t4 = tn, tn[0], tn[3]
                    break
            else:
                if wf.kind == "Fp":
                    # mod some primes the circle group is too small to move t1
                    raise BadPrime(f"no usable rotation mod {wf.p}")
                raise UnclassifiedParameters("a.2.2 rotation ladder exhausted")
        x, y = w1 - t1, -t4
        g2 = (w1, x - w1, y, x, y, x)
        return result("a.2.2", "teo.10", chain + [g2], wf)

    # case b: I1 != 0
    if a3.is_zero and a6.is_zero:
        I4 = inv["I4"]
        A2 = -a4 / a5
        B3 = -a2 / a5
        if I4.is_zero:
            for a3v in (0, 1, -1, 2):
                A3 = field.coerce(a3v)
                D = one + a2 * A2 + a5 * A3
                if not D.is_zero:
                    g = (one, A2, A3, one, B3, D / a5)
                    return result("b.1.1", "teo.11", [g], field)
            raise _exhausted(field, "b.1.1 ladder")
        A3 = (a1 - one) / a5
        g = (one, A2, A3, one, B3, I4 / (a5 * a5))
        return result("b.1.2", "teo.12", [g], field)

    # b.2
    pre: List[ChangeA6] = []
    work = p
    if a3.is_zero:
        z = field.zero()
        g0 = (one, z, z, one, one, one)
        pre.append(g0)
        work = a6_transform(work, g0)
        if work[2].is_zero:
            raise UnclassifiedParameters("swap failed to move a6 into a3")
    I2w = work[1] * work[5] - work[2] * work[4]
    if I2w.is_zero:
        I5w = work[0] * work[5] - work[2] * work[3]
        if I5w.is_zero:
            g = _chain_b211(work, field)
            return result("b.2.1.1", "teo.13", pre + [g], field)
        steps = _chain_b212(work, field)
        return result("b.2.1.2", "teo.14", pre + steps, field)
    nab_w = nabla(work, field)
    if nab_w.is_zero:
        g1, t = _chain_b221_stage1(work, field)
        t1, t4, t6 = t[0], t[3], t[5]
        if (t1 - one).is_zero:
            return result("b.2.2.1", "extra.1", pre + [g1], field,
                          {"eps": t6}, flags=["unlisted-representative"])
        gam = (t4 - t1) / (one - t1)
        if not (gam * gam - gam + t6).is_zero:
            raise UnclassifiedParameters("b.2.2.1 conic violated")
        z = field.zero()
        g2 = (one, -t1, z, one - t1, z, one - t1)
        return result("b.2.2.1", "teo.15", pre + [g1, g2], field,
                      {"gamma": gam})
    steps = _chain_b222(work, field)
    return result("b.2.2.2", "teo.16", pre + steps, field, {"delta": inv["delta"]})


def _a2_stage1(p, s, wf) -> Tuple[List[ChangeA6], ParamsA6]:
    """Normalize an I1 = 0, K != 0 tuple to (t1, 1, 0, t4, 0, 1)."""
    a1, a2, a3, a4, a5, a6 = p
    one, z = wf.one(), wf.zero()
    negk = a3 * a3 - a2 * a6  # = -K, nonzero here
    for a2v, a3v in ((0, 0), (1, 0), (0, 1), (2, 0), (Qi(0, 1), 0), (1, 1)):
        try:
            A1, A2, A3 = one, wf.coerce(a2v), wf.coerce(a3v)
        except BadPrime:
            continue  # no i in this prime field; try the next rung
        D = A1 + a2 * A2 + a3 * A3
        if D.is_zero:
            continue
        B2 = A2 - a6 * A1 / negk
        B3 = A3 + a3 * A1 / negk
        g = (A1, A2, A3, B2, B3, D / s)
        if not a6_admissible(p, g):
            continue
        t = a6_transform(p, g)
        for idx, want in ((1, one), (2, z), (4, z), (5, one)):
            if not (t[idx] - want).is_zero:
                raise UnclassifiedParameters("a.2 stage-1 shape violated")
        return [g], t
    raise _exhausted(wf, "a.2 stage-1 ladder")


def _chain_b211(p, field) -> ChangeA6:
    """I1 != 0, a3 != 0, I2 = 0, I5 = 0  ->  (0, 0, 0, 1, 1, 1)."""
    a1, a2, a3, a4, a5, a6 = p
    one = field.one()
    I1 = a5 - a3
    q, r, s = a6 / a3, a2, a3
    det = s - q * r  # = (a3 - a5) here since a2 a6 = a3 a5, so nonzero
    for uv in (0, 1, -1, 2, Qi(0, 1), 3):
        try:
            u = field.coerce(uv)
        except BadPrime:
            continue
        if (q + u * I1).is_zero or (one + u * r).is_zero:
            continue
        D = one + u * r
        C3 = D / I1
        beta = C3 * s / (I1 * D)
        B2, B3 = beta * q, -beta
        v = beta * I1 - a1
        A2 = (u * s - v * q) / det
        A3 = (v - r * A2) / s
        g = (one, A2, A3, B2, B3, C3)
        if a6_admissible(p, g):
            return g
    raise _exhausted(field, "b.2.1.1 ladder")


def _b212_core(p, field) -> Optional[ChangeA6]:
    a1, a2, a3, a4, a5, a6 = p
    one = field.one()
    I1 = a5 - a3
    q, r, s = a6 / a3, a2, a3
    mxw = a4 - q * a1  # nonzero in this branch (= -I5/a3)
    u = -(q + mxw) / I1
    D = one + u * r
    if D.is_zero:
        return None
    C3 = D / I1
    C2 = -(u * s * C3) / D
    beta = C3 * s / (I1 * D)
    B2, B3 = beta * q, -beta
    mu = -mxw / I1
    v = -(C2 * a1 + C3 * a4) / mu
    det = s - q * r
    A2 = (u * s - v * q) / det
    A3 = (v - r * A2) / s
    g = (one, A2, A3, B2, B3, C3)
    return g if a6_admissible(p, g) else None


def _chain_b212(p, field) -> List[ChangeA6]:
    """I1 != 0, a3 != 0, I2 = 0, I5 != 0  ->  (1, 0, 0, 0, 1, 1)."""
    g = _b212_core(p, field)
    if g is not None:
        return [g]
    one, z = field.one(), field.zero()
    for btv in (1, -1, 2, -2, Qi(0, 1)):
        try:
            bt = field.coerce(btv)
        except BadPrime:
            continue
        g0 = (one, z, z, one, bt, one)
        p2 = a6_transform(p, g0)
        if p2[2].is_zero:
            continue
        g = _b212_core(p2, field)
        if g is not None:
            return [g0, g]
    raise _exhausted(field, "b.2.1.2 ladder")


def _chain_b221_stage1(p, field) -> Tuple[ChangeA6, ParamsA6]:
    """I2 != 0, nabla = 0: normalize to (t1, 1, 0, t4, 1, t6)."""
    a1, a2, a3, a4, a5, a6 = p
    one = field.one()
    I1m = a3 - a5  # = -I1, nonzero
    I2 = a2 * a6 - a3 * a5
    for A2v, B3v in ((0, 0), (0, 1), (1, 0), (0, -1), (2, 0),
                     (0, Qi(0, 1)), (Qi(0, 1), 0), (1, 1)):
        try:
            A2 = field.coerce(A2v)
            B3 = field.coerce(B3v)
        except BadPrime:
            continue
        A3 = B3 + a3 / I2
        B2 = A2 + a6 / I2
        C3 = -(a2 * a6) / (I1m * I2) - (a2 * A2 + a5 * B3) / I1m
        if C3.is_zero:
            continue
        g = (one, A2, A3, B2, B3, C3)
        if not a6_admissible(p, g):
            continue
        t = a6_transform(p, g)
        for idx, want in ((1, one), (2, field.zero()), (4, one)):
            if not (t[idx] - want).is_zero:
                raise UnclassifiedParameters("b.2.2.1 stage-1 shape violated")
        return g, t
    raise _exhausted(field, "b.2.2.1 stage-1 ladder")


def _b222_corner(p) -> Scalar:
    a1, a2, a3, a4, a5, a6 = p
    return a1 * a5 - a2 * a4 - a3


def _chain_b222(p, field) -> List[ChangeA6]:
    """I2 != 0, nabla != 0  ->  (1, 1, 0, 0, 1, delta)."""
    one, z = field.one(), field.zero()
    steps: List[ChangeA6] = []
    if _b222_corner(p).is_zero:
        moved = False
        shears = [(0, b) for b in (1, -1, 2, Qi(0, 1), 3, -2)]
        shears += [(1, 1), (1, -1), (Qi(0, 1), 1), (2, 1), (1, 2)]
        for A2v, B3v in shears:
            try:
                g0 = (one, field.coerce(A2v), z, one, field.coerce(B3v), one)
            except BadPrime:
                continue
            if not a6_admissible(p, g0):
                continue
            p2 = a6_transform(p, g0)
            if not _b222_corner(p2).is_zero and not p2[2].is_zero:
                steps.append(g0)
                p = p2
                moved = True
                break
        if not moved:
            raise _exhausted(field, "b.2.2.2 corner ladder")
    a1, a2, a3, a4, a5, a6 = p
    dif = a3 - a5
    mix = a3 * a5 - a2 * a6  # = -I2, nonzero
    g = (
        one,
        a4 / dif,
        (one - a1) / dif,
        (a3 * (a4 * a5 - a6) + a6 * (a5 - a2 * a4)) / (dif * mix),
        (a3 * a3 - a1 * a3 * a5 + (a1 - one) * a2 * a6) / (dif * mix),
        (a1 * a5 - a2 * a4 - a3) / (dif * dif),
    )
    steps.append(g)
    return steps


# ---------------------------------------------------------------------------
# the four-parameter tree


def canonical_form_b4(
    params: Sequence, field: FieldDescriptor = QI_FIELD
) -> ClassifyResult:
    b = tuple(field.coerce(x) for x in params)
    if len(b) != 4:
        raise ValueError("expected 4 parameters")
    b1, b2, b3, b4 = b
    if b2.is_zero and b4.is_zero:
        raise DegenerateParams("(b2, b4) = (0, 0) is outside the family")
    inv = invariants_b4(b, field)
    one, z = field.one(), field.zero()

    def result(trace, rep_id, chain, param=None):
        param = dict(param or {})
        entry_param = next(iter(param.values()), None)
        target = representative_params(rep_id, entry_param, field)
        reached = apply_b4_chain(b, chain)
        for got, want in zip(reached, target):
            if not (got - want).is_zero:
                raise UnclassifiedParameters(
                    f"chain for {trace} missed its target: {reached} != {target}"
                )
        return ClassifyResult(
            family="b4",
            rep_id=rep_id,
            branch_trace=trace,
            param=param,
            chain=list(chain),
            work_field=field,
            target=target,
            invariants=inv,
        )

    if b4.is_zero:
        if b3.is_zero:
            return result("b4.1", "teo1.1", [(one, z, one, b1, b2)])
        return result("b4.2", "teo1.2", [(one, z, one / b3, b1 / b3, b2 / b3)])
    T = inv["T"]
    J = inv["J"]
    if T.is_zero and b2.is_zero:
        return result("b4.3", "teo1.3", [(one, z, one, b3, b4)])
    if not T.is_zero:
        g = (one, (b4 - b2) / T, one, b3, b4)
        return result("b4.4", "teo1.4", [g], {"beta": J})
    B2 = b2 / b4
    g = (one, z, B2, b3 * B2 * B2, b4 * B2 * B2)
    return result("b4.4", "teo1.4", [g], {"beta": J})
