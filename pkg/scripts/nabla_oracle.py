#!/usr/bin/env python3
"""Standalone cross-check of the degree-four bracket polynomial.

Deliberately imports nothing from the package: the 17 monomials are written
out again here and evaluated with stdlib Fractions, so a transcription error
on either side makes the two identities below fail.

  nabla(1,1,0,0,1,d) == -d          (pencil with invariant tail)
  nabla(0,1,0,g,1,g*(1-g)) == 0     (the vanishing locus pencil)

Exit status 0 iff both hold on every sampled value.
"""
from fractions import Fraction

# Gaussian rationals as (re, im) pairs of Fractions.


def gr(a, b=0):
    return (Fraction(a), Fraction(b))


def add(x, y):
    return (x[0] + y[0], x[1] + y[1])


def sub(x, y):
    return (x[0] - y[0], x[1] - y[1])


def mul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


ZERO, ONE = gr(0), gr(1)

# coefficient, then exponents of (a1, a2, a3, a4, a5, a6)
TERMS = (
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


def nabla(params):
    total = ZERO
    for coef, exps in TERMS:
        term = gr(coef)
        for base, e in zip(params, exps):
            for _ in range(e):
                term = mul(term, base)
        total = add(total, term)
    return total


SAMPLES = [
    gr(1), gr(-1), gr(2), gr(-2), gr(Fraction(1, 2)),
    gr(Fraction(-1, 3)), gr(0, 1), gr(1, 1), gr(Fraction(3, 2), -1), gr(-5),
]


def main() -> int:
    bad = 0
    for d in SAMPLES:
        got = nabla((ONE, ONE, ZERO, ZERO, ONE, d))
        want = sub(ZERO, d)
        ok = got == want
        bad += not ok
        print(f"{'PASS' if ok else 'FAIL'} nabla(1,1,0,0,1,{d}) = {got}, expected {want}")
    for g in SAMPLES:
        tail = mul(g, sub(ONE, g))
        got = nabla((ZERO, ONE, ZERO, g, ONE, tail))
        ok = got == ZERO
        bad += not ok
        print(f"{'PASS' if ok else 'FAIL'} nabla(0,1,0,{g},1,{tail}) = {got}, expected (0, 0)")
    print(f"{len(SAMPLES) * 2 - bad}/{len(SAMPLES) * 2} identities hold")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
