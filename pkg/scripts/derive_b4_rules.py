#!/usr/bin/env python3
"""Brute-force audit of the four-parameter catalog over small prime fields.

Enumerates every admissible tail tuple (b2, b4 not both zero) mod p, splits
them into isomorphism orbits with the batch kernels, and checks that

  * every orbit contains at least one realized catalog tuple (coverage),
  * the three fixed representatives lie in pairwise distinct orbits,
  * the classifier assigns one label per orbit wherever it applies.

Pencil members teo1.4(beta) may collapse mod p even though they are pairwise
distinct in characteristic zero; collisions are reported, not failed.

Usage: python scripts/derive_b4_rules.py [primes ...]   (default: 5 7)
"""
from __future__ import annotations

import sys
from itertools import product

from nilgrade.classify import canonical_form_b4
from nilgrade.errors import NilgradeError
from nilgrade.modp import orbit
from nilgrade.scalar import fp_field

FIXED = {"teo1.1": (0, 1, 0, 0), "teo1.2": (0, 1, 1, 0), "teo1.3": (1, 0, 0, 1)}


def catalog_points(p: int):
    pts = dict(FIXED)
    for beta in range(p):
        pts[f"teo1.4(beta={beta})"] = (beta, 1, 0, 1)
    return pts


def orbit_partition(p: int):
    seen: dict = {}
    orbits = []
    for tup in product(range(p), repeat=4):
        if tup in seen or (tup[1] == 0 and tup[3] == 0):
            continue
        members = orbit("b4", tup, p)
        orbits.append(members)
        for m in members:
            seen[m] = len(orbits) - 1
    return orbits, seen


def orbit_label(members, p: int):
    """Classifier output on a few members; one label or the disagreement."""
    field = fp_field(p)
    labels = set()
    for tup in sorted(members)[:3]:
        try:
            res = canonical_form_b4(tuple(field.coerce(x) for x in tup), field)
        except NilgradeError as exc:
            labels.add(f"<{type(exc).__name__}>")
            continue
        pv = ",".join(f"{k}={v.val}" for k, v in sorted(res.param.items()))
        labels.add(f"{res.rep_id}({pv})" if pv else res.rep_id)
    return labels


def audit(p: int) -> int:
    orbits, index = orbit_partition(p)
    points = catalog_points(p)
    total = sum(len(o) for o in orbits)
    print(f"F_{p}: {total} admissible tuples in {len(orbits)} orbits")

    where: dict = {}
    for name, tup in points.items():
        where.setdefault(index[tup], []).append(name)

    failures = 0
    for k, members in enumerate(orbits):
        names = where.get(k, [])
        labels = orbit_label(members, p)
        line = f"  orbit {k:2d} size {len(members):5d}  reps: {', '.join(names) or 'NONE'}"
        if len(labels) == 1:
            line += f"  classifier: {labels.pop()}"
        else:
            line += f"  classifier DISAGREES: {sorted(labels)}"
            failures += 1
        print(line)
        if not names:
            failures += 1

    fixed_orbits = [index[t] for t in FIXED.values()]
    if len(set(fixed_orbits)) != len(fixed_orbits):
        print("  FIXED REPRESENTATIVES COLLIDE")
        failures += 1

    merged = [ns for ns in where.values() if len(ns) > 1]
    for ns in merged:
        print(f"  note: mod-{p} collision {ns}")
    return failures


def main() -> int:
    primes = [int(a) for a in sys.argv[1:]] or [5, 7]
    bad = sum(audit(p) for p in primes)
    print("catalog covers every orbit" if bad == 0 else f"{bad} problem(s) found")
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
