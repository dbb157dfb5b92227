#!/usr/bin/env python3
"""Regenerate fixtures/s3_field.json.

The splitting field of x^3 - 2 over Q, presented on the power basis of the
primitive element theta = cbrt(2) + sqrt(-3). All arithmetic is exact
(fractions); the crate's loader re-checks every identity on load.
"""
import json
import sys
from fractions import Fraction as F

N = 6


# Elements are coordinate vectors on the auxiliary basis a^i s^j
# (i in 0..3, j in 0..2, index i + 3j) with a^3 = 2 and s^2 = -3.
def aux_mul(x, y):
    out = [F(0)] * N
    for p in range(N):
        if x[p] == 0:
            continue
        for q in range(N):
            if y[q] == 0:
                continue
            i, j = p % 3 + q % 3, p // 3 + q // 3
            c = x[p] * y[q]
            if i >= 3:
                i -= 3
                c *= 2
            if j >= 2:
                j -= 2
                c *= -3
            out[i + 3 * j] += c
    return out


def aux_basis(k):
    v = [F(0)] * N
    v[k] = F(1)
    return v


def aux_pow(x, e):
    out = aux_basis(0)
    for _ in range(e):
        out = aux_mul(out, x)
    return out


def solve(m, b):
    n = len(m)
    a = [row[:] + [b[i]] for i, row in enumerate(m)]
    for c in range(n):
        p = next(r for r in range(c, n) if a[r][c] != 0)
        a[c], a[p] = a[p], a[c]
        piv = a[c][c]
        a[c] = [v / piv for v in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [vr - f * vc for vr, vc in zip(a[r], a[c])]
    return [a[r][n] for r in range(n)]


alpha = aux_basis(1)
s = aux_basis(3)
theta = [x + y for x, y in zip(alpha, s)]
powers = [aux_pow(theta, i) for i in range(2 * N - 1)]
# columns of p are theta^i in auxiliary coordinates
p = [[powers[j][i] for j in range(N)] for i in range(N)]


def to_theta(v):
    return solve(p, v)


half = F(1, 2)
omega = [F(-1, 2), F(0), F(0), half, F(0), F(0)]

# (k, e): cbrt(2) -> omega^k cbrt(2), sqrt(-3) -> e sqrt(-3); index k + 3*(e == -1)
elements = [(k, e) for e in (1, -1) for k in range(3)]
labels = ["e", "r", "r2", "f", "rf", "r2f"]


def apply_aut(k, e, v):
    a_img = aux_mul(aux_pow(omega, k), alpha)
    s_img = [e * c for c in s]
    out = [F(0)] * N
    for idx in range(N):
        if v[idx] == 0:
            continue
        term = aux_mul(aux_pow(a_img, idx % 3), aux_pow(s_img, idx // 3))
        out = [o + v[idx] * t for o, t in zip(out, term)]
    return out


def compose(x, y):
    (k1, e1), (k2, e2) = x, y
    return ((k1 + e1 * k2) % 3, e1 * e2)


table = [[elements.index(compose(x, y)) for y in elements] for x in elements]

auto = {}
for label, (k, e) in zip(labels, elements):
    # column j = sigma(theta^j) in theta coordinates
    cols = [to_theta(apply_aut(k, e, powers[j])) for j in range(N)]
    auto[label] = [[str(cols[j][i]) for j in range(N)] for i in range(N)]

mult = [[[str(c) for c in to_theta(powers[i + j])] for j in range(N)] for i in range(N)]
one = ["1"] + ["0"] * (N - 1)

doc = {
    "group": {"order": N, "identity": 0, "table": table, "labels": labels},
    "mode": "field",
    "mult": mult,
    "one": one,
    "auto": auto,
}
json.dump(doc, sys.stdout, indent=1)
sys.stdout.write("\n")
