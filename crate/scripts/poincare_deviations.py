#!/usr/bin/env python3
"""Deviations of a local ring from the Poincaré series of its residue field.

Writes P(t) = prod_{odd i} (1 + t^i)^{e_i} / prod_{even i} (1 - t^i)^{e_i}
and solves for e_1..e_N one degree at a time. For a ring of embedding
dimension d with m^2 = 0 the series is 1/(1 - d t).

    python3 scripts/poincare_deviations.py            # d = 2, N = 4
    python3 scripts/poincare_deviations.py 3 6
"""

import sys
from fractions import Fraction
from math import comb


def mul(a, b, n):
    out = [Fraction(0)] * (n + 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b[: n + 1 - i]):
                out[i + j] += x * y
    return out


def factor(i, e, n):
    """Series of (1 + t^i)^e for odd i, (1 - t^i)^(-e) for even i."""
    out = [Fraction(0)] * (n + 1)
    k = 0
    while k * i <= n:
        out[k * i] = Fraction(comb(e, k)) if i % 2 else Fraction(comb(e + k - 1, k))
        k += 1
    return out


def deviations(series, n):
    q = [Fraction(1)] + [Fraction(0)] * n
    eps = []
    for i in range(1, n + 1):
        e = series[i] - q[i]
        if e.denominator != 1 or e < 0:
            raise ValueError(f"no integral deviation in degree {i}: {e}")
        eps.append(int(e))
        q = mul(q, factor(i, int(e), n), n)
    return eps


def main():
    d = int(sys.argv[1]) if len(sys.argv) > 1 else 2
    n = int(sys.argv[2]) if len(sys.argv) > 2 else 4
    series = [Fraction(d) ** k for k in range(n + 1)]
    print(" ".join(str(e) for e in deviations(series, n)))


if __name__ == "__main__":
    main()
