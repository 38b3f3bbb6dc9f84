#!/usr/bin/env python3
"""Paired t-test reference values by direct numerical integration of the t density.

Writes ttest_fixtures.inc (C++ initializer rows). Re-run with:
    python3 tests/oracles/gen_ttest_oracle.py > tests/oracles/ttest_fixtures.inc
"""
import random

import mpmath as mp

mp.mp.dps = 40
SEED = 20240611
COUNT = 50


def t_density(x, df):
    df = mp.mpf(df)
    c = mp.gamma((df + 1) / 2) / (mp.sqrt(df * mp.pi) * mp.gamma(df / 2))
    return c * (1 + x * x / df) ** (-(df + 1) / 2)


def upper_tail(t, df):
    return mp.quad(lambda x: t_density(x, df), [t, t + 10, mp.inf])


def quantile_975(df):
    # upper tail of 0.025
    return mp.findroot(lambda q: upper_tail(q, df) - mp.mpf("0.025"), mp.mpf(2))


def fixture(rng):
    n = rng.randint(3, 30)
    if rng.random() < 0.5:
        pre = [float(rng.randint(-3, 3)) for _ in range(n)]
        post = [float(min(3, max(-3, p + rng.randint(-2, 3)))) for p in pre]
    else:
        pre = [round(rng.gauss(50, 10), 3) for _ in range(n)]
        shift = rng.uniform(-4, 4)
        post = [round(p + shift + rng.gauss(0, 5), 3) for p in pre]
    d = [mp.mpf(b) - mp.mpf(a) for a, b in zip(pre, post)]
    mean = mp.fsum(d) / n
    var = mp.fsum((x - mean) ** 2 for x in d) / (n - 1)
    if var == 0:
        return None
    se = mp.sqrt(var / n)
    t = mean / se
    df = n - 1
    p = 2 * upper_tail(abs(t), df)
    q = quantile_975(df)
    return pre, post, t, p, mean - q * se, mean + q * se


def fmt(v):
    return mp.nstr(v, 20, min_fixed=-5, max_fixed=0)


def main():
    rng = random.Random(SEED)
    rows = []
    while len(rows) < COUNT:
        f = fixture(rng)
        if f is not None:
            rows.append(f)
    print("// Generated by gen_ttest_oracle.py; do not edit.")
    print("// {pre}, {post}, t, p_two_sided, ci_lo, ci_hi")
    for pre, post, t, p, lo, hi in rows:
        print("{{{}}}, {{{}}}, {}, {}, {}, {}}},".format(
            "{" + ", ".join(repr(x) for x in pre),
            ", ".join(repr(x) for x in post),
            fmt(t), fmt(p), fmt(lo), fmt(hi)))


if __name__ == "__main__":
    main()
