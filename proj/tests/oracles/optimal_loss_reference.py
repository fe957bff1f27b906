"""Reference values of the optimal loss at high precision.

Largest root of P_{T,K}(x) = sum_m C(K,m) rising(-T,K-m) x^m by bisection in
mpmath with 300 digits. Integer coefficients are exact.
"""
import sys
import mpmath as mp

mp.mp.dps = 300


def rising(x, m):
    out = 1
    for i in range(m):
        out *= x + i
    return out


def largest_root(T, K):
    coeffs = [mp.binomial(K, m) * rising(-T, K - m) for m in range(K + 1)]

    def p(x):
        acc = mp.mpf(0)
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    # Geometric scan down from the naive bound towards T for the first sign
    # change; steps shrink near T where the roots cluster.
    lo = mp.mpf(T)
    prev = mp.mpf(T * K)
    for i in range(1, 20000):
        x = lo + (prev - lo) * mp.mpf("0.995")
        if p(x) < 0:
            a, b = x, prev
            break
        prev = x
    else:
        raise RuntimeError("no sign change")
    for _ in range(400):
        mid = (a + b) / 2
        if p(mid) < 0:
            a = mid
        else:
            b = mid
    return b


if __name__ == "__main__":
    cases = [(100, 5), (1000, 10), (10 ** 6, 8), (10 ** 6, 16), (10 ** 6, 64), (50, 40)]
    for T, K in cases:
        print(T, K, mp.nstr(largest_root(T, K), 25))
