"""Regenerate the high-precision multiplier values frozen in test_multipliers.py.

Run ``python tests/oracles/multiplier_oracles.py``; needs mpmath.
"""
from mpmath import mp, mpf, cosh, tanh

mp.dps = 40


def tanhc(x):
    return tanh(x) / x


def f2(x):
    return 3 / x**2 * (1 - tanh(x) / x)


def f3(x):
    return 3 / x**2 * (x / tanh(x) - 1)


def f0(z, x):
    return cosh((z + 1) * x) / cosh(x)


if __name__ == "__main__":
    for s in ("1e-5", "1e-4", "1e-3", "0.5", "3", "30"):
        x = mpf(s)
        print(s, mp.nstr(tanhc(x), 20), mp.nstr(f2(x), 20), mp.nstr(f3(x), 20))
    print("F1(1)  ", mp.nstr(tanh(1), 20))
    print("F2(2)  ", mp.nstr(f2(mpf(2)), 20))
    print("F3(2)  ", mp.nstr(f3(mpf(2)), 20))
    print("F0(-1, 10)  ", mp.nstr(f0(mpf(-1), mpf(10)), 20))
    print("F0(-0.3, 0.7)", mp.nstr(f0(mpf("-0.3"), mpf("0.7")), 20))
