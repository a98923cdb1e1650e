"""High-precision reference values for the mode kernels (mpmath, 60 digits).

Run: python3 mp_reference.py
The printed numbers are frozen into ../oracle_values.rs.
"""
from mpmath import mp, mpf, sqrt, pi, besseli, besselk, log, diff

mp.dps = 60


def s(l, x):
    return sqrt(pi * x / 2) * besseli(l + mpf(1) / 2, x)


def e(l, x):
    return sqrt(2 * x / pi) * besselk(l + mpf(1) / 2, x)


def ds(l, x):
    return diff(lambda t: s(l, t), x)


def de(l, x):
    return diff(lambda t: e(l, t), x)


def lam(l, x, y):
    af = s(l, x) / e(l, x)
    ag = ds(l, x) / de(l, x)
    return log((1 - af * e(l, y) / s(l, y)) * (1 - ag * de(l, y) / ds(l, y)))


def dlam(l, x, y):
    return diff(lambda t: lam(l, x, t), y)


def er2(l, rho, y):
    ag = ds(l, rho * y) / de(l, rho * y)
    r = (s(l, y) - ag * e(l, y)) / (ds(l, y) - ag * de(l, y))
    return (2 * l + 1) / (4 * pi) * l * (l + 1) * r / y


def hperp(l, rho, y):
    x = rho * y
    af = s(l, x) / e(l, x)
    ag = ds(l, x) / de(l, x)
    g = (s(l, y) - ag * e(l, y)) / (ds(l, y) - ag * de(l, y))
    f = (ds(l, y) - af * de(l, y)) / (s(l, y) - af * e(l, y))
    return (2 * l + 1) / (4 * pi) * (g + f)


def show(name, v):
    print(f"{name} = {mp.nstr(v, 20)}")


for (l, x) in [(0, 1), (3, 2.7), (10, 0.5), (25, 7.0), (40, 3.0), (60, 50.0), (5, 0.01)]:
    x = mpf(x)
    show(f"s({l},{x})", s(l, x))
    show(f"ds({l},{x})", ds(l, x))
    show(f"e({l},{x})", e(l, x))
    show(f"de({l},{x})", de(l, x))

show("A_F(1,1)", s(1, 1) / e(1, 1))
show("A_G(1,1)", ds(1, 1) / de(1, 1))
show("lambda(3,1,2)", lam(3, mpf(1), mpf(2)))
show("lambda(1,0.5,1)", lam(1, mpf("0.5"), mpf(1)))
show("lambda(7,4.5,5)", lam(7, mpf("4.5"), mpf(5)))
show("dlambda(1,0.5,1)", dlam(1, mpf("0.5"), mpf(1)))
show("dlambda(4,2.7,3)", dlam(4, mpf("2.7"), mpf(3)))
show("er2(1,0.5,1)", er2(1, mpf("0.5"), mpf(1)))
show("hperp(1,0.5,1)", hperp(1, mpf("0.5"), mpf(1)))
show("er2(6,0.8,2.5)", er2(6, mpf("0.8"), mpf("2.5")))
show("hperp(6,0.8,2.5)", hperp(6, mpf("0.8"), mpf("2.5")))
