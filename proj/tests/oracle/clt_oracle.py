#!/usr/bin/env python3
"""Independent high-precision values for the Wigner CLT mean/covariance and
related closed forms. Uses mpmath with analytic derivatives; shares no code
with the C++ library. The printed values are frozen into test_laws.cpp and
the acceptance binary."""

import mpmath as mp

mp.mp.dps = 40


def s_sc(z):
    # root of s^2 + z s + 1 = 0 with Im s > 0
    q = mp.sqrt(z * z - 4)
    r1, r2 = (-z + q) / 2, (-z - q) / 2
    return r1 if mp.im(r1) > 0 else r2


def a_fn(z, sigma2, kappa, beta):
    s = s_sc(z)
    sp = mp.diff(s_sc, z)
    return (1 + sp) * s**3 * (sigma2 - 1 + (kappa - 1) * sp + beta * s**2)


def b_fn(z1, z2, sigma2, kappa, beta):
    s1, s2 = s_sc(z1), s_sc(z2)
    d1, d2 = mp.diff(s_sc, z1), mp.diff(s_sc, z2)
    return d1 * d2 * (sigma2 - kappa + 2 * beta * s1 * s2 + kappa / (1 - s1 * s2) ** 2)


def d2b(z1, z2, c):
    return mp.diff(lambda u, w: b_fn(u, w, *c), (z1, z2), (1, 1))


def main():
    real = (1, 2, 0)
    for z in (2j, 1.5j):
        z = mp.mpc(z)
        print(f"s({mp.nstr(z, 4)}) = {mp.nstr(s_sc(z), 20)}")
        print(f"s'({mp.nstr(z, 4)}) = {mp.nstr(mp.diff(s_sc, z), 20)}")
        print(f"a({mp.nstr(z, 4)}) = {mp.nstr(a_fn(z, *real), 20)}")
        print(f"a'({mp.nstr(z, 4)}) = {mp.nstr(mp.diff(lambda u: a_fn(u, *real), z), 20)}")
    pts = (mp.mpc(2j), mp.mpc(1.5j))
    for i in range(2):
        for j in range(i, 2):
            print(f"b({mp.nstr(pts[i], 4)},{mp.nstr(pts[j], 4)}) = "
                  f"{mp.nstr(b_fn(pts[i], pts[j], *real), 20)}")
            print(f"d2b({mp.nstr(pts[i], 4)},{mp.nstr(pts[j], 4)}) = "
                  f"{mp.nstr(d2b(pts[i], pts[j], real), 20)}")
    # Marchenko-Pastur m at y = 0.5, z = i from the quadratic y z m^2 - (1 - y - z) m + 1 = 0
    y, z = mp.mpf("0.5"), mp.mpc(1j)
    a, b, c = y * z, -(1 - y - z), 1
    roots = [(-b + sgn * mp.sqrt(b * b - 4 * a * c)) / (2 * a) for sgn in (1, -1)]
    print("mp(y=0.5,z=i) =", mp.nstr([r for r in roots if mp.im(r) > 0][0], 20))
    # semicircle CDF at 1
    print("F_sc(1) =", mp.nstr(mp.mpf(1) / 2 + mp.sqrt(3) / (4 * mp.pi) + mp.asin(mp.mpf(1) / 2) / mp.pi, 20))


if __name__ == "__main__":
    main()
