"""Arbitrary-precision reference values frozen into the test suite.

Evaluates the closed-form expressions directly from the CODATA 2018 inputs
with mpmath at 50 digits, independently of the package code paths.

    python scripts/golden_values.py
"""
import mpmath as mp

mp.mp.dps = 50

hbar = mp.mpf("1.054571817e-27")
c = mp.mpf("2.99792458e10")
alpha = mp.mpf("7.2973525693e-3")
m_e = mp.mpf("9.1093837015e-28")
m_p = mp.mpf("1.67262192369e-24")
keV = mp.mpf("1.602176634e-9")
e2 = alpha * hbar * c
m_N = m_p

lam = mp.mpf("2.2e-17")
r_c = mp.mpf("1e-5")


def fu_rate(p):
    return hbar / c**3 * e2 * lam / (mp.pi * r_c**2 * m_N**2 * p)


def main():
    p11 = 11 * keV / (hbar * c)
    print("p(11 keV) [cm^-1]              ", mp.nstr(p11, 17))
    print("8 pi^(3/2)                     ", mp.nstr(8 * mp.pi**1.5, 17))
    print("gamma(2.2e-17, 1e-5) [cm^3/s]  ", mp.nstr(8 * mp.pi**1.5 * r_c**3 * lam, 17))
    print("Fu rate at 11 keV [cm/s]       ", mp.nstr(fu_rate(p11), 17))

    mu = m_e * m_p / (m_e + m_p)
    a0 = hbar**2 / (mu * e2)
    p = mp.mpf("0.01") / a0
    dipole = mp.mpf(43) / 8 * mu**2 * a0**6 / hbar**4
    small = 2 * p**3 * hbar**3 / c / m_N**2 * e2 * lam / (mp.pi * r_c**2) * dipole
    print("small-p H rate, p a0 = 0.01    ", mp.nstr(small, 17))

    x = p11 * a0
    F = 1 - 1 / (1 + (x / 2) ** 2) ** 2
    print("F(p a0) at 11 keV              ", mp.nstr(F, 17))
    print("3 sqrt(pi) / 8                 ", mp.nstr(3 * mp.sqrt(mp.pi) / 8, 17))

    # Dalgarno-Lewis: chi = -(1 + r/2) z psi_1s, <chi|chi> = (4/3) Int (1 + r/2)^2 r^4 e^-2r dr
    dl = mp.mpf(4) / 3 * mp.quad(lambda r: (1 + r / 2) ** 2 * r**4 * mp.e ** (-2 * r), [0, mp.inf])
    print("Dalgarno-Lewis norm (a.u.)     ", mp.nstr(dl, 17))


if __name__ == "__main__":
    main()
