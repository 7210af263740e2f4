"""Arbitrary-precision reference values for the graphene element model.

Prints C++ constants consumed by tests/test_graphene.cpp. Run:
    python3 tests/oracles/graphene_oracle.py
"""
from mpmath import mp, mpf, mpc, cosh, log, pi, sqrt

mp.dps = 50

E = mpf("1.602176634e-19")
HBAR = mpf("1.054571817e-34")
KB = mpf("1.380649e-23")
EPS0 = mpf("8.8541878128e-12")
C0 = mpf("299792458")


def sigma(ef_j, omega, temp=mpf(300), tau=mpf("1e-12")):
    kbt = KB * temp
    pref = 2 * E**2 / (pi * HBAR**2) * kbt * log(2 * cosh(ef_j / (2 * kbt)))
    return pref * mpc(0, 1) / mpc(omega, 1 / tau)


def fermi(v_g, n0=mpf("1e15"), alpha=mpf("1e16"), v_cnp=mpf(0), vf=mpf("1e6")):
    nd = sqrt(n0**2 + alpha * (v_cnp - v_g) ** 2)
    return HBAR * vf * sqrt(pi * nd)


def eps_eff(s, omega, tg=mpf("1e-9")):
    return 1 + mpc(0, 1) * s / (omega * EPS0 * tg)


def phase(eps, freq, a=mpf("66e-6"), m=1):
    k0 = 2 * pi * freq / C0
    return m * pi - a * k0 * sqrt(eps).real


def show(name, v):
    if isinstance(v, mpc):
        print(f"constexpr double {name}_re = {mp.nstr(v.real, 20)};")
        print(f"constexpr double {name}_im = {mp.nstr(v.imag, 20)};")
    else:
        print(f"constexpr double {name} = {mp.nstr(v, 20)};")


f = mpf("1.6e12")
w = 2 * pi * f
s = sigma(mpf("0.2") * E, w)
show("kSigma02eV", s)
ep = eps_eff(s, w)
show("kEps02eV", ep)
show("kPhase02eV", phase(ep, f))
show("kFermi1V", fermi(mpf(1)))
show("kFermi0V", fermi(mpf(0)))
# voltage term comparable to n0^2
show("kFermiStrongGate", fermi(mpf("1.5"), alpha=mpf("3e30"), v_cnp=mpf("0.25")))
