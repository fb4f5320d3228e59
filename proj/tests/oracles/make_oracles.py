"""Regenerates oracle_values.hpp from mpmath (50 digits)."""
import mpmath as mp

mp.mp.dps = 50


def c(z):
    z = mp.mpc(z)
    return "{%s, %s}" % (mp.nstr(z.real, 20, min_fixed=-1, max_fixed=-1),
                         mp.nstr(z.imag, 20, min_fixed=-1, max_fixed=-1))


def eis(tau, k, coef):
    q = mp.exp(2j * mp.pi * tau)
    return 1 + coef * mp.nsum(lambda n: n ** (k - 1) * q ** n / (1 - q ** n), [1, mp.inf])


out = ["// Generated by make_oracles.py; do not edit.", "#pragma once", "#include <complex>", "",
       "namespace oracle", "{", "using C = std::complex<double>;", ""]

taus = [mp.mpc(0, 1), mp.mpc(0.3, 0.8), mp.mpc(-0.7, 0.45), mp.mpc(0.25, 2.5), mp.mpc(0.5, 0.06)]
out.append("struct ThetaCase { C tau, theta2, theta3, theta4, eta, g2, g3; };")
out.append("inline const ThetaCase theta_cases[] = {")
for t in taus:
    q = mp.exp(1j * mp.pi * t)
    e2 = eis(t, 2, -24)
    e4 = eis(t, 4, 240)
    e6 = eis(t, 6, -504)
    row = [t, mp.jtheta(2, 0, q), mp.jtheta(3, 0, q), mp.jtheta(4, 0, q), mp.pi ** 2 / 12 * e2,
           mp.pi ** 4 / 12 * e4, mp.pi ** 6 / 216 * e6]
    out.append("    {" + ", ".join(c(v) for v in row) + "},")
out.append("};\n")

def quad(k):
    """K, K', E, E' with K' continued in k from the positive axis (AGM started at k)."""
    m = k * k
    K, E = mp.ellipk(m), mp.ellipe(m)
    Kp = mp.pi / (2 * mp.agm(1, k))
    Ep = (mp.pi / 2 - Kp * E + K * Kp) / K if k.real < 0 else mp.ellipe(1 - m)
    return K, Kp, E, Ep


ks = [mp.mpc(0.3, 0.2), mp.mpc(0.5, 0), mp.mpc(0.8, -0.1), mp.mpc(-0.4, 0.6), mp.mpc(0.05, 0.01)]
out.append("struct EllipticCase { C k, K, Kprime, E, Eprime; };")
out.append("inline const EllipticCase elliptic_cases[] = {")
for k in ks:
    out.append("    {" + ", ".join(c(v) for v in [k, *quad(k)]) + "},")
out.append("};\n")

hyp = [(0.5, 0.5, 1, 0.3), (mp.mpf(1) / 6, mp.mpf(1) / 3, 0.5, mp.mpc(0.9, 0.1)), (0.25, 0.75, 1.5, -2),
       (mp.mpf(1) / 3, mp.mpf(2) / 3, 1, mp.mpc(0.75, 0.5)), (0.5, 0.5, 1, mp.mpc(2, 0.3)), (1, 1, 2, 0.5),
       (0.5, 0.5, 1, 0.95), (mp.mpc(0.2, 0.1), 0.7, mp.mpc(1.3, -0.2), mp.mpc(-0.6, 0.65)),
       (0.5, 0.25, 2, mp.mpc(-5, 1))]
out.append("struct HypCase { C a, b, c, s, value; };")
out.append("inline const HypCase hyp_cases[] = {")
for a, b, cc, s in hyp:
    out.append("    {" + ", ".join(c(v) for v in [a, b, cc, s, mp.hyp2f1(a, b, cc, s)]) + "},")
out.append("};\n")
# on the cut, limits from above and below
out.append("struct CutCase { C a, b, c; double s; C above, below; };")
out.append("inline const CutCase cut_cases[] = {")
for a, b, cc, s in [(0.5, 0.5, 1, 3.0), (mp.mpf(1) / 6, mp.mpf(1) / 3, 0.5, 1.7)]:
    up = mp.hyp2f1(a, b, cc, mp.mpc(s, mp.mpf("1e-40")))
    dn = mp.hyp2f1(a, b, cc, mp.mpc(s, -mp.mpf("1e-40")))
    out.append("    {" + ", ".join([c(a), c(b), c(cc), mp.nstr(s, 17), c(up), c(dn)]) + "},")
out.append("};\n")

out.append("struct GammaCase { C z, gamma; };")
out.append("inline const GammaCase gamma_cases[] = {")
for z in [mp.mpc(0.3, 0.4), mp.mpc(-2.5, 0), mp.mpc(5.5, -3), mp.mpc(-0.7, 1.2), mp.mpc(12, 0.5)]:
    out.append("    {%s, %s}," % (c(z), c(mp.gamma(z))))
out.append("};\n")

out.append("struct LegendreCase { C nu, mu, z, P, Q; };")
out.append("inline const LegendreCase legendre_cases[] = {")
for nu, mu, z in [(0.5, mp.mpf(1) / 3, mp.mpc(2, 0.5)), (mp.mpf(1) / 6, -mp.mpf(1) / 6, mp.mpc(1.5, 0.2)),
                  (-0.5, 0.25, mp.mpc(3, -1)), (mp.mpf(1) / 3, 0.5, mp.mpc(-2, 0.7))]:
    out.append("    {" + ", ".join(c(v) for v in [nu, mu, z, mp.legenp(nu, mu, z, type=3), mp.legenq(nu, mu, z, type=3)]) + "},")
out.append("};\n")

# Canonical19 integrals, modulus z / y.
out.append("struct CanonicalCase { C x, y, z, u, J1, J2; };")
out.append("inline const CanonicalCase canonical_cases[] = {")
for x, y, z, u in [(mp.mpc(0.7, 0.2), mp.mpc(1.1, -0.3), mp.mpc(0.4, 0.5), mp.mpc(-0.3, 0.2)),
                   (1, 2, 1, 0), (mp.mpc(0.3, -0.1), mp.mpc(0.9, 0.4), mp.mpc(-0.2, 0.3), mp.mpc(0.5, 0.5))]:
    m = mp.mpc(z) / y
    K, Kp, E, Ep = quad(m)
    J1 = (u - 2 * y * y + z * z) / y * K + 3 * y * E
    J2 = (u + y * y + z * z) / y * Kp - 3 * y * Ep
    out.append("    {" + ", ".join(c(v) for v in [x, y, z, u, J1, J2]) + "},")
out.append("};\n")
out.append("} // namespace oracle")
open(__file__.replace("make_oracles.py", "oracle_values.hpp"), "w").write("\n".join(out) + "\n")
