#!/usr/bin/env python3
"""Independent high-precision reference values, frozen into oracle_values.hpp.

Run: python3 tests/oracles/compute_oracles.py > tests/oracles/oracle_values.hpp
"""
import mpmath as mp

mp.mp.dps = 40


def series_1f2(a, b1, b2, z, terms=200):
    # plain term-by-term sum in exact-ish arithmetic
    s = mp.mpf(0)
    t = mp.mpf(1)
    for k in range(terms):
        s += t
        t = t * (a + k) / ((b1 + k) * (b2 + k)) * z / (k + 1)
    return s


def series_2f1(a, b, c, z, terms=400):
    s = mp.mpf(0)
    t = mp.mpf(1)
    for k in range(terms):
        s += t
        t = t * (a + k) * (b + k) / (c + k) * z / (k + 1)
    return s


def mode_energy(l, alpha):
    # (1/2pi) int_R |k|^alpha |phi_l(k)|^2 dk with phi_l for sqrt2 sin(l pi x) on (0,1)
    lp = l * mp.pi
    f = lambda k: 2 * l**2 * mp.pi * (1 - (-1) ** l * mp.cos(k)) / (k**2 - lp**2) ** 2 * abs(k) ** alpha
    pts = [0] + [j * mp.pi for j in range(1, 60)]
    body = mp.quad(f, pts)
    # tail beyond 59 pi by quadosc
    tail = mp.quadosc(f, [pts[-1], mp.inf], period=2 * mp.pi)
    return 2 * (body + tail) / (2 * mp.pi) * mp.pi / mp.pi


def stiffness_entry(m, n, alpha, L=1):
    # (1/pi) int_0^inf k^alpha Re(phi_m conj phi_n) dk, direct form.
    # beyond K the non-oscillating part goes to quad, the cos part is summed period by period
    a = m * mp.pi / L
    b = n * mp.pi / L
    s = (-1) ** m
    if (m + n) % 2:
        return mp.mpf(0)
    c = (4 / mp.mpf(L)) * a * b
    den = lambda k: (k**2 - a**2) * (k**2 - b**2)
    f = lambda k: k**alpha * c * (1 - s * mp.cos(k * L)) / den(k)
    P = 2 * mp.pi / L
    K = 40 * P
    body = mp.quad(f, [0] + [j * mp.pi / L for j in range(1, 81)])
    smooth = mp.quad(lambda k: k**alpha * c / den(k), [K, mp.inf])
    g = lambda k: -s * k**alpha * c * mp.cos(k * L) / den(k)
    osc = mp.nsum(lambda j: mp.quad(g, [K + j * P, K + j * P + P / 2, K + (j + 1) * P]), [0, mp.inf])
    return (body + smooth + osc) / mp.pi


def har2d_gap(alpha, eta):
    # 1 + 1/(pi sqrt eta) iint (2k1^2-1) |k|^alpha exp(-(k1^2 + k2^2/eta))
    f = lambda k1, k2: (2 * k1**2 - 1) * (k1**2 + k2**2) ** (alpha / 2) * mp.exp(-(k1**2 + k2**2 / eta))
    lim1 = 9
    lim2 = 9 * mp.sqrt(eta)
    v = 4 * mp.quad(f, [0, 1, 3, lim1], [0, 1, 3 * mp.sqrt(eta), lim2])
    return 1 + v / (mp.pi * mp.sqrt(eta))


def emit(name, value):
    print(f"inline constexpr double {name} = {mp.nstr(value, 20)};")


print("#pragma once")
print("// Generated by compute_oracles.py (mpmath, 40 digits). Do not edit.")
print("namespace oracle {")
emit("hyp1f2_2_1_half_mpi2q", series_1f2(mp.mpf(2), mp.mpf(1), mp.mpf(1) / 2, -mp.pi**2 / 4))
emit("hyp2f1_half_2_5h_quarter", series_2f1(mp.mpf(1) / 2, mp.mpf(2), mp.mpf(5) / 2, mp.mpf(1) / 4))
emit("hyp1f2_1p3_0p7_2p2_m5", series_1f2(mp.mpf("1.3"), mp.mpf("0.7"), mp.mpf("2.2"), mp.mpf(-5)))
emit("hyp2f1_m1p5_0p3_1p7_m0p8", series_2f1(mp.mpf("-1.5"), mp.mpf("0.3"), mp.mpf("1.7"), mp.mpf("-0.8"), 2000))
emit("bessel_j01_squared", mp.besseljzero(0, 1) ** 2)
for alpha in ["1.9", "1.95", "1.5", "1.0"]:
    a = mp.mpf(alpha)
    tag = alpha.replace(".", "p")
    emit(f"box1d_S11_a{tag}", stiffness_entry(1, 1, a))
    emit(f"box1d_S22_a{tag}", stiffness_entry(2, 2, a))
emit("box1d_S13_a1p5", stiffness_entry(1, 3, mp.mpf("1.5")))
emit("box1d_S24_L2_a0p7", stiffness_entry(2, 4, mp.mpf("0.7"), 2))
emit("har2d_gap_a1p9_eta4", har2d_gap(mp.mpf("1.9"), 4))
emit("har2d_gap_a1p5_eta2", har2d_gap(mp.mpf("1.5"), 2))
emit("local_V11_box1_half_x2", mp.mpf(1) / 6 - 1 / (4 * mp.pi**2))
print("}  // namespace oracle")
