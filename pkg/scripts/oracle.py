#!/usr/bin/env python3
"""Independent high-precision oracle for the frozen test values.

Evaluates every closed-form quantity used as an expected value in the
test suite with mpmath at 50 significant digits, straight from the
formulas, without importing the ringfwm package. Run it to regenerate
the table; the numbers are frozen into tests/test_acceptance.py and the
unit tests.
"""

import mpmath as mp

mp.mp.dps = 50

# CODATA 2018 exact/recommended values
C = mp.mpf("299792458")            # m/s
HBAR = mp.mpf("6.62607015e-34") / (2 * mp.pi)   # J s, from the exact h
EV = mp.mpf("1.602176634e-19")     # J

# Reference device: R=5 um ring
R = mp.mpf("5e-6")
Q = mp.mpf("7900")
N_EFF = mp.mpf("2.47")
LAMBDA_P = mp.mpf("1558.5e-9")
GAMMA = mp.mpf("190")              # 1/(W m)
P_P = mp.mpf("1e-3")
P_S = mp.mpf("200e-6")


def omega(lam):
    return 2 * mp.pi * C / lam


def enhancement(q, vg, w, r):
    return q * vg / (w * mp.pi * r)


def stimulated(r, q, gamma, n_eff, lam, pp, ps):
    vg = C / n_eff
    w = omega(lam)
    return (gamma * 2 * mp.pi * r) ** 2 * enhancement(q, vg, w, r) ** 4 * ps * pp ** 2


def spontaneous(r, q, gamma, n_eff, lam, pp):
    vg = C / n_eff
    w = omega(lam)
    return ((gamma * 2 * mp.pi * r) ** 2 * enhancement(q, vg, w, r) ** 3
            * HBAR * w * vg / (4 * mp.pi * r) * pp ** 2)


def main():
    w_p = omega(LAMBDA_P)
    vg = C / N_EFF

    print("omega(1558.5 nm)        =", mp.nstr(w_p, 17), "rad/s")
    print("photon energy (eV)      =", mp.nstr(HBAR * w_p / EV, 17))

    fsr = vg / R  # angular-frequency spacing
    print("FSR dOmega (R=5um)      =", mp.nstr(fsr, 17), "rad/s")
    print("FSR dOmega / 2pi        =", mp.nstr(fsr / (2 * mp.pi), 17), "Hz")
    dlam = LAMBDA_P ** 2 * fsr / (2 * mp.pi * C)
    print("FSR dLambda at pump     =", mp.nstr(dlam / mp.mpf("1e-9"), 17), "nm")

    ef = enhancement(Q, vg, w_p, R)
    print("enhancement factor      =", mp.nstr(ef, 17))

    p_st = stimulated(R, Q, GAMMA, N_EFF, LAMBDA_P, P_P, P_S)
    p_sp = spontaneous(R, Q, GAMMA, N_EFF, LAMBDA_P, P_P)
    print("P_i stimulated (W)      =", mp.nstr(p_st, 17))
    print("P_i spontaneous (W)     =", mp.nstr(p_sp, 17))
    print("pair rate (1/s)         =", mp.nstr(p_sp / (HBAR * w_p), 17))

    ratio = HBAR * w_p ** 2 / (4 * Q * P_S)
    print("ratio Eq-style (Q=7900) =", mp.nstr(ratio, 17))
    print("ratio check sp/st       =", mp.nstr(p_sp / p_st, 17))

    ratio30 = HBAR * w_p ** 2 / (4 * mp.mpf("15000") * P_S)
    print("ratio (Q=15000)         =", mp.nstr(ratio30, 17))

    # characteristic power hbar*omega^2
    w_08 = mp.mpf("0.8") * EV / HBAR
    print("char power @0.8 eV (W)  =", mp.nstr(HBAR * w_08 ** 2, 17))
    print("char power @1558.5nm(W) =", mp.nstr(HBAR * w_p ** 2, 17))

    # calibration: 7 dB total insertion, half per facet
    print("1 mW through 3.5 dB (W) =", mp.nstr(mp.mpf("1e-3") * 10 ** (-mp.mpf("3.5") / 10), 17))

    # R^-2 law across the paper's radii at fixed Q (log-log slope)
    radii = [mp.mpf(x) for x in ("5e-6", "10e-6", "20e-6", "30e-6")]
    xs = [mp.log(r) for r in radii]
    ys = [mp.log(spontaneous(r, Q, GAMMA, N_EFF, LAMBDA_P, P_P)) for r in radii]
    n = len(xs)
    xbar = mp.fsum(xs) / n
    ybar = mp.fsum(ys) / n
    slope = mp.fsum((x - xbar) * (y - ybar) for x, y in zip(xs, ys)) / \
        mp.fsum((x - xbar) ** 2 for x in xs)
    print("R-exponent, fixed Q     =", mp.nstr(slope, 17))

    # mixed-Q mode: paper's measured (R, Q) pairs
    qs = [mp.mpf(q) for q in ("7900", "8400", "12000", "15000")]
    ys_mixed = [mp.log(spontaneous(r, q, GAMMA, N_EFF, LAMBDA_P, P_P))
                for r, q in zip(radii, qs)]
    ybar_m = mp.fsum(ys_mixed) / n
    slope_m = mp.fsum((x - xbar) * (y - ybar_m) for x, y in zip(xs, ys_mixed)) / \
        mp.fsum((x - xbar) ** 2 for x in xs)
    print("R-exponent, paper Qs    =", mp.nstr(slope_m, 17))


if __name__ == "__main__":
    main()
