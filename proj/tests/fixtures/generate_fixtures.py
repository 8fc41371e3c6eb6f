"""Regenerates tests/fixtures.hpp from high-precision mpmath quadrature.

Every value is computed from the defining integral in its original
coordinates, independently of the C++ quadrature code. Run from the
repository root:  python3 tests/fixtures/generate_fixtures.py
"""
from mpmath import mp, mpf, quad, sqrt, pi, beta, exp, gamma

mp.dps = 30
KAPPA = 1 / (2 * sqrt(2 * pi))


def double_integral(H, d, t, s):
    """int_0^t int_0^s |u-v|^(2H-2) ((t+s)-(u+v))^(-d/2) dv du, iterated in (v, u)."""
    H, t, s = mpf(H), mpf(t), mpf(s)
    q, e = 2 * H - 2, -mpf(d) / 2

    def inner(v):
        def f(u):
            diff, rest = abs(u - v), (t + s) - (u + v)
            if diff == 0 or rest == 0:  # measure-zero node hits at 30 digits
                return mpf(0)
            return diff ** q * rest ** e
        return quad(f, [0, v, t])

    return quad(inner, [0, s])


def rx_primary(H, t, s):
    H, t, s = mpf(H), mpf(t), mpf(s)
    a_h = H * (2 * H - 1)
    return 2 * KAPPA * a_h * quad(lambda a: (s - a) ** (2 * H - 2) * (sqrt(t + a) - sqrt(t - a)), [0, s])


def ry_primary(H, t, s):
    H, t, s = mpf(H), mpf(t), mpf(s)
    a_h = H * (2 * H - 1)
    return 2 * KAPPA * a_h * quad(lambda a: sqrt(s - a) * ((t + a) ** (2 * H - 2) + (t - a) ** (2 * H - 2)), [0, s])


def rx_ibp(H, t, s):
    H, t, s = mpf(H), mpf(t), mpf(s)
    return KAPPA * H * quad(lambda a: (s - a) ** (2 * H - 1) * ((t + a) ** -0.5 + (t - a) ** -0.5), [0, s])


def ry_ibp(H, t, s):
    H, t, s = mpf(H), mpf(t), mpf(s)
    return KAPPA * H * quad(lambda a: (s - a) ** -0.5 * ((t + a) ** (2 * H - 1) - (t - a) ** (2 * H - 1)), [0, s])


def rz_parts(H, t, s):
    """Integrated in w = s - a with w = s u^10, which smooths the w^(2H-2)
    and w^(-1/2) endpoint factors (they merge with (t-a) when t = s)."""
    H, t, s = mpf(H), mpf(t), mpf(s)
    a_h = H * (2 * H - 1)
    q = 2 * H - 2

    def smooth(g):
        return quad(lambda u: g(s * u ** 10) * 10 * s * u ** 9, [0, 1])

    first = -2 * KAPPA * a_h * smooth(lambda w: w ** q * ((t + s - w) ** -0.5 - (t - s + w) ** -0.5))
    second = 2 * KAPPA * a_h * smooth(lambda w: w ** -0.5 * ((t + s - w) ** q + (t - s + w) ** q))
    return first, second


def c0_sq(H, d):
    H = mpf(H)
    return KAPPA * H * (2 * H - 1) * (mpf(2) / (2 - d)) * beta(2 * H - 1, 2 - mpf(d) / 2)


def lead(H, d, t, s):
    g = 2 * mpf(H) - mpf(d) / 2
    return c0_sq(H, d) * ((mpf(t) + s) ** g - abs(mpf(t) - s) ** g)


def oracle(H, d, t, s):
    H = mpf(H)
    return 2 * KAPPA * H * (2 * H - 1) * double_integral(H, d, t, s)


def main():
    vals = {}
    x, y = mpf('0.02'), mpf('1.5')
    vals['kBeta002_15'] = 1 / x + quad(lambda u: u ** (x - 1) * ((1 - u) ** (y - 1) - 1), [0, 1])
    vals['kHeatCell_c1_t1_x0_01'] = quad(lambda z: exp(-z * z / 4) / sqrt(4 * pi), [0, 1])
    vals['kWeighted_sqrt_over_sqrt2ma'] = quad(lambda a: sqrt(a) / sqrt(2 - a), [0, 1])
    vals['kC0sq_075_1'] = c0_sq('0.75', 1)
    vals['kOracle_075_1_11'] = oracle('0.75', 1, 1, 1)
    vals['kOracle_075_1_1h'] = oracle('0.75', 1, 1, '0.5')
    vals['kOracle_065_1_1h'] = oracle('0.65', 1, 1, '0.5')
    vals['kRx_065_1h'] = rx_ibp('0.65', 1, '0.5')
    vals['kRy_065_1h'] = ry_ibp('0.65', 1, '0.5')
    vals['kOracle_09_3_11'] = oracle('0.9', 3, 1, 1)
    vals['kOracle_09_3_1h'] = oracle('0.9', 3, 1, '0.5')
    vals['kLead_09_3_1h'] = lead('0.9', 3, 1, mpf('0.5'))
    vals['kRx_075_1h'] = rx_primary('0.75', 1, '0.5')
    vals['kRy_075_1h'] = ry_primary('0.75', 1, '0.5')
    f, sc = rz_parts('0.9', 1, 1)
    vals['kRz_09_11'] = f + sc
    f, sc = rz_parts('0.8', 1, '0.5')
    vals['kRzFirst_08_1h'] = f
    vals['kRzSecond_08_1h'] = sc
    H, K, t, s = mpf('0.3'), mpf('0.7'), mpf('1.5'), mpf('0.5')
    vals['kBifbm_03_07'] = 2 ** -K * ((t ** (2 * H) + s ** (2 * H)) ** K - abs(t - s) ** (2 * H * K))
    # H -> 1/2: decomposed solution covariance against Swanson's at (1, 1).
    h = mpf('0.505')
    # IBP forms: the primary forms carry (s-a)^(-0.99), beyond tanh-sinh at 30 digits.
    r = lead(h, 1, 1, 1) + rx_ibp(h, 1, 1) - ry_ibp(h, 1, 1)
    vals['kSwansonGap_0505_11'] = r / (sqrt(2) / sqrt(2 * pi)) - 1

    with open('tests/fixtures.hpp', 'w') as out:
        out.write('// Generated by tests/fixtures/generate_fixtures.py (mpmath, 30 digits). Do not edit.\n')
        out.write('#pragma once\n\nnamespace fixtures {\n\n')
        for k, v in vals.items():
            out.write(f'inline constexpr double {k} = {mp.nstr(v, 20)};\n')
        out.write('\n}  // namespace fixtures\n')
    for k, v in vals.items():
        print(k, mp.nstr(v, 20))


if __name__ == '__main__':
    main()
