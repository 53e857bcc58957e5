"""Taylor coefficients of the Riemann-Siegel correction functions C0..C4.

Each C_k(p) is expanded in x = p - 1/2 (|x| <= 1/2) and printed as a Rust
table. Run with mpmath available: python3 rs_coefficients.py
"""
from mpmath import mp, mpf, pi, cos, sin, factorial

mp.dps = 120
ORDER = 90


def series_mul(a, b):
    out = [mpf(0)] * ORDER
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(ORDER - i):
            out[i + j] += ai * b[j]
    return out


def series_inv(a):
    out = [mpf(0)] * ORDER
    out[0] = 1 / a[0]
    for n in range(1, ORDER):
        s = sum(a[k] * out[n - k] for k in range(1, n + 1))
        out[n] = -s / a[0]
    return out


def cos_series_in_x():
    # cos(2 pi x)
    out = [mpf(0)] * ORDER
    for k in range(0, ORDER, 2):
        out[k] = (-1) ** (k // 2) * (2 * pi) ** k / factorial(k)
    return out


def numerator_series():
    # -cos(2 pi x^2 - 5 pi / 8) = -(cos(2 pi x^2) cos(5pi/8) + sin(2 pi x^2) sin(5pi/8))
    out = [mpf(0)] * ORDER
    c, s = cos(5 * pi / 8), sin(5 * pi / 8)
    for k in range(0, ORDER):
        if 2 * k >= ORDER:
            break
        term = (2 * pi) ** k / factorial(k)
        if k % 4 == 0:
            cos_part, sin_part = term, 0
        elif k % 4 == 1:
            cos_part, sin_part = 0, term
        elif k % 4 == 2:
            cos_part, sin_part = -term, 0
        else:
            cos_part, sin_part = 0, -term
        out[2 * k] = -(cos_part * c + sin_part * s)
    return out


psi = series_mul(numerator_series(), series_inv(cos_series_in_x()))


def deriv(a, m):
    out = [mpf(0)] * ORDER
    for j in range(ORDER - m):
        out[j] = a[j + m] * factorial(j + m) / factorial(j)
    return out


def comb(*terms):
    out = [mpf(0)] * ORDER
    for coef, m in terms:
        d = deriv(psi, m)
        for j in range(ORDER):
            out[j] += coef * d[j]
    return out


C = [
    comb((1, 0)),
    comb((-1 / (96 * pi**2), 3)),
    comb((1 / (64 * pi**2), 2), (1 / (18432 * pi**4), 6)),
    comb((-1 / (64 * pi**2), 1), (-1 / (3840 * pi**4), 5), (-1 / (5308416 * pi**6), 9)),
    comb(
        (1 / (128 * pi**2), 0),
        (19 / (24576 * pi**4), 4),
        (11 / (5898240 * pi**6), 8),
        (1 / (2038431744 * pi**8), 12),
    ),
]

LIMIT = ORDER - 13
for k, ck in enumerate(C):
    coeffs = []
    for j in range(LIMIT):
        if abs(ck[j]) * mpf(0.5) ** j > mpf(10) ** -24 or j < 2:
            coeffs.append((j, ck[j]))
    last = max(j for j, _ in coeffs)
    print(f"const C{k}: [f64; {last + 1}] = [")
    for j in range(last + 1):
        print(f"    {mp.nstr(ck[j], 20, min_fixed=-1, max_fixed=-1)},")
    print("];")
