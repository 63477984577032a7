"""Closed-form roots of cubic and quartic polynomials.

Ferrari's method through the resolvent cubic, evaluated in complex
arithmetic, followed by Newton polishing on the original polynomial.
Coefficients are given highest power first, as in :func:`numpy.polyval`.
"""

import cmath

import numpy as np

_CUBE_ROOTS_OF_UNITY = (1.0, complex(-0.5, 3**0.5 / 2), complex(-0.5, -(3**0.5) / 2))


def _horner(coeffs, x):
    p = 0j
    dp = 0j
    for c in coeffs:
        dp = dp * x + p
        p = p * x + c
    return p, dp


def polish(coeffs, x, maxiter=4):
    """Newton-refine a root; keep a step only if it shrinks the residual."""
    p, dp = _horner(coeffs, x)
    for _ in range(maxiter):
        if p == 0 or dp == 0:
            break
        x_new = x - p / dp
        p_new, dp_new = _horner(coeffs, x_new)
        if abs(p_new) >= abs(p):
            break
        x, p, dp = x_new, p_new, dp_new
    return x


def cubic_roots(a, b, c, d):
    """Three (complex) roots of ``a x^3 + b x^2 + c x + d``."""
    if a == 0:
        raise ValueError("leading coefficient must be nonzero")
    A, B, C = b / a, c / a, d / a
    # depress: x = z - A/3
    P = B - A * A / 3
    Q = 2 * A**3 / 27 - A * B / 3 + C
    disc = cmath.sqrt(Q * Q / 4 + P**3 / 27)
    w1 = -Q / 2 + disc
    w2 = -Q / 2 - disc
    w = w1 if abs(w1) >= abs(w2) else w2
    if w == 0:
        zs = [0j, 0j, 0j]
    else:
        u = w ** (1 / 3)
        zs = []
        for k in _CUBE_ROOTS_OF_UNITY:
            uk = u * k
            zs.append(uk - P / (3 * uk))
    coeffs = (1.0, A, B, C)
    return [polish(coeffs, z - A / 3) for z in zs]


def quartic_roots(coeffs):
    """Four complex roots of ``a x^4 + b x^3 + c x^2 + d x + e``.

    Parameters
    ----------
    coeffs : sequence of 5 numbers
        Polynomial coefficients, highest power first.

    Returns
    -------
    ndarray, shape (4,), complex
    """
    a, b, c, d, e = (complex(v) for v in coeffs)
    if a == 0:
        raise ValueError("leading coefficient must be nonzero")
    b, c, d, e = b / a, c / a, d / a, e / a
    shift = b / 4
    p = c - 3 * b * b / 8
    q = d - b * c / 2 + b**3 / 8
    r = e - b * d / 4 + b * b * c / 16 - 3 * b**4 / 256

    scale = max(abs(p), abs(q) ** (2 / 3), abs(r) ** 0.5, 1e-300)
    if abs(q) <= 1e-14 * scale ** 1.5:
        # biquadratic y^4 + p y^2 + r
        s = cmath.sqrt(p * p - 4 * r)
        ys = []
        for y2 in ((-p + s) / 2, (-p - s) / 2):
            y = cmath.sqrt(y2)
            ys.extend((y, -y))
    else:
        # (y^2 + p/2 + m)^2 = 2m y^2 - q y + m^2 + m p + p^2/4 - r
        ms = cubic_roots(8.0, 8 * p, 2 * p * p - 8 * r, -q * q)
        m = max(ms, key=abs)
        s = cmath.sqrt(2 * m)
        ys = []
        for sign in (1, -1):
            # y^2 - sign*s*y + (p/2 + m + sign*q/(2s)) = 0
            bb = -sign * s
            cc = p / 2 + m + sign * q / (2 * s)
            disc = cmath.sqrt(bb * bb - 4 * cc)
            # stable quadratic formula
            qq = -0.5 * (bb + disc if abs(bb + disc) >= abs(bb - disc) else bb - disc)
            if qq == 0:
                ys.extend((0j, 0j))
            else:
                ys.extend((qq, cc / qq))
    full = (1.0, b, c, d, e)
    return np.array([polish(full, y - shift) for y in ys], dtype=complex)


def charpoly(A):
    """Characteristic polynomial ``det(x I - A)`` by Faddeev-LeVerrier.

    Returns coefficients highest power first (leading coefficient 1).
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    coeffs = [1.0]
    M = np.zeros_like(A)
    c = 1.0
    eye = np.eye(n)
    for k in range(1, n + 1):
        M = A @ M + c * eye
        c = -np.trace(A @ M) / k
        coeffs.append(c)
    return np.array(coeffs)
