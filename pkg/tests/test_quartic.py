import numpy as np
import pytest

from coupled_tbp.quartic import charpoly, cubic_roots, polish, quartic_roots


def _match(found, expected):
    """Max distance after greedy nearest matching."""
    rest = list(expected)
    worst = 0.0
    for r in found:
        k = int(np.argmin([abs(r - e) for e in rest]))
        worst = max(worst, abs(r - rest.pop(k)) / max(1.0, abs(r)))
    return worst


def test_quartic_known_roots():
    roots = [1.0, -2.0, 0.5 + 3j, 0.5 - 3j]
    coeffs = np.real(np.poly(roots))
    assert _match(quartic_roots(coeffs), roots) < 1e-12


def test_quartic_random_vs_numpy(rng):
    for _ in range(500):
        c = rng.normal(size=5)
        c[0] = 1.0 + abs(c[0])
        assert _match(quartic_roots(c), np.roots(c)) < 1e-6


def test_quartic_repeated_pair():
    # (x^2 + 1)^2: a double complex pair
    r = quartic_roots([1.0, 0.0, 2.0, 0.0, 1.0])
    assert np.allclose(sorted(np.abs(r)), 1.0, atol=1e-6)


def test_quartic_damped_oscillator_shape(rng):
    for _ in range(200):
        s = rng.uniform(1e-4, 0.1, 2)
        w = rng.uniform(0.8, 1.2, 2)
        lam = [-s[0] + 1j * w[0], -s[0] - 1j * w[0], -s[1] + 1j * w[1], -s[1] - 1j * w[1]]
        coeffs = np.real(np.poly(lam))
        assert _match(quartic_roots(coeffs), lam) < 1e-9


def test_quartic_rejects_zero_leading():
    with pytest.raises(ValueError):
        quartic_roots([0.0, 1.0, 2.0, 3.0, 4.0])


def test_cubic_roots():
    r = cubic_roots(1.0, -6.0, 11.0, -6.0)
    assert np.allclose(sorted(np.real(r)), [1, 2, 3], atol=1e-12)


def test_charpoly_matches_numpy(rng):
    for _ in range(50):
        A = rng.normal(size=(4, 4))
        assert np.allclose(charpoly(A), np.poly(A), rtol=1e-10, atol=1e-10)


def test_polish_never_worsens():
    c = np.array([1.0, 0.0, -2.0, 0.0, 1.0])
    x = polish(c, 1.0 + 1e-4)
    assert abs(x - 1.0) <= 1e-4
