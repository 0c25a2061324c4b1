import time

import numpy as np
import pytest

import pairbec as pb


@pytest.fixture(scope="session")
def solve():
    """Memoized eigensolves so the expensive grids are computed once."""
    cache = {}

    def inner(L, m, k=3, strength=0.0, tol=1e-9, method="auto"):
        key = (L, m, k, strength, tol, method)
        if key not in cache:
            grid = pb.build_grid(pb.DomainSpec(L=L), m)
            if strength == 0.0:
                profile = pb.sigma_profile("zero")
            else:
                profile = pb.sigma_profile("constant", strength=strength)
            op = pb.assemble_operator(grid, profile)
            cache[key] = pb.lowest_eigenpairs(op, k, tol=tol, method=method)
        return cache[key]

    return inner


@pytest.fixture(scope="session")
def richardson_pair(solve):
    """The production-resolution runs at L=8 and their extrapolation.

    Timed around the two eigensolves; everything downstream that needs the
    extrapolated ground energy shares this fixture.
    """
    t0 = time.perf_counter()
    r_mid = solve(8.0, 64)
    r_fine = solve(8.0, 128)
    elapsed = time.perf_counter() - t0
    e_mid = float(r_mid.eigenvalues[0])
    e_fine = float(r_fine.eigenvalues[0])
    return {
        "mid": r_mid,
        "fine": r_fine,
        "extrapolated": e_fine + (e_fine - e_mid) / 3.0,
        "elapsed_s": elapsed,
    }


@pytest.fixture(scope="session")
def gamma_at_production():
    return pb.find_gamma(8.0, 64, tol=0.005)


@pytest.fixture(scope="session")
def rho_ex_quadrature():
    """Independent route to the infinite-wire excited density.

    Integrates the Bose occupation over the longitudinal momentum channel
    by channel instead of resumming the fugacity series:
    rho_ex = (1/pi) * sum_n integral_0^inf dq occ(2 pi^2 n^2 + q^2/2 - mu).
    """
    from scipy.integrate import quad

    def oracle(beta, mu):
        thr = 2.0 * np.pi**2
        total = 0.0
        n = 1
        while beta * (thr * n * n - mu) < 700.0:
            gap = beta * (thr * n * n - mu)

            def band(q, n=n):
                x = beta * (thr * n * n + 0.5 * q * q - mu)
                return np.exp(-x) / -np.expm1(-x)

            # past q_max the exponent exceeds 700 and the band is dead
            q_max = np.sqrt(2.0 * (700.0 - gap) / beta)
            val, err = quad(band, 0.0, q_max, limit=400, epsabs=0.0, epsrel=1e-12)
            assert err < 1e-10 * max(val, 1e-300)
            total += val
            n += 1
        return total / np.pi

    return oracle
