"""The acceptance gate, one criterion per test, one PASS line per criterion.

Run `pytest tests/test_acceptance.py -v -s` to see the lines. Expensive
eigensolves are shared through the session fixtures in conftest.
"""

import math
import time

import numpy as np
import pytest
import scipy.sparse as sp

import pairbec as pb

THR = pb.threshold_dimless()
WINDOW = pb.SAFETY_FACTOR * THR


def report(num, detail):
    print(f"ACCEPTANCE criterion {num:02d}: PASS {detail}")


def test_criterion_01_extrapolated_ground_energy(richardson_pair):
    ratio = richardson_pair["extrapolated"] / THR
    elapsed = richardson_pair["elapsed_s"]
    assert 0.25 <= ratio <= 0.93
    assert elapsed < 120.0
    report(1, f"E0*/threshold = {ratio:.6f} from m=64,128 at L=8 in {elapsed:.1f} s")


def test_criterion_02_first_excited_pins_the_continuum(richardson_pair):
    e1_mid = float(richardson_pair["mid"].eigenvalues[1])
    e1_fine = float(richardson_pair["fine"].eigenvalues[1])
    assert e1_fine >= 0.98 * THR
    assert e1_fine > e1_mid
    report(2, f"E1 = {e1_fine:.6f} >= 0.98*threshold and grows with resolution")


def test_criterion_03_exactly_one_bound_state(solve):
    counts = {}
    for L in (4.0, 8.0, 16.0):
        for m in (32, 64):
            counts[(L, m)] = pb.count_below(solve(L, m), WINDOW)
    for L in (4.0, 8.0, 16.0):
        assert counts[(L, 64)] == 1
        assert counts[(L, 32)] == counts[(L, 64)]
    report(3, f"count below {WINDOW:.4f} is 1 for every L in (4, 8, 16), m in (32, 64)")


def test_criterion_04_gap_scales_as_inverse_square(richardson_pair):
    gap_ratio = (THR - richardson_pair["extrapolated"]) / THR
    extents = (0.5e-8, 1e-8, 2e-8)
    products = [pb.gap_from_d(d, gap_ratio) * d * d for d in extents]
    spread = (max(products) - min(products)) / products[0]
    assert spread <= 1e-12
    report(4, f"gap * d^2 constant to {spread:.2e} across d = {extents}")


def test_criterion_05_contact_strength_unbinds_monotonically(solve, gamma_at_production):
    s_star = gamma_at_production.sigma_star
    assert s_star > 0.0
    sigmas = sorted({0.0, 1.0, 5.0, 25.0, s_star, 2.0 * s_star})
    e0s = [float(solve(8.0, 64, strength=s).eigenvalues[0]) for s in sigmas]
    for prev, cur in zip(e0s, e0s[1:]):
        assert cur >= prev - 1e-10
    top = solve(8.0, 64, strength=2.0 * s_star)
    assert pb.count_below(top, WINDOW) == 0
    report(
        5,
        f"E0 non-decreasing over sigma = {[round(s, 4) for s in sigmas]}, "
        f"no state below the window at 2*sigma_star (sigma_star = {s_star:.6f})",
    )


def test_criterion_06_bound_gas_condenses_the_excess(richardson_pair):
    e0 = richardson_pair["extrapolated"]
    beta = 1.0
    rho_c = pb.critical_density(beta, e0)
    rho = 2.0 * rho_c
    t0 = time.perf_counter()
    sol = pb.condensate_stats(beta, rho, 1e4, pb.BoundModel(e0=e0))
    elapsed = time.perf_counter() - t0
    excess = rho - rho_c
    rel = abs(sol.n0_per_L - excess) / excess
    assert rel <= 0.05
    assert elapsed < 10.0
    report(6, f"n0/L matches rho - rho_crit to {rel:.2e} at L = 1e4 in {elapsed:.2f} s")


def test_criterion_07_free_gas_does_not_condense(richardson_pair):
    beta = 1.0
    rho = 2.0 * pb.critical_density(beta, richardson_pair["extrapolated"])
    sols = pb.thermo_sweep(beta, rho, [1e3, 1e4, 1e5], pb.NoBoundModel())
    per_L = [s.n0_per_L for s in sols]
    assert per_L[0] > per_L[1] > per_L[2]
    assert per_L[1] <= 0.05 * rho
    report(
        7,
        f"nobound n0/L falls {per_L[0]:.2e} -> {per_L[1]:.2e} -> {per_L[2]:.2e} "
        f"over L = 1e3, 1e4, 1e5",
    )


def test_criterion_08_independent_routes_agree(rho_ex_quadrature):
    worst_eig = 0.0
    for L, m in ((3.0, 12), (2.0, 16), (4.0, 16)):
        grid = pb.build_grid(pb.DomainSpec(L=L), m)
        op = pb.assemble_operator(grid)
        iterative = pb.lowest_eigenpairs(op, 3, tol=1e-9, method="lobpcg")
        direct = pb.dense_reference(op)[:3]
        worst_eig = max(worst_eig, float(np.abs(iterative.eigenvalues - direct).max()))
    assert worst_eig <= 1e-8

    worst_sum = 0.0
    for beta, mu in ((1.0, 10.0), (1.0, 15.0), (0.5, -5.0), (2.0, 19.0), (1.0, 19.5)):
        series = pb.rho_ex_infinity(beta, mu)
        direct = rho_ex_quadrature(beta, mu)
        worst_sum = max(worst_sum, abs(series - direct) / direct)
    assert worst_sum <= 1e-8
    report(
        8,
        f"lobpcg vs dense within {worst_eig:.2e}; "
        f"fugacity series vs quadrature within {worst_sum:.2e}",
    )


def antisymmetric_projector(half, full):
    rows, cols, vals = [], [], []
    s = 1.0 / math.sqrt(2.0)
    for col, (i, j) in enumerate(half.nodes):
        rows.append(full.dof_index[i, j])
        cols.append(col)
        vals.append(s)
        rows.append(full.dof_index[j, i])
        cols.append(col)
        vals.append(-s)
    return sp.coo_matrix((vals, (rows, cols)), shape=(full.n, half.n)).tocsr()


def test_criterion_09_fold_equals_antisymmetric_sector():
    profiles = (
        pb.sigma_profile("zero"),
        pb.sigma_profile("step", strength=3.0, cutoff=0.5),
    )
    worst = 0.0
    for L, m in ((2.0, 4), (2.0, 8), (3.0, 6)):
        for profile in profiles:
            half = pb.build_grid(pb.DomainSpec(L=L, reduction="half"), m)
            full = pb.build_grid(pb.DomainSpec(L=L, reduction="full"), m)
            oph = pb.assemble_operator(half, profile)
            opf = pb.assemble_operator(full, profile)
            P = antisymmetric_projector(half, full)
            S_proj = (P.T @ opf.S @ P).toarray()
            W_proj = (P.T @ sp.diags(opf.W) @ P).toarray()
            dS = np.abs(S_proj - oph.S.toarray()).max()
            dW = np.abs(W_proj - np.diag(oph.W)).max()
            assert dS <= 1e-10 and dW <= 1e-10

            projected = pb.SparseOperator(
                S=sp.csr_matrix(S_proj), W=np.diag(W_proj).copy()
            )
            k = min(4, oph.n)
            d_half = pb.dense_reference(oph)[:k]
            d_proj = pb.dense_reference(projected)[:k]
            dE = np.abs(d_half - d_proj).max()
            assert dE <= 1e-10
            worst = max(worst, dS, dW, dE)
    report(9, f"folded pencil equals the swap-odd sector of the full pencil to {worst:.2e}")


def test_criterion_10_unit_conversions_round_trip(richardson_pair):
    gap_ratio = (THR - richardson_pair["extrapolated"]) / THR
    worst = 0.0
    for ratio in (gap_ratio, 0.5, 1.0):
        for d in (1e-9, 2.74e-8, 1e-6):
            back = pb.d_from_gap(pb.gap_from_d(d, ratio), ratio)
            worst = max(worst, abs(back - d) / d)
        for gap_ev in (1e-5, 1e-3, 0.1):
            back = pb.gap_from_d(pb.d_from_gap(gap_ev, ratio), ratio)
            worst = max(worst, abs(back - gap_ev) / gap_ev)
    assert worst <= 1e-14
    d_mev = pb.d_from_gap(1e-3, gap_ratio)
    report(
        10,
        f"round trips close to {worst:.2e}; for the computed gap ratio a 1 meV gap "
        f"means d = {d_mev:.3e} m against the reference scale "
        f"{pb.REFERENCE_PAIR_EXTENT_M:.0e} m",
    )
