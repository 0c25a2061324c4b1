"""Spectral quantities of the folded pencil: threshold, gap, convergence.

The scattering continuum of the pair problem starts at 2 pi^2 in units of
hbar^2 / (2 m_e d^2); a discrete eigenvalue below that threshold is a bound
pair and its distance to the threshold is the binding gap. Grid eigenvalues
converge at second order in the spacing, so runs at successive resolutions
admit Richardson extrapolation and carry an observed-order diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .discretize import SigmaProfile, assemble_operator, build_grid, sigma_profile
from .eigensolve import DEFAULT_SEED, SpectrumResult, lowest_eigenpairs
from .errors import CapError, ConfigurationError, DomainError, ValidationError
from .geometry import DomainSpec

SAFETY_FACTOR = 0.995
"""Counting window: states below SAFETY_FACTOR * threshold are called bound.

The margin keeps truncation-induced continuum states that sag slightly below
the threshold from being miscounted as bound pairs.
"""

_ORDER_WINDOW = (3.5, 4.5)


def threshold_dimless() -> float:
    """Dissociation threshold 2 pi^2, the bottom of the continuum."""
    return 2.0 * np.pi**2


def gap(e0: float) -> float:
    """Binding gap threshold - e0 of a ground state energy below threshold.

    Raises DomainError when e0 lies outside [0, threshold]: a negative
    energy cannot come from this nonnegative form, and above the threshold
    there is no bound pair to speak of.
    """
    thr = threshold_dimless()
    if not np.isfinite(e0) or e0 < 0.0 or e0 > thr:
        raise DomainError(f"ground energy {e0!r} outside [0, {thr}]")
    return thr - e0


def count_below(result, bound: float) -> int:
    """Number of computed eigenvalues strictly below ``bound``.

    Accepts a SpectrumResult or any array of eigenvalues. Only the computed
    eigenvalues are inspected, so ask for enough pairs to make the count
    meaningful.
    """
    if isinstance(result, SpectrumResult):
        values = result.eigenvalues
    else:
        values = np.asarray(result, dtype=float)
    if not np.isfinite(bound):
        raise ValidationError(f"count bound must be finite, got {bound!r}")
    return int(np.count_nonzero(values < bound))


@dataclass(frozen=True)
class ConvergenceRow:
    """One (L, m) run: lowest two eigenvalues, bound count, diagnostics.

    ``order_ratio`` is the observed convergence-order ratio
    (E(m/4) - E(m/2)) / (E(m/2) - E(m)) when this row completes a doubling
    triple at the same L, else None. Second-order convergence puts it near 4;
    rows outside [3.5, 4.5] are flagged.
    """

    L: float
    m: int
    e0: float
    e1: float
    count: int
    ratio_to_threshold: float
    order_ratio: float | None = None
    flagged: bool = False


@dataclass(frozen=True)
class ConvergenceTable:
    """Rows of a resolution study plus the Richardson-extrapolated ground energy.

    The extrapolation uses the two finest resolutions at the largest wire
    length: with refinement factor r in the spacing, the second-order model
    gives E* = E_fine + (E_fine - E_coarse) / (r^2 - 1), and the same
    difference quotient serves as the error estimate.
    """

    rows: tuple[ConvergenceRow, ...]
    extrapolated_e0: float
    extrapolation_error: float
    threshold: float

    def to_csv(self) -> str:
        lines = ["L,m,E0,E1,count,ratio_to_threshold"]
        for r in self.rows:
            lines.append(
                ",".join(
                    (
                        format(r.L, ".17g"),
                        str(r.m),
                        format(r.e0, ".17g"),
                        format(r.e1, ".17g"),
                        str(r.count),
                        format(r.ratio_to_threshold, ".17g"),
                    )
                )
            )
        return "\n".join(lines) + "\n"


def convergence_study(
    L_values,
    m_values,
    sigma: SigmaProfile | None = None,
    k: int = 3,
    tol: float = 1e-9,
    maxiter: int = 5000,
    seed: int = DEFAULT_SEED,
    method: str = "auto",
) -> ConvergenceTable:
    """Run the solver over a grid of wire lengths and resolutions.

    L_values and m_values are iterated in ascending order. At least two
    resolutions are required so the extrapolation is defined. ``k`` is
    raised to 2 if needed because every row reports E0 and E1.
    """
    L_list = sorted(float(L) for L in L_values)
    m_list = sorted(int(m) for m in m_values)
    if not L_list or len(m_list) < 2:
        raise ConfigurationError("need at least one wire length and two resolutions")
    if sigma is None:
        sigma = sigma_profile("zero")
    k = max(int(k), 2)
    thr = threshold_dimless()
    window = SAFETY_FACTOR * thr

    rows: list[ConvergenceRow] = []
    e0_by_Lm: dict[tuple[float, int], float] = {}
    for L in L_list:
        for pos, m in enumerate(m_list):
            grid = build_grid(DomainSpec(L=L), m)
            op = assemble_operator(grid, sigma)
            result = lowest_eigenpairs(op, k, tol=tol, maxiter=maxiter, seed=seed, method=method)
            e0 = float(result.eigenvalues[0])
            e1 = float(result.eigenvalues[1])
            e0_by_Lm[(L, m)] = e0
            order_ratio = None
            flagged = False
            if pos >= 2:
                m2, m1 = m_list[pos - 2], m_list[pos - 1]
                if m1 == 2 * m2 and m == 2 * m1:
                    num = e0_by_Lm[(L, m2)] - e0_by_Lm[(L, m1)]
                    den = e0_by_Lm[(L, m1)] - e0
                    if den != 0.0:
                        order_ratio = num / den
                        flagged = not (_ORDER_WINDOW[0] <= order_ratio <= _ORDER_WINDOW[1])
            rows.append(
                ConvergenceRow(
                    L=L,
                    m=m,
                    e0=e0,
                    e1=e1,
                    count=count_below(result, window),
                    ratio_to_threshold=e0 / thr,
                    order_ratio=order_ratio,
                    flagged=flagged,
                )
            )

    L_top = L_list[-1]
    m_mid, m_fine = m_list[-2], m_list[-1]
    r2 = (m_fine / m_mid) ** 2
    e_mid = e0_by_Lm[(L_top, m_mid)]
    e_fine = e0_by_Lm[(L_top, m_fine)]
    correction = (e_fine - e_mid) / (r2 - 1.0)
    return ConvergenceTable(
        rows=tuple(rows),
        extrapolated_e0=e_fine + correction,
        extrapolation_error=abs(correction),
        threshold=thr,
    )


@dataclass(frozen=True)
class GammaSearch:
    """Outcome of the contact-strength bisection.

    ``sigma_star`` is the certified upper endpoint of the final bracket:
    the computed ground energy at that strength has already cleared the
    target, while it had not at ``bracket_low``. ``evaluations`` counts
    eigensolves spent.
    """

    sigma_star: float
    bracket_low: float
    bracket_high: float
    e0_at_sigma_star: float
    target: float
    evaluations: int
    L: float
    m: int
    tol: float


def find_gamma(
    L: float,
    m: int,
    tol: float = 0.005,
    sigma_cap: float = 1e6,
    solver_tol: float = 1e-9,
    maxiter: int = 5000,
    seed: int = DEFAULT_SEED,
    method: str = "auto",
) -> GammaSearch:
    """Smallest uniform contact strength that unbinds the pair, by bisection.

    The ground energy grows monotonically with the contact strength, so the
    critical strength is bracketed by doubling from 1 and then bisected until
    the bracket width falls below ``tol`` relative to its upper endpoint.
    The target energy is SAFETY_FACTOR * threshold: clearing the counting
    window is what "no bound state on this grid" means operationally.

    Raises CapError when the strength exceeds ``sigma_cap`` without clearing
    the target, carrying the largest tested strength in its diagnostics.
    """
    if not (np.isfinite(tol) and 0.0 < tol < 1.0):
        raise ValidationError(f"relative bracket tolerance must lie in (0, 1), got {tol!r}")
    if sigma_cap <= 0.0:
        raise ValidationError(f"sigma_cap must be positive, got {sigma_cap!r}")
    grid = build_grid(DomainSpec(L=float(L)), m)
    target = SAFETY_FACTOR * threshold_dimless()
    evaluations = 0

    def e0_at(strength: float) -> float:
        nonlocal evaluations
        op = assemble_operator(grid, sigma_profile("constant", strength=strength))
        result = lowest_eigenpairs(
            op, 1, tol=solver_tol, maxiter=maxiter, seed=seed, method=method
        )
        evaluations += 1
        return float(result.eigenvalues[0])

    lo = 0.0
    e_lo = e0_at(lo)
    if e_lo >= target:
        return GammaSearch(
            sigma_star=0.0,
            bracket_low=0.0,
            bracket_high=0.0,
            e0_at_sigma_star=e_lo,
            target=target,
            evaluations=evaluations,
            L=float(L),
            m=int(m),
            tol=tol,
        )
    hi = 1.0
    e_hi = e0_at(hi)
    while e_hi < target:
        lo, e_lo = hi, e_hi
        hi *= 2.0
        if hi > sigma_cap:
            raise CapError(
                f"contact strength exceeded cap {sigma_cap:g} with ground energy "
                f"{e_lo:.6g} still below target {target:.6g}",
                sigma_tested=lo,
                e0=e_lo,
                target=target,
                sigma_cap=sigma_cap,
                evaluations=evaluations,
            )
        e_hi = e0_at(hi)

    while hi - lo > tol * hi:
        mid = 0.5 * (lo + hi)
        e_mid = e0_at(mid)
        if e_mid >= target:
            hi, e_hi = mid, e_mid
        else:
            lo, e_lo = mid, e_mid

    return GammaSearch(
        sigma_star=hi,
        bracket_low=lo,
        bracket_high=hi,
        e0_at_sigma_star=e_hi,
        target=target,
        evaluations=evaluations,
        L=float(L),
        m=int(m),
        tol=tol,
    )
