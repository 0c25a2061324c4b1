"""Configuration-space geometry of two trapped electrons on a half line.

Two particles at positions x and y on the wire [0, L] form a pair whenever
their separation stays below the pair extension (the unit of length here, so
|x - y| <= 1). Exchange antisymmetry makes the wavefunction vanish on the
diagonal y = x, which lets the problem be folded onto the ordered half

    T_L = { (x, y) : 0 <= x <= y,  y - x <= 1,  y <= L }.

Boundary pieces carry different conditions: the pair-separation line
y - x = 1, the diagonal y = x and the truncation lines x = L, y = L are all
Dirichlet, while the wire end x = 0 (with 0 < y < 1) carries a Robin contact
term. The unfolded ("full") variant keeps both orderings of the particles and
exists as a cross-validation target for the folded assembly.

All lengths are in units of the pair extension; a physical extension in
meters may ride along as metadata but never enters the geometry.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import DomainError, ValidationError

_REDUCTIONS = ("half", "full")


class BoundaryTag(enum.Enum):
    """Classification of a point of the closed configuration domain."""

    INTERIOR = "interior"
    DIRICHLET_PAIR = "dirichlet_pair"
    DIRICHLET_DIAGONAL = "dirichlet_diagonal"
    DIRICHLET_TRUNCATION = "dirichlet_truncation"
    ROBIN_WIRE_END = "robin_wire_end"


@dataclass(frozen=True)
class DomainSpec:
    """Geometry parameters of the (possibly folded) pencil domain.

    Parameters
    ----------
    L : float
        Wire length in units of the pair extension. Must exceed 1, otherwise
        the pair-separation line never detaches from the truncation boundary.
    reduction : str
        "half" for the ordered domain T_L (the production setting), "full"
        for the unfolded pencil used by cross-validation.
    pair_extent_m : float or None
        Physical pair extension in meters, carried as metadata only. The
        dimensionless geometry always uses extension 1.
    """

    L: float
    reduction: str = "half"
    pair_extent_m: float | None = None

    def __post_init__(self) -> None:
        if not self.L > 1.0:
            raise ValidationError(
                f"wire length must exceed the pair extension (L > 1), got L={self.L!r}"
            )
        if self.reduction not in _REDUCTIONS:
            raise ValidationError(
                f"reduction must be one of {_REDUCTIONS}, got {self.reduction!r}"
            )
        if self.pair_extent_m is not None and not self.pair_extent_m > 0.0:
            raise ValidationError("physical pair extension must be positive")


def contains(p: tuple[float, float], spec: DomainSpec) -> bool:
    """Return True when the point lies in the closed domain (no tolerance)."""
    x, y = p
    if spec.reduction == "half":
        return 0.0 <= x <= y <= spec.L and y - x <= 1.0
    return 0.0 <= x <= spec.L and 0.0 <= y <= spec.L and abs(x - y) <= 1.0


def classify_boundary(
    p: tuple[float, float], spec: DomainSpec, tol: float = 1e-12
) -> BoundaryTag:
    """Classify a point of the closed domain into its boundary piece.

    Dirichlet pieces take precedence over the Robin edge, so the corners
    (0, 0) and (0, 1) come back as diagonal and pair-separation tags. Points
    farther than ``tol`` outside the closed domain are rejected.

    Parameters
    ----------
    p : (float, float)
        The point (x, y).
    spec : DomainSpec
        Domain geometry; the reduction decides whether the diagonal is a
        Dirichlet line (folded) or plain interior (unfolded).
    tol : float
        Nonnegative classification tolerance. A point within ``tol`` of a
        boundary line is assigned to that line.
    """
    if tol < 0.0:
        raise ValidationError(f"classification tolerance must be nonnegative, got {tol!r}")
    x, y = p
    return _classify(x, y, spec.L, 1.0, tol, spec.reduction)


def _classify(
    x: float, y: float, L: float, extent: float, tol: float, reduction: str
) -> BoundaryTag:
    """Tag (x, y) for a pencil of pair extension ``extent`` (internal).

    The public API pins ``extent`` to 1; the parameter exists so that the
    exact-scaling property (x, y, L, extent, tol all multiplied by s leaves
    the tag unchanged) can be exercised directly.
    """
    if x < -tol or y < -tol or x > L + tol or y > L + tol:
        raise DomainError(f"point ({x!r}, {y!r}) lies outside the closed domain")
    sep = y - x
    if reduction == "half":
        if sep < -tol or sep > extent + tol:
            raise DomainError(
                f"point ({x!r}, {y!r}) violates the ordered pair constraint 0 <= y - x <= {extent}"
            )
        if abs(sep - extent) <= tol:
            return BoundaryTag.DIRICHLET_PAIR
        if abs(sep) <= tol:
            return BoundaryTag.DIRICHLET_DIAGONAL
        if abs(y - L) <= tol or abs(x - L) <= tol:
            return BoundaryTag.DIRICHLET_TRUNCATION
        if abs(x) <= tol:
            return BoundaryTag.ROBIN_WIRE_END
        return BoundaryTag.INTERIOR
    if abs(sep) > extent + tol:
        raise DomainError(
            f"point ({x!r}, {y!r}) violates the pair constraint |x - y| <= {extent}"
        )
    if abs(abs(sep) - extent) <= tol:
        return BoundaryTag.DIRICHLET_PAIR
    if abs(y - L) <= tol or abs(x - L) <= tol:
        return BoundaryTag.DIRICHLET_TRUNCATION
    if abs(x) <= tol or abs(y) <= tol:
        return BoundaryTag.ROBIN_WIRE_END
    return BoundaryTag.INTERIOR
