"""Finite-volume discretization of the pair Hamiltonian on the pencil domain.

The kinetic quadratic form integral |grad u|^2 is assembled edge by edge on a
uniform lattice of spacing h = 1/m, so the pair-separation line, the diagonal
and the truncation lines pass exactly through lattice nodes and Dirichlet
conditions reduce to dropping those nodes. The wire-end contact term adds
sigma(y_j) * h to the stiffness diagonal of each Robin node, the trapezoid
weight of the boundary integral of sigma |u|^2.

With S the form matrix (interior stencil diagonal 4, neighbors -1, in edge
conductance units) and W the lumped cell areas (h^2 inside, h^2/2 on the
wire-end edge), the generalized problem S x = lambda W x is the discrete
eigenvalue problem; the operator W^{-1} S carries the familiar five-point
stencil with diagonal 4/h^2 and neighbors -1/h^2. Energies are dimensionless
in units of hbar^2 / (2 m_e d^2) for pair extension d.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError, ResolutionError, ValidationError
from .geometry import BoundaryTag, DomainSpec

_SIGMA_KINDS = ("zero", "constant", "step", "table")


@dataclass(frozen=True)
class SigmaProfile:
    """Contact-strength profile sigma(y) >= 0 on the wire-end edge 0 <= y <= 1.

    Use :func:`sigma_profile` to construct one; the constructor itself only
    stores validated fields. Profiles are immutable and safe to share.

    kind "zero" is the free wire end, "constant" a uniform strength,
    "step" a strength that switches off above the cutoff height, and
    "table" a piecewise-constant profile from equally spaced samples on
    [0, 1] (nearest-sample evaluation).
    """

    kind: str
    strength: float = 0.0
    cutoff: float = 0.0
    samples: tuple[float, ...] = field(default=())

    def __call__(self, y):
        """Evaluate the profile at height(s) y, vectorized over arrays."""
        y = np.asarray(y, dtype=float)
        if self.kind == "zero":
            out = np.zeros_like(y)
        elif self.kind == "constant":
            out = np.full_like(y, self.strength)
        elif self.kind == "step":
            out = np.where(y <= self.cutoff, self.strength, 0.0)
        else:
            grid = np.asarray(self.samples)
            pos = np.clip(np.rint(np.clip(y, 0.0, 1.0) * (grid.size - 1)), 0, grid.size - 1)
            out = grid[pos.astype(int)]
        return out if out.ndim else float(out)

    def sup_norm(self) -> float:
        """Essential supremum of the profile (max sample for tables)."""
        if self.kind == "zero":
            return 0.0
        if self.kind == "table":
            return float(max(self.samples))
        return self.strength


def sigma_profile(
    kind: str,
    strength: float | None = None,
    cutoff: float | None = None,
    samples=None,
) -> SigmaProfile:
    """Validated factory for wire-end contact profiles.

    Parameters
    ----------
    kind : str
        One of "zero", "constant", "step", "table".
    strength : float, optional
        Uniform strength for "constant" and the plateau value for "step".
    cutoff : float, optional
        Height in [0, 1] below which the "step" profile is active.
    samples : sequence of float, optional
        At least two equally spaced nonnegative values covering [0, 1],
        for kind "table".
    """
    if kind not in _SIGMA_KINDS:
        raise ConfigurationError(f"unknown profile kind {kind!r}, expected one of {_SIGMA_KINDS}")
    if kind == "zero":
        if strength not in (None, 0.0) or cutoff is not None or samples is not None:
            raise ConfigurationError("the zero profile takes no parameters")
        return SigmaProfile(kind="zero")
    if kind in ("constant", "step"):
        if samples is not None:
            raise ConfigurationError(f"the {kind} profile takes no sample table")
        if strength is None or not np.isfinite(strength):
            raise ValidationError(f"the {kind} profile needs a finite strength")
        if strength < 0.0:
            raise ValidationError(f"contact strength must be nonnegative, got {strength!r}")
        if kind == "constant":
            if cutoff is not None:
                raise ConfigurationError("the constant profile takes no cutoff")
            return SigmaProfile(kind="constant", strength=float(strength))
        if cutoff is None or not 0.0 <= cutoff <= 1.0:
            raise ValidationError(f"step cutoff must lie in [0, 1], got {cutoff!r}")
        return SigmaProfile(kind="step", strength=float(strength), cutoff=float(cutoff))
    # table
    if strength is not None or cutoff is not None:
        raise ConfigurationError("the table profile takes only its samples")
    if samples is None or len(samples) < 2:
        raise ValidationError("a table profile needs at least two samples on [0, 1]")
    vals = tuple(float(v) for v in samples)
    if not all(np.isfinite(v) and v >= 0.0 for v in vals):
        raise ValidationError("table samples must be finite and nonnegative")
    return SigmaProfile(kind="table", samples=vals)


@dataclass(frozen=True)
class Grid:
    """Lattice of degree-of-freedom nodes for one pencil domain.

    ``dof_index`` maps lattice coordinates to contiguous indices:
    ``dof_index[i, j]`` is the row of node (i*h, j*h), or -1 when that
    lattice point carries no unknown (Dirichlet lines and the outside).
    ``nodes`` lists the (i, j) pairs row by row in index order, and ``tags``
    holds the boundary classification of each unknown (interior nodes and
    wire-end Robin nodes only; every Dirichlet node is eliminated).
    """

    spec: DomainSpec
    m: int
    h: float
    span: int
    nodes: np.ndarray
    dof_index: np.ndarray
    tags: np.ndarray

    def __post_init__(self):
        self.nodes.setflags(write=False)
        self.dof_index.setflags(write=False)
        self.tags.setflags(write=False)

    @property
    def n(self) -> int:
        """Number of unknowns."""
        return self.nodes.shape[0]

    def coords(self) -> np.ndarray:
        """Physical (x, y) coordinates of the unknowns, shape (n, 2)."""
        return self.nodes * self.h

    def lattice_tag(self, i: int, j: int) -> BoundaryTag:
        """Exact integer classification of any lattice point of the closed domain."""
        if not (0 <= i <= self.span and 0 <= j <= self.span):
            raise ValidationError(f"lattice point ({i}, {j}) lies outside the closed domain")
        if self.spec.reduction == "half":
            if not 0 <= j - i <= self.m:
                raise ValidationError(f"lattice point ({i}, {j}) lies outside the closed domain")
            if j - i == self.m:
                return BoundaryTag.DIRICHLET_PAIR
            if i == j:
                return BoundaryTag.DIRICHLET_DIAGONAL
            if i == self.span or j == self.span:
                return BoundaryTag.DIRICHLET_TRUNCATION
            if i == 0:
                return BoundaryTag.ROBIN_WIRE_END
            return BoundaryTag.INTERIOR
        if abs(j - i) > self.m:
            raise ValidationError(f"lattice point ({i}, {j}) lies outside the closed domain")
        if abs(j - i) == self.m:
            return BoundaryTag.DIRICHLET_PAIR
        if i == self.span or j == self.span:
            return BoundaryTag.DIRICHLET_TRUNCATION
        if i == 0 or j == 0:
            return BoundaryTag.ROBIN_WIRE_END
        return BoundaryTag.INTERIOR


def build_grid(spec: DomainSpec, m: int) -> Grid:
    """Lay the uniform lattice h = 1/m over the domain and index the unknowns.

    The wire length must be an integer multiple of the spacing so that every
    Dirichlet line passes exactly through lattice nodes. Unknowns are all
    interior nodes plus the wire-end Robin nodes; in the folded domain these
    are the (i, j) with 0 <= i < j, j - i < m and j < L*m.

    Raises
    ------
    ResolutionError
        If m is too coarse to separate the Dirichlet lines (m < 3).
    ConfigurationError
        If L*m is not an integer.
    """
    if int(m) != m or m < 3:
        raise ResolutionError(f"resolution must be an integer m >= 3, got {m!r}")
    m = int(m)
    span_f = spec.L * m
    span = round(span_f)
    if abs(span_f - span) > 1e-9 * max(1.0, abs(span_f)):
        raise ConfigurationError(
            f"wire length L={spec.L!r} is not an integer multiple of the spacing 1/{m}"
        )
    idx = np.arange(span + 1)
    I, J = np.meshgrid(idx, idx, indexing="ij")
    if spec.reduction == "half":
        mask = (I < J) & (J - I < m) & (J < span)
    else:
        mask = (np.abs(I - J) < m) & (I < span) & (J < span)
    dof_index = np.full((span + 1, span + 1), -1, dtype=np.int64)
    ii, jj = np.nonzero(mask)
    dof_index[ii, jj] = np.arange(ii.size)
    nodes = np.column_stack([ii, jj])
    grid = Grid(
        spec=spec,
        m=m,
        h=1.0 / m,
        span=span,
        nodes=nodes,
        dof_index=dof_index,
        tags=np.empty(0, dtype=object),
    )
    tags = np.array([grid.lattice_tag(i, j) for i, j in nodes], dtype=object)
    object.__setattr__(grid, "tags", tags)
    tags.setflags(write=False)
    return grid


@dataclass(frozen=True)
class SparseOperator:
    """Assembled generalized eigenvalue problem S x = lambda W x.

    S is the symmetric positive semidefinite stiffness (quadratic-form)
    matrix in CSR layout; W holds the diagonal mass weights. ``grid`` and
    ``sigma`` record how the operator was produced and may be absent for
    synthetic operators built directly in tests.
    """

    S: sp.csr_matrix
    W: np.ndarray
    grid: Grid | None = None
    sigma: SigmaProfile | None = None

    def __post_init__(self):
        self.W.setflags(write=False)

    @property
    def n(self) -> int:
        return self.W.shape[0]


_DIRECTIONS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def assemble_operator(grid: Grid, sigma: SigmaProfile | None = None) -> SparseOperator:
    """Assemble stiffness and mass for one grid and one contact profile.

    Every lattice edge between two unknowns contributes its conductance to
    both diagonals and (negated) to the two off-diagonal slots, so S comes
    out exactly symmetric. Edges reaching a Dirichlet node contribute to the
    diagonal only; edges leaving the domain through the wire end carry no
    stiffness (natural boundary). Edges lying in the wire-end boundary have
    half conductance and wire-end nodes half a cell of mass, the usual
    half-cell treatment that keeps the Robin eigenvalue error at O(h^2).
    """
    if sigma is None:
        sigma = SigmaProfile(kind="zero")
    if not isinstance(sigma, SigmaProfile):
        raise ValidationError("sigma must be a SigmaProfile (see sigma_profile())")
    h = grid.h
    I = grid.nodes[:, 0]
    J = grid.nodes[:, 1]
    n = grid.n
    w = h * h * np.where(I == 0, 0.5, 1.0) * np.where(J == 0, 0.5, 1.0)

    diag = np.zeros(n)
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    vals: list[np.ndarray] = []
    for di, dj in _DIRECTIONS:
        I2 = I + di
        J2 = J + dj
        inside = (I2 >= 0) & (J2 >= 0) & (I2 <= grid.span) & (J2 <= grid.span)
        cond = np.where(
            ((I == 0) & (I2 == 0)) | ((J == 0) & (J2 == 0)), 0.5, 1.0
        )
        diag += np.where(inside, cond, 0.0)
        q = grid.dof_index[np.where(inside, I2, 0), np.where(inside, J2, 0)]
        keep = inside & (q >= 0)
        rows.append(np.nonzero(keep)[0])
        cols.append(q[keep])
        vals.append(-cond[keep])

    # wire-end contact term: trapezoid weights of the boundary integral
    for axis, other in ((I, J), (J, I)):
        on_edge = axis == 0
        if not on_edge.any():
            continue
        y = other[on_edge] * h
        contact = np.asarray(sigma(y), dtype=float)
        if np.any(contact < 0.0) or not np.all(np.isfinite(contact)):
            raise ValidationError("contact profile must be finite and nonnegative on the wire end")
        weight = np.where(other[on_edge] == 0, 0.5, 1.0) * h
        diag[on_edge] += contact * weight

    rows.append(np.arange(n))
    cols.append(np.arange(n))
    vals.append(diag)
    S = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n, n),
    ).tocsr()
    return SparseOperator(S=S, W=w, grid=grid, sigma=sigma)
