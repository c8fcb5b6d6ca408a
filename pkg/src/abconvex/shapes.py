"""Closed-form constructors for curvature-banded extremal families.

The minimizing family ("eggs") and its generalizations alternate arcs of
the two extreme radii; all junction geometry follows from requiring the
support function and its derivative to be continuous where arcs meet.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import (
    TWO_PI,
    ArcBody,
    BandParams,
    CircularArc,
    ControlGrid,
    dykstra_band_projection,
)

__all__ = [
    "EggSpec",
    "NGonSpec",
    "make_disk",
    "make_egg",
    "make_regular_ngon",
    "ngon_lambda",
    "make_random_admissible",
]


@dataclass(frozen=True)
class EggSpec:
    """Derived geometry of the four-arc egg for a given band.

    Two arcs of radius beta centered on the x-axis are joined by two arcs
    of radius alpha centered on the y-axis; ``tau`` is the half-width of
    each beta-arc and the center offsets are kappa1 = (beta-alpha)cos(tau),
    kappa2 = (beta-alpha)sin(tau).
    """

    band: BandParams
    tau: float
    kappa1: float
    kappa2: float

    @classmethod
    def from_band(cls, band: BandParams) -> "EggSpec":
        half_perimeter = band.perimeter / 2.0
        tau = 0.5 * (half_perimeter - np.pi * band.alpha) / band.width
        return cls(
            band=band,
            tau=tau,
            kappa1=band.width * np.cos(tau),
            kappa2=band.width * np.sin(tau),
        )

    @property
    def centers(self) -> np.ndarray:
        """Arc centers in boundary order: (-k1,0), (0,k2), (k1,0), (0,-k2)."""
        return np.array(
            [
                [-self.kappa1, 0.0],
                [0.0, self.kappa2],
                [self.kappa1, 0.0],
                [0.0, -self.kappa2],
            ]
        )


@dataclass(frozen=True)
class NGonSpec:
    """Derived geometry of the regular 2N-arc body.

    ``sigma`` is the angular width of each beta-arc, ``tau`` of each
    alpha-arc, with N*(sigma+tau) = 2*pi; ``lam`` is the common support
    value at every junction.
    """

    band: BandParams
    n: int
    sigma: float
    tau: float
    lam: float

    @classmethod
    def from_band(cls, band: BandParams, n: int) -> "NGonSpec":
        if n < 2:
            raise ValueError(f"regular family needs n >= 2, got {n}")
        sigma = (band.perimeter - TWO_PI * band.alpha) / (n * band.width)
        tau = (TWO_PI * band.beta - band.perimeter) / (n * band.width)
        return cls(band=band, n=n, sigma=sigma, tau=tau, lam=ngon_lambda(band, n))

    @property
    def beta_center_offset(self) -> float:
        """Distance of each beta-arc center from the origin."""
        return self.band.width * np.sin(self.tau / 2.0) / np.sin(np.pi / self.n)

    @property
    def alpha_center_offset(self) -> float:
        """Distance of each alpha-arc center from the origin."""
        return self.band.width * np.sin(self.sigma / 2.0) / np.sin(np.pi / self.n)

    @property
    def breakpoints(self) -> np.ndarray:
        """Junction angles in increasing order starting from the first one > -sigma/2."""
        pts = []
        for k in range(self.n):
            center = TWO_PI * k / self.n
            pts.extend([center - self.sigma / 2.0, center + self.sigma / 2.0])
        return np.array(pts)


def ngon_lambda(band: BandParams, n: int) -> float:
    """Common junction support value of the regular 2N-arc body.

    Equal to
    ``[beta(1-cos sigma) sin tau + alpha(1-cos tau) sin sigma] /
    [(1-cos sigma) sin tau + (1-cos tau) sin sigma]``
    with sigma the beta-arc width and tau the alpha-arc width; evaluated in
    the half-angle form alpha + (beta-alpha) sin(sigma/2) cos(tau/2) / sin(pi/n),
    which is exact in the same quantities and stable at degenerate widths.
    A convex combination of alpha and beta with positive weights, so always
    strictly between them.
    """
    if n < 2:
        raise ValueError(f"regular family needs n >= 2, got {n}")
    sigma = (band.perimeter - TWO_PI * band.alpha) / (n * band.width)
    tau = (TWO_PI * band.beta - band.perimeter) / (n * band.width)
    return band.alpha + band.width * np.sin(sigma / 2.0) * np.cos(tau / 2.0) / np.sin(
        np.pi / n
    )


def make_disk(radius: float) -> ArcBody:
    """Disk of the given radius centered at the origin, as a one-arc body."""
    if not radius > 0:
        raise ValueError(f"disk radius must be positive, got {radius}")
    arc = CircularArc(center=np.zeros(2), radius=radius, t_start=0.0, t_end=TWO_PI)
    return ArcBody(arcs=(arc,), alpha=radius, beta=radius)


def make_egg(band: BandParams) -> ArcBody:
    """Four-arc minimizer for the band: beta-arcs about the x-axis, alpha-arcs about the y-axis.

    Perimeter is exactly ``band.perimeter``.  For alpha = 0 the alpha-arcs
    degenerate to the two corner points of a lune.
    """
    spec = EggSpec.from_band(band)
    tau, (c1, c2, c3, c4) = spec.tau, spec.centers
    a, b = band.alpha, band.beta
    arcs = (
        CircularArc(c1, b, -tau, tau),
        CircularArc(c2, a, tau, np.pi - tau),
        CircularArc(c3, b, np.pi - tau, np.pi + tau),
        CircularArc(c4, a, np.pi + tau, TWO_PI - tau),
    )
    return ArcBody(arcs=arcs, alpha=a, beta=b)


def make_regular_ngon(band: BandParams, n: int) -> ArcBody:
    """Regular 2N-arc body: N beta-arcs of width sigma alternating with N alpha-arcs.

    Beta-arcs are centered on the directions 2*pi*k/N (so n = 2 is exactly
    the egg) and all junction support values equal :func:`ngon_lambda`.
    Perimeter is exactly ``band.perimeter``.
    """
    spec = NGonSpec.from_band(band, n)
    a, b = band.alpha, band.beta
    arcs = []
    for k in range(n):
        beta_dir = TWO_PI * k / n
        alpha_dir = beta_dir + np.pi / n
        beta_center = -spec.beta_center_offset * np.array(
            [np.cos(beta_dir), np.sin(beta_dir)]
        )
        alpha_center = spec.alpha_center_offset * np.array(
            [np.cos(alpha_dir), np.sin(alpha_dir)]
        )
        arcs.append(
            CircularArc(beta_center, b, beta_dir - spec.sigma / 2, beta_dir + spec.sigma / 2)
        )
        arcs.append(
            CircularArc(
                alpha_center, a, beta_dir + spec.sigma / 2, beta_dir + TWO_PI / n - spec.sigma / 2
            )
        )
    return ArcBody(arcs=tuple(arcs), alpha=a, beta=b)


def make_random_admissible(
    band: BandParams, seed: int, grid_size: int = 512, max_sweeps: int = 10_000
) -> ControlGrid:
    """Pseudo-random feasible curvature control for fuzzing the area bound.

    Uniform i.i.d. values in the band, then Dykstra alternating projections
    onto box-and-closure feasibility (perimeter matched, first harmonics
    zeroed).  Deterministic for a fixed seed; the generator owns its stream.
    """
    rng = np.random.default_rng(seed)
    raw = rng.uniform(band.alpha, band.beta, grid_size)
    values = dykstra_band_projection(
        raw,
        band.alpha,
        band.beta,
        band.perimeter,
        tol=band.closure_tol,
        max_sweeps=max_sweeps,
    )
    return ControlGrid(values=values, band=band)
