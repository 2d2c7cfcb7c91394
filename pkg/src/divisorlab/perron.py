"""Numerical contour apparatus: truncated Perron integrals, small-circle
residue quadrature, truncation-decay measurement, and a rectangle residue
bookkeeping check.

Vertical and horizontal line segments use composite Gauss-Legendre panels
narrow enough to resolve the x^(it) oscillation, evaluated in vectorized
float64 (thousands of nodes at double accuracy).  Circles use the trapezoid
rule in multiprecision, which is spectrally accurate on periodic contours:
with N nodes, principal parts are integrated exactly and the analytic
remainder contributes O((r/R)^N) for the distance R to the nearest other
singularity.

All line quadratures carry a node-doubling self-check.  Evaluation points x
must be non-integers (half-integers in practice) to avoid the Perron jump.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp, mpc, mpf

from .errors import ContourError, ConventionError, DomainError, QuadratureError
from . import zeta as zeta_engine
from .zeta import dirichlet_quotient_f64

MIN_NODES = 64
DEFAULT_PRECISION = 128

#: Known fixed poles of F(s) x^s / s on the desk-scale window.
_FIXED_POLES = (0.0 + 0.0j, 1.0 + 0.0j)


@dataclass(frozen=True)
class ContourSpec:
    """Description of one quadrature contour.

    kind 'vertical_segment': the line Re s = abscissa from -height to height.
    kind 'circle': circle of given radius about center.
    """

    kind: str
    x: float
    node_count: int = 512
    abscissa: float | None = None
    height: float | None = None
    center: complex | None = None
    radius: float | None = None
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        if self.kind not in ("vertical_segment", "circle"):
            raise DomainError(f"unknown contour kind {self.kind!r}")
        if self.node_count < MIN_NODES:
            raise DomainError(f"node count must be >= {MIN_NODES}")
        if self.kind == "vertical_segment":
            if self.abscissa is None or self.height is None:
                raise DomainError("vertical segment needs abscissa and height")
        else:
            if self.center is None or self.radius is None:
                raise DomainError("circle needs center and radius")
            for pole in _FIXED_POLES:
                gap = abs(abs(complex(self.center) - pole) - self.radius)
                if gap < 1.0e-3:
                    raise ContourError(
                        f"circle passes within 1e-3 of the pole at {pole}"
                    )


def _integrand_line(s: np.ndarray, x: float) -> np.ndarray:
    """F(s) x^s / s on an array of points off the poles."""
    return dirichlet_quotient_f64(s) * np.exp(s * math.log(x)) / s


def _gauss_line(t_lo: float, t_hi: float, abscissa: float, x: float,
                panels: int, order: int = 16) -> complex:
    """integral of F(sigma + i t) x^s / s dt over [t_lo, t_hi]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(t_lo, t_hi, panels + 1)
    mid = (edges[1:] + edges[:-1]) / 2.0
    half = (edges[1:] - edges[:-1]) / 2.0
    t = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    total = 0.0 + 0.0j
    chunk = 4096
    for i in range(0, len(t), chunk):
        s = abscissa + 1j * t[i: i + chunk]
        total += np.sum(_integrand_line(s, x) * w[i: i + chunk])
    return complex(total)


def _gauss_horizontal(sigma_lo: float, sigma_hi: float, t: float, x: float,
                      panels: int, order: int = 16) -> complex:
    """integral of F(sigma + i t) x^s / s dsigma over [sigma_lo, sigma_hi]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(sigma_lo, sigma_hi, panels + 1)
    mid = (edges[1:] + edges[:-1]) / 2.0
    half = (edges[1:] - edges[:-1]) / 2.0
    sig = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    s = sig + 1j * t
    return complex(np.sum(_integrand_line(s, x) * w))


def _require_half_convention(x: float) -> None:
    if float(x) == int(x):
        raise ConventionError(
            f"x = {x} is an integer; use the half-integer grid (n + 1/2) "
            "to stay off the Perron jump discontinuity"
        )


def _panels_for(span: float, x: float, nodes: int, order: int = 16) -> int:
    # Enough panels that each spans at most a quarter oscillation period
    # of x^(it), and at least nodes/order panels overall.
    period = 2.0 * math.pi / max(math.log(x), 1.0)
    return max(int(math.ceil(span / (period / 4.0))), nodes // order, 1)


def perron_truncated(x: float, c: float, T: float, nodes: int = 1024,
                     tol: float = 1.0e-6) -> complex:
    """(1/2 pi i) integral of F(s) x^s / s ds on the segment c - iT .. c + iT.

    The two half-lines are integrated independently (no conjugate-symmetry
    shortcut), so the smallness of the imaginary part is a real check.  A
    node-doubling comparison guards the quadrature; disagreement beyond tol
    raises QuadratureError.
    """
    _require_half_convention(x)
    if c <= 1:
        raise DomainError("abscissa c must exceed 1 (absolute convergence)")
    if T <= 0:
        raise DomainError("height T must be positive")
    if nodes < MIN_NODES:
        raise DomainError(f"node count must be >= {MIN_NODES}")

    def value(panel_count: int) -> complex:
        integral = _gauss_line(-T, T, c, x, panel_count)
        return integral * 1j / (2.0j * math.pi)

    panels = _panels_for(2 * T, x, nodes)
    coarse = value(panels)
    fine = value(2 * panels)
    scale = max(1.0, abs(fine))
    if abs(fine - coarse) > tol * scale:
        raise QuadratureError(
            f"node doubling changed the Perron value by {abs(fine - coarse):.3e} "
            f"(tolerance {tol:.1e} relative)"
        )
    return fine


def residue_by_circle(center, radius: float, x: float, nodes: int = 128,
                      precision: int = DEFAULT_PRECISION,
                      verify_radius: bool = False) -> mpc:
    """(1/2 pi i) contour integral of F(s) x^s / s on a circle, by trapezoid.

    Equals the residue sum of the enclosed poles.  With verify_radius the
    integral is repeated at half the radius; disagreement signals that the
    circle and its half do not enclose the same poles.
    """
    if nodes < MIN_NODES:
        raise DomainError(f"node count must be >= {MIN_NODES}")
    if radius <= 0:
        raise DomainError("radius must be positive")
    with mp.workprec(precision + 16):
        c0 = mpc(center)
        r = mpf(radius)
        lx = mp.ln(mpf(x))
        total = mpc(0)
        # Half-step node offset keeps nodes off the real axis, where the
        # zeta(2s) pole at s = 1/2 would otherwise be hit exactly.
        for j in range(nodes):
            z = c0 + r * mp.expjpi(mpf(2 * j + 1) / nodes)
            f = (zeta_engine.zeta(z, precision) ** 3
                 / zeta_engine.zeta(2 * z, precision)
                 * mp.exp(z * lx) / z)
            total += f * (z - c0)
        result = +(total / nodes)
    if verify_radius:
        inner = residue_by_circle(center, radius / 2.0, x, nodes, precision)
        scale = max(mpf(1), abs(result))
        if abs(result - inner) / scale > mpf("1e-8"):
            raise ContourError(
                "radius-halving inconsistency: the circle and its half enclose "
                "different pole sets"
            )
    return result


def truncation_decay(x: float, c: float, T_list, exact_sum: int,
                     nodes: int = 1024) -> tuple[list[tuple[float, float]], float]:
    """Perron truncation error |I(T) - S(x)| over ascending T, plus the
    fitted log-log slope."""
    _require_half_convention(x)
    if list(T_list) != sorted(T_list):
        raise DomainError("T_list must be ascending")
    rows = []
    for T in T_list:
        approx = perron_truncated(x, c, T, nodes)
        rows.append((float(T), abs(approx.real - exact_sum)))
    logs_T = np.log([r[0] for r in rows])
    logs_e = np.log([max(r[1], 1e-300) for r in rows])
    slope = float(np.polyfit(logs_T, logs_e, 1)[0])
    return rows, slope


@dataclass(frozen=True)
class RectangleCheck:
    """Residue bookkeeping on a pole-free-edge rectangle enclosing s = 1."""

    contour_value: float
    residue_value: float
    edge_magnitudes: dict
    discrepancy: float


def rectangle_consistency(x: float, T: float = 50.0, right: float = 1.25,
                          left: float = 0.6, nodes: int = 2048,
                          residue_value: float | None = None) -> RectangleCheck:
    """Counterclockwise rectangle integral versus the enclosed residue at s = 1.

    The left edge sits at sigma = left > 1/2, so the rectangle encloses the
    order-3 pole at s = 1 and nothing else; the zero poles on Re s = 1/4 and
    the pole at s = 0 stay outside and are tested individually by circles.
    """
    _require_half_convention(x)
    if not 0.5 < left < 1.0 < right:
        raise ContourError(
            "rectangle must satisfy 1/2 < left < 1 < right to enclose s = 1 only"
        )
    v_panels = _panels_for(2 * T, x, nodes)
    h_panels = _panels_for(right - left, x, max(nodes // 8, 128))
    right_edge = _gauss_line(-T, T, right, x, v_panels) * 1j
    left_edge = -_gauss_line(-T, T, left, x, v_panels) * 1j
    top_edge = -_gauss_horizontal(left, right, T, x, h_panels)
    bottom_edge = _gauss_horizontal(left, right, -T, x, h_panels)
    two_pi_i = 2.0j * math.pi
    contour = (right_edge + left_edge + top_edge + bottom_edge) / two_pi_i
    if residue_value is None:
        from .series import residue_main_term

        _, value = residue_main_term(x, mode="exact")
        residue_value = float(value)
    return RectangleCheck(
        contour_value=contour.real,
        residue_value=residue_value,
        edge_magnitudes={
            "right": abs(right_edge / two_pi_i),
            "left": abs(left_edge / two_pi_i),
            "top": abs(top_edge / two_pi_i),
            "bottom": abs(bottom_edge / two_pi_i),
        },
        discrepancy=abs(contour.real - residue_value)
        + abs(contour.imag),
    )
