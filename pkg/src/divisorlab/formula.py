"""Assembly of the explicit-formula decomposition and error reporting.

For the divisor-square sum the decomposition reads

    S(x) = A1 x log^2 x + A2 x log x + A3 x + 1/4
           + sum over zeros  2 |A_g| x^(1/4) cos((g/2) log x + arg A_g)
           + E(x),

with the coefficients from the series module and one cosine term per
conjugate pair of zeros.  compare() fills an ErrorReport over a grid of
half-integer x, with E normalized by x^(1/4) and x^(1/3).

Companion modes: the squarefree-divisor sum (main term A1' x log x + A2' x,
no zero sum) and the squarefree-indicator sum (main term x / zeta(2)).
"""

from __future__ import annotations

import cmath
import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from mpmath import mp, mpf

from .errors import DomainError
from .series import (
    MainTermCoefficients,
    main_term_coefficients,
    two_omega_coefficients,
)
from .sieve import ArithmeticFunction, prefix_sums_at, DEFAULT_SEGMENT_SIZE
from .zeros import ZeroTable, ZeroTermCoefficient
from . import zeta as zeta_engine

DEFAULT_PRECISION = 128

CSV_COLUMNS = ["x", "S", "main", "zero_sum", "zeros_used", "E", "E_x14", "E_x13"]


@dataclass(frozen=True)
class Cutoff:
    """Zero-sum truncation: by zero count ('count') or ordinate bound ('ordinate')."""

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("count", "ordinate"):
            raise DomainError("cutoff kind must be 'count' or 'ordinate'")
        if self.value <= 0:
            raise DomainError("cutoff value must be positive")


@dataclass(frozen=True)
class ReportRow:
    x: float
    S_exact: int
    main: float
    zero_sum: float
    zeros_used: int
    E: float
    E_over_x14: float
    E_over_x13: float


@dataclass
class ErrorReport:
    function: ArithmeticFunction
    mode: str
    cutoff: Cutoff | None
    rows: list[ReportRow] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in self.rows:
                writer.writerow([
                    repr(r.x), r.S_exact, repr(r.main), repr(r.zero_sum),
                    r.zeros_used, repr(r.E), repr(r.E_over_x14), repr(r.E_over_x13),
                ])

    def summary(self) -> dict:
        return {
            "function": self.function.value,
            "mode": self.mode,
            "cutoff": None if self.cutoff is None
            else {"kind": self.cutoff.kind, "value": self.cutoff.value},
            "rows": len(self.rows),
            "max_abs_E": max((abs(r.E) for r in self.rows), default=0.0),
            "max_abs_E_over_x14": max((abs(r.E_over_x14) for r in self.rows), default=0.0),
            "max_abs_E_over_x13": max((abs(r.E_over_x13) for r in self.rows), default=0.0),
            "warnings": self.warnings,
        }

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.summary(), indent=2) + "\n")


def log_grid(start: float, stop: float, count: int,
             half_integers: bool = True) -> list[float]:
    """Log-spaced grid, optionally snapped to half-integers n + 1/2."""
    if not (1 <= start < stop) or count < 2:
        raise DomainError("need 1 <= start < stop and count >= 2")
    la, lb = math.log(start), math.log(stop)
    xs = [math.exp(la + (lb - la) * i / (count - 1)) for i in range(count)]
    if half_integers:
        xs = [math.floor(x) + 0.5 for x in xs]
    out = []
    for x in xs:  # snapping can collide at the low end
        if not out or x > out[-1]:
            out.append(x)
    return out


def main_value(x: float, coefficients: MainTermCoefficients,
               include_constant: bool = True) -> float:
    """Smooth part A1 x log^2 x + A2 x log x + A3 x (+ the s = 0 constant)."""
    if x <= 1:
        raise DomainError("x must be > 1")
    with mp.workprec(96):
        xv = mpf(x)
        lam = mp.ln(xv)
        value = xv * (coefficients.A1 * lam ** 2
                      + coefficients.A2 * lam + coefficients.A3)
        if include_constant:
            value += coefficients.constant_term
        return float(value)


def select_zero_terms(
    coefficients: list[ZeroTermCoefficient],
    cutoff: Cutoff,
) -> tuple[list[ZeroTermCoefficient], list[str]]:
    """Apply the truncation rule; report (never silently absorb) shortfalls."""
    warnings = []
    if cutoff.kind == "count":
        k = int(cutoff.value)
        if k > len(coefficients):
            warnings.append(
                f"requested {k} zeros but the table holds {len(coefficients)}; "
                f"using all {len(coefficients)}"
            )
            k = len(coefficients)
        chosen = coefficients[:k]
    else:
        chosen = [c for c in coefficients if float(c.ordinate) / 2 <= cutoff.value]
        if chosen == coefficients:
            top = float(coefficients[-1].ordinate) / 2 if coefficients else 0.0
            warnings.append(
                f"ordinate cutoff {cutoff.value} exceeds the table's top "
                f"half-ordinate {top}; zero sum is truncated by the table"
            )
    return chosen, warnings


def zero_sum_terms(x: float, terms: list[ZeroTermCoefficient]) -> tuple[float, float]:
    """(real zero sum, pre-pairing imaginary residue) at x.

    Each zero contributes A x^(1/4 + i g/2) plus the conjugate term; both
    halves are evaluated independently and the leftover imaginary part is
    returned as a realness diagnostic.
    """
    if x <= 1:
        raise DomainError("x must be > 1")
    lx = math.log(x)
    total = 0.0 + 0.0j
    for c in terms:
        rho = complex(c.rho_half)
        a = complex(c.coefficient)
        plus = a * cmath.exp(rho * lx)
        minus = a.conjugate() * cmath.exp(rho.conjugate() * lx)
        total += plus + minus
    return total.real, abs(total.imag)


def zero_sum(x: float, table: ZeroTable, coefficients: list[ZeroTermCoefficient],
             cutoff: Cutoff) -> float:
    """Real oscillatory zero-sum correction at x under the given cutoff."""
    if len(table) == 0:
        raise DomainError("zero table is empty")
    chosen, _ = select_zero_terms(coefficients, cutoff)
    value, _ = zero_sum_terms(x, chosen)
    return value


def compare(
    x_grid,
    function: ArithmeticFunction = ArithmeticFunction.D_SQUARE,
    mode: str = "exact",
    coefficients: MainTermCoefficients | None = None,
    zero_coefficients: list[ZeroTermCoefficient] | None = None,
    cutoff: Cutoff | None = None,
    include_constant: bool = True,
    precision: int = DEFAULT_PRECISION,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> ErrorReport:
    """Exact sieve sums versus the analytic decomposition over a grid.

    The sieve runs once in ascending order over the whole grid; the zero sum
    applies only to the divisor-square function.
    """
    xs = sorted(float(x) for x in x_grid)
    if xs[0] <= 1:
        raise DomainError("grid points must exceed 1")
    report = ErrorReport(function=function, mode=mode, cutoff=cutoff)

    floors = [int(x) for x in xs]
    sums = prefix_sums_at(function, floors, segment_size)

    if function is ArithmeticFunction.D_SQUARE:
        if coefficients is None:
            coefficients = main_term_coefficients(mode, precision=precision)
        main_of = lambda x: main_value(x, coefficients, include_constant)
    elif function is ArithmeticFunction.TWO_OMEGA:
        a1p, a2p = two_omega_coefficients(mode, precision)
        main_of = lambda x: float(a1p) * x * math.log(x) + float(a2p) * x
    elif function is ArithmeticFunction.MU_SQUARED:
        inv_z2 = float(1 / zeta_engine.zeta(2, precision).real)
        main_of = lambda x: x * inv_z2
    else:
        raise DomainError(
            f"no analytic main term implemented for {function.value}; "
            "the divisor-square-squared sum is sieve/identity checked only"
        )

    chosen: list[ZeroTermCoefficient] = []
    if function is ArithmeticFunction.D_SQUARE and zero_coefficients and cutoff:
        chosen, warns = select_zero_terms(zero_coefficients, cutoff)
        report.warnings.extend(warns)

    for x, fl in zip(xs, floors):
        s_exact = sums[fl]
        main = main_of(x)
        if chosen:
            zs, imag_resid = zero_sum_terms(x, chosen)
            if imag_resid >= 1e-10 * x ** 0.25:
                report.warnings.append(
                    f"pre-pairing imaginary residue {imag_resid} at x = {x}"
                )
        else:
            zs = 0.0
        e = float(s_exact) - main - zs
        report.rows.append(ReportRow(
            x=x, S_exact=s_exact, main=main, zero_sum=zs,
            zeros_used=2 * len(chosen),
            E=e, E_over_x14=e / x ** 0.25, E_over_x13=e / x ** (1.0 / 3.0),
        ))
    return report


@dataclass(frozen=True)
class ConjectureScan:
    """sup over the grid of |zero_sum(x)| / x^(1/3 + eps), with its argmax."""

    epsilon: float
    sup_ratio: float
    argmax_x: float
    zeros_used: int
    trace: tuple  # (x, |zero_sum|, ratio) rows


def conjecture_scan(
    x_grid,
    table: ZeroTable,
    zero_coefficients: list[ZeroTermCoefficient],
    epsilon: float = 0.01,
    cutoff: Cutoff | None = None,
) -> ConjectureScan:
    """Scan the zero-sum magnitude against the conjectured x^(1/3+eps) growth."""
    if epsilon < 0:
        raise DomainError("epsilon must be >= 0")
    cutoff = cutoff or Cutoff("count", len(table))
    chosen, _ = select_zero_terms(zero_coefficients, cutoff)
    trace = []
    sup_ratio, argmax = 0.0, float("nan")
    for x in sorted(float(x) for x in x_grid):
        value, _ = zero_sum_terms(x, chosen) if chosen else (0.0, 0.0)
        ratio = abs(value) / x ** (1.0 / 3.0 + epsilon)
        trace.append((x, abs(value), ratio))
        if ratio > sup_ratio:
            sup_ratio, argmax = ratio, x
    return ConjectureScan(
        epsilon=epsilon,
        sup_ratio=sup_ratio,
        argmax_x=argmax,
        zeros_used=2 * len(chosen),
        trace=tuple(trace),
    )
