"""Zero-ordinate ingestion, validation, and explicit-formula coefficients.

Input format: one decimal ordinate per line, strictly ascending, '#' comments
and blank lines allowed.  Only positive ordinates are stored; negative-gamma
terms are reconstructed by conjugation at evaluation time.

For a simple critical-line zero rho = 1/2 + i gamma of zeta, the function
zeta(2s) vanishes at rho/2 = 1/4 + i gamma/2 and the residue of 1/zeta(2s)
there is 1/(2 zeta'(rho)).  The explicit-formula coefficient attached to the
zero is therefore

    A = zeta^3(1/4 + i gamma/2) / ((1/4 + i gamma/2) * 2 zeta'(1/2 + i gamma)).

Cache format: '# source_digest <sha256>' header, then one line per zero with
ordinate, Re A, Im A, Re zeta', Im zeta' at 30 significant digits.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from mpmath import mp, mpc, mpf

from .errors import (
    DomainError,
    StaleCacheError,
    ZeroDataError,
    ZeroFileParseError,
)
from . import zeta as zeta_engine

DEFAULT_PRECISION = 128
CACHE_DIGITS = 30


@dataclass(frozen=True)
class ZeroTable:
    """Validated ascending positive zero ordinates plus the file digest."""

    ordinates: tuple
    source_digest: str

    def __len__(self) -> int:
        return len(self.ordinates)


@dataclass(frozen=True)
class ZeroTermCoefficient:
    """One zero's contribution data for the explicit formula."""

    ordinate: mpf
    rho_half: mpc
    coefficient: mpc
    derivative_at_zero: mpc

    def conjugate(self) -> "ZeroTermCoefficient":
        return ZeroTermCoefficient(
            ordinate=-self.ordinate,
            rho_half=self.rho_half.conjugate(),
            coefficient=self.coefficient.conjugate(),
            derivative_at_zero=self.derivative_at_zero.conjugate(),
        )


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def import_zeros(
    path,
    limit_count: int | None = None,
    refine: bool = False,
    precision: int = DEFAULT_PRECISION,
) -> ZeroTable:
    """Parse, validate, and optionally polish a zero-ordinate file."""
    path = Path(path)
    digest = file_digest(path)
    ordinates: list[mpf] = []
    with mp.workprec(precision + 16):
        for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            try:
                value = mpf(line)
            except ValueError:
                raise ZeroFileParseError(f"not a decimal ordinate: {line!r}", lineno)
            if ordinates and value <= ordinates[-1]:
                raise ZeroFileParseError(
                    f"ordinate {line} not strictly greater than the previous one",
                    lineno,
                )
            if value <= 10:
                raise ZeroFileParseError(
                    f"ordinate {line} below 10; the first zero is near 14.13", lineno
                )
            ordinates.append(value)
            if limit_count is not None and len(ordinates) >= limit_count:
                break
    if not ordinates:
        raise ZeroDataError(f"no ordinates found in {path}")
    if refine:
        ordinates = [zeta_engine.refine_zero(g, precision) for g in ordinates]
    return ZeroTable(ordinates=tuple(ordinates), source_digest=digest)


def coefficient_for(gamma, precision: int = DEFAULT_PRECISION) -> ZeroTermCoefficient:
    """Explicit-formula coefficient for the zero at ordinate gamma.

    gamma must already be polished (|zeta(1/2 + i gamma)| < 1e-8).  Negative
    ordinates are handled by conjugation of the positive-gamma result.
    """
    g = mpf(gamma)
    if g < 0:
        return coefficient_for(-g, precision).conjugate()
    with mp.workprec(precision + 16):
        rho = mpc(mpf("0.5"), g)
        val, der = zeta_engine.zeta_with_derivatives(rho, 1, precision)[:2]
        if abs(val) >= mpf("1e-8"):
            raise DomainError(
                f"ordinate {g} is not a polished zero: |zeta(rho)| = {abs(val)}"
            )
        if abs(der) < mpf("1e-6"):
            raise DomainError(
                f"|zeta'(rho)| = {abs(der)} at gamma = {g}: "
                "numerically violates the simple-zero assumption"
            )
        rho_half = mpc(mpf("0.25"), g / 2)
        z3 = zeta_engine.zeta(rho_half, precision) ** 3
        coeff = z3 / (rho_half * 2 * der)
        return ZeroTermCoefficient(
            ordinate=+g,
            rho_half=+rho_half,
            coefficient=+coeff,
            derivative_at_zero=+der,
        )


def _coefficient_task(args) -> ZeroTermCoefficient:
    gamma, precision = args
    return coefficient_for(gamma, precision)


def coefficients_for_table(
    table: ZeroTable,
    precision: int = DEFAULT_PRECISION,
    workers: int = 1,
) -> list[ZeroTermCoefficient]:
    """Coefficients for every table ordinate, in table order.

    With workers > 1 the per-zero computations run in separate processes and
    the results are collected in input order, so output is deterministic.
    """
    if workers > 1:
        tasks = [(g, precision) for g in table.ordinates]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_coefficient_task, tasks))
    return [coefficient_for(g, precision) for g in table.ordinates]


def persist_cache(table: ZeroTable, coefficients, path) -> None:
    """Write a human-inspectable coefficient cache keyed to the table digest."""
    lines = [
        f"# source_digest {table.source_digest}",
        f"# digits {CACHE_DIGITS}",
        "# columns: gamma re_coeff im_coeff re_deriv im_deriv",
    ]
    for c in coefficients:
        fields = (
            c.ordinate,
            c.coefficient.real,
            c.coefficient.imag,
            c.derivative_at_zero.real,
            c.derivative_at_zero.imag,
        )
        lines.append(" ".join(mp.nstr(v, CACHE_DIGITS) for v in fields))
    Path(path).write_text("\n".join(lines) + "\n")


def load_cache(path, table: ZeroTable,
               precision: int = DEFAULT_PRECISION) -> list[ZeroTermCoefficient]:
    """Reload cached coefficients; fails if the zero file has changed."""
    path = Path(path)
    coefficients = []
    digest = None
    with mp.workprec(max(precision, 110) + 16):
        for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
            line = raw.strip()
            if line.startswith("# source_digest"):
                digest = line.split()[-1]
                continue
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 5:
                raise ZeroFileParseError("expected 5 fields", lineno)
            g, cre, cim, dre, dim = (mpf(p) for p in parts)
            coefficients.append(
                ZeroTermCoefficient(
                    ordinate=g,
                    rho_half=mpc(mpf("0.25"), g / 2),
                    coefficient=mpc(cre, cim),
                    derivative_at_zero=mpc(dre, dim),
                )
            )
    if digest is None:
        raise ZeroDataError(f"cache {path} has no source_digest header")
    if digest != table.source_digest:
        raise StaleCacheError(
            "cache was built from a different zero file "
            f"(cache digest {digest[:12]}..., table digest {table.source_digest[:12]}...)"
        )
    return coefficients
