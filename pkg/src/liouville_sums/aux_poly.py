"""Residues at the zeta zeros and the smoothed auxiliary trigonometric polynomial.

For an exponent alpha in [0, 1] and a frequency cutoff T, the polynomial is

    A(u) = r0(alpha) + 2 Re sum_{0 < gamma_n < T} r_n (1 - gamma_n / T) e^{i gamma_n u},

where the constant term is

    r0(alpha) = 1 / ((1 - 2 alpha) zeta(1/2))        for 0 <= alpha < 1/2 and alpha = 1,
                1 / ((1 - 2 alpha) zeta(1/2)) + 1    for 1/2 < alpha < 1,
                euler_gamma / zeta(1/2)              for alpha = 1/2,

and the oscillating coefficients are the residues

    r_n = zeta(1 + 2 i gamma_n) / ((1/2 - alpha + i gamma_n) zeta'(1/2 + i gamma_n)),

assuming all zeros are simple.  The triangular factor (1 - gamma_n / T) is
the Fejer-style smoothing weight; it lies in (0, 1] and decreases with
gamma_n.  Large positive values of A(u) suggest sign failures of the weighted
running sums near X = e^u, which is why the scanner records e^u alongside
each extremum.

Caveats, deliberate and documented: the alpha = 1/2 constant term keeps only
the leading-order residue euler_gamma / zeta(1/2); a full expansion of the
underlying double pole would add a zeta'(1/2)-dependent contribution.  For
1/2 < alpha < 1 the "+1" from the pole at the origin is folded into the same
constant even though the two contributions decay differently in u.  Both
choices follow the classical construction as printed.

AuxPolynomial is immutable after build; evaluate_at is pure; grid scans may
be partitioned across workers and merged associatively.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Optional, TextIO

import numpy as np

from .zeros import ZeroTable, validate_zero
from .zeta import ComplexValue, zeta, zeta_with_prime

#: Euler-Mascheroni constant.
EULER_GAMMA = float(np.euler_gamma)

#: Residual ceiling for an ordinate to be accepted as a genuine zero.
ORDINATE_RESIDUAL_TOL = 1.0e-3

#: Minimum |zeta'(rho)|; below this the simplicity assumption is in doubt.
ZETA_PRIME_FLOOR = 1.0e-6

#: Largest number of grid points a scan will accept.
MAX_GRID_POINTS = 10 ** 9

#: Grid chunk size for scans (memory bound, not a tuning knob).
_CHUNK = 1 << 19

#: Rotation fast path re-seeds the phases this often to cap drift.
_ROTATION_RESEED = 4096

#: exp(u) overflows binary64 beyond this; X-equivalents are reported as None.
_EXP_MAX = 709.0

AUX_TRACE_HEADER = "u,X_equiv,value"


def _zeta_half() -> float:
    return zeta(0.5).re


def residue_r0(alpha: float) -> float:
    """Constant term of the auxiliary polynomial.

    Args:
        alpha: exponent in [0, 1]

    Returns:
        r0(alpha) per the case split in the module docstring.

    Raises:
        ValueError: alpha outside [0, 1].
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    zh = _zeta_half()
    if alpha == 0.5:
        return EULER_GAMMA / zh
    base = 1.0 / ((1.0 - 2.0 * alpha) * zh)
    if 0.5 < alpha < 1.0:
        return base + 1.0
    return base


def residue_rn(gamma_n: float, alpha: float, *, validate: bool = True) -> ComplexValue:
    """Residue coefficient of the oscillating term at ordinate gamma_n.

    Args:
        gamma_n: positive ordinate of a (simple) critical-line zero
        alpha: exponent in [0, 1]
        validate: check |zeta(1/2 + i*gamma_n)| <= 1e-3 before trusting the
            ordinate (skip when the table was already validated)

    Returns:
        ComplexValue holding zeta(1 + 2i*gamma_n) /
        ((1/2 - alpha + i*gamma_n) * zeta'(1/2 + i*gamma_n)) with a
        first-order propagated error estimate.

    Raises:
        ValueError: alpha out of range, ordinate fails validation, or
            |zeta'| below the simplicity floor.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if validate:
        check = validate_zero(gamma_n, ORDINATE_RESIDUAL_TOL)
        if not check.passed:
            raise ValueError(
                f"gamma = {gamma_n!r} is not a zero ordinate: residual "
                f"{check.residual:.3e} exceeds {ORDINATE_RESIDUAL_TOL:.0e}"
            )
    num = zeta(complex(1.0, 2.0 * gamma_n))
    _, dz = zeta_with_prime(complex(0.5, gamma_n))
    if abs(dz.value) < ZETA_PRIME_FLOOR:
        raise ValueError(
            f"|zeta'(1/2 + {gamma_n!r}i)| = {abs(dz.value):.3e} below "
            f"{ZETA_PRIME_FLOOR:.0e}; bad ordinate or near-multiple zero"
        )
    denom = complex(0.5 - alpha, gamma_n) * dz.value
    r = num.value / denom
    rel = num.err / max(abs(num.value), 1e-300) + dz.err / abs(dz.value)
    return ComplexValue(r.real, r.imag, abs(r) * rel)


@dataclass(frozen=True)
class AuxTerm:
    """One oscillating term: ordinate, residue, smoothing weight."""

    gamma: float
    residue: complex
    weight: float
    residue_err: float


@dataclass(frozen=True)
class AuxPolynomial:
    """Precomputed auxiliary polynomial, immutable after build.

    Attributes:
        alpha: exponent in [0, 1]
        cutoff: frequency cutoff T
        r0: constant term
        terms: one AuxTerm per ordinate 0 < gamma_n < T, in increasing gamma
    """

    alpha: float
    cutoff: float
    r0: float
    terms: tuple[AuxTerm, ...]

    def __post_init__(self) -> None:
        prev = 0.0
        prev_w = math.inf
        for t in self.terms:
            if not (prev < t.gamma < self.cutoff):
                raise ValueError(f"term ordinate {t.gamma!r} out of order or >= cutoff")
            if not (0.0 < t.weight <= 1.0 and t.weight < prev_w):
                raise ValueError(f"weight {t.weight!r} at gamma={t.gamma!r} invalid")
            prev, prev_w = t.gamma, t.weight


def build_polynomial(zeros: ZeroTable, T: float, alpha: float) -> AuxPolynomial:
    """Assemble the polynomial from a zero table, cutoff, and exponent.

    Keeps exactly the ordinates with 0 < gamma_n < T (strict), each weighted
    by 1 - gamma_n / T.

    Args:
        zeros: validated ordinate table
        T: positive frequency cutoff
        alpha: exponent in [0, 1]

    Returns:
        AuxPolynomial ready for evaluation at any u.

    Raises:
        ValueError: T <= 0, alpha out of range, or a residue failure
            (identified by its ordinate).

    Warns:
        UserWarning: when T exceeds the largest loaded ordinate, so the
            truncation is silently coarser than requested.
    """
    if not T > 0.0:
        raise ValueError(f"cutoff T must be positive, got {T}")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if T > zeros.gammas[-1] + 1.0:
        warnings.warn(
            f"cutoff T={T} exceeds table coverage (largest ordinate "
            f"{zeros.gammas[-1]}); terms above the table are missing",
            stacklevel=2,
        )
    r0 = residue_r0(alpha)
    terms = []
    for g in zeros.below(T):
        rn = residue_rn(g, alpha, validate=False)
        terms.append(
            AuxTerm(gamma=g, residue=rn.value, weight=1.0 - g / T, residue_err=rn.err)
        )
    return AuxPolynomial(alpha=alpha, cutoff=T, r0=r0, terms=tuple(terms))


def evaluate_at(poly: AuxPolynomial, u: float) -> float:
    """Evaluate the polynomial at a single point.

    Computes r0 + 2 * sum weight * Re(residue * e^{i gamma u}) with
    compensated summation; the result is exactly real by construction.

    Args:
        poly: the polynomial
        u: finite evaluation point, >= 0

    Returns:
        The real value A(u).
    """
    if not (math.isfinite(u) and u >= 0.0):
        raise ValueError(f"u must be finite and >= 0, got {u}")
    parts = [poly.r0]
    for t in poly.terms:
        rot = t.residue * cmath.exp(1j * t.gamma * u)
        parts.append(2.0 * t.weight * rot.real)
    return math.fsum(parts)


def _grid_values_direct(poly: AuxPolynomial, us: np.ndarray) -> np.ndarray:
    """Per-term trig evaluation on a grid (reference path)."""
    acc = np.full(len(us), poly.r0, dtype=np.float64)
    for t in poly.terms:
        phase = t.gamma * us
        a, b = t.residue.real, t.residue.imag
        acc += (2.0 * t.weight) * (a * np.cos(phase) - b * np.sin(phase))
    return acc


def _grid_values_rotation(poly: AuxPolynomial, u0: float, step: float, n: int) -> np.ndarray:
    """Incremental phase-rotation evaluation on a uniform grid.

    One complex multiply per term per step, re-seeded from direct
    exponentials every few thousand steps to cap rounding drift.  Validated
    against the direct path by the test suite; off by default.
    """
    acc = np.full(n, poly.r0, dtype=np.float64)
    if not poly.terms:
        return acc
    gammas = np.array([t.gamma for t in poly.terms])
    coeff = np.array([2.0 * t.weight * t.residue for t in poly.terms], dtype=np.complex128)
    steps = np.exp(1j * gammas * step)
    phase = np.exp(1j * gammas * u0)
    for i in range(n):
        if i % _ROTATION_RESEED == 0:
            phase = np.exp(1j * gammas * (u0 + i * step))
        acc[i] += (coeff * phase).real.sum()
        phase *= steps
    return acc


@dataclass(frozen=True)
class ScanExtremum:
    """Value and location of a scan extremum, with the X = e^u equivalent."""

    u: float
    value: float
    x_equiv: Optional[float]


@dataclass(frozen=True)
class UScanReport:
    """Grid-scan summary: extrema and sign-change intervals.

    sign_changes lists consecutive grid intervals (u_i, u_{i+1}) on which the
    value crosses zero strictly; a grid point evaluating to exactly 0.0 is
    reported as the degenerate interval (u_i, u_i).
    """

    alpha: float
    cutoff: float
    u_lo: float
    u_hi: float
    step: float
    n_points: int
    maximum: ScanExtremum
    minimum: ScanExtremum
    sign_changes: tuple[tuple[float, float], ...]

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "cutoff": self.cutoff,
            "u_lo": self.u_lo,
            "u_hi": self.u_hi,
            "step": self.step,
            "n_points": self.n_points,
            "max": {"u": self.maximum.u, "value": self.maximum.value, "x_equiv": self.maximum.x_equiv},
            "min": {"u": self.minimum.u, "value": self.minimum.value, "x_equiv": self.minimum.x_equiv},
            "sign_changes": [list(iv) for iv in self.sign_changes],
        }


def _x_equiv(u: float) -> Optional[float]:
    return math.exp(u) if u <= _EXP_MAX else None


def scan_u(
    poly: AuxPolynomial,
    u_lo: float,
    u_hi: float,
    step: float,
    *,
    trace: Optional[TextIO] = None,
    use_rotation: bool = False,
) -> UScanReport:
    """Evaluate the polynomial on a uniform grid and summarize.

    The grid is u_lo, u_lo + step, ... up to and including the last point
    <= u_hi (a single point when step exceeds the range).  Evaluation is
    chunked, so memory stays constant for any grid size.

    Args:
        poly: the polynomial
        u_lo, u_hi: scan range, u_lo < u_hi
        step: positive grid spacing
        trace: optional open text stream; every grid point is written as a
            CSV row "u,X_equiv,value" at full precision
        use_rotation: use the incremental phase-rotation fast path

    Returns:
        UScanReport with global extrema (earliest u on ties), their X = e^u
        equivalents, and all sign-change intervals.

    Raises:
        ValueError: bad range or step, or a grid larger than 1e9 points.
    """
    if not (u_lo < u_hi):
        raise ValueError(f"need u_lo < u_hi, got [{u_lo}, {u_hi}]")
    if not step > 0.0:
        raise ValueError(f"step must be positive, got {step}")
    n_points = int(math.floor((u_hi - u_lo) / step)) + 1
    if n_points > MAX_GRID_POINTS:
        raise ValueError(f"grid of {n_points} points exceeds the cap {MAX_GRID_POINTS}")

    if trace is not None:
        trace.write(AUX_TRACE_HEADER + "\n")

    best_max = -math.inf
    best_max_u = u_lo
    best_min = math.inf
    best_min_u = u_lo
    changes: list[tuple[float, float]] = []
    prev_u: Optional[float] = None
    prev_v: Optional[float] = None

    for start in range(0, n_points, _CHUNK):
        count = min(_CHUNK, n_points - start)
        idx = np.arange(start, start + count, dtype=np.float64)
        us = u_lo + idx * step
        if use_rotation:
            vs = _grid_values_rotation(poly, u_lo + start * step, step, count)
        else:
            vs = _grid_values_direct(poly, us)

        i_max = int(np.argmax(vs))
        if float(vs[i_max]) > best_max:
            best_max = float(vs[i_max])
            best_max_u = float(us[i_max])
        i_min = int(np.argmin(vs))
        if float(vs[i_min]) < best_min:
            best_min = float(vs[i_min])
            best_min_u = float(us[i_min])

        # Sign changes, including across the chunk boundary.
        signs = np.sign(vs)
        if prev_v is not None:
            if prev_v * float(vs[0]) < 0.0:
                changes.append((prev_u, float(us[0])))
        flips = np.nonzero(signs[:-1] * signs[1:] < 0.0)[0]
        changes.extend((float(us[i]), float(us[i + 1])) for i in flips)
        exact_zeros = np.nonzero(signs == 0.0)[0]
        changes.extend((float(us[i]), float(us[i])) for i in exact_zeros)

        if trace is not None:
            for u, v in zip(us.tolist(), vs.tolist()):
                x = _x_equiv(u)
                trace.write(f"{u!r},{'' if x is None else repr(x)},{v!r}\n")

        prev_u = float(us[-1])
        prev_v = float(vs[-1])

    return UScanReport(
        alpha=poly.alpha,
        cutoff=poly.cutoff,
        u_lo=u_lo,
        u_hi=u_hi,
        step=step,
        n_points=n_points,
        maximum=ScanExtremum(u=best_max_u, value=best_max, x_equiv=_x_equiv(best_max_u)),
        minimum=ScanExtremum(u=best_min_u, value=best_min, x_equiv=_x_equiv(best_min_u)),
        sign_changes=tuple(sorted(changes)),
    )
