"""Tables of critical-line zeta zero ordinates: loading, validation, refinement.

A ZeroTable holds the positive ordinates gamma_n of zeros 1/2 + i*gamma_n in
strictly increasing order.  Negative ordinates are never stored; consumers
fold them in via conjugate symmetry.  Zeros are assumed simple throughout.

The package bundles the first 1000 ordinates at 12 decimal places
(data/zeta_zeros_1000.txt, regenerated by scripts/generate_zero_table.py);
zeros are never computed from scratch here, only locally refined by a
golden-section minimization of |zeta(1/2 + it)|^2.

File format (stable contract): UTF-8 text, one ordinate in plain decimal per
line, optional '#'-prefixed comment lines, blank lines ignored, no
locale-dependent separators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterator, Union

from .zeta import SUPPORTED_IM_MAX, zeta

#: Any genuine table starts at the first ordinate, which lies in this window.
FIRST_ORDINATE_WINDOW = (14.0, 14.3)

#: Default tolerance for validate_zero.
DEFAULT_VALIDATE_TOL = 1.0e-3

#: Half-width of the refinement bracket around the seed ordinate.
REFINE_HALF_WIDTH = 0.05

#: Golden-section terminates once the bracket is narrower than this.
REFINE_TARGET_WIDTH = 1.0e-10

#: Residual ceiling after refinement; above it the seed was not near a zero.
REFINE_RESIDUAL_TOL = 1.0e-6

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class ZeroTable:
    """Ordered positive ordinates of critical-line zeros, with provenance.

    Attributes:
        gammas: strictly increasing positive ordinates
        source: where the table came from (path or description)
        stated_precision: decimal places claimed by the source
    """

    gammas: tuple[float, ...]
    source: str
    stated_precision: int

    def __post_init__(self) -> None:
        if not self.gammas:
            raise ValueError("zero table is empty")
        prev = 0.0
        for i, g in enumerate(self.gammas):
            if not (g > prev):
                raise ValueError(
                    f"ordinates must be positive and strictly increasing; "
                    f"entry {i + 1} is {g!r} after {prev!r}"
                )
            prev = g
        lo, hi = FIRST_ORDINATE_WINDOW
        if not (lo < self.gammas[0] < hi):
            raise ValueError(
                f"first ordinate {self.gammas[0]!r} outside the sanity window "
                f"({lo}, {hi}); a genuine table starts at the first zero"
            )
        if self.gammas[-1] > SUPPORTED_IM_MAX:
            raise ValueError(
                f"ordinate {self.gammas[-1]!r} exceeds the supported height "
                f"{SUPPORTED_IM_MAX}"
            )

    def __len__(self) -> int:
        return len(self.gammas)

    def __iter__(self) -> Iterator[float]:
        return iter(self.gammas)

    def below(self, cutoff: float) -> tuple[float, ...]:
        """Ordinates strictly below the cutoff."""
        return tuple(g for g in self.gammas if g < cutoff)


def load_zeros(path: Union[str, Path]) -> ZeroTable:
    """Parse a zero-ordinate table from a text file.

    Args:
        path: file with one decimal ordinate per line; '#' comments and blank
            lines are allowed.

    Returns:
        Validated ZeroTable with the file path as source and the minimum
        number of decimal places seen as stated_precision.

    Raises:
        ValueError: malformed line (with its line number), non-increasing or
            non-positive sequence, or an empty table.
        OSError: unreadable file.
    """
    path = Path(path)
    gammas: list[float] = []
    min_decimals: int | None = None
    with path.open("r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            try:
                value = float(line)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed ordinate {line!r}") from None
            if not math.isfinite(value):
                raise ValueError(f"{path}:{lineno}: non-finite ordinate {line!r}")
            decimals = len(line.split(".", 1)[1]) if "." in line else 0
            min_decimals = decimals if min_decimals is None else min(min_decimals, decimals)
            if gammas and value <= gammas[-1]:
                raise ValueError(
                    f"{path}:{lineno}: ordinate {value!r} does not increase "
                    f"past {gammas[-1]!r}"
                )
            gammas.append(value)
    if not gammas:
        raise ValueError(f"{path}: no ordinates found")
    return ZeroTable(
        gammas=tuple(gammas),
        source=str(path),
        stated_precision=min_decimals or 0,
    )


@lru_cache(maxsize=1)
def bundled_zero_table() -> ZeroTable:
    """The table of the first 1000 ordinates shipped with the package."""
    ref = resources.files("liouville_sums").joinpath("data/zeta_zeros_1000.txt")
    with resources.as_file(ref) as path:
        table = load_zeros(path)
    return ZeroTable(
        gammas=table.gammas,
        source="bundled:zeta_zeros_1000.txt",
        stated_precision=table.stated_precision,
    )


@dataclass(frozen=True)
class ValidationResult:
    """Residual of a claimed ordinate and its pass/fail at a tolerance."""

    gamma: float
    residual: float
    tol: float
    passed: bool


def validate_zero(gamma: float, tol: float = DEFAULT_VALIDATE_TOL) -> ValidationResult:
    """Check how close 1/2 + i*gamma is to an actual zero.

    Args:
        gamma: claimed ordinate, 0 < gamma <= supported height
        tol: residual threshold for the pass flag

    Returns:
        ValidationResult with residual = |zeta(1/2 + i*gamma)|.
    """
    if gamma <= 0:
        raise ValueError(f"ordinate must be positive, got {gamma}")
    if gamma > SUPPORTED_IM_MAX:
        raise ValueError(f"ordinate {gamma} exceeds supported height {SUPPORTED_IM_MAX}")
    residual = abs(zeta(complex(0.5, gamma)).value)
    return ValidationResult(gamma=gamma, residual=residual, tol=tol, passed=residual <= tol)


def refine_zero(gamma0: float) -> float:
    """Refine an approximate ordinate to nearly full double precision.

    Minimizes |zeta(1/2 + it)|^2 by golden-section search on
    [gamma0 - 0.05, gamma0 + 0.05] until the bracket is below 1e-10 wide.

    Args:
        gamma0: seed ordinate, within 0.05 of a true ordinate

    Returns:
        The refined ordinate.

    Raises:
        ValueError: if the residual after refinement exceeds 1e-6 (the seed
            was not near a zero), or gamma0 is out of range.
    """
    if gamma0 <= 0:
        raise ValueError(f"ordinate must be positive, got {gamma0}")
    if gamma0 > SUPPORTED_IM_MAX:
        raise ValueError(f"ordinate {gamma0} exceeds supported height {SUPPORTED_IM_MAX}")

    def f(t: float) -> float:
        v = zeta(complex(0.5, t)).value
        return v.real * v.real + v.imag * v.imag

    a = gamma0 - REFINE_HALF_WIDTH
    b = gamma0 + REFINE_HALF_WIDTH
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc = f(c)
    fd = f(d)
    while (b - a) > REFINE_TARGET_WIDTH:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    refined = 0.5 * (a + b)
    residual = math.sqrt(f(refined))
    if residual > REFINE_RESIDUAL_TOL:
        raise ValueError(
            f"no zero near {gamma0}: residual {residual:.3e} after refinement "
            f"exceeds {REFINE_RESIDUAL_TOL:.0e}"
        )
    return refined
