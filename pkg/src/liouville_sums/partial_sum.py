"""Running sums L(X, alpha) = sum_{n<=X} lambda(n)/n^alpha with rigorous signs.

The accumulator keeps a compensated floating-point sum together with a
worst-case rounding-error bound, so sign decisions can be made honestly:
a value is only called positive or negative when it clears the error bound.

Summation scheme: terms are summed exactly within each block (math.fsum,
which returns the correctly rounded sum of its inputs) and blocks are chained
with a Neumaier-compensated carry.  The tracked bound covers

  (a) per-term representation error of lambda(n)/n^alpha in binary64,
  (b) the final rounding of each block sum (<= 1 eps of the block magnitude),
  (c) the compensated carry across blocks (<= 2 eps of the absolute sum),

and is accumulated as err_bound += eps * (K(alpha) + 4) * block_abs_sum,
where K(alpha) bounds the per-term relative error in eps units (see
_term_error_constant).  For alpha = 0 every quantity is an integer below
2^53, all arithmetic is exact, and the bound stays 0.

Sign scanning evaluates the running sum at every integer X in a range using
vectorized per-block prefix sums; within a block the per-X error bound uses
the standard worst case for sequential summation, which is far looser than
the carried Neumaier bound but still many orders below the observed values.
Candidate violations found by the scan are reconfirmed with the tight
accumulator before being reported.
"""

from __future__ import annotations

import enum
import json
import math
import os
from dataclasses import dataclass
from typing import Callable, Optional, TextIO

import numpy as np

from .liouville import (
    DEFAULT_SEGMENT_SIZE,
    LambdaBlock,
    primes_upto,
    stream_lambda,
    stream_lambda_range,
)

#: binary64 machine epsilon (2^-52); unit roundoff is EPS/2.
EPS = float(np.finfo(np.float64).eps)

#: Default sampling stride for scan traces.
DEFAULT_TRACE_EVERY = 10_000

#: Default checkpoint interval for long scans, in integers processed.
DEFAULT_CHECKPOINT_EVERY = 10 ** 8

CHECKPOINT_FORMAT = "liouville-sums-checkpoint"
CHECKPOINT_VERSION = 1

TRACE_HEADER = "X,alpha,value,err_bound,classification"


class Sign(enum.Enum):
    """Claimed sign of a running sum over a scan range."""

    NONPOSITIVE = "nonpositive"
    NONNEGATIVE = "nonnegative"


@dataclass
class SumState:
    """Compensated running sum of lambda(n)/n^alpha.

    Attributes:
        alpha: exponent, >= 0
        upto: last integer included (0 before any accumulation)
        value: primary accumulator
        comp: Neumaier compensation term; the best estimate of the sum
            is value + comp
        err_bound: worst-case absolute rounding error of value + comp
        abs_sum: running sum of |lambda(n)/n^alpha| = sum 1/n^alpha
    """

    alpha: float
    upto: int = 0
    value: float = 0.0
    comp: float = 0.0
    err_bound: float = 0.0
    abs_sum: float = 0.0

    def __post_init__(self) -> None:
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")

    def total(self) -> float:
        """Best estimate of the accumulated sum."""
        return self.value + self.comp


def _pow_terms(lo: int, hi: int, alpha: float) -> np.ndarray:
    """Vector of 1/n^alpha for n in [lo, hi], with specialized fast paths."""
    if alpha == 0.0:
        return np.ones(hi - lo + 1, dtype=np.float64)
    n = np.arange(lo, hi + 1, dtype=np.float64)
    if alpha == 0.5:
        return 1.0 / np.sqrt(n)
    if alpha == 1.0:
        return 1.0 / n
    return np.exp(-alpha * np.log(n))


def _term_error_constant(alpha: float, n_hi: int) -> float:
    """Bound, in units of EPS, on the relative error of computing 1/n^alpha.

    The named exponents use correctly rounded primitives (sqrt, division);
    the generic path goes through exp(-alpha*ln n), whose relative error
    grows with |alpha * ln n|.
    """
    if alpha == 0.0:
        return 0.0
    if alpha in (0.5, 1.0):
        return 1.0
    return 2.0 + 2.0 * alpha * max(1.0, math.log(n_hi))


def accumulate(state: SumState, block: LambdaBlock) -> SumState:
    """Add lambda(n)/n^alpha for every n in the block to the running sum.

    The block sum is formed with math.fsum (correctly rounded) and folded
    into the state with a Neumaier-compensated addition; err_bound and
    abs_sum advance per the module's documented bound.

    Args:
        state: running sum; mutated in place and returned.
        block: next block; must start at state.upto + 1.

    Raises:
        ValueError: on a gap or overlap between state and block.
    """
    if block.lo != state.upto + 1:
        raise ValueError(
            f"non-contiguous block: state ends at {state.upto}, block starts at {block.lo}"
        )
    terms = block.values * _pow_terms(block.lo, block.hi, state.alpha)
    block_sum = math.fsum(terms.tolist())
    block_abs = float(np.sum(np.abs(terms)))

    # Neumaier-compensated addition of the block sum.
    t = state.value + block_sum
    if abs(state.value) >= abs(block_sum):
        state.comp += (state.value - t) + block_sum
    else:
        state.comp += (block_sum - t) + state.value
    state.value = t

    if state.alpha != 0.0:
        k = _term_error_constant(state.alpha, block.hi)
        state.err_bound += EPS * (k + 4.0) * block_abs
    state.abs_sum += block_abs
    state.upto = block.hi
    return state


def evaluate(
    X: int,
    alpha: float,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
) -> tuple[float, float]:
    """Compute L(X, alpha) with its worst-case rounding-error bound.

    Args:
        X: upper summation limit, >= 1
        alpha: exponent, >= 0
        segment_size: sieve block size

    Returns:
        (value, err_bound) where |value - exact| <= err_bound.
    """
    if X < 1:
        raise ValueError(f"X must be >= 1, got {X}")
    state = SumState(alpha=alpha)
    for block in stream_lambda(X, segment_size):
        accumulate(state, block)
    return state.total(), state.err_bound


@dataclass(frozen=True)
class SignReport:
    """Outcome of a sign scan over [x_lo, x_hi].

    Each X is classified against the claimed sign using the interval
    [value - err_bound, value + err_bound]:

    - conforming: the claim holds even at the worst case,
    - violating: the claim fails by more than err_bound,
    - indeterminate: the error bound straddles zero, no honest call possible.

    Attributes:
        min_value/max_value: extrema of the computed running sum over the
            scanned range; argmin/argmax the earliest X attaining them.
        first_violation: smallest violating X, or None.
        indeterminate: number of X that could not be classified.
    """

    alpha: float
    x_lo: int
    x_hi: int
    claimed_sign: Sign
    checked: int
    violations: int
    first_violation: Optional[int]
    min_value: float
    argmin: int
    max_value: float
    argmax: int
    indeterminate: int

    def ok(self) -> bool:
        """True when every X conformed to the claimed sign."""
        return self.violations == 0 and self.indeterminate == 0

    def to_dict(self) -> dict:
        d = {
            "alpha": self.alpha,
            "x_lo": self.x_lo,
            "x_hi": self.x_hi,
            "claimed_sign": self.claimed_sign.value,
            "checked": self.checked,
            "violations": self.violations,
            "first_violation": self.first_violation,
            "min_value": self.min_value,
            "argmin": self.argmin,
            "max_value": self.max_value,
            "argmax": self.argmax,
            "indeterminate": self.indeterminate,
            "ok": self.ok(),
        }
        return d


def _classify_arrays(
    values: np.ndarray, errs: np.ndarray, claimed: Sign
) -> tuple[np.ndarray, np.ndarray]:
    """Return boolean (violating, indeterminate) arrays for a value block."""
    if claimed is Sign.NONPOSITIVE:
        violating = values - errs > 0.0
        conforming = values + errs <= 0.0
    else:
        violating = values + errs < 0.0
        conforming = values - errs >= 0.0
    indeterminate = ~(violating | conforming)
    return violating, indeterminate


class _TraceWriter:
    """CSV trace of sampled scan rows, full round-trip precision."""

    def __init__(self, fh: TextIO, alpha: float, every: int, write_header: bool = True):
        self.fh = fh
        self.alpha = alpha
        self.every = max(1, every)
        if write_header:
            fh.write(TRACE_HEADER + "\n")

    def row(self, x: int, value: float, err: float, classification: str) -> None:
        self.fh.write(f"{x},{self.alpha!r},{value!r},{err!r},{classification}\n")


@dataclass
class _ScanTally:
    """Mutable bookkeeping carried across blocks during a scan."""

    violations: int = 0
    first_violation: Optional[int] = None
    indeterminate: int = 0
    min_value: float = math.inf
    argmin: int = 0
    max_value: float = -math.inf
    argmax: int = 0

    def to_dict(self) -> dict:
        return {
            "violations": self.violations,
            "first_violation": self.first_violation,
            "indeterminate": self.indeterminate,
            "min_value": self.min_value.hex(),
            "argmin": self.argmin,
            "max_value": self.max_value.hex(),
            "argmax": self.argmax,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "_ScanTally":
        return cls(
            violations=d["violations"],
            first_violation=d["first_violation"],
            indeterminate=d["indeterminate"],
            min_value=float.fromhex(d["min_value"]),
            argmin=d["argmin"],
            max_value=float.fromhex(d["max_value"]),
            argmax=d["argmax"],
        )


def _write_checkpoint(
    path: str,
    *,
    alpha: float,
    claimed: Sign,
    x_lo: int,
    x_hi: int,
    segment_size: int,
    state: SumState,
    tally: _ScanTally,
) -> None:
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        "alpha": alpha,
        "claimed_sign": claimed.value,
        "x_lo": x_lo,
        "x_hi": x_hi,
        "segment_size": segment_size,
        "state": {
            "upto": state.upto,
            "value": state.value.hex(),
            "comp": state.comp.hex(),
            "err_bound": state.err_bound.hex(),
            "abs_sum": state.abs_sum.hex(),
        },
        "tally": tally.to_dict(),
    }
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=1)
    os.replace(tmp, path)


def _load_checkpoint(
    path: str,
    *,
    alpha: float,
    claimed: Sign,
    x_lo: int,
    x_hi: int,
    segment_size: int,
) -> tuple[SumState, _ScanTally]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != CHECKPOINT_FORMAT or payload.get("version") != CHECKPOINT_VERSION:
        raise ValueError(f"unrecognized checkpoint file {path!r}")
    expected = {
        "alpha": alpha,
        "claimed_sign": claimed.value,
        "x_lo": x_lo,
        "x_hi": x_hi,
        "segment_size": segment_size,
    }
    for key, want in expected.items():
        if payload.get(key) != want:
            raise ValueError(
                f"checkpoint {path!r} was written for {key}={payload.get(key)!r}, "
                f"scan requested {key}={want!r}"
            )
    st = payload["state"]
    state = SumState(
        alpha=alpha,
        upto=st["upto"],
        value=float.fromhex(st["value"]),
        comp=float.fromhex(st["comp"]),
        err_bound=float.fromhex(st["err_bound"]),
        abs_sum=float.fromhex(st["abs_sum"]),
    )
    return state, _ScanTally.from_dict(payload["tally"])


def scan_sign(
    x_lo: int,
    x_hi: int,
    alpha: float,
    claimed_sign: Sign,
    *,
    segment_size: int = DEFAULT_SEGMENT_SIZE,
    trace_path: Optional[str] = None,
    trace_every: int = DEFAULT_TRACE_EVERY,
    checkpoint_path: Optional[str] = None,
    checkpoint_every: int = DEFAULT_CHECKPOINT_EVERY,
    progress: Optional[Callable[[int], None]] = None,
) -> SignReport:
    """Classify the running sum at every integer X in [x_lo, x_hi].

    The sum always starts at n = 1; integers below x_lo are accumulated but
    not classified.  A candidate first violation found by the vectorized
    block path is reconfirmed with the tight compensated accumulator before
    being reported (skipped for alpha = 0, where arithmetic is exact).

    Args:
        x_lo, x_hi: inclusive scan range, 1 <= x_lo <= x_hi
        alpha: exponent, >= 0
        claimed_sign: the sign the sum is claimed to keep on the range
        segment_size: sieve block size
        trace_path: optional CSV trace; one row per trace_every integers,
            plus every violating or indeterminate X
        checkpoint_path: optional JSON checkpoint rewritten every
            checkpoint_every integers; an existing compatible checkpoint is
            resumed from
        progress: optional callback invoked with the last integer processed

    Returns:
        SignReport for the scanned range.
    """
    if not (1 <= x_lo <= x_hi):
        raise ValueError(f"invalid scan range [{x_lo}, {x_hi}]")
    state = SumState(alpha=alpha)
    tally = _ScanTally()
    if checkpoint_path and os.path.exists(checkpoint_path):
        state, tally = _load_checkpoint(
            checkpoint_path,
            alpha=alpha,
            claimed=claimed_sign,
            x_lo=x_lo,
            x_hi=x_hi,
            segment_size=segment_size,
        )
    next_checkpoint = (state.upto // checkpoint_every + 1) * checkpoint_every

    exact = alpha == 0.0
    trace_fh: Optional[TextIO] = None
    tracer: Optional[_TraceWriter] = None
    try:
        if trace_path is not None:
            resuming = state.upto > 0 and os.path.exists(trace_path)
            trace_fh = open(trace_path, "a" if resuming else "w", encoding="utf-8")
            tracer = _TraceWriter(trace_fh, alpha, trace_every, write_header=not resuming)

        base_primes = primes_upto(math.isqrt(x_hi))
        blocks = (
            stream_lambda_range(state.upto + 1, x_hi, segment_size, base_primes)
            if state.upto < x_hi
            else iter(())
        )
        for block in blocks:
            carry = state.total()
            carry_err = state.err_bound

            if exact:
                prefix = np.cumsum(block.values, dtype=np.int64)
                values = carry + prefix  # carry is an exact small integer
                errs = np.zeros(len(values), dtype=np.float64)
            else:
                terms = block.values * _pow_terms(block.lo, block.hi, alpha)
                prefix = np.cumsum(terms)
                values = carry + prefix
                abs_prefix = np.cumsum(np.abs(terms))
                k = _term_error_constant(alpha, block.hi)
                j = np.arange(1, len(values) + 1, dtype=np.float64)
                errs = carry_err + EPS * ((j + 1.0 + k) * abs_prefix + abs(carry))

            # Classify only the part of the block inside [x_lo, x_hi].
            start_i = max(0, x_lo - block.lo)
            if start_i < len(values):
                xs0 = block.lo + start_i
                v = values[start_i:]
                e = errs[start_i:]
                violating, indeterminate = _classify_arrays(v, e, claimed_sign)

                n_viol = int(np.count_nonzero(violating))
                if n_viol and tally.first_violation is None:
                    tally.first_violation = xs0 + int(np.argmax(violating))
                tally.violations += n_viol
                tally.indeterminate += int(np.count_nonzero(indeterminate))

                i_min = int(np.argmin(v))
                if float(v[i_min]) < tally.min_value:
                    tally.min_value = float(v[i_min])
                    tally.argmin = xs0 + i_min
                i_max = int(np.argmax(v))
                if float(v[i_max]) > tally.max_value:
                    tally.max_value = float(v[i_max])
                    tally.argmax = xs0 + i_max

                if tracer is not None:
                    _emit_trace_rows(
                        tracer, xs0, v, e, violating, indeterminate, x_lo, x_hi
                    )

            accumulate(state, block)
            if progress is not None:
                progress(state.upto)
            if checkpoint_path and state.upto >= next_checkpoint and state.upto < x_hi:
                _write_checkpoint(
                    checkpoint_path,
                    alpha=alpha,
                    claimed=claimed_sign,
                    x_lo=x_lo,
                    x_hi=x_hi,
                    segment_size=segment_size,
                    state=state,
                    tally=tally,
                )
                next_checkpoint = (state.upto // checkpoint_every + 1) * checkpoint_every
    finally:
        if trace_fh is not None:
            trace_fh.close()

    if tally.first_violation is not None and not exact:
        _confirm_violation(tally.first_violation, alpha, claimed_sign, segment_size)

    return SignReport(
        alpha=alpha,
        x_lo=x_lo,
        x_hi=x_hi,
        claimed_sign=claimed_sign,
        checked=x_hi - x_lo + 1,
        violations=tally.violations,
        first_violation=tally.first_violation,
        min_value=tally.min_value,
        argmin=tally.argmin,
        max_value=tally.max_value,
        argmax=tally.argmax,
        indeterminate=tally.indeterminate,
    )


def _emit_trace_rows(
    tracer: _TraceWriter,
    xs0: int,
    values: np.ndarray,
    errs: np.ndarray,
    violating: np.ndarray,
    indeterminate: np.ndarray,
    x_lo: int,
    x_hi: int,
) -> None:
    """Write sampled rows plus every violating/indeterminate X."""
    every = tracer.every
    n = len(values)
    first_mult = ((xs0 + every - 1) // every) * every
    sampled = set(range(first_mult - xs0, n, every))
    if xs0 == x_lo:
        sampled.add(0)
    if xs0 + n - 1 == x_hi:
        sampled.add(n - 1)
    flagged = np.nonzero(violating | indeterminate)[0]
    sampled.update(int(i) for i in flagged)
    for i in sorted(sampled):
        if violating[i]:
            cls = "violation"
        elif indeterminate[i]:
            cls = "indeterminate"
        else:
            cls = "conforming"
        tracer.row(xs0 + i, float(values[i]), float(errs[i]), cls)


def _confirm_violation(x: int, alpha: float, claimed: Sign, segment_size: int) -> None:
    """Recompute the first violation with the tight accumulator.

    The scan's per-X bound is deliberately loose; this guards against the
    (never observed) case of a violation flagged purely by bound slack.
    """
    value, err = evaluate(x, alpha, segment_size)
    if claimed is Sign.NONPOSITIVE:
        confirmed = value - err > 0.0
    else:
        confirmed = value + err < 0.0
    if not confirmed:
        raise RuntimeError(
            f"scan flagged X={x} as violating but the compensated recomputation "
            f"(value={value!r}, err_bound={err!r}) cannot confirm it; "
            f"rerun with a smaller segment_size"
        )


def euler_product_value(alpha: float, prime_limit: int) -> tuple[float, float]:
    """Finite Euler product prod_{p <= prime_limit} (1 + p^-alpha)^-1.

    The product converges (for alpha > 1) to the limit of the weighted sums
    L(X, alpha) as X grows.  The omitted tail satisfies

        |log(limit) - log(value)| <= sum_{n > prime_limit} n^-alpha
                                  <= prime_limit^(1-alpha) / (alpha - 1),

    and that bound is returned alongside the value.  The product is formed
    as exp(-fsum(log1p(p^-alpha))), so its own rounding error is a few eps.

    Args:
        alpha: exponent, must be > 1
        prime_limit: include primes up to this bound, >= 2

    Returns:
        (value, tail_bound) with tail_bound as above (a bound on the log,
        and since value < 1 also a bound on |value - limit|).

    Raises:
        ValueError: if alpha <= 1 or prime_limit < 2.
    """
    if alpha <= 1.0:
        raise ValueError(f"the product requires alpha > 1, got {alpha}")
    if prime_limit < 2:
        raise ValueError(f"prime_limit must be >= 2, got {prime_limit}")
    ps = primes_upto(prime_limit).astype(np.float64)
    log_factors = np.log1p(ps ** (-alpha))
    value = math.exp(-math.fsum(log_factors.tolist()))
    tail_bound = prime_limit ** (1.0 - alpha) / (alpha - 1.0)
    return value, tail_bound
