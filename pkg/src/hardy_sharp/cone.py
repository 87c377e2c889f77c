"""Function representations on the cone of nonincreasing functions.

Step functions, tagged piecewise functions closed under the averaging
operators, the named analytic test families, and reproducible random cone
samples for verification sweeps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "ValidationError",
    "PieceKind",
    "Piece",
    "PiecewiseFunction",
    "StepFunction",
    "make_step",
    "family",
    "evaluate",
    "random_cone_sample",
    "step_to_json",
    "step_from_json",
    "piecewise_to_json",
    "piecewise_from_json",
]


class ValidationError(ValueError):
    """Invalid function data (unsorted breakpoints, nonpositive entries...)."""


class PieceKind(str, Enum):
    CONSTANT = "constant"                # c
    LOG_AFFINE = "log_affine"            # u + v ln x
    POWER = "power"                      # c x^alpha
    RECIPROCAL = "reciprocal"            # c / x
    LINEAR_PLUS_LOG = "linear_plus_log"  # u + w x + v ln x


_N_COEFFS = {
    PieceKind.CONSTANT: 1,
    PieceKind.LOG_AFFINE: 2,
    PieceKind.POWER: 2,
    PieceKind.RECIPROCAL: 1,
    PieceKind.LINEAR_PLUS_LOG: 3,
}


@dataclass(frozen=True)
class Piece:
    """One tagged analytic form on the half-open interval (lo, hi].

    ``recip`` is an extra c/x addend; it appears when averaging-operator
    images carry a prefix-integral term on top of the tagged form.
    """

    lo: float
    hi: float
    kind: PieceKind
    coeffs: tuple
    recip: float = 0.0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValidationError(f"piece interval ({self.lo}, {self.hi}] is empty")
        if self.lo < 0.0:
            raise ValidationError("piece interval must sit in (0, inf)")
        if len(self.coeffs) != _N_COEFFS[self.kind]:
            raise ValidationError(
                f"{self.kind.value} expects {_N_COEFFS[self.kind]} coefficients, "
                f"got {len(self.coeffs)}"
            )
        if self.hi == math.inf:
            self._check_tail_decay()

    def _check_tail_decay(self):
        k, c = self.kind, self.coeffs
        if k is PieceKind.POWER:
            if c[0] != 0.0 and c[1] >= 0.0:
                raise ValidationError("power piece on an infinite tail needs alpha < 0")
        elif k is PieceKind.RECIPROCAL:
            pass
        elif k is PieceKind.CONSTANT:
            if c[0] != 0.0:
                raise ValidationError("nonzero constant piece cannot sit on an infinite tail")
        else:
            if any(x != 0.0 for x in c):
                raise ValidationError(f"{k.value} piece cannot sit on an infinite tail")

    def __call__(self, x):
        k, c = self.kind, self.coeffs
        if k is PieceKind.CONSTANT:
            v = c[0]
        elif k is PieceKind.LOG_AFFINE:
            v = c[0] + c[1] * math.log(x)
        elif k is PieceKind.POWER:
            v = c[0] * x ** c[1]
        elif k is PieceKind.RECIPROCAL:
            v = c[0] / x
        else:
            v = c[0] + c[1] * x + c[2] * math.log(x)
        if self.recip != 0.0:
            v += self.recip / x
        return v


@dataclass(frozen=True)
class PiecewiseFunction:
    """Ordered, abutting pieces covering (0, X] or (0, inf); zero outside."""

    pieces: tuple

    def __post_init__(self):
        if not self.pieces:
            raise ValidationError("piecewise function needs at least one piece")
        prev_hi = 0.0
        for i, pc in enumerate(self.pieces):
            if pc.lo != prev_hi:
                raise ValidationError(
                    f"piece {i} starts at {pc.lo}, expected {prev_hi} (pieces must abut)"
                )
            prev_hi = pc.hi

    @property
    def support_end(self):
        return self.pieces[-1].hi

    def __call__(self, x):
        if x <= 0.0:
            raise ValidationError(f"evaluation point must be positive, got {x}")
        for pc in self.pieces:
            if x <= pc.hi:
                return pc(x)
        return 0.0


@dataclass(frozen=True)
class StepFunction:
    """Nonnegative step function sum_n b_n on (a_{n-1}, a_n], a_0 = 0.

    ``is_cone`` records whether the values are nonincreasing, i.e. whether
    the function lies in the cone the sharp inequalities are stated on.
    """

    breakpoints: tuple
    values: tuple
    is_cone: bool

    def __call__(self, x):
        if x <= 0.0:
            raise ValidationError(f"evaluation point must be positive, got {x}")
        for a, b in zip(self.breakpoints, self.values):
            if x <= a:
                return b
        return 0.0

    @property
    def support_end(self):
        return self.breakpoints[-1]

    def as_piecewise(self):
        pcs = []
        prev = 0.0
        for a, b in zip(self.breakpoints, self.values):
            pcs.append(Piece(prev, a, PieceKind.CONSTANT, (b,)))
            prev = a
        return PiecewiseFunction(tuple(pcs))


def make_step(breakpoints, values) -> StepFunction:
    """Validate and build a step function.

    Errors name the first offending index so bad sweep inputs are easy to
    trace back.
    """
    bp = tuple(float(a) for a in breakpoints)
    vals = tuple(float(b) for b in values)
    if len(bp) != len(vals) or not bp:
        raise ValidationError(
            f"need equal-length nonempty lists, got {len(bp)} breakpoints / {len(vals)} values"
        )
    prev = 0.0
    for i, a in enumerate(bp):
        if not a > prev:
            raise ValidationError(
                f"breakpoints must be strictly increasing and positive; index {i} has {a}"
            )
        if not math.isfinite(a):
            raise ValidationError(f"breakpoint at index {i} is not finite")
        prev = a
    for i, b in enumerate(vals):
        if not (b > 0.0 and math.isfinite(b)):
            raise ValidationError(f"values must be positive and finite; index {i} has {b}")
    is_cone = all(u >= v for u, v in zip(vals, vals[1:]))
    return StepFunction(bp, vals, is_cone)


def family(kind: str, param: float | None = None) -> PiecewiseFunction:
    """Named analytic test families.

    g_q      : (1/q) x^(-1/q) on (1, inf);  jumps up at 1, not in the cone
    f_q      : 1 on (0,1] plus x^(-1/q) on (1, inf); dual-average of g_q
    f_q_minus_g_q : 1 on (0,1] plus (1-1/q) x^(-1/q) on (1, inf)
    k_eps    : s/eps on (1-eps, 1]
    chi01    : indicator of (0,1]
    """
    if kind == "chi01":
        return PiecewiseFunction((Piece(0.0, 1.0, PieceKind.CONSTANT, (1.0,)),))
    if kind == "k_eps":
        eps = _require_param(kind, param)
        if not 0.0 < eps < 1.0:
            raise ValidationError(f"k_eps needs 0 < eps < 1, got {eps}")
        return PiecewiseFunction(
            (Piece(0.0, 1.0 - eps, PieceKind.CONSTANT, (0.0,)),
             Piece(1.0 - eps, 1.0, PieceKind.LINEAR_PLUS_LOG, (0.0, 1.0 / eps, 0.0)),)
        )
    q = _require_param(kind, param)
    if not q > 1.0:
        raise ValidationError(f"{kind} needs q > 1, got {q}")
    alpha = -1.0 / q
    if kind == "g_q":
        return PiecewiseFunction(
            (Piece(0.0, 1.0, PieceKind.CONSTANT, (0.0,)),
             Piece(1.0, math.inf, PieceKind.POWER, (1.0 / q, alpha)),)
        )
    if kind == "f_q":
        head, tail = 1.0, 1.0
    elif kind == "f_q_minus_g_q":
        head, tail = 1.0, 1.0 - 1.0 / q
    else:
        raise ValidationError(f"unknown family kind {kind!r}")
    return PiecewiseFunction(
        (Piece(0.0, 1.0, PieceKind.CONSTANT, (head,)),
         Piece(1.0, math.inf, PieceKind.POWER, (tail, alpha)),)
    )


def _require_param(kind, param):
    if param is None:
        raise ValidationError(f"family {kind!r} needs a parameter")
    return float(param)


def evaluate(f, x):
    """Pointwise value of a StepFunction or PiecewiseFunction; 0 off support."""
    return f(x)


def random_cone_sample(seed, n_pieces=8, log_bp_scale=3.0, log_val_scale=2.0) -> StepFunction:
    """Reproducible random cone member with ``n_pieces`` levels.

    Breakpoints are log-uniform over e^[-s, s], values are log-uniform and
    sorted descending, so the result always passes make_step validation and
    carries the cone flag.
    """
    if n_pieces < 1:
        raise ValidationError(f"n_pieces must be >= 1, got {n_pieces}")
    rng = np.random.default_rng(int(seed))
    bp = np.sort(np.exp(rng.uniform(-log_bp_scale, log_bp_scale, size=n_pieces)))
    for i in range(1, n_pieces):
        if bp[i] <= bp[i - 1]:
            bp[i] = bp[i - 1] * (1.0 + 1e-12)
    vals = np.sort(np.exp(rng.uniform(-log_val_scale, log_val_scale, size=n_pieces)))[::-1]
    return make_step(bp.tolist(), vals.tolist())


# ---------------------------------------------------------------------------
# JSON forms (CLI input/output)

def step_to_json(f: StepFunction) -> dict:
    return {"breakpoints": list(f.breakpoints), "values": list(f.values)}


def step_from_json(data: dict) -> StepFunction:
    return make_step(data["breakpoints"], data["values"])


def piecewise_to_json(f: PiecewiseFunction) -> dict:
    pieces = []
    for pc in f.pieces:
        entry = {
            "lo": pc.lo,
            "hi": pc.hi if pc.hi != math.inf else "inf",
            "kind": pc.kind.value,
            "coeffs": list(pc.coeffs),
        }
        if pc.recip != 0.0:
            entry["recip"] = pc.recip
        pieces.append(entry)
    return {"pieces": pieces}


def piecewise_from_json(data: dict) -> PiecewiseFunction:
    pcs = []
    for entry in data["pieces"]:
        hi = entry["hi"]
        pcs.append(
            Piece(
                float(entry["lo"]),
                math.inf if hi == "inf" else float(hi),
                PieceKind(entry["kind"]),
                tuple(float(c) for c in entry["coeffs"]),
                float(entry.get("recip", 0.0)),
            )
        )
    return PiecewiseFunction(tuple(pcs))
