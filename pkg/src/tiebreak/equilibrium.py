"""Pure-strategy equilibrium solvers for the three contest classes.

Ratio-form contests (linear cost) admit a closed form: both efforts share the
factor beta * z_q'(beta) at beta = v1/v2.  Difference-form contests
(quadratic cost) reduce to one root-finding problem for the equilibrium
effort gap, after which each effort is prize times slope.  Concave-impact
contests solve the two first-order conditions directly: analytically when
the impact is linear, by damped best-response iteration otherwise.

Solvers work internally with valuations ordered strongest-first and report
results in the caller's labels, so callers never need to pre-sort prizes.
The tie rule is relabeled alongside (player 2's tie share is 1 - q).

Every solver returns an `Equilibrium` carrying per-player first-order
residuals evaluated at the returned profile, corner flags, and any warnings
(notably an unchecked-assumptions note unless the caller vouches that an
audit passed).  Residuals and iteration budgets live in one frozen
`Tolerances` record so tests and documentation quote a single source.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .audit import default_diff_grid
from .core import ContestSpec, CostKind, TieRule, Valuations
from .errors import ConvergenceError, NoEquilibriumError, ValidationError

_BRENTQ_RTOL = 4.0 * np.finfo(float).eps


@dataclass(frozen=True)
class Tolerances:
    """Residual targets and iteration budgets for all solver routes."""

    closed_form_residual: float = 1e-10
    beta_residual: float = 1e-12
    iterative_residual: float = 1e-9
    max_iterations: int = 100_000
    bracket_expansions: int = 100


DEFAULT_TOLERANCES = Tolerances()

UNCHECKED_ASSUMPTIONS_WARNING = (
    "regularity conditions not audited for this family instance; run the "
    "audit to confirm the solution formula applies"
)

CORNER_UNIQUENESS_WARNING = (
    "corner-adjusted solution: the profile is a mutual best response, but "
    "uniqueness at the boundary is reported, not asserted"
)


class SolveMethod(enum.Enum):
    CLOSED_FORM = "closed_form"
    ROOT_FIND = "root_find"
    FOC_SOLVE = "foc_solve"


@dataclass(frozen=True)
class Equilibrium:
    """A pure-strategy equilibrium profile in the caller's player labels.

    `beta` is the effort ratio x1/x2 for ratio-form contests, the effort gap
    x1 - x2 for difference-form contests, and None for concave contests
    (which have no scalar reduction).  `residuals` are the first-order
    residuals per player at the returned profile: interior players should be
    at machine-level zeros; a cornered player reports the (nonpositive)
    payoff slope at zero effort instead.
    """

    x1: float
    x2: float
    beta: float | None
    method: SolveMethod
    residuals: tuple[float, float]
    corner_flags: tuple[bool, bool] = (False, False)
    warnings: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not (self.x1 >= 0.0 and self.x2 >= 0.0):
            raise ValidationError(f"efforts must be >= 0, got ({self.x1}, {self.x2})")
        if len(self.residuals) != 2 or len(self.corner_flags) != 2:
            raise ValidationError("residuals and corner_flags must have one entry per player")

    @property
    def total(self) -> float:
        return self.x1 + self.x2

    def to_json_dict(self) -> dict:
        return {
            "x1": self.x1,
            "x2": self.x2,
            "beta": self.beta,
            "method": self.method.value,
            "residuals": list(self.residuals),
            "corner_flags": list(self.corner_flags),
            "warnings": list(self.warnings),
        }


def _oriented(v, q) -> tuple[Valuations, float, float]:
    """Normalize labels: strongest prize first, tie share relabeled to match."""
    vals = v if isinstance(v, Valuations) else Valuations(*v)
    q_user = TieRule.coerce(q).q
    q_int = 1.0 - q_user if vals.swapped else q_user
    return vals, q_user, q_int


def _user_order(vals: Valuations, strong: float, weak: float) -> tuple[float, float]:
    return (weak, strong) if vals.swapped else (strong, weak)


def solve_ratio(csf, v, q, *, force: bool = False, audited: bool = False,
                tolerances: Tolerances = DEFAULT_TOLERANCES) -> Equilibrium:
    """Closed-form equilibrium of a ratio-form contest with linear cost.

    Both players exert prize * beta * z_q'(beta) at beta = v1/v2 (labels
    normalized strongest-first internally).  Families whose closed form is
    only guaranteed under a parameter restriction reject parameters outside
    it unless `force` is given, in which case the formula is evaluated
    anyway and a warning is attached.
    """
    if getattr(csf, "kind", None) != "ratio":
        raise ValidationError("solve_ratio requires a ratio-form family")
    vals, q_user, q_int = _oriented(v, q)
    warnings: list[str] = []
    if not csf.lemma_precondition_ok:
        if not force:
            raise ValidationError(
                f"family {csf.name!r} violates its closed-form precondition "
                f"({csf.lemma_precondition}); pass force=True to evaluate anyway"
            )
        warnings.append(
            f"closed-form precondition {csf.lemma_precondition} violated; "
            "result computed under protest"
        )
    if not audited:
        warnings.append(UNCHECKED_ASSUMPTIONS_WARNING)

    beta_int = vals.beta
    slope = float(csf.z_prime(beta_int, q_int))
    strong = vals.v1 * beta_int * slope
    weak = vals.v2 * beta_int * slope
    x1, x2 = _user_order(vals, strong, weak)

    theta = x1 / x2
    v1u, v2u = (vals.v2, vals.v1) if vals.swapped else (vals.v1, vals.v2)
    zp = float(csf.z_prime(theta, q_user))
    r1 = v1u * zp / x2 - 1.0
    r2 = v2u * zp * x1 / (x2 * x2) - 1.0

    return Equilibrium(
        x1=x1, x2=x2, beta=theta, method=SolveMethod.CLOSED_FORM,
        residuals=(r1, r2), corner_flags=(False, False), warnings=tuple(warnings),
    )


def solve_beta(csf, v, q, *, tolerances: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Equilibrium effort gap of a difference-form contest.

    Solves theta = (v1 - v2) * z_q'(theta) for the unique nonnegative root,
    with valuations normalized strongest-first (the returned gap is that of
    the stronger player and is always >= 0).  Returns exactly 0.0 for equal
    prizes.  Bracketing exploits that the right side is bounded by
    (v1 - v2) * sup z'; the bracket is grown by doubling if the grid
    underestimates that supremum, and the bisection result is polished by
    Newton steps to the `beta_residual` tolerance.
    """
    if getattr(csf, "kind", None) != "diff":
        raise ValidationError("solve_beta requires a difference-form family")
    vals, _, q_int = _oriented(v, q)
    gap = vals.v1 - vals.v2
    if gap == 0.0:
        return 0.0

    def f(theta: float) -> float:
        return theta - gap * float(csf.z_prime(theta, q_int))

    slope_sup = float(np.max(np.asarray(csf.z_prime(default_diff_grid(), q_int))))
    hi = gap * slope_sup + 1.0
    for _ in range(tolerances.bracket_expansions):
        if f(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise ConvergenceError(
            f"could not bracket the effort-gap root within "
            f"{tolerances.bracket_expansions} expansions (last upper bound {hi}); "
            "the slope condition for existence likely fails at these prizes"
        )

    root = float(brentq(f, 0.0, hi, xtol=1e-15, rtol=_BRENTQ_RTOL))
    for _ in range(10):
        resid = f(root)
        if abs(resid) <= tolerances.beta_residual:
            break
        dslope = 1.0 - gap * float(csf.z_double_prime(root, q_int))
        if dslope == 0.0:
            break
        root -= resid / dslope
    if abs(f(root)) > tolerances.beta_residual:
        raise ConvergenceError(
            f"effort-gap residual {f(root):.3e} exceeds {tolerances.beta_residual:.3e}"
        )
    return max(root, 0.0)


def solve_diff(csf, v, q, *, audited: bool = False,
               tolerances: Tolerances = DEFAULT_TOLERANCES) -> Equilibrium:
    """Equilibrium of a difference-form contest with quadratic cost.

    Each effort is prize * z_q'(beta) at the equilibrium gap beta from
    `solve_beta`; the first-order conditions are exactly
    v_i * z_q'(gap) = x_i.
    """
    if getattr(csf, "kind", None) != "diff":
        raise ValidationError("solve_diff requires a difference-form family")
    vals, q_user, q_int = _oriented(v, q)
    beta_int = solve_beta(csf, vals, q_user, tolerances=tolerances)
    slope = float(csf.z_prime(beta_int, q_int))
    strong = vals.v1 * slope
    weak = vals.v2 * slope
    x1, x2 = _user_order(vals, strong, weak)

    theta = x1 - x2
    v1u, v2u = (vals.v2, vals.v1) if vals.swapped else (vals.v1, vals.v2)
    zp = float(csf.z_prime(theta, q_user))
    r1 = v1u * zp - x1
    r2 = v2u * zp - x2

    warnings = () if audited else (UNCHECKED_ASSUMPTIONS_WARNING,)
    return Equilibrium(
        x1=x1, x2=x2, beta=theta, method=SolveMethod.ROOT_FIND,
        residuals=(r1, r2), corner_flags=(False, False), warnings=warnings,
    )


def _concave_marginal(csf, prize: float, own_q: float, own: float, other: float) -> float:
    """Payoff slope in own effort for a concave-impact contest, linear cost.

    At zero own effort the slope is the one-sided limit: -1 when winning adds
    nothing (rival impact + 1 - own tie share is zero), +inf for exponents
    below one, and the finite linear-impact expression otherwise.
    """
    press = float(csf.impact(other)) + 1.0 - own_q
    if press <= 0.0:
        return -1.0
    if own > 0.0:
        return prize * float(csf.win_prob_d1(own, other, own_q)) - 1.0
    if csf.r < 1.0:
        return math.inf
    total = float(csf.impact(other)) + 1.0
    return prize * press / (total * total) - 1.0


def _concave_best_response(csf, prize: float, own_q: float, other: float,
                           tolerances: Tolerances) -> float:
    """Best response in a concave-impact contest against a fixed rival effort.

    The payoff is strictly concave in own effort wherever the win-probability
    pressure (rival impact + 1 - own tie share) is positive, so the response
    is the unique root of the payoff slope, or zero when the slope is already
    nonpositive at the origin.
    """
    f_other = float(csf.impact(other))
    press = f_other + 1.0 - own_q
    if press <= 0.0:
        return 0.0
    r = csf.r
    if r == 1.0:
        return max(0.0, math.sqrt(prize * press) - (f_other + 1.0))

    def slope(x: float) -> float:
        fp = r * x ** (r - 1.0)
        total = x**r + f_other + 1.0
        return prize * fp * press / (total * total) - 1.0

    lo = 1e-12
    if slope(lo) <= 0.0:
        return 0.0
    hi = max(1.0, math.sqrt(prize * press))
    for _ in range(tolerances.bracket_expansions):
        if slope(hi) < 0.0:
            break
        hi *= 2.0
    else:
        raise ConvergenceError("could not bracket the concave best response")
    return float(brentq(slope, lo, hi, xtol=1e-14, rtol=_BRENTQ_RTOL))


def _concave_scan_restart(csf, v1: float, v2: float, q_int: float) -> tuple[float, float]:
    """Coarse two-dimensional scan for a restart point near mutual optimality."""
    cap = max(v1, v2, 1.0)
    axis = np.linspace(0.0, cap, 201)
    f = csf.impact(axis)
    f1 = f[:, None]
    f2 = f[None, :]
    total = f1 + f2 + 1.0
    pay1 = v1 * (f1 + q_int) / total - axis[:, None]
    pay2 = v2 * (f2 + (1.0 - q_int)) / total - axis[None, :]
    loss1 = np.max(pay1, axis=0, keepdims=True) - pay1
    loss2 = np.max(pay2, axis=1, keepdims=True) - pay2
    worst = np.maximum(loss1, loss2)
    i, j = np.unravel_index(int(np.argmin(worst)), worst.shape)
    return float(axis[i]), float(axis[j])


def _concave_residuals(csf, v1: float, v2: float, q_int: float,
                       x1: float, x2: float) -> tuple[float, float]:
    r1 = _concave_marginal(csf, v1, q_int, x1, x2)
    r2 = _concave_marginal(csf, v2, 1.0 - q_int, x2, x1)
    return r1, r2


def _concave_iterate(csf, v1: float, v2: float, q_int: float,
                     start: tuple[float, float],
                     tolerances: Tolerances) -> tuple[float, float]:
    """Damped best-response iteration; returns a profile meeting the residual target."""

    def settled(x1: float, x2: float) -> bool:
        r1, r2 = _concave_residuals(csf, v1, v2, q_int, x1, x2)
        tol = tolerances.iterative_residual
        ok1 = abs(r1) <= tol if x1 > 0.0 else r1 <= tol
        ok2 = abs(r2) <= tol if x2 > 0.0 else r2 <= tol
        return ok1 and ok2

    x1, x2 = start
    budget = tolerances.max_iterations
    restarted = False
    it = 0
    while it < budget:
        it += 1
        b1 = _concave_best_response(csf, v1, q_int, x2, tolerances)
        b2 = _concave_best_response(csf, v2, 1.0 - q_int, x1, tolerances)
        x1 = 0.5 * (x1 + b1)
        x2 = 0.5 * (x2 + b2)
        if settled(x1, x2):
            return x1, x2
        if it == budget and not restarted:
            x1, x2 = _concave_scan_restart(csf, v1, v2, q_int)
            restarted = True
            it = 0
    r1, r2 = _concave_residuals(csf, v1, v2, q_int, x1, x2)
    raise ConvergenceError(
        f"best-response iteration did not reach residual "
        f"{tolerances.iterative_residual:.1e} within {tolerances.max_iterations} "
        f"iterations; last iterate ({x1}, {x2}) with residuals ({r1:.3e}, {r2:.3e})"
    )


def solve_concave(csf, v, q, *, audited: bool = False,
                  tolerances: Tolerances = DEFAULT_TOLERANCES) -> Equilibrium:
    """Equilibrium of a concave-impact contest with linear cost.

    Linear impact admits a closed form: the classic lottery efforts shifted
    down by each player's own tie share.  When that shift drives an effort
    negative the profile is clamped to the axis, re-equilibrated by damped
    analytic best responses, and accepted only if the result is a mutual
    best response (otherwise `NoEquilibriumError`).  Concave impact with
    exponent below one is solved by damped best-response iteration from the
    symmetric lottery benchmark, with a coarse grid scan as a restart
    fallback.
    """
    if getattr(csf, "kind", None) != "concave":
        raise ValidationError("solve_concave requires a concave-impact family")
    vals, _, q_int = _oriented(v, q)
    v1, v2 = vals.v1, vals.v2
    warnings: list[str] = [] if audited else [UNCHECKED_ASSUMPTIONS_WARNING]

    if csf.r == 1.0:
        scale = v1 * v2 / (v1 + v2) ** 2
        strong = v1 * scale - q_int
        weak = v2 * scale - (1.0 - q_int)
        if strong >= 0.0 and weak >= 0.0:
            x1i, x2i = strong, weak
            method = SolveMethod.CLOSED_FORM
        else:
            x1i, x2i = max(strong, 0.0), max(weak, 0.0)
            for _ in range(tolerances.max_iterations):
                b1 = _concave_best_response(csf, v1, q_int, x2i, tolerances)
                b2 = _concave_best_response(csf, v2, 1.0 - q_int, x1i, tolerances)
                if max(abs(x1i - b1), abs(x2i - b2)) <= 1e-13 * (1.0 + x1i + x2i):
                    break
                x1i = 0.5 * (x1i + b1)
                x2i = 0.5 * (x2i + b2)
            b1 = _concave_best_response(csf, v1, q_int, x2i, tolerances)
            b2 = _concave_best_response(csf, v2, 1.0 - q_int, x1i, tolerances)
            if max(abs(x1i - b1), abs(x2i - b2)) > tolerances.iterative_residual:
                raise NoEquilibriumError(
                    "the axis-clamped profile is not a mutual best response; "
                    f"no pure equilibrium found (last iterate ({x1i}, {x2i}))"
                )
            x1i, x2i = b1, b2
            method = SolveMethod.FOC_SOLVE
            warnings.append(CORNER_UNIQUENESS_WARNING)
    else:
        x1i, x2i = _concave_iterate(
            csf, v1, v2, q_int, (v1 / 4.0, v2 / 4.0), tolerances
        )
        method = SolveMethod.FOC_SOLVE

    r1i, r2i = _concave_residuals(csf, v1, v2, q_int, x1i, x2i)
    flags_int = (x1i == 0.0, x2i == 0.0)

    if vals.swapped:
        x1, x2 = x2i, x1i
        residuals = (r2i, r1i)
        corner_flags = (flags_int[1], flags_int[0])
    else:
        x1, x2 = x1i, x2i
        residuals = (r1i, r2i)
        corner_flags = flags_int

    return Equilibrium(
        x1=x1, x2=x2, beta=None, method=method,
        residuals=residuals, corner_flags=corner_flags, warnings=tuple(warnings),
    )


_EXPECTED_COST: dict[str, CostKind] = {
    "ratio": CostKind.LINEAR,
    "diff": CostKind.QUADRATIC_HALF,
    "concave": CostKind.LINEAR,
}


def solve(spec: ContestSpec, *, force: bool = False, audited: bool = False,
          tolerances: Tolerances = DEFAULT_TOLERANCES) -> Equilibrium:
    """Dispatch a contest to the solver for its family class.

    Validates that the cost technology matches the one the family's theory
    is stated under (linear for ratio and concave classes, half-quadratic
    for the difference class); other pairings have no solver and raise.
    """
    kind = spec.csf.kind
    expected = _EXPECTED_COST.get(kind)
    if expected is None:
        raise ValidationError(f"no solver for family kind {kind!r}")
    if spec.cost is not expected:
        raise ValidationError(
            f"{kind}-form contests are solved under {expected.value!r} cost, "
            f"got {spec.cost.value!r}"
        )
    if kind == "ratio":
        return solve_ratio(spec.csf, (spec.v1, spec.v2), spec.q,
                           force=force, audited=audited, tolerances=tolerances)
    if kind == "diff":
        return solve_diff(spec.csf, (spec.v1, spec.v2), spec.q,
                          audited=audited, tolerances=tolerances)
    return solve_concave(spec.csf, (spec.v1, spec.v2), spec.q,
                         audited=audited, tolerances=tolerances)
