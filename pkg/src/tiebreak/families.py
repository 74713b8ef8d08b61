"""Contest success function families with ties.

Ratio-form and difference-form families reduce the outcome distribution to
one-dimensional functions of theta (the effort ratio x1/x2, respectively the
effort difference x1 - x2):

    p(theta)    probability that player 1 wins outright,
    p0(theta)   tie probability, symmetric under relabeling:
                p0(theta) = p0(1/theta) (ratio) or p0(-theta) (difference),
    z_q(theta)  = p(theta) + q * p0(theta), player 1's eventual win probability
                under the tie rule q.

Built-in families (registry keys):

    vesperoni-ratio   p = theta^(r k) / (1 + theta^r)^k              r > 0, k >= 1
    jia-ratio         p = theta^r / (theta^r + k)                    r > 0, k >= 1
    vesperoni-diff    p = e^(k theta) / (1 + e^theta)^k              k >= 1
    jia-diff          p = e^theta / (k + e^theta)                    k >= 1
    blavatskyy-power  p_i = x_i^r / (x1^r + x2^r + 1)                0 < r <= 1

First and second derivatives of z_q are analytic: root finding and audits need
smooth, noise-free evaluations, so finite differences appear only in the test
suite as an oracle.  Because z_q is affine in q, the tie-probability
derivatives follow exactly: p0' = z_1' - z_0' and likewise for p0''.

Evaluations are numerically stabilized.  Difference-form families touch
exponentials only through e^(-|theta|) and logistic ratios, so theta up to
+/-500 stays finite; ratio-form families work through u = theta^r/(1+theta^r)
and its complement for the same reason.

All family objects are immutable after construction; every method is pure.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, ClassVar

import numpy as np

from .core import ContestSpec, CostKind, q_value
from .errors import DomainError, ValidationError


def _check_param(name: str, value, low: float, low_inclusive: bool, high: float | None,
                 family: str) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{family}: parameter {name!r} must be a number, got {value!r}") from exc
    if not np.isfinite(out):
        raise ValidationError(f"{family}: parameter {name!r} must be finite")
    ok_low = out >= low if low_inclusive else out > low
    if not ok_low or (high is not None and out > high):
        bound = f">= {low}" if low_inclusive else f"> {low}"
        if high is not None:
            bound += f" and <= {high}"
        raise ValidationError(f"{family}: parameter {name!r} must be {bound}, got {out}")
    return out


def _as_array(x, name: str, *, positive: bool = False, nonnegative: bool = False):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if positive and np.any(arr <= 0.0):
        raise DomainError(f"{name} must be > 0")
    if nonnegative and np.any(arr < 0.0):
        raise DomainError(f"{name} must be >= 0")
    return arr


def _ret(value, *inputs):
    """Collapse a 0-d result back to a builtin float for scalar inputs."""
    if all(np.ndim(i) == 0 for i in inputs):
        return float(value)
    return value


def _logistic_share(theta, k: float):
    """e^theta / (k + e^theta), computed through e^(-|theta|) only."""
    t = np.asarray(theta, dtype=float)
    a = np.exp(-np.abs(t))
    with np.errstate(over="ignore"):
        pos = 1.0 / (1.0 + k * a)
        neg = a / (k + a)
    return np.where(t >= 0, pos, neg)


class _ReducedCsf:
    """Shared behavior of families that reduce to a scalar contest state theta."""

    kind: ClassVar[str]
    name: ClassVar[str]

    # subclasses: _triple(theta) -> (p(theta), p(mirror theta), p0(theta))
    # with mirror = 1/theta (ratio) or -theta (difference), all mutually consistent.

    def _theta(self, theta):
        raise NotImplementedError

    def p(self, theta):
        th = self._theta(theta)
        return _ret(self._triple(th)[0], theta)

    def p0(self, theta):
        th = self._theta(theta)
        return _ret(self._triple(th)[2], theta)

    def z(self, theta, q) -> float:
        """Eventual win probability of player 1: p(theta) + q * p0(theta)."""
        qv = q_value(q)
        th = self._theta(theta)
        win, _, tie = self._triple(th)
        return _ret(win + qv * tie, theta)

    def p0_prime(self, theta):
        """d p0 / d theta, exact via affinity of z_q in q."""
        return _ret(
            np.asarray(self.z_prime(theta, 1.0)) - np.asarray(self.z_prime(theta, 0.0)),
            theta,
        )

    def p0_double_prime(self, theta):
        """d^2 p0 / d theta^2, exact via affinity of z_q in q."""
        return _ret(
            np.asarray(self.z_double_prime(theta, 1.0))
            - np.asarray(self.z_double_prime(theta, 0.0)),
            theta,
        )

    @property
    def lemma_precondition_ok(self) -> bool:
        return True

    @property
    def lemma_precondition(self) -> str:
        return "none"


class RatioCsf(_ReducedCsf):
    """Base class of families driven by the effort ratio theta = x1 / x2.

    Convention at zero efforts: a lone positive effort wins outright; the
    all-zero profile (0, 0) is scored at theta = 1, i.e. as a symmetric
    contest.
    """

    kind: ClassVar[str] = "ratio"

    def _theta(self, theta):
        return _as_array(theta, "theta", positive=True)

    def outcome(self, x1, x2):
        x1a = _as_array(x1, "x1", nonnegative=True)
        x2a = _as_array(x2, "x2", nonnegative=True)
        x1a, x2a = np.broadcast_arrays(x1a, x2a)
        interior = (x1a > 0) & (x2a > 0)
        theta = np.where(interior, x1a, 1.0) / np.where(interior, x2a, 1.0)
        win1, win2, tie = self._triple(theta)
        only1 = (x1a > 0) & (x2a == 0)
        only2 = (x1a == 0) & (x2a > 0)
        win1 = np.where(only1, 1.0, np.where(only2, 0.0, win1))
        win2 = np.where(only1, 0.0, np.where(only2, 1.0, win2))
        tie = np.where(only1 | only2, 0.0, tie)
        return (_ret(win1, x1, x2), _ret(win2, x1, x2), _ret(tie, x1, x2))


class DiffCsf(_ReducedCsf):
    """Base class of families driven by the effort difference theta = x1 - x2."""

    kind: ClassVar[str] = "diff"

    def _theta(self, theta):
        return _as_array(theta, "theta")

    def outcome(self, x1, x2):
        x1a = _as_array(x1, "x1", nonnegative=True)
        x2a = _as_array(x2, "x2", nonnegative=True)
        win1, win2, tie = self._triple(x1a - x2a)
        return (_ret(win1, x1, x2), _ret(win2, x1, x2), _ret(tie, x1, x2))


@dataclass(frozen=True)
class VesperoniRatio(RatioCsf):
    """Ratio-form family p = theta^(r k) / (1 + theta^r)^k.

    With u = theta^r / (1 + theta^r) and ub = 1 - u:

        p = u^k,   p(1/theta) = ub^k,   p0 = 1 - u^k - ub^k,
        z_q'  = (k r / theta)   * ((1-q) u^k ub + q u ub^k),
        z_q'' = (k r / theta^2) * ((1-q) u^k ub ((r k - 1) ub - (1 + r) u)
                                   + q u ub^k ((r - 1) ub - (1 + k r) u)).

    k = 1 collapses to a tie-free power contest.  The closed-form equilibrium
    requires r * k <= 1 (see `lemma_precondition`).
    """

    r: float
    k: float

    name: ClassVar[str] = "vesperoni-ratio"

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", _check_param("r", self.r, 0.0, False, None, self.name))
        object.__setattr__(self, "k", _check_param("k", self.k, 1.0, True, None, self.name))

    @property
    def params(self) -> dict:
        return {"r": self.r, "k": self.k}

    @property
    def lemma_precondition_ok(self) -> bool:
        return self.r * self.k <= 1.0

    @property
    def lemma_precondition(self) -> str:
        return "r * k <= 1"

    def _shares(self, th):
        t = np.power(th, self.r)
        return t / (1.0 + t), 1.0 / (1.0 + t)

    def _triple(self, th):
        u, ub = self._shares(th)
        pk = u**self.k
        pm = ub**self.k
        return pk, pm, 1.0 - pk - pm

    def z_prime(self, theta, q):
        qv = q_value(q)
        th = self._theta(theta)
        u, ub = self._shares(th)
        k, r = self.k, self.r
        val = (k * r / th) * ((1.0 - qv) * u**k * ub + qv * u * ub**k)
        return _ret(val, theta)

    def z_double_prime(self, theta, q):
        qv = q_value(q)
        th = self._theta(theta)
        u, ub = self._shares(th)
        k, r = self.k, self.r
        lead = (1.0 - qv) * u**k * ub * ((r * k - 1.0) * ub - (1.0 + r) * u)
        trail = qv * u * ub**k * ((r - 1.0) * ub - (1.0 + k * r) * u)
        return _ret((k * r / th**2) * (lead + trail), theta)


@dataclass(frozen=True)
class JiaRatio(RatioCsf):
    """Ratio-form family p = theta^r / (theta^r + k).

    With u = theta^r / (theta^r + k) and w = 1 / (1 + k theta^r):

        p = u,   p(1/theta) = w,   p0 = 1 - u - w,
        z_q'  = (r / theta)   * ((1-q) u (1-u) + q w (1-w)),
        z_q'' = -(r / theta^2) * ((1-q) u (1-u) (2 r u + 1 - r)
                                  + q w (1-w) (2 r (1-w) + 1 - r)).

    k = 1 collapses to the classic lottery contest (p0 = 0).  The closed-form
    equilibrium requires r <= 1.
    """

    r: float
    k: float

    name: ClassVar[str] = "jia-ratio"

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", _check_param("r", self.r, 0.0, False, None, self.name))
        object.__setattr__(self, "k", _check_param("k", self.k, 1.0, True, None, self.name))

    @property
    def params(self) -> dict:
        return {"r": self.r, "k": self.k}

    @property
    def lemma_precondition_ok(self) -> bool:
        return self.r <= 1.0

    @property
    def lemma_precondition(self) -> str:
        return "r <= 1"

    def _shares(self, th):
        t = np.power(th, self.r)
        return t / (t + self.k), 1.0 / (1.0 + self.k * t)

    def _triple(self, th):
        u, w = self._shares(th)
        return u, w, 1.0 - u - w

    def z_prime(self, theta, q):
        qv = q_value(q)
        th = self._theta(theta)
        u, w = self._shares(th)
        r = self.r
        val = (r / th) * ((1.0 - qv) * u * (1.0 - u) + qv * w * (1.0 - w))
        return _ret(val, theta)

    def z_double_prime(self, theta, q):
        qv = q_value(q)
        th = self._theta(theta)
        u, w = self._shares(th)
        r = self.r
        lead = (1.0 - qv) * u * (1.0 - u) * (2.0 * r * u + 1.0 - r)
        trail = qv * w * (1.0 - w) * (2.0 * r * (1.0 - w) + 1.0 - r)
        return _ret(-(r / th**2) * (lead + trail), theta)


@dataclass(frozen=True)
class VesperoniDiff(DiffCsf):
    """Difference-form family p = e^(k theta) / (1 + e^theta)^k.

    With s = logistic(theta) and sb = logistic(-theta):

        p = s^k,   p(-theta) = sb^k,   p0 = 1 - s^k - sb^k,
        z_q'  = k * ((1-q) s^k sb + q s sb^k),
        z_q'' = k * ((1-q) s^k sb (k sb - s) + q s sb^k (sb - k s)).

    k = 1 collapses to the tie-free logit contest.
    """

    k: float

    name: ClassVar[str] = "vesperoni-diff"

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", _check_param("k", self.k, 1.0, True, None, self.name))

    @property
    def params(self) -> dict:
        return {"k": self.k}

    def _shares(self, th):
        return _logistic_share(th, 1.0), _logistic_share(-th, 1.0)

    def _triple(self, th):
        s, sb = self._shares(th)
        pk = s**self.k
        pm = sb**self.k
        return pk, pm, 1.0 - pk - pm

    def z_prime(self, theta, q):
        qv = q_value(q)
        th = self._theta(theta)
        s, sb = self._shares(th)
        k = self.k
        return _ret(k * ((1.0 - qv) * s**k * sb + qv * s * sb**k), theta)

    def z_double_prime(self, theta, q):
        qv = q_value(q)
        th = self._theta(theta)
        s, sb = self._shares(th)
        k = self.k
        lead = (1.0 - qv) * s**k * sb * (k * sb - s)
        trail = qv * s * sb**k * (sb - k * s)
        return _ret(k * (lead + trail), theta)


@dataclass(frozen=True)
class JiaDiff(DiffCsf):
    """Difference-form family p = e^theta / (k + e^theta).

    With u = e^theta / (k + e^theta) and w = u(-theta) = 1 / (k e^theta + 1):

        p = u,   p(-theta) = w,   p0 = 1 - u - w,
        z_q'  = (1-q) u (1-u) + q w (1-w),
        z_q'' = (1-q) u (1-u) (1 - 2u) + q w (1-w) (2w - 1).

    k = 1 collapses to the logit contest (p0 = 0, z'' the logistic bump).
    """

    k: float

    name: ClassVar[str] = "jia-diff"

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", _check_param("k", self.k, 1.0, True, None, self.name))

    @property
    def params(self) -> dict:
        return {"k": self.k}

    def _shares(self, th):
        return _logistic_share(th, self.k), _logistic_share(-th, self.k)

    def _triple(self, th):
        u, w = self._shares(th)
        return u, w, 1.0 - u - w

    def z_prime(self, theta, q):
        qv = q_value(q)
        th = self._theta(theta)
        u, w = self._shares(th)
        return _ret((1.0 - qv) * u * (1.0 - u) + qv * w * (1.0 - w), theta)

    def z_double_prime(self, theta, q):
        qv = q_value(q)
        th = self._theta(theta)
        u, w = self._shares(th)
        lead = (1.0 - qv) * u * (1.0 - u) * (1.0 - 2.0 * u)
        trail = qv * w * (1.0 - w) * (2.0 * w - 1.0)
        return _ret(lead + trail, theta)


@dataclass(frozen=True)
class BlavatskyyPower(object):
    """Concave-impact family p_i = x_i^r / (x1^r + x2^r + 1), 0 < r <= 1.

    The residual 1 / (x1^r + x2^r + 1) is the tie probability.  Folding the
    tie rule into impacts, player i eventually wins with probability
    g_i / (g1 + g2) where g1 = x1^r + q and g2 = x2^r + (1 - q), so the tie
    rule acts as a head start on the same scale as the "+1" in the
    denominator.  No scalar reduction exists here; derivative accessors are
    partial derivatives in own effort.
    """

    r: float

    name: ClassVar[str] = "blavatskyy-power"
    kind: ClassVar[str] = "concave"

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", _check_param("r", self.r, 0.0, False, 1.0, self.name))

    @property
    def params(self) -> dict:
        return {"r": self.r}

    @property
    def lemma_precondition_ok(self) -> bool:
        # impact x^r is strictly increasing and concave by construction
        return True

    @property
    def lemma_precondition(self) -> str:
        return "0 < r <= 1 (enforced at construction)"

    def impact(self, x):
        return np.power(_as_array(x, "x", nonnegative=True), self.r)

    def impact_prime(self, x):
        xa = _as_array(x, "x", positive=True)
        return self.r * np.power(xa, self.r - 1.0)

    def impact_double_prime(self, x):
        xa = _as_array(x, "x", positive=True)
        return self.r * (self.r - 1.0) * np.power(xa, self.r - 2.0)

    def outcome(self, x1, x2):
        f1 = self.impact(x1)
        f2 = self.impact(x2)
        total = f1 + f2 + 1.0
        return (_ret(f1 / total, x1, x2), _ret(f2 / total, x1, x2), _ret(1.0 / total, x1, x2))

    def win_prob(self, x1, x2, q):
        """Eventual win probability of player 1: (x1^r + q) / (x1^r + x2^r + 1)."""
        qv = q_value(q)
        f1 = self.impact(x1)
        f2 = self.impact(x2)
        return _ret((f1 + qv) / (f1 + f2 + 1.0), x1, x2)

    def win_prob_d1(self, x1, x2, q):
        """d/dx1 of the eventual win probability of player 1."""
        qv = q_value(q)
        f1 = self.impact(x1)
        f2 = self.impact(x2)
        total = f1 + f2 + 1.0
        return _ret(self.impact_prime(x1) * (f2 + 1.0 - qv) / total**2, x1, x2)

    def win_prob_d11(self, x1, x2, q):
        """Second own-effort derivative of player 1's eventual win probability."""
        qv = q_value(q)
        f1 = self.impact(x1)
        f2 = self.impact(x2)
        total = f1 + f2 + 1.0
        fp = self.impact_prime(x1)
        fpp = self.impact_double_prime(x1)
        return _ret((f2 + 1.0 - qv) * (fpp * total - 2.0 * fp * fp) / total**3, x1, x2)

    def tie_prob_d1(self, x1, x2):
        """d/dx1 of the tie probability."""
        f1 = self.impact(x1)
        f2 = self.impact(x2)
        total = f1 + f2 + 1.0
        return _ret(-self.impact_prime(x1) / total**2, x1, x2)

    def tie_prob_d11(self, x1, x2):
        """Second own-effort derivative of the tie probability."""
        f1 = self.impact(x1)
        f2 = self.impact(x2)
        total = f1 + f2 + 1.0
        fp = self.impact_prime(x1)
        fpp = self.impact_double_prime(x1)
        return _ret((2.0 * fp * fp - fpp * total) / total**3, x1, x2)


FAMILIES: dict[str, type] = {
    VesperoniRatio.name: VesperoniRatio,
    JiaRatio.name: JiaRatio,
    VesperoniDiff.name: VesperoniDiff,
    JiaDiff.name: JiaDiff,
    BlavatskyyPower.name: BlavatskyyPower,
}

_FAMILY_PARAMS: dict[str, tuple[str, ...]] = {
    "vesperoni-ratio": ("r", "k"),
    "jia-ratio": ("r", "k"),
    "vesperoni-diff": ("k",),
    "jia-diff": ("k",),
    "blavatskyy-power": ("r",),
}

_PARAM_CONSTRAINTS: dict[str, str] = {
    "vesperoni-ratio": "r > 0, k >= 1 (closed form needs r*k <= 1)",
    "jia-ratio": "r > 0, k >= 1 (closed form needs r <= 1)",
    "vesperoni-diff": "k >= 1",
    "jia-diff": "k >= 1",
    "blavatskyy-power": "0 < r <= 1",
}

DEFAULT_COST: dict[str, CostKind] = {
    "ratio": CostKind.LINEAR,
    "diff": CostKind.QUADRATIC_HALF,
    "concave": CostKind.LINEAR,
}


def family_names() -> tuple[str, ...]:
    return tuple(sorted(FAMILIES))


def describe_families() -> str:
    """One line per registered family: key, parameters, constraints."""
    lines = []
    for name in family_names():
        params = ", ".join(_FAMILY_PARAMS[name])
        lines.append(f"  {name:<17} params: {params:<5} constraints: {_PARAM_CONSTRAINTS[name]}")
    return "\n".join(lines)


def make_family(name: str, **params):
    """Instantiate a registered family by key, validating its parameters."""
    if name not in FAMILIES:
        raise ValidationError(
            f"unknown family {name!r}; known families: {', '.join(family_names())}"
        )
    allowed = _FAMILY_PARAMS[name]
    given = {k: v for k, v in params.items() if v is not None}
    for key in given:
        if key not in allowed:
            raise ValidationError(f"family {name!r} takes no parameter {key!r}")
    for key in allowed:
        if key not in given:
            raise ValidationError(f"family {name!r} requires parameter {key!r}")
    return FAMILIES[name](**given)


def default_cost(csf) -> CostKind:
    """The cost technology under which the family's theory is stated."""
    return DEFAULT_COST[csf.kind]


def make_contest(family: str, *, v1, v2, q, cost=None, **params) -> ContestSpec:
    """Build a ContestSpec from plain values, filling the family's default cost."""
    csf = make_family(family, **params)
    kind = CostKind.coerce(cost) if cost is not None else default_cost(csf)
    return ContestSpec(csf=csf, v1=v1, v2=v2, q=q, cost=kind)
