"""Closed-form sharp constants of the entropy-moment inequalities.

The Renyi entropy h_a[u] = log(int u^a) / (1 - a) of a probability
density u on a homogeneous group of dimension Q satisfies

    h_a[u] <= (Q/b) * log(K * int |x|^b u dx)

with an effective constant K = K(a, Q, b, |S|) that this module
evaluates, together with its ingredients: the extremizer normalizations
C1 (a < 1) and C2 (a > 1), the extremizer alpha-norms, and the
extremizer moments.  Everything is assembled in log space because the
Gamma arguments blow up like 1/|1 - a| near a = 1.

Branch assembly
---------------
below_one (0 < a < 1, b > Q(1/a - 1)):
    A = C1^(-1) * (ab / (ab - Q(1-a)))^(1/(1-a))
              * ((ab - Q(1-a)) / (Q(1-a)))^(Q/b)
    K = A^(b/Q)
above_one (a > 1, b > 0):
    K = (ab / (Q(a-1))) * ((ab + Q(a-1)) / ab)^((Q(a-1)+b)/(Q(a-1)))
              * C2^(-b/Q)

The two printed forms of the a > 1 constant disagree (the Gamma ratio
appears in both orientations, and once through an extra b/Q power); the
assembly above is the one under which equality holds exactly at the
extremizer C2 (1 - |x|^b)_+^(1/(a-1)) and under which both branches
converge to the Shannon constant as a -> 1.  The alternative printed
form is reported alongside as ``A_stated`` for reference.

Desk values used as regression anchors throughout the test suite:
K(a=2, b=2, Q=1, |S|=2) = 125/9 and K(a=1/2, b=2, Q=1, |S|=2) = 4 pi^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .special_functions import log_gamma

__all__ = [
    "EntropyParams",
    "ExtremizerIngredients",
    "SharpConstantResult",
    "BRANCH_BELOW_ONE",
    "BRANCH_ABOVE_ONE",
    "c1",
    "c2",
    "phi1_alpha_norm",
    "phi2_alpha_norm",
    "phi1_moment",
    "phi2_moment",
    "sharp_renyi_constant",
    "shannon_constant",
    "log_sobolev_constant",
    "uncertainty_bound",
    "optimal_dilation",
    "dilation_objective",
]

BRANCH_BELOW_ONE = "below_one"
BRANCH_ABOVE_ONE = "above_one"


def _exact(x) -> Fraction | None:
    """Exact rational view of x when it carries one."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return None


@dataclass(frozen=True)
class EntropyParams:
    """Entropy order alpha (> 0, != 1) and moment exponent b (> 0).

    alpha and b may be given as Fraction (or int) to keep the exponent
    arithmetic near alpha = 1 exact; plain floats work everywhere else.
    """

    alpha: float | Fraction
    b: float | Fraction

    def __post_init__(self):
        a, b = float(self.alpha), float(self.b)
        if not math.isfinite(a) or a <= 0 or a == 1.0:
            raise ValueError(f"alpha must be positive and != 1, got {self.alpha}")
        if not math.isfinite(b) or b <= 0:
            raise ValueError(f"b must be positive, got {self.b}")

    @property
    def branch(self) -> str:
        return BRANCH_BELOW_ONE if float(self.alpha) < 1.0 else BRANCH_ABOVE_ONE

    def validate(self, Q) -> None:
        """Enforce the validity condition, strictly (the hypotheses are
        strict; boundary parameter sets are rejected, not clamped)."""
        a, b, q = float(self.alpha), float(self.b), float(Q)
        if q <= 0:
            raise ValueError(f"homogeneous dimension must be positive, got {Q}")
        if a < 1.0:
            ae, be, qe = _exact(self.alpha), _exact(self.b), _exact(Q)
            if ae is not None and be is not None and qe is not None:
                ok = be > qe * (1 / ae - 1)
            else:
                ok = b > q * (1.0 / a - 1.0)
            if not ok:
                raise ValueError(
                    f"alpha={self.alpha}, b={self.b} violates "
                    f"b > Q(1/alpha - 1) = {q * (1.0 / a - 1.0):.6g} for Q={Q}"
                )

    def to_dict(self) -> dict:
        return {"alpha": float(self.alpha), "b": float(self.b)}


@dataclass(frozen=True)
class ExtremizerIngredients:
    """Closed-form ingredients of the branch extremizer."""

    c: float            # normalization constant (C1 or C2)
    alpha_norm: float   # int phi^alpha
    moment: float       # int |x|^b phi


@dataclass(frozen=True)
class SharpConstantResult:
    """Effective constant K with branch metadata and its ingredients.

    The inequality right-hand side is (Q/b) * log(K * moment).
    ``A_stated`` preserves the alternative printed form of the constant
    for reference; for the below_one branch it coincides with K^(Q/b).
    """

    K: float
    A_stated: float
    branch: str
    ingredients: ExtremizerIngredients


def _require_sphere(sphere: float) -> float:
    sphere = float(sphere)
    if not math.isfinite(sphere) or sphere <= 0:
        raise ValueError(f"sphere measure must be positive, got {sphere}")
    return sphere


def c1(params: EntropyParams, Q, sphere: float) -> float:
    """Normalization of the fat-tailed extremizer C1 (1 + |x|^b)^(1/(a-1)).

    C1 = (b/|S|) Gamma(1/(1-a)) / [Gamma(1/(1-a) - Q/b) Gamma(Q/b)].
    """
    if params.branch != BRANCH_BELOW_ONE:
        raise ValueError("c1 is defined for alpha < 1")
    params.validate(Q)
    sphere = _require_sphere(sphere)
    a, b, q = float(params.alpha), float(params.b), float(Q)
    g = 1.0 / (1.0 - a)
    return (b / sphere) * math.exp(
        log_gamma(g) - log_gamma(g - q / b) - log_gamma(q / b)
    )


def c2(params: EntropyParams, Q, sphere: float) -> float:
    """Normalization of the compact extremizer C2 (1 - |x|^b)_+^(1/(a-1)).

    C2 = (b/|S|) Gamma(a/(a-1) + Q/b) / [Gamma(a/(a-1)) Gamma(Q/b)].
    """
    if params.branch != BRANCH_ABOVE_ONE:
        raise ValueError("c2 is defined for alpha > 1")
    params.validate(Q)
    sphere = _require_sphere(sphere)
    a, b, q = float(params.alpha), float(params.b), float(Q)
    c = a / (a - 1.0)
    return (b / sphere) * math.exp(
        log_gamma(c + q / b) - log_gamma(c) - log_gamma(q / b)
    )


def phi1_alpha_norm(params: EntropyParams, Q, sphere: float) -> float:
    """int phi1^alpha = C1^(alpha-1) * ab / (ab - Q(1-a))."""
    cval = c1(params, Q, sphere)
    a, b, q = float(params.alpha), float(params.b), float(Q)
    return math.exp((a - 1.0) * math.log(cval)) * a * b / (a * b - q * (1.0 - a))


def phi2_alpha_norm(params: EntropyParams, Q, sphere: float) -> float:
    """int phi2^alpha = C2^(alpha-1) * ab / (ab + Q(a-1))."""
    cval = c2(params, Q, sphere)
    a, b, q = float(params.alpha), float(params.b), float(Q)
    return math.exp((a - 1.0) * math.log(cval)) * a * b / (a * b + q * (a - 1.0))


def phi1_moment(params: EntropyParams, Q) -> float:
    """int |x|^b phi1 = Q(1-a) / (ab - Q(1-a)); independent of |S|."""
    if params.branch != BRANCH_BELOW_ONE:
        raise ValueError("phi1_moment is defined for alpha < 1")
    params.validate(Q)
    ae, be, qe = _exact(params.alpha), _exact(params.b), _exact(Q)
    if ae is not None and be is not None and qe is not None:
        return float(qe * (1 - ae) / (ae * be - qe * (1 - ae)))
    a, b, q = float(params.alpha), float(params.b), float(Q)
    return q * (1.0 - a) / (a * b - q * (1.0 - a))


def phi2_moment(params: EntropyParams, Q) -> float:
    """int |x|^b phi2 = Q(a-1) / (ab + Q(a-1)).

    Follows from the same Beta-function reduction as the phi2 mass
    (checked against quadrature in the test suite); also independent
    of |S|.
    """
    if params.branch != BRANCH_ABOVE_ONE:
        raise ValueError("phi2_moment is defined for alpha > 1")
    ae, be, qe = _exact(params.alpha), _exact(params.b), _exact(Q)
    if ae is not None and be is not None and qe is not None:
        return float(qe * (ae - 1) / (ae * be + qe * (ae - 1)))
    a, b, q = float(params.alpha), float(params.b), float(Q)
    return q * (a - 1.0) / (a * b + q * (a - 1.0))


def _ratio(num, den, fallback_num: float, fallback_den: float) -> float:
    """Exact ratio when both sides carry Fractions, float otherwise."""
    if num is not None and den is not None:
        return float(num / den)
    return fallback_num / fallback_den


def sharp_renyi_constant(params: EntropyParams, Q, sphere: float) -> SharpConstantResult:
    """Effective constant K with ingredients; equality holds at the
    branch extremizer: h_a[phi] = (Q/b) log(K * moment(phi))."""
    params.validate(Q)
    sphere = _require_sphere(sphere)
    a, b, q = float(params.alpha), float(params.b), float(Q)
    ae, be, qe = _exact(params.alpha), _exact(params.b), _exact(Q)
    exact = ae is not None and be is not None and qe is not None

    if params.branch == BRANCH_BELOW_ONE:
        cval = c1(params, Q, sphere)
        ab = a * b
        q1a = q * (1.0 - a)
        inv_1ma = _ratio(
            Fraction(1) / (1 - ae) if exact else None, Fraction(1),
            1.0 / (1.0 - a), 1.0,
        )
        q_over_b = _ratio(qe if exact else None, be if exact else None, q, b)
        # log(ab / (ab - Q(1-a))) = -log1p(-Q(1-a)/(ab))
        log_A = (
            -math.log(cval)
            - inv_1ma * math.log1p(-q1a / ab)
            + q_over_b * math.log((ab - q1a) / q1a)
        )
        b_over_q = _ratio(be if exact else None, qe if exact else None, b, q)
        K = math.exp(b_over_q * log_A)
        A_stated = math.exp(log_A)
        ingredients = ExtremizerIngredients(
            c=cval,
            alpha_norm=phi1_alpha_norm(params, Q, sphere),
            moment=phi1_moment(params, Q),
        )
    else:
        cval = c2(params, Q, sphere)
        ab = a * b
        qa1 = q * (a - 1.0)
        if exact:
            expo = float((qe * (ae - 1) + be) / (qe * (ae - 1)))
        else:
            expo = (qa1 + b) / qa1
        b_over_q = _ratio(be if exact else None, qe if exact else None, b, q)
        log_K = (
            math.log(ab / qa1)
            + expo * math.log1p(qa1 / ab)
            - b_over_q * math.log(cval)
        )
        K = math.exp(log_K)
        # printed form: Gamma ratio in the opposite orientation, i.e.
        # ((b/|S|) Gamma(Q/b) Gamma(a/(a-1)) / Gamma(a/(a-1) + Q/b))^(-b/Q)
        cc = a / (a - 1.0)
        log_ratio_stated = (
            math.log(b / sphere)
            + log_gamma(q / b)
            + log_gamma(cc)
            - log_gamma(cc + q / b)
        )
        A_stated = math.exp(
            math.log(ab / qa1)
            + expo * math.log1p(qa1 / ab)
            - b_over_q * log_ratio_stated
        )
        ingredients = ExtremizerIngredients(
            c=cval,
            alpha_norm=phi2_alpha_norm(params, Q, sphere),
            moment=phi2_moment(params, Q),
        )

    return SharpConstantResult(
        K=K, A_stated=A_stated, branch=params.branch, ingredients=ingredients
    )


def shannon_constant(Q, sphere: float) -> float:
    """Best constant in the Shannon inequality on the group:

    C = (2e/Q) * (|S| Gamma(Q/2) / 2)^(2/Q); equals 2 e pi / n on R^n.
    """
    sphere = _require_sphere(sphere)
    q = float(Q)
    if q <= 0:
        raise ValueError(f"homogeneous dimension must be positive, got {Q}")
    return (2.0 * math.e / q) * math.exp(
        (2.0 / q) * (math.log(sphere / 2.0) + log_gamma(q / 2.0))
    )


def log_sobolev_constant(kind: str, n: int | None = None, value: float | None = None) -> float:
    """The log-Sobolev constant A of int f^2 log f <= (Q/4) log(A int |grad_H f|^2).

    Two groups carry printed optimal values:
      * heisenberg_n: A = (n!)^(1/(n+1)) / (pi n^2)
      * euclidean_n:  A = (pi n^2 - 2 pi n)^(-1/2) Gamma(n) / Gamma(n/2),
        degenerate for n <= 2 (the square root turns non-real) and
        rejected there; pass kind="custom" with your own value instead.
    """
    if kind == "heisenberg_n":
        if n is None or n < 1:
            raise ValueError(f"heisenberg_n needs n >= 1, got {n}")
        return math.exp(log_gamma(n + 1.0) / (n + 1.0)) / (math.pi * n * n)
    if kind == "euclidean_n":
        if n is None or n < 1:
            raise ValueError(f"euclidean_n needs n >= 1, got {n}")
        disc = math.pi * n * n - 2.0 * math.pi * n
        if disc <= 0.0:
            raise ValueError(
                f"the printed euclidean log-Sobolev constant degenerates for "
                f"n={n} (pi n^2 - 2 pi n = {disc:.6g} <= 0); supply a custom "
                f"value instead"
            )
        return disc**-0.5 * math.exp(log_gamma(float(n)) - log_gamma(n / 2.0))
    if kind == "custom":
        if value is None or value <= 0:
            raise ValueError(f"custom log-Sobolev constant must be positive, got {value}")
        return float(value)
    raise ValueError(f"unknown log-Sobolev constant kind {kind!r}")


def uncertainty_bound(Q, sphere: float, A: float) -> float:
    """Lower bound 4 / (C * A) for the moment-Fisher product, where C is
    the Shannon constant of the group and A its log-Sobolev constant."""
    if A <= 0:
        raise ValueError(f"log-Sobolev constant must be positive, got {A}")
    return 4.0 / (shannon_constant(Q, sphere) * A)


def optimal_dilation(
    params: EntropyParams,
    Q,
    moment: float,
    *,
    c: float | None = None,
    extremizer_alpha_norm: float | None = None,
    u_alpha_norm: float | None = None,
) -> float:
    """Optimal dilation parameter of the proof's scaling argument.

    below_one:  lam* = (((ab - Q(1-a)) / (Q(1-a))) * M)^(1/b), with M
    the b-moment of the density being tested.

    above_one:  lam** = (b a C2^(a-1) M / (phi2norm^((a-1)/a) Q(a-1)
    unorm^(1/a)))^(a/(ba + Q(a-1))) where phi2norm and unorm are the
    raw alpha-integrals int phi2^a and int u^a (pass them via the
    keyword arguments together with C2).
    """
    params.validate(Q)
    if moment <= 0:
        raise ValueError(f"moment must be positive, got {moment}")
    a, b, q = float(params.alpha), float(params.b), float(Q)
    if params.branch == BRANCH_BELOW_ONE:
        q1a = q * (1.0 - a)
        return (((a * b - q1a) / q1a) * moment) ** (1.0 / b)
    if c is None or extremizer_alpha_norm is None or u_alpha_norm is None:
        raise ValueError(
            "above_one dilation needs c (C2), extremizer_alpha_norm "
            "(int phi2^alpha) and u_alpha_norm (int u^alpha)"
        )
    qa1 = q * (a - 1.0)
    log_lam = (a / (a * b + qa1)) * (
        math.log(a * b)
        + (a - 1.0) * math.log(c)
        + math.log(moment)
        - ((a - 1.0) / a) * math.log(extremizer_alpha_norm)
        - math.log(qa1)
        - (1.0 / a) * math.log(u_alpha_norm)
    )
    return math.exp(log_lam)


def dilation_objective(
    params: EntropyParams,
    Q,
    moment: float,
    lam: float,
    *,
    c: float | None = None,
    extremizer_alpha_norm: float | None = None,
    u_alpha_norm: float | None = None,
) -> float:
    """The scalar function the optimal dilation minimises.

    below_one: M(lam) = lam^(Q(1/a - 1)) + lam^(Q(1/a - 1) - b) * M.
    above_one: N(lam) = lam^(-b) C2^(a-1) M
                        + lam^(Q(1 - 1/a)) phi2norm^((a-1)/a) unorm^(1/a).
    """
    params.validate(Q)
    if lam <= 0:
        raise ValueError(f"dilation parameter must be positive, got {lam}")
    a, b, q = float(params.alpha), float(params.b), float(Q)
    if params.branch == BRANCH_BELOW_ONE:
        e = q * (1.0 / a - 1.0)
        return lam**e + lam ** (e - b) * moment
    if c is None or extremizer_alpha_norm is None or u_alpha_norm is None:
        raise ValueError(
            "above_one objective needs c, extremizer_alpha_norm and u_alpha_norm"
        )
    return lam ** (-b) * c ** (a - 1.0) * moment + lam ** (
        q * (1.0 - 1.0 / a)
    ) * extremizer_alpha_norm ** ((a - 1.0) / a) * u_alpha_norm ** (1.0 / a)
