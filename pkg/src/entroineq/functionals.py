"""Entropies, moments, horizontal Fisher information, and the four
inequality gap evaluators.

Every gap report states lhs, rhs and gap = rhs - lhs with the convention
that gap >= 0 means the inequality holds (for the uncertainty principle
lhs is the lower bound and rhs the moment-Fisher product, so gap is
product - bound).  Quadrature error bounds from all contributing
integrals are propagated into ``quad_error``; a report violates its
inequality only when gap < -10 * quad_error.

Numerical conventions: u^alpha is evaluated as exp(alpha * log u) with
0^alpha = 0, and the entropy integrand uses 0 * log 0 = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .densities import DensitySpec, support_box_halfwidths
from .group_geometry import GroupSpec
from .quadrature import (
    BoxSampler,
    IntegralEstimate,
    QuadratureError,
    default_abs_tol,
    integrate_interval,
    integrate_mc,
    integrate_radial,
)
from .sharp_constants import (
    EntropyParams,
    shannon_constant,
    sharp_renyi_constant,
    uncertainty_bound,
)

__all__ = [
    "InequalityReport",
    "renyi_entropy",
    "shannon_entropy",
    "moment",
    "horizontal_fisher",
    "renyi_gap",
    "shannon_gap",
    "logsob_gap",
    "uncertainty_check",
    "stam_gap",
    "is_violation",
    "DEFAULT_MC_SAMPLES",
]

DEFAULT_MC_SAMPLES = 200_000

# Fisher integrand is zeroed below this density floor; the two-pass
# refinement check still flags genuinely divergent integrals.
_DENSITY_FLOOR = 1e-30

_FD_STEP = np.finfo(float).eps ** (1.0 / 3.0)


@dataclass(frozen=True)
class InequalityReport:
    """One verified inequality: sides, gap, and propagated error."""

    inequality: str
    lhs: float
    rhs: float
    gap: float
    params: dict | None
    quad_error: float
    group: dict
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "inequality": self.inequality,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "quad_error": self.quad_error,
            "params": self.params,
            "group": self.group,
        }
        if self.details:
            out["details"] = self.details
        return out


def is_violation(report: InequalityReport) -> bool:
    """True when the gap is negative beyond the propagated error budget."""
    return report.gap < -10.0 * report.quad_error


def _group_ident(u: DensitySpec) -> dict:
    return {
        "weights": [float(w) for w in u.group.weights],
        "norm": u.norm.identifier(),
        "sphere_measure": u.norm.sphere_measure,
    }


def _pow_alpha(values, alpha: float):
    """v^alpha as exp(alpha log v) with the 0^alpha = 0 convention."""
    v = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.exp(alpha * np.log(np.where(v > 0.0, v, 1.0)))
    return np.where(v > 0.0, out, 0.0)


def _plogp(values):
    v = np.asarray(values, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = v * np.log(np.where(v > 0.0, v, 1.0))
    return np.where(v > 0.0, out, 0.0)


def _scalar_integral(u: DensitySpec, transform) -> IntegralEstimate:
    """Integrate transform(u) over the group along the density's
    preferred route (radial quadrature, or interval quadrature on R^1)."""
    if u.radial:
        return integrate_radial(
            lambda r: transform(u.profile(r), r),
            u.group.Q,
            u.norm.sphere_measure,
            support=u.support_radius,
            breakpoints=u.breakpoints,
        )
    if u.support_interval is not None:
        a, b = u.support_interval
        return integrate_interval(
            lambda t: float(transform(u.pdf(np.array([t])), abs(t))), a, b
        )
    raise ValueError(
        f"density kind {u.kind!r} is neither radial nor a 1-D interval density; "
        "no deterministic integration route is available"
    )


def renyi_entropy(u: DensitySpec, alpha: float) -> tuple[float, float]:
    """h_alpha[u] = log(int u^alpha) / (1 - alpha) with propagated error."""
    alpha = float(alpha)
    if alpha <= 0 or alpha == 1.0:
        raise ValueError(f"alpha must be positive and != 1, got {alpha}")
    est = _scalar_integral(u, lambda g, r: _pow_alpha(g, alpha))
    if est.value <= 0:
        raise QuadratureError(f"int u^alpha evaluated to {est.value!r}")
    value = math.log(est.value) / (1.0 - alpha)
    err = est.abs_error / (abs(1.0 - alpha) * est.value)
    return value, err


def shannon_entropy(u: DensitySpec) -> tuple[float, float]:
    """h[u] = -int u log u with the 0 log 0 = 0 convention."""
    est = _scalar_integral(u, lambda g, r: _plogp(g))
    return -est.value, est.abs_error


def moment(u: DensitySpec, b: float) -> tuple[float, float]:
    """int |x|^b u(x) dx."""
    b = float(b)
    if b <= 0:
        raise ValueError(f"moment exponent must be positive, got {b}")
    est = _scalar_integral(u, lambda g, r: np.asarray(g) * np.asarray(r) ** b)
    return est.value, est.abs_error


def _gradient_of(u: DensitySpec):
    """Analytic gradient when available, else central finite differences
    with step (machine eps)^(1/3) * (1 + |x|) on the evaluator."""
    if u.grad is not None:
        return u.grad

    def fd_grad(x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.empty_like(x)
        for j in range(x.shape[1]):
            h = _FD_STEP * (1.0 + np.abs(x[:, j]))
            xp = x.copy()
            xm = x.copy()
            xp[:, j] += h
            xm[:, j] -= h
            out[:, j] = (u.pdf(xp) - u.pdf(xm)) / (2.0 * h)
        return out

    return fd_grad


def _fisher_radial_euclidean(u: DensitySpec) -> tuple[float, float]:
    dprofile = u.profile_derivative

    def integrand(r):
        g = np.asarray(u.profile(r), dtype=float)
        d = np.asarray(dprofile(r), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = d * d / np.where(g > _DENSITY_FLOOR, g, 1.0)
        return np.where(g > _DENSITY_FLOOR, val, 0.0)

    def run(scale):
        return integrate_radial(
            integrand,
            u.group.Q,
            u.norm.sphere_measure,
            support=u.support_radius,
            breakpoints=u.breakpoints,
            abs_tol=default_abs_tol() * scale,
            rel_tol=1e-7 * scale,
        )

    coarse = run(100.0)
    fine = run(1.0)
    if fine.value > 1.01 * coarse.value + 10.0 * coarse.abs_error:
        raise QuadratureError(
            "Fisher integral keeps growing under refinement; it likely "
            "diverges near the support boundary"
        )
    return fine.value, fine.abs_error


def _fisher_interval_1d(u: DensitySpec) -> tuple[float, float]:
    grad = _gradient_of(u)
    a, b = u.support_interval

    def integrand(t):
        x = np.array([[t]])
        g = float(u.pdf(x))
        if g <= _DENSITY_FLOOR:
            return 0.0
        d = float(np.asarray(grad(x)).reshape(-1)[0])
        return d * d / g

    est = integrate_interval(integrand, a, b)
    return est.value, est.abs_error


def _heisenberg_layout(group: GroupSpec) -> int:
    if not group.is_heisenberg_weights():
        raise ValueError(
            f"heisenberg_standard convention needs weights (1,...,1,2), "
            f"got {group.weights}"
        )
    return (group.N - 1) // 2


def _fisher_heisenberg_mc(
    u: DensitySpec, samples: int, seed: int
) -> tuple[float, float]:
    n_pairs = _heisenberg_layout(u.group)
    half = support_box_halfwidths(u)
    if half is None:
        raise ValueError(
            "Monte Carlo Fisher information on a Heisenberg-type group needs "
            "a compactly supported radial density (no sampling box otherwise)"
        )
    grad = _gradient_of(u)

    def integrand(pts):
        g = np.asarray(u.pdf(pts), dtype=float)
        G = np.asarray(grad(pts), dtype=float)
        gt = G[:, -1]
        x = pts[:, :n_pairs]
        y = pts[:, n_pairs : 2 * n_pairs]
        xg = G[:, :n_pairs] - 0.5 * y * gt[:, None]
        yg = G[:, n_pairs : 2 * n_pairs] + 0.5 * x * gt[:, None]
        sq = np.sum(xg * xg, axis=1) + np.sum(yg * yg, axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            val = sq / np.where(g > _DENSITY_FLOOR, g, 1.0)
        return np.where(g > _DENSITY_FLOOR, val, 0.0)

    est = integrate_mc(integrand, BoxSampler(half), samples, seed)
    return est.value, est.abs_error


def horizontal_fisher(
    u: DensitySpec,
    group: GroupSpec | None = None,
    convention: str = "auto",
    *,
    samples: int = DEFAULT_MC_SAMPLES,
    seed: int = 0,
) -> tuple[float, float]:
    """int |grad_H u|^2 / u dx.

    On euclidean groups the horizontal gradient is the full gradient and
    radial densities reduce to a 1-D quadrature; on Heisenberg-type
    groups the fields are X_i = d/dx_i - (y_i/2) d/dt and
    Y_i = d/dy_i + (x_i/2) d/dt (the "heisenberg_standard" convention,
    matching the factor 16 in the Koranyi norm) and the integral is
    seeded Monte Carlo over the support box.
    """
    if group is not None and group.weights != u.group.weights:
        raise ValueError("group argument disagrees with the density's group")
    grp = u.group

    if convention == "auto":
        convention = (
            "euclidean" if grp.is_euclidean_weights() else "heisenberg_standard"
        )

    if convention == "euclidean":
        if not grp.is_euclidean_weights():
            raise ValueError("euclidean convention needs all weights 1")
        if u.radial:
            if u.profile_derivative is None:
                raise ValueError(
                    f"density kind {u.kind!r} has no profile derivative; its "
                    "Fisher information is undefined (kinked profile)"
                )
            if u.norm.kind != "euclidean":
                raise ValueError(
                    "radial Fisher route needs the euclidean norm on a "
                    "euclidean group"
                )
            return _fisher_radial_euclidean(u)
        if u.support_interval is not None:
            return _fisher_interval_1d(u)
        raise ValueError(f"no Fisher route for density kind {u.kind!r}")

    if convention == "heisenberg_standard":
        if not u.gradient_available and u.grad is None:
            raise ValueError(
                f"density kind {u.kind!r} has no usable gradient for the "
                "Fisher information"
            )
        return _fisher_heisenberg_mc(u, samples, seed)

    raise ValueError(f"unknown vector-field convention {convention!r}")


def _resolve_q_sphere(u: DensitySpec, Q, sphere):
    q = u.group.Q if Q is None else Q
    s = u.norm.sphere_measure if sphere is None else sphere
    if s is None:
        raise ValueError("no sphere measure attached to the density's norm")
    return q, float(s)


def renyi_gap(
    u: DensitySpec,
    params: EntropyParams,
    Q=None,
    sphere: float | None = None,
) -> InequalityReport:
    """gap = (Q/b) log(K * int |x|^b u) - h_alpha[u]; zero at the
    branch extremizer, nonnegative for every admissible density."""
    q, s = _resolve_q_sphere(u, Q, sphere)
    params.validate(q)
    res = sharp_renyi_constant(params, q, s)
    m, em = moment(u, params.b)
    h, eh = renyi_entropy(u, params.alpha)
    qb = float(q) / float(params.b)
    rhs = qb * (math.log(res.K) + math.log(m))
    gap_err = eh + qb * em / m
    return InequalityReport(
        inequality="renyi",
        lhs=h,
        rhs=rhs,
        gap=rhs - h,
        params=params.to_dict(),
        quad_error=gap_err,
        group=_group_ident(u),
        details={"K": res.K, "branch": res.branch, "moment": m},
    )


def shannon_gap(
    u: DensitySpec, Q=None, sphere: float | None = None
) -> InequalityReport:
    """gap = (Q/2) log(C * int |x|^2 u) + int u log u, with C the sharp
    Shannon constant of the group; zero exactly at Gaussians on R^n."""
    q, s = _resolve_q_sphere(u, Q, sphere)
    cg = shannon_constant(q, s)
    m2, e2 = moment(u, 2.0)
    h, eh = shannon_entropy(u)
    qf = float(q)
    rhs = (qf / 2.0) * (math.log(cg) + math.log(m2))
    gap_err = eh + (qf / 2.0) * e2 / m2
    return InequalityReport(
        inequality="shannon",
        lhs=h,
        rhs=rhs,
        gap=rhs - h,
        params=None,
        quad_error=gap_err,
        group=_group_ident(u),
        details={"C": cg, "second_moment": m2},
    )


def logsob_gap(
    u: DensitySpec,
    A: float,
    group: GroupSpec | None = None,
    convention: str = "auto",
    *,
    samples: int = DEFAULT_MC_SAMPLES,
    seed: int = 0,
) -> InequalityReport:
    """int u log u <= (Q/2) log((A/4) J[u]) with J the horizontal Fisher
    information; gap = rhs - lhs."""
    if A <= 0:
        raise ValueError(f"log-Sobolev constant must be positive, got {A}")
    h, eh = shannon_entropy(u)
    lhs = -h
    J, eJ = horizontal_fisher(u, group, convention, samples=samples, seed=seed)
    if J <= 0:
        raise QuadratureError(f"Fisher information evaluated to {J!r}")
    qf = u.group.q_float
    rhs = (qf / 2.0) * math.log((A / 4.0) * J)
    gap_err = eh + (qf / 2.0) * eJ / J
    return InequalityReport(
        inequality="log_sobolev",
        lhs=lhs,
        rhs=rhs,
        gap=rhs - lhs,
        params=None,
        quad_error=gap_err,
        group=_group_ident(u),
        details={"A": A, "fisher": J},
    )


def uncertainty_check(
    u: DensitySpec,
    A: float,
    group: GroupSpec | None = None,
    sphere: float | None = None,
    convention: str = "auto",
    *,
    samples: int = DEFAULT_MC_SAMPLES,
    seed: int = 0,
) -> InequalityReport:
    """Moment-Fisher product against its lower bound 4 / (C * A).

    lhs is the bound, rhs the product (int |x|^2 u)(int |grad_H u|^2/u),
    so gap = product - bound.  On euclidean groups the classical
    comparison sqrt(product) >= n is reported in the details.
    """
    q, s = _resolve_q_sphere(u, None, sphere)
    if group is not None and group.weights != u.group.weights:
        raise ValueError("group argument disagrees with the density's group")
    m2, e2 = moment(u, 2.0)
    J, eJ = horizontal_fisher(u, None, convention, samples=samples, seed=seed)
    product = m2 * J
    eprod = m2 * eJ + J * e2
    bound = uncertainty_bound(q, s, A)
    details = {"A": A, "second_moment": m2, "fisher": J}
    if u.group.is_euclidean_weights():
        details["classical_lhs"] = float(u.group.N)
        details["classical_rhs"] = math.sqrt(product)
    return InequalityReport(
        inequality="uncertainty",
        lhs=bound,
        rhs=product,
        gap=product - bound,
        params=None,
        quad_error=eprod,
        group=_group_ident(u),
        details=details,
    )


def stam_gap(
    u: DensitySpec,
    group: GroupSpec | None = None,
    *,
    samples: int = DEFAULT_MC_SAMPLES,
    seed: int = 0,
) -> InequalityReport:
    """Euclidean lower bound h[u] >= -(n/2) log(J[u] / (2 n pi e)).

    lhs is the bound and rhs the entropy; the gap vanishes exactly at
    Gaussians.
    """
    if not u.group.is_euclidean_weights():
        raise ValueError("the Stam inequality applies to euclidean groups only")
    if group is not None and group.weights != u.group.weights:
        raise ValueError("group argument disagrees with the density's group")
    n = u.group.N
    h, eh = shannon_entropy(u)
    J, eJ = horizontal_fisher(u, None, "euclidean", samples=samples, seed=seed)
    if J <= 0:
        raise QuadratureError(f"Fisher information evaluated to {J!r}")
    lhs = -(n / 2.0) * math.log(J / (2.0 * n * math.pi * math.e))
    gap_err = eh + (n / 2.0) * eJ / J
    return InequalityReport(
        inequality="stam_euclidean",
        lhs=lhs,
        rhs=h,
        gap=h - lhs,
        params=None,
        quad_error=gap_err,
        group=_group_ident(u),
        details={"fisher": J},
    )
