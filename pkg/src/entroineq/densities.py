"""Probability densities on homogeneous groups.

Constructors cover the two inequality extremizers, Euclidean Gaussians,
uniform quasi-balls, anisotropic dilations u -> lam^Q u(D_lam x), and
finite mixtures.  Every density is normalized numerically at
construction time starting from its closed-form constant, so the
recorded residual doubles as a regression check on those constants.

All built-in kinds are radial with respect to their quasi-norm, which
keeps every entropy and moment integral one-dimensional; the dilation
and mixture combinators preserve radiality (a dilation of g(|x|) is
lam^Q g(lam |x|)).  Densities are immutable after construction and
their evaluators are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .group_geometry import (
    GroupSpec,
    QuasiNormSpec,
    dilate,
    ensure_sphere_measure,
    quasi_norm,
    quasi_norm_gradient,
    unit_ball_box_halfwidths,
    validate_norm,
)
from .quadrature import integrate_interval, integrate_radial
from .sharp_constants import EntropyParams, c1, c2

__all__ = [
    "DensitySpec",
    "make_phi1",
    "make_phi2",
    "make_gaussian",
    "make_uniform_ball",
    "make_custom_1d",
    "dilate_density",
    "make_mixture",
    "density_from_dict",
    "density_to_dict",
    "support_box_halfwidths",
]

# A constructed density must integrate to 1 at least this well.
NORMALIZATION_TOL = 1e-7


@dataclass(frozen=True)
class DensitySpec:
    """An immutable probability density with its evaluation machinery.

    ``profile`` is the radial profile g with u(x) = g(|x|) when
    ``radial``; ``support_radius`` is the quasi-norm radius of the
    support (None for all of the group); ``breakpoints`` are radii where
    the profile kinks, forwarded to the quadrature panels.
    """

    kind: str
    group: GroupSpec
    norm: QuasiNormSpec
    radial: bool
    gradient_available: bool
    pdf: Callable
    profile: Callable | None = None
    profile_derivative: Callable | None = None
    grad: Callable | None = None
    support_radius: float | None = None
    support_interval: tuple[float, float] | None = None
    breakpoints: tuple[float, ...] = ()
    params: dict | None = None
    normalization_residual: float = 0.0

    @property
    def quadrature_breakpoints(self) -> tuple[float, ...]:
        """Panel boundaries: declared kinks plus a finite support edge."""
        pts = set(self.breakpoints)
        if self.support_radius is not None:
            pts.add(self.support_radius)
        return tuple(sorted(pts))


def _resolve_norm(norm: QuasiNormSpec | None, group: GroupSpec) -> QuasiNormSpec:
    if norm is None:
        norm = QuasiNormSpec.euclidean()
    validate_norm(norm, group)
    if norm.sphere_measure is None:
        if norm.kind == "euclidean":
            return ensure_sphere_measure(norm, group)
        raise ValueError(
            f"quasi-norm kind {norm.kind!r} has no sphere measure attached; "
            "estimate one with sphere_measure()/ensure_sphere_measure() first"
        )
    return norm


def _radial_pdf(profile, norm, group):
    def pdf(x):
        return profile(quasi_norm(x, norm, group))

    return pdf


def _radial_grad(profile_derivative, norm, group):
    def grad(x):
        x = np.asarray(x, dtype=float)
        rho = np.asarray(quasi_norm(x, norm, group), dtype=float)
        gprime = np.asarray(profile_derivative(np.where(rho > 0, rho, 1.0)), dtype=float)
        direction = quasi_norm_gradient(x, norm, group)
        return np.where(rho[..., None] > 0.0, gprime[..., None] * direction, 0.0)

    return grad


def _check_normalization(spec: DensitySpec) -> DensitySpec:
    if spec.radial:
        est = integrate_radial(
            spec.profile,
            spec.group.Q,
            spec.norm.sphere_measure,
            support=spec.support_radius,
            breakpoints=spec.breakpoints,
        )
    else:
        a, b = spec.support_interval
        est = integrate_interval(lambda t: float(spec.pdf(np.array([t]))), a, b)
    residual = est.value - 1.0
    if abs(residual) > NORMALIZATION_TOL:
        raise ValueError(
            f"density {spec.kind!r} is not normalized: mass = {est.value!r}"
        )
    object.__setattr__(spec, "normalization_residual", residual)
    return spec


def make_phi1(alpha, b, group: GroupSpec, norm: QuasiNormSpec | None = None) -> DensitySpec:
    """Fat-tailed extremizer C1 (1 + |x|^b)^(1/(alpha-1)), alpha < 1.

    Requires b > Q(1/alpha - 1) for integrability of the tail.
    """
    params = EntropyParams(alpha, b)
    if params.branch != "below_one":
        raise ValueError("phi1 needs alpha < 1; use make_phi2 for alpha > 1")
    params.validate(group.Q)
    norm = _resolve_norm(norm, group)
    cval = c1(params, group.Q, norm.sphere_measure)
    a_f, b_f = float(alpha), float(b)
    e = 1.0 / (a_f - 1.0)

    def profile(r):
        r = np.asarray(r, dtype=float)
        return cval * np.exp(e * np.log1p(r**b_f))

    def profile_derivative(r):
        r = np.asarray(r, dtype=float)
        return cval * e * b_f * r ** (b_f - 1.0) * np.exp((e - 1.0) * np.log1p(r**b_f))

    spec = DensitySpec(
        kind="phi1",
        group=group,
        norm=norm,
        radial=True,
        gradient_available=True,
        pdf=_radial_pdf(profile, norm, group),
        profile=profile,
        profile_derivative=profile_derivative,
        grad=_radial_grad(profile_derivative, norm, group),
        params={"kind": "phi1", "alpha": a_f, "b": b_f},
    )
    return _check_normalization(spec)


def make_phi2(alpha, b, group: GroupSpec, norm: QuasiNormSpec | None = None) -> DensitySpec:
    """Compactly supported extremizer C2 (1 - |x|^b)_+^(1/(alpha-1)), alpha > 1."""
    params = EntropyParams(alpha, b)
    if params.branch != "above_one":
        raise ValueError("phi2 needs alpha > 1; use make_phi1 for alpha < 1")
    norm = _resolve_norm(norm, group)
    cval = c2(params, group.Q, norm.sphere_measure)
    a_f, b_f = float(alpha), float(b)
    e = 1.0 / (a_f - 1.0)

    def profile(r):
        r = np.asarray(r, dtype=float)
        base = np.clip(1.0 - r**b_f, 0.0, None)
        return cval * base**e

    def profile_derivative(r):
        r = np.asarray(r, dtype=float)
        base = np.clip(1.0 - r**b_f, 0.0, None)
        with np.errstate(divide="ignore", invalid="ignore"):
            d = -cval * e * b_f * r ** (b_f - 1.0) * base ** (e - 1.0)
        return np.where(base > 0.0, d, 0.0)

    spec = DensitySpec(
        kind="phi2",
        group=group,
        norm=norm,
        radial=True,
        gradient_available=True,
        pdf=_radial_pdf(profile, norm, group),
        profile=profile,
        profile_derivative=profile_derivative,
        grad=_radial_grad(profile_derivative, norm, group),
        support_radius=1.0,
        params={"kind": "phi2", "alpha": a_f, "b": b_f},
    )
    return _check_normalization(spec)


def make_gaussian(
    sigma: float,
    n: int | None = None,
    group: GroupSpec | None = None,
    norm: QuasiNormSpec | None = None,
) -> DensitySpec:
    """Isotropic centered Gaussian on R^n; euclidean groups only (there
    is no canonical Gaussian on a general homogeneous group)."""
    if sigma <= 0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    if group is None:
        if n is None:
            raise ValueError("make_gaussian needs the dimension n or a group")
        group = GroupSpec.euclidean(int(n))
    if not group.is_euclidean_weights():
        raise ValueError(
            f"gaussian densities require a euclidean group, got weights {group.weights}"
        )
    if norm is not None and norm.kind != "euclidean":
        raise ValueError("gaussian densities require the euclidean norm")
    norm = _resolve_norm(norm, group)
    dim = group.N
    sig2 = float(sigma) ** 2
    lognorm = -0.5 * dim * math.log(2.0 * math.pi * sig2)

    def profile(r):
        r = np.asarray(r, dtype=float)
        return np.exp(lognorm - r * r / (2.0 * sig2))

    def profile_derivative(r):
        r = np.asarray(r, dtype=float)
        return -(r / sig2) * np.exp(lognorm - r * r / (2.0 * sig2))

    spec = DensitySpec(
        kind="gaussian",
        group=group,
        norm=norm,
        radial=True,
        gradient_available=True,
        pdf=_radial_pdf(profile, norm, group),
        profile=profile,
        profile_derivative=profile_derivative,
        grad=_radial_grad(profile_derivative, norm, group),
        params={"kind": "gaussian", "sigma": float(sigma)},
    )
    return _check_normalization(spec)


def make_uniform_ball(
    radius: float, group: GroupSpec, norm: QuasiNormSpec | None = None
) -> DensitySpec:
    """Uniform density on the quasi-ball of the given radius.

    The profile jumps at the boundary, so no gradient is available and
    Fisher-information functionals reject this density.
    """
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    norm = _resolve_norm(norm, group)
    q = group.q_float
    height = q / (norm.sphere_measure * float(radius) ** q)
    r0 = float(radius)

    def profile(r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= r0, height, 0.0)

    spec = DensitySpec(
        kind="uniform_ball",
        group=group,
        norm=norm,
        radial=True,
        gradient_available=False,
        pdf=_radial_pdf(profile, norm, group),
        profile=profile,
        support_radius=r0,
        params={"kind": "uniform_ball", "radius": r0},
    )
    return _check_normalization(spec)


def make_custom_1d(
    pdf: Callable[[float], float],
    a: float,
    b: float,
    grad: Callable | None = None,
    name: str = "custom_1d",
) -> DensitySpec:
    """A non-radial density on R^1 supported on the interval (a, b).

    Library-internal escape hatch (e.g. the uniform density on (0, 1));
    not part of the JSON density schema.
    """
    if not a < b:
        raise ValueError(f"need a < b, got ({a}, {b})")
    group = GroupSpec.euclidean(1)
    norm = ensure_sphere_measure(QuasiNormSpec.euclidean(), group)

    def pdf_vec(x):
        x = np.asarray(x, dtype=float)
        flat = x.reshape(-1, 1)[:, 0]
        out = np.array([float(pdf(t)) for t in flat])
        return out.reshape(x.shape[:-1])

    spec = DensitySpec(
        kind=name,
        group=group,
        norm=norm,
        radial=False,
        gradient_available=grad is not None,
        pdf=pdf_vec,
        grad=grad,
        support_interval=(float(a), float(b)),
        params={"kind": name, "a": float(a), "b": float(b)},
    )
    return _check_normalization(spec)


def dilate_density(u: DensitySpec, lam: float) -> DensitySpec:
    """The anisotropically rescaled density x -> lam^Q u(D_lam x).

    Mass is preserved; the alpha-norm scales as lam^(Q(alpha-1)) and the
    b-moment as lam^(-b).
    """
    if lam <= 0:
        raise ValueError(f"dilation parameter must be positive, got {lam}")
    lam = float(lam)
    if lam == 1.0:
        return u
    group = u.group
    scale = lam**group.q_float
    coord_scale = lam**group.weights_float

    def pdf(x):
        return scale * u.pdf(dilate(x, lam, group))

    profile = None
    profile_derivative = None
    if u.profile is not None:
        inner_profile = u.profile

        def profile(r):
            return scale * inner_profile(np.asarray(r, dtype=float) * lam)

    if u.profile_derivative is not None:
        inner_dprofile = u.profile_derivative

        def profile_derivative(r):
            return scale * lam * inner_dprofile(np.asarray(r, dtype=float) * lam)

    grad = None
    if u.grad is not None:
        inner_grad = u.grad

        def grad(x):
            return scale * coord_scale * inner_grad(dilate(x, lam, group))

    interval = None
    if u.support_interval is not None:
        interval = (u.support_interval[0] / lam, u.support_interval[1] / lam)

    spec = DensitySpec(
        kind="dilated",
        group=group,
        norm=u.norm,
        radial=u.radial,
        gradient_available=u.gradient_available,
        pdf=pdf,
        profile=profile,
        profile_derivative=profile_derivative,
        grad=grad,
        support_radius=None if u.support_radius is None else u.support_radius / lam,
        support_interval=interval,
        breakpoints=tuple(bp / lam for bp in u.breakpoints),
        params={"kind": "dilated", "lambda": lam, "inner": u.params},
    )
    return _check_normalization(spec)


def _same_norm(n1: QuasiNormSpec, n2: QuasiNormSpec) -> bool:
    return (
        n1.identifier() == n2.identifier()
        and n1.sphere_measure == n2.sphere_measure
        and n1.evaluator is n2.evaluator
    )


def make_mixture(components: Sequence[tuple[float, DensitySpec]]) -> DensitySpec:
    """Convex combination of densities on the same group and norm."""
    if not components:
        raise ValueError("mixture needs at least one component")
    weights = [float(w) for w, _ in components]
    specs = [s for _, s in components]
    if any(w <= 0 for w in weights):
        raise ValueError(f"mixture weights must be positive, got {weights}")
    if abs(sum(weights) - 1.0) > 1e-9:
        raise ValueError(f"mixture weights must sum to 1, got sum {sum(weights)!r}")
    first = specs[0]
    for s in specs[1:]:
        if s.group.weights != first.group.weights:
            raise ValueError("mixture components live on different groups")
        if not _same_norm(s.norm, first.norm):
            raise ValueError("mixture components use different quasi-norms")

    radial = all(s.radial for s in specs)

    def pdf(x):
        return sum(w * s.pdf(x) for w, s in zip(weights, specs))

    profile = None
    profile_derivative = None
    if radial and all(s.profile is not None for s in specs):

        def profile(r):
            return sum(w * s.profile(r) for w, s in zip(weights, specs))

        if all(s.profile_derivative is not None for s in specs):

            def profile_derivative(r):
                return sum(
                    w * s.profile_derivative(r) for w, s in zip(weights, specs)
                )

    grad = None
    gradient_available = all(s.gradient_available for s in specs)
    if gradient_available and all(s.grad is not None for s in specs):

        def grad(x):
            return sum(w * s.grad(x) for w, s in zip(weights, specs))

    if any(s.support_radius is None for s in specs):
        support = None
    else:
        support = max(s.support_radius for s in specs)

    kinks: set[float] = set()
    for s in specs:
        kinks.update(s.breakpoints)
        if s.support_radius is not None:
            kinks.add(s.support_radius)
    if support is not None:
        kinks = {k for k in kinks if k < support}

    spec = DensitySpec(
        kind="mixture",
        group=first.group,
        norm=first.norm,
        radial=radial,
        gradient_available=gradient_available,
        pdf=pdf,
        profile=profile,
        profile_derivative=profile_derivative,
        grad=grad,
        support_radius=support,
        breakpoints=tuple(sorted(kinks)),
        params={
            "kind": "mixture",
            "components": [
                {"weight": w, "density": s.params} for w, s in zip(weights, specs)
            ],
        },
    )
    return _check_normalization(spec)


def support_box_halfwidths(u: DensitySpec) -> np.ndarray | None:
    """Axis-aligned box containing the support of a compactly supported
    radial density; None when the support is unbounded or non-radial."""
    if not u.radial or u.support_radius is None:
        return None
    base = unit_ball_box_halfwidths(u.norm, u.group)
    r = float(u.support_radius)
    return base * r ** u.group.weights_float


def density_to_dict(u: DensitySpec) -> dict:
    """JSON-able construction record of the density."""
    if u.params is None:
        raise ValueError(f"density kind {u.kind!r} has no serializable form")
    return u.params


def density_from_dict(d: dict, group: GroupSpec, norm: QuasiNormSpec | None = None) -> DensitySpec:
    """Build a density from its JSON record on the given group/norm."""
    if not isinstance(d, dict):
        raise ValueError(f"density spec must be an object, got {type(d).__name__}")
    kind = d.get("kind")
    if kind is None:
        raise ValueError("density spec is missing the 'kind' field")

    def need(field):
        if field not in d:
            raise ValueError(f"density spec of kind {kind!r} is missing {field!r}")
        return d[field]

    if kind == "phi1":
        return make_phi1(need("alpha"), need("b"), group, norm)
    if kind == "phi2":
        return make_phi2(need("alpha"), need("b"), group, norm)
    if kind == "gaussian":
        return make_gaussian(need("sigma"), group=group, norm=norm)
    if kind == "uniform_ball":
        return make_uniform_ball(need("radius"), group, norm)
    if kind == "dilated":
        inner = density_from_dict(need("inner"), group, norm)
        return dilate_density(inner, need("lambda"))
    if kind == "mixture":
        comps = need("components")
        if not isinstance(comps, list) or not comps:
            raise ValueError("mixture spec needs a non-empty 'components' list")
        built = []
        for i, comp in enumerate(comps):
            if "weight" not in comp or "density" not in comp:
                raise ValueError(
                    f"mixture component {i} needs 'weight' and 'density' fields"
                )
            built.append(
                (comp["weight"], density_from_dict(comp["density"], group, norm))
            )
        return make_mixture(built)
    raise ValueError(f"unknown density kind {kind!r}")
