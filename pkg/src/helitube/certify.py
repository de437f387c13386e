"""Hypothesis chains of the tube theorems, evaluated with signed margins.

Every inequality is checked strictly. A :class:`ConditionResult` stores both
sides and ``margin`` (positive exactly when the inequality holds), so callers
can apply their own tolerance instead of trusting a bare boolean.

Certificates state inequality facts only. The topological consequences that
those facts unlock are attached as text in :attr:`Certificate.conclusions`;
nothing here constructs minimal surfaces or checks that a curve is simple.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from . import geometry as geo
from .geometry import ComplexLength, TubeGeometry


class ConditionId(str, Enum):
    ELL_BELOW_OTAL = "ELL_BELOW_OTAL"
    ELL_BELOW_EPS0 = "ELL_BELOW_EPS0"
    ELL_BELOW_EPS1 = "ELL_BELOW_EPS1"
    ELL_BELOW_EPS2 = "ELL_BELOW_EPS2"
    RATIO_ABOVE_THRESHOLD = "RATIO_ABOVE_THRESHOLD"
    AREA_CHAIN = "AREA_CHAIN"
    SEPARATION_COSH = "SEPARATION_COSH"
    THURSTON_CONSISTENCY = "THURSTON_CONSISTENCY"
    # links of the composite conditions above
    BOUNDARY_BELOW_MIDDLE = "BOUNDARY_BELOW_MIDDLE"
    MIDDLE_BELOW_ANNULUS = "MIDDLE_BELOW_ANNULUS"
    SINH_SUFFICIENT = "SINH_SUFFICIENT"
    COSH_ABOVE_SQRT3_PLUS_1 = "COSH_ABOVE_SQRT3_PLUS_1"
    COSH_ABOVE_TWICE_HALF = "COSH_ABOVE_TWICE_HALF"
    COAREA_ABOVE_MIDDLE = "COAREA_ABOVE_MIDDLE"
    THURSTON_ROTATION = "THURSTON_ROTATION"
    THURSTON_RATIO = "THURSTON_RATIO"


@dataclass(frozen=True)
class ConditionResult:
    """One strict inequality ``lhs < rhs`` (upper bound) or ``lhs > rhs`` (lower bound).

    For a composite condition, ``parts`` holds the individual links and
    ``lhs``/``rhs``/``margin`` are those of the binding (smallest-margin)
    applicable link. ``applicable=False`` marks a link evaluated outside the
    regime where it is meaningful; it is reported but does not affect the
    composite verdict.
    """

    condition_id: ConditionId
    holds: bool
    lhs: float
    rhs: float
    margin: float
    applicable: bool = True
    parts: tuple["ConditionResult", ...] = ()

    @property
    def status(self) -> str:
        if not self.applicable:
            return "NOT_APPLICABLE"
        return "PASS" if self.holds else "FAIL"


def upper_bound(cid: ConditionId, lhs: float, rhs: float, applicable: bool = True) -> ConditionResult:
    margin = rhs - lhs
    return ConditionResult(cid, margin > 0.0, lhs, rhs, margin, applicable)


def lower_bound(cid: ConditionId, lhs: float, rhs: float, applicable: bool = True) -> ConditionResult:
    margin = lhs - rhs
    return ConditionResult(cid, margin > 0.0, lhs, rhs, margin, applicable)


def chain(cid: ConditionId, links: Sequence[ConditionResult]) -> ConditionResult:
    live = [c for c in links if c.applicable]
    if not live:
        return ConditionResult(cid, True, math.inf, math.inf, math.inf, False, tuple(links))
    binding = min(live, key=lambda c: c.margin)
    return ConditionResult(
        cid, binding.margin > 0.0, binding.lhs, binding.rhs, binding.margin, True, tuple(links)
    )


# --------------------------------------------------------------------------
# Individual checks
# --------------------------------------------------------------------------

def check_ratio(cl: ComplexLength) -> ConditionResult:
    return lower_bound(ConditionId.RATIO_ABOVE_THRESHOLD, cl.ratio, geo.RATIO_THRESHOLD)


def _area_chain(cl: ComplexLength, cosh_r0: float, sinh_r0: float, r0: float,
                bd_area: float, ann_area: float) -> ConditionResult:
    middle = abs(cl.theta) * cosh_r0
    links = (
        upper_bound(ConditionId.BOUNDARY_BELOW_MIDDLE, bd_area, middle),
        upper_bound(ConditionId.MIDDLE_BELOW_ANNULUS, middle, ann_area),
        upper_bound(
            ConditionId.SINH_SUFFICIENT,
            (cl.ell * sinh_r0) ** 2,
            cl.theta**2 / (4.0 * math.pi**2),
        ),
    )
    return chain(ConditionId.AREA_CHAIN, links)


def check_area_comparison(cl: ComplexLength) -> ConditionResult:
    """Chain ``pi ell sinh 2r0 < |theta| cosh r0 < Area(annulus)`` plus its sufficient form.

    Raises :class:`~helitube.errors.OutOfMeyerhoffRange` when no tube exists.
    """
    cosh_r0, sinh_r0 = geo.tube_cosh_sinh(cl.ell)
    r0 = math.asinh(sinh_r0)
    return _area_chain(
        cl, cosh_r0, sinh_r0, r0,
        geo.boundary_area(cl.ell, r0),
        geo.annulus_area(cl.ell, cl.theta, r0),
    )


def _separation(cl: ComplexLength, cosh_r0: float, r0: float, bd_area: float) -> ConditionResult:
    abs_theta = abs(cl.theta)
    cosh_half = math.cosh(0.5 * r0)
    middle = abs_theta * cosh_r0
    links = (
        lower_bound(ConditionId.COSH_ABOVE_SQRT3_PLUS_1, cosh_r0, geo.SQRT3 + 1.0),
        lower_bound(ConditionId.COSH_ABOVE_TWICE_HALF, cosh_r0, 2.0 * cosh_half),
        lower_bound(ConditionId.COAREA_ABOVE_MIDDLE, 2.0 * abs_theta * (cosh_r0 - cosh_half), middle),
        lower_bound(ConditionId.BOUNDARY_BELOW_MIDDLE, middle, bd_area),
    )
    return chain(ConditionId.SEPARATION_COSH, links)


def check_separation(cl: ComplexLength) -> ConditionResult:
    """Tube-depth and co-area lower-bound chain behind the separation argument."""
    cosh_r0, sinh_r0 = geo.tube_cosh_sinh(cl.ell)
    r0 = math.asinh(sinh_r0)
    return _separation(cl, cosh_r0, r0, geo.boundary_area(cl.ell, r0))


def check_thurston_consistency(cl: ComplexLength, g: int) -> ConditionResult:
    """Screen a curve claimed to lie on an incompressible genus-``g`` pleated surface.

    The rotation side always applies. The ``|theta|/sqrt(ell)`` side is only
    proved for small lengths, so it is marked not applicable unless
    ``sqrt(ell)(cosh r0 - 1) > 1/(2b)``.
    """
    g = geo.check_genus(g)
    rotation = upper_bound(
        ConditionId.THURSTON_ROTATION, abs(cl.theta), geo.thurston_rotation_bound(g, cl.ell)
    )
    ratio = upper_bound(
        ConditionId.THURSTON_RATIO,
        cl.ratio,
        geo.ratio_upper_bound(g),
        applicable=geo.expansion_series(cl.ell).above_floor,
    )
    return chain(ConditionId.THURSTON_CONSISTENCY, (rotation, ratio))


# --------------------------------------------------------------------------
# Certificates
# --------------------------------------------------------------------------

DEFAULT_ASSUMPTIONS = (
    "the curve is a simple closed geodesic",
    "the ambient manifold is a closed hyperbolic 3-manifold fibering over the circle with fiber genus g",
)

THEOREM1_CONCLUSION = (
    "for every N > 0 some quasi-Fuchsian manifold homeomorphic to S x R contains "
    "at least N embedded closed incompressible least area minimal surfaces"
)
THEOREM2_CONCLUSION = "the manifold admits no minimal fibration"


@dataclass(frozen=True)
class Certificate:
    input: ComplexLength
    genus: int
    tube: TubeGeometry | None
    conditions: tuple[ConditionResult, ...]
    theorem1_ok: bool
    theorem2_ok: bool
    area_comparison_ok: bool
    separation_ok: bool
    a_parameter: float
    unstable_helicoid: bool
    annulus_area: float | None = None
    assumptions: tuple[str, ...] = DEFAULT_ASSUMPTIONS

    def condition(self, cid: ConditionId | str) -> ConditionResult:
        cid = ConditionId(cid)
        for c in self.conditions:
            if c.condition_id is cid:
                return c
        raise KeyError(cid.value)

    @property
    def min_margin(self) -> float:
        return min(c.margin for c in self.conditions if c.applicable)

    @property
    def conclusions(self) -> dict[str, str]:
        """Topological consequences unlocked by the verdicts, valid only under :attr:`assumptions`."""
        out = {}
        if self.theorem1_ok:
            out["theorem1"] = THEOREM1_CONCLUSION
        if self.theorem2_ok:
            out["theorem2"] = THEOREM2_CONCLUSION
        return out


def certify(cl: ComplexLength, g: int = 2) -> Certificate:
    """Evaluate every hypothesis chain for one complex length at genus ``g``."""
    g = geo.check_genus(g)
    ell = cl.ell
    ratio = check_ratio(cl)
    below_otal = upper_bound(ConditionId.ELL_BELOW_OTAL, ell, geo.eps_otal(g))
    below_eps0 = upper_bound(ConditionId.ELL_BELOW_EPS0, ell, geo.EPS0)
    below_eps1 = upper_bound(ConditionId.ELL_BELOW_EPS1, ell, geo.EPS1)
    below_eps2 = upper_bound(ConditionId.ELL_BELOW_EPS2, ell, geo.EPS2)
    conditions = [below_otal, below_eps0, below_eps1, below_eps2, ratio]

    tube = None
    ann_area = None
    area_ok = sep_ok = False
    if below_eps2.holds:
        tube = geo.tube_geometry(cl)
        r0 = tube.radius_r0
        cosh_r0, sinh_r0 = geo.tube_cosh_sinh(ell)
        ann_area = geo.annulus_area(ell, cl.theta, r0)
        area = _area_chain(cl, cosh_r0, sinh_r0, r0, tube.boundary_area, ann_area)
        sep = _separation(cl, cosh_r0, r0, tube.boundary_area)
        conditions += [area, sep, check_thurston_consistency(cl, g)]
        area_ok, sep_ok = area.holds, sep.holds

    a = cl.a
    return Certificate(
        input=cl,
        genus=g,
        tube=tube,
        conditions=tuple(conditions),
        theorem1_ok=below_otal.holds and ratio.holds,
        theorem2_ok=below_eps0.holds and ratio.holds,
        area_comparison_ok=area_ok,
        separation_ok=sep_ok,
        a_parameter=a,
        unstable_helicoid=geo.helicoid_unstable(a),
        annulus_area=ann_area,
    )


def check_theorem1(cl: ComplexLength, g: int) -> Certificate:
    """Certificate whose ``theorem1_ok`` is ``ell < W(g)`` and the ratio condition."""
    return certify(cl, g)


def check_theorem2(cl: ComplexLength, g: int = 2) -> Certificate:
    """Certificate whose ``theorem2_ok`` is ``ell < eps0`` and the ratio condition.

    The verdict does not depend on ``g``; the genus only feeds the other
    conditions recorded alongside it.
    """
    return certify(cl, g)


def certify_many(curves: Iterable[ComplexLength], g: int) -> list[Certificate]:
    return [certify(cl, g) for cl in curves]


def multiplicity_lower_bound(curves: Iterable[ComplexLength], g: int) -> int:
    """Lower bound ``n + 1`` on distinct least area surfaces.

    ``n`` counts the curves satisfying ``ell < W(g)`` and the ratio condition.
    The curves must be mutually disjoint simple closed geodesics; that cannot
    be checked from lengths and is the caller's responsibility.
    """
    bound = geo.eps_otal(g)
    n = sum(1 for cl in curves if cl.ell < bound and check_ratio(cl).holds)
    return n + 1
