"""Closed-form tube geometry of short geodesics in hyperbolic 3-manifolds.

Everything here is a pure function of binary64 inputs. Formulas that would
cancel catastrophically near their degenerate ends are rewritten:

* ``cosh(t) - 1`` is evaluated as ``2 sinh(t/2)**2``;
* ``acosh(1 + y)`` is evaluated as ``log1p(y + sqrt(2y + y**2))``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

from scipy.integrate import quad

from .errors import DomainError, OutOfMeyerhoffRange

PI = math.pi
TWO_PI = 2.0 * math.pi
SQRT3 = math.sqrt(3.0)

#: b = sqrt(4 pi / sqrt 3); kappa(ell) = cosh(b sqrt(ell)) - 1
B = math.sqrt(4.0 * PI / SQRT3)
#: lower bound on |theta| / sqrt(ell) required by both main theorems
RATIO_THRESHOLD = (3.0 * PI**2) ** 0.25
#: Mori: the helicoid H_a is globally unstable for a at or above this value
MORI_THRESHOLD = math.sqrt(105.0 * PI) / 8.0
#: a = |theta|/ell lower bound quoted for the area-comparison regime
HELICOID_A_BOUND = 12.7505

# quadrature settings for the annulus area
QUAD_EPSABS = 1e-10
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 60


def _check_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value!r}")
    return value


def check_genus(g) -> int:
    """Validate a surface genus (integer >= 2) and return it as ``int``."""
    if isinstance(g, bool) or not isinstance(g, int):
        if isinstance(g, float) and g.is_integer():
            g = int(g)
        else:
            raise DomainError(f"genus must be an integer, got {g!r}")
    if g < 2:
        raise DomainError(f"genus must be >= 2, got {g}")
    return g


def normalize_angle(theta: float) -> float:
    """Reduce ``theta`` into [-pi, pi).

    Values already in range are returned bit-for-bit unchanged, so
    normalization is idempotent and does not perturb parsed data.
    """
    theta = float(theta)
    if -PI <= theta < PI:
        return theta
    reduced = math.fmod(theta + PI, TWO_PI)
    if reduced < 0.0:
        reduced += TWO_PI
    reduced -= PI
    if reduced >= PI:
        reduced -= TWO_PI
    if reduced < -PI:
        reduced = -PI
    return reduced


def acosh1p(y: float) -> float:
    """acosh(1 + y) for y >= 0 without cancellation near y = 0."""
    return math.log1p(y + math.sqrt(2.0 * y + y * y))


def cosh_minus_one(t: float) -> float:
    half = math.sinh(0.5 * t)
    return 2.0 * half * half


# --------------------------------------------------------------------------
# Domain types
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexLength:
    """Complex length ``ell + i theta`` of a closed geodesic.

    ``theta`` is normalized into [-pi, pi) on construction.
    """

    ell: float
    theta: float

    def __post_init__(self):
        ell = _check_finite("ell", self.ell)
        theta = _check_finite("theta", self.theta)
        if ell <= 0.0:
            raise DomainError(f"real length must be positive, got {ell!r}")
        object.__setattr__(self, "ell", ell)
        object.__setattr__(self, "theta", normalize_angle(theta))

    @classmethod
    def from_complex(cls, value: complex) -> "ComplexLength":
        return cls(value.real, value.imag)

    def __complex__(self) -> complex:
        return complex(self.ell, self.theta)

    @property
    def a(self) -> float:
        """Helicoid parameter ``|theta| / ell``."""
        return abs(self.theta) / self.ell

    @property
    def ratio(self) -> float:
        """``|theta| / sqrt(ell)``, the quantity compared against the thresholds."""
        return abs(self.theta) / math.sqrt(self.ell)

    def __str__(self) -> str:
        sign = "-" if math.copysign(1.0, self.theta) < 0 else "+"
        return f"{self.ell!r} {sign} {abs(self.theta)!r}*I"


@dataclass(frozen=True)
class TubeGeometry:
    kappa: float
    radius_r0: float
    meridian_disk_area: float
    boundary_area: float


@dataclass(frozen=True)
class ConstantsTable:
    genus: int
    eps_otal: float
    eps0: float
    eps1: float
    eps2: float
    ratio_threshold: float = RATIO_THRESHOLD
    mori_threshold: float = MORI_THRESHOLD
    b: float = B

    def ordered(self) -> bool:
        """Check ``eps_otal(g) <= eps_otal(2) < eps0 < eps1 < eps2``."""
        return self.eps_otal <= w_function(2.0) < self.eps0 < self.eps1 < self.eps2


class Expansion(NamedTuple):
    series_value: float
    exact_value: float
    remainder: float

    @property
    def floor(self) -> float:
        return 0.5 / B

    @property
    def above_floor(self) -> bool:
        """Whether ``exact_value > 1/(2b)``, the small-length regime of the ratio bound."""
        return self.exact_value > self.floor


# --------------------------------------------------------------------------
# Constants
# --------------------------------------------------------------------------

def w_function(x: float) -> float:
    """The decreasing function unifying every real-length threshold.

    ``W(x) = sqrt(3)/(4 pi) * acosh(1 + 1/(1 + sqrt(1 + (8x^2 - 8x + 1)^2)))^2``
    on ``x >= 1``. W(1) is Meyerhoff's constant and W(g) is Otal's constant
    for genus g.
    """
    x = _check_finite("x", x)
    if x < 1.0:
        raise DomainError(f"W is defined for x >= 1, got {x!r}")
    q = 8.0 * x * (x - 1.0) + 1.0
    y = 1.0 / (1.0 + math.hypot(1.0, q))
    return SQRT3 / (4.0 * PI) * acosh1p(y) ** 2


EPS2 = w_function(1.0)
EPS1 = w_function(1.5)
EPS0 = w_function((2.0 + SQRT3) / 2.0)


def eps_otal(g: int) -> float:
    return w_function(float(check_genus(g)))


def constants_table(g: int = 2) -> ConstantsTable:
    g = check_genus(g)
    return ConstantsTable(genus=g, eps_otal=eps_otal(g), eps0=EPS0, eps1=EPS1, eps2=EPS2)


# --------------------------------------------------------------------------
# Maximal tube
# --------------------------------------------------------------------------

def _check_ell(ell: float) -> float:
    ell = _check_finite("ell", ell)
    if ell <= 0.0:
        raise DomainError(f"real length must be positive, got {ell!r}")
    return ell


def _check_meyerhoff(ell: float) -> float:
    ell = _check_ell(ell)
    if ell >= EPS2:
        raise OutOfMeyerhoffRange(ell, EPS2)
    return ell


def kappa(ell: float) -> float:
    """``cosh(sqrt(4 pi ell / sqrt 3)) - 1``."""
    ell = _check_ell(ell)
    return cosh_minus_one(B * math.sqrt(ell))


def _tube_sinh2(k: float) -> float:
    # sinh^2 r0 = (sqrt(1-2k) - k) / (2k), numerator rationalized
    root = math.sqrt(1.0 - 2.0 * k)
    return max((1.0 - 2.0 * k - k * k) / (2.0 * k * (root + k)), 0.0)


def tube_cosh_sinh(ell: float) -> tuple[float, float]:
    """``(cosh r0, sinh r0)`` of the maximal tube, avoiding an acosh round trip."""
    ell = _check_meyerhoff(ell)
    s2 = _tube_sinh2(kappa(ell))
    return math.sqrt(1.0 + s2), math.sqrt(s2)


def tube_radius(ell: float) -> float:
    """Meyerhoff's maximal tube radius for real length ``0 < ell < W(1)``.

    Solves ``cosh^2 r0 = (sqrt(1 - 2 kappa)/kappa + 1) / 2``.
    """
    _, sinh_r0 = tube_cosh_sinh(ell)
    return math.asinh(sinh_r0)


def meridian_disk_area(r0: float) -> float:
    r0 = _check_finite("r0", r0)
    if r0 <= 0.0:
        raise DomainError(f"tube radius must be positive, got {r0!r}")
    return TWO_PI * cosh_minus_one(r0)


def boundary_area(ell: float, r0: float) -> float:
    """Area of the tube boundary torus, ``pi ell sinh(2 r0)``."""
    return PI * ell * math.sinh(2.0 * r0)


def tube_geometry(cl: ComplexLength) -> TubeGeometry:
    ell = _check_meyerhoff(cl.ell)
    k = kappa(ell)
    r0 = math.asinh(math.sqrt(_tube_sinh2(k)))
    return TubeGeometry(
        kappa=k,
        radius_r0=r0,
        meridian_disk_area=TWO_PI * cosh_minus_one(r0),
        boundary_area=boundary_area(ell, r0),
    )


# --------------------------------------------------------------------------
# Minimal annulus
# --------------------------------------------------------------------------

def annulus_area(ell: float, theta: float, r_max: float) -> float:
    """Area of the helicoidal annulus out to distance ``r_max`` from the core.

    ``2 * integral_0^r_max sqrt(ell^2 cosh^2 u + theta^2 sinh^2 u) du``,
    integrated with adaptive Gauss-Kronrod.
    """
    ell = _check_ell(ell)
    theta = _check_finite("theta", theta)
    r_max = _check_finite("r_max", r_max)
    if r_max <= 0.0:
        raise DomainError(f"r_max must be positive, got {r_max!r}")

    def integrand(u):
        return math.hypot(ell * math.cosh(u), theta * math.sinh(u))

    value, _ = quad(integrand, 0.0, r_max, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT)
    return 2.0 * value


def slope_length(ell: float, theta: float, s: float) -> float:
    """Length of the annulus boundary on the equidistant torus at distance ``s``."""
    ell = _check_ell(ell)
    theta = _check_finite("theta", theta)
    s = _check_finite("s", s)
    if s < 0.0:
        raise DomainError(f"distance must be non-negative, got {s!r}")
    return 2.0 * math.hypot(ell * math.cosh(s), theta * math.sinh(s))


# --------------------------------------------------------------------------
# Helicoid
# --------------------------------------------------------------------------

def helicoid_point(a: float, u: float, v: float) -> tuple[complex, float]:
    """Point ``(z, t)`` of the helicoid H_a in the upper half-space model."""
    z = cmath.exp(complex(v, a * v)) * math.tanh(u)
    t = math.exp(v) / math.cosh(u)
    return z, t


def distance_to_axis(z: complex, t: float) -> float:
    """Hyperbolic distance from ``z + tj`` to the t-axis: ``asinh(|z|/t)``."""
    return math.asinh(abs(z) / t)


def first_fundamental_form(a: float, u: float) -> tuple[float, float, float]:
    sh = math.sinh(u)
    ch = math.cosh(u)
    return 1.0, 0.0, ch * ch + a * a * sh * sh


def helicoid_unstable(a: float) -> bool:
    return a >= MORI_THRESHOLD


# --------------------------------------------------------------------------
# Rotation bounds and the small-length expansion
# --------------------------------------------------------------------------

def _tube_cosh_minus_one(ell: float) -> float:
    cosh_r0, sinh_r0 = tube_cosh_sinh(ell)
    return sinh_r0 * sinh_r0 / (cosh_r0 + 1.0)


def thurston_rotation_bound(g: int, ell: float) -> float:
    """Upper bound ``2 pi (g-1) / (cosh r0 - 1)`` on |theta| for a curve on a pleated genus-g surface."""
    g = check_genus(g)
    return TWO_PI * (g - 1) / _tube_cosh_minus_one(ell)


def ratio_upper_bound(g: int) -> float:
    """Small-length bound ``4 pi b (g-1)`` on ``|theta|/sqrt(ell)``."""
    return 4.0 * PI * B * (check_genus(g) - 1)


SERIES_C1 = B / 24.0
SERIES_C2 = 353.0 * B**3 / 5760.0


def _sinh_minus_id(x: float) -> float:
    # sinh(x) - x by its Taylor series; |x| < 0.5 on the whole Meyerhoff range
    term = x * x * x / 6.0
    total = term
    k = 3
    while abs(term) > 1e-18 * abs(total):
        term *= x * x / ((k + 1) * (k + 2))
        total += term
        k += 2
    return total


def expansion_series(ell: float) -> Expansion:
    """Compare ``sqrt(ell) (cosh r0 - 1)`` against its four-term expansion in sqrt(ell).

    The remainder is evaluated from an algebraically rearranged form in which
    the O(1) and O(ell) parts cancel analytically, so it stays meaningful
    well below binary64 resolution of ``exact_value`` itself.
    """
    ell = _check_meyerhoff(ell)
    s = math.sqrt(ell)
    cosh_r0, _ = tube_cosh_sinh(ell)
    exact = s * _tube_cosh_minus_one(ell)
    series = 1.0 / B - s - SERIES_C1 * ell - SERIES_C2 * ell * ell

    x = 0.5 * B * s
    sh = math.sinh(x)
    k = 2.0 * sh * sh
    root = math.sqrt(1.0 - 2.0 * k)
    # ell cosh^2 r0 - 1/b^2
    numer = -(_sinh_minus_id(x) * (sh + x)) / (B * B * sh * sh) - ell * k / (1.0 + root) ** 2
    remainder = numer / (s * cosh_r0 + 1.0 / B) + SERIES_C1 * ell + SERIES_C2 * ell * ell
    return Expansion(series, exact, remainder)
