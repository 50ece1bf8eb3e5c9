"""The elliptic curves y^2 = x^3 + b*x + t^(3^n+1) over K = F_{3^2n}(t).

Group law, naive and canonical (Neron-Tate) heights, the minimal integral
model at the place at infinity with its type-IV local data, narrow-lattice
membership, and the explicit points of minimal height for n <= 3.

The canonical height is computed through the doubling limit
lim 4^(-m) h(2^m P).  In characteristic 3 the doubling slope for this
family is b/(2y) (the 3x^2 term vanishes), which gives a closed doubling
recurrence on triples (N, M, Z) with x = N/Z^2, y = M/Z^3:

    N' = b^2 Z^8 + N M^2,   M' = b^3 Z^12 - M^4,   Z' = M Z.

Because b is a unit, this recurrence preserves gcd(N,Z) = gcd(M,Z) = 1, so
no polynomial gcds are ever needed while doubling: the naive height can be
read off as max(deg N, 2 deg Z) at every rung.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .gf import FieldElement, embedding, make_field, choose_b, legendre, b_condition_holds
from .funcfield import Poly, RatFn


class DegreeCapError(RuntimeError):
    """Height doubling hit the coordinate-degree cap before converging."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


class Curve:
    """E: y^2 = x^3 + b x + t^(3^n+1) over F_{3^2n}(t)."""

    def __init__(self, n, b):
        if n < 1:
            raise ValueError("n must be >= 1")
        self.n = n
        self.ctx = make_field(3, 2 * n)
        if isinstance(b, FieldElement):
            if b.ctx == self.ctx:
                self.b = b
            else:
                if (2 * n) % b.ctx.m != 0:
                    raise ValueError("b must come from a subfield of F_(3^2n)")
                self.b = embedding(b.ctx, self.ctx)(b)
        else:
            self.b = self.ctx.element(b)
        if self.b.code == 0:
            raise ValueError("the twist parameter b must be nonzero")
        self.m_exp = 3**n + 1
        self.a6 = Poly.t_power(self.ctx, self.m_exp)
        self._a4_rf = RatFn.const(self.ctx, self.b)
        self._a6_rf = RatFn.from_poly(self.a6)

    def __eq__(self, other):
        return (isinstance(other, Curve) and self.n == other.n
                and self.ctx == other.ctx and self.b == other.b)

    def __hash__(self):
        return hash((self.n, self.b.code))

    def __repr__(self):
        return f"Curve(n={self.n}, b={self.b!r})"

    # -- points ---------------------------------------------------------------

    def identity(self):
        return ECPoint(self, None, None)

    def point(self, x, y, check=True):
        if isinstance(x, Poly):
            x = RatFn.from_poly(x)
        if isinstance(y, Poly):
            y = RatFn.from_poly(y)
        pt = ECPoint(self, x, y)
        if check and not self.contains(pt):
            raise ValueError(f"({x!r}, {y!r}) does not satisfy the curve equation")
        return pt

    def contains(self, pt):
        """Exact identity check y^2 = x^3 + b x + t^(3^n+1) in K."""
        if pt.is_identity:
            return True
        x, y = pt.x, pt.y
        return y * y == x * x * x + self._a4_rf * x + self._a6_rf

    # -- group law ---------------------------------------------------------------

    def neg(self, pt):
        if pt.is_identity:
            return pt
        return ECPoint(self, pt.x, -pt.y)

    def add(self, p1, p2):
        if p1.is_identity:
            return p2
        if p2.is_identity:
            return p1
        if p1.x == p2.x:
            if p1.y == p2.y:
                return self.double(p1)
            return self.identity()  # y1 = -y2 on the curve
        lam = (p2.y - p1.y) / (p2.x - p1.x)
        x3 = lam * lam - p1.x - p2.x
        y3 = lam * (p1.x - x3) - p1.y
        return ECPoint(self, x3, y3)

    def double(self, pt):
        if pt.is_identity or pt.y.is_zero():
            return self.identity()
        # char-3 tangent slope: (3x^2 + a4)/(2y) = b/(2y)
        lam = self._a4_rf / (pt.y + pt.y)
        x3 = lam * lam - pt.x - pt.x
        y3 = lam * (pt.x - x3) - pt.y
        return ECPoint(self, x3, y3)

    def smul(self, k, pt):
        if k < 0:
            return self.smul(-k, self.neg(pt))
        acc = self.identity()
        base = pt
        while k:
            if k & 1:
                acc = self.add(acc, base)
            base = self.double(base)
            k >>= 1
        return acc


class ECPoint:
    """Point of E(K): the identity, or an affine pair of rational functions."""

    __slots__ = ("curve", "x", "y")

    def __init__(self, curve, x, y):
        self.curve = curve
        self.x = x
        self.y = y

    @property
    def is_identity(self):
        return self.x is None

    def __add__(self, other):
        return self.curve.add(self, other)

    def __sub__(self, other):
        return self.curve.add(self, self.curve.neg(other))

    def __neg__(self):
        return self.curve.neg(self)

    def __rmul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return self.curve.smul(k, self)

    def __eq__(self, other):
        if not isinstance(other, ECPoint):
            return NotImplemented
        if self.is_identity or other.is_identity:
            return self.is_identity and other.is_identity
        return self.curve == other.curve and self.x == other.x and self.y == other.y

    def __hash__(self):
        if self.is_identity:
            return hash((self.curve.n, "O"))
        return hash((self.curve.n, self.x, self.y))

    def key(self):
        """Canonical hashable key (used to deduplicate generated points)."""
        if self.is_identity:
            return ("O",)
        return (tuple(self.x.num.c), tuple(self.x.den.c),
                tuple(self.y.num.c), tuple(self.y.den.c))

    def __repr__(self):
        if self.is_identity:
            return "ECPoint(O)"
        return f"ECPoint({self.x!r}, {self.y!r})"


def on_curve(curve, pt):
    return curve.contains(pt)


# ---------------------------------------------------------------------------
# heights


@dataclass(frozen=True)
class HeightEstimate:
    value_exact: Fraction
    m_used: int
    error_bound: float

    @property
    def value(self):
        return float(self.value_exact)

    def as_dict(self, point_label=None):
        d = {"m_used": self.m_used, "value": self.value,
             "error_bound": self.error_bound}
        if point_label is not None:
            d = {"point": point_label, **d}
        return d


def naive_height(pt):
    """deg(x(P)) as a map to P^1; constants (and the identity) get 0."""
    if pt.is_identity:
        return 0
    return pt.x.map_degree()


def _nmz(pt):
    """Extract (N, M, Z) with x = N/Z^2, y = M/Z^3, both sides reduced."""
    x, y = pt.x, pt.y
    one = Poly.const(x.ctx, 1)
    if x.den.degree == 0:
        if y.den.degree != 0:
            raise ValueError("not an integral-denominator pair")
        return x.num, y.num, one
    z = y.den // x.den
    if z * z != x.den or (z * z) * z != y.den:
        raise ValueError("coordinate denominators are not of the form Z^2, Z^3")
    return x.num, y.num, z


def _nmz_height(n_poly, z_poly):
    if n_poly.is_zero():
        return 0
    return max(n_poly.degree, 2 * z_poly.degree)


def _double_nmz(curve, n_poly, m_poly, z_poly):
    b2 = curve.b * curve.b
    b3 = b2 * curve.b
    z2 = z_poly * z_poly
    z4 = z2 * z2
    z8 = z4 * z4
    m2 = m_poly * m_poly
    m4 = m2 * m2
    nn = z8.scale(b2) + n_poly * m2
    mn = (z8 * z4).scale(b3) - m4
    zn = m_poly * z_poly
    if nn.is_zero():
        # x(2P) = 0 forces y(2P) polynomial: strip the whole denominator
        mn = mn // ((zn * zn) * zn)
        zn = Poly.const(curve.ctx, 1)
    return nn, mn, zn


def canonical_height(pt, m_max=5, tol=1e-3, degree_cap=20000):
    """Neron-Tate height via the doubling limit of 4^(-m) h(2^m P).

    Returns the estimate at the largest computed m together with the last
    Cauchy increment as error bound.  Stops early once the increment falls
    under tol (with at least two doublings); raises DegreeCapError if the
    coordinate degrees would exceed degree_cap before that happens.
    """
    if pt.is_identity:
        return HeightEstimate(Fraction(0), 0, 0.0)
    curve = pt.curve
    n_poly, m_poly, z_poly = _nmz(pt)
    prev = Fraction(_nmz_height(n_poly, z_poly))
    inc = None
    m = 0
    while m < m_max:
        if m_poly.is_zero():
            # 2^m P = O: torsion (never happens on this family)
            return HeightEstimate(Fraction(0), m, 0.0)
        worst = max(n_poly.degree, m_poly.degree, 3 * max(z_poly.degree, 0), 1)
        if 4 * worst > degree_cap:
            partial = HeightEstimate(prev, m, float(inc) if inc is not None else math.inf)
            raise DegreeCapError(
                f"degree cap {degree_cap} reached at m={m} "
                f"with increment {partial.error_bound}", partial)
        n_poly, m_poly, z_poly = _double_nmz(curve, n_poly, m_poly, z_poly)
        m += 1
        cur = Fraction(_nmz_height(n_poly, z_poly), 4**m)
        inc = abs(cur - prev)
        prev = cur
        if m >= 2 and inc <= tol:
            break
    return HeightEstimate(prev, m, float(inc) if inc is not None else 0.0)


def height_pairing(p1, p2, m_max=5, tol=1e-3, degree_cap=20000):
    """Bilinear pairing <P,Q> = (h(P+Q) - h(P) - h(Q)) / 2."""
    hs = canonical_height(p1.curve.add(p1, p2), m_max, tol, degree_cap)
    h1 = canonical_height(p1, m_max, tol, degree_cap)
    h2 = canonical_height(p2, m_max, tol, degree_cap)
    return float(Fraction(hs.value_exact - h1.value_exact - h2.value_exact, 2))


# ---------------------------------------------------------------------------
# the place at infinity


@dataclass(frozen=True)
class InfinityModel:
    """Minimal integral Weierstrass model at infinity, pi = 1/t.

    y^2 = x^3 + a4 x + a6 with a4 = b pi^(4 mu), a6 = pi^(6 mu - (3^n+1)),
    mu = ceil((3^n+1)/6); the exponent 6 mu - (3^n+1) always equals 2.
    """

    n: int
    b: FieldElement
    mu: int
    a4: Poly
    a6: Poly
    b2: Poly
    b4: Poly
    b6: Poly
    b8: Poly


@dataclass(frozen=True)
class LocalData:
    kodaira_type: str
    v_delta: int
    conductor_exponent: int
    tamagawa: int


def infinity_model(n, b=None):
    if b is None:
        b = choose_b(n)
    curve = b if isinstance(b, Curve) else Curve(n, b)
    ctx = curve.ctx
    m = 3**n + 1
    mu = -(-m // 6)  # ceil
    if 6 * mu - m != 2:
        raise AssertionError(f"6*ceil((3^{n}+1)/6) - (3^{n}+1) = {6*mu - m}, expected 2")
    a4 = Poly.t_power(ctx, 4 * mu, curve.b)
    a6 = Poly.t_power(ctx, 6 * mu - m)
    b2 = Poly.zero(ctx)
    b4 = a4.scale(ctx.element(2))
    b6 = a6.scale(ctx.element(4))
    b8 = -(a4 * a4)  # -(2 a4)^2 / 4
    return InfinityModel(n=n, b=curve.b, mu=mu, a4=a4, a6=a6,
                         b2=b2, b4=b4, b6=b6, b8=b8)


def _valuation(poly):
    if poly.is_zero():
        return None
    for i, c in enumerate(poly.c):
        if c:
            return i
    return None


def tate_type_iv_check(model):
    """Verify the type-IV conditions at infinity and return the local data.

    Checks, in order: the reduction is singular exactly at (0,0); pi^2
    divides a6; pi^3 divides b8 while pi^3 does not divide b6.  That is the
    stopping pattern of Step 5, giving Kodaira type IV with v(Delta) = 12 mu,
    conductor exponent v(Delta) - 2, and Tamagawa number 3 when the residue
    of a6/pi^2 is a square.
    """
    ctx = model.a4.ctx
    a4_res = model.a4[0]
    a6_res = model.a6[0]
    if a4_res != 0 or a6_res != 0:
        raise ArithmeticError("reduction at infinity is not the cusp y^2 = x^3")
    # singular point of y^2 = x^3 is (0,0): both partials vanish there
    if _valuation(model.a6) is None or _valuation(model.a6) < 2:
        raise ArithmeticError("pi^2 does not divide a6")
    v_b8 = _valuation(model.b8)
    if v_b8 is not None and v_b8 < 3:
        raise ArithmeticError("pi^3 does not divide b8")
    v_b6 = _valuation(model.b6)
    if v_b6 is None or v_b6 >= 3:
        raise ArithmeticError("pi^3 divides b6: Step 5 pattern violated")
    delta = -(model.b4 ** 3).scale(ctx.element(8)) - (model.b6 ** 2).scale(ctx.element(27))
    v_delta = _valuation(delta)
    if v_delta != 12 * model.mu:
        raise ArithmeticError(f"v(Delta) = {v_delta}, expected 12*mu = {12 * model.mu}")
    # Tamagawa number for type IV: 3 when a6/pi^2 is a residue square
    res = ctx.from_code(model.a6[2])
    tamagawa = 3 if legendre(res) == 1 else 1
    if tamagawa != 3:
        raise ArithmeticError("type IV with non-split Tamagawa number; expected 3")
    return LocalData(kodaira_type="IV", v_delta=v_delta,
                     conductor_exponent=v_delta - 2, tamagawa=tamagawa)


@dataclass(frozen=True)
class ReductionResult:
    kind: str  # "identity" | "smooth" | "singular"
    x_residue: FieldElement | None
    y_residue: FieldElement | None


def _residue_at_infinity(rf, shift, ctx):
    """Residue mod pi of rf * pi^shift, given the value has v >= 0."""
    if rf.is_zero():
        return ctx.zero(), None
    v = rf.v_infinity() + shift
    if v < 0:
        return None, v
    if v > 0:
        return ctx.zero(), v
    return ctx.from_code(ctx.mul_codes(rf.num.lc(), ctx.inv_code(rf.den.lc()))), 0


def reduce_at_infinity(pt, model=None):
    """Image of P on the reduced minimal model at infinity.

    Applies (x, y) -> (x t^(-2 mu), y t^(-3 mu)) and evaluates pi-adic
    valuations: a pole means the point reduces to the identity; otherwise
    the residue pair is compared against the singular point (0,0).
    """
    if pt.is_identity:
        return ReductionResult("identity", None, None)
    curve = pt.curve
    if model is None:
        model = infinity_model(curve.n, curve)
    ctx = curve.ctx
    x_res, vx = _residue_at_infinity(pt.x, 2 * model.mu, ctx)
    y_res, vy = _residue_at_infinity(pt.y, 3 * model.mu, ctx)
    if x_res is None or y_res is None:
        return ReductionResult("identity", None, None)
    if x_res.code == 0 and y_res.code == 0:
        return ReductionResult("singular", x_res, y_res)
    return ReductionResult("smooth", x_res, y_res)


def is_narrow(pt, model=None):
    """Whether P lies in the narrow Mordell-Weil sublattice.

    Reduction is good at every finite place, so only the fiber at infinity
    decides membership: P is narrow iff it does not land on the singular
    point there.
    """
    return reduce_at_infinity(pt, model).kind != "singular"


# ---------------------------------------------------------------------------
# explicit points


def presentation_f9():
    """F_9 presented as F_3[X]/(X^2 - X - 1), with z the class of X."""
    ctx = make_field(3, 2, modulus=(2, 2, 1))
    return ctx, ctx.from_code(ctx.code_of((0, 1)))


def standard_curve(n):
    """The curve carrying the explicit minimal-height points.

    b = 1 for odd n; for n = 2 the generator z of the F_9 presentation
    above (any valid b gives the same arithmetic).
    """
    if n == 2:
        _, z = presentation_f9()
        return Curve(2, z)
    return Curve(n, choose_b(n))


def minimal_point(curve):
    """A narrow point of height 3^(n-1) + 1, known for n <= 3."""
    n = curve.n
    ctx = curve.ctx
    t = Poly.t(ctx)
    if n == 1:
        x = t * t
        y = -(t ** 3) + t
    elif n == 2:
        z = curve.b
        x = t**4 + (t * t).scale(z + 1) - Poly.const(ctx, 1)
        y = -(t**6) + t**4 - t * t - Poly.const(ctx, z - 1)
    elif n == 3:
        x = t**10 + t**8 + t * t
        y = -(t**15) + t**13 - t**11 - t**7 - t**5 + t
    else:
        return None
    return curve.point(x, y)


def index_witness_point(curve):
    """(0, t^((3^n+1)/2)): reduces to the singular point, so index >= 3."""
    ctx = curve.ctx
    y = Poly.t_power(ctx, (3**curve.n + 1) // 2)
    return curve.point(Poly.zero(ctx), y)


def known_points(curve):
    pts = {"witness": index_witness_point(curve)}
    mp = minimal_point(curve)
    if mp is not None:
        pts["minimal"] = mp
    return pts


def unity_scalars(curve):
    """All c in F_{3^2n} with c^(3^n+1) = 1 (the conjugation scalars)."""
    ctx = curve.ctx
    order = 3**curve.n + 1
    step = (ctx.q - 1) // order
    ctx._ensure_tables()
    return [ctx.from_code(ctx._exp[(k * step) % (ctx.q - 1)]) for k in range(order)]


def conjugate_point(pt, c):
    """The substitution t -> c t, valid whenever c^(3^n+1) = 1."""
    if pt.is_identity:
        return pt
    curve = pt.curve
    if (c ** (3**curve.n + 1)).code != 1:
        raise ValueError("conjugation scalar must satisfy c^(3^n+1) = 1")
    return curve.point(pt.x.subs_scaled_t(c), pt.y.subs_scaled_t(c))
