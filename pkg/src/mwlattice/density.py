"""Sphere-packing density bounds for the narrow Mordell-Weil lattices.

All bound arithmetic is carried in an exact symbolic form: a rational
constant plus rational multiples of log2 of odd primes (Log2Form).  The
exponents involved grow like 3^n, which would annihilate float precision
if the quantities were computed multiplicatively; floats appear only at
the display boundary.

Two independent derivations of the center-density lower bound are kept:
the closed-form expression ((3^(n-1)+1)/4)^(3^n) / (3^(1/2) 3^(n(3^(n-1)-1)/2))
and the step-by-step pipeline through rank, discriminant degree, Tamagawa
product, torsion and curve height.  They are asserted exactly equal.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .curve import infinity_model, tate_type_iv_check


def _factorize(n):
    if n <= 0:
        raise ValueError("can only factor positive integers")
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


class Log2Form:
    """Exact quantity a + sum_p e_p * log2(p) over odd primes p.

    Contributions log2(2^k) fold into the rational constant, so equality of
    forms is plain structural equality.
    """

    __slots__ = ("const", "terms")

    def __init__(self, const=Fraction(0), terms=None):
        self.const = Fraction(const)
        self.terms = {}
        if terms:
            for prime, e in terms.items():
                e = Fraction(e)
                if e:
                    self.terms[prime] = e

    @classmethod
    def log2_of(cls, value, coeff=Fraction(1)):
        """coeff * log2(value) for a positive int or Fraction."""
        coeff = Fraction(coeff)
        value = Fraction(value)
        const = Fraction(0)
        terms = {}
        for sign, part in ((1, value.numerator), (-1, value.denominator)):
            for prime, e in _factorize(part).items():
                w = sign * coeff * e
                if prime == 2:
                    const += w
                else:
                    terms[prime] = terms.get(prime, Fraction(0)) + w
        return cls(const, terms)

    def __add__(self, other):
        if isinstance(other, Log2Form):
            terms = dict(self.terms)
            for prime, e in other.terms.items():
                terms[prime] = terms.get(prime, Fraction(0)) + e
            return Log2Form(self.const + other.const, terms)
        return Log2Form(self.const + Fraction(other), self.terms)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-1) * other

    def __mul__(self, scalar):
        scalar = Fraction(scalar)
        return Log2Form(self.const * scalar,
                        {p: e * scalar for p, e in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Log2Form):
            return NotImplemented
        return self.const == other.const and self.terms == other.terms

    def __hash__(self):
        return hash((self.const, tuple(sorted(self.terms.items()))))

    def to_float(self):
        return float(self.const) + sum(float(e) * math.log2(p)
                                       for p, e in self.terms.items())

    def as_radical_str(self):
        """The exact value 2^const * prod p^e rendered as A*sqrt(B)/C.

        Only defined when every exponent is a half-integer; returns None
        otherwise.
        """
        num = den = rad = 1
        for p, e in [(2, self.const)] + sorted(self.terms.items()):
            if e.denominator not in (1, 2):
                return None
            whole = e.numerator // e.denominator
            if whole >= 0:
                num *= p**whole
            else:
                den *= p**(-whole)
            if e - whole:
                rad *= p
        if rad == 1:
            s = str(num)
        else:
            s = f"sqrt({rad})" if num == 1 else f"{num}*sqrt({rad})"
        return s if den == 1 else f"{s}/{den}"

    def __repr__(self):
        parts = [str(self.const)] if self.const else []
        for p, e in sorted(self.terms.items()):
            parts.append(f"({e})*log2({p})")
        return "Log2Form(" + (" + ".join(parts) if parts else "0") + ")"


# ---------------------------------------------------------------------------
# curve invariants


@dataclass(frozen=True)
class CurveInvariants:
    n: int
    field_size: int            # |k| = 3^2n
    base_genus: int            # genus of P^1
    delta_degree: int          # degree of the minimal discriminant
    conductor_degree: int
    tamagawa_product: int
    torsion_order: int
    height_log3_exponent: int  # H = 3^e
    rank: int
    special_value: Fraction
    rank_source: str


def invariants(n, cross_validate=True):
    """Invariant record of E over F_{3^2n}(t), cross-checked against the
    type-IV local computation for small n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    delta = 2 * (3**n + 3)
    e = Fraction(2 * n * delta, 12)
    if e.denominator != 1:
        raise ArithmeticError("height exponent must be integral for this family")
    if cross_validate and n <= 4:
        local = tate_type_iv_check(infinity_model(n))
        if local.v_delta != delta or local.tamagawa != 3:
            raise ArithmeticError("local data disagrees with the closed formulas")
    if n == 1:
        source = "verified-full"
    elif n <= 3:
        source = "verified-partial"
    else:
        source = "formula"
    return CurveInvariants(
        n=n, field_size=3 ** (2 * n), base_genus=0,
        delta_degree=delta, conductor_degree=delta - 2,
        tamagawa_product=3, torsion_order=1,
        height_log3_exponent=int(e), rank=2 * 3**n,
        special_value=Fraction(1), rank_source=source)


def min_norm_lower(n):
    """Lower bound delta/6 = 3^(n-1) + 1 on nonzero narrow heights."""
    inv = invariants(n, cross_validate=False)
    bound = Fraction(inv.delta_degree, 6)
    assert bound == 3 ** (n - 1) + 1
    return bound


@dataclass(frozen=True)
class RegulatorBound:
    n: int
    log3_exponent: int
    log2: Log2Form

    @property
    def value(self):
        return Fraction(3) ** self.log3_exponent


def regulator_upper(n):
    """Reg <= tors^2 * |k|^(g-1) * H / c = 3^(e - 2n - 1), exactly."""
    inv = invariants(n, cross_validate=False)
    e = inv.height_log3_exponent - 2 * n - 1
    form = Log2Form.log2_of(3, e)
    return RegulatorBound(n=n, log3_exponent=e, log2=form)


def sha_regulator_constraint(n):
    """Exact value of |Sha| * Reg = (1/3) * (3^2n)^(delta/12 - 1).

    Informational: neither factor is computed individually; with |Sha| >= 1
    this is the same quantity as the regulator upper bound.
    """
    inv = invariants(n, cross_validate=False)
    exponent = 2 * n * (Fraction(inv.delta_degree, 12) - 1) - 1
    assert exponent.denominator == 1
    return Fraction(3) ** int(exponent)


# ---------------------------------------------------------------------------
# center density


# Displayed reference values of the bound (4+ significant decimals).
REFERENCE_LOG2_DENSITY = {
    1: -3.79248,
    2: -3.962406,
    3: 15.88002,
    4: 144.1852,
    5: 741.1001,
    6: 3172.032,
}

# Best lattice packing densities known in the matching dimensions
# (literature values, echoed for comparison, never derived here).
BEST_KNOWN_LOG2_DENSITY = {
    1: (-3.79248, "E6 lattice, Conway & Sloane catalogue"),
    2: (-3.79248, "Conway & Sloane catalogue, dim 18"),
    3: (15.88, "Elkies, in Conway & Sloane catalogue, dim 54"),
    4: (130.679, "Craig-lattice refinement, dim 162"),
    5: (703.05, "Ball's lower bound, dim 486"),
    6: (3236.6, "Ball's lower bound, dim 1458"),
}


@dataclass(frozen=True)
class DensityReport:
    n: int
    rank: int
    min_norm: Fraction
    regulator_log3_exponent: int
    covolume_log2: Log2Form
    log2_center_density: Log2Form
    log2_value: float
    reference: float | None
    rank_source: str

    def as_dict(self):
        return {"n": self.n, "rank": self.rank, "min_norm": str(self.min_norm),
                "regulator_upper": f"3^{self.regulator_log3_exponent}",
                "log2_center_density": repr(self.log2_center_density),
                "log2_value": self.log2_value,
                "reference": self.reference,
                "rank_source": self.rank_source}


def center_density_lower(n):
    """Lower bound on the center density of the narrow lattice, exact.

    Recomputes the bound both from the closed-form expression and through
    the generic pipeline (rank, delta/24, Tamagawa, torsion, |k|, H) and
    insists on exact agreement of the two log forms.
    """
    inv = invariants(n, cross_validate=False)
    r = inv.rank
    # closed form
    closed = (Log2Form.log2_of(Fraction(3 ** (n - 1) + 1, 4), 3**n)
              + Log2Form.log2_of(3, Fraction(-1, 2))
              + Log2Form.log2_of(3, Fraction(-n * (3 ** (n - 1) - 1), 2)))
    # generic pipeline
    pipeline = (
        Log2Form.log2_of(Fraction(inv.delta_degree, 24), Fraction(r, 2))
        - Log2Form.log2_of(inv.tamagawa_product, Fraction(1, 2))
        - Log2Form.log2_of(inv.torsion_order)
        - Log2Form.log2_of(inv.field_size,
                           Fraction(inv.base_genus, 2) - Fraction(1, 2))
        - Log2Form.log2_of(3, Fraction(inv.height_log3_exponent, 2)))
    if closed != pipeline:
        raise ArithmeticError(
            f"density pipelines disagree for n={n}: {closed!r} vs {pipeline!r}")
    reg = regulator_upper(n)
    covol = Log2Form.log2_of(inv.tamagawa_product, Fraction(1, 2)) \
        + Log2Form.log2_of(inv.torsion_order) \
        + Log2Form.log2_of(inv.field_size, Fraction(inv.base_genus, 2) - Fraction(1, 2)) \
        + Log2Form.log2_of(3, Fraction(inv.height_log3_exponent, 2))
    return DensityReport(
        n=n, rank=r, min_norm=min_norm_lower(n),
        regulator_log3_exponent=reg.log3_exponent,
        covolume_log2=covol,
        log2_center_density=closed,
        log2_value=closed.to_float(),
        reference=REFERENCE_LOG2_DENSITY.get(n),
        rank_source=inv.rank_source)


def density_table(max_n=6):
    """Rows {n, rank, log2 density bound, asymptotic reference, best known}.

    The asymptotic column is (1/2 - 1/12) r log2(r), the leading term of
    the bound for large rank.
    """
    if not 1 <= max_n <= 8:
        raise ValueError("max_n must be between 1 and 8 (float display range)")
    rows = []
    for n in range(1, max_n + 1):
        rep = center_density_lower(n)
        r = rep.rank
        asym = (0.5 - 1 / 12) * r * math.log2(r)
        best = BEST_KNOWN_LOG2_DENSITY.get(n)
        rows.append({
            "n": n,
            "rank": r,
            "log2_density_bound": rep.log2_value,
            "asymptotic_reference": asym,
            "best_known": None if best is None else best[0],
            "best_known_source": None if best is None else best[1],
        })
    return rows


@dataclass(frozen=True)
class NarrowFullRatio:
    n: int
    bound_exact: Fraction
    bound_float: float
    limit: float

    def as_dict(self):
        return {"n": self.n, "bound": self.bound_float, "limit": self.limit,
                "bound_exact": f"3*(1 - 2/(3^{self.n}+3))^(3^{self.n})"}


def narrow_vs_full_ratio(n):
    """Upper bound 3 (1 - 2/(3^n+3))^(3^n) on density(full)/density(narrow).

    Uses the height 3^(n-1) + 1 - 2/3 of the index witness and the index 3;
    the bound decreases to 3 e^-2 as n grows.
    """
    base = 1 - Fraction(2, 3**n + 3)
    exact = 3 * base ** (3**n)
    return NarrowFullRatio(n=n, bound_exact=exact,
                           bound_float=3.0 * float(base) ** (3**n),
                           limit=3 * math.exp(-2))
