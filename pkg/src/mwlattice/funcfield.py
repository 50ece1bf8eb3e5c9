"""Dense polynomials and reduced rational functions in t over a FieldCtx.

`Poly` stores coefficient codes lowest-degree first with no trailing zeros;
the zero polynomial has the empty list and degree -1 (the sentinel).
`RatFn` keeps numerator/denominator coprime with a monic denominator, which
the rational-function field K = F_q(t) needs for exact comparisons.

Products dispatch between a table-driven schoolbook loop (small operands)
and an exact FFT convolution of the F_p coefficient planes (large
operands); both paths return identical results.
"""

import numpy as np

from .gf import FieldElement

# schoolbook/FFT crossover, in output-coefficient count
_FFT_THRESHOLD = 20_000


class Poly:
    __slots__ = ("ctx", "c")

    def __init__(self, ctx, coeffs, *, _trusted=False):
        self.ctx = ctx
        if _trusted:
            self.c = coeffs
            return
        c = []
        for v in coeffs:
            if isinstance(v, FieldElement):
                if v.ctx != ctx:
                    raise ValueError("coefficient from a different field context")
                c.append(v.code)
            else:
                c.append(int(v) % ctx.p)
        while c and c[-1] == 0:
            c.pop()
        self.c = c

    # -- constructors ---------------------------------------------------------

    @classmethod
    def zero(cls, ctx):
        return cls(ctx, [], _trusted=True)

    @classmethod
    def const(cls, ctx, value):
        code = ctx.element(value).code if not isinstance(value, FieldElement) else value.code
        return cls(ctx, [code] if code else [], _trusted=True)

    @classmethod
    def t(cls, ctx):
        return cls(ctx, [0, 1], _trusted=True)

    @classmethod
    def t_power(cls, ctx, k, scale=1):
        code = ctx.element(scale).code if not isinstance(scale, FieldElement) else scale.code
        if code == 0:
            return cls.zero(ctx)
        return cls(ctx, [0] * k + [code], _trusted=True)

    # -- basic queries ----------------------------------------------------------

    @property
    def degree(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def lc(self):
        """Leading coefficient code (of the zero polynomial: 0)."""
        return self.c[-1] if self.c else 0

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else 0

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ctx == other.ctx and self.c == other.c
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.q, tuple(self.c)))

    def __bool__(self):
        return bool(self.c)

    # -- ring operations --------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        ctx = self.ctx
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        if len(a) > 512:
            return self._np_add(a, b)
        add = ctx.add_codes
        out = list(a)
        for i, v in enumerate(b):
            out[i] = add(out[i], v)
        while out and out[-1] == 0:
            out.pop()
        return Poly(ctx, out, _trusted=True)

    def _np_add(self, a, b):
        ctx = self.ctx
        d = ctx.digits_np
        da = d[np.asarray(a, dtype=np.int64)].astype(np.int16)
        da[:len(b)] += d[np.asarray(b, dtype=np.int64)]
        codes = ((da % ctx.p).astype(np.int64) @ ctx.weights_np).tolist()
        while codes and codes[-1] == 0:
            codes.pop()
        return Poly(ctx, codes, _trusted=True)

    def __neg__(self):
        neg = self.ctx.neg_code
        return Poly(self.ctx, [neg(v) for v in self.c], _trusted=True)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __mul__(self, other):
        other = self._coerce(other)
        ctx = self.ctx
        a, b = self.c, other.c
        if not a or not b:
            return Poly.zero(ctx)
        if len(a) == 1:
            return other.scale(a[0])
        if len(b) == 1:
            return self.scale(b[0])
        if len(a) * len(b) > _FFT_THRESHOLD:
            return Poly(ctx, _mul_fft(ctx, a, b), _trusted=True)
        return Poly(ctx, _mul_schoolbook(ctx, a, b), _trusted=True)

    def scale(self, code):
        """Multiply by a constant, given as a code or FieldElement."""
        if isinstance(code, FieldElement):
            code = code.code
        if code == 0:
            return Poly.zero(self.ctx)
        if code == 1:
            return self
        mul = self.ctx.mul_codes
        return Poly(self.ctx, [mul(v, code) for v in self.c], _trusted=True)

    def shift(self, k):
        """Multiply by t^k."""
        if not self.c:
            return self
        return Poly(self.ctx, [0] * k + self.c, _trusted=True)

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        ctx = self.ctx
        df = other.degree
        inv_lead = ctx.inv_code(other.lc())
        rem = list(self.c)
        quo = [0] * max(0, len(rem) - df)
        mul, sub = ctx.mul_codes, ctx.sub_codes
        fc = other.c
        while len(rem) - 1 >= df and rem:
            if rem[-1] == 0:
                rem.pop()
                continue
            coeff = mul(rem[-1], inv_lead)
            shift = len(rem) - 1 - df
            quo[shift] = coeff
            for i in range(df + 1):
                rem[shift + i] = sub(rem[shift + i], mul(coeff, fc[i]))
            while rem and rem[-1] == 0:
                rem.pop()
        return (Poly(ctx, quo, _trusted=True), Poly(ctx, rem, _trusted=True))

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e):
        result = Poly.const(self.ctx, 1)
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.ctx != self.ctx:
                raise ValueError("polynomial from a different field context")
            return other
        if isinstance(other, (int, FieldElement)):
            return Poly.const(self.ctx, other)
        raise TypeError(f"cannot combine Poly with {other!r}")

    # -- utilities ----------------------------------------------------------------

    def monic(self):
        if self.is_zero() or self.lc() == 1:
            return self
        return self.scale(self.ctx.inv_code(self.lc()))

    def gcd(self, other):
        a, b = self, self._coerce(other)
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def evaluate(self, x):
        """Horner evaluation at a field element (or code)."""
        code = x.code if isinstance(x, FieldElement) else int(x) % self.ctx.p
        acc = 0
        add, mul = self.ctx.add_codes, self.ctx.mul_codes
        for v in reversed(self.c):
            acc = add(mul(acc, code), v)
        return FieldElement(self.ctx, acc)

    def subs_scaled_t(self, c):
        """The polynomial f(c*t): coefficient i picks up a factor c^i."""
        code = c.code if isinstance(c, FieldElement) else int(c) % self.ctx.p
        mul = self.ctx.mul_codes
        out = []
        power = 1
        for v in self.c:
            out.append(mul(v, power))
            power = mul(power, code)
        while out and out[-1] == 0:
            out.pop()
        return Poly(self.ctx, out, _trusted=True)

    def map_coeffs(self, emb):
        """Push coefficients through a field embedding."""
        return Poly(emb.dst, [emb.apply_code(v) for v in self.c], _trusted=True)

    def __repr__(self):
        return f"Poly({format_poly(self)})"


def _mul_schoolbook(ctx, a, b):
    ctx._ensure_tables()
    exp, log, qm1 = ctx._exp, ctx._log, ctx._qm1
    out = [0] * (len(a) + len(b) - 1)
    tab = ctx._ensure_add_table()
    if tab is not None:
        q = ctx.q
        for i, ai in enumerate(a):
            if ai:
                la = log[ai]
                for j, bj in enumerate(b):
                    if bj:
                        k = i + j
                        out[k] = tab[out[k] * q + exp[(la + log[bj]) % qm1]]
    else:
        add = ctx.add_codes
        for i, ai in enumerate(a):
            if ai:
                la = log[ai]
                for j, bj in enumerate(b):
                    if bj:
                        k = i + j
                        out[k] = add(out[k], exp[(la + log[bj]) % qm1])
    while out and out[-1] == 0:
        out.pop()
    return out


def _mul_fft(ctx, a, b):
    """Exact product via per-plane real FFTs over the prime subfield.

    Coefficients are split into their m base-p digit planes; plane
    convolutions are exact in float64 because every convolution value is
    bounded by (p-1)^2 * len * m, far below 2^53.
    """
    p, m = ctx.p, ctx.m
    d = ctx.digits_np
    da = d[np.asarray(a, dtype=np.int64)].astype(np.float64)
    db = d[np.asarray(b, dtype=np.int64)].astype(np.float64)
    n_out = len(a) + len(b) - 1
    size = 1
    while size < n_out:
        size <<= 1
    fa = np.fft.rfft(da, n=size, axis=0)
    fb = np.fft.rfft(db, n=size, axis=0)
    # product has X-degree up to 2m-2 before reduction mod the field modulus
    planes = np.zeros((n_out, 2 * m - 1), dtype=np.int64)
    for s in range(2 * m - 1):
        acc = None
        lo = max(0, s - (m - 1))
        for i in range(lo, min(s, m - 1) + 1):
            term = fa[:, i] * fb[:, s - i]
            acc = term if acc is None else acc + term
        vals = np.fft.irfft(acc, n=size)[:n_out]
        planes[:, s] = np.rint(vals).astype(np.int64)
    planes %= p
    if m > 1:
        red = _reduction_rows(ctx)
        digits = (planes[:, :m] + planes[:, m:] @ red) % p
    else:
        digits = planes
    codes = (digits.astype(np.int64) @ ctx.weights_np).tolist()
    while codes and codes[-1] == 0:
        codes.pop()
    return codes


_REDUCTION_CACHE = {}


def _reduction_rows(ctx):
    """(m-1) x m matrix whose row i is the digit vector of X^(m+i) mod f."""
    key = (ctx.p, ctx.m, ctx.modulus)
    if key not in _REDUCTION_CACHE:
        from .gf import _pmod
        rows = np.zeros((ctx.m - 1, ctx.m), dtype=np.int64)
        cur = [0] * ctx.m + [1]
        for i in range(ctx.m - 1):
            r = _pmod(list(cur), list(ctx.modulus), ctx.p)
            for j, v in enumerate(r):
                rows[i, j] = v
            cur = [0] + cur
        _REDUCTION_CACHE[key] = rows
    return _REDUCTION_CACHE[key]


class RatFn:
    """Reduced rational function in t: gcd(num, den) = 1, den monic."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _trusted=False):
        if den is None:
            den = Poly.const(num.ctx, 1)
        if _trusted:
            self.num = num
            self.den = den
            return
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num = num
            self.den = Poly.const(num.ctx, 1)
            return
        g = num.gcd(den)
        if g.degree > 0:
            num = num // g
            den = den // g
        if den.lc() != 1:
            inv = num.ctx.inv_code(den.lc())
            num = num.scale(inv)
            den = den.scale(inv)
        self.num = num
        self.den = den

    @classmethod
    def from_poly(cls, poly):
        return cls(poly, Poly.const(poly.ctx, 1), _trusted=True)

    @classmethod
    def const(cls, ctx, value):
        return cls.from_poly(Poly.const(ctx, value))

    @property
    def ctx(self):
        return self.num.ctx

    def is_zero(self):
        return self.num.is_zero()

    def is_poly(self):
        return self.den.degree == 0

    def map_degree(self):
        """Degree as a map to P^1: max of numerator/denominator degrees.

        Nonzero constants get 0; so does the zero function.
        """
        if self.num.is_zero():
            return 0
        return max(self.num.degree, self.den.degree)

    def v_infinity(self):
        """Valuation at the place at infinity: deg(den) - deg(num)."""
        if self.num.is_zero():
            raise ValueError("the zero function has no finite valuation")
        return self.den.degree - self.num.degree

    def __add__(self, other):
        other = self._coerce(other)
        return RatFn(self.num * other.den + other.num * self.den,
                     self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RatFn(-self.num, self.den, _trusted=True)

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFn(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFn(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (Poly, int, FieldElement)):
            other = self._coerce(other)
        if isinstance(other, RatFn):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash((hash(self.num), hash(self.den)))

    def _coerce(self, other):
        if isinstance(other, RatFn):
            if other.ctx != self.ctx:
                raise ValueError("rational function from a different field context")
            return other
        if isinstance(other, Poly):
            return RatFn.from_poly(other)
        if isinstance(other, (int, FieldElement)):
            return RatFn.const(self.ctx, other)
        raise TypeError(f"cannot combine RatFn with {other!r}")

    def subs_scaled_t(self, c):
        return RatFn(self.num.subs_scaled_t(c), self.den.subs_scaled_t(c))

    def __repr__(self):
        if self.is_poly():
            return f"RatFn({format_poly(self.num)})"
        return f"RatFn(({format_poly(self.num)}) / ({format_poly(self.den)}))"


# ---------------------------------------------------------------------------
# parsing / printing of t-polynomials (CLI point literals)


def format_coeff(ctx, code):
    coeffs = ctx.coeffs_of(code)
    if all(c == 0 for c in coeffs[1:]):
        return str(coeffs[0])
    if ctx.has_tables:
        k = ctx.log_code(code)
        return "g" if k == 1 else f"g^{k}"
    return "(" + ",".join(map(str, coeffs)) + ")"


def format_poly(poly, var="t"):
    if poly.is_zero():
        return "0"
    terms = []
    for i in range(poly.degree, -1, -1):
        v = poly[i]
        if v == 0:
            continue
        cs = format_coeff(poly.ctx, v)
        if i == 0:
            terms.append(cs)
        else:
            tv = var if i == 1 else f"{var}^{i}"
            terms.append(tv if cs == "1" else f"{cs}*{tv}")
    return " + ".join(terms)


def parse_poly(ctx, text, var="t"):
    """Parse a t-polynomial literal.

    Accepts either a bracketed low-first coefficient list, e.g. "[0,0,1]",
    or a sum of monomials over integers and powers g^k of the field
    generator: "t^2", "-t^3 + t", "2*t^4 + g^3*t - 1".
    """
    text = text.strip()
    if text.startswith("["):
        if not text.endswith("]"):
            raise ValueError(f"unterminated coefficient list: {text!r}")
        inner = text[1:-1].strip()
        coeffs = [int(v) for v in inner.split(",")] if inner else []
        return Poly(ctx, coeffs)
    cleaned = text.replace("-", "+-").replace(" ", "")
    if cleaned.startswith("+"):
        cleaned = cleaned[1:]
    result = Poly.zero(ctx)
    for term in cleaned.split("+"):
        if not term:
            continue
        neg = term.startswith("-")
        if neg:
            term = term[1:]
        coeff = ctx.one()
        power = 0
        for factor in term.split("*"):
            if not factor:
                raise ValueError(f"malformed term in {text!r}")
            if factor.startswith(var):
                rest = factor[len(var):]
                power += int(rest[1:]) if rest.startswith("^") else (1 if not rest else int(rest))
            elif factor.startswith("g"):
                rest = factor[1:]
                k = int(rest[1:]) if rest.startswith("^") else 1
                coeff = coeff * ctx.gen() ** k
            else:
                coeff = coeff * ctx.element(int(factor))
        if neg:
            coeff = -coeff
        result = result + Poly.t_power(ctx, power, coeff)
    return result
