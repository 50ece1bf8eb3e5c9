"""Finite fields F_{p^m} in odd characteristic, with towers and embeddings.

A field is a `FieldCtx`: the quotient of F_p[X] by a monic irreducible
modulus of degree m.  By default the modulus is the lexicographically
smallest monic irreducible (coefficients compared low-degree-first), so
`make_field(p, m)` is fully deterministic; an explicit modulus can be
supplied to honor a specific presentation such as F_9 = F_3[X]/(X^2-X-1).

Elements are stored as integer codes: the coefficient vector (c_0..c_{m-1})
packed in base p.  Code order (plain integer order) is the fixed element
ordering used everywhere for determinism.

For enumeration-heavy work each context lazily builds discrete log/exp
tables with respect to its canonical generator; multiplication, powers and
quadratic-character evaluation then cost O(1).  Contexts too large for
tables fall back to direct polynomial arithmetic.
"""

import math
from array import array
from functools import lru_cache

import numpy as np

# Largest field for which log/exp tables are materialized (3^12 = 531441
# needs ~8 MB; anything bigger uses the slow scalar path).
TABLE_LIMIT = 2_000_000

# Hard guard on field construction.
SIZE_LIMIT = 2**32


class SizeGuardError(ValueError):
    """An enumeration or table request exceeded its configured size guard."""


# ---------------------------------------------------------------------------
# bootstrap polynomial arithmetic over F_p (dense coefficient lists)

def _ptrim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _pmod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(a) - 1 >= df and a:
        if a[-1] == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i in range(df + 1):
            a[shift + i] = (a[shift + i] - c * f[i]) % p
        _ptrim(a)
    return a


def _ppowmod(base, e, f, p):
    result = [1]
    base = _pmod(base, f, p)
    while e > 0:
        if e & 1:
            result = _pmod(_pmul(result, base, p), f, p)
        base = _pmod(_pmul(base, base, p), f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _pmod(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(coeffs, p):
    """Monic-polynomial irreducibility test over F_p.

    Uses the standard criterion: X^(p^m) = X mod f, and for every prime
    divisor l of m, gcd(X^(p^(m/l)) - X, f) = 1.
    """
    f = list(coeffs)
    m = len(f) - 1
    if m < 1 or f[-1] != 1:
        return False
    if m == 1:
        return True
    x = [0, 1]

    def minus_x(poly):
        out = list(poly) + [0] * max(0, 2 - len(poly))
        out[1] = (out[1] - 1) % p
        return _ptrim(out)

    if minus_x(_ppowmod(x, p**m, f, p)):
        return False
    for l in _prime_factors(m):
        g = _pgcd(f, minus_x(_ppowmod(x, p ** (m // l), f, p)), p)
        if len(g) - 1 != 0:
            return False
    return True


def _smallest_irreducible(p, m):
    """Lexicographically smallest monic irreducible of degree m over F_p.

    Non-leading coefficients are compared low-degree-first, so the search
    iterates c_0 outermost.  Candidates with c_0 = 0 are divisible by X and
    are skipped outright.
    """
    import itertools

    if m == 1:
        return (0, 1)  # X itself
    for c0 in range(1, p):
        for rest in itertools.product(range(p), repeat=m - 1):
            cand = [c0, *rest, 1]
            # cheap root filter before the full criterion
            if any(sum(c * pow(a, i, p) for i, c in enumerate(cand)) % p == 0
                   for a in range(p)):
                continue
            if is_irreducible(cand, p):
                return tuple(cand)
    raise RuntimeError(f"no irreducible polynomial of degree {m} over F_{p}")


def _is_prime(n):
    if n < 2:
        return False
    for d in range(2, int(math.isqrt(n)) + 1):
        if n % d == 0:
            return False
    return True


# ---------------------------------------------------------------------------


class FieldCtx:
    """A finite field F_{p^m} = F_p[X]/(modulus), with cached tables.

    Immutable after construction; safe to share across workers.  All
    element-level operations are pure functions on integer codes.
    """

    def __init__(self, p, m, modulus=None):
        if not _is_prime(p) or p == 2:
            raise ValueError(f"characteristic must be an odd prime, got {p}")
        if m < 1:
            raise ValueError(f"degree must be positive, got {m}")
        if p**m > SIZE_LIMIT:
            raise SizeGuardError(f"{p}^{m} exceeds the field size guard {SIZE_LIMIT}")
        if modulus is None:
            modulus = _smallest_irreducible(p, m)
        else:
            modulus = tuple(c % p for c in modulus)
            if len(modulus) != m + 1 or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree m")
            if not is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is reducible over F_{p}")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = modulus
        self._qm1 = self.q - 1
        self._weights = tuple(p**i for i in range(m))
        self.generator = self._find_generator()
        # lazy tables
        self._exp = None          # array('q'), length q-1, exp[k] = code of gen^k
        self._log = None          # array('q'), length q, log[code]; log[0] = -1
        self._exp_np = None
        self._log_np = None
        self._digits_np = None    # (q, m) int8 matrix of coefficient vectors
        self._add_flat = None     # flat q*q addition table for tiny fields

    # -- construction helpers ------------------------------------------------

    def _find_generator(self):
        """Smallest element code of multiplicative order p^m - 1."""
        factors = _prime_factors(self._qm1) if self._qm1 > 1 else []
        for code in range(1, self.q):
            poly = _ptrim(list(self.coeffs_of(code)))
            if all(_ppowmod(poly, self._qm1 // l, list(self.modulus), self.p) != [1]
                   for l in factors):
                return code
        raise RuntimeError("no generator found")  # unreachable

    # -- code <-> coefficient vector ----------------------------------------

    def coeffs_of(self, code):
        p = self.p
        out = []
        for _ in range(self.m):
            code, r = divmod(code, p)
            out.append(r)
        return tuple(out)

    def code_of(self, coeffs):
        if len(coeffs) > self.m:
            raise ValueError("coefficient vector longer than field degree")
        return sum((c % self.p) * w for c, w in zip(coeffs, self._weights))

    # -- tables ---------------------------------------------------------------

    @property
    def has_tables(self):
        return self.q <= TABLE_LIMIT

    def _ensure_tables(self):
        if self._exp is not None:
            return
        if not self.has_tables:
            raise SizeGuardError(
                f"field of size {self.q} exceeds the table guard {TABLE_LIMIT}")
        p, m, q = self.p, self.m, self.q
        weights = np.array(self._weights, dtype=np.int64)
        # Powers of the generator, built by repeated block doubling: a block
        # of digit rows [g^0 .. g^(s-1)] extends to [g^0 .. g^(2s-1)] via one
        # matmul with the multiplication matrix of g^s.
        block = np.zeros((1, m), dtype=np.int16)
        block[0, 0] = 1
        size = 1
        while size < self._qm1:
            gs = _ppowmod(list(self.coeffs_of(self.generator)), size,
                          list(self.modulus), p)
            mat = self._mult_matrix(gs)
            take = min(size, self._qm1 - size)
            ext = (block[:take].astype(np.int32) @ mat) % p
            block = np.vstack([block, ext.astype(np.int16)])
            size += take
        exp_np = (block.astype(np.int64) @ weights)
        log_np = np.full(q, -1, dtype=np.int64)
        log_np[exp_np] = np.arange(self._qm1, dtype=np.int64)
        exp_arr = array('q')
        exp_arr.frombytes(exp_np.astype('<i8').tobytes())
        log_arr = array('q')
        log_arr.frombytes(log_np.astype('<i8').tobytes())
        self._exp_np, self._log_np = exp_np, log_np
        self._exp, self._log = exp_arr, log_arr

    def _mult_matrix(self, s_poly):
        """m x m int32 matrix M with digits(u*s) = digits(u) @ M mod p."""
        p, m = self.p, self.m
        mat = np.zeros((m, m), dtype=np.int32)
        cur = list(s_poly)
        for j in range(m):
            for i, c in enumerate(cur):
                mat[j, i] = c
            # multiply by X and reduce
            cur = _pmod([0] + cur, list(self.modulus), p)
        return mat

    @property
    def exp_np(self):
        self._ensure_tables()
        return self._exp_np

    @property
    def log_np(self):
        self._ensure_tables()
        return self._log_np

    @property
    def digits_np(self):
        if self._digits_np is None:
            if self.q > TABLE_LIMIT:
                raise SizeGuardError(
                    f"digit table for field of size {self.q} exceeds guard")
            codes = np.arange(self.q, dtype=np.int64)
            digs = np.empty((self.q, self.m), dtype=np.int8)
            for i in range(self.m):
                digs[:, i] = (codes // self._weights[i]) % self.p
            self._digits_np = digs
        return self._digits_np

    @property
    def weights_np(self):
        return np.array(self._weights, dtype=np.int64)

    def _ensure_add_table(self):
        # Full pairwise addition table; only worthwhile for tiny fields that
        # appear as coefficient fields of polynomial arithmetic.
        if self._add_flat is None and self.q <= 729:
            d = self.digits_np.astype(np.int16)
            sums = (d[:, None, :] + d[None, :, :]) % self.p
            codes = sums.astype(np.int64) @ self.weights_np
            flat = array('q')
            flat.frombytes(codes.reshape(-1).astype('<i8').tobytes())
            self._add_flat = flat
        return self._add_flat

    # -- scalar code arithmetic ----------------------------------------------

    def add_codes(self, a, b):
        tab = self._ensure_add_table()
        if tab is not None:
            return tab[a * self.q + b]
        p = self.p
        out = 0
        w = 1
        for _ in range(self.m):
            out += ((a + b) % p) * w
            a //= p
            b //= p
            w *= p
        return out

    def neg_code(self, a):
        p = self.p
        out = 0
        w = 1
        for _ in range(self.m):
            out += (-a % p) * w
            a //= p
            w *= p
        return out

    def sub_codes(self, a, b):
        return self.add_codes(a, self.neg_code(b))

    def mul_codes(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            self._ensure_tables()
            return self._exp[(self._log[a] + self._log[b]) % self._qm1]
        prod = _pmod(_pmul(list(self.coeffs_of(a)), list(self.coeffs_of(b)),
                           self.p), list(self.modulus), self.p)
        return self.code_of(prod)

    def inv_code(self, a):
        if a == 0:
            raise ZeroDivisionError("inversion of zero field element")
        if self.has_tables:
            self._ensure_tables()
            return self._exp[(-self._log[a]) % self._qm1]
        return self.pow_code(a, self._qm1 - 1)

    def pow_code(self, a, e):
        if e < 0:
            return self.pow_code(self.inv_code(a), -e)
        if a == 0:
            return 0 if e else 1
        if self.has_tables:
            self._ensure_tables()
            return self._exp[(self._log[a] * (e % self._qm1)) % self._qm1]
        poly = _ppowmod(list(self.coeffs_of(a)), e % self._qm1 if e else 0,
                        list(self.modulus), self.p)
        return self.code_of(poly)

    def legendre_code(self, a):
        """Order-2 character x -> x^((q-1)/2), as an integer in {-1, 0, 1}."""
        if a == 0:
            return 0
        if self.has_tables:
            self._ensure_tables()
            return 1 - 2 * (self._log[a] & 1)
        r = self.pow_code(a, self._qm1 // 2)
        return 1 if r == 1 else -1

    def log_code(self, a):
        if a == 0:
            raise ValueError("discrete log of zero")
        self._ensure_tables()
        return self._log[a]

    def order_of(self, a):
        if a == 0:
            raise ValueError("zero has no multiplicative order")
        if self.has_tables:
            return self._qm1 // math.gcd(self.log_code(a), self._qm1)
        order = self._qm1
        for l in _prime_factors(self._qm1):
            while order % l == 0 and self.pow_code(a, order // l) == 1:
                order //= l
        return order

    # -- element factory ------------------------------------------------------

    def element(self, value):
        """Coerce an int (reduced mod p), code, coefficient list, or element."""
        if isinstance(value, FieldElement):
            if value.ctx is not self:
                raise ValueError("element belongs to a different field context")
            return value
        if isinstance(value, int):
            return FieldElement(self, value % self.p)
        if isinstance(value, (list, tuple)):
            return FieldElement(self, self.code_of(value))
        raise TypeError(f"cannot coerce {value!r} into {self!r}")

    def from_code(self, code):
        if not 0 <= code < self.q:
            raise ValueError(f"code {code} out of range for field of size {self.q}")
        return FieldElement(self, code)

    def zero(self):
        return FieldElement(self, 0)

    def one(self):
        return FieldElement(self, 1)

    def gen(self):
        return FieldElement(self, self.generator)

    def elements(self):
        """All field elements in the fixed (coefficient odometer) order."""
        for code in range(self.q):
            yield FieldElement(self, code)

    def describe(self):
        """Textual format 'p^m:c0,c1,...,cm' used in CLI output and reports."""
        return f"{self.p}^{self.m}:" + ",".join(str(c) for c in self.modulus)

    def __repr__(self):
        return f"FieldCtx({self.describe()})"

    def __eq__(self, other):
        return (isinstance(other, FieldCtx)
                and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))


class FieldElement:
    """Element of a FieldCtx, wrapping an integer code."""

    __slots__ = ("ctx", "code")

    def __init__(self, ctx, code):
        self.ctx = ctx
        self.code = code

    @property
    def coeffs(self):
        return self.ctx.coeffs_of(self.code)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.ctx != self.ctx:
                raise ValueError("field context mismatch")
            return other.code
        if isinstance(other, int):
            return other % self.ctx.p
        return NotImplemented

    def __add__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.add_codes(self.code, c))

    __radd__ = __add__

    def __sub__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.sub_codes(self.code, c))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul_codes(self.code, c))

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = self._coerce(other)
        if c is NotImplemented:
            return NotImplemented
        return FieldElement(self.ctx, self.ctx.mul_codes(self.code, self.ctx.inv_code(c)))

    def __rtruediv__(self, other):
        c = self._coerce(other)
        return FieldElement(self.ctx, self.ctx.mul_codes(c, self.ctx.inv_code(self.code)))

    def __pow__(self, e):
        return FieldElement(self.ctx, self.ctx.pow_code(self.code, e))

    def __neg__(self):
        return FieldElement(self.ctx, self.ctx.neg_code(self.code))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.ctx == other.ctx and self.code == other.code
        if isinstance(other, int):
            return self.code == other % self.ctx.p if abs(other) < self.ctx.p else NotImplemented
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.m, self.code))

    def __bool__(self):
        return self.code != 0

    def inverse(self):
        return FieldElement(self.ctx, self.ctx.inv_code(self.code))

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                base = "X" if i == 1 else f"X^{i}"
                terms.append(base if c == 1 else f"{c}*{base}")
        body = " + ".join(terms) if terms else "0"
        return f"<{body} in GF({self.ctx.p}^{self.ctx.m})>"


@lru_cache(maxsize=None)
def _make_field_cached(p, m, modulus):
    return FieldCtx(p, m, modulus)


def make_field(p, m, modulus=None):
    """Deterministic field context for F_{p^m}.

    Same (p, m, modulus) always yields the identical (cached) context; with
    no modulus given, the lexicographically smallest monic irreducible is
    selected.
    """
    if modulus is not None:
        modulus = tuple(c % p for c in modulus)
    return _make_field_cached(p, m, modulus)


def legendre(x):
    """Quadratic character of a field element: 0 at 0, otherwise +/-1."""
    return x.ctx.legendre_code(x.code)


# ---------------------------------------------------------------------------
# embeddings between tower levels


def _divisors(n):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def _horner_code(dst, coeffs, at_code):
    acc = 0
    for c in reversed(coeffs):
        acc = dst.add_codes(dst.mul_codes(acc, at_code), c % dst.p)
    return acc


def _roots_in_subfield(dst, modulus, degree):
    """All roots in dst of a degree-`degree` irreducible over F_p.

    They lie in the subfield of size p^degree, so only the powers
    gen^(k * s) with s = (q-1)/(p^degree - 1) need testing.
    """
    dst._ensure_tables()
    s = dst._qm1 // (dst.p**degree - 1)
    mod = list(modulus)
    roots = []
    for k in range(dst.p**degree - 1):
        cand = dst._exp[(k * s) % dst._qm1]
        if _horner_code(dst, mod, cand) == 0:
            roots.append(cand)
    return sorted(roots)


@lru_cache(maxsize=None)
def _compat_root_table(ctx):
    """For a canonical context: image in ctx of the class of X of every
    canonical subfield, one entry per divisor of the degree.

    Entries are built in increasing degree order; the entry for degree d is
    the smallest root of the canonical degree-d modulus whose induced
    embedding agrees with the already-fixed entries on every proper divisor
    of d.  This makes embeddings between canonical fields compose exactly,
    without norm-compatible (Conway-style) moduli.
    """
    p, m = ctx.p, ctx.m
    table = {1: 0}
    for d in _divisors(m)[1:]:
        kd = make_field(p, d)
        if d == m:
            table[d] = ctx.code_of((0, 1)) if m > 1 else 0
            continue
        sub = _compat_root_table(kd)
        chosen = None
        for cand in _roots_in_subfield(ctx, kd.modulus, d):
            ok = True
            for dp in _divisors(d)[:-1]:
                image = _horner_code(ctx, kd.coeffs_of(sub[dp]), cand)
                if image != table[dp]:
                    ok = False
                    break
            if ok:
                chosen = cand
                break
        if chosen is None:  # cannot happen: extensions always exist
            raise RuntimeError(f"no compatible degree-{d} root in {ctx!r}")
        table[d] = chosen
    return table


class Embedding:
    """Ring embedding F_{p^d} -> F_{p^m} for d | m.

    Determined by the image of the class of X (a root of the source modulus
    in the target field).  Between canonical contexts the root comes from a
    compatible system, so embeddings compose exactly; for explicit
    presentation overrides the smallest root in code order is used.
    """

    def __init__(self, src, dst):
        if src.p != dst.p:
            raise ValueError("embedding requires equal characteristic")
        if dst.m % src.m != 0:
            raise ValueError(f"source degree {src.m} does not divide target degree {dst.m}")
        self.src = src
        self.dst = dst
        self.root = self._find_root()
        powers = [1]
        for _ in range(src.m - 1):
            powers.append(dst.mul_codes(powers[-1], self.root))
        self._powers = tuple(powers)

    def _find_root(self):
        src, dst = self.src, self.dst
        if src.m == 1:
            return 0  # class of X in F_p[X]/(X) is 0
        if src.modulus == make_field(src.p, src.m).modulus \
                and dst.modulus == make_field(dst.p, dst.m).modulus:
            return _compat_root_table(make_field(dst.p, dst.m))[src.m]
        roots = _roots_in_subfield(dst, src.modulus, src.m)
        if not roots:
            raise RuntimeError("source modulus has no root in target field")
        return roots[0]

    def apply_code(self, code):
        out = 0
        for c, pw in zip(self.src.coeffs_of(code), self._powers):
            if c:
                out = self.dst.add_codes(out, self.dst.mul_codes(c, pw))
        return out

    def __call__(self, e):
        return embed(e, self)

    def __repr__(self):
        return f"Embedding({self.src.describe()} -> {self.dst.describe()})"


@lru_cache(maxsize=None)
def _embedding_cached(src, dst):
    return Embedding(src, dst)


def embedding(src, dst):
    return _embedding_cached(src, dst)


def embed(e, emb):
    """Image of a source-field element under a tower embedding."""
    if e.ctx != emb.src:
        raise ValueError("element does not belong to the embedding source")
    return FieldElement(emb.dst, emb.apply_code(e.code))


def norm_map(ctx, sub_degree, x):
    """Norm from F_{p^m} onto the subfield of degree sub_degree.

    Multiplicative; the value is returned as an element of the big context
    (it lies in the subfield image).
    """
    if ctx.m % sub_degree != 0:
        raise ValueError(f"{sub_degree} does not divide field degree {ctx.m}")
    if isinstance(x, FieldElement):
        if x.ctx != ctx:
            raise ValueError("field context mismatch")
        x = x.code
    e = (ctx.q - 1) // (ctx.p**sub_degree - 1)
    return FieldElement(ctx, ctx.pow_code(x, e))


def trace_map(ctx, sub_degree, x):
    """Trace onto the subfield of degree sub_degree (additive, surjective)."""
    if ctx.m % sub_degree != 0:
        raise ValueError(f"{sub_degree} does not divide field degree {ctx.m}")
    if isinstance(x, FieldElement):
        if x.ctx != ctx:
            raise ValueError("field context mismatch")
        x = x.code
    qd = ctx.p**sub_degree
    acc = 0
    term = x
    for _ in range(ctx.m // sub_degree):
        acc = ctx.add_codes(acc, term)
        term = ctx.pow_code(term, qd)
    return FieldElement(ctx, acc)


# ---------------------------------------------------------------------------
# the twist parameter b


def b_condition_holds(b, n):
    """Check b^((3^n - 1)/2) = (-1)^(n+1) in the field of b."""
    ctx = b.ctx
    if b.code == 0:
        return False
    val = ctx.pow_code(b.code, (3**n - 1) // 2)
    want = 1 if n % 2 == 1 else ctx.neg_code(1)
    return val == want


def choose_b(n, ctx=None):
    """Deterministic twist parameter in F_{3^n}.

    1 for odd n (a square); the canonical generator (a non-square) for even
    n.  Any user-supplied b passing `b_condition_holds` is equally valid.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if ctx is None:
        ctx = make_field(3, n)
    if ctx.p != 3 or ctx.m != n:
        raise ValueError(f"context {ctx!r} is not a presentation of F_(3^{n})")
    b = ctx.one() if n % 2 == 1 else ctx.gen()
    if not b_condition_holds(b, n):  # defensive; cannot fail
        raise RuntimeError("default twist parameter fails its defining condition")
    return b
