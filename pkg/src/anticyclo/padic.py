"""Exact arithmetic in Q_p and its quadratic extensions at fixed precision.

Values are stored as p^v * u with the unit part u known modulo p^N (N = number
of known digits beyond the valuation).  Arithmetic never silently gains
precision; cancellation in sums produces "inexact zeros" O(p^A) that remember
only an absolute bound.  The logarithm uses the branch log(p) = 0 and kills
Teichmueller parts, so log(q)/ord(q) is well defined for Tate parameters.
"""

from fractions import Fraction

INF = float("inf")


class PadicDomainError(ValueError):
    pass


class PrecisionError(ArithmeticError):
    pass


def _vp(n, p):
    if n == 0:
        return INF
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


class PadicNum:
    """An element of Q_p: p^val * unit with unit known mod p^prec.

    Exact zero has val = INF.  An inexact zero (all known digits cancelled)
    has unit == 0, prec == 0 and val = the absolute bound A, meaning O(p^A).
    """

    __slots__ = ("p", "val", "unit", "prec")

    def __init__(self, p, val, unit, prec):
        self.p = p
        self.val = val
        self.unit = unit
        self.prec = prec

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(p):
        return PadicNum(p, INF, 0, 0)

    @staticmethod
    def inexact_zero(p, abs_bound):
        return PadicNum(p, abs_bound, 0, 0)

    @staticmethod
    def from_rational(num, den, p, N):
        """make_padic: num/den at relative precision N (unit digits mod p^N)."""
        if den == 0:
            raise PadicDomainError("denominator is zero")
        if N <= 0:
            raise PrecisionError("requested precision N <= 0")
        if num == 0:
            return PadicNum.zero(p)
        vn, vd = _vp(num, p), _vp(den, p)
        val = vn - vd
        un = num // p**vn
        ud = den // p**vd
        m = p**N
        unit = un * pow(ud, -1, m) % m
        return PadicNum(p, val, unit, N)

    @staticmethod
    def from_int(n, p, N):
        return PadicNum.from_rational(n, 1, p, N)

    @staticmethod
    def from_fraction(q, p, N):
        return PadicNum.from_rational(q.numerator, q.denominator, p, N)

    # -- structure -----------------------------------------------------

    def is_exact_zero(self):
        return self.val is INF or self.val == INF

    def is_zero(self):
        """Indistinguishable from zero at the working precision."""
        return self.unit == 0

    def abs_prec(self):
        """Exponent A such that the value is known mod p^A."""
        if self.is_exact_zero():
            return INF
        if self.unit == 0:
            return self.val
        return self.val + self.prec

    def valuation(self):
        if self.unit == 0 and not self.is_exact_zero():
            raise PrecisionError("valuation only bounded below: O(p^%s)" % self.val)
        return self.val

    def lift(self, A=None):
        """Integer representative of the value mod p^A (requires val >= 0)."""
        if A is None:
            A = self.abs_prec()
            if A is INF:
                return 0
        if self.is_exact_zero():
            return 0
        if self.val < 0:
            raise PadicDomainError("negative valuation has no integer lift")
        if self.val >= A:
            return 0
        return self.p**self.val * self.unit % self.p**A

    def _normalized(p, value, A):
        """Canonical PadicNum from an integer value known mod p^A."""
        value %= p**A
        if value == 0:
            return PadicNum.inexact_zero(p, A)
        v = _vp(value, p)
        return PadicNum(p, v, value // p**v, A - v)

    # -- ring operations ------------------------------------------------

    def _check(self, other):
        if self.p != other.p:
            raise PadicDomainError("mixed primes %s and %s" % (self.p, other.p))

    def __add__(self, other):
        if isinstance(other, int):
            other = PadicNum.from_int(other, self.p, self.prec if self.unit else 8)
        self._check(other)
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        A = min(self.abs_prec(), other.abs_prec())
        if A <= 0:
            raise PrecisionError("no common absolute precision")
        p = self.p
        shift = min(self.val if self.unit else A, other.val if other.unit else A, 0)
        # work relative to p^shift so negative valuations stay integral
        Ar = A - shift
        x = self.lift_shifted(shift, Ar)
        y = other.lift_shifted(shift, Ar)
        r = PadicNum._normalized(p, x + y, Ar)
        r.val = r.val + shift if r.unit else A
        return r

    def lift_shifted(self, shift, Ar):
        """Integer rep of value / p^shift mod p^Ar."""
        if self.is_exact_zero() or self.unit == 0:
            return 0
        e = self.val - shift
        if e >= Ar:
            return 0
        return self.p**e * self.unit % self.p**Ar

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        if self.is_exact_zero() or self.unit == 0:
            return self
        m = self.p**self.prec
        return PadicNum(self.p, self.val, (-self.unit) % m, self.prec)

    def __sub__(self, other):
        if isinstance(other, int):
            other = PadicNum.from_int(other, self.p, self.prec if self.unit else 8)
        return self.__add__(other.__neg__())

    def __rsub__(self, other):
        return self.__neg__().__add__(other)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return PadicNum.zero(self.p)
            v, u = _vp(other, self.p), None
            u = other // self.p**v
            other = PadicNum(self.p, v, u % self.p**max(self.prec, 1), max(self.prec, 1))
        self._check(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return PadicNum.zero(self.p)
        if self.unit == 0 or other.unit == 0:
            # O(p^a) * (p^v u + O(..)) = O(p^(a+v))
            return PadicNum.inexact_zero(self.p, self.val + other.val)
        N = min(self.prec, other.prec)
        m = self.p**N
        return PadicNum(self.p, self.val + other.val, self.unit * other.unit % m, N)

    def __rmul__(self, other):
        return self.__mul__(other)

    def inverse(self):
        if self.is_exact_zero():
            raise PadicDomainError("division by exact zero")
        if self.unit == 0:
            raise PrecisionError("cannot invert a value indistinguishable from 0")
        m = self.p**self.prec
        return PadicNum(self.p, -self.val, pow(self.unit, -1, m), self.prec)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = PadicNum.from_int(other, self.p, max(self.prec, 1) if self.unit else 8)
        return self.__mul__(other.inverse())

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        r = PadicNum(self.p, 0, 1, self.prec if self.unit else 8)
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other):
        """Equality of all digits both sides know (congruence mod p^min(A))."""
        if isinstance(other, int):
            other = PadicNum.from_int(other, self.p, max(self.prec, 1) if self.unit else 8)
        if self.p != other.p:
            return False
        d = self - other
        return d.is_exact_zero() or d.unit == 0

    def __hash__(self):
        raise TypeError("PadicNum is unhashable (precision-dependent equality)")

    # -- display --------------------------------------------------------

    def digits(self, count=None):
        if count is None:
            count = self.prec
        out, u = [], self.unit
        for _ in range(count):
            u, r = divmod(u, self.p)
            out.append(r)
        return out

    def __repr__(self):
        return self.to_text()

    def to_text(self):
        """Canonical form `p^v * (d0 + d1*p + ...) + O(p^M)`."""
        p = self.p
        if self.is_exact_zero():
            return "0"
        if self.unit == 0:
            return "O(%d^%d)" % (p, self.val)
        ds = " + ".join(
            "%d" % d if i == 0 else "%d*%d^%d" % (d, p, i)
            for i, d in enumerate(self.digits())
        )
        return "%d^%d * (%s) + O(%d^%d)" % (p, self.val, ds, p, self.abs_prec())

    def to_dict(self):
        return {
            "p": self.p,
            "valuation": None if self.is_exact_zero() else self.val,
            "precision": self.prec,
            "digits": self.digits() if self.unit else [],
        }


# ---------------------------------------------------------------------------
# integer-level helpers (used pervasively by the table/Iwasawa layers)
# ---------------------------------------------------------------------------

def teichmuller_int(a, p, N):
    """omega(a) mod p^N: the (p-1)-th root of unity congruent to a mod p."""
    if a % p == 0:
        raise PadicDomainError("Teichmuller lift of a non-unit")
    m = p**N
    x = a % m
    for _ in range(N + 1):
        y = pow(x, p, m)
        if y == x:
            break
        x = y
    return x


def log1p_series_int(t, p, N):
    """log(1+t) mod p^N for v_p(t) >= 1, t given as an integer.

    Works with a guard digit for the 1/n denominators.
    """
    c = _vp(t, p)
    if c is INF:
        return 0
    if c < 1:
        raise PadicDomainError("log series needs v_p(t) >= 1")
    # number of terms: n*c - v_p(n) >= N
    nmax = 1
    while nmax * c - _vp_int_bound(nmax, p) < N:
        nmax += 1
    buf = 1
    while p**buf <= nmax:
        buf += 1
    M = p**(N + buf)
    acc = 0
    tn = 1
    for n in range(1, nmax + 1):
        tn = tn * t % M
        vn = _vp(n, p)
        nu = n // p**vn
        term = tn // p**vn * pow(nu, -1, M) % M
        # (t^n has valuation >= n*c >= vn, so the integer division is exact
        # up to the working modulus)
        if n % 2 == 1:
            acc = (acc + term) % M
        else:
            acc = (acc - term) % M
    return acc % p**N


def _vp_int_bound(n, p):
    # v_p(n) <= log_p(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def log_unit_int(u, p, N):
    """Iwasawa log of a unit u mod p^N (kills the Teichmuller part)."""
    if u % p == 0:
        raise PadicDomainError("log of a non-unit")
    t = (pow(u, p - 1, p**(N + 2)) - 1) % p**(N + 2)
    lg = log1p_series_int(t, p, N)
    return lg * pow(p - 1, -1, p**N) % p**N


def s_coordinate(u, p, N):
    """s(u) = log<u> / log(1+p) mod p^N; the wild coordinate of a unit."""
    lg = log1p_series_int(p, p, N + 1)
    v = _vp(lg, p)  # log(1+p) has valuation exactly 1, so s(u) is integral
    num = log_unit_int(u, p, N + v)
    return (num // p**v) * pow(lg // p**v, -1, p**N) % p**N


def sqrt_unit_int(a, p, N):
    """Square root of a unit square a mod p^N (Hensel), or None."""
    a0 = a % p
    if pow(a0, (p - 1) // 2, p) != 1:
        return None
    x = next(y for y in range(1, p) if y * y % p == a0)
    k = 1
    while k < N:
        k = min(2 * k, N)
        m = p**k
        x = (x - (x * x - a) * pow(2 * x, -1, m)) % m
    return x % p**N


def hensel_root(coeffs, x0, p, N):
    """Root of a monic integer polynomial lifted from a simple root x0 mod p."""
    def ev(x, m):
        r = 0
        for c in coeffs:
            r = (r * x + c) % m
        return r

    def dev(x, m):
        n = len(coeffs) - 1
        r = 0
        for i, c in enumerate(coeffs[:-1]):
            r = (r * x + (n - i) * c) % m
        return r

    x = x0 % p
    if ev(x, p) % p != 0 or dev(x, p) % p == 0:
        raise PadicDomainError("not a simple root mod p")
    k = 1
    while k < N:
        k = min(2 * k, N)
        m = p**k
        x = (x - ev(x, m) * pow(dev(x, m), -1, m)) % m
    return x


# ---------------------------------------------------------------------------
# user-facing operations on PadicNum
# ---------------------------------------------------------------------------

def make_padic(num, den, p, N):
    return PadicNum.from_rational(num, den, p, N)

def padic_add(x, y):
    return x + y

def padic_sub(x, y):
    return x - y

def padic_mul(x, y):
    return x * y

def padic_div(x, y):
    return x / y


def teichmuller(x, N=None):
    """omega(x) for a unit x, to precision N."""
    if x.is_exact_zero() or x.unit == 0 or x.val != 0:
        raise PadicDomainError("Teichmuller lift needs a unit")
    if N is None:
        N = x.prec
    N = min(N, x.prec)
    return PadicNum(x.p, 0, teichmuller_int(x.unit, x.p, N), N)


def iwasawa_log(x):
    """log of the principal-unit part of x; log(p) = 0, log(teich) = 0."""
    if isinstance(x, QuadExtNum):
        return x.iwasawa_log()
    if x.is_exact_zero() or x.unit == 0:
        raise PadicDomainError("log of zero")
    N = x.prec
    val = log_unit_int(x.unit, x.p, N)
    return PadicNum._normalized(x.p, val, N)


# ---------------------------------------------------------------------------
# quadratic extensions
# ---------------------------------------------------------------------------

SPLIT, INERT, RAMIFIED = "split", "inert", "ramified"


class QuadExt:
    """Descriptor of Q_p(sqrt(d)): fixes theta = sqrt(d) and the conjugation.

    kind is split/inert/ramified; in the split case sqrt_d is the Hensel
    square root of d in Z_p (so a + b*theta maps to the idempotent pair
    (a + b*s, a - b*s)).
    """

    def __init__(self, d, p, N):
        if d == 0:
            raise PadicDomainError("d must be nonzero")
        if p == 2:
            raise PadicDomainError("p = 2 not supported")
        # squarefree reduction
        dd = d
        f = 2
        red = 1
        while f * f <= abs(dd):
            while dd % (f * f) == 0:
                dd //= f * f
            f += 1
        self.d = d
        self.p = p
        self.N = N
        v = _vp(d, p)
        if v % 2 == 1:
            self.kind = RAMIFIED
            self.sqrt_d = None
        else:
            u = d // p**v % p
            if pow(u, (p - 1) // 2, p) == 1:
                self.kind = SPLIT
                s = sqrt_unit_int(d // p**v % p**N, p, N)
                self.sqrt_d = PadicNum(p, v // 2, s, N)
            else:
                self.kind = INERT
                self.sqrt_d = None

    def __repr__(self):
        return "QuadExt(d=%d, p=%d, %s)" % (self.d, self.p, self.kind)

    def __call__(self, a, b=0):
        """Element a + b*theta from ints/Fractions/PadicNums."""
        a = self._coerce(a)
        b = self._coerce(b)
        return QuadExtNum(self, a, b)

    def _coerce(self, x):
        if isinstance(x, PadicNum):
            return x
        if isinstance(x, Fraction):
            return PadicNum.from_fraction(x, self.p, self.N)
        return PadicNum.from_int(x, self.p, self.N)

    def zero(self):
        return self(0, 0)

    def one(self):
        return self(1, 0)


def make_quadratic_ext(d, p, N=8):
    return QuadExt(d, p, N)


class QuadExtNum:
    """a + b*theta in Q_p(theta), theta^2 = d."""

    __slots__ = ("ext", "a", "b")

    def __init__(self, ext, a, b):
        self.ext = ext
        self.a = a
        self.b = b

    def __add__(self, other):
        other = self._co(other)
        return QuadExtNum(self.ext, self.a + other.a, self.b + other.b)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        return QuadExtNum(self.ext, -self.a, -self.b)

    def __sub__(self, other):
        return self.__add__(self._co(other).__neg__())

    def __rsub__(self, other):
        return self.__neg__().__add__(other)

    def _co(self, x):
        if isinstance(x, QuadExtNum):
            return x
        return QuadExtNum(self.ext, self.ext._coerce(x), self.ext._coerce(0))

    def __mul__(self, other):
        other = self._co(other)
        d = self.ext.d
        a = self.a * other.a + self.b * other.b * d
        b = self.a * other.b + self.b * other.a
        return QuadExtNum(self.ext, a, b)

    def __rmul__(self, other):
        return self.__mul__(other)

    def conjugate(self):
        return QuadExtNum(self.ext, self.a, -self.b)

    def norm(self):
        return self.a * self.a - self.b * self.b * self.ext.d

    def trace(self):
        return self.a + self.a

    def is_zero(self):
        return (self.a.is_exact_zero() or self.a.unit == 0) and \
               (self.b.is_exact_zero() or self.b.unit == 0)

    def inverse(self):
        n = self.norm()
        if self.ext.kind == SPLIT and n.is_zero():
            raise PadicDomainError("zero divisor in split algebra")
        c = self.conjugate()
        ninv = n.inverse()
        return QuadExtNum(self.ext, c.a * ninv, c.b * ninv)

    def __truediv__(self, other):
        return self.__mul__(self._co(other).inverse())

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        r = self.ext.one()
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other):
        other = self._co(other)
        return (self - other).is_zero()

    def half_valuation(self):
        """2 * valuation as an integer (ramified valuations live in Z/2)."""
        if self.ext.kind == SPLIT:
            raise PadicDomainError("split algebra has componentwise valuations")
        n = self.norm()
        if n.is_zero():
            raise PrecisionError("valuation of (near) zero")
        return n.valuation()

    def valuation(self):
        hv = self.half_valuation()
        if hv % 2:
            return Fraction(hv, 2)
        return hv // 2

    def split_components(self):
        if self.ext.kind != SPLIT:
            raise PadicDomainError("not split")
        s = self.ext.sqrt_d
        return (self.a + self.b * s, self.a - self.b * s)

    def iwasawa_log(self):
        """Branch log: kills uniformizer powers and Teichmueller parts.

        Returns a QuadExtNum (a PadicNum pair) with b-part zero when the
        input is Galois stable.
        """
        ext = self.ext
        p, N = ext.p, ext.N
        if ext.kind == SPLIT:
            u, v = self.split_components()
            lu = iwasawa_log(u)
            lv = iwasawa_log(v)
            # back to (a, b) coordinates: a = (lu+lv)/2, b = (lu-lv)/(2s)
            two = PadicNum.from_int(2, p, N)
            s = ext.sqrt_d
            return QuadExtNum(ext, (lu + lv) / two, (lu - lv) / (two * s))
        # strip uniformizer: x^(q-1) is a principal unit times teich junk
        q = p * p if ext.kind == INERT else p
        hv = self.half_valuation()
        # normalize to a unit: divide by p^(hv//2) and theta^(hv%2) when ramified
        x = self
        if ext.kind == INERT:
            x = x * self._co(PadicNum.from_rational(1, p**(hv // 2), p, N))
        else:
            k = hv  # valuation in units of 1/2
            if k % 2 == 1:
                x = x * QuadExtNum(ext, ext._coerce(0), ext._coerce(1)).inverse() ** 1
                k = k - 1
            x = x * self._co(PadicNum.from_rational(1, p**(k // 2), p, N))
        t = x ** (q - 1) - 1
        # log(1+t) componentwise series in the extension
        acc = ext.zero()
        tn = ext.one()
        nmax = 2 * N + 4
        for n in range(1, nmax + 1):
            tn = tn * t
            term = tn * self._co(PadicNum.from_rational(1, n, p, N))
            acc = acc + term if n % 2 == 1 else acc - term
        inv = PadicNum.from_rational(1, q - 1, p, N)
        return acc * self._co(inv)

    def __repr__(self):
        return "(%r) + (%r)*sqrt(%d)" % (self.a, self.b, self.ext.d)


def galois_conjugate(x):
    return x.conjugate()


def norm_trace(x):
    return (x.norm(), x.trace())
