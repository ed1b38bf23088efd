"""Distributions as finite moment tables, and the matrix actions on them.

Two models, glued by coinduction:

* OneVarDist: a distribution on O = Z_p stored as moments against the basis
  1_{a+p^n}((z-a)/p^n)^m, with the Iwahori/Sigma_p action
  (g f)(z) = f((b+dz)/(a+cz)) * chi(<det g>) * chi^{-2}(a+cz).

* HomogDist: a homogeneous distribution on the primitive vectors
  L_p = {(x,y) in Z_p^2 not both divisible by p}, stored against the disjoint
  basis indexed by P^1(Z/p^n): on a U-cell (1:b) the basis element takes the
  value X(x) * w^m at (x,y) = x*(1, b+p^n w); on a V-cell (b:1) (p | b) the
  value X(y) * w^m at (x,y) = y*(b+p^n w, 1).  X = chi^{-2} is the
  homogeneity factor.

Scalars are integers mod p^N or truncated Iwasawa elements; the uniform basis
makes weight specialization entrywise.
"""

from math import comb

from .iwasawa import IwasawaElem
from .padic import PadicDomainError, PrecisionError, _vp, log1p_series_int

INF = float("inf")


# ---------------------------------------------------------------------------
# scalar rings
# ---------------------------------------------------------------------------

class ZmodScalars:
    """Integers mod p^N, the coefficient ring of single-weight tables."""

    kind = "padic"

    def __init__(self, p, N):
        self.p = p
        self.N = N
        self.mod = p**N

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.mod

    def sub(self, a, b):
        return (a - b) % self.mod

    def mul(self, a, b):
        return a * b % self.mod

    def smul(self, a, n):
        return a * n % self.mod

    def inv(self, a):
        return pow(a, -1, self.mod)

    def from_int(self, n):
        return n % self.mod

    def is_zero(self, a):
        return a % self.mod == 0

    def val(self, a):
        a %= self.mod
        if a == 0:
            return self.N
        return min(_vp(a, self.p), self.N)

    def eq(self, a, b):
        return (a - b) % self.mod == 0

    def rho_one(self, a):
        return a % self.mod

    def val_weighted(self, a):
        return self.val(a)


class IwasawaScalars:
    """Truncated Lambda coefficients, delegating to IwasawaElem arithmetic."""

    kind = "iwasawa"

    def __init__(self, alg):
        self.alg = alg
        self.p = alg.p
        self.N = alg.N
        self.mod = alg.mod

    def zero(self):
        return self.alg.zero()

    def one(self):
        return self.alg.one()

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def smul(self, a, n):
        return a * n

    def inv(self, a):
        return a.inverse()

    def from_int(self, n):
        return self.alg.from_int(n)

    def is_zero(self, a):
        return a.is_zero()

    def val(self, a):
        if a.is_zero():
            return self.N
        return min(min(_vp(c, self.p) if c else self.N for c in co)
                   for co in a.comp.values())

    def eq(self, a, b):
        return (a - b).is_zero()

    def rho_one(self, a):
        return a.rho_one()

    def val_weighted(self, a):
        """(p, T)-weighted valuation: T^i coefficients count with +i.

        The family transforms divide by log(1+p) once per T-power, so their
        truncation errors live one p-digit lower per T^i; this is the honest
        accuracy measure for Lambda-coefficient tables.
        """
        if a.is_zero():
            return self.N
        best = self.N
        for co in a.comp.values():
            for i, c in enumerate(co):
                if c:
                    best = min(best, _vp(c, self.p) + i)
        return best


# ---------------------------------------------------------------------------
# integer series helpers (coefficients mod a working p-power)
# ---------------------------------------------------------------------------

def poly_mul(a, b, mod, M):
    out = [0] * (M + 1)
    for i, x in enumerate(a[:M + 1]):
        if x:
            for j, y in enumerate(b[:M + 1 - i]):
                if y:
                    out[i + j] = (out[i + j] + x * y) % mod
    return out


def poly_inv(a, mod, M):
    c0 = pow(a[0], -1, mod)
    out = [0] * (M + 1)
    out[0] = c0
    for n in range(1, M + 1):
        s = 0
        for i in range(1, min(n, len(a) - 1) + 1):
            s = (s + a[i] * out[n - i]) % mod
        out[n] = -c0 * s % mod
    return out


def poly_pow(a, e, mod, M):
    if e < 0:
        a = poly_inv(a, mod, M)
        e = -e
    out = [0] * (M + 1)
    out[0] = 1
    b = list(a[:M + 1]) + [0] * max(0, M + 1 - len(a))
    while e:
        if e & 1:
            out = poly_mul(out, b, mod, M)
        b = poly_mul(b, b, mod, M)
        e >>= 1
    return out


def log1p_poly(v, mod, M, p):
    """log(1 + v(w)) as a w-series; v(0) = 0, coefficients divisible by p."""
    out = [0] * (M + 1)
    term = [0] * (M + 1)
    term[0] = 1
    for n in range(1, M + 1):
        term = poly_mul(term, v, mod, M)
        if all(c == 0 for c in term):
            break
        vn = _vp(n, p) if n % p == 0 else 0
        nu = pow(n // p**vn, -1, mod)
        for i, c in enumerate(term):
            if c:
                if c % p**vn:
                    raise PrecisionError("log poly division fails")
                t = c // p**vn * nu % mod
                out[i] = (out[i] + t) % mod if n % 2 == 1 else (out[i] - t) % mod
    return out


def grouplike_series(alg, series, e, M):
    """[u(w)]^e as IwasawaElem coefficients; u(w) a unit series over Z.

    [u(w)]^e = [u_0]^e * (1+T)^{e * s(u(w)/u_0)}, expanded to T^D and w^M.
    """
    p, D = alg.p, alg.D
    guard = alg._sbuf + 2 + D
    mod = p ** (alg.N + guard)
    u0 = series[0] % mod
    u0inv = pow(u0, -1, mod)
    v = [c * u0inv % mod for c in series]
    v[0] = 0
    S = log1p_poly(v, mod, M, p)
    l0 = log1p_series_int(p, p, alg.N + guard)
    v1 = _vp(l0, p)
    l0u = pow(l0 // p**v1, -1, mod)
    Sw = []
    for c in S:
        if c % p**v1:
            raise PrecisionError("wild coordinate series not integral")
        Sw.append(c // p**v1 * l0u * e % mod)
    base = alg.grouplike_inverse_exponent(u0, e)
    (j0,) = base.comp.keys()
    base_ser = base.comp[j0]
    binoms = _binom_series(Sw, D, p, mod, M)
    out = []
    for t in range(M + 1):
        co = [0] * D
        for i in range(D):
            co[i] = binoms[i][t] % alg.mod
        ser = _ser_mul_trunc(base_ser, tuple(co), alg.mod, D)
        out.append(IwasawaElem(alg, {j0: ser}))
    return out


def _binom_series(S, D, p, mod, M):
    """binom(S(w), i) for i < D, as w-series mod `mod`."""
    rows = [[1] + [0] * M]
    cur = [1] + [0] * M
    for i in range(1, D):
        factor = list(S) + [0] * (M + 1 - len(S))
        factor[0] = (factor[0] - (i - 1)) % mod
        cur = poly_mul(cur, factor, mod, M)
        vi = _vp(i, p) if i % p == 0 else 0
        iu = pow(i // p**vi, -1, mod)
        nxt = []
        for c in cur:
            if c % p**vi:
                raise PrecisionError("binomial series division loses precision")
            nxt.append(c // p**vi * iu % mod)
        cur = nxt
        rows.append(list(cur))
    return rows


def _ser_mul_trunc(a, b, mod, D):
    out = [0] * D
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if i + j >= D:
                    break
                out[i + j] = (out[i + j] + x * y) % mod
    return tuple(out)


# ---------------------------------------------------------------------------
# coefficient characters chi (homogeneity data + extension alpha*)
# ---------------------------------------------------------------------------

class ClassicalChar:
    """chi = z^{-k/2} * omega^tame on Z_p^x with extension alpha*.

    chi^{-2}(u) = u^k omega(u)^{-2 tame}; alpha* = chi_hat(p)^{-1} is the U_p
    eigenvalue of the attached symbol (a unit in the ordinary case).
    """

    def __init__(self, ring, k, alpha_star=1, tame=0):
        if k % 2:
            raise PadicDomainError("weight k must be even")
        from .iwasawa import smallest_primitive_root
        from .padic import teichmuller_int
        self.ring = ring
        self.k = k
        self.tame = tame % (ring.p - 1)
        self.alpha_star = alpha_star if not isinstance(alpha_star, int) \
            else ring.from_int(alpha_star)
        g = smallest_primitive_root(ring.p)
        self._W = teichmuller_int(g, ring.p, ring.N)
        self._dlog = {}
        x = 1
        for j in range(ring.p - 1):
            self._dlog[x] = j
            x = x * g % ring.p

    def _tame_pow(self, u, e):
        if self.tame == 0:
            return 1
        j = self._dlog[u % self.ring.p]
        return pow(self._W, self.tame * j * e % (self.ring.p - 1), self.ring.mod)

    def chi_pow_unit(self, u, e):
        """chi(u)^e for a unit integer u."""
        r = self.ring
        exp = -(self.k // 2) * e
        base = u % r.mod
        if exp < 0:
            base = pow(base, -1, r.mod)
            exp = -exp
        return pow(base, exp, r.mod) * self._tame_pow(u, e) % r.mod

    def chi_m2_unit(self, u):
        return self.chi_pow_unit(u, -2)

    def chi_m2_series(self, series, M, mod_work=None):
        """chi(u(w))^{-2} = u(w)^k * tame-constant, as ring coefficients."""
        r = self.ring
        mod = mod_work or r.mod
        out = poly_pow(series, self.k, mod, M)
        c = self._tame_pow(series[0], -2)
        return [x % r.mod * c % r.mod for x in out]

    def alpha_star_pow(self, e):
        return _ring_pow(self.ring, self.alpha_star, e)


class UniversalChar:
    """chi = the universal character k_p, extension a_p in Lambda^x."""

    def __init__(self, ring, a_p):
        self.ring = ring
        self.k = 0
        self.tame = 0
        self.alpha_star = a_p

    def chi_pow_unit(self, u, e):
        return self.ring.alg.grouplike_inverse_exponent(u, e)

    def chi_m2_unit(self, u):
        return self.ring.alg.grouplike_inverse_exponent(u, -2)

    def chi_m2_series(self, series, M, mod_work=None):
        return grouplike_series(self.ring.alg, series, -2, M)

    def alpha_star_pow(self, e):
        return _ring_pow(self.ring, self.alpha_star, e)


def _ring_pow(ring, a, e):
    if isinstance(a, int):
        a = ring.from_int(a)
    if e == 0:
        return ring.one()
    if e < 0:
        a = ring.inv(a)
        e = -e
    out = ring.one()
    b = a
    while e:
        if e & 1:
            out = ring.mul(out, b)
        b = ring.mul(b, b)
        e >>= 1
    return out


def _merge(acc, term, r):
    if acc is None:
        return term
    if isinstance(acc, int) and isinstance(term, int):
        return (acc + term) % r.mod
    if isinstance(acc, int):
        return term + acc
    return acc + term


def _mulmix(a, b, r):
    if isinstance(a, int) and isinstance(b, int):
        return a * b % r.mod
    if isinstance(a, int):
        return b * a
    if isinstance(b, int):
        return a * b
    return a * b


# ---------------------------------------------------------------------------
# one-variable distributions on O
# ---------------------------------------------------------------------------

class OneVarDist:
    """Moments mu(1_{a+p^n}((z-a)/p^n)^m), a in Z/p^n, m <= M."""

    def __init__(self, ring, char, level, M, vals=None):
        self.ring = ring
        self.char = char
        self.level = level
        self.M = M
        if vals is None:
            vals = {a: [ring.zero()] * (M + 1) for a in range(ring.p**level)}
        self.vals = vals

    def copy(self):
        return OneVarDist(self.ring, self.char, self.level, self.M,
                          {a: list(v) for a, v in self.vals.items()})

    def zero_like(self):
        return OneVarDist(self.ring, self.char, self.level, self.M)

    def add(self, other):
        r = self.ring
        return OneVarDist(r, self.char, self.level, self.M,
                          {a: [r.add(x, y) for x, y in zip(row, other.vals[a])]
                           for a, row in self.vals.items()})

    def sub(self, other):
        r = self.ring
        return OneVarDist(r, self.char, self.level, self.M,
                          {a: [r.sub(x, y) for x, y in zip(row, other.vals[a])]
                           for a, row in self.vals.items()})

    def scale(self, c):
        r = self.ring
        if isinstance(c, int):
            return OneVarDist(r, self.char, self.level, self.M,
                              {a: [r.smul(x, c) for x in row]
                               for a, row in self.vals.items()})
        return OneVarDist(r, self.char, self.level, self.M,
                          {a: [r.mul(c, x) for x in row]
                           for a, row in self.vals.items()})

    def total_mass(self):
        r = self.ring
        acc = r.zero()
        for row in self.vals.values():
            acc = r.add(acc, row[0])
        return acc

    def moment_global(self, m):
        """mu(z^m) over O."""
        r = self.ring
        p, n = r.p, self.level
        acc = r.zero()
        for a, row in self.vals.items():
            for j in range(min(m, self.M) + 1):
                acc = r.add(acc, r.smul(row[j], comb(m, j) * a**(m - j) * p**(n * j)))
        return acc

    def max_val(self):
        r = self.ring
        return min((r.val(x) for row in self.vals.values() for x in row),
                   default=r.N)

    def eq(self, other, modexp=None):
        target = self.ring.N if modexp is None else modexp
        return self.sub(other).max_val() >= target

    def filt_defect(self, other):
        """min over entries of val(diff) - (N - m): >= 0 means equal in the
        moment filtration (moment m carries p^{N-m} digits)."""
        r = self.ring
        d = self.sub(other)
        worst = r.N
        for row in d.vals.values():
            for m, x in enumerate(row):
                worst = min(worst, r.val_weighted(x) - max(r.N - m, 0))
        return worst

    def eq_filt(self, other):
        return self.filt_defect(other) >= 0

    def act_sigma(self, g):
        """The transform nu(f) = mu(g f) for g = (a b; c d) in Sigma_p.

        This is the |g operator used by Manin relations (g in the Iwahori)
        and by U_p (g = (1 i; 0 p)); a must be a unit and p | c.
        """
        a, b, c, d = g
        r = self.ring
        p, n, M = r.p, self.level, self.M
        if a % p == 0 or c % p:
            raise PadicDomainError("matrix not in Sigma_p")
        det = a * d - b * c
        if det == 0:
            raise PadicDomainError("singular matrix")
        udet = det // p**_vp(det, p)
        detf = self.char.chi_pow_unit(udet, 1)
        out = self.zero_like()
        mod_work = p ** (r.N + n * M + 6)
        for c0 in range(p**n):
            e1 = d - c * c0
            e0 = a * c0 - b
            v1 = _vp(e1, p) if e1 else INF
            v0 = _vp(e0, p) if e0 else INF
            if v1 is INF or v1 > n:
                if v0 is INF or v0 >= n:
                    sources = list(range(p**n))
                else:
                    continue
            else:
                if v0 < v1:
                    continue  # e0/e1 not integral: empty support
                nn = n - v1
                x0 = (e0 // p**v1) * pow(e1 // p**v1, -1, mod_work) % mod_work
                sources = sorted({(x0 + t * p**nn) % p**n
                                  for t in range(p**(n - nn))})
            for cs in sources:
                self._accumulate_cell(out, c0, cs, g, detf, mod_work)
        return out

    def _accumulate_cell(self, out, c0, cs, g, detf, mod_work):
        a, b, c, d = g
        r = self.ring
        p, n, M = r.p, self.level, self.M
        e1 = d - c * c0
        e0 = a * c0 - b
        # g.z - c0 = (e1 z - e0)/(a + c z); z = cs + p^n w on the source cell
        A = e1 * cs - e0
        B = e1 * p**n
        C = (a + c * cs) % mod_work
        E = c * p**n % mod_work
        if A % p**n or B % p**n:
            raise PrecisionError("support arithmetic inconsistency")
        core = poly_mul([A // p**n % mod_work, B // p**n % mod_work],
                        poly_inv([C, E], mod_work, M), mod_work, M)
        xfac = self.char.chi_m2_series([C, E], M, mod_work=mod_work)
        src = self.vals[cs]
        row = out.vals[c0]
        powj = [1] + [0] * M
        for jt in range(M + 1):
            if jt:
                powj = poly_mul(powj, core, mod_work, M)
            for js in range(M + 1):
                acc = None
                for t in range(js + 1):
                    pc = powj[t] % r.mod
                    if pc == 0:
                        continue
                    acc = _merge(acc, _mulmix(pc, xfac[js - t], r), r)
                if acc is None:
                    continue
                coeff = _mulmix(acc, detf, r)
                contrib = r.mul(src[js], coeff) if not isinstance(coeff, int) \
                    else r.smul(src[js], coeff)
                row[jt] = r.add(row[jt], contrib)

    def up_operator(self):
        """U_p mu = sum_i of the (1 i; 0 p) transforms."""
        out = self.zero_like()
        for i in range(self.ring.p):
            out = out.add(self.act_sigma((1, i, 0, self.ring.p)))
        return out


# ---------------------------------------------------------------------------
# two-variable homogeneous distributions on L_p
# ---------------------------------------------------------------------------

def cells_at_level(p, n):
    """(side, b): U-cells b in Z/p^n; V-cells b in pZ/p^n."""
    return [("U", b) for b in range(p**n)] + \
           [("V", p * b) for b in range(p**(n - 1))]


def dirac_table(ring, char, level, M, x0, y0):
    """The evaluation distribution F -> F(x0, y0) as a moment table."""
    p = ring.p
    mu = HomogDist(ring, char, level, M)
    if x0 % p:
        z = y0 * pow(x0, -1, p**(level + ring.N)) % p**(level + ring.N)
        side, b = "U", z % p**level
        xpart = x0
    elif y0 % p:
        z = x0 * pow(y0, -1, p**(level + ring.N)) % p**(level + ring.N)
        side, b = "V", z % p**level
        xpart = y0
    else:
        raise PadicDomainError("(x0, y0) is not primitive")
    X = char.chi_m2_unit(xpart)
    wval = (z - b) // p**level
    row = mu.vals[(side, b)]
    for m in range(M + 1):
        row[m] = _as_ring(ring, _mulmix(pow(wval, m) % ring.mod, X, ring))
    return mu


def _as_ring(ring, x):
    return ring.from_int(x) if isinstance(x, int) else x


class HomogDist:
    """Two-variable moment table at a single level n, moments 0..M."""

    def __init__(self, ring, char, level, M, vals=None):
        self.ring = ring
        self.char = char
        self.level = level
        self.M = M
        if vals is None:
            vals = {cell: [ring.zero()] * (M + 1)
                    for cell in cells_at_level(ring.p, level)}
        self.vals = vals

    # -- linear structure --------------------------------------------------

    def copy(self):
        return HomogDist(self.ring, self.char, self.level, self.M,
                         {c: list(v) for c, v in self.vals.items()})

    def zero_like(self):
        return HomogDist(self.ring, self.char, self.level, self.M)

    def add(self, other):
        r = self.ring
        return HomogDist(r, self.char, self.level, self.M,
                         {c: [r.add(x, y) for x, y in zip(row, other.vals[c])]
                          for c, row in self.vals.items()})

    def sub(self, other):
        r = self.ring
        return HomogDist(r, self.char, self.level, self.M,
                         {c: [r.sub(x, y) for x, y in zip(row, other.vals[c])]
                          for c, row in self.vals.items()})

    def scale(self, c):
        r = self.ring
        mul = (lambda x: r.smul(x, c)) if isinstance(c, int) else (lambda x: r.mul(c, x))
        return HomogDist(r, self.char, self.level, self.M,
                         {cl: [mul(x) for x in row] for cl, row in self.vals.items()})

    def max_val(self):
        r = self.ring
        return min((r.val(x) for row in self.vals.values() for x in row),
                   default=r.N)

    def eq(self, other, modexp=None):
        target = self.ring.N if modexp is None else modexp
        return self.sub(other).max_val() >= target

    def filt_defect(self, other):
        """min over entries of val(diff) - (N - m), the moment filtration."""
        r = self.ring
        d = self.sub(other)
        worst = r.N
        for row in d.vals.values():
            for m, x in enumerate(row):
                worst = min(worst, r.val_weighted(x) - max(r.N - m, 0))
        return worst

    def eq_filt(self, other):
        return self.filt_defect(other) >= 0

    def total_mass(self):
        r = self.ring
        acc = r.zero()
        for row in self.vals.values():
            acc = r.add(acc, row[0])
        return acc

    # -- aggregation to coarser levels --------------------------------------

    def value_at(self, side, b, n, m):
        """mu of the basis element (side, b, n, m); n <= level, exact."""
        p = self.ring.p
        r = self.ring
        if n > self.level:
            raise PrecisionError("table level %d < requested %d" % (self.level, n))
        if m > self.M:
            raise PrecisionError("moment degree beyond the table")
        ns = self.level
        if n == ns:
            return self.vals[(side, b % p**n)][m]
        acc = r.zero()
        b = b % p**n
        for t in range(p**(ns - n)):
            bp = b + t * p**n
            if side == "V" and bp % p:
                continue
            row = self.vals[(side, bp)]
            q = t
            for j in range(min(m, self.M) + 1):
                cfac = comb(m, j) * q**(m - j) * p**((ns - n) * j)
                acc = r.add(acc, r.smul(row[j], cfac))
        return acc

    # -- the general matrix transform ----------------------------------------

    def act_matrix(self, G, tgt_level=None):
        """(G.mu)(F) = mu(G^{-1} F) for an integral matrix G, det != 0.

        The target table level is level - v_p(det G) by default (cells can
        only be resolved that far).  Unit determinant: a bijective cell map.
        Covers the G(O_p) action of Lemma 6.4, the Weyl element, and the
        Sigma_p monomial matrices (U_p pieces, diag(1,p) ~ diag(omega,1)^{-1}).
        """
        al, be, ga, de = G
        r = self.ring
        p, n, M = r.p, self.level, self.M
        det = al * de - be * ga
        if det == 0:
            raise PadicDomainError("singular matrix")
        vdet = _vp(det, p)
        udet = det // p**vdet
        if tgt_level is None:
            tgt_level = n - vdet
        if tgt_level < 1:
            raise PrecisionError("table too shallow for this transform")
        if tgt_level > n - vdet:
            raise PrecisionError("cannot resolve target level %d" % tgt_level)
        adj = (de, -be, -ga, al)
        # chi_hat(det g^{-1}) * chi_hat(x0)^{-2} bookkeeping: the unit part
        # chi(u_det) and (alpha*)^{2e - vdet} per source cell (e = local drop)
        # (udet stays a signed exact integer: torsion units must keep their
        # full precision so their wild coordinate is exactly zero)
        detf = self.char.chi_pow_unit(udet, 1)
        out = HomogDist(r, self.char, tgt_level, M)
        mod_work = p ** (r.N + n * (M + 1) + 6)
        for (side, b), src in self.vals.items():
            self._push_cell(out, side, b, adj, vdet, detf, src, mod_work, tgt_level)
        return out

    def _push_cell(self, out, side, b, adj, vdet, detf, src, mod_work, nt):
        r = self.ring
        p, n, M = r.p, self.level, self.M
        a2, b2, c2, d2 = adj
        # sigma_s(z).adj: U-cells sigma=(1,z): (a2 + z c2, b2 + z d2)
        #                V-cells sigma=(z,1): (z a2 + c2, z b2 + d2)
        if side == "U":
            U0, U1 = a2, c2
            V0, V1 = b2, d2
        else:
            U0, U1 = c2, a2
            V0, V1 = d2, b2
        Uc = U0 + U1 * b
        Vc = V0 + V1 * b
        vU = _vp(Uc, p) if Uc else INF
        vV = _vp(Vc, p) if Vc else INF
        e = min(vU, vV, vdet)
        if e > 0 and min(_vp(U1 * p**n, p) if U1 else INF,
                         _vp(V1 * p**n, p) if V1 else INF) < e:
            raise PrecisionError("valuation profile not constant on the cell")
        Us = [(Uc // p**e) % mod_work, (U1 * p**(n - e)) % mod_work]
        Vs = [(Vc // p**e) % mod_work, (V1 * p**(n - e)) % mod_work]
        if Us[0] % p and True:
            tgt_side, num, den = "U", Vs, Us
        elif Vs[0] % p:
            tgt_side, num, den = "V", Us, Vs
        else:
            raise PrecisionError("image vector not primitive (level too shallow)")
        zser = poly_mul(num, poly_inv(den, mod_work, M), mod_work, M)
        bt = zser[0] % p**nt
        shift0 = (zser[0] - bt) % mod_work
        core = []
        for i, cf in enumerate([shift0] + zser[1:]):
            if cf % p**nt and _vp(cf, p) < nt:
                raise PrecisionError("image series not divisible by p^target")
            core.append(cf // p**nt % mod_work)
        xfac = self.char.chi_m2_series(den, M, mod_work=mod_work)
        pref = self.char.alpha_star_pow(2 * e - vdet)
        pref = _mulmix(pref, detf, r) if isinstance(pref, int) else \
            (pref * detf if not isinstance(detf, int) else pref * detf)
        row = out.vals[(tgt_side, bt)]
        powj = [1] + [0] * M
        for jt in range(M + 1):
            if jt:
                powj = poly_mul(powj, core, mod_work, M)
            for js in range(M + 1):
                acc = None
                for t in range(js + 1):
                    pc = powj[t] % r.mod
                    if pc == 0:
                        continue
                    acc = _merge(acc, _mulmix(pc, xfac[js - t], r), r)
                if acc is None:
                    continue
                coeff = _mulmix(acc, pref, r)
                contrib = r.mul(src[js], coeff) if not isinstance(coeff, int) \
                    else r.smul(src[js], coeff)
                row[jt] = r.add(row[jt], contrib)

    # -- admissibility ---------------------------------------------------------

    def is_admissible(self, h, base_level=1):
        """Growth test: sup over levels of (-val - n*h) must stabilize.

        Returns (True, A_exponent) or (False, witness); the witness is the
        entry whose bound is still growing at the deepest sampled level.
        """
        r = self.ring
        levels = list(range(base_level, self.level + 1))
        profile = []
        worst = None
        for n in levels:
            best = -INF
            for (side, b) in cells_at_level(r.p, n):
                for m in range(self.M + 1):
                    v = r.val(self.value_at(side, b, n, m))
                    ex = -v - n * h
                    if ex > best:
                        best = ex
                        if n == levels[-1]:
                            worst = (side, b, n, m)
            profile.append(best)
        if len(profile) >= 2 and profile[-1] > max(profile[:-1]):
            return (False, worst)
        return (True, max(profile))

    # -- unique analytic extension (ordinary double sum) ------------------------

    def extend_moment(self, side, a, N_lev, m, h=0, schedule=None):
        """mu(P^m_{a,N_lev}) for arbitrary m by the limit double sum (h = 0).

        a_n = sum over b = a mod p^N of ((b-a)/p^N)^m * mass(U(b,n)); returns
        (value, certified_error_valuation) from the last Cauchy gap.
        """
        if h != 0:
            raise PrecisionError("only the ordinary (h = 0) extension is implemented")
        r = self.ring
        p = r.p
        ns = schedule or list(range(N_lev, self.level + 1))
        prev, val = None, None
        gap = r.N
        for n in ns:
            acc = r.zero()
            for (sd, b) in cells_at_level(p, n):
                if sd != side or (b - a) % p**N_lev:
                    continue
                q = (b - a) // p**N_lev
                acc = r.add(acc, r.smul(self.value_at(sd, b, n, 0), pow(q, m)))
            if prev is not None:
                gap = r.val(r.sub(acc, prev))
            prev = val = acc
        return val, gap

    # -- restriction to the one-variable model ----------------------------------

    def res_to_onevar(self, level=None):
        """res: f |-> f_hat(x,y) = X(x) f(y/x) 1_{x unit}: the U-side table."""
        n = level or self.level
        r = self.ring
        out = OneVarDist(r, self.char, n, self.M)
        for a in range(r.p**n):
            for m in range(self.M + 1):
                out.vals[a][m] = self.value_at("U", a, n, m)
        return out


# ---------------------------------------------------------------------------
# coinduction (Prop 7.3 concretely): slices and reconstruction
# ---------------------------------------------------------------------------

WEYL = (0, 1, 1, 0)


def coind_slices(mu):
    """phi(mu) at the standard slices: (res mu, res of the Weyl translate).

    These two one-variable tables determine the element of the coinduced
    module (the U_p eigen-recursion supplies everything deeper).  The Weyl
    slice satisfies res(w.mu)[b][m] = chi(-1) mu(V,b,m).
    """
    return mu.res_to_onevar(), mu.act_matrix(WEYL).res_to_onevar()


def coind_reconstruct(ring, char, level, M, u_slice, v_slice):
    """psi(phi): rebuild the two-variable table from the two slices."""
    mu = HomogDist(ring, char, level, M)
    p = ring.p
    sign = char.chi_pow_unit(-1, 1)  # order <= 2, so it is its own inverse
    for a in range(p**level):
        mu.vals[("U", a)] = list(u_slice.vals[a])
    for b in range(0, p**level, p):
        mu.vals[("V", b)] = [
            v if isinstance(sign, int) and sign == 1 else
            (ring.smul(v, sign) if isinstance(sign, int) else ring.mul(sign, v))
            for v in v_slice.vals[b]]
    return mu


def up_slice(mu, tgt_level=None):
    """U_p phi(mu) at the identity slice: sum_i g_i^{-1}[res((g_i).mu)].

    By Prop 7.3 this equals alpha* . res(mu); the defect is a correctness
    certificate for the whole action machinery.
    """
    r = mu.ring
    p = r.p
    nt = tgt_level or (mu.level - 1)
    out = OneVarDist(r, mu.char, nt, mu.M)
    for i in range(p):
        gi = (1, i, 0, p)
        pushed = mu.act_matrix(gi)            # (g_i).mu at level n-1
        sl = pushed.res_to_onevar(nt)
        out = out.add(sl.act_sigma(gi))
    return out
