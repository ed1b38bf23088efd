"""Truncated Iwasawa algebras Z_p[[Z_p^x]] and their tensor products.

An element is stored in tame/wild coordinates: a map from the tame index
j mod (p-1) to a power series in T truncated at degree D, with coefficients
mod p^N.  The group-like [u] of a unit u sits at the tame index of its
Teichmueller part and has wild series (1+T)^s(u), s(u) = log<u>/log(1+p).

The augmentation ideal I = ker(rho_1) is measured through the trivial
character component: x lies in I^r iff that component vanishes to T-order r
(roots of unity contribute to every I^r, matching the torsion-free I/I^2).
"""

from .padic import (
    PadicDomainError,
    PrecisionError,
    _vp,
    log1p_series_int,
    s_coordinate,
    teichmuller_int,
)

INF = float("inf")


def smallest_primitive_root(p):
    for g in range(2, p):
        seen = set()
        x = 1
        for _ in range(p - 1):
            x = x * g % p
            seen.add(x)
        if len(seen) == p - 1:
            return g
    raise ValueError("no primitive root (p not prime?)")


def binom_padic(s, m, p, N):
    """binomial(s, m) mod p^N for s an integer approximating a Z_p element.

    s must be known mod p^(N + v_p(m!)).
    """
    if m == 0:
        return 1 % p**N
    fact = 1
    for i in range(2, m + 1):
        fact *= i
    v = _vp(fact, p)
    M = p**(N + v)
    num = 1
    for i in range(m):
        num = num * ((s - i) % M) % M
    # binom(s, m) is p-integral, so the division is exact to the modulus
    f0 = fact // p**v
    r = num * pow(f0, -1, M) % M
    if r % p**v != 0:
        raise PrecisionError("binomial numerator not divisible as expected")
    return r // p**v % p**N


class IwasawaAlgebra:
    """Lambda_p at a formal place: coefficients mod p^N, series mod T^D."""

    def __init__(self, p, N=8, D=4, place="p"):
        if D < 1:
            raise ValueError("need D >= 1")
        self.p = p
        self.N = N
        self.D = D
        self.place = place
        self.mod = p**N
        self.g = smallest_primitive_root(p)
        self.W = teichmuller_int(self.g, p, N)  # omega(g) mod p^N
        self._dlog = {}
        x = 1
        for j in range(p - 1):
            self._dlog[x] = j
            x = x * self.g % p
        # guard digits for binom denominators up to (D-1)!
        fact = 1
        for i in range(2, D):
            fact *= i
        self._sbuf = _vp(fact, p) if fact > 1 else 0

    def __repr__(self):
        return "IwasawaAlgebra(p=%d, N=%d, D=%d, place=%r)" % (
            self.p, self.N, self.D, self.place)

    def __eq__(self, other):
        return (isinstance(other, IwasawaAlgebra)
                and (self.p, self.N, self.D, self.place)
                == (other.p, other.N, other.D, other.place))

    def __hash__(self):
        return hash((self.p, self.N, self.D, self.place))

    # -- element constructors -------------------------------------------

    def zero(self):
        return IwasawaElem(self, {})

    def one(self):
        return IwasawaElem(self, {0: self._mono(1)})

    def from_int(self, c):
        c %= self.mod
        if c == 0:
            return self.zero()
        return IwasawaElem(self, {0: self._mono(c)})

    def T(self):
        co = [0] * self.D
        if self.D > 1:
            co[1] = 1
        return IwasawaElem(self, {0: tuple(co)})

    def _mono(self, c):
        co = [0] * self.D
        co[0] = c % self.mod
        return tuple(co)

    def one_plus_T_pow(self, s):
        """(1+T)^s truncated, s an integer approximating a Z_p exponent."""
        co = [binom_padic(s, m, self.p, self.N) for m in range(self.D)]
        return tuple(co)

    def group_like(self, u):
        """[u] for a unit u of Z_p, as universal_char(u).

        u is taken as an exact integer (or Fraction); reducing it mod p^N
        beforehand would lose the guard digits the wild exponent needs.
        """
        num, den = (u.numerator, u.denominator) if hasattr(u, "numerator") else (u, 1)
        if num % self.p == 0 or den % self.p == 0:
            raise PadicDomainError("group-like of a non-unit")
        M = self.p ** (self.N + self._sbuf + 1)
        u = num * pow(den, -1, M) % M
        j = self._dlog[u % self.p]
        s = s_coordinate(u, self.p, self.N + self._sbuf)
        return IwasawaElem(self, {j: self.one_plus_T_pow(s)})

    def grouplike_inverse_exponent(self, u, e):
        """[u]^e for integer e (possibly negative), cheaply."""
        if u % self.p == 0:
            raise PadicDomainError("group-like of a non-unit")
        j = self._dlog[u % self.p] * e % (self.p - 1)
        s = s_coordinate(u, self.p, self.N + self._sbuf)
        return IwasawaElem(self, {j: self.one_plus_T_pow(s * e)})


class IwasawaElem:
    __slots__ = ("alg", "comp")

    def __init__(self, alg, comp):
        self.alg = alg
        # comp: {tame index j: tuple of D coefficients mod p^N}, sparse
        self.comp = {j: co for j, co in comp.items() if any(c % alg.mod for c in co)}

    # -- ring structure ---------------------------------------------------

    def __add__(self, other):
        other = self._co(other)
        alg = self.alg
        out = dict(self.comp)
        for j, co in other.comp.items():
            if j in out:
                out[j] = tuple((a + b) % alg.mod for a, b in zip(out[j], co))
            else:
                out[j] = co
        return IwasawaElem(alg, out)

    def __radd__(self, other):
        return self.__add__(other)

    def __neg__(self):
        alg = self.alg
        return IwasawaElem(alg, {j: tuple(-c % alg.mod for c in co)
                                 for j, co in self.comp.items()})

    def __sub__(self, other):
        return self.__add__(self._co(other).__neg__())

    def __rsub__(self, other):
        return self.__neg__().__add__(other)

    def _co(self, x):
        if isinstance(x, IwasawaElem):
            if x.alg != self.alg:
                raise PadicDomainError("mixed Iwasawa algebras")
            return x
        if isinstance(x, int):
            return self.alg.from_int(x)
        raise TypeError(x)

    def __mul__(self, other):
        if isinstance(other, int):
            alg = self.alg
            c = other % alg.mod
            return IwasawaElem(alg, {j: tuple(a * c % alg.mod for a in co)
                                     for j, co in self.comp.items()})
        other = self._co(other)
        alg = self.alg
        q = alg.p - 1
        out = {}
        for j1, c1 in self.comp.items():
            for j2, c2 in other.comp.items():
                j = (j1 + j2) % q
                prod = _sermul(c1, c2, alg.mod, alg.D)
                if j in out:
                    out[j] = tuple((a + b) % alg.mod for a, b in zip(out[j], prod))
                else:
                    out[j] = prod
        return IwasawaElem(alg, out)

    def __rmul__(self, other):
        return self.__mul__(other)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        r = self.alg.one()
        b = self
        while n:
            if n & 1:
                r = r * b
            b = b * b
            n >>= 1
        return r

    def __eq__(self, other):
        d = self - self._co(other)
        return not d.comp

    def __hash__(self):
        raise TypeError("unhashable")

    def is_zero(self):
        return not self.comp

    # -- character decomposition ------------------------------------------

    def _dft(self):
        """Components along the characters chi_m of mu_{p-1}: full series each."""
        alg = self.alg
        q = alg.p - 1
        out = []
        for m in range(q):
            acc = [0] * alg.D
            for j, co in self.comp.items():
                w = pow(alg.W, j * m, alg.mod)
                for i, c in enumerate(co):
                    acc[i] = (acc[i] + w * c) % alg.mod
            out.append(tuple(acc))
        return out

    @staticmethod
    def _from_dft(alg, comps):
        q = alg.p - 1
        qinv = pow(q, -1, alg.mod)
        comp = {}
        for j in range(q):
            acc = [0] * alg.D
            for m, co in enumerate(comps):
                w = pow(alg.W, -j * m, alg.mod)
                for i, c in enumerate(co):
                    acc[i] = (acc[i] + w * c) % alg.mod
            comp[j] = tuple(c * qinv % alg.mod for c in acc)
        return IwasawaElem(alg, comp)

    def trivial_component(self):
        """Series along the trivial character: sum over tame indices."""
        alg = self.alg
        acc = [0] * alg.D
        for co in self.comp.values():
            for i, c in enumerate(co):
                acc[i] = (acc[i] + c) % alg.mod
        return tuple(acc)

    def rho_one(self):
        """Augmentation: specialize at the trivial character (exact)."""
        return self.trivial_component()[0]

    def inverse(self):
        alg = self.alg
        comps = self._dft()
        inv = []
        for co in comps:
            if co[0] % alg.p == 0:
                raise PadicDomainError("not a unit in the truncated algebra")
            inv.append(_serinv(co, alg.mod, alg.D))
        return IwasawaElem._from_dft(alg, inv)

    def power_twist(self, e):
        """Algebra endomorphism [u] -> [u]^e (rho of the e-th power character)."""
        alg = self.alg
        q = alg.p - 1
        # (1+T)^e - 1 as a series
        sub = [binom_padic(e, m, alg.p, alg.N) for m in range(alg.D)]
        sub[0] = 0
        out = {}
        for j, co in self.comp.items():
            comp = _sercompose(co, tuple(sub), alg.mod, alg.D)
            jj = j * e % q
            if jj in out:
                out[jj] = tuple((a + b) % alg.mod for a, b in zip(out[jj], comp))
            else:
                out[jj] = comp
        return IwasawaElem(alg, out)

    # -- filtration ---------------------------------------------------------

    def augmentation_order(self):
        """Largest r < D with x in I^r; INF for 0; None means '>= D'."""
        if not self.comp:
            return INF
        triv = self.trivial_component()
        for r, c in enumerate(triv):
            if c % self.alg.mod:
                return r
        return None

    def leading_term(self, r):
        ord_ = self.augmentation_order()
        if ord_ is not None and ord_ is not INF and ord_ < r:
            raise PadicDomainError("element has augmentation order %s < %d" % (ord_, r))
        triv = self.trivial_component()
        coeff = triv[r] if r < self.alg.D else 0
        return AugClass(r, coeff, (self.alg,))

    # -- specialization -------------------------------------------------------

    def specialize(self, k, twist=0):
        """rho_chi for chi = x^k * omega^twist: an integer mod p^N.

        Accurate mod p^min(N, D - v_p(floor(D/ (p-1)) stuff)); exact for k = 0,
        twist = 0.  Tame twists have values in mu_{p-1} subset Z_p, so no
        cyclotomic coefficients are needed.
        """
        alg = self.alg
        if k == 0:
            t0 = 0
        else:
            t0 = (pow(1 + alg.p, k, alg.mod) - 1) % alg.mod
        acc = 0
        for j, co in self.comp.items():
            val = 0
            tp = 1
            for c in co:
                val = (val + c * tp) % alg.mod
                tp = tp * t0 % alg.mod
            w = pow(alg.W, j * (k + twist), alg.mod)
            acc = (acc + w * val) % alg.mod
        return acc

    def __repr__(self):
        alg = self.alg
        if not self.comp:
            return "0"
        parts = []
        for j in sorted(self.comp):
            co = self.comp[j]
            ser = " + ".join("%d*T^%d" % (c, i) if i else "%d" % c
                             for i, c in enumerate(co) if c)
            parts.append("[w^%d](%s)" % (j, ser) if j else "(%s)" % ser)
        return " + ".join(parts)

    def to_dict(self):
        return {
            "place": self.alg.place,
            "components": [
                {"tame_index": j, "series_coeffs": list(self.comp[j])}
                for j in sorted(self.comp)
            ],
        }


def _sermul(a, b, mod, D):
    out = [0] * D
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if i + j >= D:
                break
            out[i + j] = (out[i + j] + x * y) % mod
    return tuple(out)


def _serinv(a, mod, D):
    c0inv = pow(a[0], -1, mod)
    out = [0] * D
    out[0] = c0inv
    for n in range(1, D):
        s = 0
        for i in range(1, n + 1):
            if i < len(a):
                s = (s + a[i] * out[n - i]) % mod
        out[n] = -c0inv * s % mod
    return tuple(out)


def _sercompose(a, sub, mod, D):
    # a(sub(T)) with sub(0) = 0
    out = [0] * D
    powc = [0] * D
    powc[0] = 1
    for i, c in enumerate(a):
        if c:
            for k in range(D):
                out[k] = (out[k] + c * powc[k]) % mod
        powc = list(_sermul(tuple(powc), sub, mod, D))
    return tuple(out)


# ---------------------------------------------------------------------------
# augmentation classes and the ell_a characters
# ---------------------------------------------------------------------------

class AugClass:
    """A class in I^r/I^{r+1}, in the O^x-tensor coordinates.

    For each contributing place the identification I_p/I_p^2 = 1+pZ_p sends
    the coefficient c to the unit (1+p)^c; an order-r class is stored as the
    coefficient of T_{p_1}...T_{p_r}.
    """

    __slots__ = ("order", "coeff", "places")

    def __init__(self, order, coeff, places):
        self.order = order
        self.places = tuple(places)
        m = places[0].mod if places else 0
        self.coeff = coeff % m if m else coeff

    def __add__(self, other):
        if self.order != other.order or self.places != other.places:
            raise PadicDomainError("incompatible augmentation classes")
        return AugClass(self.order, self.coeff + other.coeff, self.places)

    def __neg__(self):
        return AugClass(self.order, -self.coeff, self.places)

    def __sub__(self, other):
        return self.__add__(other.__neg__())

    def scale(self, c):
        return AugClass(self.order, self.coeff * c, self.places)

    def tensor(self, other):
        return AugClass(self.order + other.order, self.coeff * other.coeff,
                        self.places + other.places)

    def is_zero(self, modexp=None):
        m = self.places[0].mod if modexp is None else self.places[0].p ** modexp
        return self.coeff % m == 0

    def __eq__(self, other):
        return (self.order == other.order and self.places == other.places
                and (self.coeff - other.coeff) % self.places[0].mod == 0)

    def unit_rep(self):
        """For r = 1: the unit (1+p)^coeff representing the class in O^x."""
        if self.order != 1:
            raise PadicDomainError("unit_rep needs order 1")
        alg = self.places[0]
        return pow(1 + alg.p, self.coeff, alg.mod)

    def __repr__(self):
        return "AugClass(r=%d, coeff=%d)" % (self.order, self.coeff)

    def to_dict(self):
        return {"order": self.order, "coeff": self.coeff,
                "places": [a.place for a in self.places]}


def universal_char(alg, u):
    return alg.group_like(u)


def augmentation_order(x):
    return x.augmentation_order()


def leading_term(x, r):
    return x.leading_term(r)


def ell_a(a, e, u):
    """ell_a of x = omega^e * u in F_p^x: e*(a^{-1}-1) + ([u]-1) mod I^2.

    a is the U_p eigenvalue (an IwasawaElem unit with rho_1(a) = 1); e is the
    omega-exponent of x and u its unit part (an integer).  Returns an order-1
    AugClass.
    """
    alg = a.alg
    if a.rho_one() % alg.mod != 1 % alg.mod:
        raise PadicDomainError("ell_a needs rho_1(a) = 1")
    ainv = a.inverse()
    ca = (ainv - alg.one()).trivial_component()[1] if alg.D > 1 else 0
    if u % alg.p == 0:
        raise PadicDomainError("unit part is not a unit")
    su = s_coordinate(u, alg.p, alg.N)
    return AugClass(1, e * ca + su, (alg,))


def ell_a_eigen_coeff(a):
    """The I/I^2 coordinate of a^{-1}-1 (the T-coefficient used by ell_a)."""
    alg = a.alg
    ainv = a.inverse()
    return (ainv - alg.one()).trivial_component()[1] if alg.D > 1 else 0


def ell_aS(chars, xs):
    """Tensor of per-place ell_a over S: lands in I^r/I^{r+1}, r = #S.

    chars: list of U_p eigenvalues a_p (one per place); xs: list of (e, u)
    pairs presenting the K_p^x elements.
    """
    if len(chars) != len(xs):
        raise PadicDomainError("length mismatch")
    out = None
    for a, (e, u) in zip(chars, xs):
        cls = ell_a(a, e, u)
        out = cls if out is None else out.tensor(cls)
    return out


# ---------------------------------------------------------------------------
# tensor products over several formal places
# ---------------------------------------------------------------------------

class TensorIwasawa:
    """Completed tensor product of per-place truncated algebras."""

    def __init__(self, algebras):
        self.algebras = list(algebras)
        if not algebras:
            raise ValueError("need at least one factor")
        self.r = len(algebras)

    def place_index(self, place):
        for i, a in enumerate(self.algebras):
            if a.place == place:
                return i
        raise PadicDomainError("unknown place label %r" % place)

    def zero(self):
        return TensorElem(self, {})

    def one(self):
        key = (tuple(0 for _ in self.algebras), tuple(0 for _ in self.algebras))
        return TensorElem(self, {key: 1})

    def iota(self, place, x):
        """Embed Lambda_place into the tensor algebra (trivial elsewhere)."""
        i = self.place_index(place)
        out = {}
        for j, co in x.comp.items():
            for t, c in enumerate(co):
                if c == 0:
                    continue
                jt = tuple(j if k == i else 0 for k in range(self.r))
                tt = tuple(t if k == i else 0 for k in range(self.r))
                out[(jt, tt)] = c
        return TensorElem(self, out)

    def d(self, place, x):
        """Project to Lambda_place: apply rho_1 to all the other factors."""
        i = self.place_index(place)
        alg = self.algebras[i]
        comp = {}
        for (jt, tt), c in x.comp.items():
            if any(t != 0 for k, t in enumerate(tt) if k != i):
                continue  # rho_1 kills positive T-powers of other factors
            j, t = jt[i], tt[i]
            co = list(comp.get(j, (0,) * alg.D))
            co[t] = (co[t] + c) % alg.mod
            comp[j] = tuple(co)
        return IwasawaElem(alg, comp)


class TensorElem:
    __slots__ = ("parent", "comp")

    def __init__(self, parent, comp):
        mod = parent.algebras[0].mod
        self.parent = parent
        self.comp = {k: v % mod for k, v in comp.items() if v % mod}

    def __add__(self, other):
        out = dict(self.comp)
        mod = self.parent.algebras[0].mod
        for k, v in other.comp.items():
            out[k] = (out.get(k, 0) + v) % mod
        return TensorElem(self.parent, out)

    def __neg__(self):
        return TensorElem(self.parent, {k: -v for k, v in self.comp.items()})

    def __sub__(self, other):
        return self.__add__(other.__neg__())

    def __mul__(self, other):
        par = self.parent
        mod = par.algebras[0].mod
        qs = [a.p - 1 for a in par.algebras]
        Ds = [a.D for a in par.algebras]
        out = {}
        for (j1, t1), c1 in self.comp.items():
            for (j2, t2), c2 in other.comp.items():
                tt = tuple(a + b for a, b in zip(t1, t2))
                if any(t >= D for t, D in zip(tt, Ds)):
                    continue
                jj = tuple((a + b) % q for a, b, q in zip(j1, j2, qs))
                k = (jj, tt)
                out[k] = (out.get(k, 0) + c1 * c2) % mod
        return TensorElem(par, out)

    def rho_one(self):
        mod = self.parent.algebras[0].mod
        return sum(c for (jt, tt), c in self.comp.items()
                   if all(t == 0 for t in tt)) % mod

    def trivial_component(self):
        """Multivariate T-series along the all-trivial tame character."""
        mod = self.parent.algebras[0].mod
        out = {}
        for (jt, tt), c in self.comp.items():
            out[tt] = (out.get(tt, 0) + c) % mod
        return {k: v for k, v in out.items() if v}

    def augmentation_order(self):
        triv = self.trivial_component()
        if not self.comp:
            return INF
        if not triv:
            return None
        Dmin = min(a.D for a in self.parent.algebras)
        best = min(sum(tt) for tt in triv)
        return best if best < Dmin else None

    def top_coeff(self):
        """Coefficient of T_1*...*T_r (the diagonal monomial of degree r)."""
        tt = tuple(1 for _ in self.parent.algebras)
        return self.trivial_component().get(tt, 0)

    def __eq__(self, other):
        return not (self - other).comp

    def __repr__(self):
        return "TensorElem(%r)" % (self.comp,)


def tensor_maps(t):
    """The (iota_p, d_p) morphism pair for each place of a TensorIwasawa."""
    return {a.place: (lambda x, pl=a.place: t.iota(pl, x),
                      lambda x, pl=a.place: t.d(pl, x))
            for a in t.algebras}
