"""Classical modular symbols for Gamma_0(N) over exact rationals.

A symbol is a Gamma_0(N)-equivariant map from degree-zero cusp divisors to
V(k) = dual of the homogeneous degree-k polynomials, determined by its values
on the Manin generators u_j {0,oo} (u_j running over coset representatives
indexed by P^1(Z/N)).  Everything is exact Fraction arithmetic: the Manin
relations are solved by row reduction, Hecke operators act through the
standard coset matrices, and eigensymbols are cut out by kernels of
(T_ell - a_ell) using bundled eigenvalue records.
"""

from fractions import Fraction
from math import gcd

from .padic import PadicDomainError, hensel_root


class P1List:
    """P^1(Z/N): canonical representatives and index lookup."""

    def __init__(self, N):
        self.N = N
        seen = {}
        reps = []
        for c in range(N):
            for d in range(N):
                if gcd(gcd(c, d), N) != 1:
                    continue
                key = self._normalize(c, d)
                if key not in seen:
                    seen[key] = len(reps)
                    reps.append(key)
        self._index = seen
        self.reps = reps

    def _normalize(self, c, d):
        N = self.N
        c %= N
        d %= N
        best = None
        for t in range(1, N):
            if gcd(t, N) != 1:
                continue
            cand = (t * c % N, t * d % N)
            if best is None or cand < best:
                best = cand
        return best

    def index(self, c, d):
        return self._index[self._normalize(c, d)]

    def __len__(self):
        return len(self.reps)


def lift_to_sl2(c, d, N):
    """A matrix in SL_2(Z) with bottom row congruent to (c, d) mod N."""
    c %= N
    d %= N
    if c == 0:
        c = N
    if gcd(c, d) != 1:
        # adjust d by multiples of N to make gcd(c, d) = 1
        dd = d
        while gcd(c, dd) != 1:
            dd += N
        d = dd
    g, x, y = _egcd(c, d)
    assert g == 1
    # bottom row (c, d); need det = a d - b c = 1
    return (y, -x, c, d)


def _egcd(a, b):
    if a == 0:
        return b, 0, 1
    g, x, y = _egcd(b % a, a)
    return g, y - (b // a) * x, x


SIGMA = (0, -1, 1, 0)
TAU = (0, -1, 1, -1)


def mat_mul(g, h):
    return (g[0] * h[0] + g[1] * h[2], g[0] * h[1] + g[1] * h[3],
            g[2] * h[0] + g[3] * h[2], g[2] * h[1] + g[3] * h[3])


def mat_inv_sl2(g):
    a, b, c, d = g
    det = a * d - b * c
    if det != 1:
        raise PadicDomainError("not in SL_2")
    return (d, -b, -c, a)


# ---------------------------------------------------------------------------
# V(k) and the polynomial action
# ---------------------------------------------------------------------------

def vk_action_matrix(g, k):
    """Matrix of the dual action v -> g.v on V(k) coordinates.

    Coordinates of v are its values on the monomials X^(k-i) Y^i.  The
    polynomial action is (g.P)(X,Y) = det(g)^{-k/2} P((X,Y) g); the dual is
    (g.v)(P) = v(g^{-1}.P), computed via the adjugate.
    """
    a, b, c, d = g
    det = a * d - b * c
    # g^{-1}.P = det^{-k/2} P((X,Y) adj(g))
    aa, bb, cc, dd = d, -b, -c, a
    cols = []
    for i in range(k + 1):
        # P = X^(k-i) Y^i evaluated at (aa X + cc Y, bb X + dd Y)
        co = _binary_expand(aa, cc, k - i, bb, dd, i)
        cols.append(co)
    scale = Fraction(1, det**(k // 2)) if k else Fraction(1)
    mat = [[scale * cols[j][i] for j in range(k + 1)] for i in range(k + 1)]
    return mat


def _binary_expand(a, c, e1, b, d, e2):
    """Coefficients of (aX+cY)^e1 (bX+dY)^e2 on X^(k-i) Y^i, k = e1+e2."""
    from math import comb
    k = e1 + e2
    out = [0] * (k + 1)
    for s in range(e1 + 1):
        c1 = comb(e1, s) * a**(e1 - s) * c**s
        for t in range(e2 + 1):
            c2 = comb(e2, t) * b**(e2 - t) * d**t
            out[s + t] += c1 * c2
    return out


def apply_mat(mat, vec):
    return tuple(sum(row[j] * vec[j] for j in range(len(vec))) for row in mat)


# ---------------------------------------------------------------------------
# the Manin presentation
# ---------------------------------------------------------------------------

class ManinBasis:
    """Solved basis of weight-(k+2) modular symbols of level N.

    Symbols are tuples of V(k) vectors indexed by P^1(Z/N); the relation
    matrix imposes v|sigma and v|tau cycles and the solution space is the
    full symbol space (cuspidal + boundary).
    """

    def __init__(self, N, k=0):
        if k % 2:
            raise PadicDomainError("even k only")
        self.N = N
        self.k = k
        self.p1 = P1List(N)
        self.reps = [lift_to_sl2(c, d, N) for (c, d) in self.p1.reps]
        self.ngen = len(self.reps)
        self.dim_vk = k + 1
        self._solve_relations()

    def coset_index(self, g):
        return self.p1.index(g[2] % self.N, g[3] % self.N)

    def decompose(self, g):
        """g = h * u_j with h in Gamma_0(N): returns (h, j)."""
        j = self.coset_index(g)
        h = mat_mul(g, mat_inv_sl2(self.reps[j]))
        assert h[2] % self.N == 0
        return h, j

    def _relation_rows(self):
        nvar = self.ngen * self.dim_vk
        rows = []
        # sigma relations: Phi(g sigma {0,oo}) = -Phi(g {0,oo});
        # g sigma = h u_j' gives h . v_{j'} + v_j = 0 componentwise in V(k)
        for j, u in enumerate(self.reps):
            g = mat_mul(u, SIGMA)
            h, j2 = self.decompose(g)
            mat = vk_action_matrix(h, self.k)
            for i in range(self.dim_vk):
                row = [Fraction(0)] * nvar
                row[j * self.dim_vk + i] += 1
                for t in range(self.dim_vk):
                    row[j2 * self.dim_vk + t] += mat[i][t]
                rows.append(row)
        # tau relations: v_j + h1.v_{j1} + h2.v_{j2} = 0
        for j, u in enumerate(self.reps):
            g1 = mat_mul(u, TAU)
            g2 = mat_mul(u, mat_mul(TAU, TAU))
            h1, j1 = self.decompose(g1)
            h2, j2 = self.decompose(g2)
            m1 = vk_action_matrix(h1, self.k)
            m2 = vk_action_matrix(h2, self.k)
            for i in range(self.dim_vk):
                row = [Fraction(0)] * nvar
                row[j * self.dim_vk + i] += 1
                for t in range(self.dim_vk):
                    row[j1 * self.dim_vk + t] += m1[i][t]
                    row[j2 * self.dim_vk + t] += m2[i][t]
                rows.append(row)
        return rows

    def _solve_relations(self):
        rows = self._relation_rows()
        basis = rational_nullspace(rows, self.ngen * self.dim_vk)
        self.space = basis  # list of flat vectors (tuples of Fractions)

    def dimension(self):
        return len(self.space)

    def symbol_from_flat(self, flat):
        vals = [tuple(flat[j * self.dim_vk + i] for i in range(self.dim_vk))
                for j in range(self.ngen)]
        return ModSym(self, vals)


def rational_nullspace(rows, nvar):
    """Basis of the nullspace of the given rational matrix (row list)."""
    mat = [list(r) for r in rows if any(x != 0 for x in r)]
    piv_cols = []
    r = 0
    for c in range(nvar):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c] != 0:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = Fraction(1) / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        piv_cols.append(c)
        r += 1
        if r == len(mat):
            break
    free_cols = [c for c in range(nvar) if c not in piv_cols]
    basis = []
    for fc in free_cols:
        vec = [Fraction(0)] * nvar
        vec[fc] = Fraction(1)
        for i, pc in enumerate(piv_cols):
            vec[pc] = -mat[i][fc]
        basis.append(tuple(vec))
    return basis


# ---------------------------------------------------------------------------
# symbols
# ---------------------------------------------------------------------------

class ModSym:
    """A modular symbol: V(k) values on the Manin generators."""

    def __init__(self, basis, vals, sign=None):
        self.basis = basis
        self.vals = [tuple(Fraction(x) for x in v) for v in vals]
        self.sign = sign

    def flat(self):
        return tuple(x for v in self.vals for x in v)

    def is_zero(self):
        return all(x == 0 for v in self.vals for x in v)

    def scale(self, c):
        c = Fraction(c)
        return ModSym(self.basis, [tuple(c * x for x in v) for v in self.vals],
                      self.sign)

    def add(self, other):
        return ModSym(self.basis,
                      [tuple(x + y for x, y in zip(v, w))
                       for v, w in zip(self.vals, other.vals)], self.sign)

    def sub(self, other):
        return self.add(other.scale(-1))

    def normalized_integral(self):
        """Clear denominators and content: primitive integer coordinates."""
        from math import lcm
        flat = [x for v in self.vals for x in v]
        if all(x == 0 for x in flat):
            return self
        den = 1
        for x in flat:
            den = lcm(den, x.denominator)
        ints = [x * den for x in flat]
        g = 0
        for x in ints:
            g = gcd(g, int(x))
        g = g or 1
        # fix the overall sign so the first nonzero entry is positive
        first = next(x for x in ints if x != 0)
        if first < 0:
            g = -g
        scaled = [Fraction(int(x), g) for x in ints]
        dim = self.basis.dim_vk
        vals = [tuple(scaled[j * dim + i] for i in range(dim))
                for j in range(self.basis.ngen)]
        return ModSym(self.basis, vals, self.sign)

    # -- evaluation on paths ---------------------------------------------------

    def eval_unimodular(self, g):
        """Value on the path g{0 -> oo}, g in SL_2(Z)."""
        h, j = self.basis.decompose(g)
        mat = vk_action_matrix(h, self.basis.k)
        return apply_mat(mat, self.vals[j])

    def eval_path(self, r, s):
        """Value on {r -> s} for cusps given as Fractions or None (= oo)."""
        total = tuple(Fraction(0) for _ in range(self.basis.dim_vk))
        for g in unimodular_path(r, s):
            v = self.eval_unimodular(g)
            total = tuple(a + b for a, b in zip(total, v))
        return total

    # -- operators ----------------------------------------------------------------

    def star_involution(self):
        """The sign involution iota = conj by diag(-1, 1).

        (iota.Phi)(D) := iota . Phi(iota D); since iota fixes 0 and oo,
        iota u {0,oo} = (iota u iota){0,oo} = h u_j {0,oo} and the value is
        (iota h) . v_j.
        """
        out = []
        iota = (-1, 0, 0, 1)
        for u in self.basis.reps:
            giu = mat_mul(iota, mat_mul(u, iota))  # iota u iota in SL_2
            h, j = self.basis.decompose(giu)
            mat = vk_action_matrix(mat_mul(iota, h), self.basis.k)
            out.append(apply_mat(mat, self.vals[j]))
        return ModSym(self.basis, out, self.sign)

    def sign_project(self, sign):
        st = self.star_involution()
        half = Fraction(1, 2)
        return ModSym(self.basis,
                      [tuple(half * (x + sign * y) for x, y in zip(v, w))
                       for v, w in zip(self.vals, st.vals)], sign)

    def hecke(self, ell):
        """T_ell for ell prime not dividing N, or U_ell when ell | N."""
        mats = [(1, a, 0, ell) for a in range(ell)]
        if self.basis.N % ell != 0:
            mats.append((ell, 0, 0, 1))
        out = []
        for u in self.basis.reps:
            total = tuple(Fraction(0) for _ in range(self.basis.dim_vk))
            for g in mats:
                # (g * Phi)(D) = g . Phi(g^{-1} D): evaluate on g^{-1} u{0,oo}
                val = self._eval_transformed_path(g, u)
                gm = vk_action_matrix(g, self.basis.k)
                val = apply_mat(gm, val)
                total = tuple(a + b for a, b in zip(total, val))
            out.append(total)
        return ModSym(self.basis, out, self.sign)

    def _eval_transformed_path(self, g, u):
        """Phi(g^{-1} u {0 -> oo}) via cusp arithmetic."""
        r = _mat_cusp(u, Fraction(0))
        s = _mat_cusp(u, None)
        a, b, c, d = g
        det = a * d - b * c
        ginv = (d, -b, -c, a)  # adj: same PGL element as g^{-1}
        r2 = _mat_cusp(ginv, r)
        s2 = _mat_cusp(ginv, s)
        return self.eval_path(r2, s2)

    def eq(self, other):
        return all(v == w for v, w in zip(self.vals, other.vals))


def _mat_cusp(g, x):
    """Fractional linear action on a cusp (None = oo)."""
    a, b, c, d = g
    if x is None:
        if c == 0:
            return None
        return Fraction(a, c)
    num = a * x + b
    den = c * x + d
    if den == 0:
        return None
    return Fraction(num, den)


def unimodular_path(r, s):
    """SL_2(Z) matrices g_i with sum g_i {0 -> oo} = {r -> s}.

    {r -> s} = {r -> oo} - {s -> oo}; a reversed path is g sigma {0 -> oo}.
    """
    return list(_to_infty(r)) + [mat_mul(g, SIGMA) for g in _to_infty(s)]


def _to_infty(x):
    """Unimodular path decomposition of {x -> oo} as matrices g_i{0,oo}.

    Continued-fraction convergents p_k/q_k of x (with p_{-1}/q_{-1} = oo):
    {x -> oo} telescopes through {p_k/q_k -> p_{k-1}/q_{k-1}}.
    """
    if x is None:
        return []
    x = Fraction(x)
    a, b = x.numerator, x.denominator
    cf = []
    while b:
        q, rm = divmod(a, b)
        cf.append(q)
        a, b = b, rm
    ps, qs = [Fraction(1), Fraction(cf[0])], [Fraction(0), Fraction(1)]
    for q in cf[1:]:
        ps.append(q * ps[-1] + ps[-2])
        qs.append(q * qs[-1] + qs[-2])
    mats = []
    for k in range(len(ps) - 1, 0, -1):
        p1, q1 = ps[k], qs[k]
        p0, q0 = ps[k - 1], qs[k - 1]
        det = p0 * q1 - p1 * q0
        g = (int(p0), int(p1), int(q0), int(q1))
        if det == -1:
            g = (int(-p0), int(p1), int(-q0), int(q1))
        elif det != 1:
            raise PadicDomainError("non-unimodular convergents")
        # g{0,oo} = {p1/q1 -> p0/q0}: g(0) = b/d, g(oo) = a/c
        mats.append(g)
    return mats


# ---------------------------------------------------------------------------
# eigensymbols and p-stabilization
# ---------------------------------------------------------------------------

def manin_basis(N, k=0, sign=None):
    return ManinBasis(N, k)


def eigensymbol(basis, record, sign=1):
    """Cut the 1-dimensional eigenspace matching the record's a_ell.

    record: dict with keys 'ap' (prime -> eigenvalue) and 'N'; uses primes
    not dividing N until the space is 1-dimensional.
    """
    space = [basis.symbol_from_flat(f).sign_project(sign) for f in basis.space]
    # span of sign-projected space
    vecs = [s.flat() for s in space]
    vecs = _independent(vecs)
    if not vecs:
        raise PadicDomainError("empty sign eigenspace")
    current = [basis.symbol_from_flat(f) for f in vecs]
    for s in current:
        s.sign = sign
    for ell in sorted(record["ap"]):
        if len(current) <= 1:
            break
        if basis.N % ell == 0:
            continue
        a = record["ap"][ell]
        imgs = [s.hecke(ell).sub(s.scale(a)) for s in current]
        kern = _kernel_combinations(current, imgs)
        current = kern
    if len(current) != 1:
        # try U_q for q | N as a last resort
        for q in sorted(record["ap"]):
            if len(current) <= 1:
                break
            if basis.N % q:
                continue
            a = record["ap"][q]
            imgs = [s.hecke(q).sub(s.scale(a)) for s in current]
            current = _kernel_combinations(current, imgs)
    if len(current) != 1:
        raise PadicDomainError(
            "eigenspace dimension %d != 1 for the given record" % len(current))
    out = current[0].normalized_integral()
    out.sign = sign
    return out


def _independent(vecs):
    if not vecs:
        return []
    nvar = len(vecs[0])
    rows = [list(v) for v in vecs]
    out = []
    mat = []
    piv = []
    for v in rows:
        w = list(v)
        for (pc, prow) in zip(piv, mat):
            if w[pc] != 0:
                f = w[pc]
                w = [x - f * y for x, y in zip(w, prow)]
        nz = next((i for i, x in enumerate(w) if x != 0), None)
        if nz is None:
            continue
        inv = Fraction(1) / w[nz]
        w = [x * inv for x in w]
        mat.append(w)
        piv.append(nz)
        out.append(tuple(v))
    return out


def _kernel_combinations(symbols, images):
    """Combinations of `symbols` killed by the map with the given images."""
    if not symbols:
        return []
    nvar = len(images[0].flat())
    rows = [[img.flat()[i] for img in images] for i in range(nvar)]
    null = rational_nullspace(rows, len(symbols))
    out = []
    for comb in null:
        s = None
        for c, sym in zip(comb, symbols):
            t = sym.scale(c)
            s = t if s is None else s.add(t)
        if s is not None and not s.is_zero():
            out.append(s)
    return out


class PadicModSym:
    """A modular symbol with values mod p^prec (the stabilized object).

    Same generator/path machinery as ModSym, but coordinates are integers
    mod p^prec: the ordinary stabilization divides by the unit root alpha,
    which is a p-adic integer, so exact rationals are no longer available.
    """

    def __init__(self, basis, vals, p, prec, alpha, sign=None):
        self.basis = basis
        self.p = p
        self.prec = prec
        self.mod = p**prec
        self.vals = [tuple(int(x) % self.mod for x in v) for v in vals]
        self.alpha = alpha % self.mod
        self.sign = sign

    def eval_unimodular(self, g):
        h, j = self.basis.decompose(g)
        mat = vk_action_matrix(h, self.basis.k)
        return tuple(int(sum(row[t] * self.vals[j][t] for t in range(len(row))))
                     % self.mod for row in mat)

    def eval_path(self, r, s):
        total = tuple(0 for _ in range(self.basis.dim_vk))
        for g in unimodular_path(r, s):
            v = self.eval_unimodular(g)
            total = tuple((a + b) % self.mod for a, b in zip(total, v))
        return total

    def up_defect(self):
        """max valuation of U_p(Phi) - alpha Phi over the generators."""
        from .padic import _vp
        worst = self.prec
        p, k = self.p, self.basis.k
        for u, v in zip(self.basis.reps, self.vals):
            r = _mat_cusp(u, Fraction(0))
            s = _mat_cusp(u, None)
            acc = [0] * (k + 1)
            for a in range(p):
                g = (1, a, 0, p)
                ginv = (p, -a, 0, 1)
                val = self.eval_path(_mat_cusp(ginv, r), _mat_cusp(ginv, s))
                gm = vk_action_matrix(g, k)
                for i, row in enumerate(gm):
                    acc[i] += int(sum(row[t] * val[t] for t in range(k + 1)))
            for i in range(k + 1):
                d = (acc[i] - self.alpha * v[i]) % self.mod
                if d:
                    worst = min(worst, _vp(d, p))
        return worst


def p_stabilize(sym, p, a_p, prec=8):
    """Ordinary p-stabilization: level N -> Np with U_p eigenvalue alpha.

    alpha is the unit root of x^2 - a_p x + p^(k+1) (Hensel).  For p | N the
    symbol is already U_p-eigen (multiplicative case, a_p = +-1) and is just
    reduced mod p^prec.
    """
    N = sym.basis.N
    k = sym.basis.k
    mod = p**prec
    if N % p == 0:
        if a_p not in (1, -1):
            raise PadicDomainError("multiplicative a_p must be +-1")
        vals = [tuple(_frac_mod(x, mod, p) for x in v) for v in sym.vals]
        return PadicModSym(sym.basis, vals, p, prec, a_p % mod, sym.sign)
    if a_p % p == 0:
        raise PadicDomainError("non-ordinary a_p")
    alpha = hensel_root([1, -a_p, p**(k + 1)], a_p % p, p, prec)
    basis_np = ManinBasis(N * p, k)
    ainv = pow(alpha, -1, mod)
    g = (p, 0, 0, 1)
    gm = vk_action_matrix(g, k)
    ginv = (1, 0, 0, p)  # adj of g: the same PGL element as g^{-1}
    out = []
    for u in basis_np.reps:
        r = _mat_cusp(u, Fraction(0))
        s = _mat_cusp(u, None)
        base = sym.eval_path(r, s)
        tw = apply_mat(gm, sym.eval_path(_mat_cusp(ginv, r), _mat_cusp(ginv, s)))
        row = []
        for x, y in zip(base, tw):
            row.append((_frac_mod(x, mod, p) - ainv * _frac_mod(y, mod, p)) % mod)
        out.append(tuple(row))
    return PadicModSym(basis_np, out, p, prec, alpha, sym.sign)


def _frac_mod(x, mod, p):
    x = Fraction(x)
    if x.denominator % p == 0:
        raise PadicDomainError("denominator not prime to p")
    return x.numerator * pow(x.denominator, -1, mod) % mod
