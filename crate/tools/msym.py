"""Rational newforms from Manin symbols (plus quotient), computed mod a large prime.

Used offline to produce coefficient fixtures when no online database is reachable.
"""
import math
import numpy as np

PRIME = 2147483629  # < 2^31 so products fit in int64


def kron(d, n):
    """Kronecker symbol (d/n) for n > 0."""
    if n == 0:
        return 1 if abs(d) == 1 else 0
    res = 1
    while n % 2 == 0:
        n //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            res = -res
    a = d % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                res = -res
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            res = -res
        a %= n
    return res if n == 1 else 0


class Space:
    def __init__(self, N, k, disc=1):
        """Weight k modular symbols for Gamma0(N) with character kron(disc, .)."""
        self.N, self.k, self.disc = N, k, disc
        self.eps = lambda u: kron(disc, u % N if u % N else N) if disc != 1 else 1
        units = [u for u in range(1, N + 1) if math.gcd(u, N) == 1]
        self.rep = {}
        reps = []
        for c in range(N):
            for d in range(N):
                if math.gcd(math.gcd(c, d), N) != 1 or (c, d) in self.rep:
                    continue
                orbit = {}
                zero = False
                for u in units:
                    key = (u * c % N, u * d % N)
                    if key in orbit:
                        if kron(disc, u) * orbit[key] != 1 and disc != 1:
                            zero = True
                    else:
                        orbit[key] = kron(disc, u) if disc != 1 else 1
                idx = len(reps)
                reps.append((c, d))
                for key, s in orbit.items():
                    # key = u*(c,d) so [P,key] = eps(u)[P,(c,d)]
                    self.rep[key] = (idx, 0 if zero else s)
        self.reps = reps
        self.m = k - 1
        self.nsym = len(reps) * self.m
        self._build()

    def act(self, i, coeffs_row, a, b, c, d):
        """Image of monomial X^i Y^(k-2-i) under (X,Y) -> (aX+bY, cX+dY)."""
        w = self.k - 2
        p1 = _poly_pow((b, a), i)          # (aX+bY)^i as coeffs in X-degree
        p2 = _poly_pow((d, c), w - i)
        return _poly_mul(p1, p2)

    def symbol(self, poly, c, d, out, scale=1):
        """Add scale * [poly, (c,d)] to dict out (index -> coeff)."""
        key = (c % self.N, d % self.N)
        if key not in self.rep:
            return
        idx, s = self.rep[key]
        if s == 0:
            return
        for j, cf in enumerate(poly):
            if cf:
                col = idx * self.m + j
                out[col] = out.get(col, 0) + scale * s * cf

    def apply(self, i, idx, mat):
        a, b, c, d = mat
        u, v = self.reps[idx]
        poly = self.act(i, None, a, b, c, d)
        out = {}
        self.symbol(poly, u * a + v * c, u * b + v * d, out)
        return out

    def _build(self):
        rels = []
        w = self.k - 2
        for idx in range(len(self.reps)):
            for i in range(self.m):
                base = {idx * self.m + i: 1}
                for mats in ([(0, -1, 1, 0)], [(0, -1, 1, -1), (-1, 1, -1, 0)], [(-1, 0, 0, 1)]):
                    r = dict(base)
                    for mat in mats:
                        for col, v in self.apply(i, idx, mat).items():
                            r[col] = r.get(col, 0) + v
                    rels.append(r)
                # J relation is x - xJ
                r = {idx * self.m + i: 1}
                for col, v in self.apply(i, idx, (-1, 0, 0, 1)).items():
                    r[col] = r.get(col, 0) - v
                rels[-1] = r
        n = self.nsym
        M = np.zeros((len(rels), n), dtype=np.int64)
        for r, rel in enumerate(rels):
            for col, v in rel.items():
                M[r, col] = v % PRIME
        # zero symbols from the character
        R, piv = rref(M)
        self.piv = piv
        free = [j for j in range(n) if j not in set(piv)]
        self.free = free
        self.dim = len(free)
        fpos = {j: t for t, j in enumerate(free)}
        # reduction of each symbol to coordinates on the free basis
        red = np.zeros((n, self.dim), dtype=np.int64)
        for j in free:
            red[j, fpos[j]] = 1
        for r, pc in enumerate(piv):
            row = R[r]
            for j in free:
                if row[j]:
                    red[pc, fpos[j]] = (-row[j]) % PRIME
        self.red = red

    def hecke_on(self, col, n):
        """Coordinates of T_n applied to the free-basis symbol with column index col."""
        idx, i = divmod(col, self.m)
        acc = {}
        for mat in heilbronn(n):
            for c2, v in self.apply(i, idx, mat).items():
                acc[c2] = acc.get(c2, 0) + v
        vec = np.zeros(self.dim, dtype=np.int64)
        for c2, v in acc.items():
            vec = (vec + (v % PRIME) * self.red[c2]) % PRIME
        return vec

    def hecke_matrix(self, n):
        cols = [self.hecke_on(j, n) for j in self.free]
        return np.array(cols, dtype=np.int64).T % PRIME


def _poly_pow(lin, e):
    """(c0 + c1 X)^e with lin = (c0, c1): coefficients of X^j (Y implicit)."""
    out = [1]
    for _ in range(e):
        out = _poly_mul(out, list(lin))
    return out


def _poly_mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


_HEIL = {}


def heilbronn(n):
    if n in _HEIL:
        return _HEIL[n]
    out = []
    for a in range(1, n + 1):
        for d in range(1, n + 2 - a):
            m = a * d - n
            if m < 0:
                continue
            if m == 0:
                for c in range(d):
                    out.append((a, 0, c, d))
                for b in range(1, a):
                    out.append((a, b, 0, d))
                continue
            for b in range(1, a):
                if m % b == 0:
                    c = m // b
                    if c < d:
                        out.append((a, b, c, d))
    _HEIL[n] = out
    return out


def rref(M):
    M = M.copy() % PRIME
    rows, cols = M.shape
    piv = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(M[r:, c])[0]
        if len(nz) == 0:
            continue
        p = r + nz[0]
        if p != r:
            M[[r, p]] = M[[p, r]]
        inv = pow(int(M[r, c]), PRIME - 2, PRIME)
        M[r] = (M[r] * inv) % PRIME
        col = M[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if len(nzr):
            M[nzr] = (M[nzr] - (col[nzr, None] * M[r][None, :]) % PRIME) % PRIME
        piv.append(c)
        r += 1
    return M[:r], piv


def kernel(A):
    """Basis (as rows) of the right kernel of A mod PRIME."""
    R, piv = rref(A)
    n = A.shape[1]
    free = [j for j in range(n) if j not in set(piv)]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for r, pc in enumerate(piv):
            v[pc] = (-R[r, f]) % PRIME
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), n)


def matmul(A, B):
    """A @ B mod PRIME without int64 overflow."""
    A = A % PRIME
    B = B % PRIME
    lo = A & 0xFFFF
    hi = A >> 16
    return ((((hi @ B) % PRIME) * 65536) % PRIME + (lo @ B) % PRIME) % PRIME


def signed(x):
    x = int(x) % PRIME
    return x - PRIME if x > PRIME // 2 else x
