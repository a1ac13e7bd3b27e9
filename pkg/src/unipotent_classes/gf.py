"""Small finite fields GF(p^k) as integer-coded lookup tables.

Elements are integers 0..q-1 read as base-p digit vectors, i.e. coefficients
of a residue polynomial modulo a monic irreducible of degree k.  Intended for
tiny q only (the brute-force oracle at non-prime q); prime fields take the
fast numpy path elsewhere.
"""

from __future__ import annotations

from functools import lru_cache


def _factorize(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _poly_mul_mod(a: list[int], b: list[int], modpoly: list[int], p: int) -> list[int]:
    k = len(modpoly) - 1
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    for i in range(len(res) - 1, k - 1, -1):
        c = res[i]
        if c:
            for j in range(k + 1):
                res[i - k + j] = (res[i - k + j] - c * modpoly[j]) % p
    return [x % p for x in res[:k]] + [0] * max(0, k - len(res))


def _is_irreducible(poly: list[int], p: int) -> bool:
    """Trial check for a monic polynomial of small degree over F_p."""
    k = len(poly) - 1
    if k == 1:
        return True
    # No roots.
    for x in range(p):
        if sum(c * pow(x, i, p) for i, c in enumerate(poly)) % p == 0:
            return False
    if k <= 3:
        return True
    # Degree 4/5: exclude quadratic factors by brute force.
    for b in range(p):
        for c in range(p):
            quad = [c, b, 1]
            rem = list(poly)
            for i in range(len(rem) - 1, 1, -1):
                f = rem[i]
                if f:
                    rem[i] = 0
                    rem[i - 1] = (rem[i - 1] - f * b) % p
                    rem[i - 2] = (rem[i - 2] - f * c) % p
            if rem[0] % p == 0 and rem[1] % p == 0:
                return False
    return True


class GFTable:
    """Addition/multiplication/inverse tables for GF(q), q = p^k <= 64."""

    def __init__(self, q: int) -> None:
        fac = _factorize(q)
        if len(set(fac)) != 1:
            raise ValueError(f"{q} is not a prime power")
        if q > 64:
            raise ValueError("table fields limited to q <= 64")
        self.q = q
        self.p = fac[0]
        self.k = len(fac)
        p, k = self.p, self.k
        if k == 1:
            self.add = [[(a + b) % p for b in range(p)] for a in range(p)]
            self.mul = [[(a * b) % p for b in range(p)] for a in range(p)]
        else:
            modpoly = self._find_modpoly(p, k)
            digits = [self._digits(a) for a in range(q)]
            self.add = [[self._undigits([(x + y) % p for x, y in zip(digits[a], digits[b])])
                         for b in range(q)] for a in range(q)]
            self.mul = [[self._undigits(_poly_mul_mod(digits[a], digits[b], modpoly, p))
                         for b in range(q)] for a in range(q)]
        self.neg = [next(b for b in range(q) if self.add[a][b] == 0) for a in range(q)]
        self.inv = [0] * q
        for a in range(1, q):
            self.inv[a] = next(b for b in range(1, q) if self.mul[a][b] == 1)

    @staticmethod
    def _find_modpoly(p: int, k: int) -> list[int]:
        # Smallest monic irreducible of degree k over F_p, by enumeration.
        for tail in range(p ** k):
            poly = []
            t = tail
            for _ in range(k):
                poly.append(t % p)
                t //= p
            poly.append(1)
            if _is_irreducible(poly, p):
                return poly
        raise AssertionError("no irreducible polynomial found")

    def _digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.k):
            out.append(a % self.p)
            a //= self.p
        return out

    def _undigits(self, ds: list[int]) -> int:
        out = 0
        for d in reversed(ds[: self.k]):
            out = out * self.p + d
        return out

    def from_int(self, n: int) -> int:
        """Image of an integer under Z -> GF(q) (through the prime field)."""
        r = n % self.p
        return r  # prime-field elements embed as the low digit

    def matvec(self, m: list[list[int]], v: list[int]) -> list[int]:
        mul, add = self.mul, self.add
        out = []
        for row in m:
            acc = 0
            for a, x in zip(row, v):
                if a and x:
                    acc = add[acc][mul[a][x]]
            out.append(acc)
        return out

    def matmul(self, a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
        mul, add = self.mul, self.add
        n, mdim = len(a), len(b[0])
        kdim = len(b)
        out = [[0] * mdim for _ in range(n)]
        for i in range(n):
            arow = a[i]
            orow = out[i]
            for k in range(kdim):
                aik = arow[k]
                if aik:
                    brow = b[k]
                    for j in range(mdim):
                        if brow[j]:
                            orow[j] = add[orow[j]][mul[aik][brow[j]]]
        return out

    def rank(self, mat: list[list[int]]) -> int:
        m = [list(r) for r in mat]
        mul, add, inv, neg = self.mul, self.add, self.inv, self.neg
        rank = 0
        col = 0
        nrows = len(m)
        ncols = len(m[0]) if m else 0
        r = 0
        while r < nrows and col < ncols:
            piv = next((i for i in range(r, nrows) if m[i][col]), None)
            if piv is None:
                col += 1
                continue
            m[r], m[piv] = m[piv], m[r]
            s = inv[m[r][col]]
            m[r] = [mul[s][x] for x in m[r]]
            for i in range(nrows):
                if i != r and m[i][col]:
                    f = neg[m[i][col]]
                    m[i] = [add[x][mul[f][y]] for x, y in zip(m[i], m[r])]
            r += 1
            col += 1
            rank += 1
        return rank


@lru_cache(maxsize=None)
def gf_table(q: int) -> GFTable:
    return GFTable(q)


def is_prime(q: int) -> bool:
    fac = _factorize(q)
    return len(fac) == 1


def prime_power(q: int) -> tuple[int, int]:
    """(p, k) with q = p^k, or raises."""
    fac = _factorize(q)
    if len(set(fac)) != 1:
        raise ValueError(f"{q} is not a prime power")
    return fac[0], len(fac)
