"""Exact arithmetic in finite fields F_q with q = p^m.

Elements are plain ints in 0..q-1.  An element encodes a polynomial over F_p
in base p: digit i of the integer is the coefficient of x^i.  For m = 1 this
is ordinary arithmetic mod p.

Fields with q <= 256 carry full lookup tables (add/sub/mul plus unary inv and
neg); these are what the elimination kernels consume.  Larger prime fields
work directly mod p; larger extension fields compute products on the fly.
"""

from __future__ import annotations

import functools
from typing import Optional, Sequence

import numpy as np

TABLE_LIMIT = 256
DEFAULT_MAX_ORDER = 1 << 16


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# Polynomials over F_p as coefficient tuples (ascending powers, trimmed).
# Used only for modulus handling and extension-field arithmetic.


def _ptrim(c: list) -> tuple:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _pmul_fp(a: Sequence[int], b: Sequence[int], p: int) -> tuple:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    return _ptrim(out)


def _psub_fp(a: Sequence[int], b: Sequence[int], p: int) -> tuple:
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out[i] = (x - y) % p
    return _ptrim(out)


def _pmod_fp(a: Sequence[int], mod: Sequence[int], p: int) -> tuple:
    """Remainder of a modulo mod (mod monic) over F_p."""
    r = list(a)
    dm = len(mod) - 1
    while len(r) - 1 >= dm and r:
        lead = r[-1]
        if lead:
            shift = len(r) - 1 - dm
            for i, c in enumerate(mod):
                r[shift + i] = (r[shift + i] - lead * c) % p
        r.pop()
    return _ptrim(r)


def _pdivmod_fp(a: Sequence[int], b: Sequence[int], p: int):
    """(quotient, remainder) of a / b over F_p; b need not be monic."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = len(b) - 1
    binv = pow(b[-1], p - 2, p)
    q = [0] * max(len(r) - db, 0)
    while len(r) - 1 >= db and r:
        lead = r[-1]
        if lead:
            shift = len(r) - 1 - db
            f = (lead * binv) % p
            q[shift] = f
            for i, c in enumerate(b):
                r[shift + i] = (r[shift + i] - f * c) % p
        r.pop()
    return _ptrim(q), _ptrim(r)


def _monic_polys_fp(p: int, d: int):
    """All monic polynomials of degree d over F_p, low coefficients in
    ascending base-p order."""
    for t in range(p ** d):
        coeffs = []
        v = t
        for _ in range(d):
            coeffs.append(v % p)
            v //= p
        coeffs.append(1)
        yield tuple(coeffs)


def _is_irreducible_fp(mod: Sequence[int], p: int) -> bool:
    """Trial division against all monic polynomials of degree <= deg/2."""
    deg = len(mod) - 1
    if deg < 1:
        return False
    for d in range(1, deg // 2 + 1):
        for cand in _monic_polys_fp(p, d):
            _, rem = _pdivmod_fp(mod, cand, p)
            if not rem:
                return False
    return True


def default_modulus(p: int, m: int) -> tuple:
    """Lexicographically-first monic irreducible of degree m over F_p.

    "First" means smallest low-coefficient vector read as a base-p integer,
    which makes the default deterministic across runs and platforms.
    """
    for cand in _monic_polys_fp(p, m):
        if _is_irreducible_fp(cand, p):
            return cand
    raise RuntimeError(f"no irreducible polynomial of degree {m} over F_{p}")


# ---------------------------------------------------------------------------


class FieldSpec:
    """A concrete finite field F_q with total, exact arithmetic.

    Immutable after construction and safe to share across threads; all
    operations are pure functions of their int arguments.
    """

    def __init__(self, p: int, m: int = 1, modulus: Optional[Sequence[int]] = None,
                 max_order: int = DEFAULT_MAX_ORDER):
        if not is_prime(p):
            raise ValueError(f"characteristic {p} is not prime")
        if m < 1:
            raise ValueError(f"extension degree must be >= 1, got {m}")
        q = p ** m
        if q > max_order:
            raise ValueError(f"field order {q} exceeds the configured bound {max_order}")
        self.p = p
        self.m = m
        self.q = q
        if m == 1:
            if modulus:
                raise ValueError("prime fields take no modulus")
            self.modulus: tuple = ()
        else:
            if modulus is None:
                self.modulus = default_modulus(p, m)
            else:
                mod = tuple(int(c) % p for c in modulus)
                if len(mod) != m + 1 or mod[-1] != 1:
                    raise ValueError(f"modulus must be monic of degree {m}")
                if not _is_irreducible_fp(mod, p):
                    raise ValueError(f"modulus {mod} is reducible over F_{p}")
                self.modulus = mod
        self._tables = None
        self._np_tables = None

    # -- encoding -----------------------------------------------------------

    def element_to_coeffs(self, a: int) -> tuple:
        coeffs = []
        for _ in range(self.m):
            coeffs.append(a % self.p)
            a //= self.p
        return _ptrim(coeffs)

    def coeffs_to_element(self, coeffs: Sequence[int]) -> int:
        a = 0
        for c in reversed(coeffs):
            a = a * self.p + (c % self.p)
        return a

    # -- arithmetic ---------------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        p = self.p
        out = 0
        mult = 1
        while a or b:
            out += ((a % p + b % p) % p) * mult
            a //= p
            b //= p
            mult *= p
        return out

    def neg(self, a: int) -> int:
        if self.m == 1:
            return (-a) % self.p
        p = self.p
        out = 0
        mult = 1
        while a:
            out += ((-(a % p)) % p) * mult
            a //= p
            mult *= p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a * b) % self.p
        prod = _pmul_fp(self.element_to_coeffs(a), self.element_to_coeffs(b), self.p)
        return self.coeffs_to_element(_pmod_fp(prod, self.modulus, self.p))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        # extended Euclid in F_p[x] against the modulus
        p = self.p
        r0, r1 = self.modulus, self.element_to_coeffs(a)
        s0, s1 = (), (1,)
        while r1:
            q, r = _pdivmod_fp(r0, r1, p)
            r0, r1 = r1, r
            s0, s1 = s1, _psub_fp(s0, _pmul_fp(q, s1, p), p)
        # r0 is now the gcd, a nonzero constant; normalize
        c_inv = pow(r0[0], p - 2, p)
        s0 = tuple((c * c_inv) % p for c in s0)
        return self.coeffs_to_element(_pmod_fp(s0, self.modulus, p))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def elements(self) -> range:
        return range(self.q)

    # -- lookup tables -------------------------------------------------------

    @property
    def table_backed(self) -> bool:
        return self.q <= TABLE_LIMIT

    def tables(self):
        """(add, sub, mul, neg, inv) as nested Python lists; q <= 256 only.

        Building the tables verifies that every nonzero element has an
        inverse, i.e. that the arithmetic really is a field.
        """
        if not self.table_backed:
            raise ValueError(f"field order {self.q} exceeds the table limit {TABLE_LIMIT}")
        if self._tables is None:
            q = self.q
            if self.m == 1:
                rng = np.arange(q, dtype=np.int64)
                add = ((rng[:, None] + rng[None, :]) % q).tolist()
                sub = ((rng[:, None] - rng[None, :]) % q).tolist()
                mul = ((rng[:, None] * rng[None, :]) % q).tolist()
                neg = ((-rng) % q).tolist()
            else:
                add = [[self.add(a, b) for b in range(q)] for a in range(q)]
                neg = [self.neg(a) for a in range(q)]
                sub = [[add[a][neg[b]] for b in range(q)] for a in range(q)]
                mul = [[self.mul(a, b) for b in range(q)] for a in range(q)]
            inv = [0] * q
            for a in range(1, q):
                row = mul[a]
                for b in range(1, q):
                    if row[b] == 1:
                        inv[a] = b
                        break
                else:
                    raise ValueError(f"element {a} has no inverse; modulus not irreducible?")
            self._tables = (add, sub, mul, neg, inv)
        return self._tables

    def np_tables(self):
        """(add, sub, mul, inv) as uint8 numpy arrays for the kernels."""
        if self._np_tables is None:
            add, sub, mul, _, inv = self.tables()
            self._np_tables = (np.array(add, dtype=np.uint8),
                               np.array(sub, dtype=np.uint8),
                               np.array(mul, dtype=np.uint8),
                               np.array(inv, dtype=np.uint8))
        return self._np_tables

    # -- identity ------------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FieldSpec)
                and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus))

    def __hash__(self):
        return hash((self.p, self.m, self.modulus))

    def __repr__(self):
        if self.m == 1:
            return f"F({self.p})"
        return f"F({self.p}^{self.m})"


@functools.lru_cache(maxsize=None)
def _field_cached(p: int, m: int, modulus: Optional[tuple], max_order: int) -> FieldSpec:
    return FieldSpec(p, m, modulus, max_order)


def field_make(p: int, m: int = 1, modulus: Optional[Sequence[int]] = None,
               max_order: int = DEFAULT_MAX_ORDER) -> FieldSpec:
    """Construct (or fetch the cached) F_{p^m}.

    With no modulus and m > 1, the deterministic default irreducible is used,
    so repeated calls with equal arguments return the identical field object.
    """
    mod = tuple(modulus) if modulus else None
    return _field_cached(p, m, mod, max_order)
