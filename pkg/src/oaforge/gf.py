"""Exact arithmetic in the finite fields GF(p^n).

Elements are plain integers in [0, order): the integer sum(a_i * p^i)
stands for the polynomial a_{n-1} x^{n-1} + ... + a_1 x + a_0 over
GF(p).  For prime orders this reduces to ordinary arithmetic mod p.

Canonical reduction moduli (coefficients low to high, monic):
    GF(4)  : x^2 + x + 1
    GF(8)  : x^3 + x + 1
    GF(9)  : x^2 + 1
    GF(16) : x^4 + x + 1
    GF(25) : x^2 + 2
    GF(27) : x^3 + 2x + 1
    GF(32) : x^5 + x^2 + 1
    GF(49) : x^2 + 1
    GF(64) : x^6 + x + 1
    GF(121): x^2 + 1
    GF(169): x^2 + 2
    GF(289): x^2 + 3

Orders without a table entry fall back to the first monic irreducible
polynomial under the integer coefficient encoding, so construction
stays deterministic across runs either way.

All operations are table lookups after construction; a field instance
is immutable and safe to share between threads.
"""

from __future__ import annotations

import numpy as np

from .errors import NotPrimePowerError

# (p, n) -> monic irreducible modulus, coefficients low to high.
_MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (3, 2): (1, 0, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 0, 1),
    (7, 2): (1, 0, 1),
    (11, 2): (1, 0, 1),
    (13, 2): (2, 0, 1),
    (17, 2): (3, 0, 1),
}


def factor_prime_power(s: int) -> tuple[int, int]:
    """Split s into (p, n) with p prime and p**n == s."""
    if s < 2:
        raise NotPrimePowerError(f"field order must be at least 2, got {s}")
    p = s
    for d in range(2, s + 1):
        if d * d > s:
            break
        if s % d == 0:
            p = d
            break
    n = 0
    rest = s
    while rest % p == 0:
        rest //= p
        n += 1
    if rest != 1:
        raise NotPrimePowerError(f"{s} is not a prime power")
    return p, n


def _poly_mul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    return tuple(out)


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    # m is monic; reduce a in place, return coefficients below deg(m)
    deg_m = len(m) - 1
    a = list(a)
    for i in range(len(a) - 1, deg_m - 1, -1):
        c = a[i] % p
        if c:
            for j in range(len(m)):
                a[i - deg_m + j] = (a[i - deg_m + j] - c * m[j]) % p
    return [c % p for c in a[:deg_m]]


def _monic_polys(degree: int, p: int):
    """All monic polynomials of exactly the given degree over GF(p)."""
    total = p**degree
    for low in range(total):
        coeffs = []
        v = low
        for _ in range(degree):
            coeffs.append(v % p)
            v //= p
        yield tuple(coeffs) + (1,)


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    degree = len(modulus) - 1
    if degree < 1 or modulus[-1] % p != 1:
        return False
    for d in range(1, degree // 2 + 1):
        for divisor in _monic_polys(d, p):
            if not any(_poly_mod(list(modulus), divisor, p)):
                return False
    return True


def _find_modulus(p: int, n: int) -> tuple[int, ...]:
    for candidate in _monic_polys(n, p):
        if is_irreducible(candidate, p):
            return candidate
    raise AssertionError(f"no irreducible polynomial of degree {n} over GF({p})")


def _int_to_poly(v: int, p: int, n: int) -> tuple[int, ...]:
    coeffs = []
    for _ in range(n):
        coeffs.append(v % p)
        v //= p
    return tuple(coeffs)


def _poly_to_int(coeffs, p: int) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * p + c
    return v


def table_dtype(order: int):
    """Smallest unsigned dtype that holds symbols below the given order."""
    return np.uint8 if order <= 256 else np.uint16


class GaloisField:
    """GF(p^n) with precomputed order x order addition and
    multiplication tables.

    Parameters
    ----------
    order : int
        Field order; must be a prime power.
    modulus : tuple of int, optional
        Reduction polynomial (coefficients low to high, monic, degree n)
        overriding the canonical choice.  Ignored for prime orders.
    """

    def __init__(self, order: int, modulus: tuple[int, ...] | None = None):
        p, n = factor_prime_power(order)
        self.p = p
        self.n = n
        self.order = order
        if n == 1:
            self.modulus: tuple[int, ...] = ()
        else:
            if modulus is None:
                modulus = _MODULI.get((p, n)) or _find_modulus(p, n)
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != n + 1 or modulus[-1] != 1:
                raise ValueError(
                    f"modulus must be monic of degree {n}, got {modulus}"
                )
            if not is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is reducible over GF({p})")
            self.modulus = modulus

        dtype = table_dtype(order)
        add = np.empty((order, order), dtype=dtype)
        mul = np.empty((order, order), dtype=dtype)
        if n == 1:
            idx = np.arange(order, dtype=np.int64)
            add[:] = (idx[:, None] + idx[None, :]) % order
            mul[:] = (idx[:, None] * idx[None, :]) % order
        else:
            polys = [_int_to_poly(v, p, n) for v in range(order)]
            for a in range(order):
                pa = polys[a]
                for b in range(a, order):
                    pb = polys[b]
                    sv = _poly_to_int([(x + y) % p for x, y in zip(pa, pb)], p)
                    mv = _poly_to_int(_poly_mod(list(_poly_mul(pa, pb, p)), self.modulus, p), p)
                    add[a, b] = add[b, a] = sv
                    mul[a, b] = mul[b, a] = mv
        add.setflags(write=False)
        mul.setflags(write=False)
        self.add_table = add
        self.mul_table = mul

        neg = np.empty(order, dtype=dtype)
        inv = np.zeros(order, dtype=dtype)
        for a in range(order):
            neg[a] = np.nonzero(add[a] == 0)[0][0]
            if a:
                inv[a] = np.nonzero(mul[a] == 1)[0][0]
        neg.setflags(write=False)
        inv.setflags(write=False)
        self.neg_table = neg
        self.inv_table = inv

    # scalar operations; vector code indexes the tables directly
    def add(self, a: int, b: int) -> int:
        return int(self.add_table[a, b])

    def neg(self, a: int) -> int:
        return int(self.neg_table[a])

    def sub(self, a: int, b: int) -> int:
        return int(self.add_table[a, self.neg_table[b]])

    def mul(self, a: int, b: int) -> int:
        return int(self.mul_table[a, b])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return int(self.inv_table[a])

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def elements(self) -> range:
        return range(self.order)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GaloisField)
            and self.order == other.order
            and self.modulus == other.modulus
        )

    def __hash__(self) -> int:
        return hash((self.order, self.modulus))

    def __repr__(self) -> str:
        if self.n == 1:
            return f"GaloisField({self.order})"
        return f"GaloisField({self.order}, modulus={self.modulus})"
