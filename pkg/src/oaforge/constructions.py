"""Classical seed-array generators.

Covers the linear-algebra families (Rao-Hamming hyperplane columns,
Bush polynomial evaluation and its even-characteristic strength-3
extension) and the Hadamard route (Sylvester doubling, Paley quadratic
residues, and the order-4L Hadamard to binary OA mappings).

Row and column orders are fixed lexicographically everywhere so that
repeated runs produce byte-identical files.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import NotHadamardError
from .gf import GaloisField
from .oa import OrthogonalArray, verify_strength


@dataclass(frozen=True, eq=False)
class HadamardMatrix:
    """Square +-1 matrix with pairwise orthogonal rows, stored with
    symbol 0 for +1 and symbol 1 for -1."""

    entries: np.ndarray
    provenance: str = ""

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=np.uint8)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("entries must be square")
        if m.size and m.max() > 1:
            raise ValueError("entries must be 0 (+1) or 1 (-1)")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    @property
    def order(self) -> int:
        return int(self.entries.shape[0])

    def signs(self) -> np.ndarray:
        """The matrix with literal +1 / -1 entries."""
        return 1 - 2 * self.entries.astype(np.int64)

    def is_valid(self) -> bool:
        """Exact integer check of H @ H.T == order * I."""
        h = self.signs()
        return bool(np.array_equal(h @ h.T, self.order * np.eye(self.order, dtype=np.int64)))


def _all_tuples(order: int, n: int) -> np.ndarray:
    """All n-tuples over [0, order), lexicographic, first coordinate
    most significant."""
    rows = np.empty((order**n, n), dtype=np.int64)
    for pos in range(n):
        period = order ** (n - 1 - pos)
        rows[:, pos] = (np.arange(order**n) // period) % order
    return rows


def rao_hamming(field: GaloisField, n: int) -> OrthogonalArray:
    """Strength-2 array OA(s^n, (s^n - 1)/(s - 1), s, 2) of index
    s^(n-2).

    Rows are all n-tuples over GF(s) in lexicographic order.  There is
    one column per coefficient vector z whose first nonzero entry is 1,
    holding the field dot product row . z; columns are ordered
    lexicographically by z.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    s = field.order
    rows = _all_tuples(s, n)
    zs = [
        z
        for z in itertools.product(range(s), repeat=n)
        if any(z) and next(v for v in z if v) == 1
    ]
    assert len(zs) == (s**n - 1) // (s - 1)
    out = np.zeros((s**n, len(zs)), dtype=np.int64)
    mul = field.mul_table
    add = field.add_table
    for c, z in enumerate(zs):
        acc = np.zeros(s**n, dtype=np.int64)
        for pos, zv in enumerate(z):
            if zv:
                acc = add[acc, mul[zv, rows[:, pos]]]
        out[:, c] = acc
    return OrthogonalArray(
        out, s, 2, provenance=f"rao-hamming s={s} n={n}; cols lex by z"
    )


def _bush_matrix(field: GaloisField, t: int) -> np.ndarray:
    """Rows: one per polynomial of degree < t (coefficients high to
    low, lexicographic).  Columns: evaluation at each field element in
    increasing order, then the coefficient of x^(t-1)."""
    s = field.order
    coeffs = _all_tuples(s, t)  # [:, 0] is the x^(t-1) coefficient
    out = np.zeros((s**t, s + 1), dtype=np.int64)
    mul = field.mul_table
    add = field.add_table
    for e in range(s):
        acc = np.zeros(s**t, dtype=np.int64)
        for pos in range(t):  # Horner
            acc = add[mul[e, acc], coeffs[:, pos]]
        out[:, e] = acc
    out[:, s] = coeffs[:, 0]
    return out


def bush(field: GaloisField, t: int) -> OrthogonalArray:
    """Index-unity array OA(s^t, s+1, s, t), defined for
    1 <= t <= s + 1.  Simple and linear."""
    s = field.order
    if not 1 <= t <= s + 1:
        raise ValueError(f"bush needs 1 <= t <= s + 1, got t={t} for s={s}")
    return OrthogonalArray(
        _bush_matrix(field, t), s, t, provenance=f"bush s={s} t={t}"
    )


def bush_even(field: GaloisField) -> OrthogonalArray:
    """Strength-3 extension OA(s^3, s+2, s, 3) for s = 2^m: the bush
    array plus one column holding the coefficient of x.  Valid only in
    characteristic 2, where evaluation pairs and the x-coefficient stay
    triple-wise independent."""
    s = field.order
    if field.p != 2:
        raise ValueError(
            f"even-characteristic extension needs s = 2^m, got s={s}"
        )
    base = _bush_matrix(field, 3)
    coeffs = _all_tuples(s, 3)
    out = np.column_stack([base, coeffs[:, 1]])  # coefficient of x
    return OrthogonalArray(out, s, 3, provenance=f"bush-even s={s}")


def sylvester_hadamard(k: int) -> HadamardMatrix:
    """Hadamard matrix of order 2^k by doubling: H(2m) = [[H, H], [H, -H]]."""
    if k < 0:
        raise ValueError(f"need k >= 0, got {k}")
    h = np.zeros((1, 1), dtype=np.uint8)
    for _ in range(k):
        h = np.block([[h, h], [h, 1 - h]])
    return HadamardMatrix(h, provenance=f"sylvester order={2 ** k}")


def paley_hadamard(q: int) -> HadamardMatrix:
    """Hadamard matrix of order q + 1 from quadratic residues mod a
    prime q with q = 3 (mod 4)."""
    if q < 3 or any(q % d == 0 for d in range(2, int(q**0.5) + 1)):
        raise ValueError(f"q must be prime, got {q}")
    if q % 4 != 3:
        raise ValueError(f"q must be 3 mod 4, got {q}")
    residues = {(x * x) % q for x in range(1, q)}
    chi = np.zeros(q, dtype=np.int64)  # quadratic character, chi[0] = 0
    for v in range(1, q):
        chi[v] = 1 if v in residues else -1
    jac = chi[(np.arange(q)[:, None] - np.arange(q)[None, :]) % q]
    signs = np.empty((q + 1, q + 1), dtype=np.int64)
    signs[0, :] = 1
    signs[1:, 0] = -1
    signs[1:, 1:] = jac + np.eye(q, dtype=np.int64)
    h = HadamardMatrix(((1 - signs) // 2).astype(np.uint8), provenance=f"paley q={q}")
    if not h.is_valid():
        raise NotHadamardError(f"paley construction failed for q={q}")
    return h


def _normalized_symbols(h: HadamardMatrix) -> np.ndarray:
    """Row-negate so the first column is all +1, in 0/1 symbol form."""
    m = h.entries.astype(np.uint8)
    flip = m[:, 0:1]  # rows starting with -1 get complemented
    return m ^ flip


def hadamard_to_oa2(h: HadamardMatrix) -> OrthogonalArray:
    """OA(4L, 4L - 1, 2, 2) from a Hadamard matrix of order 4L:
    normalize, map +1 -> 0 / -1 -> 1, drop the constant first column.
    The result is verified at strength 2 before it is returned."""
    if h.order < 4 or h.order % 4 != 0:
        raise ValueError(f"order must be a positive multiple of 4, got {h.order}")
    if not h.is_valid():
        raise NotHadamardError("matrix fails the orthogonality invariant")
    sym = _normalized_symbols(h)[:, 1:]
    oa = OrthogonalArray(
        sym, 2, 2, provenance=f"hadamard-oa2 order={h.order} via {h.provenance}"
    )
    report = verify_strength(oa, 2)
    if not report.confirmed:
        raise NotHadamardError(f"strength-2 verification failed: {report}")
    return oa


def hadamard_to_oa3(h: HadamardMatrix) -> OrthogonalArray:
    """OA(8L, 4L, 2, 3) from a Hadamard matrix of order 4L: stack the
    0/1 image of H on top of its symbol complement.  Verified at
    strength 3 before it is returned."""
    if h.order < 4 or h.order % 4 != 0:
        raise ValueError(f"order must be a positive multiple of 4, got {h.order}")
    if not h.is_valid():
        raise NotHadamardError("matrix fails the orthogonality invariant")
    sym = h.entries.astype(np.uint8)
    stacked = np.vstack([sym, 1 - sym])
    oa = OrthogonalArray(
        stacked, 2, 3, provenance=f"hadamard-oa3 order={h.order} via {h.provenance}"
    )
    report = verify_strength(oa, 3)
    if not report.confirmed:
        raise NotHadamardError(f"strength-3 verification failed: {report}")
    return oa
