"""Orthogonal-array data model, verifiers, and the array text format.

The verifiers are exact and exhaustive: strength is certified by
counting every projected row of every column subset into a dense
histogram and comparing each bucket against the index N / s^t.  No
algebraic shortcut replaces the counting.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import FormatError
from .gf import GaloisField, table_dtype

# Refuse histograms above this many buckets per subset rather than
# approximate; every in-scope array fits comfortably.
CELL_CAP = 1 << 24

# Elements touched per verification chunk; keeps scratch arrays small.
_CHUNK_TARGET = 1 << 22


@dataclass(frozen=True, eq=False)
class OrthogonalArray:
    """An N x k symbol matrix plus its claimed parameters.

    matrix     : runs x factors array, symbols in [0, levels)
    levels     : number of symbols s
    strength   : claimed strength t (0 <= t <= factors)
    provenance : construction lineage, stored as comment lines in files
    """

    matrix: np.ndarray
    levels: int
    strength: int
    provenance: str = ""

    def __post_init__(self):
        m = np.asarray(self.matrix)
        if m.ndim != 2 or m.shape[0] < 1 or m.shape[1] < 1:
            raise ValueError("matrix must be 2-D with at least one run and factor")
        if not np.issubdtype(m.dtype, np.integer):
            raise ValueError(f"symbols must be integers, got dtype {m.dtype}")
        if self.levels < 2:
            raise ValueError(f"levels must be at least 2, got {self.levels}")
        if m.min() < 0 or m.max() >= self.levels:
            raise ValueError(
                f"symbols must lie in [0, {self.levels - 1}]"
            )
        if not 0 <= self.strength <= m.shape[1]:
            raise ValueError(
                f"claimed strength {self.strength} outside [0, {m.shape[1]}]"
            )
        if self.strength >= 1 and m.shape[0] % self.levels**self.strength != 0:
            raise ValueError(
                f"index would not be integral: {self.levels}^{self.strength} "
                f"does not divide {m.shape[0]} runs"
            )
        m = m.astype(table_dtype(self.levels), copy=True)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def runs(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def factors(self) -> int:
        return int(self.matrix.shape[1])

    @property
    def params(self) -> tuple[int, int, int, int]:
        return (self.runs, self.factors, self.levels, self.strength)

    def __repr__(self) -> str:
        n, k, s, t = self.params
        return f"OA({n},{k},{s},{t})"


@dataclass(frozen=True)
class Witness:
    """First violating (column subset, symbol tuple) found, with the
    observed count and the exact expected count."""

    columns: tuple[int, ...]
    symbols: tuple[int, ...]
    observed: int
    expected: int | Fraction


@dataclass(frozen=True)
class StrengthReport:
    strength: int                  # requested t
    confirmed: bool
    index: int | None              # N / s^t when confirmed
    witness: Witness | None
    subsets_checked: int
    exhaustive: bool = True        # False when only a subset sample ran

    def __str__(self) -> str:
        mode = "" if self.exhaustive else " (sampled)"
        if self.confirmed:
            return (
                f"strength {self.strength} confirmed{mode}, index {self.index}, "
                f"{self.subsets_checked} subsets checked"
            )
        w = self.witness
        return (
            f"strength {self.strength} FAILED{mode} at columns {w.columns}, "
            f"tuple {w.symbols}: observed {w.observed}, expected {w.expected} "
            f"({self.subsets_checked} subsets checked)"
        )


def _decode_tuple(bucket: int, s: int, t: int) -> tuple[int, ...]:
    # big-endian: first column is the most significant digit
    out = []
    for _ in range(t):
        out.append(bucket % s)
        bucket //= s
    return tuple(reversed(out))


def _count_chunk(columns: np.ndarray, combos: np.ndarray, s: int, lam: int):
    """Histogram one chunk of column subsets.

    columns is the factors x runs transpose of the array, so each
    subset gathers contiguous rows.  Returns None when every bucket
    equals lam, else (local subset index, bucket, observed count) for
    the first violation in subset-major, tuple-lexicographic order.
    chunk * s^t stays below CELL_CAP, so int32 encoding cannot wrap.
    """
    n_subsets, t = combos.shape
    cells = s**t
    enc = columns[combos[:, 0]].astype(np.int32)
    for pos in range(1, t):
        enc *= s
        enc += columns[combos[:, pos]]
    enc += (np.arange(n_subsets, dtype=np.int32) * cells)[:, None]
    counts = np.bincount(enc.ravel(), minlength=n_subsets * cells)
    bad = counts != lam
    if not bad.any():
        return None
    flat = int(np.argmax(bad))
    return flat // cells, flat % cells, int(counts[flat])


def _combo_chunks(k: int, t: int, chunk: int):
    """Yield lexicographically ordered (t)-subset chunks as int arrays."""
    it = itertools.combinations(range(k), t)
    while True:
        flat = np.fromiter(
            itertools.chain.from_iterable(itertools.islice(it, chunk)),
            dtype=np.int64,
        )
        if flat.size == 0:
            return
        yield flat.reshape(-1, t)


def _count_tuple(matrix: np.ndarray, columns: tuple[int, ...], symbols: tuple[int, ...]) -> int:
    mask = np.ones(matrix.shape[0], dtype=bool)
    for c, v in zip(columns, symbols):
        mask &= matrix[:, c] == v
    return int(mask.sum())


def _scan_subsets(matrix, chunks, s, lam, jobs):
    """Run _count_chunk over all chunks, in waves of `jobs`.

    Returns (global subset rank, bucket, observed) for the first
    failure in chunk order, or None.  Chunks are submitted and drained
    in order, so the answer does not depend on jobs.
    """
    columns = np.ascontiguousarray(matrix.T)
    offset = 0
    if jobs <= 1:
        for combos in chunks:
            res = _count_chunk(columns, combos, s, lam)
            if res is not None:
                return (offset + res[0], res[1], res[2])
            offset += combos.shape[0]
        return None

    violation = None
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        done = False
        while not done:
            wave = []
            for combos in itertools.islice(chunks, jobs):
                wave.append((offset, pool.submit(_count_chunk, columns, combos, s, lam)))
                offset += combos.shape[0]
            if not wave:
                break
            for start, fut in wave:
                res = fut.result()
                if res is not None and violation is None:
                    violation = (start + res[0], res[1], res[2])
                    done = True
    return violation


def verify_strength(array: OrthogonalArray, t: int, *, jobs: int = 1) -> StrengthReport:
    """Certify strength t by exhaustive counting over all C(k, t)
    column subsets, in lexicographic order.

    The report is confirmed iff every subset's s^t histogram is
    constant at N / s^t.  On failure the witness is the
    lexicographically first violating (subset, tuple); when N is not
    divisible by s^t the scan is skipped and the witness records the
    all-zeros tuple of the first subset against the fractional
    expectation.  Results are identical for every jobs value.
    """
    n, k = array.matrix.shape
    s = array.levels
    if not 0 <= t <= k:
        raise ValueError(f"strength must be in [0, {k}], got {t}")
    if t == 0:
        return StrengthReport(0, True, n, None, 1)
    cells = s**t
    if cells > CELL_CAP:
        raise ValueError(
            f"refusing to verify: {s}^{t} buckets per subset exceeds {CELL_CAP}"
        )
    expected = Fraction(n, cells)
    first = tuple(range(t))
    if expected.denominator != 1:
        zeros = (0,) * t
        witness = Witness(first, zeros, _count_tuple(array.matrix, first, zeros), expected)
        return StrengthReport(t, False, None, witness, 1)
    lam = int(expected)

    total = math.comb(k, t)
    chunk = max(16, min(16384, _CHUNK_TARGET // max(n, 1)))
    chunk = max(1, min(chunk, CELL_CAP // cells))
    violation = _scan_subsets(array.matrix, _combo_chunks(k, t, chunk), s, lam, jobs)
    if violation is None:
        return StrengthReport(t, True, lam, None, total)
    rank, bucket, observed = violation
    columns = _unrank_combination(k, t, rank)
    witness = Witness(columns, _decode_tuple(bucket, s, t), observed, lam)
    return StrengthReport(t, False, None, witness, rank + 1)


def _unrank_combination(k: int, t: int, rank: int) -> tuple[int, ...]:
    """Subset at the given position of the lexicographic enumeration."""
    out = []
    prev = -1
    for pos in range(t):
        c = prev + 1
        while True:
            block = math.comb(k - c - 1, t - pos - 1)
            if rank < block:
                break
            rank -= block
            c += 1
        out.append(c)
        prev = c
    return tuple(out)


def _sample_combos(k: int, t: int, budget: int, rng: np.random.Generator) -> np.ndarray:
    """Deterministic random t-subsets (sorted columns, may repeat)."""
    rows = []
    block = max(1, min(budget, (1 << 23) // max(k, 1)))
    remaining = budget
    while remaining > 0:
        b = min(block, remaining)
        picks = np.argpartition(rng.random((b, k)), t - 1, axis=1)[:, :t]
        rows.append(np.sort(picks, axis=1))
        remaining -= b
    return np.vstack(rows).astype(np.int64)


def verify_strength_sampled(
    array: OrthogonalArray,
    t: int,
    *,
    lex_budget: int = 100_000,
    random_budget: int = 100_000,
    sample_seed: int = 20_08_04,
    jobs: int = 1,
) -> StrengthReport:
    """Check strength t on a deterministic sample of column subsets:
    the first lex_budget subsets in lexicographic order plus
    random_budget subsets drawn with a fixed-seed generator.

    Falls back to the exhaustive verifier when the lexicographic budget
    already covers every subset.  A confirmed sampled report certifies
    only the subsets it checked (exhaustive=False).
    """
    n, k = array.matrix.shape
    s = array.levels
    if not 0 <= t <= k:
        raise ValueError(f"strength must be in [0, {k}], got {t}")
    total = math.comb(k, t)
    if t == 0 or total <= lex_budget:
        return verify_strength(array, t, jobs=jobs)
    cells = s**t
    if cells > CELL_CAP:
        raise ValueError(
            f"refusing to verify: {s}^{t} buckets per subset exceeds {CELL_CAP}"
        )
    expected = Fraction(n, cells)
    if expected.denominator != 1:
        first = tuple(range(t))
        zeros = (0,) * t
        witness = Witness(first, zeros, _count_tuple(array.matrix, first, zeros), expected)
        return StrengthReport(t, False, None, witness, 1, exhaustive=False)
    lam = int(expected)

    chunk = max(16, min(16384, _CHUNK_TARGET // max(n, 1)))
    chunk = max(1, min(chunk, CELL_CAP // cells))
    lex_chunks = itertools.islice(_combo_chunks(k, t, chunk), math.ceil(lex_budget / chunk))

    rng = np.random.default_rng(sample_seed)
    sampled = _sample_combos(k, t, random_budget, rng)

    def chunks():
        produced = 0
        for combos in lex_chunks:
            keep = combos[: max(0, lex_budget - produced)]
            if keep.shape[0] == 0:
                break
            produced += keep.shape[0]
            yield keep
        for lo in range(0, sampled.shape[0], chunk):
            yield sampled[lo : lo + chunk]

    checked_total = lex_budget + random_budget
    violation = _scan_subsets(array.matrix, chunks(), s, lam, jobs)
    if violation is None:
        return StrengthReport(t, True, lam, None, checked_total, exhaustive=False)
    rank, bucket, observed = violation
    if rank < lex_budget:
        columns = _unrank_combination(k, t, rank)
    else:
        columns = tuple(int(c) for c in sampled[rank - lex_budget])
    witness = Witness(columns, _decode_tuple(bucket, s, t), observed, lam)
    return StrengthReport(t, False, None, witness, rank + 1, exhaustive=False)


def max_strength(array: OrthogonalArray, *, jobs: int = 1) -> int:
    """Largest t whose exhaustive verification succeeds (0 when even
    single columns are unbalanced).  Stops below the histogram cap, so
    the answer is always a certified strength."""
    best = 0
    for t in range(1, array.factors + 1):
        if array.runs % array.levels**t != 0:
            break
        if array.levels**t > CELL_CAP:
            break
        if not verify_strength(array, t, jobs=jobs).confirmed:
            break
        best = t
    return best


def is_simple(array: OrthogonalArray) -> bool:
    """True iff all runs are distinct."""
    m = np.ascontiguousarray(array.matrix)
    rows = {m[i].tobytes() for i in range(m.shape[0])}
    return len(rows) == m.shape[0]


def is_linear(
    array: OrthogonalArray,
    field: GaloisField,
    *,
    closure_pairs: int | None = None,
    seed: int = 0,
) -> bool:
    """True iff the runs form a vector subspace of GF(s)^k.

    Checks, in order: simplicity, runs == s^m, presence of the zero
    run, closure of the run set under scalar multiplication, and
    closure under pairwise addition (hashed-set membership).  With
    closure_pairs set, arrays whose N^2 ordered pairs exceed it are
    checked on that many fixed-seed random pairs instead of all pairs;
    pass None (default) for the fully exhaustive check.
    """
    if field.order != array.levels:
        raise ValueError(
            f"field order {field.order} does not match array levels {array.levels}"
        )
    if not is_simple(array):
        return False
    n = array.runs
    count = n
    while count % field.order == 0:
        count //= field.order
    if count != 1:
        return False
    m = np.ascontiguousarray(array.matrix)
    row_set = {m[i].tobytes() for i in range(n)}
    if np.zeros(array.factors, dtype=m.dtype).tobytes() not in row_set:
        return False
    for scalar in range(2, field.order):
        scaled = field.mul_table[scalar, m]
        for i in range(n):
            if scaled[i].tobytes() not in row_set:
                return False
    add = field.add_table
    if closure_pairs is not None and n * n > closure_pairs:
        rng = np.random.default_rng(seed)
        pairs = rng.integers(0, n, size=(closure_pairs, 2))
        for i, j in pairs:
            if add[m[i], m[j]].tobytes() not in row_set:
                return False
        return True
    for i in range(n):
        sums = add[m[i][None, :], m]
        for j in range(n):
            if sums[j].tobytes() not in row_set:
                return False
    return True


@dataclass(frozen=True)
class BalanceIndexMap:
    """Ordered-tuple occurrence counts for every width-t column subset.

    counts maps each column subset to its full tuple -> count table.
    is_balanced holds when, inside every subset, the count depends only
    on the multiset of the tuple; is_globally_balanced additionally
    requires the multiset map to agree across subsets; is_orthogonal
    requires one constant count everywhere.  mu is the shared
    multiset -> count map when globally balanced.
    """

    strength: int
    counts: dict[tuple[int, ...], dict[tuple[int, ...], int]]
    is_balanced: bool
    is_globally_balanced: bool
    is_orthogonal: bool
    mu: dict[tuple[int, ...], int] | None = field(default=None)


def balance_index_map(array: OrthogonalArray, t: int) -> BalanceIndexMap:
    """Count ordered tuples per column subset and classify the array as
    balanced / orthogonal at width t.  Meant for small arrays; the
    table holds all C(k, t) * s^t counts."""
    n, k = array.matrix.shape
    s = array.levels
    if not 1 <= t <= k:
        raise ValueError(f"strength must be in [1, {k}], got {t}")
    if s**t > CELL_CAP:
        raise ValueError("tuple space too large to tabulate")
    rows = [tuple(int(v) for v in r) for r in array.matrix]
    counts: dict[tuple[int, ...], dict[tuple[int, ...], int]] = {}
    all_tuples = list(itertools.product(range(s), repeat=t))
    for subset in itertools.combinations(range(k), t):
        table = dict.fromkeys(all_tuples, 0)
        for row in rows:
            table[tuple(row[c] for c in subset)] += 1
        counts[subset] = table

    balanced = True
    globally_balanced = True
    shared: dict[tuple[int, ...], int] | None = None
    for table in counts.values():
        local: dict[tuple[int, ...], int] = {}
        for tup, c in table.items():
            key = tuple(sorted(tup))
            if key in local and local[key] != c:
                balanced = False
            local.setdefault(key, c)
        if shared is None:
            shared = local
        elif local != shared:
            globally_balanced = False
    globally_balanced = balanced and globally_balanced
    constants = {c for table in counts.values() for c in table.values()}
    orthogonal = len(constants) == 1
    return BalanceIndexMap(
        strength=t,
        counts=counts,
        is_balanced=balanced,
        is_globally_balanced=globally_balanced,
        is_orthogonal=orthogonal,
        mu=shared if globally_balanced else None,
    )


# ---------------------------------------------------------------------------
# text and CSV formats


def to_text(array: OrthogonalArray) -> str:
    """Serialize: comment lines for provenance, then `N k s t`, then one
    space-separated row per run."""
    lines = []
    if array.provenance:
        lines.extend(f"# {line}" for line in array.provenance.split("\n"))
    n, k, s, t = array.params
    lines.append(f"{n} {k} {s} {t}")
    lines.extend(" ".join(map(str, row)) for row in array.matrix.tolist())
    return "\n".join(lines) + "\n"


def from_text(text: str) -> OrthogonalArray:
    """Parse the text format; inverse of to_text on its own output."""
    provenance: list[str] = []
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    pos = 0
    while pos < len(lines) and lines[pos].startswith("#"):
        comment = lines[pos][1:]
        provenance.append(comment[1:] if comment.startswith(" ") else comment)
        pos += 1
    if pos >= len(lines):
        raise FormatError("missing header", line=pos + 1)
    header = lines[pos].split()
    if len(header) != 4:
        raise FormatError(
            f"header must be 'N k s t', got {lines[pos]!r}", line=pos + 1
        )
    try:
        n, k, s, t = (int(x) for x in header)
    except ValueError:
        raise FormatError(
            f"header fields must be integers, got {lines[pos]!r}", line=pos + 1
        ) from None
    if n < 1 or k < 1 or s < 2 or not 0 <= t <= k:
        raise FormatError(f"invalid parameters N={n} k={k} s={s} t={t}", line=pos + 1)
    body = lines[pos + 1 :]
    if len(body) != n:
        raise FormatError(
            f"expected {n} rows, found {len(body)}", line=pos + 1 + min(len(body), n) + 1
        )
    matrix = np.empty((n, k), dtype=np.int64)
    for i, raw in enumerate(body):
        parts = raw.split()
        if len(parts) != k:
            raise FormatError(
                f"row {i} has {len(parts)} symbols, expected {k}", line=pos + 2 + i
            )
        try:
            row = [int(x) for x in parts]
        except ValueError:
            raise FormatError(f"row {i} has a non-integer symbol", line=pos + 2 + i) from None
        for j, v in enumerate(row):
            if not 0 <= v < s:
                raise FormatError(
                    f"row {i} column {j}: symbol {v} outside [0, {s - 1}]",
                    line=pos + 2 + i,
                )
        matrix[i] = row
    try:
        return OrthogonalArray(matrix, s, t, provenance="\n".join(provenance))
    except ValueError as exc:
        raise FormatError(str(exc), line=pos + 1) from None


def read_array(path) -> OrthogonalArray:
    with open(path, "r", encoding="ascii") as fh:
        return from_text(fh.read())


def write_array(array: OrthogonalArray, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(to_text(array))


def to_csv(array: OrthogonalArray) -> str:
    """CSV export: header c1..ck, then one row per run."""
    header = ",".join(f"c{i + 1}" for i in range(array.factors))
    body = "\n".join(",".join(map(str, row)) for row in array.matrix.tolist())
    return f"{header}\n{body}\n"
