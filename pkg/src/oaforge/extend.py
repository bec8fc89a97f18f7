"""The squaring construction: from a seed OA(N, k, s, t) to an array
with N^2 runs and k^2 + 2k factors.

Append a zero column to the seed's k columns, then emit one output
column for every ordered pair (i, j) of the k+1 columns except
(zero, zero): the column c_i (x) U + U (x) c_j reduced by field
addition, where U is the all-ones N x 1 vector.  Output row (r1, r2)
of pair (i, j) is therefore seed[r1, i] + seed[r2, j].  Field addition
equals mod-s addition whenever s is prime.

Strength 2 is preserved for every seed, and a linear seed always gives
a linear output.  Strength 3 or higher is never preserved: the pair
column (i, j) equals the entrywise sum of the pure columns (i, zero)
and (zero, j), so those three output columns jointly realize only s^2
of the s^3 patterns.  The mandatory output verification reports
exactly that witness; see StrengthLostError.
"""

from __future__ import annotations

import numpy as np

from .errors import LinearityRequiredError, SeedNotVerifiedError, StrengthLostError
from .gf import GaloisField
from .oa import OrthogonalArray, is_linear, verify_strength


def _pair_columns(k: int) -> list[tuple[int, int]]:
    """(i, j) over [0, k] x [0, k] minus (k, k), row-major; index k is
    the appended zero column."""
    return [(i, j) for i in range(k + 1) for j in range(k + 1) if (i, j) != (k, k)]


def extend(
    seed: OrthogonalArray,
    field: GaloisField,
    *,
    force: bool = False,
    verify_seed: bool = True,
    verify_output: bool = True,
    jobs: int = 1,
) -> OrthogonalArray:
    """Build the squared array from a verified seed.

    Raises SeedNotVerifiedError when the seed fails at its claimed
    strength, LinearityRequiredError for a non-linear seed of strength
    >= 3 without force, and StrengthLostError when the mandatory output
    verification fails.  The last is guaranteed for claims of strength
    >= 3 (see the module docstring); pass verify_output=False to keep
    such an output anyway, then certify what it does satisfy with
    verify_strength or max_strength.
    """
    if field.order != seed.levels:
        raise ValueError(
            f"field order {field.order} does not match seed levels {seed.levels}"
        )
    t = seed.strength
    if verify_seed:
        report = verify_strength(seed, t, jobs=jobs)
        if not report.confirmed:
            raise SeedNotVerifiedError(f"seed {seed!r} failed: {report}")
    if t >= 3 and not force and not is_linear(seed, field):
        raise LinearityRequiredError(
            f"seed {seed!r} is not linear; squaring a seed of strength "
            f"{t} >= 3 requires a linear seed unless force=True"
        )

    n, k = seed.matrix.shape
    pairs = _pair_columns(k)
    padded = np.column_stack(
        [seed.matrix.astype(np.int64), np.zeros(n, dtype=np.int64)]
    )
    left = padded[:, [i for i, _ in pairs]]
    right = padded[:, [j for _, j in pairs]]
    out = field.add_table[left[:, None, :], right[None, :, :]].reshape(
        n * n, len(pairs)
    )

    dup = len(pairs) - len({out[:, c].tobytes() for c in range(len(pairs))})
    seed_name = f"OA({n},{k},{seed.levels},{t})"
    provenance = (
        f"kron-extend of {seed_name} [{seed.provenance or 'unspecified seed'}]; "
        f"pairs row-major over columns 1..{k + 1} (zero column last), gf({field.order}) addition"
    )
    if dup:
        provenance += f"; duplicate columns: {dup}"
    result = OrthogonalArray(out, seed.levels, t, provenance=provenance)
    if verify_output:
        report = verify_strength(result, t, jobs=jobs)
        if not report.confirmed:
            raise StrengthLostError(
                f"generated array failed strength-{t} verification: {report}"
            )
    return result


def block_decompose(array: OrthogonalArray, seed_factors: int) -> list[np.ndarray]:
    """Split a squared array's columns into the k+2 blocks underlying
    the construction: block i < k collects pairs (i, j) with j < k,
    block k the pure right columns (zero, j), block k+1 the pure left
    columns (i, zero).  Each block has k columns."""
    k = seed_factors
    if array.factors != k * k + 2 * k:
        raise ValueError(
            f"array has {array.factors} factors, expected {k * k + 2 * k} "
            f"for a seed with {k} factors"
        )
    m = array.matrix
    blocks = [m[:, [i * (k + 1) + j for j in range(k)]] for i in range(k)]
    blocks.append(m[:, [k * (k + 1) + j for j in range(k)]])  # (zero, j)
    blocks.append(m[:, [i * (k + 1) + k for i in range(k)]])  # (i, zero)
    return blocks


def shift_column(
    array: OrthogonalArray, col: int, alpha: int, field: GaloisField
) -> OrthogonalArray:
    """Add a nonzero constant to every entry of one column.

    A per-column symbol relabeling: strength is preserved, but a linear
    array loses its zero run and with it linearity.  alpha = 0 is
    rejected (it would be the identity)."""
    if field.order != array.levels:
        raise ValueError(
            f"field order {field.order} does not match array levels {array.levels}"
        )
    if not 0 <= col < array.factors:
        raise IndexError(f"column {col} outside [0, {array.factors - 1}]")
    if not 0 < alpha < field.order:
        raise ValueError(f"alpha must be a nonzero field element, got {alpha}")
    m = array.matrix.copy()
    m[:, col] = field.add_table[alpha, m[:, col]]
    provenance = array.provenance or "unspecified seed"
    return OrthogonalArray(
        m,
        array.levels,
        array.strength,
        provenance=f"{provenance}; column {col} shifted by {alpha}",
    )


def extend_nonlinear(
    seed: OrthogonalArray,
    col: int,
    alpha: int,
    field: GaloisField,
    *,
    jobs: int = 1,
) -> OrthogonalArray:
    """Shift one column of a linear seed, then square it.

    Every output column is a constant shift of the column the unshifted
    seed would have produced, so the output is exactly as strong as the
    linear build, while the missing zero run makes it non-linear.  The
    seed must be linear and alpha nonzero."""
    if not 0 < alpha < field.order:
        raise ValueError(f"alpha must be a nonzero field element, got {alpha}")
    if not is_linear(seed, field):
        raise LinearityRequiredError(
            f"seed {seed!r} must be linear before the column shift"
        )
    shifted = shift_column(seed, col, alpha, field)
    # the shifted seed is intentionally non-linear; the column-shift
    # argument covers it at any strength, so bypass the gate
    return extend(shifted, field, force=True, jobs=jobs)
