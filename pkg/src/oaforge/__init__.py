"""Orthogonal arrays: classical constructions, a squaring construction
built on Kronecker products with unit vectors, and exact exhaustive
verification of strength, index, simplicity, and linearity."""

from .constructions import (
    HadamardMatrix,
    bush,
    bush_even,
    hadamard_to_oa2,
    hadamard_to_oa3,
    paley_hadamard,
    rao_hamming,
    sylvester_hadamard,
)
from .errors import (
    FormatError,
    LinearityRequiredError,
    NotHadamardError,
    NotPrimePowerError,
    OAForgeError,
    SeedNotVerifiedError,
    StrengthLostError,
)
from .extend import block_decompose, extend, extend_nonlinear, shift_column
from .gf import GaloisField
from .kron import kron_product, kron_sum
from .oa import (
    BalanceIndexMap,
    OrthogonalArray,
    StrengthReport,
    Witness,
    balance_index_map,
    from_text,
    is_linear,
    is_simple,
    max_strength,
    read_array,
    to_csv,
    to_text,
    verify_strength,
    verify_strength_sampled,
    write_array,
)
from .tables import TABLE_ROWS, TableReport, build_seed, reproduce_tables

__version__ = "0.1.0"

__all__ = [
    "BalanceIndexMap",
    "FormatError",
    "GaloisField",
    "HadamardMatrix",
    "LinearityRequiredError",
    "NotHadamardError",
    "NotPrimePowerError",
    "OAForgeError",
    "OrthogonalArray",
    "SeedNotVerifiedError",
    "StrengthLostError",
    "StrengthReport",
    "TABLE_ROWS",
    "TableReport",
    "Witness",
    "balance_index_map",
    "block_decompose",
    "build_seed",
    "bush",
    "bush_even",
    "extend",
    "extend_nonlinear",
    "from_text",
    "hadamard_to_oa2",
    "hadamard_to_oa3",
    "is_linear",
    "is_simple",
    "kron_product",
    "kron_sum",
    "max_strength",
    "paley_hadamard",
    "rao_hamming",
    "read_array",
    "reproduce_tables",
    "shift_column",
    "sylvester_hadamard",
    "to_csv",
    "to_text",
    "verify_strength",
    "verify_strength_sampled",
    "write_array",
]
