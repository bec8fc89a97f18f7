"""Command-line front end.

Exit codes are a stable contract for scripting:
    0  success / verified
    1  verification failure
    2  input error (bad files, bad parameters)
    3  precondition refusal (non-linear seed without --force)
"""

from __future__ import annotations

import hashlib
import json
import sys
from pathlib import Path

import click

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
    SeedNotVerifiedError,
    StrengthLostError,
)
from .extend import extend, shift_column
from .gf import GaloisField
from .oa import (
    OrthogonalArray,
    is_linear,
    read_array,
    to_csv,
    to_text,
    verify_strength,
)
from .tables import DEFAULT_MAX_COST, reproduce_tables

EXIT_VERIFY_FAILED = 1
EXIT_INPUT_ERROR = 2
EXIT_REFUSED = 3

_LINEAR_SAMPLE_RUNS = 1024  # above this, closure is spot-checked


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _read(path: Path) -> OrthogonalArray:
    try:
        return read_array(path)
    except FormatError as exc:
        _fail(EXIT_INPUT_ERROR, f"{path}: {exc}")
    except OSError as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))


def _linear_state(array: OrthogonalArray) -> str:
    try:
        field = GaloisField(array.levels)
    except NotPrimePowerError:
        return "not-applicable"
    pairs = None if array.runs <= _LINEAR_SAMPLE_RUNS else 10_000
    return "yes" if is_linear(array, field, closure_pairs=pairs) else "no"


def _catalog_load(path: Path) -> dict:
    if path.exists():
        with open(path, "r", encoding="ascii") as fh:
            return json.load(fh)
    return {"entries": []}


def _catalog_append(catalog_path: Path, array: OrthogonalArray, file_path: Path,
                    verified_strength: int | None, index: int | None,
                    lineage: str) -> None:
    # verified_strength is None only for --no-verify timing runs
    data = _catalog_load(catalog_path)
    digest = hashlib.sha256(file_path.read_bytes()).hexdigest()
    try:
        rel = file_path.resolve().relative_to(catalog_path.resolve().parent)
        file_ref = str(rel)
    except ValueError:
        file_ref = str(file_path)
    data["entries"].append(
        {
            "id": digest,
            "file": file_ref,
            "runs": array.runs,
            "factors": array.factors,
            "levels": array.levels,
            "strength_claimed": array.strength,
            "verified_strength": verified_strength,
            "index": index,
            "linear": _linear_state(array),
            "lineage": lineage,
        }
    )
    with open(catalog_path, "w", encoding="ascii") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_and_catalog(array: OrthogonalArray, out: Path | None, catalog: Path,
                       default_name: str, lineage: str, jobs: int = 1,
                       skip_verify: bool = False) -> Path:
    if skip_verify:
        verified, index = None, None
    else:
        report = verify_strength(array, array.strength, jobs=jobs)
        if not report.confirmed:
            _fail(EXIT_VERIFY_FAILED, f"verification failed: {report}")
        verified, index = report.strength, report.index
    path = out if out is not None else Path(default_name)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(to_text(array))
    _catalog_append(catalog, array, path, verified, index, lineage)
    return path


def _default_name(array: OrthogonalArray) -> str:
    n, k, s, t = array.params
    return f"{n}_{k}_{s}_{t}.oa.txt"


@click.group()
def main():
    """Construct orthogonal arrays, square them, and verify every claim
    by exhaustive counting."""


_catalog_option = click.option(
    "--catalog", type=click.Path(path_type=Path), default=Path("catalog.json"),
    show_default=True, help="Catalog manifest to append to.",
)
_out_option = click.option(
    "--out", type=click.Path(path_type=Path), default=None,
    help="Output file (defaults to <N>_<k>_<s>_<t>.oa.txt).",
)
_jobs_option = click.option(
    "--jobs", type=int, default=1, show_default=True,
    help="Verification worker threads; results are identical for any value.",
)


def _hadamard_for_order(order: int) -> HadamardMatrix:
    if order >= 1 and order & (order - 1) == 0:
        return sylvester_hadamard(order.bit_length() - 1)
    return paley_hadamard(order - 1)


@main.command()
@click.argument(
    "kind",
    type=click.Choice(
        ["rao-hamming", "bush", "bush-even", "sylvester", "paley",
         "hadamard-oa2", "hadamard-oa3"]
    ),
)
@click.option("--s", "levels", type=int, default=None, help="Field order.")
@click.option("--n", type=int, default=None, help="Tuple length (rao-hamming).")
@click.option("--t", "strength", type=int, default=None, help="Strength (bush).")
@click.option("--order", type=int, default=None, help="Hadamard order.")
@click.option("--q", type=int, default=None, help="Paley prime, 3 mod 4.")
@_out_option
@_catalog_option
@_jobs_option
def generate(kind, levels, n, strength, order, q, out, catalog, jobs):
    """Build a seed array (or Hadamard matrix) and catalog it.

    Hadamard matrices are stored as 0/1 symbol files (0 for +1) with a
    claimed strength of 0.
    """
    try:
        if kind == "rao-hamming":
            if levels is None or n is None:
                raise ValueError("rao-hamming needs --s and --n")
            array = rao_hamming(GaloisField(levels), n)
        elif kind == "bush":
            if levels is None or strength is None:
                raise ValueError("bush needs --s and --t")
            array = bush(GaloisField(levels), strength)
        elif kind == "bush-even":
            if levels is None:
                raise ValueError("bush-even needs --s")
            array = bush_even(GaloisField(levels))
        elif kind in ("sylvester", "paley"):
            if kind == "sylvester":
                if order is None or order < 1 or order & (order - 1) != 0:
                    raise ValueError("sylvester needs --order equal to a power of 2")
                h = sylvester_hadamard(order.bit_length() - 1)
            else:
                if q is None:
                    raise ValueError("paley needs --q")
                h = paley_hadamard(q)
            if not h.is_valid():
                raise NotHadamardError("orthogonality check failed")
            array = OrthogonalArray(
                h.entries, 2, 0, provenance=f"{h.provenance}; 0=+1 1=-1"
            )
        else:
            if order is None:
                raise ValueError(f"{kind} needs --order")
            h = _hadamard_for_order(order)
            array = hadamard_to_oa2(h) if kind == "hadamard-oa2" else hadamard_to_oa3(h)
    except (ValueError, NotHadamardError, NotPrimePowerError) as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))
    path = _write_and_catalog(
        array, out, catalog, _default_name(array), array.provenance, jobs=jobs
    )
    n_, k_, s_, t_ = array.params
    lam = n_ // s_**t_ if t_ else n_
    click.echo(f"wrote {path}: OA({n_},{k_},{s_},{t_}), index {lam}")


@main.command("extend")
@click.argument("seed_file", type=click.Path(exists=True, path_type=Path))
@click.option("--force", is_flag=True,
              help="Square a non-linear seed of strength >= 3 (conjectured case).")
@click.option("--no-verify", is_flag=True,
              help="Skip seed and output verification (timing runs only).")
@click.option("--permute-col", type=int, default=None,
              help="Shift this column of a linear seed before squaring.")
@click.option("--alpha", type=int, default=None,
              help="Nonzero shift amount for --permute-col.")
@_out_option
@_catalog_option
@_jobs_option
def extend_cmd(seed_file, force, no_verify, permute_col, alpha, out, catalog, jobs):
    """Square a seed: OA(N,k,s,t) becomes OA(N^2, k^2+2k, s, t)."""
    seed = _read(seed_file)
    try:
        field = GaloisField(seed.levels)
    except NotPrimePowerError as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))
    try:
        if permute_col is not None:
            if alpha is None:
                _fail(EXIT_INPUT_ERROR, "--permute-col needs --alpha")
            if not is_linear(seed, field):
                raise LinearityRequiredError(
                    f"seed {seed!r} must be linear before the column shift"
                )
            shifted = shift_column(seed, permute_col, alpha, field)
            array = extend(
                shifted, field, force=True, verify_seed=not no_verify,
                verify_output=False, jobs=jobs,
            )
        else:
            # the output is verified once, below, when writing the file
            array = extend(
                seed,
                field,
                force=force,
                verify_seed=not no_verify,
                verify_output=False,
                jobs=jobs,
            )
    except LinearityRequiredError as exc:
        hint = "" if permute_col is not None else " (hint: pass --force)"
        _fail(EXIT_REFUSED, f"{exc}{hint}")
    except SeedNotVerifiedError as exc:
        _fail(EXIT_VERIFY_FAILED, str(exc))
    except StrengthLostError as exc:
        _fail(EXIT_VERIFY_FAILED, str(exc))
    except (ValueError, IndexError) as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))
    n_, k_, s_, t_ = array.params
    lam = n_ // s_**t_ if t_ else n_
    lineage = f"extend({seed_file.name})"
    if permute_col is not None:
        lineage = f"extend({seed_file.name}, permute-col={permute_col}, alpha={alpha})"
    path = _write_and_catalog(
        array, out, catalog, _default_name(array), lineage, jobs=jobs,
        skip_verify=no_verify,
    )
    click.echo(f"wrote {path}: OA({n_},{k_},{s_},{t_}), index {lam}")


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--t", "strength", type=int, default=None,
              help="Strength to check (defaults to the claimed strength).")
@_jobs_option
def verify(file, strength, jobs):
    """Exhaustively verify a file's strength; exit 0 iff confirmed."""
    array = _read(file)
    t = array.strength if strength is None else strength
    try:
        report = verify_strength(array, t, jobs=jobs)
    except ValueError as exc:
        _fail(EXIT_INPUT_ERROR, str(exc))
    click.echo(str(report))
    if not report.confirmed:
        sys.exit(EXIT_VERIFY_FAILED)


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--keep", required=True,
              help="Comma-separated column indices to keep, in order.")
@_out_option
@_catalog_option
@_jobs_option
def columns(file, keep, out, catalog, jobs):
    """Restrict an array to a subset of its columns (strength survives,
    capped at the new factor count)."""
    array = _read(file)
    try:
        keep_list = [int(x) for x in keep.split(",") if x.strip() != ""]
    except ValueError:
        _fail(EXIT_INPUT_ERROR, f"--keep must be a comma-separated index list, got {keep!r}")
    if not keep_list:
        _fail(EXIT_INPUT_ERROR, "--keep selected no columns")
    if len(set(keep_list)) != len(keep_list):
        _fail(EXIT_INPUT_ERROR, "--keep has duplicate indices")
    for c in keep_list:
        if not 0 <= c < array.factors:
            _fail(EXIT_INPUT_ERROR, f"column {c} outside [0, {array.factors - 1}]")
    restricted = OrthogonalArray(
        array.matrix[:, keep_list],
        array.levels,
        min(array.strength, len(keep_list)),
        provenance=array.provenance,
    )
    lineage = f"columns({file.name}, keep={keep_list})"
    path = _write_and_catalog(
        restricted, out, catalog, _default_name(restricted), lineage, jobs=jobs
    )
    n_, k_, s_, t_ = restricted.params
    click.echo(f"wrote {path}: OA({n_},{k_},{s_},{t_})")


@main.command()
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@click.option("--format", "fmt", type=click.Choice(["txt", "csv"]), default="txt",
              show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=None,
              help="Output file (defaults to stdout).")
def export(file, fmt, out):
    """Re-serialize an array as txt (byte-exact round trip) or CSV."""
    array = _read(file)
    text = to_text(array) if fmt == "txt" else to_csv(array)
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="ascii") as fh:
            fh.write(text)
        click.echo(f"wrote {out}")


@main.command("import")
@click.argument("file", type=click.Path(exists=True, path_type=Path))
@_catalog_option
@_jobs_option
def import_cmd(file, catalog, jobs):
    """Validate an external array file, verify its claimed strength,
    and record it in the catalog."""
    array = _read(file)
    report = verify_strength(array, array.strength, jobs=jobs)
    if not report.confirmed:
        click.echo(str(report))
        sys.exit(EXIT_VERIFY_FAILED)
    _catalog_append(
        catalog, array, file, report.strength, report.index, f"import({file.name})"
    )
    click.echo(f"imported {file}: {report}")


@main.command("reproduce-tables")
@click.option("--max-cost", type=float, default=DEFAULT_MAX_COST, show_default=True,
              help="Exhaustive-verification budget in subset*run work units; "
                   "costlier rows use the deterministic subset sample.")
@click.option("--seed-dir", type=click.Path(path_type=Path), default=None,
              envvar="OA_FORGE_SEED_DIR",
              help="Directory of <N>_<k>_<s>_<t>.oa.txt files for rows without "
                   "a built-in seed construction (env: OA_FORGE_SEED_DIR).")
@click.option("--json", "json_out", type=click.Path(path_type=Path), default=None,
              help="Also write the report as JSON.")
@_jobs_option
def reproduce_tables_cmd(max_cost, seed_dir, json_out, jobs):
    """Rebuild the published result tables and verify every generated
    array; parameter mismatches in the published tables are flagged as
    PAPER-DISCREPANCY.  Always exits 0 with a full report."""
    report = reproduce_tables(max_cost=max_cost, seed_dir=seed_dir, jobs=jobs)
    click.echo(report.render())
    if json_out is not None:
        with open(json_out, "w", encoding="ascii") as fh:
            json.dump(report.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


@main.group()
def catalog():
    """Catalog manifest maintenance."""


@catalog.command("check")
@click.option("--catalog", "catalog_path", type=click.Path(path_type=Path),
              default=Path("catalog.json"), show_default=True)
@_jobs_option
def catalog_check(catalog_path, jobs):
    """Re-derive every catalog entry: hash, parameters, verified
    strength, and linearity must all match the manifest."""
    if not catalog_path.exists():
        _fail(EXIT_INPUT_ERROR, f"no catalog at {catalog_path}")
    data = _catalog_load(catalog_path)
    base = catalog_path.resolve().parent
    bad = 0
    for entry in data["entries"]:
        label = f"{entry['file']} ({entry['id'][:12]})"
        path = Path(entry["file"])
        if not path.is_absolute():
            path = base / path
        if not path.exists():
            click.echo(f"MISSING {label}")
            bad += 1
            continue
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        if digest != entry["id"]:
            click.echo(f"HASH-MISMATCH {label}")
            bad += 1
            continue
        try:
            array = read_array(path)
        except FormatError as exc:
            click.echo(f"UNPARSEABLE {label}: {exc}")
            bad += 1
            continue
        ok = array.params == (
            entry["runs"], entry["factors"], entry["levels"], entry["strength_claimed"]
        )
        if ok and entry["verified_strength"] is not None:
            report = verify_strength(array, entry["verified_strength"], jobs=jobs)
            ok = report.confirmed and report.index == entry["index"]
        ok = ok and _linear_state(array) == entry["linear"]
        if ok:
            click.echo(f"OK {label}")
        else:
            click.echo(f"STALE {label}")
            bad += 1
    if bad:
        _fail(EXIT_VERIFY_FAILED, f"{bad} of {len(data['entries'])} entries failed")
    click.echo(f"all {len(data['entries'])} entries check out")


if __name__ == "__main__":
    main()
