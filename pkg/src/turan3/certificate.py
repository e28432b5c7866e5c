"""Exact rational verification that a certificate proves a density bound.

A certificate consists of a rational bound u, one symmetric rational matrix
per type, and one nonnegative slack per admissible graph.  Verification is
per-constraint: for every admissible m-vertex graph F it checks

    u - obj(F) - sum_t <Q_t, P_t(F)> >= 0

exactly, after checking every Q_t is positive semidefinite.  Those
inequalities are authoritative; the supplied slacks are cross-checked (they
must be nonnegative, and differences from the recomputed margins are
reported as notes) so that rounding slop in the slacks never invalidates a
sound bound.  A certificate that verifies proves the asymptotic statement:
every family-free graph has edge density at most u + o(1).

PSD is decided by rational LDL^T elimination with diagonal pivoting: a
symmetric matrix is PSD iff elimination never meets a negative pivot and,
whenever the largest remaining diagonal entry is zero, the whole remaining
block vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import families as families_mod
from .density import SINGLE_EDGE, p, pair_density_table
from .enumeration import FlagType, enumerate_flags, enumerate_free
from .families import Family
from .graphs import decode_key

Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class CertificateBlock:
    type_key: bytes  # canonical key of the type graph
    matrix: Matrix

    @property
    def dim(self) -> int:
        return len(self.matrix)


@dataclass(frozen=True)
class Certificate:
    bound: Fraction
    family_key: str
    m: int
    blocks: tuple[CertificateBlock, ...]
    slacks: tuple[Fraction, ...]


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    reason: str = ""
    bound: Fraction | None = None
    notes: tuple[str, ...] = ()

    def __bool__(self) -> bool:  # pragma: no cover - convenience
        return self.ok


def _rejected(reason: str) -> VerifyResult:
    return VerifyResult(ok=False, reason=reason)


def is_symmetric(matrix: Sequence[Sequence[Fraction]]) -> bool:
    n = len(matrix)
    if any(len(row) != n for row in matrix):
        return False
    return all(matrix[i][j] == matrix[j][i] for i in range(n) for j in range(i))


def psd_check(matrix: Sequence[Sequence[Fraction]]) -> bool:
    """Exact positive-semidefiniteness of a symmetric rational matrix."""
    if not is_symmetric(matrix):
        raise ValueError("matrix is not symmetric")
    n = len(matrix)
    a = [[Fraction(x) for x in row] for row in matrix]
    for k in range(n):
        pivot_row = max(range(k, n), key=lambda i: a[i][i])
        if a[pivot_row][pivot_row] < 0:
            return False
        if a[pivot_row][pivot_row] == 0:
            # zero maximal diagonal: PSD forces the whole remaining block to 0
            return all(
                a[i][j] == 0 for i in range(k, n) for j in range(k, n)
            )
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
            for row in a:
                row[k], row[pivot_row] = row[pivot_row], row[k]
        pivot = a[k][k]
        for i in range(k + 1, n):
            factor = a[i][k] / pivot
            if factor:
                for j in range(k, n):
                    a[i][j] -= factor * a[k][j]
    return True


def inner_product(q: Matrix, pmat: Matrix) -> Fraction:
    return sum(
        q[i][j] * pmat[i][j] for i in range(len(q)) for j in range(len(q))
    )


def verify(cert: Certificate, family: Family | None = None) -> VerifyResult:
    """Check a certificate exactly; Verified implies the density bound holds.

    The family may be passed directly; otherwise it is re-resolved from the
    certificate's family key.
    """
    if family is None:
        try:
            family = families_mod.parse_family(cert.family_key)
        except (OSError, ValueError) as exc:
            return _rejected(f"unknown family key: {exc}")
    members = [fm.graph for fm in family]
    flags_ind = [fm.induced for fm in family]
    targets = enumerate_free(cert.m, members, flags_ind)
    if not targets:
        return _rejected("family excludes every admissible graph")
    if len(cert.slacks) != len(targets):
        return _rejected(
            f"expected {len(targets)} slacks for m={cert.m}, got {len(cert.slacks)}"
        )
    for idx, c in enumerate(cert.slacks):
        if c < 0:
            return _rejected(f"negative slack at graph {idx}")

    block_tables = []
    for bi, block in enumerate(cert.blocks):
        try:
            sigma = decode_key(block.type_key)
        except ValueError as exc:
            return _rejected(f"block {bi}: bad type key ({exc})")
        if (cert.m + sigma.n) % 2:
            return _rejected(f"block {bi}: type size {sigma.n} has wrong parity")
        m_prime = (cert.m + sigma.n) // 2
        try:
            flags = enumerate_flags(FlagType(sigma), m_prime, members, flags_ind)
        except ValueError as exc:
            return _rejected(f"block {bi}: {exc}")
        if block.dim != len(flags):
            return _rejected(
                f"block {bi}: dimension {block.dim} but {len(flags)} flags exist"
            )
        if not is_symmetric(block.matrix):
            return _rejected(f"block {bi}: matrix not symmetric")
        if not psd_check(block.matrix):
            return _rejected(f"block {bi}: matrix not positive semidefinite")
        block_tables.append(pair_density_table(FlagType(sigma), m_prime, cert.m, family))

    notes = []
    for idx, target in enumerate(targets):
        margin = cert.bound - p(SINGLE_EDGE, target)
        for block, table in zip(cert.blocks, block_tables):
            margin -= inner_product(block.matrix, table.matrices[idx])
        if margin < 0:
            return _rejected(
                f"constraint fails at graph {idx} "
                f"(key {target.canon_key.hex()}): margin {margin}"
            )
        if cert.slacks[idx] != margin:
            # Cross-check only: stated slacks may carry rounding slop in
            # either direction without affecting the bound's validity.
            notes.append(
                f"graph {idx}: stated slack {cert.slacks[idx]} differs from "
                f"recomputed margin {margin}"
            )
    return VerifyResult(ok=True, bound=cert.bound, notes=tuple(notes))


# ---------------------------------------------------------------------------
# Text format


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def certificate_to_text(cert: Certificate) -> str:
    lines = [
        f"bound {_frac_str(cert.bound)}",
        f"family {cert.family_key if cert.family_key else 'none'}",
        f"m {cert.m}",
    ]
    for block in cert.blocks:
        lines.append(f"type {block.type_key.hex()} dim {block.dim}")
        for i in range(block.dim):
            lines.append(
                " ".join(_frac_str(block.matrix[i][j]) for j in range(i, block.dim))
            )
    for idx, c in enumerate(cert.slacks):
        lines.append(f"slack {idx} {_frac_str(c)}")
    return "\n".join(lines) + "\n"


def certificate_from_text(text: str) -> Certificate:
    bound: Fraction | None = None
    family_key = ""
    m: int | None = None
    blocks: list[CertificateBlock] = []
    slacks: dict[int, Fraction] = {}
    pending_key: bytes | None = None
    pending_dim = 0
    pending_entries: list[Fraction] = []

    def flush_block():
        nonlocal pending_key, pending_entries
        if pending_key is None:
            return
        want = pending_dim * (pending_dim + 1) // 2
        if len(pending_entries) != want:
            raise ValueError(
                f"type block expects {want} upper-triangle entries, "
                f"got {len(pending_entries)}"
            )
        mat = [[Fraction(0)] * pending_dim for _ in range(pending_dim)]
        it = iter(pending_entries)
        for i in range(pending_dim):
            for j in range(i, pending_dim):
                q = next(it)
                mat[i][j] = q
                mat[j][i] = q
        blocks.append(
            CertificateBlock(pending_key, tuple(tuple(row) for row in mat))
        )
        pending_key = None
        pending_entries = []

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "bound":
            bound = Fraction(parts[1])
        elif parts[0] == "family":
            family_key = "" if parts[1] == "none" else " ".join(parts[1:])
        elif parts[0] == "m":
            m = int(parts[1])
        elif parts[0] == "type":
            flush_block()
            if len(parts) != 4 or parts[2] != "dim":
                raise ValueError(f"malformed type line: {raw!r}")
            pending_key = bytes.fromhex(parts[1])
            pending_dim = int(parts[3])
        elif parts[0] == "slack":
            flush_block()
            slacks[int(parts[1])] = Fraction(parts[2])
        else:
            if pending_key is None:
                raise ValueError(f"unexpected line outside a type block: {raw!r}")
            pending_entries.extend(Fraction(tok) for tok in parts)
    flush_block()
    if bound is None or m is None:
        raise ValueError("certificate needs 'bound' and 'm' lines")
    n_slacks = max(slacks) + 1 if slacks else 0
    slack_tuple = tuple(slacks.get(i, Fraction(0)) for i in range(n_slacks))
    return Certificate(
        bound=bound, family_key=family_key, m=m, blocks=tuple(blocks), slacks=slack_tuple
    )


def save_certificate(cert: Certificate, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(certificate_to_text(cert))


# Import hook: external certificate layouts can be plugged in by file
# suffix; the native text format is the fallback.
_loaders: dict[str, Callable[[str], Certificate]] = {}


def register_loader(suffix: str, parse_fn: Callable[[str], Certificate]) -> None:
    """Register parse_fn(text) -> Certificate for files ending in suffix."""
    _loaders[suffix] = parse_fn


def load_certificate(path: str) -> Certificate:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    for suffix, parse_fn in _loaders.items():
        if path.endswith(suffix):
            return parse_fn(text)
    return certificate_from_text(text)
