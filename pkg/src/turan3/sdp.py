"""Assembly, text export and rational rounding of the density-bound program.

The program bounds the asymptotic edge density of family-free graphs: with a
scalar bound u, one PSD matrix Q per type, and one nonnegative slack per
admissible m-vertex graph F, minimizing u subject to

    u - obj(F) - sum_t <Q_t, P_t(F)> - c_F = 0        for every F,

where obj(F) is the edge density of F and P_t(F) the pair-density matrix,
gives a valid upper bound: multiplying the F-th constraint by p(F, H) and
summing, the Q terms become an averaged square (nonnegative up to o(1)) and
the slacks are nonnegative, so edge density <= u + o(1) for every admissible
H.  With no PSD blocks the optimum is simply max_F obj(F).

File format (one entry per line, exact rationals, '#' comments):

    m <int>
    family <key>
    nblocks <int>
    blockdims <d1> ... <dk>     negative = diagonal block, positive = PSD
    typekeys <hex> ...          canonical type keys, one per PSD block
    nconstraints <int>
    <constraint> <block> <i> <j> <value>

Block 1 is the scalar bound u, blocks 2..T+1 the PSD type blocks, the last
block is the diagonal of slacks.  Block number 0 is reserved for the
constant term of a constraint; constraint number 0 is the objective row.
Solution files are whitespace-separated floats in block order, PSD blocks as
upper triangles in row-major order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import families as families_mod
from .certificate import Certificate, CertificateBlock
from .density import SINGLE_EDGE, p, pair_density_table
from .enumeration import Flag, FlagType, enumerate_free
from .families import Family

Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class TypeBlock:
    ftype: FlagType
    m_prime: int
    flags: tuple[Flag, ...]

    @property
    def dim(self) -> int:
        return len(self.flags)


@dataclass(frozen=True)
class SdpModel:
    m: int
    family_key: str
    obj: tuple[Fraction, ...]  # per admissible graph, its edge density
    type_keys: tuple[bytes, ...]
    type_dims: tuple[int, ...]
    # pair matrices indexed [constraint][type block]
    pair_matrices: tuple[tuple[Matrix, ...], ...]

    @property
    def n_constraints(self) -> int:
        return len(self.obj)

    def lp_value(self) -> Fraction:
        """Optimum when there are no PSD blocks: the largest objective entry."""
        if self.type_keys:
            raise ValueError("model has PSD blocks; its optimum needs a solver")
        return max(self.obj)

    def solution_length(self) -> int:
        return 1 + sum(d * (d + 1) // 2 for d in self.type_dims) + self.n_constraints


def default_types(m: int, family: Family = ()) -> list[tuple[FlagType, int]]:
    """Types of every size s matching m's parity with s <= m - 2.

    The flag size m' = (m + s) / 2 makes two flags over a shared root set
    exactly fill an m-vertex target.
    """
    members = [fm.graph for fm in family]
    flags_ind = [fm.induced for fm in family]
    out = []
    start = 0 if m % 2 == 0 else 1
    for s in range(start, max(m - 1, 0), 2):
        for sigma in enumerate_free(s, members, flags_ind):
            out.append((FlagType(sigma), (m + s) // 2))
    return out


def assemble(
    m: int,
    family: Family = (),
    types: Sequence[tuple[FlagType, int]] | None = None,
    use_default_types: bool = False,
) -> SdpModel:
    """Build the model for (m, family) with the given SOS types.

    types=None with use_default_types=False yields the LP relaxation (no PSD
    blocks); use_default_types=True selects the conventional full type set.
    """
    if m < 3:
        raise ValueError("m must be at least 3")
    members = [fm.graph for fm in family]
    flags_ind = [fm.induced for fm in family]
    targets = enumerate_free(m, members, flags_ind)
    if not targets:
        raise ValueError("the family excludes every m-vertex graph")
    if types is None:
        types = default_types(m, family) if use_default_types else []
    for ftype, m_prime in types:
        if 2 * m_prime - ftype.size > m:
            raise ValueError(
                f"type of size {ftype.size} with flags of size {m_prime} "
                f"does not fit in m={m}"
            )
    obj = tuple(p(SINGLE_EDGE, f) for f in targets)
    type_keys = []
    type_dims = []
    per_type_tables = []
    for ftype, m_prime in types:
        table = pair_density_table(ftype, m_prime, m, family)
        assert [t.canon_key for t in table.targets] == [t.canon_key for t in targets]
        type_keys.append(ftype.key)
        type_dims.append(len(table.flags))
        per_type_tables.append(table)
    pair_matrices = tuple(
        tuple(table.matrices[fi] for table in per_type_tables)
        for fi in range(len(targets))
    )
    return SdpModel(
        m=m,
        family_key=families_mod.family_key(family),
        obj=obj,
        type_keys=tuple(type_keys),
        type_dims=tuple(type_dims),
        pair_matrices=pair_matrices,
    )


# ---------------------------------------------------------------------------
# Text emission and parsing


def _frac_str(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def model_to_text(model: SdpModel) -> str:
    k = model.n_constraints
    dims = [-1] + list(model.type_dims) + [-k]
    lines = [
        f"m {model.m}",
        f"family {model.family_key if model.family_key else 'none'}",
        f"nblocks {len(dims)}",
        "blockdims " + " ".join(str(d) for d in dims),
    ]
    if model.type_keys:
        lines.append("typekeys " + " ".join(key.hex() for key in model.type_keys))
    lines.append(f"nconstraints {k}")
    lines.append("0 1 0 0 1")  # objective: minimize the scalar bound
    slack_block = len(dims)
    for r in range(1, k + 1):
        fi = r - 1
        lines.append(f"{r} 0 0 0 {_frac_str(model.obj[fi])}")
        lines.append(f"{r} 1 0 0 1")
        for t, mat in enumerate(model.pair_matrices[fi]):
            d = len(mat)
            for i in range(d):
                for j in range(i, d):
                    if mat[i][j]:
                        lines.append(f"{r} {t + 2} {i} {j} {_frac_str(-mat[i][j])}")
        lines.append(f"{r} {slack_block} {fi} {fi} -1")
    return "\n".join(lines) + "\n"


def emit(model: SdpModel, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(model_to_text(model))


def model_from_text(text: str) -> SdpModel:
    header: dict[str, list[str]] = {}
    entries: list[tuple[int, int, int, int, Fraction]] = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] in {"m", "family", "nblocks", "blockdims", "typekeys", "nconstraints"}:
            header[parts[0]] = parts[1:]
            continue
        r, b, i, j = (int(x) for x in parts[:4])
        entries.append((r, b, i, j, Fraction(parts[4])))
    m = int(header["m"][0])
    family_key = header["family"][0] if header["family"][0] != "none" else ""
    dims = [int(d) for d in header["blockdims"]]
    k = int(header["nconstraints"][0])
    if len(dims) != int(header["nblocks"][0]):
        raise ValueError("blockdims length disagrees with nblocks")
    if dims[0] != -1 or dims[-1] != -k:
        raise ValueError("expected a scalar bound block and a slack diagonal")
    type_dims = tuple(dims[1:-1])
    if any(d <= 0 for d in type_dims):
        raise ValueError("interior blocks must be PSD (positive dimension)")
    type_keys = tuple(bytes.fromhex(h) for h in header.get("typekeys", []))
    if len(type_keys) != len(type_dims):
        raise ValueError("typekeys count disagrees with PSD block count")
    obj: list[Fraction | None] = [None] * k
    mats = [
        [[[Fraction(0)] * d for _ in range(d)] for d in type_dims] for _ in range(k)
    ]
    slack_block = len(dims)
    for r, b, i, j, value in entries:
        if r == 0:
            if (b, i, j, value) != (1, 0, 0, Fraction(1)):
                raise ValueError("unexpected objective row entry")
            continue
        fi = r - 1
        if not 0 <= fi < k:
            raise ValueError(f"constraint index {r} out of range")
        if b == 0:
            obj[fi] = value
        elif b == 1:
            if (i, j, value) != (0, 0, Fraction(1)):
                raise ValueError("bound-block coefficient must be 1")
        elif b == slack_block:
            if i != fi or j != fi or value != Fraction(-1):
                raise ValueError("slack coefficient must be -1 on own diagonal")
        else:
            t = b - 2
            if not 0 <= t < len(type_dims) or not (0 <= i <= j < type_dims[t]):
                raise ValueError(f"entry outside declared block: {(r, b, i, j)}")
            mats[fi][t][i][j] = -value
            mats[fi][t][j][i] = -value
    if any(o is None for o in obj):
        raise ValueError("missing constant term for some constraint")
    pair_matrices = tuple(
        tuple(tuple(tuple(row) for row in mat) for mat in mats[fi]) for fi in range(k)
    )
    return SdpModel(
        m=m,
        family_key=family_key,
        obj=tuple(obj),  # type: ignore[arg-type]
        type_keys=type_keys,
        type_dims=type_dims,
        pair_matrices=pair_matrices,
    )


def parse_sdp(path: str) -> SdpModel:
    with open(path, "r", encoding="utf-8") as fh:
        return model_from_text(fh.read())


# ---------------------------------------------------------------------------
# Rounding floats to rationals


def best_rational(x, max_denominator: int) -> Fraction:
    """Closest rational to x with denominator at most max_denominator."""
    return Fraction(x).limit_denominator(max_denominator)


def rational_upper_bound(x, max_denominator: int) -> Fraction:
    """Smallest rational >= x with denominator at most max_denominator.

    Walks the continued-fraction convergents of x; the final convergent and
    the best semiconvergent straddle x, and whichever lies above is optimal
    on that side.
    """
    target = Fraction(x)
    if target.denominator <= max_denominator:
        return target
    p0, q0, p1, q1 = 0, 1, 1, 0
    n, d = target.numerator, target.denominator
    while True:
        a = n // d
        if q0 + a * q1 > max_denominator:
            break
        p0, q0, p1, q1 = p1, q1, p0 + a * p1, q0 + a * q1
        n, d = d, n - a * d
    k = (max_denominator - q0) // q1
    semi = Fraction(p0 + k * p1, q0 + k * q1)
    conv = Fraction(p1, q1)
    above = [c for c in (semi, conv) if c >= target]
    return min(above)


def read_solution(path: str) -> list[float]:
    with open(path, "r", encoding="utf-8") as fh:
        values = []
        for raw in fh:
            line = raw.split("#", 1)[0]
            values.extend(float(tok) for tok in line.split())
    return values


def round_solution(
    model: SdpModel, floats: Sequence[float], denominator_bound: int = 2**32
) -> Certificate:
    """Round a solver's float vector to a rational certificate candidate.

    Entries become best rationals with bounded denominator; the bound u is
    rounded upward (a downward-rounded bound could never re-verify); small
    negative slacks are clamped to zero.  Validity is not checked here; that
    is the verifier's job.
    """
    expected = model.solution_length()
    if len(floats) != expected:
        raise ValueError(f"expected {expected} solution values, got {len(floats)}")
    pos = 0
    u = rational_upper_bound(floats[pos], denominator_bound)
    pos += 1
    blocks = []
    for key, d in zip(model.type_keys, model.type_dims):
        mat = [[Fraction(0)] * d for _ in range(d)]
        for i in range(d):
            for j in range(i, d):
                q = best_rational(floats[pos], denominator_bound)
                mat[i][j] = q
                mat[j][i] = q
                pos += 1
        blocks.append(
            CertificateBlock(
                type_key=key, matrix=tuple(tuple(row) for row in mat)
            )
        )
    slacks = []
    for _ in range(model.n_constraints):
        q = best_rational(floats[pos], denominator_bound)
        slacks.append(max(Fraction(0), q))
        pos += 1
    return Certificate(
        bound=u,
        family_key=model.family_key,
        m=model.m,
        blocks=tuple(blocks),
        slacks=tuple(slacks),
    )


def lp_certificate(m: int, family: Family = ()) -> Certificate:
    """The certificate realizing the LP bound: u = max obj, slacks u - obj(F)."""
    model = assemble(m, family)
    u = model.lp_value()
    return Certificate(
        bound=u,
        family_key=model.family_key,
        m=m,
        blocks=(),
        slacks=tuple(u - o for o in model.obj),
    )
