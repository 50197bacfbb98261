"""The [n, k, d = 2*alpha] minimum-storage regenerating code.

Construction: take any generator matrix Gbar of the [n, alpha] RS code with
roots a^1..a^(n-alpha), and the diagonal matrix Delta with entries
lambda_j = (a^j)^alpha for j = 0..n-1.  Then the stacked matrix

    G = [ Gbar ]
        [ Gbar @ Delta ]

generates the [n, d] RS code with roots a^1..a^(n-d), provided
gcd(2^m - 1, alpha) = 1 (which makes the lambda_j pairwise distinct).  The
B = k*alpha message symbols are packed into two symmetric alpha x alpha
matrices Z1, Z2; the codeword matrix is C = [Z1 Z2] @ G and node j stores
column j.

Two Gbar flavors are supported: "systematic" ([D | I], every row of weight
n - alpha + 1, which minimizes update complexity) and "vandermonde" (the
power basis (a^j)^i, every row of full weight n).  The vandermonde row
space coincides with the root-based code only at full length
n = 2^m - 1; for shortened codes it is a different (evaluation) MDS code,
so root membership is only checked when it actually holds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .field import Field
from .linalg import SingularMatrix, gf_dot, rank, solve
from .rs import RsCode, poly_eval

__all__ = [
    "MsrParams",
    "GeneratorSet",
    "MessageMatrix",
    "NodeShare",
    "InvalidParams",
    "WrongLength",
    "WrongHelperCount",
    "SingularHelperSet",
    "BadIndex",
    "make_params",
    "generator_set",
    "pack_message",
    "unpack_message",
    "encode_all",
    "helper_symbol",
    "regenerate",
    "update_complexity",
    "update_patch",
    "apply_patch",
    "FLAVORS",
]

FLAVORS = ("systematic", "vandermonde")


class InvalidParams(ValueError):
    """Parameter tuple violates a construction condition; .reason names it."""

    def __init__(self, reason: str, detail: str):
        self.reason = reason
        super().__init__(f"{reason}: {detail}")


class WrongLength(ValueError):
    pass


class WrongHelperCount(ValueError):
    pass


class SingularHelperSet(RuntimeError):
    pass


class BadIndex(ValueError):
    pass


@dataclass(frozen=True)
class MsrParams:
    """Validated parameter tuple. beta is fixed at 1 symbol per helper."""

    n: int
    k: int
    d: int
    alpha: int
    beta: int
    B: int
    m: int

    @property
    def error_capability(self) -> int:
        """Most erroneous storage nodes the reconstructor can tolerate."""
        return (self.n - self.k + 1) // 2


def make_params(n: int, k: int, m: int) -> MsrParams:
    """Derive and validate the full parameter set from (n, k, m).

    The geometry is fixed at the minimum-storage point with d = 2*alpha:
    alpha = k - 1, d = 2(k - 1), B = k*alpha.
    """
    if k < 2:
        raise InvalidParams("KTooSmall", f"k must be >= 2, got {k}")
    alpha = k - 1
    d = 2 * alpha
    B = k * alpha
    if d > n - 1:
        raise InvalidParams("DTooLarge", f"d = 2(k-1) = {d} exceeds n-1 = {n - 1}")
    if not 2 <= m <= 16:
        raise InvalidParams("FieldTooSmall", f"field degree m={m} outside [2, 16]")
    if n > (1 << m) - 1:
        # n must fit among the 2^m - 1 nonzero powers of a; n = 2^m would
        # also collide two diagonal multipliers (indices n-1 and 0).
        raise InvalidParams("FieldTooSmall", f"n={n} exceeds 2^{m} - 1 = {(1 << m) - 1}")
    if math.gcd((1 << m) - 1, alpha) != 1:
        raise InvalidParams(
            "GcdViolation", f"gcd(2^{m} - 1, alpha) = {math.gcd((1 << m) - 1, alpha)} != 1"
        )
    # storage/bandwidth identity at the minimum-storage point (beta = 1)
    bound = sum(min(alpha, d - i) for i in range(k))
    if B != bound:
        raise InvalidParams("CutSetMismatch", f"B={B} != sum min(alpha, d-i) = {bound}")
    return MsrParams(n=n, k=k, d=d, alpha=alpha, beta=1, B=B, m=m)


@dataclass
class GeneratorSet:
    """Gbar, the diagonal multipliers, and the assembled stacked matrix.

    Treat as immutable after construction.
    """

    params: MsrParams
    field: Field
    flavor: str
    gbar: list[list[int]]
    delta: list[int]
    g_full: list[list[int]]
    code_alpha: RsCode
    gbar_cols: list[tuple[int, ...]] = dc_field(repr=False, default_factory=list)

    def __post_init__(self):
        if not self.gbar_cols:
            self.gbar_cols = [tuple(col) for col in zip(*self.gbar)]


def generator_set(params: MsrParams, flavor: str = "systematic", field: Field | None = None) -> GeneratorSet:
    if flavor not in FLAVORS:
        raise ValueError(f"flavor must be one of {FLAVORS}, got {flavor!r}")
    if field is None:
        field = Field(params.m)
    code_alpha = RsCode(params.n, params.alpha, field)
    gbar = code_alpha.systematic_generator() if flavor == "systematic" else code_alpha.vandermonde_generator()

    q1 = field.order - 1
    delta = [field.exp[(j * params.alpha) % q1] for j in range(params.n)]
    if len(set(delta)) != params.n:
        raise AssertionError("diagonal multipliers collide despite gcd condition")

    g_full = [list(row) for row in gbar]
    g_full += [[field.mul(c, lam) for c, lam in zip(row, delta)] for row in gbar]

    if rank(field, g_full) != params.d:
        raise AssertionError("stacked generator matrix is rank deficient")
    # Root membership of every row in the [n, d] code holds whenever the
    # gbar rows are themselves root-based codewords: always for systematic,
    # only at full length for vandermonde.
    if flavor == "systematic" or params.n == field.order - 1:
        for row in g_full:
            for j in range(1, params.n - params.d + 1):
                if poly_eval(field, row, field.exp[j]) != 0:
                    raise AssertionError("generator row does not vanish at a prescribed root")

    return GeneratorSet(
        params=params, field=field, flavor=flavor, gbar=gbar, delta=delta,
        g_full=g_full, code_alpha=code_alpha,
    )


# ---------------------------------------------------------------------------
# message packing


@dataclass(frozen=True)
class MessageMatrix:
    """B message symbols arranged as two symmetric alpha x alpha matrices."""

    z1: tuple[tuple[int, ...], ...]
    z2: tuple[tuple[int, ...], ...]

    @property
    def u(self) -> list[list[int]]:
        """The alpha x d information matrix [Z1 Z2]."""
        return [list(r1) + list(r2) for r1, r2 in zip(self.z1, self.z2)]


def _triangle_positions(alpha: int):
    for r in range(alpha):
        for c in range(r, alpha):
            yield r, c


def pack_message(params: MsrParams, message) -> MessageMatrix:
    """Fill Z1's upper triangle row-major (diagonal included) with the first
    half of the message, mirror it, then fill Z2 from the second half."""
    if len(message) != params.B:
        raise WrongLength(f"message must have {params.B} symbols, got {len(message)}")
    alpha = params.alpha
    half = alpha * (alpha + 1) // 2
    mats = []
    for offset in (0, half):
        z = [[0] * alpha for _ in range(alpha)]
        for idx, (r, c) in enumerate(_triangle_positions(alpha)):
            v = message[offset + idx]
            z[r][c] = v
            z[c][r] = v
        mats.append(tuple(tuple(row) for row in z))
    return MessageMatrix(z1=mats[0], z2=mats[1])


def unpack_message(params: MsrParams, msg: MessageMatrix) -> list[int]:
    alpha = params.alpha
    out = []
    for z in (msg.z1, msg.z2):
        out.extend(z[r][c] for r, c in _triangle_positions(alpha))
    return out


def symbol_position(params: MsrParams, index: int) -> tuple[int, int, int]:
    """Map a message index to (block, row, col): block 0 for Z1, 1 for Z2,
    with row <= col in the upper triangle."""
    alpha = params.alpha
    half = alpha * (alpha + 1) // 2
    if not 0 <= index < params.B:
        raise BadIndex(f"symbol index {index} outside [0, {params.B})")
    block, idx = divmod(index, half)
    r = 0
    row_len = alpha
    while idx >= row_len:
        idx -= row_len
        row_len -= 1
        r += 1
    return (block, r, r + idx)


# ---------------------------------------------------------------------------
# encoding, repair, update


@dataclass(frozen=True)
class NodeShare:
    """Column node_index of the codeword matrix: the alpha symbols one
    storage node holds."""

    node_index: int
    symbols: tuple[int, ...]


def encode_all(params: MsrParams, gen: GeneratorSet, msg: MessageMatrix) -> list[NodeShare]:
    """C = U @ G; share j is column j."""
    u = msg.u
    cols = list(zip(*gen.g_full))
    field = gen.field
    c_rows = [[gf_dot(field, urow, col) for col in cols] for urow in u]
    return [
        NodeShare(node_index=j, symbols=tuple(c_rows[r][j] for r in range(params.alpha)))
        for j in range(params.n)
    ]


def helper_symbol(gen: GeneratorSet, helper_share: NodeShare, failed: int) -> int:
    """The single symbol a surviving node sends toward repairing ``failed``:
    the inner product of its stored column with gbar's failed column."""
    if not 0 <= failed < gen.params.n:
        raise BadIndex(f"node index {failed} outside [0, {gen.params.n})")
    return gf_dot(gen.field, helper_share.symbols, gen.gbar_cols[failed])


def regenerate(params: MsrParams, gen: GeneratorSet, failed: int, helpers) -> NodeShare:
    """Exactly rebuild the failed node's column from d helper symbols.

    Each helper h contributes psi_h . w where psi_h = [gbar_h; lambda_h * gbar_h]
    is column h of the stacked generator and w = [Z1 gbar_f; Z2 gbar_f].
    Stacking d helpers gives a d x d system whose matrix is d columns of an
    MDS generator, hence invertible; the failed column is w1 + lambda_f * w2.
    """
    if not 0 <= failed < params.n:
        raise BadIndex(f"node index {failed} outside [0, {params.n})")
    helpers = list(helpers)
    if len(helpers) != params.d:
        raise WrongHelperCount(f"need exactly d={params.d} helpers, got {len(helpers)}")
    indices = [h for h, _ in helpers]
    if len(set(indices)) != len(indices) or failed in indices:
        raise WrongHelperCount("helper indices must be distinct and differ from the failed node")
    if any(not 0 <= h < params.n for h in indices):
        raise BadIndex("helper index out of range")

    psi = [[gen.g_full[i][h] for i in range(params.d)] for h, _ in helpers]
    try:
        w = solve(gen.field, psi, [sym for _, sym in helpers])
    except SingularMatrix as exc:  # unreachable for valid parameters
        raise SingularHelperSet(str(exc)) from exc
    alpha = params.alpha
    lam = gen.delta[failed]
    field = gen.field
    symbols = tuple(w[i] ^ field.mul(lam, w[alpha + i]) for i in range(alpha))
    return NodeShare(node_index=failed, symbols=symbols)


def update_complexity(gen: GeneratorSet) -> int:
    """Encoded symbols touched in the worst case by a one-symbol update:
    the maximum Hamming weight over rows of the stacked generator."""
    return max(sum(1 for c in row if c) for row in gen.g_full)


def update_patch(params: MsrParams, gen: GeneratorSet, msg: MessageMatrix, symbol_index: int, new_value):
    """Minimal set of (node_index, share_row, new_symbol) entries that
    re-encoding with the changed message symbol would produce.

    An encoded entry changes iff its generator coefficient is nonzero, so
    the patch support is exactly the support of the touched generator rows.
    """
    if not 0 <= new_value < gen.field.order:
        raise ValueError(f"value {new_value} outside field of order {gen.field.order}")
    block, r, c = symbol_position(params, symbol_index)
    flat = unpack_message(params, msg)
    delta_v = flat[symbol_index] ^ new_value
    if delta_v == 0:
        return set()

    # Changed U entries: (r, c) in the chosen block, plus the mirror (c, r)
    # for off-diagonal symbols.  Each one perturbs a single share row through
    # one row of the stacked generator.
    alpha = params.alpha
    touched = [(r, block * alpha + c)]
    if c != r:
        touched.append((c, block * alpha + r))

    shares = encode_all(params, gen, msg)
    field = gen.field
    patch = set()
    for share_row, gen_row in touched:
        grow = gen.g_full[gen_row]
        for j, coeff in enumerate(grow):
            if coeff:
                old = shares[j].symbols[share_row]
                patch.add((j, share_row, old ^ field.mul(delta_v, coeff)))
    return patch


def apply_patch(shares: list[NodeShare], patch) -> list[NodeShare]:
    """Return shares with the patch entries substituted in."""
    cols = {s.node_index: list(s.symbols) for s in shares}
    for node, row, value in patch:
        cols[node][row] = value
    return [NodeShare(node_index=s.node_index, symbols=tuple(cols[s.node_index])) for s in shares]
