"""MSR code construction, packing, regeneration, and update machinery."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msrcode.linalg import rank
from msrcode.msr import (
    BadIndex,
    InvalidParams,
    WrongHelperCount,
    WrongLength,
    apply_patch,
    encode_all,
    generator_set,
    helper_symbol,
    make_params,
    pack_message,
    regenerate,
    symbol_position,
    unpack_message,
    update_complexity,
    update_patch,
)
from msrcode.rs import poly_eval

# (n, k, m) tuples exercising full-length and shortened codes
DESK_PARAMS = [(7, 4, 3), (15, 8, 4), (9, 5, 4), (20, 10, 5)]


@pytest.fixture(scope="module")
def gen746():
    return generator_set(make_params(7, 4, 3))


# ---------------------------------------------------------------------------
# parameter validation


def test_params_20_10_5():
    p = make_params(20, 10, 5)
    assert (p.d, p.alpha, p.B, p.beta) == (18, 9, 90, 1)
    assert p.error_capability == 5


def test_params_7_4_3():
    p = make_params(7, 4, 3)
    assert (p.d, p.alpha, p.B) == (6, 3, 12)
    assert p.error_capability == 2


def test_params_field_too_small():
    with pytest.raises(InvalidParams) as exc:
        make_params(7, 4, 2)
    assert exc.value.reason == "FieldTooSmall"


def test_params_gcd_violation():
    # n=8, k=4, m=4: d=6 <= 7 holds but gcd(15, 3) = 3
    with pytest.raises(InvalidParams) as exc:
        make_params(8, 4, 4)
    assert exc.value.reason == "GcdViolation"


def test_params_d_too_large():
    with pytest.raises(InvalidParams) as exc:
        make_params(6, 4, 3)
    assert exc.value.reason == "DTooLarge"


def test_params_k_too_small():
    with pytest.raises(InvalidParams) as exc:
        make_params(7, 1, 3)
    assert exc.value.reason == "KTooSmall"


@pytest.mark.parametrize("n,k,m", DESK_PARAMS)
def test_cut_set_identity(n, k, m):
    p = make_params(n, k, m)
    assert p.B == sum(min(p.alpha, (p.d - i) * p.beta) for i in range(p.k))


# ---------------------------------------------------------------------------
# generator assembly


def test_delta_values_7_4_6(gen746):
    assert gen746.delta == [1, 3, 5, 4, 7, 2, 6]
    assert len(set(gen746.delta)) == 7


@pytest.mark.parametrize("n,k,m", DESK_PARAMS)
@pytest.mark.parametrize("flavor", ["systematic", "vandermonde"])
def test_delta_distinct_and_rank(n, k, m, flavor):
    p = make_params(n, k, m)
    g = generator_set(p, flavor)
    assert len(set(g.delta)) == n
    assert rank(g.field, g.g_full) == p.d


@pytest.mark.parametrize("n,k,m", DESK_PARAMS)
def test_stacked_rows_vanish_at_prescribed_roots(n, k, m):
    p = make_params(n, k, m)
    g = generator_set(p, "systematic")
    for row in g.g_full:
        for j in range(1, n - p.d + 1):
            assert poly_eval(g.field, row, g.field.exp[j]) == 0


@pytest.mark.parametrize("n,k,m", [(7, 4, 3), (15, 8, 4)])
def test_stacked_rows_vanish_vandermonde_full_length(n, k, m):
    p = make_params(n, k, m)
    g = generator_set(p, "vandermonde")
    for row in g.g_full:
        for j in range(1, n - p.d + 1):
            assert poly_eval(g.field, row, g.field.exp[j]) == 0


def test_systematic_g_full_row_weights_20_10():
    p = make_params(20, 10, 5)
    g = generator_set(p, "systematic")
    weights = {sum(1 for c in row if c) for row in g.g_full}
    assert weights == {12}  # n - alpha + 1


# ---------------------------------------------------------------------------
# message packing


def test_pack_layout(gen746):
    p = gen746.params
    msg = pack_message(p, list(range(1, 13)))
    assert msg.z1[0] == (1, 2, 3)
    assert msg.z1[1][0] == 2  # mirror of (0, 1)
    assert msg.z1 == tuple(zip(*msg.z1))
    assert msg.z2 == tuple(zip(*msg.z2))
    assert msg.u[0] == [1, 2, 3, 7, 8, 9]


def test_pack_zero(gen746):
    p = gen746.params
    msg = pack_message(p, [0] * 12)
    assert all(v == 0 for row in msg.u for v in row)


def test_pack_wrong_length(gen746):
    with pytest.raises(WrongLength):
        pack_message(gen746.params, [0] * 11)


@settings(max_examples=100)
@given(st.data())
def test_pack_unpack_roundtrip(data):
    n, k, m = data.draw(st.sampled_from(DESK_PARAMS))
    p = make_params(n, k, m)
    message = data.draw(
        st.lists(st.integers(0, (1 << m) - 1), min_size=p.B, max_size=p.B)
    )
    assert unpack_message(p, pack_message(p, message)) == message


def test_symbol_position_covers_everything():
    p = make_params(7, 4, 3)
    seen = set()
    for t in range(p.B):
        block, r, c = symbol_position(p, t)
        assert r <= c
        seen.add((block, r, c))
    assert len(seen) == p.B
    with pytest.raises(BadIndex):
        symbol_position(p, p.B)


# ---------------------------------------------------------------------------
# encoding and regeneration


def test_encode_zero_message(gen746):
    p = gen746.params
    shares = encode_all(p, gen746, pack_message(p, [0] * p.B))
    assert all(s.symbols == (0, 0, 0) for s in shares)


def test_encode_matches_manual_product(gen746):
    p = gen746.params
    rng = random.Random(3)
    message = [rng.randrange(8) for _ in range(p.B)]
    msg = pack_message(p, message)
    shares = encode_all(p, gen746, msg)
    f = gen746.field
    for j in range(p.n):
        for r in range(p.alpha):
            acc = 0
            for i in range(p.d):
                acc ^= f.mul(msg.u[r][i], gen746.g_full[i][j])
            assert shares[j].symbols[r] == acc


@pytest.mark.parametrize("flavor", ["systematic", "vandermonde"])
def test_regeneration_exact_7_4_6(flavor):
    p = make_params(7, 4, 3)
    g = generator_set(p, flavor)
    rng = random.Random(17)
    for _ in range(10):
        message = [rng.randrange(8) for _ in range(p.B)]
        shares = encode_all(p, g, pack_message(p, message))
        for failed in range(p.n):
            helpers = [
                (h, helper_symbol(g, shares[h], failed))
                for h in range(p.n)
                if h != failed
            ]
            rebuilt = regenerate(p, g, failed, helpers)
            assert rebuilt == shares[failed]


def test_regeneration_exact_20_10_random_helper_sets():
    p = make_params(20, 10, 5)
    g = generator_set(p)
    rng = random.Random(29)
    message = [rng.randrange(32) for _ in range(p.B)]
    shares = encode_all(p, g, pack_message(p, message))
    for failed in range(p.n):
        pool = [h for h in range(p.n) if h != failed]
        helpers_idx = rng.sample(pool, p.d)
        helpers = [(h, helper_symbol(g, shares[h], failed)) for h in helpers_idx]
        assert regenerate(p, g, failed, helpers) == shares[failed]


def test_regeneration_zero_message(gen746):
    p = gen746.params
    shares = encode_all(p, gen746, pack_message(p, [0] * p.B))
    helpers = [(h, helper_symbol(gen746, shares[h], 0)) for h in range(1, 7)]
    assert regenerate(p, gen746, 0, helpers).symbols == (0, 0, 0)


def test_regeneration_wrong_helper_count(gen746):
    p = gen746.params
    shares = encode_all(p, gen746, pack_message(p, [0] * p.B))
    helpers = [(h, helper_symbol(gen746, shares[h], 0)) for h in range(1, 6)]
    with pytest.raises(WrongHelperCount):
        regenerate(p, gen746, 0, helpers)


def test_repair_bandwidth_arithmetic(gen746):
    p = gen746.params
    # one symbol per helper: d symbols moved versus B = k * alpha for a full rebuild
    assert p.d * p.beta == 6
    assert p.B == 12


# ---------------------------------------------------------------------------
# update complexity and patches


def test_update_complexity_values():
    p = make_params(20, 10, 5)
    assert update_complexity(generator_set(p, "systematic")) == 12
    assert update_complexity(generator_set(p, "vandermonde")) == 20


@pytest.mark.parametrize("n,k,m", DESK_PARAMS)
def test_update_complexity_ordering(n, k, m):
    p = make_params(n, k, m)
    sys_w = update_complexity(generator_set(p, "systematic"))
    van_w = update_complexity(generator_set(p, "vandermonde"))
    assert sys_w == n - p.alpha + 1
    assert van_w == n
    assert sys_w < van_w


def test_update_patch_diagonal_support(gen746):
    p = gen746.params
    rng = random.Random(31)
    message = [rng.randrange(8) for _ in range(p.B)]
    msg = pack_message(p, message)
    # message index 0 is the (0, 0) diagonal entry of the first block
    patch = update_patch(p, gen746, msg, 0, message[0] ^ 5)
    rows = {r for _, r, _ in patch}
    nodes = {j for j, _, _ in patch}
    assert rows == {0}
    assert len(nodes) == p.n - p.alpha + 1 == 5
    assert len(patch) == 5


def test_update_patch_noop(gen746):
    p = gen746.params
    msg = pack_message(p, list(range(12)))
    assert update_patch(p, gen746, msg, 3, 3) == set()


@pytest.mark.parametrize("n,k,m", [(7, 4, 3), (20, 10, 5)])
@pytest.mark.parametrize("flavor", ["systematic", "vandermonde"])
def test_update_patch_equals_reencode(n, k, m, flavor):
    p = make_params(n, k, m)
    g = generator_set(p, flavor)
    rng = random.Random(n * 100 + k)
    message = [rng.randrange(g.field.order) for _ in range(p.B)]
    msg = pack_message(p, message)
    shares = encode_all(p, g, msg)
    for _ in range(60):
        t = rng.randrange(p.B)
        value = rng.randrange(g.field.order)
        patch = update_patch(p, g, msg, t, value)
        changed = list(message)
        changed[t] = value
        expected = encode_all(p, g, pack_message(p, changed))
        assert apply_patch(shares, patch) == expected
        # every reported entry genuinely changed
        for node, row, new in patch:
            assert shares[node].symbols[row] != new


def test_update_patch_bad_index(gen746):
    msg = pack_message(gen746.params, list(range(12)))
    with pytest.raises(BadIndex):
        update_patch(gen746.params, gen746, msg, 12, 0)
