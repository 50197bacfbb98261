"""Reed-Solomon codec: generator construction and errors-and-erasures decoding."""

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msrcode.field import Field
from msrcode.linalg import rank
from msrcode.rs import BadLength, RsCode, poly_eval

GF8 = Field(3)
GF32 = Field(5)


@pytest.fixture(scope="module")
def code73():
    return RsCode(7, 3, GF8)


def all_codewords(code):
    """Oracle codebook: every message times the systematic generator."""
    gen = code.systematic_generator()
    words = []
    for msg in itertools.product(range(code.field.order), repeat=code.kappa):
        words.append(tuple(code.encode(list(msg), gen)))
    return words


# ---------------------------------------------------------------------------
# construction


def test_gen_poly_7_3(code73):
    # expand prod_{j=1..4} (x + a^j) by hand with the exp table oracle
    assert code73.gen_poly == [3, 2, 1, 3, 1]
    for j in range(1, 5):
        assert poly_eval(GF8, code73.gen_poly, GF8.exp[j]) == 0
    assert code73.d_min == 5


def test_gen_poly_single_root():
    code = RsCode(7, 6, GF8)
    assert code.gen_poly == [2, 1]  # x + a


def test_gen_poly_20_9():
    code = RsCode(20, 9, GF32)
    assert len(code.gen_poly) == 12  # degree 11
    for j in range(1, 12):
        assert poly_eval(GF32, code.gen_poly, GF32.exp[j]) == 0


def test_length_bounds():
    with pytest.raises(BadLength):
        RsCode(8, 3, GF8)  # n = 2^m rejected
    with pytest.raises(ValueError):
        RsCode(7, 7, GF8)
    with pytest.raises(ValueError):
        RsCode(7, 0, GF8)


def test_systematic_generator_shape(code73):
    gen = code73.systematic_generator()
    assert len(gen) == 3 and all(len(row) == 7 for row in gen)
    for i, row in enumerate(gen):
        # right block is the identity
        assert row[4 + i] == 1
        assert all(row[4 + t] == 0 for t in range(3) if t != i)
        # every row is a codeword of minimum weight
        assert sum(1 for c in row if c) == 5
        assert code73.is_codeword(row)


def test_systematic_generator_near_rate_1():
    code = RsCode(7, 6, GF8)
    gen = code.systematic_generator()
    for row in gen:
        assert sum(1 for c in row if c) == 2  # d_min of an [n, n-1] code


@pytest.mark.parametrize("n,kappa,field", [(7, 3, GF8), (20, 9, GF32), (15, 7, Field(4))])
def test_systematic_rows_weight_dmin(n, kappa, field):
    code = RsCode(n, kappa, field)
    for row in code.systematic_generator():
        assert sum(1 for c in row if c) == code.d_min
        assert code.is_codeword(row)


def test_vandermonde_rows(code73):
    gen = code73.vandermonde_generator()
    assert gen[0] == [1] * 7
    assert gen[1] == [1, 2, 4, 3, 6, 7, 5]
    for row in gen:
        assert all(c != 0 for c in row)


def test_vandermonde_rowspace_matches_at_full_length(code73):
    # at n = 2^m - 1 the power-basis rows belong to the root-based code
    gen = code73.vandermonde_generator()
    for row in gen:
        assert code73.is_codeword(row)
    assert rank(GF8, gen) == 3
    assert rank(GF8, gen + code73.systematic_generator()) == 3


def test_vandermonde_rowspace_differs_when_shortened():
    # shortening breaks the coincidence: the power basis spans the
    # evaluation code, not the root-based one
    code = RsCode(20, 9, GF32)
    gen = code.vandermonde_generator()
    assert not any(code.is_codeword(row) for row in gen)
    assert rank(GF32, gen) == 9  # still a rank-kappa (MDS) generator


# ---------------------------------------------------------------------------
# encoding


def test_encode_zero_and_units(code73):
    gen = code73.systematic_generator()
    assert code73.encode([0, 0, 0], gen) == [0] * 7
    for i in range(3):
        msg = [0, 0, 0]
        msg[i] = 1
        word = code73.encode(msg, gen)
        assert word == gen[i]
        assert word[4:] == msg


def test_mds_distance_exhaustive(code73):
    gen = code73.systematic_generator()
    for msg in itertools.product(range(8), repeat=3):
        word = code73.encode(list(msg), gen)
        weight = sum(1 for c in word if c)
        assert weight == 0 or weight >= 5


# ---------------------------------------------------------------------------
# decoding


def test_decode_clean(code73):
    gen = code73.systematic_generator()
    word = code73.encode([1, 5, 7], gen)
    res = code73.decode_errors_erasures(word)
    assert res is not None
    assert list(res.codeword) == word
    assert res.corrected_positions == frozenset()


def test_decode_two_errors(code73):
    gen = code73.systematic_generator()
    rng = random.Random(7)
    for _ in range(200):
        msg = [rng.randrange(8) for _ in range(3)]
        word = code73.encode(msg, gen)
        positions = rng.sample(range(7), 2)
        noisy = list(word)
        for pos in positions:
            noisy[pos] ^= rng.randrange(1, 8)
        res = code73.decode_errors_erasures(noisy)
        assert res is not None
        assert list(res.codeword) == word
        assert res.corrected_positions == frozenset(positions)


def test_decode_beyond_capability_boundary(code73):
    # s + 2v >= d_min voids the recovery guarantee: with 4 erasures + 1
    # error the three intact symbols still determine some codeword, so the
    # decoder returns a (wrong) codeword; with 3 erasures + 1 error the
    # inconsistency is detectable and None comes back.  Either outcome is
    # within contract, but a returned word is always a codeword and never
    # silently equal to the original here.
    gen = code73.systematic_generator()
    rng = random.Random(11)
    failures = 0
    for s in (4, 3):
        for _ in range(200):
            msg = [rng.randrange(8) for _ in range(3)]
            word = code73.encode(msg, gen)
            erased = rng.sample(range(7), s)
            noisy = list(word)
            err_pos = rng.choice([i for i in range(7) if i not in erased])
            noisy[err_pos] ^= rng.randrange(1, 8)
            res = code73.decode_errors_erasures(noisy, erased)
            if res is None:
                failures += 1
            else:
                assert code73.is_codeword(res.codeword)
                assert list(res.codeword) != word
    assert failures > 0


def test_decode_contract_exhaustive_patterns(code73):
    """Every erasure/error pattern with s + 2v < d_min over all position
    choices, randomized symbol values, recovers the true codeword."""
    gen = code73.systematic_generator()
    rng = random.Random(99)
    cases = 0
    for s, v in [(0, 0), (1, 0), (2, 0), (3, 0), (4, 0), (0, 1), (1, 1), (2, 1), (0, 2)]:
        for erased in itertools.combinations(range(7), s):
            rest = [i for i in range(7) if i not in erased]
            for errs in itertools.combinations(rest, v):
                for _ in range(40):
                    msg = [rng.randrange(8) for _ in range(3)]
                    word = code73.encode(msg, gen)
                    noisy = list(word)
                    for pos in erased:
                        noisy[pos] = rng.randrange(8)  # value is ignored
                    for pos in errs:
                        noisy[pos] ^= rng.randrange(1, 8)
                    res = code73.decode_errors_erasures(noisy, erased)
                    cases += 1
                    assert res is not None, (s, v, erased, errs)
                    assert list(res.codeword) == word
                    assert res.corrected_positions == frozenset(errs)
    assert cases >= 10_000


def test_decode_agrees_with_nearest_codeword_oracle(code73):
    """Brute-force oracle: the decoded word is the unique codeword within
    the errata budget of the received word."""
    codebook = all_codewords(code73)
    gen = code73.systematic_generator()
    rng = random.Random(123)
    for _ in range(250):
        msg = [rng.randrange(8) for _ in range(3)]
        word = code73.encode(msg, gen)
        s = rng.randrange(0, 3)
        v = rng.randrange(0, (5 - s) // 2 + 1) if 5 - s >= 2 else 0
        if s + 2 * v >= 5:
            v = max(0, (4 - s) // 2)
        erased = rng.sample(range(7), s)
        rest = [i for i in range(7) if i not in erased]
        errs = rng.sample(rest, v)
        noisy = list(word)
        for pos in erased:
            noisy[pos] = rng.randrange(8)
        for pos in errs:
            noisy[pos] ^= rng.randrange(1, 8)
        res = code73.decode_errors_erasures(noisy, erased)
        assert res is not None

        # oracle: distance over non-erased positions, minimized over codebook
        def dist(cand):
            return sum(1 for i in rest if cand[i] != noisy[i])

        best = min(codebook, key=dist)
        assert dist(best) == v
        assert list(best) == word
        assert list(res.codeword) == word


@settings(max_examples=150, deadline=None)
@given(
    msg=st.lists(st.integers(0, 31), min_size=9, max_size=9),
    seed=st.integers(0, 2**32 - 1),
)
def test_decode_roundtrip_20_9(msg, seed):
    code = RsCode(20, 9, GF32)
    gen = code.systematic_generator()
    word = code.encode(msg, gen)
    rng = random.Random(seed)
    s = rng.randrange(0, 6)
    v = rng.randrange(0, (code.d_min - s - 1) // 2 + 1)
    erased = rng.sample(range(20), s)
    errs = rng.sample([i for i in range(20) if i not in erased], v)
    noisy = list(word)
    for pos in erased:
        noisy[pos] = rng.randrange(32)
    for pos in errs:
        noisy[pos] ^= rng.randrange(1, 32)
    res = code.decode_errors_erasures(noisy, erased)
    assert res is not None
    assert list(res.codeword) == word


def test_roundtrip_both_generators(code73):
    rng = random.Random(5)
    for gen in (code73.systematic_generator(), code73.vandermonde_generator()):
        for _ in range(50):
            msg = [rng.randrange(8) for _ in range(3)]
            word = code73.encode(msg, gen)
            res = code73.decode_errors_erasures(word)
            assert res is not None and list(res.codeword) == word
