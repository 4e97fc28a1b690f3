import itertools

import numpy as np
import pytest

from errors import DimensionMismatch, InvalidParameter, NotDecodable
from services.gf2 import (
    DecoderState,
    Gf2Matrix,
    Gf2Vector,
    decoder_insert,
    encode,
    mat_vec_mul,
    rank,
    solve,
)


def random_matrix(rng, rows, cols):
    bits = rng.integers(0, 2, size=(rows, cols))
    return Gf2Matrix.from_vectors(cols, (Gf2Vector.from_list(r.tolist()) for r in bits))


def test_rank_identity():
    assert rank(Gf2Matrix.identity(3)) == 3


def test_rank_zero():
    assert rank(Gf2Matrix.zeros(2, 4)) == 0


def test_rank_dependent_rows():
    assert rank(Gf2Matrix.from_strings(["110", "011", "101"])) == 2


def test_mat_vec_identity_and_zero():
    x = Gf2Vector.from_string("1011")
    assert mat_vec_mul(Gf2Matrix.identity(4), x) == x
    m = Gf2Matrix.from_strings(["1100", "0111", "1010"])
    assert mat_vec_mul(m, Gf2Vector.zero(4)).is_zero()


def test_mat_vec_by_hand():
    m = Gf2Matrix.from_strings(["110", "011"])
    assert mat_vec_mul(m, Gf2Vector.from_string("111")).to_list() == [0, 0]


def test_mat_vec_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        mat_vec_mul(Gf2Matrix.identity(3), Gf2Vector.zero(4))


def test_decoder_insert_sequence():
    s = DecoderState(3)
    s, a1 = decoder_insert(s, Gf2Vector.unit(3, 0))
    s, a2 = decoder_insert(s, Gf2Vector.unit(3, 1))
    assert (a1, a2, s.rank) == (True, True, 2)
    s, a3 = decoder_insert(s, Gf2Vector.from_string("110"))
    assert not a3 and s.rank == 2
    s, a4 = decoder_insert(s, Gf2Vector.zero(3))
    assert not a4 and s.rank == 2
    assert not s.is_full


def test_decoder_insert_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        DecoderState(3).insert(Gf2Vector.zero(2))


def test_decoder_pivots_unique_and_contains():
    rng = np.random.default_rng(7)
    s = DecoderState(10)
    inserted = []
    for _ in range(15):
        v = Gf2Vector(10, int(rng.integers(0, 1 << 10)))
        s.insert(v)
        inserted.append(v)
        assert len(set(s.pivots)) == s.rank
    for v in inserted:
        assert s.contains(v)


def test_solve_identity():
    a, b, c = 0xDEAD, 0xBEEF, 0x1234
    assert solve(Gf2Matrix.identity(3), [a, b, c]) == [a, b, c]


def test_solve_back_substitution():
    a, b = 0xA5A5, 0x0F0F
    m = Gf2Matrix.from_strings(["10", "11"])
    assert solve(m, [a, a ^ b]) == [a, b]


def test_solve_underdetermined():
    with pytest.raises(NotDecodable, match="not decodable"):
        solve(Gf2Matrix.from_strings(["11"]), [5])


def test_solve_recovers_encoded_payloads():
    rng = np.random.default_rng(3)
    payloads = [int(w) for w in rng.integers(0, 2**63, size=6)]
    # random full-rank 8 x 6 system
    while True:
        m = random_matrix(rng, 8, 6)
        if rank(m) == 6:
            break
    assert solve(m, encode(m, payloads)) == payloads


@pytest.mark.parametrize("seed", range(20))
def test_full_rank_iff_trivial_kernel(seed):
    rng = np.random.default_rng(seed)
    rows, cols = int(rng.integers(1, 9)), int(rng.integers(1, 9))
    m = random_matrix(rng, rows, cols)
    kernel_hit = any(
        mat_vec_mul(m, Gf2Vector.from_list(list(x))).is_zero()
        for x in itertools.product((0, 1), repeat=cols)
        if any(x)
    )
    assert (rank(m) == cols) == (not kernel_hit)


@pytest.mark.parametrize("seed", range(20))
def test_rank_matches_transpose(seed):
    rng = np.random.default_rng(100 + seed)
    m = random_matrix(rng, int(rng.integers(1, 9)), int(rng.integers(1, 9)))
    assert rank(m) == rank(m.transpose())


def test_unit_rows_reduce_payloads():
    a, b, c = 0x11, 0x22, 0x44
    s = DecoderState(3)
    s.insert(Gf2Vector.unit(3, 0), a)
    assert s.insert(Gf2Vector.from_string("111"), a ^ b ^ c)
    assert s.insert(Gf2Vector.unit(3, 2), c)
    assert s.is_full
    assert s.solve() == [a, b, c]


@pytest.mark.parametrize("seed", range(5))
def test_untracked_decoder_matches_tracked(seed):
    rng = np.random.default_rng(200 + seed)
    tracked, bare = DecoderState(12), DecoderState(12, track_payloads=False)
    for _ in range(14):
        bits = int(rng.integers(0, 1 << 12))
        if rng.random() < 0.3:
            bits = 1 << int(rng.integers(0, 12))
        assert tracked.insert_bits(bits, bits * 3) == bare.insert_bits(bits)
    assert tracked.pivots == bare.pivots
    assert bare.payload_rows == ()


def test_untracked_decoder_cannot_solve():
    s = DecoderState(2, track_payloads=False)
    s.insert(Gf2Vector.unit(2, 0))
    s.insert(Gf2Vector.unit(2, 1))
    with pytest.raises(InvalidParameter):
        s.solve()
