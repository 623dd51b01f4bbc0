import itertools

import numpy as np
import pytest

from mrdlab import linalg
from mrdlab.els import ComplementPair, Els, elementary_complement, enumerate_els, rank_matrices
from mrdlab.errors import DomainError, EnumerationTooLarge, InvalidGeneratorError, UnsupportedError
from mrdlab.gf import FieldContext
from mrdlab.mrd import (
    BallLookup,
    Classification,
    bounded_decode,
    check_combinatorial_property,
    gabidulin,
    rank_distribution,
    restrict,
    translate,
)
from mrdlab.qcomb import A, gaussian
from mrdlab.rank import RankVector, rank, rank_distance

F16 = FieldContext(2, 4)
F32 = FieldContext(2, 5)


@pytest.fixture(scope="module")
def ref_code():
    return gabidulin(F16, 4, 2)


@pytest.fixture(scope="module")
def code_551():
    return gabidulin(F32, 5, 1)


def test_reference_code_parameters(ref_code):
    C = ref_code
    assert (C.d_R, C.t_max, C.size, C.r) == (3, 1, 256, 2)
    assert C.is_linear
    assert C.minimum_distance() == 3
    assert C.is_mrd()
    assert rank_distribution(C) == [1, 0, 0, 225, 30]


def test_full_space_code():
    C = gabidulin(FieldContext(2, 2), 2, 2)
    assert C.d_R == 1 and C.minimum_distance() == 1
    assert np.unique(linalg.matrix_keys(C.matrices, 2)).size == 16


def test_length_one_distribution():
    C = gabidulin(FieldContext(3, 2), 1, 1)
    assert rank_distribution(C) == [1, 8]


def test_code_551(code_551):
    assert code_551.minimum_distance() == 5
    assert rank_distribution(code_551) == [1, 0, 0, 0, 0, 31]


def test_generator_rows_are_frobenius_powers(ref_code):
    g = ref_code.generator
    assert g[0] == F16.basis
    assert g[1] == tuple(a * a for a in F16.basis)


def test_encode_matches_enumeration(ref_code):
    C = ref_code
    words = {w.to_ints() for w in C.codewords()}
    rng = np.random.default_rng(5)
    for _ in range(20):
        msg = [F16.from_int(int(v)) for v in rng.integers(0, 16, 2)]
        assert C.encode(msg).to_ints() in words
    with pytest.raises(DomainError):
        C.encode([F16.one])


def test_construction_errors():
    with pytest.raises(InvalidGeneratorError):
        gabidulin(F16, 2, 1, g=(F16.one, F16.one))
    with pytest.raises(UnsupportedError):
        gabidulin(F16, 5, 2)
    with pytest.raises(DomainError):
        gabidulin(F16, 4, 0)
    with pytest.raises(EnumerationTooLarge):
        _ = gabidulin(F16, 4, 4, cap=1000).matrices


def test_other_generator_vector_is_also_mrd():
    g = tuple(F16.from_int(v) for v in (3, 5, 9, 14))
    C = gabidulin(F16, 4, 2, g=g)
    assert C.minimum_distance() == 3


def test_rank_never_exceeds_hamming_weight(ref_code):
    C = gabidulin(FieldContext(2, 3), 3, 2)
    for c, d in itertools.combinations(C.codewords(), 2):
        hamming = sum(a != b for a, b in zip(c.coords, d.coords))
        assert C.d_R <= rank_distance(c, d) <= hamming
    for c in ref_code.codewords():
        assert rank(c) <= sum(bool(x) for x in c.coords)


def test_translates(ref_code):
    C = ref_code
    assert translate(C, RankVector.zero(F16, 4)).matrices.tolist() == C.matrices.tolist()
    rng = np.random.default_rng(1)
    for _ in range(5):
        e = RankVector.from_ints(F16, rng.integers(0, 16, 4).tolist())
        T = translate(C, e)
        assert T.size == C.size
        assert np.unique(linalg.matrix_keys(T.matrices, 2)).size == C.size
        # pairwise distances are those of C, so the minimum stays 3
        diffs = (T.matrices[1:] - T.matrices[0][None]) % 2
        assert linalg.batch_rank(diffs, 2).min() == 3
        dist = rank_distribution(T)
        for u in (3, 4):
            assert dist[u] <= gaussian(2, 4, u) * A(2, 4, u - 2)


def test_combinatorial_property(ref_code, code_551):
    assert all(check_combinatorial_property(ref_code, elementary_complement(K)) for K in enumerate_els(2, 4, 2))
    spaces = enumerate_els(2, 5, 1)
    assert len(spaces) == 31
    assert all(check_combinatorial_property(code_551, elementary_complement(K)) for K in spaces)
    full = gabidulin(FieldContext(2, 2), 2, 2)
    assert check_combinatorial_property(full, elementary_complement(Els.full(2, 2)))
    with pytest.raises(DomainError):
        check_combinatorial_property(ref_code, elementary_complement(enumerate_els(2, 4, 1)[0]))


def test_restrictions(ref_code, code_551):
    same = restrict(ref_code, elementary_complement(Els.full(2, 4)))
    assert same.matrices.tolist() == ref_code.matrices.tolist()
    spaces3 = enumerate_els(2, 4, 3)
    assert len(spaces3) == 15
    for V in spaces3:
        R = restrict(ref_code, elementary_complement(V))
        assert np.unique(linalg.matrix_keys(R.matrices, 2)).size == 256
        assert R.minimum_distance() == 2
    for V in enumerate_els(2, 5, 3)[::10]:
        assert restrict(code_551, elementary_complement(V)).minimum_distance() == 3
    with pytest.raises(DomainError):
        restrict(ref_code, elementary_complement(enumerate_els(2, 4, 1)[0]))


def test_restriction_of_a_translate_keeps_distance(ref_code):
    e = RankVector.from_ints(F16, [1, 2, 3, 4])
    pair = ComplementPair(Els.span([[1, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], 2, 4), Els.span([[0, 0, 1, 0]], 2, 4))
    R = restrict(translate(ref_code, e), pair)
    assert not R.is_linear
    assert R.minimum_distance() == 2


def test_bounded_decode(ref_code):
    C = ref_code
    rng = np.random.default_rng(2)
    words = C.codewords()
    for _ in range(20):
        c = words[int(rng.integers(len(words)))]
        out = bounded_decode(C, c, 1)
        assert out.codeword == c and out.classify(c) is Classification.CORRECT
        M = np.zeros((4, 4), dtype=np.int64)
        M[rng.integers(4)] = rng.integers(0, 2, 4)  # rank <= 1
        e = RankVector.from_matrix(F16, M)
        out = bounded_decode(C, c + e, 1)
        assert out.decoded and out.codeword == c
    with pytest.raises(DomainError):
        bounded_decode(C, words[0], 2)


def test_decoder_failure_branch_even_distance():
    # d_R = 4 = 2t + 2 with t = 1: every rank-2 error lands outside all balls
    C = gabidulin(F16, 4, 1)
    assert C.d_R == 4
    zero = RankVector.zero(F16, 4)
    for M in rank_matrices(2, 4, 4, 2)[::97]:
        out = bounded_decode(C, RankVector.from_matrix(F16, M), 1)
        assert out.classify(zero) is Classification.DECODER_FAILURE


def test_ball_lookup_matches_exhaustive_decoder(ref_code):
    C = ref_code
    lut = BallLookup(C, 1)
    assert lut.keys.size == 256 * 226
    rng = np.random.default_rng(4)
    mats = rng.integers(0, 2, size=(300, 4, 4))
    got = lut.decode_matrices(mats)
    for M, idx in zip(mats, got):
        out = bounded_decode(C, RankVector.from_matrix(F16, M), 1)
        assert (idx >= 0) == out.decoded
        if out.decoded:
            assert idx == out.index


def test_uniqueness_within_decoding_balls(ref_code):
    # every word of GF(16)^4 is within rank distance 1 of at most one codeword
    lut = BallLookup(ref_code, 1)
    assert np.unique(lut.keys).size == lut.keys.size
    with pytest.raises(EnumerationTooLarge):
        BallLookup(ref_code, 1, cap=1000)
