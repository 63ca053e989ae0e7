import math
from itertools import combinations

import numpy as np
import pytest

from mcpursuit.coders import (
    BitReader,
    BitString,
    BitWriter,
    DictionaryCoder,
    LZCoder,
    SparseCoder,
    binary_entropy,
    elias_delta_len,
    kid,
    log_star,
    phi_m,
    sparse_support_bits,
    standard_dictionary,
)
from mcpursuit.errors import BudgetError, Unrepresentable
from mcpursuit.quantize import QuantizedSignal, truncate


def random_signal(rng, n, m):
    return QuantizedSignal(rng.integers(0, 1 << m, n), m)


# --- bit-level plumbing -------------------------------------------------


def test_bitwriter_roundtrip():
    w = BitWriter()
    w.write_uint(0b1011, 4)
    w.write_bit(1)
    w.write_elias_delta(37)
    w.write_uint(0, 0)
    bits = w.finish()
    r = BitReader(bits)
    assert r.read_uint(4) == 0b1011
    assert r.read_bit() == 1
    assert r.read_elias_delta() == 37
    assert r.remaining == 0


def test_elias_delta_lengths_and_prefix():
    for v in range(1, 2000):
        w = BitWriter()
        w.write_elias_delta(v)
        bits = w.finish()
        assert bits.nbits == elias_delta_len(v)
        assert BitReader(bits).read_elias_delta() == v
        # stays within 3 bits of the log* budget
        assert elias_delta_len(v) <= log_star(v) + 3.0


def test_bitstring_prefix_detection():
    a = BitString(bytes([0b10110000]), 4)
    b = BitString(bytes([0b10110100]), 6)
    c = BitString(bytes([0b10010000]), 6)
    assert a.is_strict_prefix_of(b)
    assert not a.is_strict_prefix_of(c)
    assert not b.is_strict_prefix_of(a)
    assert not a.is_strict_prefix_of(a)


# --- utilities ----------------------------------------------------------


def test_log_star_values():
    assert log_star(2) == 1.0  # 1 + 2*log2(1)
    assert log_star(8) == pytest.approx(3 + 2 * math.log2(3))
    with pytest.raises(ValueError):
        log_star(0)


def test_binary_entropy_values():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0 == binary_entropy(1.0)
    # -0.25 log2 0.25 - 0.75 log2 0.75
    assert binary_entropy(0.25) == pytest.approx(0.8112781244591328, rel=1e-12)
    with pytest.raises(ValueError):
        binary_entropy(1.5)


# --- sparse coder -------------------------------------------------------


def test_sparse_support_bits_examples():
    assert sparse_support_bits(8, 0) == 0 + 4
    # C(8,1) counted by brute force
    c81 = len(list(combinations(range(8), 1)))
    assert sparse_support_bits(8, 1) == math.ceil(math.log2(c81)) + 4 == 7
    with pytest.raises(ValueError):
        sparse_support_bits(8, 9)


def test_sparse_support_bits_entropy_bound():
    # ceil(log2 C(n,k)) + ceil(log2(n+1)) <= n h(k/n) + 0.5 log2 n + C
    # for a single fixed C over 1 <= k <= n/2, n <= 512
    worst = -1e9
    for n in (8, 16, 32, 64, 128, 256, 512):
        for k in range(1, n // 2 + 1):
            slack = sparse_support_bits(n, k) - (
                n * binary_entropy(k / n) + 0.5 * math.log2(n)
            )
            worst = max(worst, slack)
    assert worst <= 7.0  # measured constant, frozen


def test_sparse_encode_examples():
    sc = SparseCoder()
    x = np.zeros(8)
    x[1] = 0.625
    q = truncate(x, 3)
    # header + self-delimiting k + ceil(log2 C(8,1)) + 1*3 value bits
    assert sc.code_len(q) == sc.header_bits + 4 + 3 + 3
    assert sc.code_len(truncate(np.zeros(8), 3)) == sc.header_bits + 4


def test_sparse_roundtrip_random():
    sc = SparseCoder()
    rng = np.random.Generator(np.random.Philox(21))
    for _ in range(300):
        n, m = int(rng.integers(1, 20)), int(rng.integers(1, 9))
        q = random_signal(rng, n, m)
        bits = sc.encode(q)
        assert bits.nbits == sc.code_len(q)
        assert sc.decode(bits, n, m) == q


def test_sparse_bound_realization():
    # bits <= k*m + n*h(k/n) + 0.5*log2 n + C for one fixed measured C
    sc = SparseCoder()
    for n in (16, 64, 128):
        c = sc.prop2_constant(n)
        for m in (4, 8, 10):
            for k in range(0, n // 2 + 1):
                bits = sc.code_len_by_k(n, m, k)
                bound = k * m + n * binary_entropy(k / n) + 0.5 * math.log2(n) + c
                assert bits <= bound


# --- LZ coder -----------------------------------------------------------


def test_lz_all_zero_beats_raw():
    q = QuantizedSignal(np.zeros(16, dtype=np.int64), 4)
    c = LZCoder()
    assert c.code_len(q) < 16 * 4
    assert c.code_len(q) == 48  # hand-parsed LZ78 phrase count


def test_lz_never_exceeds_raw_budget():
    c = LZCoder()
    rng = np.random.Generator(np.random.Philox(22))
    for _ in range(200):
        n, m = int(rng.integers(1, 24)), int(rng.integers(1, 9))
        q = random_signal(rng, n, m)
        assert c.code_len(q) <= n * m + c.lemma1_constant()


def test_lz_iid_ratio():
    # unstructured input costs about nm bits at nm = 4096
    c = LZCoder()
    rng = np.random.Generator(np.random.Philox(23))
    for _ in range(5):
        q = random_signal(rng, 256, 16)
        ratio = c.code_len(q) / 4096
        assert 0.9 <= ratio <= 1.3


def test_lz_repetition_sublinear():
    c = LZCoder()
    sizes = (8, 16, 32, 64)
    costs = [c.code_len(QuantizedSignal(np.full(n, 11, dtype=np.int64), 4)) for n in sizes]
    for small, big in zip(costs, costs[1:]):
        assert big < 2 * small  # doubling n less than doubles the bits


def test_lz_roundtrip_random():
    c = LZCoder()
    rng = np.random.Generator(np.random.Philox(24))
    for _ in range(300):
        n, m = int(rng.integers(1, 24)), int(rng.integers(1, 7))
        q = random_signal(rng, n, m)
        bits = c.encode(q)
        assert bits.nbits == c.code_len(q)
        assert c.decode(bits, n, m) == q


# --- dictionary ---------------------------------------------------------


def test_dictionary_min_plus_header():
    d = standard_dictionary()
    rng = np.random.Generator(np.random.Philox(25))
    for _ in range(100):
        n, m = int(rng.integers(1, 16)), int(rng.integers(1, 6))
        q = random_signal(rng, n, m)
        member_best = min(c.code_len(q) for c in d.members)
        assert d.code_len(q) == member_best + d.header_bits
        bits = d.encode(q)
        assert bits.nbits == d.code_len(q)
        assert d.decode(bits, n, m) == q


def test_dictionary_skips_unrepresentable():
    class Never(SparseCoder):
        name = "never"

        def code_len(self, q):
            raise Unrepresentable("nope")

        def encode(self, q):
            raise Unrepresentable("nope")

    d = DictionaryCoder([Never(), LZCoder()])
    q = truncate(np.zeros(4), 2)
    assert d.code_len(q) == LZCoder().code_len(q) + 1
    with pytest.raises(Unrepresentable):
        DictionaryCoder([Never()]).code_len(q)


def test_lemma1_ceiling():
    # kid(dictionary, q) <= n + C/m for all tested q
    d = standard_dictionary()
    C = d.lemma1_constant()
    rng = np.random.Generator(np.random.Philox(26))
    for _ in range(200):
        n, m = int(rng.integers(1, 20)), int(rng.integers(1, 8))
        q = random_signal(rng, n, m)
        est = kid(d, q)
        assert est.kappa <= n + C / m


# --- prefix-freeness property test ---------------------------------------


@pytest.mark.parametrize("coder", [SparseCoder(), LZCoder(), standard_dictionary()])
def test_prefix_free_sampled(coder):
    rng = np.random.Generator(np.random.Philox(27))
    n, m = 6, 3
    seen = {}
    codes = []
    for _ in range(220):
        q = random_signal(rng, n, m)
        bits = coder.encode(q)
        key = (bits.data, bits.nbits)
        if key in seen:
            assert seen[key] == q  # equal codewords only for equal inputs
        seen[key] = q
        codes.append(bits)
    checked = 0
    for i in range(len(codes)):
        for j in range(len(codes)):
            if i != j:
                assert not codes[i].is_strict_prefix_of(codes[j])
                checked += 1
    assert checked >= 10_000


# --- phi_m --------------------------------------------------------------


def test_phi_m_on_grid_cheapest_stays():
    sc = SparseCoder()
    x = np.array([0.0, 0.0, 0.0])  # zero signal is the cheapest sparse point
    assert phi_m(sc, x, 2) == truncate(x, 2)


def test_phi_m_sparse_window_example():
    # brute force over the <= 3^4 window points picks the 1-sparse neighbour
    sc = SparseCoder()
    x = np.array([0.26, 0.0, 0.0, 0.0])
    best = phi_m(sc, x, 2)
    assert best.values.tolist() == [0.25, 0.0, 0.0, 0.0]


def test_phi_m_dominates_truncation():
    d = standard_dictionary()
    rng = np.random.Generator(np.random.Philox(28))
    for _ in range(100):
        n, m = int(rng.integers(1, 6)), int(rng.integers(1, 5))
        x = rng.random(n)
        assert d.code_len(phi_m(d, x, m)) <= d.code_len(truncate(x, m))


def test_phi_m_budget_error():
    with pytest.raises(BudgetError):
        phi_m(SparseCoder(), np.full(8, 0.5), 3, cap=10)
