import numpy as np
import pytest

from semsketch import (
    BASELINE_BITS,
    EncoderConfig,
    FeatureVector,
    GridMap,
    dequantize,
    encode_baseline,
    encode_grid,
    l1_distance,
    quantize,
    storage_report,
)

from conftest import make_vocab
from semsketch import build_embedding_table


def table_for(m: int, d: int = 2, seed: int = 13):
    rng = np.random.default_rng(seed)
    vocab = make_vocab(["background"] + [f"c{i}" for i in range(1, m)])
    return build_embedding_table(vocab, rng.normal(size=(m, d)))


def random_grid(rng, n: int, m: int) -> GridMap:
    return GridMap(n=n, cells=rng.integers(0, m, size=n * n).astype(np.uint16))


class TestEncodeGrid:
    def test_default_config_dimensionality(self):
        table = table_for(20)
        rng = np.random.default_rng(1)
        vec = encode_grid(random_grid(rng, 32, 20), table)
        assert vec.values.shape == (2048,)

    def test_uniform_grid_repeats_the_point(self):
        vocab = make_vocab(["background", "a"])
        table = build_embedding_table(vocab, np.array([[1.0, -1.0], [0.5, -0.25]]))
        grid = GridMap(n=2, cells=np.full(4, 1, np.uint16))
        vec = encode_grid(grid, table)
        np.testing.assert_allclose(vec.values, [0.5, -0.25] * 4)

    def test_slices_match_per_cell_lookup(self):
        table = table_for(15, d=3)
        rng = np.random.default_rng(2)
        for _ in range(10):
            grid = random_grid(rng, 6, 15)
            vec = encode_grid(grid, table)
            for i, cid in enumerate(grid.cells):
                np.testing.assert_array_equal(
                    vec.values[i * 3 : (i + 1) * 3], table.coords[cid].astype(np.float64)
                )

    def test_unknown_id_rejected(self):
        table = table_for(5)
        grid = GridMap(n=1, cells=np.array([7], np.uint16))
        with pytest.raises(ValueError, match="7"):
            encode_grid(grid, table)

    def test_cellwise_l1_decomposition(self):
        table = table_for(12)
        rng = np.random.default_rng(3)
        g1, g2 = random_grid(rng, 8, 12), random_grid(rng, 8, 12)
        full = l1_distance(encode_grid(g1, table), encode_grid(g2, table))
        per_cell = sum(
            float(np.abs(table.coords[a].astype(np.float64) - table.coords[b].astype(np.float64)).sum())
            for a, b in zip(g1.cells, g2.cells)
        )
        assert np.isclose(full, per_cell, rtol=1e-12)


class TestBaseline:
    def test_single_cell_one_hot(self):
        grid = GridMap(n=1, cells=np.array([2], np.uint16))
        vec = encode_baseline(grid, m=3)
        assert vec.bits.tolist() == [False, False, True]

    def test_exactly_one_bit_per_cell(self):
        rng = np.random.default_rng(4)
        grid = random_grid(rng, 8, 10)
        vec = encode_baseline(grid, m=10)
        assert vec.bits.sum() == 64
        assert vec.bits.reshape(64, 10).sum(axis=1).tolist() == [1] * 64

    def test_argmax_decodes_back(self):
        rng = np.random.default_rng(5)
        grid = random_grid(rng, 5, 9)
        vec = encode_baseline(grid, m=9)
        decoded = vec.bits.reshape(25, 9).argmax(axis=1)
        np.testing.assert_array_equal(decoded, grid.cells)

    def test_id_out_of_range_rejected(self):
        grid = GridMap(n=1, cells=np.array([5], np.uint16))
        with pytest.raises(ValueError, match=">= m"):
            encode_baseline(grid, m=5)


class TestQuantization:
    def vector(self, values):
        values = np.asarray(values, dtype=np.float64)
        return FeatureVector(n=1, d=len(values), values=values)

    def test_half_step_bound_at_8_bits(self):
        v = self.vector([0.5, 0.5])
        out = dequantize(quantize(v, 8))
        assert np.abs(out.values - 0.5).max() <= 1 / 255

    def test_range_endpoints_exact(self):
        for bits in (8, 16, 32):
            out = dequantize(quantize(self.vector([-1.0, 1.0]), bits))
            np.testing.assert_array_equal(out.values, [-1.0, 1.0])

    def test_random_bound_8_and_16_bits(self):
        rng = np.random.default_rng(6)
        for bits, bound in ((8, 1 / 255), (16, 1 / 65535)):
            values = rng.uniform(-1, 1, size=(1000, 4))
            worst = 0.0
            for row in values:
                out = dequantize(quantize(self.vector(row), bits))
                worst = max(worst, np.abs(out.values - row).max())
            assert worst <= bound

    def test_32_bit_lossless_for_float32_values(self):
        rng = np.random.default_rng(7)
        values = rng.uniform(-1, 1, size=512).astype(np.float32).astype(np.float64)
        out = dequantize(quantize(FeatureVector(n=16, d=2, values=values), 32))
        np.testing.assert_array_equal(out.values, values)

    def test_tolerance_clamp(self):
        v = self.vector([1.0 + 5e-10, -1.0 - 5e-10])
        out = dequantize(quantize(v, 8))
        np.testing.assert_array_equal(out.values, [1.0, -1.0])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError, match=r"outside \[-1, 1\]"):
            quantize(self.vector([1.1, 0.0]), 8)

    def test_unsupported_width_rejected(self):
        with pytest.raises(ValueError, match="bits"):
            quantize(self.vector([0.0]), 12)


class TestL1Distance:
    def test_hand_computed(self):
        assert l1_distance(np.array([0.0, 0.0]), np.array([1.0, -1.0])) == 2.0

    def test_identity_is_zero(self):
        rng = np.random.default_rng(8)
        v = rng.uniform(-1, 1, 64)
        assert l1_distance(v, v.copy()) == 0.0

    def test_matches_naive_loop(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            a, b = rng.uniform(-1, 1, 128), rng.uniform(-1, 1, 128)
            naive = sum(abs(float(x) - float(y)) for x, y in zip(a, b))
            assert abs(l1_distance(a, b) - naive) <= 1e-6 * naive

    def test_symmetry(self):
        rng = np.random.default_rng(10)
        a, b = rng.uniform(-1, 1, 32), rng.uniform(-1, 1, 32)
        assert l1_distance(a, b) == l1_distance(b, a)

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="mismatch"):
            l1_distance(np.zeros(3), np.zeros(4))


class TestStorageReport:
    def test_reference_configurations(self):
        bits, ratio = storage_report(EncoderConfig(n=32, d=2, bits=32))
        assert bits == 65536
        assert abs(ratio - 0.267) < 0.001
        bits, ratio = storage_report(EncoderConfig(n=16, d=3, bits=32))
        assert bits == 24576
        assert abs(ratio - 0.100) < 0.001

    def test_smallest_configuration_follows_formula(self):
        bits, ratio = storage_report(EncoderConfig(n=8, d=2, bits=8))
        assert bits == 1024
        assert np.isclose(ratio, 1024 / BASELINE_BITS)
        assert abs(ratio - 0.00417) < 5e-5

    def test_custom_configuration(self):
        bits, ratio = storage_report(EncoderConfig(n=64, d=2, bits=32))
        assert bits == 262144
        assert np.isclose(ratio, 262144 / BASELINE_BITS)

    def test_monotone_in_each_parameter(self):
        base = storage_report(EncoderConfig(n=16, d=2, bits=16))[0]
        assert storage_report(EncoderConfig(n=32, d=2, bits=16))[0] > base
        assert storage_report(EncoderConfig(n=16, d=3, bits=16))[0] > base
        assert storage_report(EncoderConfig(n=16, d=2, bits=32))[0] > base

    def test_zero_baseline_rejected(self):
        with pytest.raises(ValueError, match="positive"):
            storage_report(EncoderConfig(), baseline_bits=0)


class TestEncoderConfig:
    def test_invalid_values_rejected(self):
        with pytest.raises(ValueError):
            EncoderConfig(n=0)
        with pytest.raises(ValueError):
            EncoderConfig(d=4)
        with pytest.raises(ValueError):
            EncoderConfig(bits=7)
