import numpy as np
import pytest

from semsketch import (
    EncoderConfig,
    LabelMap,
    VectorStore,
    aggregate,
    encode_grid,
    load_embedding_table,
    write_label_map,
)
from semsketch.cli import main

from conftest import BASE_LABELS, EXTRA_LABELS, write_vocab_file, write_word_vector_file


@pytest.fixture
def embed_inputs(tmp_path):
    labels = BASE_LABELS + EXTRA_LABELS  # 21 concepts
    vocab_path = write_vocab_file(tmp_path / "vocab.tsv", labels)
    vectors_path = write_word_vector_file(tmp_path / "wv.txt", labels, width=10)
    return vocab_path, vectors_path


def run_embed(tmp_path, embed_inputs, out_name, extra=()):
    vocab_path, vectors_path = embed_inputs
    out = tmp_path / out_name
    code = main(
        [
            "embed",
            "--vocab", str(vocab_path),
            "--vectors", str(vectors_path),
            "--out", str(out),
            "--iterations", "200",
            "--seed", "3",
            *extra,
        ]
    )
    assert code == 0
    return out


class TestEmbed:
    def test_writes_table_with_all_concepts(self, tmp_path, embed_inputs, capsys):
        out = run_embed(tmp_path, embed_inputs, "t.semb")
        table = load_embedding_table(out)
        assert len(table) == 21
        assert table.d == 2
        stdout = capsys.readouterr().out
        assert "concepts=21" in stdout and "final_kl=" in stdout

    def test_same_invocation_is_byte_identical(self, tmp_path, embed_inputs):
        a = run_embed(tmp_path, embed_inputs, "a.semb")
        b = run_embed(tmp_path, embed_inputs, "b.semb")
        assert a.read_bytes() == b.read_bytes()

    def test_three_dims(self, tmp_path, embed_inputs):
        out = run_embed(tmp_path, embed_inputs, "t3.semb", extra=["--d", "3"])
        assert load_embedding_table(out).d == 3

    def test_missing_vocab_file_exits_2(self, tmp_path, embed_inputs):
        _, vectors_path = embed_inputs
        code = main(
            ["embed", "--vocab", str(tmp_path / "no.tsv"), "--vectors", str(vectors_path),
             "--out", str(tmp_path / "o.semb")]
        )
        assert code == 2


@pytest.fixture
def ingest_env(tmp_path, embed_inputs):
    table_path = run_embed(tmp_path, embed_inputs, "table.semb")
    map_dir = tmp_path / "maps"
    map_dir.mkdir()
    return table_path, map_dir, tmp_path / "corpus.svs"


def write_map_file(map_dir, name, rng, m=21, side=32):
    cells = rng.integers(0, m, size=(side, side)).astype(np.uint16)
    lmap = LabelMap(source=name.split(".")[1] if name.count(".") > 1 else "src", cells=cells)
    (map_dir / name).write_bytes(write_label_map(lmap))
    return lmap


class TestIngest:
    def run(self, table_path, map_dir, store_path, n=8):
        return main(
            ["ingest", "--maps", str(map_dir), "--table", str(table_path),
             "--store", str(store_path), "--n", str(n)]
        )

    def test_ten_files_ten_records(self, ingest_env, capsys):
        table_path, map_dir, store_path = ingest_env
        rng = np.random.default_rng(0)
        for sid in range(10):
            write_map_file(map_dir, f"{sid}.slm", rng)
        assert self.run(table_path, map_dir, store_path) == 0
        assert "ingested=10" in capsys.readouterr().out
        with VectorStore.open(store_path) as store:
            assert len(store) == 10

    def test_multi_source_files_pool_into_one_record(self, ingest_env):
        table_path, map_dir, store_path = ingest_env
        rng = np.random.default_rng(1)
        m1 = write_map_file(map_dir, "7.ade20k.slm", rng)
        m2 = write_map_file(map_dir, "7.voc.slm", rng, side=48)
        assert self.run(table_path, map_dir, store_path) == 0
        table = load_embedding_table(table_path)
        expected = encode_grid(aggregate([m1, m2], 8), table)
        with VectorStore.open(store_path) as store:
            assert len(store) == 1
            result = store.knn(expected, 1)[0]
            assert result.segment_id == 7
            assert result.distance == 0.0

    def test_corrupt_file_isolated(self, ingest_env, capsys):
        table_path, map_dir, store_path = ingest_env
        rng = np.random.default_rng(2)
        for sid in range(10):
            write_map_file(map_dir, f"{sid}.slm", rng)
        (map_dir / "3.slm").write_bytes(b"not a label map")
        assert self.run(table_path, map_dir, store_path) == 0
        captured = capsys.readouterr()
        assert "ingested=9" in captured.out
        assert "skip segment 3" in captured.err
        with VectorStore.open(store_path) as store:
            assert len(store) == 9

    def test_missing_directory_exits_2(self, ingest_env):
        table_path, _, store_path = ingest_env
        code = main(
            ["ingest", "--maps", str(store_path.parent / "nowhere"),
             "--table", str(table_path), "--store", str(store_path)]
        )
        assert code == 2


class TestQuery:
    def test_cli_equals_library(self, ingest_env, capsys):
        table_path, map_dir, store_path = ingest_env
        rng = np.random.default_rng(3)
        maps = {sid: write_map_file(map_dir, f"{sid}.slm", rng) for sid in range(5)}
        assert TestIngest().run(table_path, map_dir, store_path) == 0
        capsys.readouterr()

        sketch_path = map_dir.parent / "sketch.slm"
        sketch_path.write_bytes(write_label_map(maps[2]))
        code = main(
            ["query", "--store", str(store_path), "--table", str(table_path),
             "--sketch", str(sketch_path), "--k", "5", "--csv"]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "rank,segment_id,distance"
        table = load_embedding_table(table_path)
        with VectorStore.open(store_path) as store:
            expected = store.knn(encode_grid(aggregate([maps[2]], 8), table), 5)
        got = [line.split(",") for line in lines[1:]]
        assert [int(row[1]) for row in got] == [r.segment_id for r in expected]
        assert int(got[0][1]) == 2 and float(got[0][2]) == 0.0


class TestBench:
    def test_synthetic_store_report(self, tmp_path, capsys):
        store_path = tmp_path / "bench.svs"
        code = main(
            ["bench", "--store", str(store_path), "--synthetic", "300", "--n", "8",
             "--queries", "2", "--repetitions", "2", "--seed", "5", "--csv"]
        )
        assert code == 0
        lines = capsys.readouterr().out.strip().splitlines()
        header, row = lines[0].split(","), lines[1].split(",")
        record = dict(zip(header, row))
        assert record["vectors"] == "300"
        assert record["dims"] == "128"
        # mean_ms is printed rounded, so allow for the rounding in the check
        assert float(record["extrapolated_ms"]) == pytest.approx(
            float(record["mean_ms"]) * 1_046_235 / 300, rel=2e-2
        )

    def test_zero_repetitions_rejected(self, tmp_path):
        store_path = tmp_path / "bench.svs"
        code = main(
            ["bench", "--store", str(store_path), "--synthetic", "10", "--n", "8",
             "--repetitions", "0"]
        )
        assert code == 1

    def test_missing_store_exits_2(self, tmp_path):
        assert main(["bench", "--store", str(tmp_path / "none.svs")]) == 2


class TestReport:
    def test_default_rows_and_footnote(self, capsys):
        assert main(["report"]) == 0
        out = capsys.readouterr().out
        assert "26.667%" in out
        assert "10.000%" in out
        assert "0.417%" in out
        assert "4.2%" in out  # footnote flags the inconsistent published figure

    def test_csv_rows(self, capsys):
        assert main(["report", "--csv", "--config", "64,2,32"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "n,d,bits_per_dim,vector_bits,ratio"
        rows = {tuple(line.split(",")[:3]): line.split(",") for line in lines[1:]}
        assert rows[("32", "2", "32")][3] == "65536"
        assert float(rows[("32", "2", "32")][4]) == pytest.approx(0.2666667, rel=1e-5)
        assert rows[("64", "2", "32")][3] == "262144"
        assert float(rows[("64", "2", "32")][4]) == pytest.approx(262144 / 245760, rel=1e-9)

    def test_zero_baseline_rejected(self):
        assert main(["report", "--baseline-bits", "0"]) == 1

    def test_bad_config_argument_rejected(self):
        assert main(["report", "--config", "32,2"]) == 1


class TestUsageErrors:
    def test_unknown_flag_exits_1(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["report", "--nope"])
        assert excinfo.value.code == 1

    def test_missing_required_flag_exits_1(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["embed", "--vocab", "x"])
        assert excinfo.value.code == 1
