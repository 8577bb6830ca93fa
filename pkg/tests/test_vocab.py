import numpy as np
import pytest

from semsketch import FormatError, load_vocabulary, load_word_vectors
from semsketch.vocab import Concept, ConceptVocabulary

from conftest import make_vocab, write_vocab_file, write_word_vector_file


class TestLoadVocabulary:
    def test_three_line_file(self, tmp_path):
        path = write_vocab_file(tmp_path / "v.tsv", ["background", "person", "grass"])
        vocab = load_vocabulary(path)
        assert len(vocab) == 3
        assert [e.concept_id for e in vocab.entries] == [0, 1, 2]
        assert vocab.labels == ("background", "person", "grass")
        assert vocab.entries[1].source == "test"

    def test_missing_background_rejected(self, tmp_path):
        path = write_vocab_file(tmp_path / "v.tsv", ["person", "grass"])
        with pytest.raises(ValueError, match="background"):
            load_vocabulary(path)

    def test_duplicate_label_rejected(self, tmp_path):
        path = write_vocab_file(tmp_path / "v.tsv", ["background", "person", "person"])
        with pytest.raises(ValueError, match="duplicate label 'person'"):
            load_vocabulary(path)

    def test_non_dense_ids_rejected(self, tmp_path):
        path = tmp_path / "v.tsv"
        path.write_text("0\tbackground\tt\n2\tperson\tt\n", encoding="utf-8")
        with pytest.raises(ValueError, match="dense"):
            load_vocabulary(path)

    def test_labels_normalized_to_lowercase(self, tmp_path):
        path = tmp_path / "v.tsv"
        path.write_text("0\tbackground\tt\n1\tPerson\tt\n", encoding="utf-8")
        assert load_vocabulary(path).labels == ("background", "person")

    def test_malformed_line_rejected(self, tmp_path):
        path = tmp_path / "v.tsv"
        path.write_text("0\tbackground\n", encoding="utf-8")
        with pytest.raises(FormatError, match="3 tab-separated"):
            load_vocabulary(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "v.tsv"
        path.write_text("", encoding="utf-8")
        with pytest.raises(FormatError, match="no vocabulary records"):
            load_vocabulary(path)

    def test_missing_file_is_io_error(self, tmp_path):
        with pytest.raises(OSError):
            load_vocabulary(tmp_path / "absent.tsv")


class TestLoadWordVectors:
    def test_direct_parse(self, tmp_path):
        vocab = make_vocab(["background", "person", "grass"])
        path = tmp_path / "w.txt"
        path.write_text(
            "background 0.0 1.0 2.0 3.0\n"
            "person 1.0 1.0 1.0 1.0\n"
            "grass -1.0 0.5 0.25 0.0\n",
            encoding="utf-8",
        )
        table = load_word_vectors(path, vocab)
        assert table.width == 4
        assert len(table.rows) == 3
        np.testing.assert_array_equal(table.rows["person"], [1.0, 1.0, 1.0, 1.0])

    def test_multi_token_label_is_token_mean(self, tmp_path):
        vocab = make_vocab(["background", "potted plant"])
        path = tmp_path / "w.txt"
        path.write_text(
            "background 0 0\npotted 1.0 3.0\nplant 3.0 -1.0\n", encoding="utf-8"
        )
        table = load_word_vectors(path, vocab)
        np.testing.assert_allclose(table.rows["potted plant"], [2.0, 1.0])

    def test_missing_token_error_names_it(self, tmp_path):
        vocab = make_vocab(["background", "horse"])
        path = tmp_path / "w.txt"
        path.write_text("background 0 0\n", encoding="utf-8")
        with pytest.raises(ValueError, match="horse"):
            load_word_vectors(path, vocab)

    def test_error_lists_all_missing_tokens(self, tmp_path):
        vocab = make_vocab(["background", "horse", "zebra"])
        path = tmp_path / "w.txt"
        path.write_text("background 0 0\n", encoding="utf-8")
        with pytest.raises(ValueError, match="horse, zebra"):
            load_word_vectors(path, vocab)

    def test_count_dim_header_skipped(self, tmp_path):
        vocab = make_vocab(["background"])
        path = tmp_path / "w.txt"
        path.write_text("1 3\nbackground 0.5 0.5 0.5\n", encoding="utf-8")
        assert load_word_vectors(path, vocab).width == 3

    def test_inconsistent_width_rejected(self, tmp_path):
        vocab = make_vocab(["background", "person"])
        path = tmp_path / "w.txt"
        path.write_text("background 0 0 0\nperson 1 1\n", encoding="utf-8")
        with pytest.raises(FormatError, match="expected 3 components"):
            load_word_vectors(path, vocab)

    def test_matrix_follows_id_order(self, tmp_path):
        labels = ["background", "person", "grass"]
        vocab = make_vocab(labels)
        path = write_word_vector_file(tmp_path / "w.txt", labels, width=5)
        table = load_word_vectors(path, vocab)
        matrix = table.matrix(vocab)
        assert matrix.shape == (3, 5)
        for i, label in enumerate(labels):
            np.testing.assert_array_equal(matrix[i], table.rows[label])


class TestVocabularyInvariants:
    def test_background_must_sit_at_id_zero(self):
        with pytest.raises(ValueError, match="id 0"):
            ConceptVocabulary((Concept(0, "person", "t"), Concept(1, "background", "t")))

    def test_ids_must_be_dense(self):
        with pytest.raises(ValueError, match="dense"):
            ConceptVocabulary((Concept(0, "background", "t"), Concept(5, "person", "t")))
