"""Matrix, system, bundle and pointer-setup files."""

import json

import numpy as np
import pytest

from PTSim.exceptions import BundleFormatError, IndexOutOfRange, MatrixFormatError
from PTSim.serialization import (
    load_bundle,
    load_matrix,
    load_pointer_setup,
    load_system,
    load_vector,
    matrix_to_model,
    resolve_frame_reference,
    resolve_state,
    save_bundle,
    save_matrix,
    save_system,
)
from PTSim.weak import weak_value


def matrix_json(a) -> dict:
    return matrix_to_model(np.asarray(a, dtype=np.complex128)).model_dump()


class TestMatrixFiles:
    def test_round_trip_is_bit_identical(self, tmp_path, rng):
        a = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
        a[0, 0] = 0.1 + 1.0 / 3.0j
        path = save_matrix(a, tmp_path / "a.json")
        assert np.array_equal(load_matrix(path), a)

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{\"rows\": 2,", encoding="utf-8")
        with pytest.raises(MatrixFormatError, match="malformed JSON"):
            load_matrix(path)

    def test_wrong_row_count(self, write_json_file):
        path = write_json_file("m.json", {"rows": 2, "cols": 1, "data": [[[1.0, 0.0]]]})
        with pytest.raises(MatrixFormatError, match="'data'"):
            load_matrix(path)

    def test_missing_key(self, write_json_file):
        path = write_json_file("m.json", {"rows": 1, "data": [[[1.0, 0.0]]]})
        with pytest.raises(MatrixFormatError, match="'cols'"):
            load_matrix(path)

    def test_bad_pair(self, write_json_file):
        path = write_json_file("m.json", {"rows": 1, "cols": 1, "data": [[[1.0, 0.0, 2.0]]]})
        with pytest.raises(MatrixFormatError):
            load_matrix(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(MatrixFormatError, match="cannot read"):
            load_matrix(tmp_path / "absent.json")

    def test_vector_forms(self, write_json_file):
        bare = load_vector(write_json_file("v1.json", [[1.0, 2.0], [0.0, -1.0]]))
        wrapped = load_vector(write_json_file("v2.json", {"data": [[1.0, 2.0], [0.0, -1.0]]}))
        assert np.array_equal(bare, [1 + 2j, -1j])
        assert np.array_equal(bare, wrapped)


class TestSystemFiles:
    def test_round_trip(self, bender, tmp_path):
        path = save_system(bender.system, tmp_path / "sys.json", eta=bender.canon.eta)
        loaded = load_system(path)
        assert np.array_equal(loaded.system.H, bender.system.H)
        assert np.array_equal(loaded.eta, bender.canon.eta)
        assert loaded.frame is None

    def test_frame_keys(self, bender_frame_file, bender):
        loaded = load_system(bender_frame_file)
        assert loaded.frame is not None
        psi, j, s = loaded.frame
        assert np.array_equal(psi, bender.canon.psi_prime)
        assert np.array_equal(s, bender.canon.S)

    def test_partial_frame(self, bender, write_json_file):
        system = bender.system
        payload = {
            "H": matrix_json(system.H),
            "P": matrix_json(system.P),
            "T": matrix_json(system.T_conj),
            "Psi": matrix_json(bender.canon.psi_prime),
        }
        with pytest.raises(MatrixFormatError, match="missing"):
            load_system(write_json_file("partial.json", payload))

    def test_missing_operator(self, bender, write_json_file):
        payload = {"H": matrix_json(bender.system.H), "P": matrix_json(bender.system.P)}
        with pytest.raises(MatrixFormatError, match="'T'"):
            load_system(write_json_file("sys.json", payload))


class TestBundles:
    def test_round_trip(self, bender_dilation, tmp_path):
        path = save_bundle(bender_dilation, tmp_path / "bundle.json")
        loaded = load_bundle(path)
        assert np.array_equal(loaded.H_tilde, bender_dilation.H_tilde)
        assert np.array_equal(loaded.Phi_tilde, bender_dilation.Phi_tilde)
        assert loaded.perm == bender_dilation.perm
        assert loaded.c == bender_dilation.c
        assert all(value <= 1e-9 for value in loaded.residuals.values())

    def test_tampered_bundle(self, bender_dilation, tmp_path):
        path = save_bundle(bender_dilation, tmp_path / "bundle.json")
        payload = json.loads(path.read_text(encoding="utf-8"))
        payload["H_tilde"]["data"][0][1][0] += 1e-3
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(BundleFormatError, match="re-check"):
            load_bundle(path)

    def test_invalid_perm(self, bender_dilation, tmp_path):
        path = save_bundle(bender_dilation, tmp_path / "bundle.json")
        payload = json.loads(path.read_text(encoding="utf-8"))
        payload["perm"] = [0, 0]
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(BundleFormatError, match="'perm'"):
            load_bundle(path)

    def test_perm_must_match_s(self, bender_dilation, tmp_path):
        path = save_bundle(bender_dilation, tmp_path / "bundle.json")
        payload = json.loads(path.read_text(encoding="utf-8"))
        assert payload["perm"] == [1, 0]
        payload["perm"] = [0, 1]
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(BundleFormatError, match="disagrees with S"):
            load_bundle(path)

    def test_s_must_be_a_permutation(self, bender_dilation, tmp_path):
        path = save_bundle(bender_dilation, tmp_path / "bundle.json")
        payload = json.loads(path.read_text(encoding="utf-8"))
        payload["S"] = matrix_json(2.0 * np.eye(2))
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(BundleFormatError, match="'S' is not a sip permutation"):
            load_bundle(path)

    def test_shape_mismatch(self, bender_dilation, tmp_path):
        path = save_bundle(bender_dilation, tmp_path / "bundle.json")
        payload = json.loads(path.read_text(encoding="utf-8"))
        payload["eta"] = matrix_json(np.eye(3))
        path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(BundleFormatError, match="'eta'"):
            load_bundle(path)

    def test_malformed_json_is_a_bundle_error(self, tmp_path):
        path = tmp_path / "bundle.json"
        path.write_text("not json", encoding="utf-8")
        with pytest.raises(BundleFormatError):
            load_bundle(path)


class TestFrameReferences:
    def test_kinds(self, bender_dilation):
        d = bender_dilation
        assert np.array_equal(resolve_frame_reference(d, "1"), d.Psi_tilde[:, 0])
        assert np.array_equal(resolve_frame_reference(d, "psi:2"), d.Psi_tilde[:, 1])
        assert np.array_equal(resolve_frame_reference(d, "phi:1"), d.Phi_tilde[:, 0])
        assert np.array_equal(resolve_frame_reference(d, "mu:1"), d.Phi_tilde[:, 1])

    def test_out_of_range(self, bender_dilation):
        with pytest.raises(IndexOutOfRange):
            resolve_frame_reference(bender_dilation, "mu:3")

    def test_invalid_reference(self, bender_dilation):
        with pytest.raises(MatrixFormatError):
            resolve_frame_reference(bender_dilation, "xi:1")

    def test_reference_needs_bundle(self):
        with pytest.raises(MatrixFormatError):
            resolve_state(None, "mu:1")

    def test_vector_file_relative_to_base(self, write_json_file, tmp_path):
        write_json_file("pre.json", [[1.0, 0.0], [0.0, 1.0]])
        assert np.array_equal(resolve_state(None, "pre.json", tmp_path), [1.0, 1j])


class TestPointerSetup:
    def test_bundle_references(self, bender_dilation, tmp_path, write_json_file):
        save_bundle(bender_dilation, tmp_path / "bundle.json")
        path = write_json_file(
            "setup.json",
            {"bundle": "bundle.json", "observable": "bundle", "pre": "psi:1", "post": "mu:1", "g": 0.01},
        )
        setup = load_pointer_setup(path)
        assert setup.g == 0.01
        assert setup.pointer_width == 1.0
        assert abs(weak_value(setup) - complex(1.0, np.sqrt(0.99))) < 1e-9

    def test_explicit_matrix(self, write_json_file):
        path = write_json_file(
            "setup.json",
            {
                "observable": matrix_json(np.diag([1.0, -1.0])),
                "pre": [[1.0, 0.0], [1.0, 0.0]],
                "post": [[1.0, 0.0], [0.0, 0.0]],
                "g": 0.1,
                "width": 2.0,
            },
        )
        setup = load_pointer_setup(path)
        assert weak_value(setup) == pytest.approx(1.0)
        assert setup.pointer_width == 2.0

    def test_reference_without_bundle(self, write_json_file):
        path = write_json_file(
            "setup.json",
            {"observable": matrix_json(np.eye(2)), "pre": "psi:1", "post": [[1.0, 0.0], [0.0, 0.0]], "g": 0.1},
        )
        with pytest.raises(MatrixFormatError, match="needs a 'bundle'"):
            load_pointer_setup(path)

    def test_negative_width(self, write_json_file):
        path = write_json_file(
            "setup.json",
            {"observable": matrix_json(np.eye(2)), "pre": [[1.0, 0.0]], "post": [[1.0, 0.0]], "g": 0.1, "width": -1},
        )
        with pytest.raises(MatrixFormatError, match="'width'"):
            load_pointer_setup(path)
