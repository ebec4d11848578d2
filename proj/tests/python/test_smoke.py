# SPDX-License-Identifier: Apache-2.0
#
# beamcast: multiuser mmWave beam-quality prediction and beam/power allocation
# Copyright (C) 2026 The beamcast authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------
"""Smoke tests for the beamcast Python module."""

import math

import numpy as np
import pytest

import beamcast

SMALL = """
antennas_vertical = 4
antennas_horizontal = 4
lowres_vertical = 2
lowres_horizontal = 2
users = 2
frames = 6
window = 2
"""


def test_defaults_round_trip():
    text = beamcast.default_config_text()
    assert "antennas_vertical = 8" in text
    assert beamcast.normalize_config_text(text) == text


def test_bad_config_raises_value_error():
    with pytest.raises(ValueError):
        beamcast.normalize_config_text("users = 0\n")


def test_dataset_and_predictions_round_trip(tmp_path):
    path = tmp_path / "episodes.bin"
    checksum = beamcast.generate_dataset(path, SMALL, 7)
    assert checksum == beamcast.file_checksum(path)

    data = beamcast.read_dataset(path)
    header = data["header"]
    assert (header.vertical, header.horizontal, header.low_vertical, header.low_horizontal) == (4, 4, 2, 2)
    n = header.records
    assert n == 2 * (6 - 2)
    assert data["inputs"].shape == (n, 2, 2, 2, 2)
    assert data["target"].shape == (n, 2, 4, 4)
    assert np.all(data["target"] >= 0.0)

    # A trainer writes predictions keyed by the predicted frame t + 1.
    header.kind = "predictions"
    out = tmp_path / "predictions.bin"
    beamcast.write_predictions(out, header, data["ue"], data["frame"] + 1, data["target"])
    back = beamcast.read_predictions(out)
    order = np.lexsort((data["frame"], data["ue"]))
    assert np.array_equal(back["ue"], data["ue"][order])
    assert np.array_equal(back["frame"], data["frame"][order] + 1)
    assert back["images"].tobytes() == data["target"][order].tobytes()


def test_corrupt_dataset_raises(tmp_path):
    path = tmp_path / "episodes.bin"
    beamcast.generate_dataset(path, SMALL, 1)
    raw = path.read_bytes()
    path.write_bytes(raw[:-8])
    with pytest.raises(ValueError):
        beamcast.read_dataset(path)


def test_conflict_probability():
    assert beamcast.conflict_probability(4, 2, 0) == pytest.approx(0.75)
    assert beamcast.conflict_probability(3, 3, 0) == pytest.approx(2.0 / 9.0)
    mc = beamcast.conflict_probability_mc(4, 2, 0, 100000, 3)
    assert abs(mc - 0.75) <= 3.0 * math.sqrt(0.75 * 0.25 / 100000)


def test_allocation():
    gains = np.array([[2.0, 0.1, 0.3], [0.2, 1.5, 0.4]])
    kkt = beamcast.power_allocate_kkt([0, 1], gains, 1.0, 0.1)
    assert sum(kkt["power"]) == pytest.approx(1.0, rel=1e-8)
    best = beamcast.enumerate_optimal(gains, 1.0, 0.1)
    assert best["combinations_evaluated"] == beamcast.permutation_count(3, 2) == 6
    rankings = [list(np.argsort(-row, kind="stable")) for row in gains]
    top = beamcast.topm_allocate(gains, rankings, 3, 1.0, 0.1)
    assert top["sum_rate"] <= best["sum_rate"]
    assert beamcast.sum_rate(best["beams"], best["power"], gains, 0.1) == pytest.approx(best["sum_rate"])
    with pytest.raises(ValueError):
        beamcast.power_allocate_kkt([0, 5], gains, 1.0, 0.1)


def test_evaluate_csv():
    csv = beamcast.evaluate_csv(SMALL, ["oracle"], [4], True)
    lines = csv.strip().splitlines()
    assert lines[0] == "# beamcast-evaluate v1"
    assert lines[1].startswith("policy,predictor,max_power_dbm,m,samples")
    assert any(line.startswith("optimal,oracle") for line in lines)
