import random

import pytest

import adkg


def test_field_roundtrip():
    msg = [3, 2]
    chunks = adkg.encode_chunks(msg, 4, 1)
    assert chunks == [[5], [7], [9], [11]]
    assert adkg.interpolate([(1, 5), (2, 7)], 1) == [3, 2]


def test_field_random_subsets():
    rng = random.Random(7)
    for _ in range(50):
        n, f = 7, 2
        msg = [rng.randrange(adkg.MODULUS) for _ in range(rng.randint(1, 12))]
        c = adkg.chunk_size(len(msg), f)
        chunks = adkg.encode_chunks(msg, n, f)
        ids = rng.sample(range(n), f + 1)
        pts = [(j * c + k + 1, chunks[j][k]) for j in ids for k in range(c)]
        assert adkg.interpolate(pts, len(msg) - 1) == msg


def test_bytes_encoding():
    data = b"hello, field"
    assert adkg.decode_bytes(adkg.encode_bytes(data)) == data


def test_field_errors():
    with pytest.raises(adkg.AdkgError):
        adkg.interpolate([(1, 5)], 1)
    with pytest.raises(adkg.AdkgError):
        adkg.encode_chunks([adkg.MODULUS], 4, 1)


def test_vector_commitment():
    values = [bytes([i]) * (i + 1) for i in range(5)]
    root = adkg.vc_commit(values)
    assert len(root) == 32
    for pos, v in enumerate(values):
        proof = adkg.vc_open_prove(values, pos)
        assert adkg.vc_open_verify(root, len(values), v, pos, proof)
        assert not adkg.vc_open_verify(root, len(values), v + b"x", pos, proof)
        assert not adkg.vc_open_verify(root, len(values), v, (pos + 1) % 5, proof)


@pytest.mark.parametrize("protocol", ["rb", "vrb", "gather", "pe", "nwh", "adkg"])
def test_reference_scenarios(protocol):
    cfg = adkg.reference_config(protocol)
    assert cfg["protocol"] == protocol
    out = adkg.run_scenario(cfg, seed=1)
    assert out["violations"] == []
    assert out["metrics"]["words_total"] > 0


def test_adversary_and_replay():
    cfg = adkg.reference_config("nwh")
    cfg["adversary"]["corrupt"] = {"0": "nwh_equivocator"}
    a = adkg.run_scenario(cfg, seed=3, trace=True)
    b = adkg.run_scenario(cfg, seed=3, trace=True)
    assert a == b
    assert a["violations"] == []
    totals = adkg.replay_trace(a["trace"])
    assert totals["words_total"] == a["metrics"]["words_total"]


def test_sweep_and_scaling():
    cfg = adkg.reference_config("pe")
    cfg["seeds"] = "0..9"
    s = adkg.sweep(cfg)
    assert s["runs"] == 10
    assert s["runs_with_violations"] == 0
    rb = adkg.reference_config("rb")
    rb["seeds"] = "0..2"
    res = adkg.scaling(rb, [4, 7, 10])
    assert 1.5 < res["slope"] < 2.8


def test_bad_config():
    with pytest.raises(adkg.AdkgError):
        adkg.run_scenario({"n": 4, "f": 2})
    assert "silent" in adkg.behavior_names()
