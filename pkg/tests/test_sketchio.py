import numpy as np
import pytest

from l1diff import sketchio
from l1diff.estimator import L1DiffSketch

SEED = bytes(range(32))


def _filled_sketch(eps=1.0, n=60, m_raw=10, seed=SEED):
    rng = np.random.default_rng(40)
    sk = L1DiffSketch.new(eps, n, m_raw, seed)
    sk.ingest_vector(rng.integers(-m_raw, m_raw + 1, n))
    return sk


def test_round_trip_counters_identical():
    sk = _filled_sketch()
    back = sketchio.deserialize(sketchio.serialize(sk))
    for a, b in zip(sk.tles + [sk.tle_small], back.tles + [back.tle_small]):
        assert (a.x == b.x).all()
    assert (sk.rough.acc == back.rough.acc).all()
    assert sk.combine(back).estimate() == 0


def test_round_trip_exact_mode():
    sk = _filled_sketch(eps=0.05, n=100, m_raw=20)
    assert sk.params.exact
    back = sketchio.deserialize(sketchio.serialize(sk))
    assert (sk.exact_buf == back.exact_buf).all()
    assert sk.combine(back).estimate() == 0


def test_serialize_deterministic():
    assert sketchio.serialize(_filled_sketch()) == sketchio.serialize(_filled_sketch())


def test_bad_magic():
    blob = sketchio.serialize(_filled_sketch())
    with pytest.raises(sketchio.BadMagic):
        sketchio.deserialize(b"XXXX" + blob[4:])


def test_unsupported_version():
    blob = bytearray(sketchio.serialize(_filled_sketch()))
    blob[4] = 99
    with pytest.raises(sketchio.UnsupportedVersion):
        sketchio.deserialize(bytes(blob))


def test_truncation_reports_corrupt():
    blob = sketchio.serialize(_filled_sketch())
    for cut in (3, 40, len(blob) - 17):
        with pytest.raises(sketchio.CorruptParams):
            sketchio.deserialize(blob[:cut])


def test_tampered_params_detected():
    blob = bytearray(sketchio.serialize(_filled_sketch()))
    # q lives right after magic+version+mode+eps+n+m_raw+seed = 4+2+1+8+8+8+32
    off = 63
    blob[off] ^= 0xFF
    with pytest.raises(sketchio.CorruptParams):
        sketchio.deserialize(bytes(blob))


def test_counter_out_of_field_detected():
    sk = _filled_sketch()
    blob = bytearray(sketchio.serialize(sk))
    payload_off = sketchio._HEADER.size
    blob[payload_off:payload_off + 4] = (sk.ctx.p + 1).to_bytes(4, "little")
    with pytest.raises(sketchio.CorruptParams):
        sketchio.deserialize(bytes(blob))


def test_file_round_trip(tmp_path):
    sk = _filled_sketch()
    path = tmp_path / "a.sk"
    nbytes = sketchio.write_file(path, sk)
    assert path.stat().st_size == nbytes
    back = sketchio.read_file(path)
    assert sk.combine(back).estimate() == 0


def test_two_parties_combine_through_files(tmp_path):
    rng = np.random.default_rng(41)
    n, m_raw = 80, 9
    x = rng.integers(-m_raw, m_raw + 1, n)
    y = rng.integers(-m_raw, m_raw + 1, n)
    for name, vec in (("x", x), ("y", y)):
        sk = L1DiffSketch.new(0.9, n, m_raw, SEED)
        sk.ingest_vector(vec)
        sketchio.write_file(tmp_path / f"{name}.sk", sk)
    a = sketchio.read_file(tmp_path / "x.sk")
    b = sketchio.read_file(tmp_path / "y.sk")
    est = a.combine(b).estimate()
    true = int(np.abs(x - y).sum())
    assert abs(est - true) <= 0.9 * true or est == true
