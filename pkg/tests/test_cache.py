import logging

from cubemob import cache as cm
from cubemob.cache import Cache


def test_put_then_get(tmp_path):
    c = Cache(tmp_path)
    payload = [[0, 1, -1], [1, 1, 1], [0, 0, 10**30]]
    c.put("mr-mu|2|abc", payload, {"n": 2})
    assert c.get("mr-mu|2|abc").payload == payload
    fresh = Cache(tmp_path)
    e = fresh.get("mr-mu|2|abc")
    assert e.payload == payload and e.meta == {"n": 2} and e.version == cm.SCHEMA_VERSION
    assert fresh.get("missing") is None


def test_payload_bytes_round_trip(tmp_path):
    payload = {"b": [3, -2], "a": 1}
    Cache(tmp_path).put("k", payload)
    assert cm.encode_payload(Cache(tmp_path).get("k").payload) == cm.encode_payload(payload)


def test_file_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d, order in ((a, ["x", "y"]), (b, ["y", "x"])):
        c = Cache(d)
        for k in order:
            c.put(k, [k])
    assert (a / cm.FILENAME).read_bytes() == (b / cm.FILENAME).read_bytes()
    assert (a / cm.FILENAME).read_bytes().startswith(cm.MAGIC)


def test_version_bump_forces_miss(tmp_path):
    Cache(tmp_path).put("k", [1])
    assert Cache(tmp_path, version=cm.SCHEMA_VERSION + 1).get("k") is None


def test_corrupt_record_is_discarded_with_warning(tmp_path, caplog):
    c = Cache(tmp_path)
    c.put("a", [1])
    c.put("b", [2])
    path = tmp_path / cm.FILENAME
    data = bytearray(path.read_bytes())
    data[-6] ^= 0xFF  # inside the last record
    path.write_bytes(bytes(data))
    with caplog.at_level(logging.WARNING, logger="cubemob.cache"):
        fresh = Cache(tmp_path)
        assert fresh.get("a").payload == [1]
        assert fresh.get("b") is None
    assert "corrupt" in caplog.text


def test_truncated_and_garbage_files(tmp_path):
    c = Cache(tmp_path)
    c.put("a", [1])
    path = tmp_path / cm.FILENAME
    path.write_bytes(path.read_bytes()[:-3])
    assert Cache(tmp_path).get("a") is None
    path.write_bytes(b"not a cache at all")
    assert Cache(tmp_path).get("a") is None
    Cache(tmp_path).put("a", [7])
    assert Cache(tmp_path).get("a").payload == [7]


def test_unwritable_directory_degrades_to_memory(tmp_path, caplog):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    c = Cache(blocker / "sub")
    with caplog.at_level(logging.WARNING, logger="cubemob.cache"):
        c.put("k", [1])
    assert not c.enabled
    assert c.get("k").payload == [1]
    assert "disabled" in caplog.text


def test_disabled_cache():
    c = Cache(None)
    assert not c.enabled
    c.put("k", [1])
    assert c.get("k").payload == [1]


def test_resolve_dir(monkeypatch):
    monkeypatch.setenv(cm.ENV_VAR, "/from/env")
    assert cm.resolve_dir(None) == "/from/env"
    assert cm.resolve_dir("/from/flag") == "/from/flag"
    monkeypatch.delenv(cm.ENV_VAR)
    assert cm.resolve_dir(None) is None
