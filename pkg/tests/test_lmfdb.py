from urllib.parse import parse_qs, urlparse

import pytest
import requests

from exotic_hecke import lmfdb
from exotic_hecke.lmfdb import NetworkError, SchemaDriftError, fetch_metadata, parse_newform


def row(label, level, t="S4", d=2, minimal=True, dim=2):
    return {"label": label, "level": level, "char_order": d, "projective_image": t,
            "is_twist_minimal": minimal, "dim": dim}


class FakeResponse:
    def __init__(self, status, payload=None, headers=None):
        self.status_code = status
        self._payload = payload
        self.headers = headers or {}

    def json(self):
        if self._payload is None:
            raise ValueError("no JSON")
        return self._payload


class FakeSession:
    """Serves rows per projective type, paged like the real API; ``script`` injects failures."""

    def __init__(self, rows, script=None):
        self.rows = rows
        self.script = list(script or [])
        self.urls = []

    def get(self, url, timeout=None):
        self.urls.append(url)
        if self.script:
            step = self.script.pop(0)
            if isinstance(step, Exception):
                raise step
            if step is not None:
                return step
        q = parse_qs(urlparse(url).query)
        t, off, n = q["projective_image"][0], int(q["_offset"][0]), int(q["_max_count"][0])
        data = [r for r in self.rows if r["projective_image"] == t][off:off + n]
        return FakeResponse(200, {"data": data})


@pytest.fixture(autouse=True)
def no_sleep(monkeypatch):
    monkeypatch.setattr(lmfdb.time, "sleep", lambda s: None)


def test_parse_newform():
    rec = parse_newform(row("283.1.b.a", 283))
    assert rec.level == 283 and rec.proj_type == "S4" and rec.level_is_squarefree
    bad = row("283.1.b.a", 283)
    del bad["projective_image"]
    with pytest.raises(SchemaDriftError) as exc:
        parse_newform(bad)
    assert exc.value.field == "projective_image"
    assert "283.1.b.a" in str(exc.value)


def test_paging_and_level_bound():
    rows = [row(f"{n}.1.a.a", n) for n in range(100, 350)] + [row("124.1.i.a", 124, "A4", 6, dim=4)]
    s = FakeSession(rows)
    out = fetch_metadata(300, session=s, base_url="http://example.invalid/api/")
    assert len(out) == 201 + 1
    assert [r.level for r in out] == sorted(r.level for r in out)
    # 250 S4 rows need three pages, the other types one each
    assert len(s.urls) == 3 + 1 + 1
    assert all(u.startswith("http://example.invalid/api/?") for u in s.urls)


def test_env_override(monkeypatch):
    monkeypatch.setenv(lmfdb.BASE_URL_ENV, "http://mirror.invalid/x/")
    s = FakeSession([])
    fetch_metadata(10, session=s)
    assert s.urls[0].startswith("http://mirror.invalid/x/?")


def test_retry_on_rate_limit():
    s = FakeSession([row("283.1.b.a", 283)],
                    script=[FakeResponse(429, headers={"Retry-After": "2"}), FakeResponse(503),
                            requests.ConnectionError("reset")])
    out = fetch_metadata(4000, proj_types=("S4",), session=s)
    assert [r.label for r in out] == ["283.1.b.a"]
    assert len(s.urls) == 4


def test_unreachable_host_is_retryable_error(tmp_path):
    s = FakeSession([], script=[requests.ConnectionError("no route")] * 10)
    with pytest.raises(NetworkError) as exc:
        fetch_metadata(100, session=s, cache_dir=tmp_path, retries=2)
    assert exc.value.retryable
    assert len(s.urls) == 3
    assert not any(tmp_path.rglob("*.json")), "nothing may be cached after a failure"


def test_client_errors_are_not_retried():
    s = FakeSession([], script=[FakeResponse(404)])
    with pytest.raises(NetworkError):
        fetch_metadata(100, session=s)
    assert len(s.urls) == 1


def test_non_json_body():
    s = FakeSession([], script=[FakeResponse(200, None)])
    with pytest.raises(NetworkError):
        fetch_metadata(100, session=s)


def test_schema_drift_in_envelope_and_rows(tmp_path):
    s = FakeSession([], script=[FakeResponse(200, {"results": []})])
    with pytest.raises(SchemaDriftError) as exc:
        fetch_metadata(100, session=s, cache_dir=tmp_path)
    assert exc.value.field == "data"
    assert not any(tmp_path.rglob("*.json"))
    broken = row("23.1.b.a", 23, "S4")
    del broken["dim"]
    with pytest.raises(SchemaDriftError) as exc:
        fetch_metadata(100, session=FakeSession([broken]))
    assert exc.value.field == "dim"


def test_cache_is_reused_and_written_atomically(tmp_path, monkeypatch):
    rows = [row("283.1.b.a", 283), row("124.1.i.a", 124, "A4", 6, dim=4)]
    first = FakeSession(rows)
    a = fetch_metadata(4000, session=first, cache_dir=tmp_path)
    files = sorted(tmp_path.rglob("*"))
    assert [f for f in files if f.suffix == ".tmp"] == []
    assert len([f for f in files if f.suffix == ".json"]) == 3
    second = FakeSession([])
    b = fetch_metadata(4000, session=second, cache_dir=tmp_path)
    assert second.urls == [] and a == b

    # a crash while writing leaves neither a partial cache file nor a temp file
    def boom(*args, **kwargs):
        raise OSError("disk full")
    monkeypatch.setattr(lmfdb.os, "replace", boom)
    other = tmp_path / "other"
    with pytest.raises(OSError):
        fetch_metadata(4000, session=FakeSession(rows), cache_dir=other)
    assert not [f for f in other.rglob("*") if f.is_file()]
