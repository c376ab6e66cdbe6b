import pytest
from fastapi.testclient import TestClient

from entrolp.service import app

client = TestClient(app)

TOY = ('PD\n{"RV":["X"],"AL":["A","B"],"O":"A + B",'
       '"BC":["A <= 1","B <= 1","A + B >= 1"]}\n')


def test_info():
    resp = client.get("/")
    assert resp.status_code == 200
    assert "regular" in resp.json()["modes"]


def test_parse_endpoint(rg12_text):
    resp = client.post("/parse", json={"pd_text": rg12_text})
    assert resp.status_code == 200
    body = resp.json()
    assert len(body["rv_names"]) == 12
    assert body["symmetry_rows"] == 24
    assert body["options"] == ["CS", "PDC"]
    assert body["objective"] == "A+B"


def test_parse_rejects_bad_document():
    resp = client.post("/parse", json={"pd_text": 'PD\n{"RV":"X"}'})
    assert resp.status_code == 400
    assert "array" in resp.json()["detail"]


def test_parse_applies_modifiers():
    resp = client.post("/parse", json={
        "pd_text": TOY,
        "modifiers": ['{"+AL": ["C"]}'],
    })
    assert resp.status_code == 200
    assert resp.json()["al_names"] == ["A", "B", "C"]


def test_serialize_endpoint():
    resp = client.post("/serialize", json={"pd_text": TOY})
    assert resp.status_code == 200
    assert resp.json()["pd_text"].startswith("PD\n")


def test_run_regular():
    resp = client.post("/run", json={"pd_text": TOY})
    assert resp.status_code == 200
    body = resp.json()
    assert body["exit_code"] == 0
    assert "Optimal value for A + B = 1.000000." in body["output"]
    assert body["structured"]["optimal_value"] == pytest.approx(1.0)


def test_run_hull_structured_points():
    resp = client.post("/run", json={"pd_text": TOY, "mode": "hull"})
    body = resp.json()
    assert body["exit_code"] == 0
    pts = body["structured"]["points"]
    assert pts[0] == pytest.approx([0.0, 1.0])
    assert pts[-1] == pytest.approx([1.0, 0.0])
    assert body["structured"]["labels"] == ["A", "B"]


def test_run_parse_error_reported():
    resp = client.post("/run", json={"pd_text": "not a pd file"})
    assert resp.status_code == 200
    body = resp.json()
    assert body["exit_code"] == 2
    assert body["error"]


def test_run_unknown_mode_rejected():
    resp = client.post("/run", json={"pd_text": TOY, "mode": "warp"})
    assert resp.status_code == 400


def test_run_does_not_write_files(tmp_path):
    text = TOY.replace('"O"', f'"OPT":["SER -t {tmp_path}/x.pd"],"O"')
    resp = client.post("/run", json={"pd_text": text})
    assert resp.status_code == 200
    assert resp.json()["exit_code"] == 0
    assert not (tmp_path / "x.pd").exists()
    assert '"RV"' in resp.json()["output"]


def test_cli_thin_client(monkeypatch, tmp_path, capsys):
    # the CLI forwards to a server when ENTROLP_SERVER is set
    import httpx

    from entrolp.cli import main

    def fake_post(url, **kwargs):
        return client.post(url.replace("http://svc", ""), json=kwargs["json"])

    monkeypatch.setattr(httpx, "post", fake_post)
    monkeypatch.setenv("ENTROLP_SERVER", "http://svc")
    p = tmp_path / "toy.pd"
    p.write_text(TOY)
    assert main([str(p)]) == 0
    out = capsys.readouterr().out
    assert "Optimal value for A + B = 1.000000." in out
