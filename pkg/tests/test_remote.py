import json
import threading
import time

import httpx
import pytest
import uvicorn

from coverkit.cli import main
from coverkit.service import app


@pytest.fixture(scope="module")
def server_url():
    config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    for _ in range(200):
        if server.started:
            break
        time.sleep(0.05)
    else:
        raise RuntimeError("server did not start")
    port = server.servers[0].sockets[0].getsockname()[1]
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


def test_remote_hilbert(server_url, capsys):
    assert main(["--url", server_url, "hilbert", "Qp:2", "-1", "-1"]) == 0
    assert capsys.readouterr().out.strip() == "-1"


def test_remote_analyze(server_url, tmp_path, capsys):
    doc = {
        "catalog": {"name": "GL", "size": 2},
        "form": {"N": 2, "q_basis": [0, 0], "b_offdiag": [1]},
    }
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))
    assert main(["--url", server_url, "analyze", str(path)]) == 0
    assert "K ≅ Z/2" in capsys.readouterr().out


def test_remote_semantic_error_exit_2(server_url, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({
        "catalog": {"name": "GL", "size": 2},
        "form": {"N": 2, "q_basis": [1, 0], "b_offdiag": [0]},
    }))
    assert main(["--url", server_url, "analyze", str(path)]) == 2


def test_remote_health(server_url):
    resp = httpx.get(f"{server_url}/health", timeout=10.0)
    assert resp.status_code == 200
    assert resp.json()["status"] == "ok"
