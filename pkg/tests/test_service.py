"""HTTP surface: endpoints, error translation, response shapes."""

import pytest
from fastapi.testclient import TestClient

from pickmult.service import create_app


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app(), raise_server_exceptions=False) as c:
        yield c


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    body = r.json()
    assert body["status"] == "ok"
    assert body["service"] == "pickmult"


def test_pick_norm_endpoint(client):
    r = client.post(
        "/experiments/pick-norm",
        json={"nodes": [[[0.5, 0.0]]], "values": [[0.25, 0.0]]},
    )
    assert r.status_code == 200
    body = r.json()
    assert body["report"]["status"] == "pass"
    assert set(body) == {"report", "files"}
    assert body["report"]["kind"] == "pick-norm"


def test_all_experiment_endpoints_respond(client):
    configs = {
        "pick-norm": {"nodes": [[[0.2, 0.0]]], "values": [[0.1, 0.0]]},
        "holomap-check": {
            "holomap": {"components": [[[0.0, 0.0], [0.5, 0.0]]]},
            "grid_size": 32,
        },
        "operator-r": {
            "monomial": {"p": 2, "q": 3, "alpha": 0.5},
            "grid_size": 128,
            "modes": 4,
        },
        "extension-probe": {
            "holomap": {
                "components": [
                    [[0.0, 0.0], [0.0, 0.0], [0.7071067811865476, 0.0]],
                    [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071067811865476, 0.0]],
                ],
                "boundary_normalized": True,
            },
            "target": [{"powers": [1, 0], "coeff": [1.0, 0.0]}],
            "schedule": [4, 8],
        },
        "disjoint-union": {
            "groups": [[[[0.0, 0.0]]], [[[0.6, 0.0]]]],
            "runs": 3,
        },
    }
    for kind, cfg in configs.items():
        r = client.post(f"/experiments/{kind}", json=cfg)
        assert r.status_code == 200, (kind, r.text)
        assert r.json()["report"]["kind"] == kind


def test_config_error_maps_to_400_code_2(client):
    r = client.post(
        "/experiments/pick-norm",
        json={"nodes": [[[1.5, 0.0]]], "values": [[0.1, 0.0]]},
    )
    assert r.status_code == 400
    detail = r.json()["detail"]
    assert detail["code"] == 2
    assert detail["kind"] == "BallMembershipError"


def test_validation_error_maps_to_422(client):
    r = client.post("/experiments/pick-norm", json={"nodes": "junk"})
    assert r.status_code == 422
    r = client.post(
        "/experiments/pick-norm",
        json={"nodes": [[[0.1, 0.0]]], "values": [[0.0, 0.0]], "surprise": True},
    )
    assert r.status_code == 422  # extra fields are rejected


def test_numerical_error_maps_to_500_code_3(client):
    r = client.post(
        "/experiments/operator-r",
        json={
            "holomap": {"components": [[[0.0, 0.0], [0.9999999999999, 0.0]]]},
            "grid_size": 64,
            "modes": 4,
        },
    )
    assert r.status_code == 500
    detail = r.json()["detail"]
    assert detail["code"] == 3
    assert detail["kind"] == "IntegrandBlowupError"


def test_degenerate_map_is_numerical_error(client):
    r = client.post(
        "/experiments/operator-r",
        json={
            "holomap": {"components": [[[0.0, 0.0], [0.5, 0.0], [0.5, 0.0]]]},
            "grid_size": 64,
            "modes": 4,
        },
    )
    assert r.status_code == 500
    assert r.json()["detail"]["kind"] == "TransversalityError"
