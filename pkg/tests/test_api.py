import math

import pytest
import pytest_asyncio
from httpx import ASGITransport, AsyncClient

from main import app


@pytest_asyncio.fixture
async def client():
    async with AsyncClient(transport=ASGITransport(app=app), base_url="http://test") as ac:
        yield ac


@pytest.mark.asyncio
async def test_health(client):
    response = await client.get("/health")
    assert response.status_code == 200
    body = response.json()
    assert body["success"] is True
    assert body["result"]["status"] == "healthy"


@pytest.mark.asyncio
async def test_temporal_rows(client):
    response = await client.post("/dispersion/temporal", json={"w1": 0.1, "w_hat": [0.0, 0.5]})
    rows = response.json()["result"]["rows"]
    assert rows[0] == {"w_hat": 0.0, "psi_lf": "undef", "psi_tp": "undef"}
    assert rows[1]["psi_lf"] > 0


@pytest.mark.asyncio
async def test_fd_modes(client):
    payload = {"M": 2, "w_hat": 0.5, "mesh": {"omega1_h": math.pi / 30}}
    result = (await client.post("/dispersion/fd/modes", json=payload)).json()["result"]
    assert result["count"] == 6
    assert result["max_residual"] < 1e-10
    assert sum(1 for mode in result["modes"] if mode["mode_class"] == "physical") == 2


@pytest.mark.asyncio
async def test_cfl_limit(client):
    response = await client.get("/dispersion/cfl", params={"kind": "fd", "order": 2})
    (row,) = response.json()["result"]["rows"]
    assert row["exact"] == "6/7"
    assert row["value"] == pytest.approx(6 / 7)


@pytest.mark.asyncio
async def test_comparison_region(client):
    result = (await client.get("/dispersion/comparison-region", params={"nu": 0.5})).json()["result"]
    assert result["kind"] == "always"
    assert result["hi"] is None
    result = (await client.get("/dispersion/comparison-region", params={"nu": 0.9})).json()["result"]
    assert result["kind"] == "lower"


@pytest.mark.asyncio
async def test_analysis_errors_are_detailed(client):
    response = await client.get("/dispersion/cfl", params={"kind": "fd", "order": 0})
    assert response.status_code == 422
    body = response.json()
    assert body["success"] is False
    assert body["error_type"] == "ConfigError"
    assert "a:b:n" in body["debug_help"]

    bad_medium = {"medium": {"eps_s": 1.0, "eps_inf": 2.0}, "w1": 0.1, "w_hat": [0.5]}
    response = await client.post("/dispersion/temporal", json=bad_medium)
    assert response.status_code == 422
    assert response.json()["error_type"] == "InvalidMedium"


@pytest.mark.asyncio
async def test_failures_are_logged(client):
    await client.get("/dispersion/cfl", params={"kind": "dg"})
    logs = (await client.get("/logs", params={"level": "error"})).json()["result"]
    assert logs["filtered_count"] == 1
    assert logs["logs"][0]["details"]["operation"] == "cfl_limits"
    assert logs["failures_by_component"] == {"Config": 1}
    logs = (await client.get("/logs", params={"error_type": "PoleAtResonance"})).json()["result"]
    assert logs["filtered_count"] == 0

    cleared = await client.delete("/logs")
    assert cleared.json()["success"] is True
    logs = (await client.get("/logs")).json()["result"]
    assert logs["total_logs"] == 1
