"""HTTP service endpoints: payload shapes, domain errors, and the
residual checks behind the CLI exit codes."""

import math

import pytest
from fastapi.testclient import TestClient

from brachisto.geometry import curve_from_json_dict, radial_time
from brachisto.service.app import create_app

TOF_TANGENT_ARC_2PI3 = 3.4186937469060807


@pytest.fixture(scope="module")
def client():
    with TestClient(create_app()) as c:
        yield c


def test_health(client):
    body = client.get("/health").json()
    assert body["status"] == "ok"
    assert body["version"]


def test_solve_selects_families(client):
    body = client.post("/solve", json={"theta_f": 1.0472}).json()
    assert body["family"] == "strong"
    assert body["params"]["D"] == pytest.approx(0.2300, abs=5e-3)
    assert len(body["curve"]["samples"]) == 1201

    body = client.post("/solve", json={"theta_f": 2.5}).json()
    assert body["family"] == "weak"
    assert body["tof"] == pytest.approx(math.pi, abs=1e-12)

    body = client.post(
        "/solve", json={"theta_f": 2.0 * math.pi / 3.0, "epsilon": 0.5}
    ).json()
    assert body["family"] == "constrained"
    assert body["params"]["regime"] == "TangentArc"
    assert body["tof"] == pytest.approx(TOF_TANGENT_ARC_2PI3, abs=1e-12)

    # interior disk terminal goes through the origin
    body = client.post("/solve", json={"theta_f": 0.4, "terminal_r": 0.5}).json()
    assert body["family"] == "weak"
    curve = curve_from_json_dict(body["curve"])
    assert curve.r[-1] == pytest.approx(0.5, abs=1e-12)


def test_solve_rejects_bad_inputs(client):
    resp = client.post("/solve", json={"theta_f": 2.0, "epsilon": 0.5, "terminal_r": 0.8})
    assert resp.status_code == 422
    assert "NotOnBoundary" in resp.json()["detail"]
    assert client.post("/solve", json={"theta_f": 1.0, "terminal_r": 0.0}).status_code == 422
    assert client.post("/solve", json={}).status_code == 422
    assert client.post("/solve", json={"theta_f": 1.0, "bogus": 1}).status_code == 422


def test_foliate_disk_index(client):
    body = client.post("/foliate", json={"count": 8, "n_samples": 301}).json()
    assert len(body["index"]) == len(body["curves"]) == 8
    families = [e["family"] for e in body["index"]]
    assert families == ["weak", "strong", "strong", "strong",
                        "strong", "strong", "strong", "weak"]
    for entry, record in zip(body["index"], body["curves"]):
        curve = curve_from_json_dict(record)
        assert curve.t_cum[-1] == pytest.approx(entry["tof"], rel=1e-9)
        if entry["family"] == "strong":
            assert entry["D"] > 0 and 0 < entry["r_c"] < 1
        else:
            assert entry["D"] is None
    # mirror-symmetric ladder gives mirror-equal times
    tofs = [e["tof"] for e in body["index"]]
    assert tofs == pytest.approx(tofs[::-1], rel=1e-12)


def test_foliate_annulus_regions(client):
    body = client.post("/foliate", json={"count": 3, "epsilon": 0.5, "n_samples": 301}).json()
    labels = [e["label"] for e in body["index"]]
    assert labels[0].startswith("rim_") and labels[3].startswith("seam_")
    assert labels[6].startswith("ring_")
    regimes = {e["regime"] for e in body["index"]}
    assert "TangentExitR3" in regimes and "ObstacleTerminalR4" in regimes


def test_value_grid_payload(client):
    body = client.post("/value", json={
        "n_r": 100, "n_theta": 200, "n_curves": 128, "n_samples": 1201,
    }).json()
    assert body["n_r"] == 100 and body["n_theta"] == 200
    assert len(body["values"]) == 100 and len(body["values"][0]) == 200
    assert body["families"] == ["strong", "weak", "constrained"]
    assert 0.0 < body["filled_fraction"] < 1.0
    assert body["max_residual"] is not None
    assert body["values"][0][0] == pytest.approx(math.pi / 2.0, abs=1e-2)


def test_oracle_targets(client):
    body = client.post("/oracle", json={
        "target_r": 0.3, "target_theta": 0.0, "n_r": 100, "n_theta": 200,
    }).json()
    exact = math.pi / 2.0 - float(radial_time(0.3))
    assert body["analytic"] == pytest.approx(exact, abs=1e-12)
    assert abs(body["gap_vs_analytic"]) < 1e-6

    body = client.post("/oracle", json={
        "target_r": 1.0, "target_theta": 1.0472, "stencil": "dense",
    }).json()
    assert 0.0 <= body["gap_vs_analytic"] < 0.02
    assert body["resolution"] == [200, 400]

    body = client.post("/oracle", json={
        "target_r": 0.62, "target_theta": 2.2, "n_r": 60, "n_theta": 120,
    }).json()
    assert body["analytic"] is None and body["gap_vs_analytic"] is None

    resp = client.post("/oracle", json={
        "target_r": 0.2, "target_theta": 1.0, "epsilon": 0.5,
        "n_r": 60, "n_theta": 120,
    })
    assert resp.status_code == 422


def test_converge_rows(client):
    body = client.post("/converge", json={
        "theta_f": 3.0 * math.pi / 4.0, "eps_list": [0.4, 0.2, 0.1], "n": 1001,
    }).json()
    rows = body["rows"]
    assert [e for e, _ in rows] == [0.4, 0.2, 0.1]
    dists = [d for _, d in rows]
    assert dists[0] > dists[1] > dists[2] > 0.0


def test_stationarity_check_modes(client):
    body = client.post("/check/stationarity", json={
        "theta_f": 2.0 * math.pi / 3.0, "epsilon": 0.5, "n": 9601, "n_checks": 4,
    }).json()
    assert body["family"] == "constrained"
    assert body["passed"] is True
    assert body["radial_min"] >= -1e-4
    assert body["angular_max_abs"] <= 1e-4

    # The cusp at the origin leaves more finite-difference noise in the
    # radial derivative, so the default tolerance is honestly too tight
    # for the through-origin family; the override acknowledges that.
    payload = {"theta_f": 3.0 * math.pi / 4.0, "epsilon": 0.0,
               "n": 9601, "n_checks": 4}
    body = client.post("/check/stationarity", json=payload).json()
    assert body["family"] == "weak"
    assert body["passed"] is False
    assert -1e-3 < body["radial_min"] < -1e-4
    body = client.post("/check/stationarity", json={**payload, "tol": 5e-4}).json()
    assert body["passed"] is True


def test_eikonal_check(client):
    body = client.post("/check/eikonal", json={
        "n_r": 150, "n_theta": 300, "n_curves": 384,
    }).json()
    assert body["passed"] is True
    assert 0.0 < body["max_residual"] < 0.05
    assert body["included"] > 10000


def test_repro_bundle_shape(client):
    body = client.post("/repro/fig4").json()
    assert body["name"] == "fig4"
    panel = body["panels"][0]
    assert isinstance(panel["curves"][0]["r"], list)
    assert len(panel["markers"]) == 3
    assert client.post("/repro/fig9").status_code == 422
