import json

import numpy as np
import pytest

from dispersion.models import LorentzMedium
from schemas.common import FluxKind, SpatialKind, TemporalKind
from schemas.requests import MediumBody, MeshBody, SchemeBody
from utils.errors import ConfigError, InvalidCFL, InvalidFlux, InvalidMedium
from utils.validation import check_cfl, load_run_config, parse_range, resolve_mesh, to_medium, to_scheme


def test_parse_range():
    np.testing.assert_allclose(parse_range("0:3:4"), [0.0, 1.0, 2.0, 3.0])
    assert len(parse_range("0.02:3:150")) == 150


@pytest.mark.parametrize("text", ["0:3", "a:3:4", "0:3:0", "0:inf:4"])
def test_parse_range_rejects(text):
    with pytest.raises(ConfigError):
        parse_range(text)


def test_load_run_config(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(
        json.dumps(
            {
                "medium": {"eps_s": 5.25, "eps_inf": 2.25, "gamma_hat": 0.0, "omega_1": 1.0},
                "scheme": {"temporal": "lf", "spatial": "fd", "order": 2},
                "mesh": {"w1": 0.1, "nu": 0.6},
                "range": "0.02:3:10",
            }
        )
    )
    config = load_run_config(path)
    assert config.scheme.order == 2
    assert config.medium.gamma_hat == 0.0
    assert config.format.value == "csv"


@pytest.mark.parametrize(
    "content",
    [
        "{not json",
        json.dumps({"medium": {"eps_s": 5.25}, "colour": "blue"}),
        json.dumps({"scheme": {"temporal": "lf", "spatial": "fd"}, "mesh": {"w1": 0.1}}),
    ],
)
def test_load_run_config_errors(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    with pytest.raises(ConfigError):
        load_run_config(path)


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "missing.json")


def test_to_medium():
    default = LorentzMedium()
    assert to_medium(None, default) is default
    assert to_medium(MediumBody(gamma_hat=0.0)).gamma_hat == 0.0
    with pytest.raises(InvalidMedium):
        to_medium(MediumBody(eps_s=1.0, eps_inf=2.0))
    with pytest.raises(InvalidMedium):
        to_medium(None)


def test_to_scheme():
    spec = to_scheme(SchemeBody(temporal=TemporalKind.LEAPFROG, spatial=SpatialKind.DG, order=1, flux=FluxKind.UPWIND))
    assert spec.label == "lf-dg1-upwind"
    with pytest.raises(InvalidFlux):
        to_scheme(SchemeBody(spatial=SpatialKind.DG, order=1))
    with pytest.raises(ConfigError):
        to_scheme(SchemeBody(spatial=SpatialKind.FD, order=0))


def test_resolve_mesh(medium):
    w1, omega1_h, nu = resolve_mesh(MeshBody(w1=0.15, nu=0.5), medium, TemporalKind.LEAPFROG)
    assert omega1_h == pytest.approx(0.2)
    with pytest.raises(ConfigError):
        resolve_mesh(MeshBody(omega1_h=0.1), medium, TemporalKind.TRAPEZOIDAL)


def test_check_cfl():
    check_cfl(0.9, 1.0, False, "lf-fd2")
    check_cfl(1.2, 1.0, True, "lf-fd2")
    check_cfl(None, 1.0, False, "lf")
    with pytest.raises(InvalidCFL):
        check_cfl(1.2, 1.0, False, "lf-fd2")
