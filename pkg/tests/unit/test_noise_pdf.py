import math

import numpy as np
import pytest

from noisebench.analysis import noise_pdf as pdf_module
from noisebench.utils.errors import ParameterError
from noisebench.pipeline.noise import NoiseSpec
from noisebench.analysis.noise_pdf import noise_pdf, density_csv, default_support


@pytest.mark.parametrize("kind", ["gaussian", "erlang", "exponential", "rayleigh", "speckle"])
def test_densities_integrate_to_one(kind):
    spec = NoiseSpec.default(kind)
    z = default_support(spec, points=20001)
    assert np.trapezoid(noise_pdf(spec, z), z) == pytest.approx(1.0, abs=2e-3)


def test_poisson_pmf_sums_to_one():
    spec = NoiseSpec.default("poisson")
    z = default_support(spec)
    assert noise_pdf(spec, z).sum() == pytest.approx(1.0, abs=1e-6)
    assert noise_pdf(spec, np.array([2.5, -1.0])).tolist() == [0.0, 0.0]


def test_closed_forms():
    gaussian = NoiseSpec.from_overrides("gaussian", {"mu": 0, "sigma": 1})
    assert noise_pdf(gaussian, np.array([0.0]))[0] == pytest.approx(1 / math.sqrt(2 * math.pi))

    exponential = NoiseSpec.from_overrides("exponential", {"a": 0.02})
    assert noise_pdf(exponential, np.array([0.0, 50.0, -1.0])).tolist() == pytest.approx([0.02, 0.02 / math.e, 0.0])

    erlang = NoiseSpec.from_overrides("erlang", {"a": 0.5, "b": 2})
    assert noise_pdf(erlang, np.array([2.0]))[0] == pytest.approx(0.25 * 2.0 * math.exp(-1.0))

    rayleigh = NoiseSpec.default("rayleigh")
    assert noise_pdf(rayleigh, np.array([10.0]))[0] == pytest.approx(0.2 * math.exp(-1.0))

    periodic = NoiseSpec.from_overrides("periodic", {"amplitude": 2})
    assert noise_pdf(periodic, np.array([0.0, 3.0])).tolist() == pytest.approx([1 / (2 * math.pi), 0.0])


def test_speckle_multiplier_has_unit_mean():
    spec = NoiseSpec.default("speckle")
    z = default_support(spec, points=20001)
    assert np.trapezoid(z * noise_pdf(spec, z), z) == pytest.approx(1.0, abs=2e-3)


@pytest.mark.parametrize(
    "kind,overrides",
    [
        ("salt_pepper", {}),
        ("gaussian", {"sigma": 0}),
        ("periodic", {"amplitude": 0}),
        ("speckle", {"variance": 0}),
    ],
)
def test_densities_that_do_not_exist(kind, overrides):
    spec = NoiseSpec.from_overrides(kind, overrides)
    with pytest.raises(ParameterError):
        noise_pdf(spec, np.array([0.0]))


def test_density_csv_lines():
    text = density_csv(np.array([0.0, 0.5]), np.array([1.0, 0.25]))
    assert text == "z,density\n0.000000,1\n0.500000,0.25\n"


def test_run_writes_csv(tmp_path):
    out = tmp_path / "gaussian.csv"
    pdf_module.run("gaussian", str(out), "11")
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "z,density"
    assert len(lines) == 12
    assert lines[6].startswith("0.000000,")


def test_run_without_arguments_only_logs(capsys):
    pdf_module.run()
    assert capsys.readouterr().out == ""
