import json
import os
import subprocess

import jsonschema
import pytest

import filmspec

CLI = os.environ.get("FILMSPEC_CLI")
SCHEMAS = os.environ.get("FILMSPEC_SCHEMAS", os.path.join(os.path.dirname(__file__), "..", "..", "schemas"))

REFERENCE_EPS_0_1 = [1.00968, 2.07334, 3.22978, 4.50134, 5.89993, 7.43194, 9.10097, 10.9092, 12.8578, 14.9478]


def test_spectrum_matches_table():
    recs = filmspec.compute_spectrum(0.1, count=10)
    assert [r.index for r in recs] == list(range(1, 11))
    for r, expect in zip(recs, REFERENCE_EPS_0_1):
        assert abs(r.lambda_ / expect - 1) <= 1e-4


def test_eigenvector_and_projection():
    rec = filmspec.compute_spectrum(0.1, count=5)[4]
    v, peak, proj = filmspec.eigenvector(0.1, rec, 400)
    assert v.shape == (400,)
    assert abs(float((v * v).sum()) - 1.0) < 1e-12
    assert 4 <= peak <= 7
    assert abs(proj / 13.341 - 1) < 0.01


def test_errors_map_to_python():
    with pytest.raises(filmspec.ConfigError):
        filmspec.evaluate_f(2.5, 1.0)
    with pytest.raises(ValueError):
        filmspec.compute_spectrum(0.1, count=0)
    sign, _ = filmspec.evaluate_f(0.1, 0.0)
    assert sign != 0


def test_resolvent_and_truncation():
    s = filmspec.resolvent_summary(0.1, 200)
    assert s["identity_residual"] < 1e-8
    assert abs(s["dominant_eigenvalue"] * 1.00968 - 1) < 0.01
    ev = filmspec.truncated_eigenvalues(0.1, 2)
    assert abs(ev[0].real - (3 - 0.96 ** 0.5) / 2) < 1e-12


def test_bound_suite():
    assert all(r["pass"] for r in filmspec.bound_suite())


def test_fit():
    alpha, gamma = filmspec.fit_power_law([(n, 2.0 * n ** 1.5) for n in range(1, 6)])
    assert abs(alpha - 2) < 1e-10 and abs(gamma - 1.5) < 1e-10


def test_in_process_cli():
    code, out, err = filmspec.run_cli(["eig", "--eps", "2.5"])
    assert code == 2 and "eps" in err


COMMANDS = {
    "eig": ["eig", "--eps", "0.1", "--count", "4", "--proj"],
    "scan": ["scan", "--eps", "0.1", "--lo", "0", "--hi", "2", "--step", "0.05"],
    "eigvec": ["eigvec", "--eps", "0.1", "--index", "3"],
    "resolvent": ["resolvent", "--eps", "0.1", "--n-max", "100"],
    "truncate": ["truncate", "--eps", "0.1", "--sizes", "50,100", "--count", "4"],
    "verify": ["verify", "--suite"],
    "fit": ["fit", "--eps", "0.1", "--count", "5"],
}


def run_cli(args):
    if CLI:
        proc = subprocess.run([CLI, *args], capture_output=True, text=True, check=False)
        return proc.returncode, proc.stdout
    code, out, _ = filmspec.run_cli(args)
    return code, out


@pytest.mark.parametrize("name", sorted(COMMANDS))
def test_json_matches_schema(name):
    code, out = run_cli([*COMMANDS[name], "--format", "json"])
    assert code == 0
    with open(os.path.join(SCHEMAS, f"{name}.schema.json")) as f:
        schema = json.load(f)
    jsonschema.validate(json.loads(out), schema)


def test_eigvec_theta_matches_schema():
    code, out = run_cli(["eigvec", "--eps", "0.1", "--index", "2", "--theta", "64", "--format", "json"])
    assert code == 0
    with open(os.path.join(SCHEMAS, "eigvec.schema.json")) as f:
        jsonschema.validate(json.loads(out), json.load(f))


def test_cli_is_byte_deterministic():
    args = ["eig", "--eps", "0.1", "--count", "6", "--proj"]
    a = run_cli([*args, "--threads", "1"])
    b = run_cli([*args, "--threads", "4"])
    assert a == b
