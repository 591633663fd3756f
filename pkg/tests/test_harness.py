import json

import numpy as np
import pytest

from opweak.constants import CONSTANTS
from opweak.errors import InputError
from opweak.harness import (
    CSV_HEADER,
    STRUCTURES,
    TrialConfig,
    adversarial_search,
    run_sweep,
    run_trial,
    sample_pair,
    search_to_json,
)
from opweak.matcore import matrix_from_json
from opweak.norms import singular_values


@pytest.mark.parametrize("structure", STRUCTURES)
def test_sampling_is_deterministic_per_trial(structure):
    cfg = TrialConfig(seed=5, n=6, trials=3, structure=structure)
    a1, b1 = sample_pair(cfg, 2)
    a2, b2 = sample_pair(TrialConfig(seed=5, n=6, trials=1, structure=structure), 2)
    np.testing.assert_array_equal(a1, a2)
    np.testing.assert_array_equal(b1, b2)
    a3, _ = sample_pair(cfg, 1)
    assert not np.array_equal(a1, a3)


def test_structures():
    a, b = sample_pair(TrialConfig(seed=1, n=8, structure="rank1_perturb"), 0)
    s = singular_values(a - b)
    assert s[1] <= 1e-12 * s[0]
    a, b = sample_pair(TrialConfig(seed=1, n=8, structure="commuting"), 0)
    assert np.linalg.norm(a @ b - b @ a) <= 1e-12
    a, b = sample_pair(TrialConfig(seed=1, n=8, structure="identically_distributed"), 0)
    np.testing.assert_allclose(np.linalg.eigvalsh(a), np.linalg.eigvalsh(b), atol=1e-12)
    a, b = sample_pair(TrialConfig(seed=1, n=7, structure="symmetric_pair"), 0)
    assert a.shape == (6, 6)
    w = np.linalg.eigvalsh(a)
    np.testing.assert_allclose(w, -w[::-1], atol=1e-12)
    np.testing.assert_allclose(w, np.linalg.eigvalsh(b), atol=1e-12)
    assert sample_pair(TrialConfig(seed=1, n=1, structure="symmetric_pair"), 0)[0].shape == (2, 2)


@pytest.mark.parametrize("kw", [{"structure": "bogus"}, {"n": 0}, {"n": 129}, {"trials": 0}, {"seed": -1}])
def test_config_validation(kw):
    args = {"seed": 1, "n": 4, **kw}
    with pytest.raises(InputError):
        TrialConfig(**args)


def test_sweep_csv():
    res = run_sweep(TrialConfig(seed=3, n=4, trials=10), timing=False)
    assert res.passed and not res.failures
    lines = res.to_csv().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 11
    assert all(line.endswith(",1,0.000") for line in lines[1:])
    assert res.summary["bound_constant"] == CONSTANTS.c_main
    assert run_sweep(TrialConfig(seed=3, n=4, trials=10), timing=False).to_csv() == res.to_csv()


def test_trial_replay():
    cfg = TrialConfig(seed=9, n=5, trials=4, structure="rank1_perturb")
    rec, cert, a, b = run_trial(cfg, 3, timing=False)
    rec2, _, _, _ = run_trial(cfg, 3, timing=False)
    assert rec == rec2
    assert rec.ratio == cert.ratio <= CONSTANTS.c_main


def test_search_minimal_budget():
    found = adversarial_search(4, 1, 1, seed=0)
    assert found.evaluations == 1 and len(found.trace) == 1
    rec, cert = found.record(0)
    assert cert.passed
    assert rec.ratio == pytest.approx(found.best_value, rel=1e-9)


def test_search_improves_and_serializes():
    found = adversarial_search(4, 200, 2, seed=3)
    assert found.evaluations == 200
    values = [v for _, v in found.trace]
    assert values == sorted(values) and values[-1] == found.best_value
    doc = search_to_json(found, 3)
    json.dumps(doc)
    np.testing.assert_array_equal(matrix_from_json(doc["A"]), found.A)
    assert found.best_value <= CONSTANTS.c_main
    l1 = adversarial_search(3, 20, 1, seed=1, objective="l1_ratio")
    assert l1.objective == "l1_ratio"


def test_search_validation():
    with pytest.raises(InputError):
        adversarial_search(4, 10, objective="other")
    with pytest.raises(InputError):
        adversarial_search(4, 0)
