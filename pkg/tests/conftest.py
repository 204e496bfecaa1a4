import copy

import numpy as np
import pytest

from eduplan import make_scenario
from eduplan.adoption import IntensityProblem
from eduplan.skillindex import Judgment, JudgmentSet


def ref_config() -> dict:
    """Reference parametric economy used throughout the suite."""
    return {
        "T": 1.0, "K0": 0.0, "kappa": 1.0, "gamma": 0.5,
        "production": {"A": {"aA": 1.0, "bA": 0.4, "etaA": 0.2},
                       "B": {"aB": 1.0, "bB": 0.4, "etaB": 0.1}},
        "wages": {"A": {"wAinf": 0.3, "wA0": 1.0, "deltaA": 2.0},
                  "B": {"wB0": 1.0, "sB": 0.2, "deltaB": 1.0}},
        "noncog": {"cA": 0.1, "cB": 0.5, "muA": 0.3, "muB": 0.1, "rho": 0.05},
    }


def ref_tiers_table() -> dict:
    return {
        "Alow": 0.2, "Ahigh": 0.5,
        "wLow": {"w0": 0.5, "winf": 0.3, "delta": 1.0},
        "wMid": {"w0": 0.25, "winf": 0.1, "delta": 1.0},
        "wHigh": {"w0": 0.9, "winf": 1.0, "delta": 1.0},
    }


def ref_adoption_table() -> dict:
    return {"phi": 1.0, "psi": 0.25, "chi": 0.05, "xi": 0.1}


def full_config() -> dict:
    config = ref_config()
    config["adoption"] = ref_adoption_table()
    config["tiers"] = ref_tiers_table()
    return config


def violator_config() -> dict:
    """Reference economy tweaked so the education channel beats the wage channel."""
    config = copy.deepcopy(ref_config())
    config["production"]["A"]["etaA"] = 0.5
    config["wages"]["A"] = {"wAinf": 0.4, "wA0": 1.0, "deltaA": 1.0}
    return config


def engineered_tiers_config() -> dict:
    """Tier schedule whose expertise premium decays fast enough to flip sign."""
    config = full_config()
    config["tiers"]["wHigh"] = {"w0": 0.9, "winf": 0.5, "delta": 3.0}
    return config


def worked_intensity_problem(**overrides) -> IntensityProblem:
    params = dict(tA=0.5, K=1.0, m=0.4, phi=1.0, psi=0.25, chi=0.05, xi=0.1,
                  gamma=1.0, pA=1.0, wA=0.8)
    params.update(overrides)
    return IntensityProblem(**params)


def synthetic_judgment_log(n_skills=10, n_pairs=200, n_models=5, seed=7) -> JudgmentSet:
    """Deterministic order-paired judgment log over a small roster."""
    rng = np.random.default_rng(seed)
    skills = [f"skill{i:02d}" for i in range(n_skills)]
    combos = [(m, i, j)
              for m in range(n_models)
              for i in range(n_skills) for j in range(i + 1, n_skills)]
    assert len(combos) >= n_pairs
    records = []
    for idx in rng.permutation(len(combos))[:n_pairs]:
        m, i, j = combos[idx]
        v1, v2 = rng.choice(["first", "second", "tie"], size=2,
                            p=[0.45, 0.45, 0.1])
        records.append(Judgment(model_id=f"m{m}", skill_i=skills[i],
                                skill_j=skills[j], order="IJ", verdict=v1))
        records.append(Judgment(model_id=f"m{m}", skill_i=skills[i],
                                skill_j=skills[j], order="JI", verdict=v2))
    return JudgmentSet.from_records(records, roster=skills)


@pytest.fixture(scope="session")
def ref_scenario():
    return make_scenario(ref_config())


@pytest.fixture(scope="session")
def full_scenario():
    return make_scenario(full_config())


@pytest.fixture(scope="session")
def violator_scenario():
    return make_scenario(violator_config())


@pytest.fixture(scope="session")
def engineered_tiers_scenario():
    return make_scenario(engineered_tiers_config())
