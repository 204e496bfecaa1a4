"""File formats: scenario TOML, curve CSVs, report JSON.

All numeric output is rendered with 12 significant digits so identical
invocations produce byte-identical artifacts.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from .economy import AuditReport, Scenario, make_scenario
from .skillindex import Judgment, JudgmentSet

VERDICT_CODES = {"1": "first", "2": "second", "0": "tie"}
VERDICT_TO_CODE = {"first": "1", "second": "2", "tie": "0"}


def fmt(value) -> str:
    """12-significant-digit text for CSV cells."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.12g}"
    return str(value)


def round12(value):
    """Round floats to 12 significant digits for JSON emission."""
    if isinstance(value, (float, np.floating)):
        return float(f"{float(value):.12g}")
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, dict):
        return {k: round12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [round12(v) for v in value]
    return value


def write_json(payload: dict, path) -> None:
    Path(path).write_text(json.dumps(round12(payload), indent=2) + "\n")


def write_csv(path, header: Sequence[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(cell) for cell in row])


def load_scenario(path) -> Scenario:
    with open(path, "rb") as fh:
        config = tomllib.load(fh)
    return make_scenario(config)


def write_audit_json(report: AuditReport, path) -> None:
    write_json(report.to_dict(), path)


def write_mismatch_csv(curve, path) -> None:
    rows = zip(curve.KGrid, curve.tNaive, curve.tInf, curve.mismatch,
               (f[0] for f in curve.cornerFlags), (f[1] for f in curve.cornerFlags))
    write_csv(path, ["K", "t_naive", "t_inf", "mismatch", "case_naive", "case_inf"],
              rows)


def write_gap_csv(curve, path) -> None:
    write_csv(path, ["K", "C_naive", "C_inf", "gap"],
              zip(curve.KGrid, curve.CNaive, curve.CInf, curve.gap))


def write_adoption_csv(curve, path) -> None:
    write_csv(path, ["c", "alpha_school", "alpha_planner", "gap_alpha",
                     "C_school", "C_planner", "gap_C"],
              zip(curve.cGrid, curve.alphaSchool, curve.alphaPlanner,
                  curve.gapAlpha, curve.CSchool, curve.CPlanner, curve.gapC))


def write_tiers_csv(curve, path) -> None:
    write_csv(path, ["K", "tau_low", "tau_high", "delta", "choice",
                     "t_naive", "t_inf", "mismatch", "jump"],
              zip(curve.KGrid, curve.tauLow, curve.tauHigh, curve.delta,
                  curve.choice, curve.tNaive, curve.tInf, curve.mismatch,
                  curve.jumpFlag))


def solution_to_dict(sol, planner: str, k: float) -> dict:
    return {
        "planner": planner,
        "K": k,
        "tA": sol.tA,
        "tB": sol.tB,
        "case": sol.case,
        "mu0": sol.mu0,
        "muT": sol.muT,
        "utility": sol.utility,
        "skills": {"A": sol.skills.A, "B": sol.skills.B, "C": sol.skills.C},
        "focResidual": sol.focResidual,
    }


def read_judgments_csv(path) -> JudgmentSet:
    """Judgments CSV: model_id, skill_i, skill_j, order (IJ|JI), verdict (1|2|0)."""
    records = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"model_id", "skill_i", "skill_j", "order", "verdict"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise ValueError(f"judgments CSV must have columns {sorted(required)}")
        for row in reader:
            code = row["verdict"].strip()
            if code not in VERDICT_CODES:
                raise ValueError(f"verdict must be 1, 2 or 0, got {code!r}")
            records.append(Judgment(model_id=row["model_id"].strip(),
                                    skill_i=row["skill_i"].strip(),
                                    skill_j=row["skill_j"].strip(),
                                    order=row["order"].strip(),
                                    verdict=VERDICT_CODES[code]))
    return JudgmentSet.from_records(records)


def write_judgments_csv(judgment_set: JudgmentSet, path) -> None:
    write_csv(path, ["model_id", "skill_i", "skill_j", "order", "verdict"],
              ((j.model_id, j.skill_i, j.skill_j, j.order, VERDICT_TO_CODE[j.verdict])
               for j in judgment_set.judgments))


def write_ratings_csv(table, path) -> None:
    """Ratings CSV: skill_id, rating, n_comparisons."""
    write_csv(path, ["skill_id", "rating", "n_comparisons"],
              ((skill, float(table.ratings[skill]), table.comparisons[skill])
               for skill in table.ratings))


def read_matrix_csv(path):
    """Wide score matrix CSV: skill_id column then one column per model."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "skill_id" or len(header) < 2:
            raise ValueError("matrix CSV must have a skill_id column followed "
                             "by one column per model")
        model_ids = header[1:]
        skills, rows = [], []
        for row in reader:
            skills.append(row[0])
            rows.append([float(v) for v in row[1:]])
    return skills, model_ids, np.array(rows, dtype=float)


def write_index_csv(skills, pc1, path) -> None:
    write_csv(path, ["skill_id", "pc1"], zip(skills, pc1))


def read_xy_csv(path):
    """Two-variable CSV with columns x and y (extra columns are ignored)."""
    xs, ys = [], []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"x", "y"}.issubset(reader.fieldnames):
            raise ValueError("stats CSV must have columns x and y")
        for row in reader:
            xs.append(float(row["x"]))
            ys.append(float(row["y"]))
    return np.array(xs), np.array(ys)
