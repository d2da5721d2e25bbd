"""JSON and CSV schemas for the command-line front end.

All files are UTF-8 JSON except result tables, which are CSV with a fixed
header. Variables are referred to by their cause names; each file carries a
``causes`` list whose position defines the variable index. Configuration
bitstrings are little-endian over ascending variable index: character ``i``
is the value of the ``i``-th smallest variable in the constraint's scope
(conditioning set joined with intervened set). Floats round-trip exactly
through ``repr``.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import _bits
from .core import (
    ConditionalModel,
    Config,
    ConstraintKind,
    ConstraintSpec,
    FitReport,
    GraphSpec,
    JointTable,
    lambda_manifest,
)
from .errors import SchemaError
from .synth import Dataset, StructureTemplate


def _fail(path: str | Path, where: str, message: str) -> SchemaError:
    return SchemaError(f"{path}: {where}: {message}")


def load_json(path: str | Path) -> object:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def save_json(path: str | Path, payload: object) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def _expect_keys(obj, required, path, where):
    if not isinstance(obj, dict):
        raise _fail(path, where, "expected an object")
    missing = [k for k in required if k not in obj]
    if missing:
        raise _fail(path, where, f"missing keys {missing}")


def _cause_names(obj, path) -> list[str]:
    _expect_keys(obj, ["causes"], path, "$")
    causes = obj["causes"]
    if (
        not isinstance(causes, list)
        or not causes
        or len(set(causes)) != len(causes)
        or not all(isinstance(c, str) for c in causes)
    ):
        raise _fail(path, "causes", "expected a non-empty list of distinct names")
    return causes


def _indices(names, causes, path, where) -> tuple[int, ...]:
    if not isinstance(names, list):
        raise _fail(path, where, "expected a list of cause names")
    out = []
    for name in names:
        if name not in causes:
            raise _fail(path, where, f"unknown cause {name!r}")
        out.append(causes.index(name))
    return tuple(out)


# ---------------------------------------------------------------------------
# graphs and structures
# ---------------------------------------------------------------------------


def save_graph(path: str | Path, graph: GraphSpec, causes: Sequence[str] | None = None) -> None:
    causes = list(causes) if causes else [f"X{i + 1}" for i in range(graph.n_causes)]
    payload = {
        "causes": causes,
        "directed_edges": sorted([causes[a], causes[b]] for a, b in graph.directed_edges),
        "confounder_pairs": sorted([causes[a], causes[b]] for a, b in graph.confounder_edges),
        "y_parents": sorted(causes[v] for v in graph.y_parents)
        if graph.y_parents is not None
        else None,
    }
    save_json(path, payload)


def load_graph(path: str | Path) -> tuple[GraphSpec, list[str]]:
    obj = load_json(path)
    causes = _cause_names(obj, path)
    _expect_keys(obj, ["directed_edges", "confounder_pairs"], path, "$")
    directed = frozenset(
        _indices(edge, causes, path, f"directed_edges[{i}]")
        for i, edge in enumerate(obj["directed_edges"])
    )
    conf = frozenset(
        _indices(pair, causes, path, f"confounder_pairs[{i}]")
        for i, pair in enumerate(obj["confounder_pairs"])
    )
    if any(len(e) != 2 for e in directed | conf):
        raise _fail(path, "edges", "every edge needs exactly two endpoints")
    y_parents = obj.get("y_parents")
    parents = _indices(y_parents, causes, path, "y_parents") if y_parents is not None else None
    try:
        graph = GraphSpec(len(causes), directed, conf, parents)
    except Exception as exc:
        raise _fail(path, "$", str(exc)) from exc
    return graph, causes


def save_structure(path: str | Path, template: StructureTemplate) -> None:
    causes = [f"X{i + 1}" for i in range(template.n_causes)]
    save_json(
        path,
        {
            "causes": causes,
            "confounder_groups": [[causes[v] for v in g] for g in template.confounders],
            "directed_edges": [[causes[a], causes[b]] for a, b in template.directed_edges],
        },
    )


def load_structure(path: str | Path) -> StructureTemplate:
    obj = load_json(path)
    causes = _cause_names(obj, path)
    _expect_keys(obj, ["confounder_groups", "directed_edges"], path, "$")
    groups = tuple(
        _indices(g, causes, path, f"confounder_groups[{i}]")
        for i, g in enumerate(obj["confounder_groups"])
    )
    edges = []
    for i, edge in enumerate(obj["directed_edges"]):
        pair = _indices(edge, causes, path, f"directed_edges[{i}]")
        if len(pair) != 2:
            raise _fail(path, f"directed_edges[{i}]", "expected two endpoints")
        edges.append(pair)
    try:
        return StructureTemplate(len(causes), groups, tuple(edges))
    except Exception as exc:
        raise _fail(path, "$", str(exc)) from exc


# ---------------------------------------------------------------------------
# constraints
# ---------------------------------------------------------------------------


def _config_to_bits(cfg: tuple[int, ...]) -> str:
    return "".join(str(v) for v in cfg)


def _bits_to_config(bits: str, width: int, path, where) -> tuple[int, ...]:
    if len(bits) != width or any(ch not in "01" for ch in bits):
        raise _fail(path, where, f"expected a bitstring of length {width}")
    return tuple(int(ch) for ch in bits)


def constraint_to_dict(spec: ConstraintSpec, causes: Sequence[str]) -> dict:
    if spec.kind is ConstraintKind.MARGINAL and spec.statistic.scope:
        raise SchemaError("marginal constraints with scoped statistics are not serializable")
    return {
        "kind": spec.kind.value,
        "cond_set": [causes[v] for v in spec.cond_set],
        "int_set": [causes[v] for v in spec.int_set],
        "targets": {
            _config_to_bits(cfg): spec.targets[cfg] for cfg in sorted(spec.targets)
        },
    }


def constraint_from_dict(obj, causes, path, where) -> ConstraintSpec:
    _expect_keys(obj, ["kind", "targets"], path, where)
    kind = obj["kind"]
    if kind not in {k.value for k in ConstraintKind}:
        raise _fail(path, f"{where}.kind", f"unknown constraint kind {kind!r}")
    cond = _indices(obj.get("cond_set", []), causes, path, f"{where}.cond_set")
    intv = _indices(obj.get("int_set", []), causes, path, f"{where}.int_set")
    scope = tuple(sorted(cond + intv))
    targets = {}
    raw = obj["targets"]
    if not isinstance(raw, dict):
        raise _fail(path, f"{where}.targets", "expected an object of bitstring -> value")
    for bits, value in raw.items():
        cfg = _bits_to_config(bits, len(scope), path, f"{where}.targets[{bits!r}]")
        if not isinstance(value, (int, float)):
            raise _fail(path, f"{where}.targets[{bits!r}]", "expected a number")
        targets[cfg] = float(value)
    try:
        return ConstraintSpec(ConstraintKind(kind), cond, intv, targets)
    except Exception as exc:
        raise _fail(path, where, str(exc)) from exc


def save_constraints(path, constraints: Sequence[ConstraintSpec], causes: Sequence[str]) -> None:
    save_json(
        path,
        {
            "causes": list(causes),
            "constraints": [constraint_to_dict(c, causes) for c in constraints],
        },
    )


def load_constraints(path) -> tuple[list[ConstraintSpec], list[str]]:
    obj = load_json(path)
    causes = _cause_names(obj, path)
    _expect_keys(obj, ["constraints"], path, "$")
    specs = [
        constraint_from_dict(c, causes, path, f"constraints[{i}]")
        for i, c in enumerate(obj["constraints"])
    ]
    return specs, causes


# ---------------------------------------------------------------------------
# joints, marginals, datasets
# ---------------------------------------------------------------------------


def save_joint(path, p: JointTable, causes: Sequence[str]) -> None:
    save_json(path, {"causes": list(causes), "probs": p.probs.tolist()})


def load_joint(path) -> tuple[JointTable, list[str]]:
    obj = load_json(path)
    causes = _cause_names(obj, path)
    _expect_keys(obj, ["probs"], path, "$")
    probs = obj["probs"]
    if not isinstance(probs, list) or len(probs) != 1 << len(causes):
        raise _fail(path, "probs", f"expected {1 << len(causes)} entries")
    try:
        return JointTable(len(causes), np.array(probs, dtype=float)), causes
    except Exception as exc:
        raise _fail(path, "probs", str(exc)) from exc


def save_marginals(path, marginals: Sequence[float], causes: Sequence[str]) -> None:
    save_json(path, {"causes": list(causes), "marginals": [float(m) for m in marginals]})


def load_marginals(path) -> tuple[list[float], list[str]]:
    obj = load_json(path)
    causes = _cause_names(obj, path)
    _expect_keys(obj, ["marginals"], path, "$")
    ms = obj["marginals"]
    if not isinstance(ms, list) or len(ms) != len(causes):
        raise _fail(path, "marginals", "expected one value per cause")
    return [float(m) for m in ms], causes


def save_dataset(path, ds: Dataset) -> None:
    payload = {
        "columns": list(ds.columns),
        "intervention": None
        if ds.intervention is None
        else {
            "vars": [ds.columns[v] for v in ds.intervention.vars],
            "values": list(ds.intervention.values),
        },
        "rows": ds.rows.tolist(),
    }
    save_json(path, payload)


def load_dataset(path) -> Dataset:
    obj = load_json(path)
    _expect_keys(obj, ["columns", "rows"], path, "$")
    columns = obj["columns"]
    intervention = None
    if obj.get("intervention") is not None:
        raw = obj["intervention"]
        _expect_keys(raw, ["vars", "values"], path, "intervention")
        vars = _indices(raw["vars"], columns, path, "intervention.vars")
        pairs = sorted(zip(vars, raw["values"]))
        intervention = Config(
            tuple(v for v, _ in pairs), tuple(int(x) for _, x in pairs)
        )
    try:
        return Dataset(tuple(columns), np.array(obj["rows"], dtype=np.int8), intervention)
    except Exception as exc:
        raise _fail(path, "rows", str(exc)) from exc


# ---------------------------------------------------------------------------
# fitted models and reports
# ---------------------------------------------------------------------------


def save_model(path, model: ConditionalModel, causes: Sequence[str]) -> None:
    manifest = [
        {"constraint": i, "config": _config_to_bits(cfg)}
        for i, cfg in lambda_manifest(model.constraints)
    ]
    save_json(
        path,
        {
            "causes": list(causes),
            "constraints": [constraint_to_dict(c, causes) for c in model.constraints],
            "lambda_manifest": manifest,
            "lambda": model.lam.tolist(),
            "beta": model.log_norm.tolist(),
        },
    )


def load_model(path) -> tuple[ConditionalModel, list[str]]:
    from .core import normalize

    obj = load_json(path)
    causes = _cause_names(obj, path)
    _expect_keys(obj, ["constraints", "lambda", "beta"], path, "$")
    specs = [
        constraint_from_dict(c, causes, path, f"constraints[{i}]")
        for i, c in enumerate(obj["constraints"])
    ]
    lam = np.array(obj["lambda"], dtype=float)
    model = normalize(specs, lam, len(causes))
    beta = np.array(obj["beta"], dtype=float)
    if beta.shape != model.log_norm.shape or not np.allclose(beta, model.log_norm, atol=1e-9):
        raise _fail(path, "beta", "normalizer table does not match the stored multipliers")
    return model, causes


def save_report(path, report: FitReport) -> None:
    save_json(
        path,
        {
            "residual_norm": report.residual_norm,
            "restarts": report.restarts,
            "converged": report.converged,
            "conditional_entropy": report.conditional_entropy,
        },
    )


# ---------------------------------------------------------------------------
# result CSVs
# ---------------------------------------------------------------------------


def write_csv(path, header: Sequence[str], rows: Sequence[Mapping]) -> None:
    """Result table with a fixed column order and repr-exact floats."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([repr(row[k]) if isinstance(row[k], float) else row[k] for k in header])


def read_csv(path) -> list[dict]:
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))
