"""JSON interchange for metrics, tensors and reports.

Conventions: multi-indices and tensor indices are 1-based in JSON (matching
the usual index notation for these metrics); all internal indexing is
0-based.  Serialization is deterministic: terms are sorted lexicographically
by multi-index, floats use the shortest round-trip representation.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .metric import LinearFormsMetric, PolynomialMetric, expand, make_bg3, make_bg4, make_product_metric

BUILTIN_TAGS = ("bg3", "bg4")


def make_builtin(tag: str) -> PolynomialMetric:
    if tag == "bg3":
        return make_bg3()
    if tag == "bg4":
        return make_bg4()
    raise ValueError(f"unknown builtin metric tag {tag!r}")


def metric_to_dict(metric: PolynomialMetric | LinearFormsMetric) -> dict[str, Any]:
    if isinstance(metric, LinearFormsMetric):
        return {
            "kind": "linear_forms",
            "n": metric.n,
            "forms": [[float(v) for v in row] for row in metric.forms],
        }
    return {
        "kind": "polynomial",
        "n": metric.n,
        "m": metric.m,
        "terms": [
            {"idx": [i + 1 for i in idx], "c": float(c)} for idx, c in sorted(metric.terms.items())
        ],
    }


def metric_from_dict(obj: Any) -> PolynomialMetric | LinearFormsMetric:
    if not isinstance(obj, dict):
        raise ValueError("metric definition must be a JSON object")
    kind = obj.get("kind")
    if kind == "linear_forms":
        return make_product_metric(obj["forms"])
    if kind == "polynomial":
        n, m = int(obj["n"]), int(obj["m"])
        terms: dict[tuple[int, ...], float] = {}
        for entry in obj["terms"]:
            idx = tuple(int(i) - 1 for i in entry["idx"])
            terms[idx] = terms.get(idx, 0.0) + float(entry["c"])
        return PolynomialMetric(n=n, m=m, terms=terms)
    raise ValueError(f"unknown metric kind {kind!r}")


def as_polynomial(metric: PolynomialMetric | LinearFormsMetric) -> PolynomialMetric:
    return expand(metric) if isinstance(metric, LinearFormsMetric) else metric


def tensor_to_dict(arr) -> dict[str, Any]:
    a = np.asarray(arr, dtype=float)
    return {"n": int(a.shape[0]) if a.ndim else 0, "order": int(a.ndim), "values": a.tolist()}


def index_1based(idx: tuple[int, ...]) -> list[int]:
    return [i + 1 for i in idx]


def dumps(obj: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(obj, indent=2)
    return json.dumps(obj, separators=(",", ":"))
