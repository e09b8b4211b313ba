"""CSV and JSON renderings of scan results.

Both writers are pure functions of their input, so identical scans give
byte-identical text.  Floats use the shortest round-trip repr; non-finite
values become ``nan`` in CSV and ``null`` in JSON.
"""
from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from su11squeeze._version import __version__
from su11squeeze.scan import Profile, RegionMap

SCHEMA_VERSION = 1
CSV_COLUMNS = ["axis1", "axis2", "f_x", "f_y", "mask_x", "mask_y", "error_code"]
ANGLE_AXES = {"phi"}


def _num(x) -> str:
    x = float(x)
    return repr(x) if math.isfinite(x) else "nan"


def _json_num(x):
    x = float(x)
    return x if math.isfinite(x) else None


def _json_array(a):
    a = np.asarray(a)
    if a.dtype == object:
        return a.tolist()
    if np.issubdtype(a.dtype, np.integer):
        return a.astype(int).tolist()
    if a.ndim == 0:
        return _json_num(a)
    return [_json_array(row) if np.ndim(row) else _json_num(row) for row in a]


def _rows(result):
    """(axis1, axis2, i-th values...) rows in row-major order over axis1."""
    if isinstance(result, Profile):
        for j, v in enumerate(result.values):
            yield (result.fixed_value, v, result.fx[j], result.fy[j], result.sign_mask_x[j], result.sign_mask_y[j], result.error_code[j])
        return
    a1, a2 = result.axis1, result.axis2
    for i in range(len(a1)):
        for j in range(len(a2)):
            yield (
                a1[i], a2[j], result.fx[i, j], result.fy[i, j],
                result.sign_mask_x[i, j], result.sign_mask_y[i, j], result.error_code[i, j],
            )


def _axis_names(result):
    return result.grid.axis1.name, result.grid.axis2.name


def to_csv(result, pi_units: bool = False) -> str:
    """CSV table; ``pi_units`` appends angle columns expressed in units of pi."""
    names = _axis_names(result)
    extra = [n for n in names if n in ANGLE_AXES] if pi_units else []
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS + ["axis%d_pi" % (names.index(n) + 1) for n in extra])
    for a1, a2, fx, fy, mx, my, code in _rows(result):
        row = [_num(a1), _num(a2), _num(fx), _num(fy), mx, my, str(int(code))]
        for n in extra:
            row.append(_num((a1 if names.index(n) == 0 else a2) / math.pi))
        writer.writerow(row)
    return buf.getvalue()


def _contours(polylines):
    return [[[_json_num(p[0]), _json_num(p[1])] for p in line] for line in polylines]


def to_document(result) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool_version": __version__,
        "path": result.path,
        "grid": result.grid.as_dict(),
    }
    if isinstance(result, Profile):
        doc.update(
            kind="profile",
            fixed={result.fixed_axis: result.fixed_value},
            axis=result.axis,
            values=_json_array(result.values),
            f_x=_json_array(result.fx),
            f_y=_json_array(result.fy),
            mask_x=_json_array(result.sign_mask_x),
            mask_y=_json_array(result.sign_mask_y),
            error_code=_json_array(result.error_code),
            crossings_x=[_json_num(v) for v in result.crossings_x],
            crossings_y=[_json_num(v) for v in result.crossings_y],
        )
        return doc
    doc.update(
        kind="region_map",
        axis1=_json_array(result.axis1),
        axis2=_json_array(result.axis2),
        f_x=_json_array(result.fx),
        f_y=_json_array(result.fy),
        mask_x=_json_array(result.sign_mask_x),
        mask_y=_json_array(result.sign_mask_y),
        error_code=_json_array(result.error_code),
        contours_x=_contours(result.contours_x),
        contours_y=_contours(result.contours_y),
    )
    return doc


def to_json(result) -> str:
    return json.dumps(to_document(result), sort_keys=True, allow_nan=False, separators=(",", ":")) + "\n"


def render(result, fmt: str, pi_units: bool = False) -> str:
    if fmt == "csv":
        return to_csv(result, pi_units)
    if fmt == "json":
        return to_json(result)
    raise ValueError("format must be csv or json")


__all__ = ["CSV_COLUMNS", "SCHEMA_VERSION", "render", "to_csv", "to_document", "to_json", "RegionMap", "Profile"]
