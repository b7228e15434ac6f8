"""JSON and CSV formats shared by the library and the command line."""

import csv
import io as _io
import json
import math

import numpy as np

from .dynamics import DiagonalSpec, FlowReport, GeneratorSpec, Group
from .errors import InputError
from .krein_core import KreinSpace


def matrix_to_json(M):
    M = np.atleast_2d(np.asarray(M, dtype=complex))
    return {
        "rows": int(M.shape[0]),
        "cols": int(M.shape[1]),
        "re": M.real.tolist(),
        "im": M.imag.tolist(),
    }


def matrix_from_json(obj):
    try:
        rows, cols = int(obj["rows"]), int(obj["cols"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj.get("im", np.zeros((rows, cols))), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed matrix object: {exc}") from exc
    if re.shape != (rows, cols) or im.shape != (rows, cols):
        raise InputError(f"matrix entries do not match declared shape {rows}x{cols}")
    M = re + 1j * im
    if not np.all(np.isfinite(M)):
        raise InputError("matrix has non-finite entries")
    return M


def space_to_json(space):
    return {"dim": space.dim, "gram": matrix_to_json(space.gram), "tol": space.tol}


def space_from_json(obj):
    try:
        gram = matrix_from_json(obj["gram"])
        tol = float(obj.get("tol", 1e-9))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed space object: {exc}") from exc
    if "dim" in obj and int(obj["dim"]) != gram.shape[0]:
        raise InputError(f"dim {obj['dim']} does not match gram of size {gram.shape[0]}")
    return KreinSpace(gram, tol)


def decomposition_to_json(decomp):
    out = space_to_json(decomp.space)
    out.update(
        basis_plus=matrix_to_json(decomp.basis_plus),
        basis_minus=matrix_to_json(decomp.basis_minus),
        J=matrix_to_json(decomp.J),
    )
    return out


def theta_report_to_json(report):
    return {k: clean(v) for k, v in report.to_dict().items()}


def spec_to_json(spec):
    if isinstance(spec, DiagonalSpec):
        lam = np.asarray(spec.lambdas)
        return {
            "kind": "diagonal",
            "basis": matrix_to_json(spec.basis),
            "lambdas": {"re": lam.real.tolist(), "im": lam.imag.tolist()},
        }
    if isinstance(spec, GeneratorSpec):
        return {"kind": "generator", "A": matrix_to_json(spec.A)}
    raise InputError(f"unknown spec type {type(spec).__name__}")


def spec_from_json(obj):
    try:
        kind = obj["kind"]
        if kind == "diagonal":
            lam = np.asarray(obj["lambdas"]["re"], dtype=float) + 1j * np.asarray(
                obj["lambdas"].get("im", [0.0] * len(obj["lambdas"]["re"])), dtype=float
            )
            return DiagonalSpec(matrix_from_json(obj["basis"]), lam)
        if kind == "generator":
            return GeneratorSpec(matrix_from_json(obj["A"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed spec object: {exc}") from exc
    raise InputError(f"unknown spec kind {kind!r}")


def group_to_json(group):
    return {"space": space_to_json(group.space), "spec": spec_to_json(group.spec), "alpha": group.alpha}


def group_from_json(obj):
    try:
        return Group(space_from_json(obj["space"]), spec_from_json(obj["spec"]), float(obj["alpha"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed group object: {exc}") from exc


def flow_report_csv(report: FlowReport):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(FlowReport.CSV_COLUMNS)
    for r in report.rows:
        w.writerow([fmt_float(getattr(r, c)) for c in FlowReport.CSV_COLUMNS])
    return buf.getvalue()


def basis_dump_csv(basis):
    """One row per grid point: ``x`` then real and imaginary parts of each function."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["x"]
    for n in range(len(basis.functions)):
        header += [f"re_{n}", f"im_{n}"]
    w.writerow(header)
    x = basis.functions[0].grid
    cols = [x]
    for f in basis.functions:
        cols += [f.values.real, f.values.imag]
    for row in zip(*cols):
        w.writerow([fmt_float(v) for v in row])
    return buf.getvalue()


def fmt_float(x):
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def clean(value):
    """Turn numpy scalars, arrays and complex numbers into plain JSON values."""
    if isinstance(value, dict):
        return {str(k): clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean(v) for v in value]
    if isinstance(value, np.ndarray):
        return clean(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": clean(value.real), "im": clean(value.imag)}
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else None
    return value


def dumps(obj):
    return json.dumps(clean(obj), indent=2, sort_keys=False, allow_nan=False) + "\n"
