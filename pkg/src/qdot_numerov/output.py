"""CSV/JSON emission with embedded run metadata.

CSV files start with ``# key: value`` metadata lines, then a header row and
data rows.  Output is byte-for-byte deterministic for identical input.
"""
from __future__ import annotations

import contextlib
import json
import sys

import numpy as np

from . import __version__
from .numerov import INWARD_SEED, RESCALE_THRESHOLD, SERIES_MATCH_INDEX
from .solver import DEFECT_TOL, ENERGY_RTOL, SCAN_RESOLUTION

FORMATS = ("csv", "json")

SOLVER_SETTINGS = {
    "outward_seed": f"regular Frobenius solution (ell=0: back-propagated from index "
                    f"{SERIES_MATCH_INDEX})",
    "inward_seed": f"u(r_max)={INWARD_SEED:g}, ratio exp(omega*r_max*step)",
    "matching": "grid index nearest the outermost turning point",
    "rescale_threshold": f"{RESCALE_THRESHOLD:g}",
    "scan_resolution": str(SCAN_RESOLUTION),
    "defect_tolerance": f"{DEFECT_TOL:g}",
    "energy_rtol": f"{ENERGY_RTOL:g}",
}


def energy(x) -> str:
    """Energies go out with 6 significant figures."""
    return f"{x:.6g}"


def sample(x) -> str:
    return f"{x:.14e}"


def grid_metadata(grid) -> dict:
    return {"r_min": f"{grid.r_min:.10g}", "r_max": f"{grid.r_max:.10g}",
            "step": f"{grid.step:.10g}", "n_points": str(grid.n_points)}


def result_metadata(result) -> dict:
    p = result.problem
    meta = {
        "artifact_version": __version__,
        "omega": f"{p.omega:.10g}",
        "ell": str(p.ell),
        "coulomb": str(p.coulomb_enabled).lower(),
        "eta": energy(result.eta),
        "node_count": str(result.node_count),
        "defect_residual": f"{result.defect_residual:.3e}",
        "iterations": str(result.iterations),
        "match_radius": f"{result.grid.radii[result.match_index]:.10g}",
    }
    meta.update(grid_metadata(result.grid))
    return meta


@contextlib.contextmanager
def _open(path):
    if path is None or str(path) == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _csv_header(fh, metadata):
    for key, value in metadata.items():
        fh.write(f"# {key}: {value}\n")


def write_table(path, fmt, metadata: dict, columns, rows):
    """Write string-valued ``rows`` under ``columns``; ``fmt`` is csv or json."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}")
    with _open(path) as fh:
        if fmt == "csv":
            _csv_header(fh, metadata)
            fh.write(",".join(columns) + "\n")
            for row in rows:
                fh.write(",".join(str(v) for v in row) + "\n")
        else:
            doc = {"metadata": metadata, "columns": list(columns),
                   "rows": [dict(zip(columns, (str(v) for v in row))) for row in rows]}
            fh.write(json.dumps(doc, indent=1) + "\n")


def emit_wavefunction(result, path, fmt="csv", metadata=None):
    """Write the converged state's samples as ``r,u`` with 15 significant digits."""
    meta = result_metadata(result)
    meta.update(SOLVER_SETTINGS)
    if metadata:
        meta.update(metadata)
    wf = result.wavefunction
    r, u = wf.grid.radii, wf.values
    if fmt == "csv":
        write_table(path, "csv", meta, ("r", "u"),
                    ((sample(a), sample(b)) for a, b in zip(r, u)))
    elif fmt == "json":
        with _open(path) as fh:
            doc = {"metadata": meta, "r": [float(sample(a)) for a in r],
                   "u": [float(sample(b)) for b in u]}
            fh.write(json.dumps(doc) + "\n")
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_wavefunction(path):
    """Inverse of :func:`emit_wavefunction`: returns (metadata, r, u)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        return doc["metadata"], np.asarray(doc["r"]), np.asarray(doc["u"])
    meta, rows = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif line and line[0] not in "ru":
            rows.append([float(x) for x in line.split(",")])
    data = np.asarray(rows)
    return meta, data[:, 0], data[:, 1]


def read_table(path):
    """Parse a CSV or JSON table written by :func:`write_table` into (metadata, list of dicts)."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        return doc["metadata"], doc["rows"]
    meta, lines = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            meta[key.strip()] = value.strip()
        elif line:
            lines.append(line.split(","))
    header, body = lines[0], lines[1:]
    return meta, [dict(zip(header, row)) for row in body]
