"""Reading and writing point clouds as whitespace XYZ or ASCII PLY.

XYZ lines carry "x y z" or "x y z nx ny nz"; '#' starts a comment.  PLY is
the standard ASCII variant with float x y z and optional nx ny nz; binary
PLY is rejected.  All numeric output uses 17 significant digits so
round-trips are lossless at double precision.
"""

from __future__ import annotations

import os

import numpy as np

from .errors import NormalNotUnit, ParseError
from .geometry import PointCloud, angles_unoriented

_FMT = "%.17g"


def _finish_cloud(points, normals, path):
    if not points:
        raise ParseError(f"{path}: no points found")
    pts = np.asarray(points, dtype=np.float64)
    nrm = None
    if normals:
        if len(normals) != len(points):
            raise ParseError(f"{path}: some lines have normals and some do not")
        nrm = np.asarray(normals, dtype=np.float64)
        lens = np.linalg.norm(nrm, axis=1)
        if np.any(np.abs(lens - 1.0) > 1e-3):
            bad = int(np.argmax(np.abs(lens - 1.0)))
            raise NormalNotUnit(f"{path}: normal {bad} has norm {lens[bad]:.6g}")
        nrm = nrm / lens[:, None]
    return PointCloud(points=pts, normals=nrm)


def read_xyz(path) -> PointCloud:
    points, normals = [], []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (3, 6):
                raise ParseError(f"expected 3 or 6 values, got {len(parts)}", line=lineno)
            try:
                vals = [float(x) for x in parts]
            except ValueError:
                raise ParseError(f"non-numeric value in {line!r}", line=lineno)
            points.append(vals[:3])
            if len(vals) == 6:
                normals.append(vals[3:])
            elif normals:
                raise ParseError("line without normal after lines with normals", line=lineno)
    return _finish_cloud(points, normals, path)


def write_xyz(cloud: PointCloud, path) -> None:
    with open(path, "w") as fh:
        for i in range(len(cloud)):
            row = [_FMT % v for v in cloud.points[i]]
            if cloud.normals is not None:
                row += [_FMT % v for v in cloud.normals[i]]
            fh.write(" ".join(row) + "\n")


def _error_colors(normals, reference_normals):
    """Red-blue ramp on the unoriented angle error: 0 deg = blue, 90 = red."""
    err = angles_unoriented(normals, reference_normals)
    frac = np.clip(err / 90.0, 0.0, 1.0)
    red = np.rint(255 * frac).astype(int)
    blue = np.rint(255 * (1.0 - frac)).astype(int)
    return red, np.zeros(len(err), dtype=int), blue


def write_ply(cloud: PointCloud, path, reference_normals=None) -> None:
    """Write ASCII PLY; when reference normals are given, vertices are
    colored by normal-angle error (blue = 0, red = 90 degrees)."""
    color = None
    if reference_normals is not None:
        if cloud.normals is None:
            raise ValueError("cloud has no normals to compare against the reference")
        color = _error_colors(cloud.normals, np.asarray(reference_normals, dtype=np.float64))
    with open(path, "w") as fh:
        fh.write("ply\nformat ascii 1.0\n")
        fh.write(f"element vertex {len(cloud)}\n")
        fh.write("property float x\nproperty float y\nproperty float z\n")
        if cloud.normals is not None:
            fh.write("property float nx\nproperty float ny\nproperty float nz\n")
        if color is not None:
            fh.write("property uchar red\nproperty uchar green\nproperty uchar blue\n")
        fh.write("end_header\n")
        for i in range(len(cloud)):
            row = [_FMT % v for v in cloud.points[i]]
            if cloud.normals is not None:
                row += [_FMT % v for v in cloud.normals[i]]
            if color is not None:
                row += [str(c[i]) for c in color]
            fh.write(" ".join(row) + "\n")


def read_ply(path) -> PointCloud:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != "ply":
        raise ParseError(f"{path}: missing 'ply' magic", line=1)
    n_vertex = None
    props = []
    body_start = None
    in_vertex_element = False
    for i, line in enumerate(lines[1:], start=2):
        tok = line.split()
        if not tok:
            continue
        if tok[0] == "format":
            if tok[1] != "ascii":
                raise ParseError(f"unsupported PLY format {tok[1]!r} (ASCII only)", line=i)
        elif tok[0] == "element":
            in_vertex_element = tok[1] == "vertex"
            if in_vertex_element:
                n_vertex = int(tok[2])
        elif tok[0] == "property" and in_vertex_element:
            props.append(tok[2])
        elif tok[0] == "end_header":
            body_start = i
            break
    if n_vertex is None or body_start is None:
        raise ParseError(f"{path}: incomplete PLY header")
    for name in ("x", "y", "z"):
        if name not in props:
            raise ParseError(f"{path}: vertex property {name!r} missing")
    has_normals = all(n in props for n in ("nx", "ny", "nz"))
    col = {name: props.index(name) for name in props}
    points, normals = [], []
    body = [ln for ln in lines[body_start:] if ln.strip()]
    if len(body) < n_vertex:
        raise ParseError(f"{path}: header declares {n_vertex} vertices, found {len(body)}")
    for j in range(n_vertex):
        vals = body[j].split()
        if len(vals) < len(props):
            raise ParseError("vertex line too short", line=body_start + 1 + j)
        points.append([float(vals[col[n]]) for n in ("x", "y", "z")])
        if has_normals:
            normals.append([float(vals[col[n]]) for n in ("nx", "ny", "nz")])
    return _finish_cloud(points, normals, path)


def read_cloud(path) -> PointCloud:
    """Dispatch on extension: .ply goes to the PLY reader, anything else XYZ."""
    if os.path.splitext(str(path))[1].lower() == ".ply":
        return read_ply(path)
    return read_xyz(path)


def write_cloud(cloud: PointCloud, path, reference_normals=None) -> None:
    if os.path.splitext(str(path))[1].lower() == ".ply":
        write_ply(cloud, path, reference_normals=reference_normals)
    else:
        write_xyz(cloud, path)
