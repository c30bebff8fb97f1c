"""File formats: regions as binary PGM (P5) plus a JSON sidecar, sampled
functions as CSV or flat binary with a sidecar, grids from JSON configs.

The sidecar carries everything needed to reconstruct the grid: window bounds,
cell counts, the space model flag, and (for regions) the kind tag.
"""

import json
from pathlib import Path

import numpy as np

from .errors import BadConfigError, BadRegionFileError
from .functions import SampledFunction
from .grid import COMPACT, OPEN, GridSpec, Region


def _sidecar_path(path):
    return Path(path).with_suffix(".json")


def grid_to_dict(grid):
    d = {
        "x_min": grid.x_min,
        "x_max": grid.x_max,
        "y_min": grid.y_min,
        "y_max": grid.y_max,
        "nx": grid.nx,
        "ny": grid.ny,
        "window_is_space": grid.window_is_space,
    }
    if grid.mask is not None:
        d["shape"] = "disk"
    return d


def grid_from_dict(d):
    try:
        shape = d.get("shape", "rect")
        if shape == "disk":
            n = int(d["nx"])
            radius = float(d.get("x_max", 1.0))
            return GridSpec.disk(n, radius)
        if shape not in ("rect", "plane"):
            raise BadConfigError(f"unknown grid shape {shape!r}")
        return GridSpec(
            float(d["x_min"]),
            float(d["x_max"]),
            float(d["y_min"]),
            float(d["y_max"]),
            int(d["nx"]),
            int(d["ny"]),
            bool(d["window_is_space"]),
        )
    except (KeyError, TypeError, ValueError) as e:
        raise BadConfigError(f"bad grid config: {e}") from e


def load_grid_config(path):
    with open(path) as fh:
        return grid_from_dict(json.load(fh))


# region files --------------------------------------------------------------


def write_region(region, path):
    """P5 PGM (255 = in the set) plus JSON sidecar next to it."""
    path = Path(path)
    data = np.where(region.cells, 255, 0).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(b"P5\n%d %d\n255\n" % (region.grid.nx, region.grid.ny))
        fh.write(data.tobytes())
    side = grid_to_dict(region.grid)
    side["kind"] = region.kind
    with open(_sidecar_path(path), "w") as fh:
        json.dump(side, fh, indent=1)
    return path


def read_region(path, grid=None):
    path = Path(path)
    try:
        with open(path, "rb") as fh:
            magic = fh.readline().strip()
            if magic != b"P5":
                raise BadRegionFileError(f"{path}: not a binary PGM")
            dims = fh.readline().split()
            while dims and dims[0].startswith(b"#"):
                dims = fh.readline().split()
            w, h = int(dims[0]), int(dims[1])
            maxval = int(fh.readline())
            if maxval > 255:
                raise BadRegionFileError("16-bit PGM not supported")
            raw = fh.read(w * h)
            if len(raw) != w * h:
                raise BadRegionFileError(f"{path}: truncated pixel data")
        cells = np.frombuffer(raw, dtype=np.uint8).reshape(h, w) > 127
        with open(_sidecar_path(path)) as fh:
            side = json.load(fh)
        kind = side.get("kind")
        if kind not in (OPEN, COMPACT):
            raise BadRegionFileError(f"{path}: sidecar kind missing or invalid")
        g = grid if grid is not None else grid_from_dict(side)
        if (g.ny, g.nx) != (h, w):
            raise BadRegionFileError(f"{path}: pixel dims disagree with grid")
        return Region(cells, kind, g)
    except BadRegionFileError:
        raise
    except (OSError, ValueError, IndexError, json.JSONDecodeError) as e:
        raise BadRegionFileError(f"{path}: {e}") from e


# function files ------------------------------------------------------------


def write_function_csv(f, path):
    g = f.grid
    X, Y = g.cell_centers()
    with open(path, "w") as fh:
        fh.write("x,y,value\n")
        for iy in range(g.ny):
            for ix in range(g.nx):
                fh.write(f"{X[iy, ix]!r},{Y[iy, ix]!r},{f.values[iy, ix]!r}\n")
    return Path(path)


def read_function_csv(path, grid):
    vals = np.zeros(grid.shape)
    with open(path) as fh:
        header = fh.readline()
        if not header.lower().startswith("x,y,value"):
            raise BadConfigError(f"{path}: expected x,y,value header")
        for line in fh:
            if not line.strip():
                continue
            xs, ys, vs = line.split(",")
            iy, ix = grid.cell_of(float(xs), float(ys))
            vals[iy, ix] = float(vs)
    return SampledFunction(vals, grid)


def write_function_binary(f, path):
    """Row-major little-endian float64 raw grid plus sidecar."""
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(f.values.astype("<f8").tobytes())
    side = grid_to_dict(f.grid)
    side["dtype"] = "<f8"
    with open(_sidecar_path(path), "w") as fh:
        json.dump(side, fh, indent=1)
    return path


def read_function_binary(path, grid=None):
    path = Path(path)
    with open(_sidecar_path(path)) as fh:
        side = json.load(fh)
    g = grid if grid is not None else grid_from_dict(side)
    raw = np.fromfile(path, dtype=side.get("dtype", "<f8"))
    if raw.size != g.nx * g.ny:
        raise BadConfigError(f"{path}: value count disagrees with grid")
    return SampledFunction(raw.reshape(g.shape), g)
