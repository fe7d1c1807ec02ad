import json

import numpy as np
import pytest

import membrane_eig as me


def build_stretch_scene(directory, nx=10, ny=10, stretch=1.5, mu=1.0):
    """Write a quad-split square sheet scene with two opposite edges pinned
    at ``stretch`` times their rest separation.  Returns the scene path."""
    rest, tris = me.grid_mesh(nx, ny)
    me.save_obj(directory / "sheet.obj", rest, tris)
    shift = (stretch - 1.0) / 2.0
    pins = []
    for j in range(ny + 1):
        for i in (0, nx):
            v = i + j * (nx + 1)
            target = [stretch * rest[v][0] - shift, float(rest[v][1]), 0.0]
            pins.append({"vertex": v, "target": target})
    scene = {
        "mesh": "sheet.obj",
        "model": {"type": "neo_hookean_sheet", "mu": mu},
        "pins": pins,
        "tol": 1e-8,
        "max_iters": 100,
        "output_dir": "out",
    }
    path = directory / "stretch.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(scene, fh, indent=2)
    return path


@pytest.fixture
def stretch_scene(tmp_path):
    return build_stretch_scene(tmp_path)


@pytest.fixture
def diag21():
    """The recurring worked example: F with sigma = (2, 1), U = V = Id."""
    f = np.array([[2.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
    return f, me.svd32(f)
