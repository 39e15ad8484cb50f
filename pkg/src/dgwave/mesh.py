"""Periodic meshes of the unit interval."""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

DOMAIN_LENGTH = 1.0


@dataclass(frozen=True)
class PeriodicMesh1D:
    """Cells [x_j, x_j + h_j) with x_0 = 0 and the last cell wrapping to 1.

    ``nodes[j]`` is the left node of cell j; node n (= 1) is identified with node 0.
    ``meta`` records how the mesh was generated.
    """

    nodes: np.ndarray
    widths: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.nodes) != len(self.widths):
            raise ValueError("node count must equal cell count on a periodic mesh")
        if np.any(self.widths <= 0):
            raise ValueError("all cell widths must be positive")
        self.nodes.flags.writeable = False
        self.widths.flags.writeable = False

    @property
    def n_cells(self) -> int:
        return len(self.widths)

    @property
    def length(self) -> float:
        return DOMAIN_LENGTH

    @property
    def centers(self) -> np.ndarray:
        return self.nodes + 0.5 * self.widths

    @property
    def is_uniform(self) -> bool:
        return bool(np.allclose(self.widths, self.widths[0], rtol=0, atol=1e-14))

    def left(self, j: int) -> int:
        return (j - 1) % self.n_cells

    def right(self, j: int) -> int:
        return (j + 1) % self.n_cells

    def to_physical(self, j, s):
        """Map reference coordinate s in [-1, 1] of cell j to x."""
        return self.nodes[j] + 0.5 * self.widths[j] * (np.asarray(s) + 1.0)

    def locate(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Cell index and reference coordinate for points x (taken modulo 1)."""
        x = np.mod(np.asarray(x, dtype=float), DOMAIN_LENGTH)
        j = np.searchsorted(self.nodes, x, side="right") - 1
        j = np.clip(j, 0, self.n_cells - 1)
        s = 2.0 * (x - self.nodes[j]) / self.widths[j] - 1.0
        return j, s

    def write_csv(self, path) -> None:
        path = Path(path)
        with path.open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["j", "x_left", "h_j"])
            for j, (x, h) in enumerate(zip(self.nodes, self.widths)):
                w.writerow([j, f"{x:.17g}", f"{h:.17g}"])


def _from_nodes(nodes: np.ndarray, meta: dict) -> PeriodicMesh1D:
    widths = np.diff(np.append(nodes, DOMAIN_LENGTH))
    return PeriodicMesh1D(nodes, widths, meta)


def uniform_mesh(n_cells: int) -> PeriodicMesh1D:
    if n_cells < 2:
        raise ValueError(f"a periodic mesh needs at least 2 cells, got {n_cells}")
    h = DOMAIN_LENGTH / n_cells
    nodes = np.arange(n_cells) * h
    widths = np.full(n_cells, h)
    return PeriodicMesh1D(nodes, widths, {"kind": "uniform", "n_cells": n_cells})


def perturbed_mesh(n_cells: int, amplitude: float, seed: int) -> PeriodicMesh1D:
    """Uniform mesh with every interior node shifted by U[-amplitude*h, amplitude*h].

    x = 0 stays fixed.  Samples come from numpy's counter-based Philox
    generator so a seed reproduces the mesh on any platform.
    """
    if not 0 <= amplitude < 0.5:
        raise ValueError(f"perturbation amplitude must lie in [0, 0.5), got {amplitude}")
    if n_cells < 2:
        raise ValueError(f"a periodic mesh needs at least 2 cells, got {n_cells}")
    h = DOMAIN_LENGTH / n_cells
    nodes = np.arange(n_cells) * h
    rng = np.random.Generator(np.random.Philox(seed))
    shift = rng.uniform(-amplitude * h, amplitude * h, size=n_cells - 1)
    nodes[1:] += shift
    meta = {
        "kind": "perturbed",
        "n_cells": n_cells,
        "amplitude": amplitude,
        "seed": seed,
        "rng": "numpy.random.Philox",
    }
    return _from_nodes(nodes, meta)


def read_csv(path) -> PeriodicMesh1D:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    nodes = np.array([float(r["x_left"]) for r in rows])
    widths = np.array([float(r["h_j"]) for r in rows])
    return PeriodicMesh1D(nodes, widths, {"kind": "csv", "source": str(path)})
