"""Pointwise verification of the calibration argument for graphs.

The upward unit normal of a graph, extended by vertical translation, defines
an n-form omega(X_1, ..., X_n) = det(X_1, ..., X_n, N).  Two facts make
e^{-F} omega a weighted calibration of a weighted minimal graph:

* comass: |omega| <= 1 on unit frames, with equality exactly on tangent
  frames (Hadamard bound on determinants of unit vectors);
* closedness: d(e^{-F} omega) = div(e^{-F} N) dV, and
  div(e^{-F} N) = -e^{-F} H_F on the graph, so the form is closed precisely
  when the graph is weighted minimal.

Both are checked numerically here instead of reproducing the Stokes-theorem
area-minimization argument they feed into.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import Density
from .graph import GraphFunction, graph_curvature_samples
from .rng import DEFAULT_SEED, substream


@dataclass(frozen=True)
class ExtendedNormalField:
    """Upward unit graph normal, translated along the vertical axis.

    Evaluation takes ambient points (..., n+1) and ignores the last
    coordinate, so the field is vertical-translation invariant by
    construction.
    """

    graph: GraphFunction

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        base = x[..., :-1]
        g = self.graph.gradient(base)
        w = np.sqrt(1.0 + np.sum(g * g, axis=-1))
        return np.concatenate([-g, np.ones(g.shape[:-1] + (1,))], axis=-1) / w[..., None]


def extended_normal(u: GraphFunction) -> ExtendedNormalField:
    return ExtendedNormalField(u)


def frame_value(u: GraphFunction, point, frame) -> float:
    """omega(X_1, ..., X_n) = det(X_1, ..., X_n, N) at an ambient point."""
    nbar = extended_normal(u)(np.asarray(point, dtype=float))
    rows = np.vstack([np.asarray(frame, dtype=float), nbar])
    return float(np.linalg.det(rows))


def tangent_frame(u: GraphFunction, base_point) -> np.ndarray:
    """Orthonormal rows spanning the graph tangent space over a base point."""
    base_point = np.asarray(base_point, dtype=float)
    n = u.dimension
    g = u.gradient(base_point)
    tangents = np.hstack([np.eye(n), g[:, None]])  # rows (e_i, du_i)
    q, _ = np.linalg.qr(tangents.T)
    return q.T


def comass_check(
    u: GraphFunction,
    trials: int = 10_000,
    seed: int = DEFAULT_SEED,
    half_width: float = 2.0,
) -> float:
    """Max |omega| over seeded random ambient points and orthonormal frames.

    The Hadamard bound caps the value at 1; it is attained (to rounding)
    exactly when the frame spans the tangent space of the vertically
    translated graph.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = u.dimension
    rng = substream(seed, 0)
    base = rng.uniform(-half_width, half_width, size=(trials, n))
    z = rng.uniform(-1.0, 1.0, size=(trials, 1))
    pts = np.concatenate([base, z], axis=-1)
    normals = extended_normal(u)(pts)
    frames, _ = np.linalg.qr(rng.standard_normal((trials, n + 1, n)))
    mats = np.concatenate([frames, normals[:, :, None]], axis=2)
    return float(np.max(np.abs(np.linalg.det(mats))))


def weighted_normal_divergence(
    u: GraphFunction, dens: Density, x, step: float = 1e-4
) -> float:
    """Ambient divergence of e^{-F} N at x by central finite differences."""
    x = np.asarray(x, dtype=float)
    nbar = extended_normal(u)
    dim = x.size
    offsets = np.concatenate([step * np.eye(dim), -step * np.eye(dim)])
    pts = x + offsets
    vals = np.exp(-dens.log_weight(pts))[:, None] * nbar(pts)
    forward, backward = vals[:dim], vals[dim:]
    return float(np.trace(forward - backward) / (2.0 * step))


def closedness_residual(
    u: GraphFunction, dens: Density, x, step: float = 1e-4
) -> float:
    """div(e^{-F} N)(x) + e^{-F(x)} H_F at the graph point under x.

    Vanishes (to finite-difference accuracy) wherever the graph is weighted
    minimal; for densities that depend on the vertical coordinate the
    identity is exact on the graph itself.
    """
    x = np.asarray(x, dtype=float)
    div = weighted_normal_divergence(u, dens, x, step)
    base = x[:-1]
    _, _, hf = graph_curvature_samples(u, dens, base)
    return float(div + np.exp(-dens.log_weight(x)) * hf)
