"""Writes the synthetic landmark sequence bundled under data/house_synthetic.

Thirty corners and feature points of a toy house are projected through a
pinhole camera that orbits the model by a small angle per frame, then rounded
to tenths of a pixel. The result mimics a hand-labelled landmark sequence in
pixel units and is fully deterministic.
"""
import argparse
from pathlib import Path

import numpy as np


def house_points() -> np.ndarray:
    # walls: a 4 x 3 x 3 box, roof ridge above the long axis
    box = [(x, y, z) for x in (-2.0, 2.0) for y in (-1.5, 1.5) for z in (0.0, 3.0)]
    ridge = [(-2.0, 0.0, 4.5), (2.0, 0.0, 4.5)]
    door = [(-0.5, -1.5, 0.0), (0.5, -1.5, 0.0), (-0.5, -1.5, 2.0), (0.5, -1.5, 2.0)]
    windows = []
    for cx in (-1.3, 1.3):
        for dx in (-0.35, 0.35):
            for z in (1.4, 2.3):
                windows.append((cx + dx, -1.5, z))
    side = [(-2.0, -0.6, 1.5), (-2.0, 0.6, 1.5), (-2.0, -0.6, 2.4), (-2.0, 0.6, 2.4)]
    chimney = [(1.0, 0.6, 4.6), (1.4, 0.6, 4.6)]
    vents = [(-2.0, 0.0, 3.8), (2.0, 0.0, 3.8)]
    pts = np.array(box + ridge + door + windows + side + chimney + vents, dtype=float)
    assert pts.shape == (30, 3), pts.shape
    return pts


def project(points: np.ndarray, yaw: float) -> np.ndarray:
    c, s = np.cos(yaw), np.sin(yaw)
    rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    world = points @ rot.T
    # camera 12 units in front of the house, looking along +y, slightly above
    cam = world - np.array([0.0, -12.0, 2.0])
    depth = cam[:, 1]
    focal = 800.0
    u = 320.0 + focal * cam[:, 0] / depth
    v = 240.0 - focal * cam[:, 2] / depth
    return np.round(np.stack([u, v], axis=1), 1)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parents[1] / "data" / "house_synthetic")
    parser.add_argument("--frames", type=int, default=5)
    parser.add_argument("--step-deg", type=float, default=1.5)
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    pts = house_points()
    for f in range(args.frames):
        uv = project(pts, np.deg2rad(-10.0 + args.step_deg * f))
        lines = [f"# synthetic house landmarks, frame {f}, pixel units"]
        lines += [f"{x:.1f},{y:.1f}" for x, y in uv]
        (args.out / f"frame_{f:03d}.csv").write_text("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
