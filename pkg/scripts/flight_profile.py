"""Profile the streaming session along a camera descent.

Flies the camera from orbit down to near the surface on a log spiral of
altitudes, pushing every position through a real PlanetSession (tile
builds, scene placement, encoding included) and reports update timing
and payload volume. Use --lod-only to time the quadtree alone.

    python3 scripts/flight_profile.py configs/simple.json --steps 500
"""

import argparse
import sys
import time

import numpy as np

from planetgen.config import load_config
from planetgen.lod import CameraState, QuadTree
from planetgen.service import PlanetSession


def descent_positions(base_radius: float, steps: int, rng) -> np.ndarray:
    # fixed random surface target, altitudes from 10 R down to ~5 km
    target = rng.normal(size=3)
    target /= np.linalg.norm(target)
    radii = np.geomspace(10.0, 1.0 + 5e3 / base_radius, steps) * base_radius
    return target[None, :] * radii[:, None]


def percentile_line(label: str, ms: np.ndarray) -> str:
    return (f"  {label:12s} median {np.median(ms):7.2f} ms"
            f"   p95 {np.percentile(ms, 95):7.2f} ms"
            f"   max {ms.max():7.2f} ms")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--steps", type=int, default=500)
    ap.add_argument("--flight-seed", type=int, default=0)
    ap.add_argument("--lod-only", action="store_true",
                    help="time QuadTree.update without building tiles")
    ap.add_argument("--report-every", type=int, default=100)
    args = ap.parse_args(argv)

    cfg = load_config(args.config)
    rng = np.random.default_rng(args.flight_seed)
    positions = descent_positions(cfg.base_radius, args.steps, rng)

    timings, tiles_sent, bytes_sent = [], 0, 0
    if args.lod_only:
        gen = cfg.build_generator()
        tree = QuadTree(cfg.base_radius, cfg.max_depth, cfg.split_factor,
                        cfg.hysteresis, relief_margin=gen.relief_bound)
        step_fn = lambda cam: tree.update(cam)
        leaf_count = lambda: len(tree.leaves)
    else:
        session = PlanetSession(cfg)
        session.open()
        step_fn = lambda cam: session.on_camera(cam)
        leaf_count = lambda: session.stats().leaves

    for i, pos in enumerate(positions):
        t0 = time.perf_counter()
        out = step_fn(CameraState(position=tuple(pos)))
        timings.append(time.perf_counter() - t0)
        if not args.lod_only:
            frames = out.tile_frames()
            tiles_sent += len(frames)
            bytes_sent += sum(len(f) for f in frames)
        if (i + 1) % args.report_every == 0:
            alt = np.linalg.norm(pos) - cfg.base_radius
            print(f"step {i + 1:5d}  alt {alt / 1000.0:10.1f} km"
                  f"  leaves {leaf_count():5d}  last {timings[-1] * 1000:6.2f} ms")

    ms = np.asarray(timings) * 1000.0
    print()
    print(percentile_line("update", ms))
    print(f"  final leaves {leaf_count()}")
    if not args.lod_only:
        st = session.stats()
        print(f"  max depth in use {st.max_depth_in_use}"
              f"   vertices resident {st.vertices_resident}")
        print(f"  tiles streamed {tiles_sent}"
              f"   payload {bytes_sent / 1e6:.1f} MB")
    return 0


if __name__ == "__main__":
    sys.exit(main())
