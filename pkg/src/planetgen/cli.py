"""Command line interface: generate OBJ exports, verify invariants, serve.

Exit codes are part of the contract: 0 ok, 1 verification failure,
2 bad configuration, 3 I/O failure, 4 port unavailable.
"""
from __future__ import annotations

import argparse
import dataclasses
import errno
import sys

import numpy as np

from .config import load_config
from .errors import ConfigError, DomainError
from .lod import CameraState, QuadTree
from .mesh import build_tile, edge_vertex_indices, export_obj
from .noise import fbm
from .quadsphere import EDGES, QuadNode, neighbor
from .terrain import Biome, LayeredGenerator, _noise_points

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_IO = 3
EXIT_PORT = 4


def _load(args):
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
        cfg.validate()
    return cfg


def _uniform_tiles(cfg, depth):
    gen = cfg.build_generator()
    side = 1 << depth
    tiles = []
    for face in range(6):
        for y in range(side):
            for x in range(side):
                tiles.append(build_tile(QuadNode(face, depth, x, y), 0, gen,
                                        cfg.resolution, cfg.base_radius))
    return tiles


def cmd_generate(args) -> int:
    cfg = _load(args)
    tiles = _uniform_tiles(cfg, args.depth)
    export_obj(tiles, args.out)
    verts = sum(t.vertex_count for t in tiles)
    tris = sum(len(t.indices) // 3 for t in tiles)
    counts = np.zeros(len(Biome), dtype=np.int64)
    for t in tiles:
        counts += np.bincount(t.biomes, minlength=len(Biome))
    print(f"tiles {len(tiles)}")
    print(f"vertices {verts}")
    print(f"triangles {tris}")
    print("biomes " + " ".join(
        f"{b.name.lower()}={counts[b]}" for b in Biome))
    print(f"wrote {args.out}")
    return EXIT_OK


def cmd_serve(args) -> int:
    from .server import run_server

    cfg = _load(args)
    try:
        run_server(cfg, host=args.host, port=args.port)
    except KeyboardInterrupt:
        return EXIT_OK
    except OSError as e:
        if e.errno in (errno.EADDRINUSE, errno.EACCES):
            print(f"port {args.port} unavailable: {e}", file=sys.stderr)
            return EXIT_PORT
        raise
    return EXIT_OK


# ----------------------------------------------------------------- verify

def _check_formula(cfg, gen, dirs):
    field = gen.sample(dirs)
    if isinstance(gen, LayeredGenerator):
        ly = field.layers
        p = cfg.layered
        expect = np.maximum(
            (ly.continentalness + ly.peaks_valleys) * (1.0 - ly.erosion)
            * p.amplitude,
            p.ocean_level,
        )
    else:
        p = cfg.simple
        pts = _noise_points(dirs, p.sample_mode)
        expect = np.maximum(fbm(pts, p.fbm, gen.seed) * p.base_factor,
                            p.ocean_level)
    if not np.array_equal(field.displacement, expect):
        bad = int(np.argmax(field.displacement != expect))
        return (f"displacement formula mismatch at sample {bad}: "
                f"{field.displacement[bad]!r} != {expect[bad]!r}")
    return None


def _check_ocean_clamp(cfg, gen, dirs):
    params = cfg.params()
    disp = gen.sample(dirs).displacement
    if np.any(disp < params.ocean_level):
        return f"displacement below ocean level at {int(np.argmin(disp))}"
    return None


def _check_biome_water(cfg, gen, dirs):
    params = cfg.params()
    field = gen.sample(dirs)
    wet = np.isin(field.biome, (int(Biome.OCEAN), int(Biome.LAVA)))
    at_level = field.displacement == params.ocean_level
    if not np.array_equal(wet, at_level):
        return "ocean/lava biome does not coincide with clamped displacement"
    return None


def _check_seams(cfg, gen, rng, pairs=40):
    res = cfg.resolution
    for _ in range(pairs):
        depth = int(rng.integers(1, 4))
        side = 1 << depth
        node = QuadNode(int(rng.integers(0, 6)), depth,
                        int(rng.integers(0, side)), int(rng.integers(0, side)))
        edge = int(rng.integers(0, 4))
        other = neighbor(node, edge)
        back = next(e for e in EDGES if neighbor(other, e) == node)
        a = build_tile(node, 0, gen, res, cfg.base_radius)
        b = build_tile(other, 0, gen, res, cfg.base_radius)
        pa = a.positions_f64[edge_vertex_indices(res, edge)]
        pb = b.positions_f64[edge_vertex_indices(res, back)]
        if not (np.array_equal(pa, pb) or np.array_equal(pa, pb[::-1])):
            return f"same-depth seam mismatch at {node.address()} edge {edge}"
        # one level finer against the coarse polyline
        child = sorted(node.children())[int(rng.integers(0, 4))]
        touch = [e for e in EDGES if neighbor(child, e).parent() == other]
        if not touch:
            continue
        fine = build_tile(child, 1 << touch[0], gen, res, cfg.base_radius)
        fe = fine.positions_f64[edge_vertex_indices(res, touch[0])]
        for p in fe[::2]:
            if not any(np.array_equal(p, q) for q in pb):
                return f"stitched vertex off coarse edge at {child.address()}"
    return None


def _check_quadtree(cfg, rng, steps=60):
    gen = cfg.build_generator()
    tree = QuadTree(cfg.base_radius, min(cfg.max_depth, 8), cfg.split_factor,
                    cfg.hysteresis, relief_margin=gen.relief_bound)
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    for i in range(steps):
        r = cfg.base_radius * (10.0 - 9.0 * i / (steps - 1) + 0.001)
        tree.update(CameraState(position=tuple(direction * r)))
        if not tree.is_restricted():
            return f"restriction violated at step {i}"
    return None


def cmd_verify(args) -> int:
    cfg = _load(args)
    gen = cfg.build_generator()
    rng = np.random.default_rng(cfg.seed)
    dirs = rng.normal(size=(max(1, args.samples), 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)

    checks = [
        ("displacement formula", lambda: _check_formula(cfg, gen, dirs)),
        ("ocean clamp", lambda: _check_ocean_clamp(cfg, gen, dirs)),
        ("water biome coincidence", lambda: _check_biome_water(cfg, gen, dirs)),
        ("seam continuity", lambda: _check_seams(cfg, gen, rng)),
        ("restricted quadtree", lambda: _check_quadtree(cfg, rng)),
    ]
    failures = 0
    for name, run in checks:
        problem = run()
        if problem is None:
            print(f"ok   {name}")
        else:
            failures += 1
            print(f"FAIL {name}: {problem}")
    if failures:
        print(f"{failures} check(s) failed")
        return EXIT_VIOLATION
    print("all checks passed")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="planetgen",
        description="Deterministic procedural planet engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="export a uniform-depth OBJ")
    g.add_argument("config")
    g.add_argument("--out", required=True)
    g.add_argument("--depth", type=int, default=2)
    g.add_argument("--seed", type=int, default=None,
                   help="override the config seed")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("serve", help="run the tile streaming service")
    s.add_argument("config")
    s.add_argument("--host", default="127.0.0.1")
    s.add_argument("--port", type=int, default=8765)
    s.add_argument("--seed", type=int, default=None)
    s.set_defaults(func=cmd_serve)

    v = sub.add_parser("verify", help="run invariant sweeps against a config")
    v.add_argument("config")
    v.add_argument("--samples", type=int, default=10000)
    v.add_argument("--seed", type=int, default=None)
    v.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DomainError) as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
