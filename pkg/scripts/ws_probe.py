"""Poke a running tile server over its websocket protocol.

Opens a session, descends toward the surface, and prints one line per
delta so you can watch what a client would receive. Binary tile frames
are decoded just enough to sanity-check their headers. Start a server
first:

    python3 -m planetgen.cli serve configs/simple.json --port 8765
    python3 scripts/ws_probe.py ws://127.0.0.1:8765 --steps 40
"""

import argparse
import asyncio
import json
import sys

import numpy as np
import websockets

from planetgen.mesh import decode_tile


async def recv_delta(ws):
    frame = json.loads(await ws.recv())
    if frame.get("type") == "error":
        raise SystemExit(f"server error {frame['code']}: {frame['message']}")
    tiles = [decode_tile(await ws.recv()) for _ in range(frame["tiles"])]
    return frame, tiles


async def probe(url: str, config_path, steps: int) -> None:
    async with websockets.connect(url, max_size=None) as ws:
        open_msg = {"type": "open"}
        if config_path:
            open_msg["config"] = json.loads(open(config_path).read())
        await ws.send(json.dumps(open_msg))
        frame, tiles = await recv_delta(ws)
        radius = float(np.linalg.norm(tiles[0].center)) if tiles else 6.371e6
        print(f"open: {frame['tiles']} root tiles, {len(frame['scene'])} scene objects")

        target = np.array([1.0, 0.3, 0.2])
        target /= np.linalg.norm(target)
        for i, r in enumerate(np.geomspace(8.0, 1.002, steps) * radius):
            await ws.send(json.dumps(
                {"type": "camera", "pos": (target * r).tolist(), "look": [-1, 0, 0]}))
            frame, tiles = await recv_delta(ws)
            depths = sorted({t.node.depth for t in tiles})
            print(f"step {i + 1:3d}  alt {(r - radius) / 1000:9.1f} km"
                  f"  +{len(tiles):3d} tiles (depths {depths})"
                  f"  -{len(frame['removed']):3d}"
                  f"  masks {len(frame['masks']):3d}"
                  f"  scene {len(frame['scene']):3d}")

        await ws.send(json.dumps({"type": "stats"}))
        print("stats:", json.loads(await ws.recv()))


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("url", nargs="?", default="ws://127.0.0.1:8765")
    ap.add_argument("--config", help="send this config in the open message")
    ap.add_argument("--steps", type=int, default=40)
    args = ap.parse_args(argv)
    asyncio.run(probe(args.url, args.config, args.steps))
    return 0


if __name__ == "__main__":
    sys.exit(main())
