"""Camera-driven restricted quadtree over the cube-sphere.

A leaf splits when the camera is closer than split_factor times the
node's arc length (angular_size * base_radius); four sibling leaves merge
when the camera is farther than hysteresis times the split threshold.
After split/merge reaches a fixed point, extra splits enforce the
restricted property: edge-adjacent leaves never differ by more than one
depth level, which bounds stitching to one pattern per edge.

Distances are measured from the camera to the node's bounding sphere
(center direction scaled to the surface, radius covering the corners plus
a relief margin), all in double precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError
from .quadsphere import EDGES, QuadNode, ROOT_NODES, neighbor


@dataclass(frozen=True)
class CameraState:
    position: tuple[float, float, float]
    look_direction: tuple[float, float, float] = (1.0, 0.0, 0.0)

    def __post_init__(self):
        pos = tuple(float(c) for c in self.position)
        if len(pos) != 3 or not all(math.isfinite(c) for c in pos):
            raise DomainError("camera position must be a finite 3-vector")
        if pos == (0.0, 0.0, 0.0):
            raise DomainError("camera position must be nonzero")
        object.__setattr__(self, "position", pos)
        object.__setattr__(
            self, "look_direction", tuple(float(c) for c in self.look_direction)
        )


@dataclass
class LodUpdate:
    added: list[QuadNode] = field(default_factory=list)
    removed: list[QuadNode] = field(default_factory=list)
    stitch_masks: dict[QuadNode, int] = field(default_factory=dict)


class QuadTree:
    """Mutable leaf set; update() moves it toward the camera's detail."""

    def __init__(
        self,
        base_radius: float,
        max_depth: int,
        split_factor: float = 1.5,
        hysteresis: float = 1.2,
        relief_margin: float = 0.0,
    ):
        if not (base_radius > 0 and math.isfinite(base_radius)):
            raise ConfigError("base_radius > 0")
        if not (isinstance(max_depth, int) and max_depth >= 0):
            raise ConfigError("max_depth >= 0")
        if not (split_factor > 0 and math.isfinite(split_factor)):
            raise ConfigError("split_factor > 0")
        if not (hysteresis > 1 and math.isfinite(hysteresis)):
            raise ConfigError("hysteresis > 1")
        if not (relief_margin >= 0 and math.isfinite(relief_margin)):
            raise ConfigError("relief_margin >= 0")
        self.base_radius = float(base_radius)
        self.max_depth = max_depth
        self.split_factor = float(split_factor)
        self.hysteresis = float(hysteresis)
        self.relief_margin = float(relief_margin)
        self.leaves: set[QuadNode] = set(ROOT_NODES)
        self._spheres: dict[QuadNode, tuple[np.ndarray, float]] = {}

    # -- geometry -------------------------------------------------------

    def _bounding_sphere(self, node: QuadNode) -> tuple[np.ndarray, float]:
        cached = self._spheres.get(node)
        if cached is not None:
            return cached
        center_dir = node.center_dir()
        corners = node.corner_dirs()
        chord = float(np.max(np.linalg.norm(corners - center_dir, axis=1)))
        center = center_dir * self.base_radius
        radius = chord * self.base_radius + self.relief_margin
        sphere = (center, radius)
        self._spheres[node] = sphere
        return sphere

    def _distance(self, node: QuadNode, cam: np.ndarray) -> float:
        center, radius = self._bounding_sphere(node)
        d = cam - center
        return max(0.0, math.sqrt(float(d[0] * d[0] + d[1] * d[1] + d[2] * d[2])) - radius)

    def _arc_length(self, node: QuadNode) -> float:
        return node.angular_size() * self.base_radius

    def _split_wanted(self, node: QuadNode, cam: np.ndarray) -> bool:
        return self._distance(node, cam) < self.split_factor * self._arc_length(node)

    def _merge_wanted(self, parent: QuadNode, cam: np.ndarray) -> bool:
        return self._distance(parent, cam) > (
            self.hysteresis * self.split_factor * self._arc_length(parent)
        )

    # -- tree surgery ---------------------------------------------------

    def _split(self, node: QuadNode) -> tuple[QuadNode, ...]:
        self.leaves.discard(node)
        kids = node.children()
        self.leaves.update(kids)
        return kids

    def _coarse_cover(self, cell: QuadNode) -> QuadNode | None:
        """The leaf at cell's own address or at a strict ancestor, if any.

        None means the cell's region is subdivided into deeper leaves.
        """
        probe = cell
        while True:
            if probe in self.leaves:
                return probe
            if probe.depth == 0:
                return None
            probe = probe.parent()

    def _merge_breaks_restriction(self, parent: QuadNode) -> bool:
        # merging leaves a depth-p leaf; an adjacent cell subdivided past
        # depth p+1 would then violate the restricted property
        for child in parent.children():
            for edge in EDGES:
                m = neighbor(child, edge)
                if m.parent() == parent:
                    continue
                if self._coarse_cover(m) is None:
                    return True
        return False

    def _restriction_pass(self) -> bool:
        # split any leaf that covers a cell 2+ levels coarser than an
        # edge-adjacent leaf
        to_split = set()
        for leaf in self.leaves:
            if leaf.depth < 2:
                continue
            for edge in EDGES:
                cover = self._coarse_cover(neighbor(leaf, edge))
                if cover is not None and leaf.depth - cover.depth >= 2:
                    to_split.add(cover)
        for node in to_split:
            if node in self.leaves:
                self._split(node)
        return bool(to_split)

    # -- public API -----------------------------------------------------

    def update(self, camera: CameraState) -> LodUpdate:
        """Split/merge to a fixed point, then restrict; returns the delta."""
        if not self.leaves:
            raise ConfigError("tree has no leaves")
        cam = np.asarray(camera.position, dtype=np.float64)
        before = set(self.leaves)

        stack = list(self.leaves)
        while stack:
            node = stack.pop()
            if node not in self.leaves:
                continue
            if node.depth < self.max_depth and self._split_wanted(node, cam):
                stack.extend(self._split(node))

        merged = True
        while merged:
            merged = False
            by_parent: dict[QuadNode, int] = {}
            for leaf in self.leaves:
                if leaf.depth == 0:
                    continue
                p = leaf.parent()
                by_parent[p] = by_parent.get(p, 0) + 1
            for parent, count in sorted(by_parent.items()):
                if count != 4:
                    continue
                if not self._merge_wanted(parent, cam):
                    continue
                if self._split_wanted(parent, cam):
                    continue
                if self._merge_breaks_restriction(parent):
                    continue
                for k in parent.children():
                    self.leaves.discard(k)
                self.leaves.add(parent)
                merged = True

        while self._restriction_pass():
            pass

        after = self.leaves
        return LodUpdate(
            added=sorted(after - before),
            removed=sorted(before - after),
            stitch_masks=self.stitch_masks(),
        )

    def stitch_masks(self) -> dict[QuadNode, int]:
        """Per-leaf 4-bit mask; bit (1 << edge) set when that edge's
        neighbor leaf is exactly one level coarser."""
        masks = {}
        for leaf in self.leaves:
            m = 0
            if leaf.depth > 0:
                for edge in EDGES:
                    n = neighbor(leaf, edge)
                    if n not in self.leaves and n.parent() in self.leaves:
                        m |= 1 << edge
            masks[leaf] = m
        return masks

    def is_restricted(self) -> bool:
        """True iff all edge-adjacent leaves differ by <= 1 depth level.

        A deep/coarse violating pair is always observed from its deeper
        member, so checking each leaf's coarse covers is exhaustive.
        """
        for leaf in self.leaves:
            for edge in EDGES:
                cover = self._coarse_cover(neighbor(leaf, edge))
                if cover is not None and leaf.depth - cover.depth >= 2:
                    return False
        return True
