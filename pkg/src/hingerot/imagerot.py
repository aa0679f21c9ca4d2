"""Lossless incremental rotation of an image stored on two layers.

A target cell of the discretized rotation has at most two preimages, so two
layers hold every source pixel. When two sources collide, the one that is
lexicographically smaller (by ``(re, im)``) sits on layer 1, which is the
layer that gets displayed.

Sources may be *absent* (e.g. disk points outside a rectangular picture);
they still rotate but carry no pixel and never occupy a layer.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from .rotengine import (
    EngineError,
    Gaussian,
    RayUpdate,
    RotationMap,
    apply_update,
    gaussian_disk,
    identity_map,
    next_update,
)
from .table import HingeTable


class CollisionError(RuntimeError):
    """More than two sources landed on one cell."""


@dataclass
class LayeredImage:
    m: int
    layer1: dict[Gaussian, Any]
    layer2: dict[Gaussian, Any]
    background: Any


@dataclass
class LayerAssignment:
    layers: dict[Gaussian, int]


@dataclass
class ImageState:
    image: LayeredImage
    assignment: LayerAssignment
    rotation: RotationMap
    # target cell -> present sources there, sorted
    occupants: dict[Gaussian, list[Gaussian]] = field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.rotation.m

    @property
    def position(self):
        return self.rotation.position

    def value(self, z: Gaussian) -> Any:
        layer = self.image.layer1 if self.assignment.layers[z] == 1 else self.image.layer2
        return layer[self.rotation.mapping[z]]


def _radius_for(points) -> int:
    m = 0
    for x, y in points:
        while x * x + y * y > m * m:
            m += 1
    return m


def init(
    image: Mapping[Gaussian, Any],
    background: Any = 0,
    m: int | None = None,
    table: HingeTable | None = None,
) -> ImageState:
    """Start at angle 0 with every pixel on layer 1."""
    if m is None:
        m = table.m if table is not None else _radius_for(image)
    mm = m * m
    for x, y in image:
        if x * x + y * y > mm:
            raise ValueError(f"pixel {(x, y)} lies outside the disk of radius {m}")
    rotation = identity_map(m, table)
    canvas = gaussian_disk(m + 1)
    layer1 = {c: image.get(c, background) for c in canvas}
    layer2 = {c: background for c in canvas}
    state = ImageState(
        LayeredImage(m, layer1, layer2, background),
        LayerAssignment({z: 1 for z in image}),
        rotation,
        {z: [z] for z in image},
    )
    return state


def apply_phase(state: ImageState, update: RayUpdate) -> None:
    """Apply one phase of ray moves to the pixels and the rotation map.

    The final state depends only on where each source ends up: layers are
    re-derived from the sorted occupants of every cell the phase touched.
    """
    rot = state.rotation
    if rot.position != update.start:
        raise EngineError(f"update starts at {update.start}, image is at {rot.position}")
    assignment = state.assignment.layers
    occupants = state.occupants
    carried: dict[Gaussian, Any] = {}
    affected: set[Gaussian] = set()
    for z, _ in update.touched:
        if z not in assignment:
            continue
        old = rot.mapping[z]
        carried[z] = state.value(z)
        cell = occupants[old]
        cell.remove(z)
        if not cell:
            del occupants[old]
        affected.add(old)
    apply_update(rot, update)
    for z in carried:
        new = rot.mapping[z]
        occupants.setdefault(new, []).append(z)
        affected.add(new)
    _relayer(state, affected, carried)


def _relayer(state: ImageState, cells, carried: Mapping[Gaussian, Any]) -> None:
    img = state.image
    layers = state.assignment.layers
    bg = img.background
    for c in cells:
        occ = state.occupants.get(c)
        if not occ:
            img.layer1[c] = bg
            img.layer2[c] = bg
            continue
        if len(occ) > 2:
            raise CollisionError(f"cell {c} has {len(occ)} preimages: {sorted(occ)}")
        occ.sort()
        # stationary occupants are read before their own cell is rewritten
        vals = [carried[s] if s in carried else state.value(s) for s in occ]
        img.layer1[c] = vals[0]
        layers[occ[0]] = 1
        if len(occ) == 2:
            img.layer2[c] = vals[1]
            layers[occ[1]] = 2
        else:
            img.layer2[c] = bg


def advance(state: ImageState, table: HingeTable) -> RayUpdate:
    """Compute and apply the next phase."""
    u = next_update(state.rotation, table)
    apply_phase(state, u)
    return u


def reconstruct(state: ImageState) -> dict[Gaussian, Any]:
    """Recover the original picture from the layers and the rotation map."""
    return {z: state.value(z) for z in state.assignment.layers}


def render(state: ImageState) -> dict[Gaussian, Any]:
    """The visible rotated picture: layer 1 over the disk of radius ``m + 1``."""
    return dict(state.image.layer1)


def naive_render(
    image: Mapping[Gaussian, Any], mapping: Mapping[Gaussian, Gaussian], m: int, background: Any = 0
) -> dict[Gaussian, Any]:
    """Each cell shows the lexicographically smallest source mapped onto it."""
    out = {c: background for c in gaussian_disk(m + 1)}
    for z in sorted(image, reverse=True):
        out[mapping[z]] = image[z]
    return out
