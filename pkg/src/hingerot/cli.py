"""Command line interface: ``hingerot <command> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import math
import os
import random
import sys
import time
from pathlib import Path

from . import imagerot, pgm, rotengine
from .hinge import GeneratingTriple, InvalidTriple, angle_as_float, canonicalize
from .table import (
    AmbiguousAngle,
    HingeTable,
    PositionKind,
    TableError,
    build,
    enumerate_triples,
    load,
    locate,
    locate_float,
    save,
)

TABLE_DIR_ENV = "HINGEROT_TABLE_DIR"


class UsageError(Exception):
    pass


# -- tables -----------------------------------------------------------------


def cached_table_path(m: int) -> Path | None:
    d = os.environ.get(TABLE_DIR_ENV)
    return Path(d) / f"m{m}.hinge" if d else None


def read_table(path) -> HingeTable:
    try:
        with open(path, encoding="ascii") as f:
            return load(f)
    except OSError as e:
        raise UsageError(f"cannot read table {path}: {e.strerror}") from None
    except TableError as e:
        raise UsageError(f"invalid table {path}: {e}") from None


def write_table(t: HingeTable, path) -> None:
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="ascii", newline="\n") as f:
            save(t, f)
    except OSError as e:
        raise UsageError(f"cannot write table {path}: {e.strerror}") from None


def get_table(m: int | None, path: str | None) -> HingeTable:
    if path:
        t = read_table(path)
        if m is not None and t.m != m:
            raise UsageError(f"table {path} is for m={t.m}, not m={m}")
        return t
    if m is None:
        raise UsageError("either --m or --table is required")
    check_m(m)
    cached = cached_table_path(m)
    if cached is not None and cached.exists():
        return read_table(cached)
    t = build(m)
    if cached is not None:
        write_table(t, cached)
    return t


def check_m(m: int) -> None:
    if m < 1:
        raise UsageError("m must be >= 1")


# -- image embedding --------------------------------------------------------


def image_radius(width: int, height: int) -> int:
    """``ceil(sqrt(w^2 + h^2) / 2)``, computed on integers."""
    s = width * width + height * height
    m = math.isqrt(s) // 2
    while 4 * m * m < s:
        m += 1
    return m


def embed(img: pgm.Pgm, m: int) -> dict:
    """Pixels as Gaussian integers centred on pixel ``(w//2, h//2)``, y up.
    Pixels off the disk are dropped."""
    cx, cy = img.width // 2, img.height // 2
    mm = m * m
    out = {}
    for row in range(img.height):
        for col in range(img.width):
            z = (col - cx, cy - row)
            if z[0] * z[0] + z[1] * z[1] <= mm:
                out[z] = img.pixels[row * img.width + col]
    return out


def unembed(cells: dict, like: pgm.Pgm, pad: int, background: int) -> pgm.Pgm:
    cx, cy = like.width // 2, like.height // 2
    w, h = like.width + 2 * pad, like.height + 2 * pad
    pixels = []
    for row in range(-pad, like.height + pad):
        for col in range(-pad, like.width + pad):
            pixels.append(cells.get((col - cx, cy - row), background))
    return pgm.Pgm(w, h, pixels, like.maxval)


# -- rotation helpers -------------------------------------------------------


def read_image(path) -> pgm.Pgm:
    try:
        return pgm.read(path)
    except OSError as e:
        raise UsageError(f"cannot read image {path}: {e.strerror}") from None
    except pgm.PgmError as e:
        raise UsageError(f"malformed PGM {path}: {e}") from None


def setup_rotation(args) -> tuple[pgm.Pgm, HingeTable, imagerot.ImageState]:
    img = read_image(args.input)
    m = args.m
    if m is None and not args.table:
        m = image_radius(img.width, img.height)
    t = get_table(m, args.table)
    if not 0 <= args.background <= img.maxval:
        raise UsageError(f"background must be in [0, {img.maxval}]")
    state = imagerot.init(embed(img, t.m), args.background, t.m, t)
    return img, t, state


def target_phases(args, t: HingeTable) -> int:
    """Number of phases from angle 0 to the requested position."""
    n = len(t)
    chosen = [
        a is not None for a in (args.phase, args.hinge_index, args.degrees, args.triple)
    ]
    if sum(chosen) != 1:
        raise UsageError("give exactly one of --phase, --hinge-index, --degrees, --triple")
    if args.phase is not None:
        if not 0 <= args.phase <= 2 * n:
            raise UsageError(f"--phase must be in [0, {2 * n}]")
        return args.phase
    if args.hinge_index is not None:
        if not 0 <= args.hinge_index < n:
            raise UsageError(f"--hinge-index must be in [0, {n - 1}]")
        return 2 * args.hinge_index + 1
    if args.triple is not None:
        try:
            tr = GeneratingTriple.parse(args.triple)
            h = canonicalize(tr)
        except (InvalidTriple, ValueError):
            raise UsageError(f"invalid triple {args.triple!r}") from None
        pos = locate(t, h)
    else:
        try:
            pos = locate_float(t, math.radians(args.degrees))
        except AmbiguousAngle as e:
            raise UsageError(
                f"{args.degrees} degrees is within 1e-9 rad of hinge {e.index} ({e.hinge}); "
                f"use --hinge-index {e.index}"
            ) from None
    if pos.kind is PositionKind.AT_HINGE:
        return 2 * pos.index + 1
    return (2 * pos.index + 2) % (2 * n)


def write_image(path, img: pgm.Pgm) -> None:
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        pgm.write(path, img)
    except OSError as e:
        raise UsageError(f"cannot write {path}: {e.strerror}") from None


# -- commands ---------------------------------------------------------------


def cmd_gen_table(args) -> int:
    check_m(args.m)
    out = args.out or cached_table_path(args.m)
    if out is None:
        raise UsageError(f"--out is required (or set {TABLE_DIR_ENV})")
    t0 = time.perf_counter()
    t = build(args.m)
    elapsed = time.perf_counter() - t0
    write_table(t, out)
    print(f"m={t.m} n={len(t)} seconds={elapsed:.3f} path={out}")
    return 0


def cmd_list(args) -> int:
    t = get_table(args.m, args.table)
    for j, h in enumerate(t):
        print(f"{j} {h} {math.degrees(angle_as_float(h)):.9f}")
    return 0


def cmd_rotate(args) -> int:
    img, t, state = setup_rotation(args)
    for _ in range(target_phases(args, t)):
        imagerot.advance(state, t)
    out = unembed(imagerot.render(state), img, args.pad, args.background)
    write_image(args.out, out)
    print(f"m={t.m} position={state.position}")
    return 0


def cmd_sweep(args) -> int:
    if args.frame_stride < 1:
        raise UsageError("--frame-stride must be >= 1")
    img, t, state = setup_rotation(args)
    out_dir = Path(args.out_dir)

    def emit(k: int) -> None:
        frame = unembed(imagerot.render(state), img, args.pad, args.background)
        write_image(out_dir / f"frame_{k:06d}.pgm", frame)

    emit(0)
    frames = 1
    for k in range(1, 2 * len(t) + 1):
        imagerot.advance(state, t)
        if k % args.frame_stride == 0:
            emit(k)
            frames += 1
    print(f"m={t.m} phases={2 * len(t)} frames={frames}")
    return 0


def preimage_bound_ok(mapping) -> bool:
    seen: dict = {}
    for w in mapping.values():
        seen[w] = seen.get(w, 0) + 1
        if seen[w] > 2:
            return False
    return True


def run_verification(m: int, t: HingeTable, seed: int = 0) -> dict[str, tuple[bool, str]]:
    """Run the invariant suites at radius ``m``; name -> (passed, detail)."""
    results: dict[str, tuple[bool, str]] = {}

    r = rotengine.identity_map(m, t)
    first_bad = None
    preimages_ok = True
    for k in range(1, 2 * len(t) + 1):
        u = rotengine.step(r, t)
        side = rotengine.Side.AT if u.phase is rotengine.Phase.AT_HINGE else rotengine.Side.JUST_AFTER
        exact = rotengine.full_map_exact(m, u.hinge, side)
        if first_bad is None and exact.mapping != r.mapping:
            first_bad = (k, u.hinge, u.phase.value)
        preimages_ok = preimages_ok and preimage_bound_ok(r.mapping)
    if first_bad is None:
        results["oracle"] = (True, f"phases={2 * len(t)}")
    else:
        k, h, ph = first_bad
        results["oracle"] = (False, f"first mismatch at phase {k} hinge={h} ({ph})")
    results["preimages"] = (preimages_ok, "at most 2 preimages per cell")
    results["closure"] = (r.is_identity(), f"updates={r.updates} per_m3={r.updates / m**3:.3f}")

    rng = random.Random(seed)
    image = {z: rng.randrange(256) for z in rotengine.gaussian_disk(m)}
    try:
        state = imagerot.init(image, 0, m, t)
        lossless = True
        for _ in range(2 * len(t)):
            imagerot.advance(state, t)
            if imagerot.reconstruct(state) != image:
                lossless = False
                break
        back = lossless and state.rotation.is_identity()
        results["lossless"] = (lossless and back, f"seed={seed}")
    except (imagerot.CollisionError, rotengine.EngineError) as e:
        results["lossless"] = (False, str(e))
    return results


def cmd_verify(args) -> int:
    check_m(args.m)
    t = get_table(args.m, args.table)
    results = run_verification(args.m, t, args.seed)
    for name, (ok, detail) in results.items():
        print(f"{name}: {'PASS' if ok else 'FAIL'} {detail}")
    return 0 if all(ok for ok, _ in results.values()) else 1


def sum_of_two_squares_counts(limit: int) -> list[int]:
    """``r2[n]`` = number of ``(a, b)`` with ``a^2 + b^2 = n``, for ``n <= limit``."""
    r2 = [0] * (limit + 1)
    a = 0
    while a * a <= limit:
        b = 0
        while a * a + b * b <= limit:
            # count sign variants
            mult = (1 if a == 0 else 2) * (1 if b == 0 else 2)
            r2[a * a + b * b] += mult
            b += 1
        a += 1
    return r2


def collect_stats(t: HingeTable) -> dict[str, object]:
    m = t.m
    n = len(t)
    t0 = time.perf_counter()
    r = rotengine.identity_map(m, t)
    for _ in range(2 * n):
        rotengine.step(r, t)
    sweep_s = time.perf_counter() - t0
    disk = len(rotengine.gaussian_disk(m))
    r2 = sum_of_two_squares_counts(m * m)
    # literal refined bound from the source note; informational only
    r2_literal = sum(r2[i] * math.floor(math.sqrt(i) - 0.5) for i in range(1, m * m + 1))
    raw = sum(1 for _ in enumerate_triples(m))
    return {
        "m": m,
        "hinges": n,
        "bound_8m3": 8 * m**3,
        "hinges_over_bound": round(n / (8 * m**3), 6),
        "configs": 2 * n,
        "raw_triples": raw,
        "r2_refined_literal": r2_literal,
        "disk_points": disk,
        "updates": r.updates,
        "updates_over_m3": round(r.updates / m**3, 6),
        "naive_cost": n * disk,
        "naive_over_m5": round(n * disk / m**5, 6),
        "sweep_seconds": round(sweep_s, 6),
    }


def cmd_stats(args) -> int:
    if args.table is None:
        check_m(args.m)
    t0 = time.perf_counter()
    t = get_table(args.m, args.table)
    build_s = time.perf_counter() - t0
    stats = collect_stats(t)
    stats["build_seconds"] = round(build_s, 6)
    for key, value in stats.items():
        print(f"{key}={value}")
    return 0


# -- parser -----------------------------------------------------------------


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hingerot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-table", help="build and save a hinge-angle table")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen_table)

    p = sub.add_parser("list", help="print the hinge angles of a table")
    p.add_argument("--m", type=int)
    p.add_argument("--table")
    p.set_defaults(func=cmd_list)

    for name, func, helptext in (
        ("rotate", cmd_rotate, "rotate a PGM image to a target position"),
        ("sweep", cmd_sweep, "emit every rotated frame of a full turn"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--m", type=int, help="disk radius (default: half the image diagonal)")
        p.add_argument("--table")
        p.add_argument("--background", type=int, default=0)
        p.add_argument("--pad", type=int, default=1, help="border added around the output")
        if name == "rotate":
            p.add_argument("--out", required=True)
            p.add_argument("--phase", type=int, help="number of phases from angle 0")
            p.add_argument("--hinge-index", type=int)
            p.add_argument("--degrees", type=float)
            p.add_argument("--triple", help="p,q,k")
        else:
            p.add_argument("--out-dir", required=True)
            p.add_argument("--frame-stride", type=int, default=1)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="check the engine against the exact oracle")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--table")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stats", help="hinge counts and update counts")
    p.add_argument("--m", type=int)
    p.add_argument("--table")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if getattr(args, "pad", 0) < 0:
        print("error: --pad must be >= 0", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
