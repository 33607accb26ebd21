"""Command-line front door.

Subcommands: ``betti`` (complex file -> Betti report via the spectral or
Smith-normal-form engine), ``curves`` (point cloud -> Betti curves CSV/SVG
plus persistence barcode), ``cloud`` (random point-cloud generators), and
``cumulants`` (exact moment<->cumulant CSV transforms).

Exit codes: 0 success, 2 parse failure, 3 tolerance failure, 4 size cap,
5 numerical failure.  Every subcommand is deterministic given its inputs;
randomness enters only through --seed.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .cumulants import (
    KINDS,
    CumulantSequence,
    MomentSequence,
    cumulants_to_moments,
    moments_to_cumulants,
)
from .errors import (
    NctopoError,
    NumericalError,
    ParseError,
    PartialResultError,
    SizeLimitError,
    ToleranceError,
)
from .randmat import repulsive_circle_cloud, repulsive_disk_cloud, torus_cloud
from .simplicial import boundary_operator, read_complex_file
from .snf import betti_snf, smith_normal_form
from .spectra import betti_spectral, laplacian_spectrum, spectrum_lines
from .tda import (
    BettiCurves,
    PersistencePairs,
    PointCloud,
    betti_curves,
    cech_filtration,
    persistence_pairs,
    rips_filtration,
)

EXIT_PARSE = 2
EXIT_TOLERANCE = 3
EXIT_SIZE = 4
EXIT_NUMERICAL = 5


def _parse_grid(spec: str) -> list[float]:
    try:
        lo, hi, steps = spec.split(":")
        lo, hi, steps = float(lo), float(hi), int(steps)
    except ValueError:
        raise ParseError(f"grid must be tmin:tmax:steps, got {spec!r}") from None
    if steps < 1 or hi < lo:
        raise ParseError(f"grid must ascend with steps >= 1, got {spec!r}")
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def _read_cloud(path) -> PointCloud:
    rows = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                try:
                    rows.append([float(tok) for tok in line.replace(",", " ").split()])
                except ValueError:
                    raise ParseError(f"expected numbers, got {line!r}", lineno) from None
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise ParseError(f"no points in {path}")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ParseError("rows have inconsistent dimension")
    return PointCloud(np.array(rows), {"source": str(path)})


def _write_cloud(cloud: PointCloud, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in cloud.points:
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def _read_rationals(path) -> list[Fraction]:
    values = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        for tok in line.replace(",", " ").split():
            try:
                values.append(Fraction(tok))
            except (ValueError, ZeroDivisionError):
                raise ParseError(f"bad rational {tok!r}", lineno) from None
    if not values:
        raise ParseError(f"no values in {path}")
    return values


# ----------------------------------------------------------------- svg ---


def _svg_document(width: int, height: int, body: list[str]) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    )
    return "\n".join([head, *body, "</svg>"]) + "\n"

_COLORS = ("black", "red", "blue", "green")


def curves_svg(curves: BettiCurves) -> str:
    w, h, pad = 640, 400, 45
    grid = curves.grid
    t0, t1 = grid[0], grid[-1]
    span = (t1 - t0) or 1.0
    top = max((max(c) for c in curves.curves), default=1) or 1
    body = [
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<line x1="{pad}" y1="{h - pad}" x2="{w - pad}" y2="{h - pad}" stroke="black"/>',
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{h - pad}" stroke="black"/>',
        f'<text x="{w // 2}" y="{h - 10}" font-size="12">scale t '
        f"({t0:.4g} to {t1:.4g})</text>",
    ]
    for dim, curve in enumerate(curves.curves):
        color = _COLORS[dim % len(_COLORS)]
        pts = []
        for i, (t, v) in enumerate(zip(grid, curve)):
            x = pad + (t - t0) / span * (w - 2 * pad)
            y = h - pad - v / top * (h - 2 * pad)
            if i > 0:  # step function: hold previous level until t
                pts.append(f"{x:.2f},{prev_y:.2f}")
            pts.append(f"{x:.2f},{y:.2f}")
            prev_y = y
        body.append(
            f'<polyline points="{" ".join(pts)}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        body.append(
            f'<text x="{w - pad + 5}" y="{pad + 14 * dim}" font-size="12" '
            f'fill="{color}">b{dim}</text>'
        )
    return _svg_document(w, h, body)


def barcode_svg(pairs: PersistencePairs, t_max: float) -> str:
    bars = [
        (dim, b, d if d != float("inf") else t_max * 1.05)
        for dim, dim_bars in enumerate(pairs.bars)
        for b, d in dim_bars
    ]
    w, pad, row = 640, 45, 6
    h = max(120, 2 * pad + row * len(bars))
    span = (t_max * 1.05) or 1.0
    body = [
        f'<rect width="{w}" height="{h}" fill="white"/>',
        f'<line x1="{pad}" y1="{h - pad}" x2="{w - pad}" y2="{h - pad}" stroke="black"/>',
        f'<text x="{w // 2}" y="{h - 10}" font-size="12">scale t (0 to {t_max:.4g})</text>',
    ]
    for i, (dim, b, d) in enumerate(sorted(bars)):
        color = _COLORS[dim % len(_COLORS)]
        x1 = pad + b / span * (w - 2 * pad)
        x2 = pad + d / span * (w - 2 * pad)
        y = pad + i * row
        body.append(
            f'<line x1="{x1:.2f}" y1="{y}" x2="{x2:.2f}" y2="{y}" '
            f'stroke="{color}" stroke-width="3"/>'
        )
    return _svg_document(w, h, body)


# ------------------------------------------------------------ commands ---


def cmd_betti(args) -> int:
    X = read_complex_file(args.input)
    counts = X.counts
    print(f"faces: {counts}")
    euler_n = sum((-1) ** i * n for i, n in enumerate(counts))
    if args.engine == "spectral":
        spectrum = laplacian_spectrum(X)
        betti = betti_spectral(X)
        print(f"betti (spectral): {betti}")
        print("spectra (grade eigenvalue multiplicity):")
        for line in spectrum_lines(spectrum):
            print(f"  {line}")
    else:
        ring = "integers" if args.ring == "z" else "gf2"
        betti = betti_snf(X, ring)
        print(f"betti ({args.ring}): {betti}")
        other = betti_snf(X, "gf2" if ring == "integers" else "integers")
        if other != betti:
            torsion = {
                i: [d for d in smith_normal_form(boundary_operator(X, i + 1)).divisors if d > 1]
                for i in range(X.dim)
            }
            torsion = {i: t for i, t in torsion.items() if t}
            print(f"note: betti differ between rings (z vs gf2); torsion {torsion}")
        divisors = [
            smith_normal_form(boundary_operator(X, r)).divisors
            for r in range(1, X.dim + 1)
        ]
        for r, divs in enumerate(divisors, start=1):
            print(f"divisors d_{r}: {list(divs)}")
    euler_b = sum((-1) ** i * b for i, b in enumerate(betti))
    print(f"euler characteristic: {euler_n} (faces) = {euler_b} (betti)")
    return 0


def cmd_curves(args) -> int:
    cloud = _read_cloud(args.input)
    grid = _parse_grid(args.grid)
    curves = betti_curves(
        cloud,
        grid,
        maxdim=args.maxdim,
        engine=args.engine,
        complex_type=args.complex,
    )
    build = rips_filtration if args.complex == "rips" else cech_filtration
    filtration = build(cloud, max(grid), maxdim=min(args.maxdim + 1, 3))
    pairs = persistence_pairs(filtration)
    prefix = args.output
    with open(f"{prefix}_curves.csv", "w", encoding="utf-8") as fh:
        fh.write("t," + ",".join(f"b{d}" for d in range(args.maxdim + 1)) + "\n")
        for i, t in enumerate(curves.grid):
            fh.write(repr(t) + "," + ",".join(str(c[i]) for c in curves.curves) + "\n")
    with open(f"{prefix}_bars.csv", "w", encoding="utf-8") as fh:
        fh.write("dim,birth,death\n")
        for dim, dim_bars in enumerate(pairs.bars):
            for b, d in dim_bars:
                fh.write(f"{dim},{b!r},{'inf' if d == float('inf') else repr(d)}\n")
    with open(f"{prefix}_curves.svg", "w", encoding="utf-8") as fh:
        fh.write(curves_svg(curves))
    with open(f"{prefix}_barcode.svg", "w", encoding="utf-8") as fh:
        fh.write(barcode_svg(pairs, max(grid)))
    print(f"cloud: {cloud.size} points in R^{cloud.dimension}")
    print(f"grid: {len(curves.grid)} evaluation scales in [{curves.grid[0]}, {curves.grid[-1]}]")
    for d, curve in enumerate(curves.curves):
        print(f"b{d}: min {min(curve)} max {max(curve)} final {curve[-1]}")
    print(f"wrote {prefix}_curves.csv {prefix}_bars.csv {prefix}_curves.svg {prefix}_barcode.svg")
    return 0


def cmd_cloud(args) -> int:
    if args.kind == "disk":
        cloud = repulsive_disk_cloud(args.n, args.seed)
    elif args.kind == "circle":
        cloud = repulsive_circle_cloud(args.n, args.seed)
    elif args.kind == "torus-ind":
        cloud = torus_cloud(args.n, args.R, args.r, "independent", args.seed)
    else:
        cloud = torus_cloud(args.n, args.R, args.r, "repulsive", args.seed)
    _write_cloud(cloud, args.output)
    pts = cloud.points
    print(f"kind: {args.kind}  n: {cloud.size}  seed: {args.seed}")
    print(f"coordinate means: {[round(float(m), 6) for m in pts.mean(axis=0)]}")
    radii = np.linalg.norm(pts[:, :2], axis=1)
    print(f"radial range: [{radii.min():.6f}, {radii.max():.6f}]")
    print(f"wrote {args.output}")
    return 0


def cmd_cumulants(args) -> int:
    values = _read_rationals(args.input)
    if args.direction == "to-cumulants":
        result = moments_to_cumulants(MomentSequence.of(values), args.kind).values
        label = "cumulants"
    else:
        result = cumulants_to_moments(CumulantSequence.of(args.kind, values)).values
        label = "moments"
    lines = [str(v) for v in result]
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        print(f"wrote {args.output}")
    print(f"{args.kind} {label}: " + ", ".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nctopo",
        description="Betti numbers, Laplacian spectra, Betti curves, cumulant "
        "transforms and random point clouds.",
    )
    parser.add_argument("--version", action="version", version=f"nctopo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("betti", help="Betti numbers of a simplicial complex file")
    p.add_argument("--input", required=True, help="complex file, one facet per line")
    p.add_argument("--engine", choices=("snf", "spectral"), default="snf")
    p.add_argument("--ring", choices=("z", "gf2"), default="z")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("curves", help="Betti curves and barcode of a point cloud")
    p.add_argument("--input", required=True, help="cloud CSV, one point per row")
    p.add_argument("--output", required=True, help="output path prefix")
    p.add_argument("--grid", required=True, help="tmin:tmax:steps")
    p.add_argument("--maxdim", type=int, default=2)
    p.add_argument("--engine", choices=("gf2", "spectral"), default="gf2")
    p.add_argument("--complex", choices=("rips", "cech"), default="rips")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("cloud", help="generate a random point cloud")
    p.add_argument("--kind", choices=("disk", "circle", "torus-ind", "torus-rep"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--R", type=float, default=2.0, help="torus major radius")
    p.add_argument("--r", type=float, default=1.0, help="torus minor radius")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_cloud)

    p = sub.add_parser("cumulants", help="moment/cumulant transforms on rational CSV")
    p.add_argument("--input", required=True, help="CSV of rationals like 3/4")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--direction", choices=("to-cumulants", "to-moments"), required=True)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_cumulants)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ToleranceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except PartialResultError as exc:
        print(f"error: cap exceeded at t={exc.failed_at}: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except SizeLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except NumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except NctopoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
