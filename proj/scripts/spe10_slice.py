#!/usr/bin/env python3
# Copyright 2026 The asmg Authors.
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Extract one horizontal layer of the SPE10 model 2 permeability file.

The input is the whitespace-separated spe_perm.dat of the SPE10 comparative
solution project (60 x 220 x 85 cells; all Kx values, then Ky, then Kz; x
varies fastest, then y, then z). The output is the raster format read by
asmg: a line "nx ny" followed by nx * ny permeability values, row-major from
the bottom-left cell.

Example:
    spe10_slice.py spe_perm.dat --layer 44 -o spe10_s44.txt
    asmg_cli minres --case c --coeff-file spe10_s44.txt --n 128 --levels 5 \
        --cycle W --m 1 --varpi 1e8
"""

import argparse
import sys

NX, NY, NZ = 60, 220, 85
COMPONENTS = {"x": 0, "y": 1, "z": 2}


def read_values(path):
    with open(path, "r", encoding="ascii") as f:
        return [float(tok) for tok in f.read().split()]


def extract(values, layer, component, crop):
    """Returns (nx, ny, rows) for a 1-based layer index."""
    per_component = NX * NY * NZ
    if len(values) != 3 * per_component:
        raise ValueError(
            f"expected {3 * per_component} values, found {len(values)}")
    if not 1 <= layer <= NZ:
        raise ValueError(f"layer must be in [1, {NZ}]")
    base = COMPONENTS[component] * per_component + (layer - 1) * NX * NY
    ny = min(NY, crop) if crop else NY
    nx = min(NX, crop) if crop else NX
    rows = []
    for j in range(ny):
        start = base + j * NX
        rows.append(values[start:start + nx])
    return nx, ny, rows


def write_raster(out, nx, ny, rows):
    out.write(f"{nx} {ny}\n")
    for row in rows:
        for v in row:
            if not v > 0.0:
                raise ValueError(f"non-positive permeability {v}")
        out.write(" ".join(repr(v) for v in row) + "\n")


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("perm", help="path to spe_perm.dat")
    p.add_argument("--layer", type=int, default=44, help="1-based layer (default 44)")
    p.add_argument("--component", choices=sorted(COMPONENTS), default="x")
    p.add_argument("--crop", type=int, default=0,
                   help="keep the first CROP cells in x and y (0: full layer)")
    p.add_argument("-o", "--output", help="output raster (default stdout)")
    args = p.parse_args(argv)
    try:
        nx, ny, rows = extract(read_values(args.perm), args.layer,
                               args.component, args.crop)
    except (OSError, ValueError) as e:
        print(f"spe10_slice: {e}", file=sys.stderr)
        return 4
    if args.output:
        with open(args.output, "w", encoding="ascii") as out:
            write_raster(out, nx, ny, rows)
    else:
        write_raster(sys.stdout, nx, ny, rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
