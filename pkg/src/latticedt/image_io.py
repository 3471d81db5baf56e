"""Reading and writing LDT1 images/maps, mask files, and synthetic images.

LDT1 layout (text header, then payload)::

    LDT1
    lattice <Z2|Z3|BCC|FCC|custom>
    [generators g11 g12 [g13] ; g21 ... ]   (custom lattices only)
    dims nx ny [nz]
    spacing sx sy [sz]
    [origin ox oy [oz]]                     (default all zero)
    [scale <float>]                         (distance maps only)
    data <ascii|binary>
    <payload>

The payload lists one value per lattice-member coordinate of the box, in
lexicographic raster order with x fastest.  Images store 0 (background) or
1 (foreground); distance maps store nonnegative 32-bit integers with
4294967295 as infinity.  Binary payloads are little-endian uint32.
"""

from __future__ import annotations

import numpy as np

from .chamfer_mask import ChamferMask, MaskError
from .dt_engine import DistanceMap, GridImage
from .lattice import Lattice, custom_lattice, lattice_by_name

INF32 = 4294967295


class FormatError(ValueError):
    """Raised for malformed LDT1 or mask files."""


def _member_order(lattice, origin, dims):
    """Flat indices of lattice members in x-fastest raster order, for an
    array indexed [x, y(, z)]."""
    member = lattice.member_grid(origin, dims)
    # Transposing makes x the last (fastest) axis of the C-order raster.
    order = np.flatnonzero(member.transpose()[..., :].ravel())
    # Convert transposed flat indices back to original-layout flat indices.
    rev = np.array(np.unravel_index(order, tuple(reversed(dims))))
    coords = tuple(reversed(rev))
    return np.ravel_multi_index(coords, dims), member


def _parse_header(lines):
    if not lines or lines[0].strip() != "LDT1":
        raise FormatError("missing LDT1 magic line")
    fields = {}
    i = 1
    while i < len(lines):
        parts = lines[i].split(None, 1)
        if not parts:
            i += 1
            continue
        key = parts[0]
        fields[key] = parts[1].strip() if len(parts) > 1 else ""
        i += 1
        if key == "data":
            break
    else:
        raise FormatError("header has no 'data' line")
    for required in ("lattice", "dims", "spacing", "data"):
        if required not in fields:
            raise FormatError(f"header is missing the '{required}' line")
    return fields, i


def _header_lattice(fields):
    dims = tuple(int(t) for t in fields["dims"].split())
    spacing = tuple(float(t) for t in fields["spacing"].split())
    if any(d <= 0 for d in dims):
        raise FormatError("dims must be positive")
    if any(s <= 0 for s in spacing):
        raise FormatError("spacing must be positive")
    if len(dims) != len(spacing):
        raise FormatError("dims and spacing length mismatch")
    lat_id = fields["lattice"]
    if lat_id == "custom":
        if "generators" not in fields:
            raise FormatError("custom lattice needs a generators line")
        gens = tuple(tuple(int(t) for t in g.split())
                     for g in fields["generators"].split(";"))
        lattice = custom_lattice("custom", gens, spacing)
    else:
        lattice = lattice_by_name(lat_id, spacing)
    if lattice.dim != len(dims):
        raise FormatError("lattice dimension does not match dims")
    origin = tuple(int(t) for t in fields.get("origin", "").split()) \
        or (0,) * len(dims)
    if len(origin) != len(dims):
        raise FormatError("origin length mismatch")
    return lattice, dims, origin


def _read_payload(fields, text_rest, raw_rest, count):
    if fields["data"] == "ascii":
        tokens = text_rest.split()
        if len(tokens) != count:
            raise FormatError(f"expected {count} payload values, "
                              f"got {len(tokens)}")
        return np.array([int(t) for t in tokens], dtype=np.int64)
    if fields["data"] == "binary":
        if len(raw_rest) != 4 * count:
            raise FormatError(f"expected {4 * count} payload bytes, "
                              f"got {len(raw_rest)}")
        return np.frombuffer(raw_rest, dtype="<u4").astype(np.int64)
    raise FormatError(f"unknown data encoding {fields['data']!r}")


def _split_file(path):
    raw = open(path, "rb").read()
    # The header is pure text ending at the newline after the 'data' line.
    pos = 0
    lines = []
    while True:
        nl = raw.find(b"\n", pos)
        if nl < 0:
            raise FormatError("header has no 'data' line")
        line = raw[pos:nl].decode("ascii")
        lines.append(line)
        pos = nl + 1
        if line.split(None, 1)[:1] == ["data"]:
            break
    return lines, raw[pos:]


def read_image(path) -> GridImage:
    lines, rest = _split_file(path)
    fields, _ = _parse_header(lines)
    lattice, dims, origin = _header_lattice(fields)
    order, member = _member_order(lattice, origin, dims)
    payload = _read_payload(fields, rest.decode("ascii", errors="strict")
                            if fields["data"] == "ascii" else "",
                            rest, len(order))
    if np.any((payload != 0) & (payload != 1)):
        raise FormatError("image payload must be 0/1")
    values = np.full(dims, -1, dtype=np.int8)
    values.ravel()[order] = payload.astype(np.int8)
    return GridImage(lattice, origin, values)


def read_distance_map(path) -> DistanceMap:
    lines, rest = _split_file(path)
    fields, _ = _parse_header(lines)
    lattice, dims, origin = _header_lattice(fields)
    scale = float(fields.get("scale", 1.0))
    order, member = _member_order(lattice, origin, dims)
    payload = _read_payload(fields, rest.decode("ascii")
                            if fields["data"] == "ascii" else "",
                            rest, len(order))
    if np.any(payload < 0):
        raise FormatError("distance values must be nonnegative")
    values = np.full(dims, INF32, dtype=np.int64)
    values.ravel()[order] = payload
    return DistanceMap(lattice, origin, values, INF32, scale)


def _header_text(lattice, dims, origin, encoding, scale=None):
    out = ["LDT1"]
    if lattice.name in ("Z2", "Z3", "BCC", "FCC"):
        out.append(f"lattice {lattice.name}")
    else:
        out.append("lattice custom")
        out.append("generators " + " ; ".join(
            " ".join(str(c) for c in g) for g in lattice.generators))
    out.append("dims " + " ".join(str(d) for d in dims))
    out.append("spacing " + " ".join(repr(s) for s in lattice.spacing))
    if any(o != 0 for o in origin):
        out.append("origin " + " ".join(str(o) for o in origin))
    if scale is not None:
        out.append(f"scale {scale!r}")
    out.append(f"data {encoding}")
    return "\n".join(out) + "\n"


def write_image(image: GridImage, path, encoding="ascii"):
    """Serialize an image whose support is every lattice member of its box
    (carved supports have no file representation)."""
    order, member = _member_order(image.lattice, image.origin, image.dims)
    flat = image.values.ravel()[order]
    if np.any(flat < 0):
        raise FormatError("cannot serialize an image with a carved support")
    header = _header_text(image.lattice, image.dims, image.origin, encoding)
    with open(path, "wb") as f:
        f.write(header.encode("ascii"))
        if encoding == "ascii":
            f.write(_ascii_payload(flat, image.dims))
        else:
            f.write(flat.astype("<u4").tobytes())


def write_distance_map(dmap: DistanceMap, path, encoding="ascii"):
    order, member = _member_order(dmap.lattice, dmap.origin, dmap.dims)
    flat = dmap.values.ravel()[order]
    flat = np.where(flat >= dmap.infinity, INF32, flat)
    header = _header_text(dmap.lattice, dmap.dims, dmap.origin, encoding,
                          scale=dmap.scale)
    with open(path, "wb") as f:
        f.write(header.encode("ascii"))
        if encoding == "ascii":
            f.write(_ascii_payload(flat, dmap.dims))
        else:
            f.write(flat.astype("<u4").tobytes())


def _ascii_payload(flat, dims, per_line=None):
    per_line = per_line or dims[0]
    toks = [str(int(v)) for v in flat]
    lines = [" ".join(toks[i:i + per_line])
             for i in range(0, len(toks), per_line)]
    return ("\n".join(lines) + "\n").encode("ascii")


# ---------------------------------------------------------------------------
# Mask files: one 'vx vy [vz] : w' entry per line, '#' comments, closed
# under v -> -v on load.
# ---------------------------------------------------------------------------


def read_mask(path, lattice: Lattice) -> ChamferMask:
    entries = []
    for lineno, line in enumerate(open(path, encoding="ascii"), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if ":" not in body:
            raise FormatError(f"{path}:{lineno}: expected 'vx vy [vz] : w'")
        vec_part, w_part = body.split(":", 1)
        vec = tuple(int(t) for t in vec_part.split())
        w_txt = w_part.strip()
        weight = int(w_txt) if w_txt.lstrip("+-").isdigit() else float(w_txt)
        entries.append((vec, weight))
    if not entries:
        raise FormatError(f"{path}: no mask entries")
    try:
        return ChamferMask.build(lattice, entries)
    except MaskError as e:
        raise FormatError(f"{path}: {e}") from e


def write_mask(mask: ChamferMask, path):
    with open(path, "w", encoding="ascii") as f:
        for v, w in zip(mask.vectors, mask.weights):
            f.write(" ".join(str(c) for c in v) + f" : {w}\n")


# ---------------------------------------------------------------------------
# Synthetic images.
# ---------------------------------------------------------------------------


def _force_border_background(fg, depth):
    n = fg.ndim
    for ax in range(n):
        sl = [slice(None)] * n
        sl[ax] = slice(0, depth)
        fg[tuple(sl)] = False
        sl[ax] = slice(fg.shape[ax] - depth, None)
        fg[tuple(sl)] = False


def single_point_image(lattice, dims, border_background=False,
                       border_depth=1) -> GridImage:
    """All-foreground box with one background point at the center (snapped
    to the nearest lattice member)."""
    dims = tuple(dims)
    center = tuple(d // 2 for d in dims)
    if not lattice.member(center):
        for cand in sorted(np.ndindex(*([3] * len(dims)))):
            c = tuple(ci + o - 1 for ci, o in zip(center, cand))
            if lattice.member(c):
                center = c
                break
    fg = np.ones(dims, dtype=bool)
    fg[center] = False
    if border_background:
        _force_border_background(fg, border_depth)
    return GridImage.from_foreground(lattice, (0,) * len(dims), fg)


def random_image(lattice, dims, density=0.5, seed=0,
                 border_depth=1) -> GridImage:
    """Bernoulli foreground with all border points forced to background.
    Deterministic for a given seed."""
    rng = np.random.default_rng(seed)
    fg = rng.random(tuple(dims)) < density
    _force_border_background(fg, border_depth)
    return GridImage.from_foreground(lattice, (0,) * len(dims), fg)


def box_phantom(lattice, dims, lo, hi) -> GridImage:
    """Foreground exactly on the sub-box lo <= p <= hi (inclusive)."""
    fg = np.zeros(tuple(dims), dtype=bool)
    sl = tuple(slice(l, h + 1) for l, h in zip(lo, hi))
    fg[sl] = True
    return GridImage.from_foreground(lattice, (0,) * len(dims), fg)


# ---------------------------------------------------------------------------
# CSV export.
# ---------------------------------------------------------------------------


def distance_map_csv(dmap: DistanceMap):
    """CSV text 'x,y[,z],value' for every finite map entry."""
    import io

    grids = np.meshgrid(*[np.arange(o, o + d)
                          for o, d in zip(dmap.origin, dmap.dims)],
                        indexing="ij")
    finite = dmap.values < dmap.infinity
    coords = np.stack([g[finite] for g in grids], axis=1)
    vals = dmap.values[finite]
    names = ["x", "y", "z"][:len(dmap.dims)]
    buf = io.StringIO()
    buf.write(",".join(names + ["value"]) + "\n")
    order = np.lexsort(tuple(coords[:, i] for i in
                             range(coords.shape[1] - 1, -1, -1)))
    for i in order:
        buf.write(",".join(str(int(c)) for c in coords[i]) +
                  f",{int(vals[i])}\n")
    return buf.getvalue()


def points_csv(points):
    names = ["x", "y", "z"][:len(points[0])] if points else ["x", "y"]
    lines = [",".join(names)]
    for p in points:
        lines.append(",".join(str(int(c)) for c in p))
    return "\n".join(lines) + "\n"
