"""TSP problem representation, TSPLIB-subset I/O, and tour evaluation."""

from importlib import resources
from pathlib import Path

import numpy as np

EUC_2D = "EUC_2D"
EXPLICIT_FULL_MATRIX = "EXPLICIT_FULL_MATRIX"

_HEADER_KEYS = ("NAME", "TYPE", "COMMENT", "DIMENSION",
                "EDGE_WEIGHT_TYPE", "EDGE_WEIGHT_FORMAT")

GRID_MAX = 1000  # generated instances live on the integer grid [0, GRID_MAX]^2


class TsplibParseError(ValueError):
    """Malformed TSPLIB input; carries the offending 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def euc_2d_matrix(coords):
    """Distance matrix of rounded Euclidean lengths (TSPLIB nint convention)."""
    pts = np.asarray(coords, dtype=np.float64)
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.floor(np.sqrt((diff * diff).sum(axis=2)) + 0.5)
    np.fill_diagonal(dist, 0.0)
    return dist


class Instance:
    """Immutable symmetric TSP instance with a dense distance matrix.

    Safe to share across concurrent runs: the coordinate and distance
    arrays are frozen at construction and all invariants (symmetry, zero
    diagonal, nonnegative weights, EUC_2D consistency) are checked here.
    """

    def __init__(self, name, dist, coords=None, weight_kind=EXPLICIT_FULL_MATRIX):
        dist = np.array(dist, dtype=np.float64)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise ValueError("dist must be a square matrix")
        n = dist.shape[0]
        if n < 2:
            raise ValueError(f"instance needs at least 2 nodes, got {n}")
        if not np.all(np.isfinite(dist)):
            raise ValueError("dist contains non-finite entries")
        if np.any(dist < 0):
            raise ValueError("dist contains negative entries")
        if np.any(np.diagonal(dist) != 0):
            raise ValueError("dist diagonal must be zero")
        if not np.array_equal(dist, dist.T):
            raise ValueError("dist must be symmetric")
        if weight_kind not in (EUC_2D, EXPLICIT_FULL_MATRIX):
            raise ValueError(f"unsupported weight kind {weight_kind!r}")
        if coords is not None:
            coords = np.array(coords, dtype=np.float64)
            if coords.shape != (n, 2):
                raise ValueError(f"coords must have shape ({n}, 2)")
            coords.setflags(write=False)
        if weight_kind == EUC_2D:
            if coords is None:
                raise ValueError("EUC_2D instance requires coordinates")
            if not np.array_equal(euc_2d_matrix(coords), dist):
                raise ValueError("dist does not match rounded Euclidean distances")
        dist.setflags(write=False)
        self.name = name
        self.n = n
        self.coords = coords
        self.dist = dist
        self.weight_kind = weight_kind

    @classmethod
    def from_coords(cls, name, coords):
        """EUC_2D instance with distances derived from the coordinates."""
        return cls(name, euc_2d_matrix(coords), coords=coords, weight_kind=EUC_2D)

    def __repr__(self):
        return f"Instance({self.name!r}, n={self.n}, {self.weight_kind})"


class Tour:
    """A closed tour: node order plus its cached cycle length."""

    __slots__ = ("order", "length")

    def __init__(self, order, length):
        order = np.asarray(order, dtype=np.int64)
        order.setflags(write=False)
        self.order = order
        self.length = float(length)

    def __repr__(self):
        return f"Tour(length={self.length}, order={self.order.tolist()})"


def validate_order(n, order):
    """Check that `order` is a permutation of 0..n-1; return it as int64."""
    arr = np.asarray(order, dtype=np.int64)
    if arr.shape != (n,):
        raise ValueError(f"tour has {arr.size} entries, expected {n}")
    if arr.min() < 0 or arr.max() >= n:
        raise ValueError("tour contains a node index out of range")
    if np.any(np.bincount(arr, minlength=n) != 1):
        raise ValueError("tour is not a permutation (duplicate or missing node)")
    return arr


def distance(inst, i, j):
    """Edge weight between nodes i and j (pure matrix lookup)."""
    if not (0 <= i < inst.n and 0 <= j < inst.n):
        raise IndexError(f"node index out of range for n={inst.n}: ({i}, {j})")
    return float(inst.dist[i, j])


def tour_length(inst, order):
    """Cycle length of `order`, including the closing edge."""
    arr = validate_order(inst.n, order)
    edges = inst.dist[arr, np.roll(arr, -1)]
    # sequential accumulation, so the result is bit-identical to the
    # per-edge sums used inside the solver kernels
    return float(np.cumsum(edges)[-1])


def make_tour(inst, order):
    """Validated Tour with its length computed from the instance."""
    arr = validate_order(inst.n, order)
    return Tour(arr, tour_length(inst, arr))


def nearest_neighbor_tour(inst, start):
    """Greedy tour from `start`, ties broken toward the lowest node index."""
    if not 0 <= start < inst.n:
        raise IndexError(f"start node {start} out of range for n={inst.n}")
    n = inst.n
    order = np.empty(n, dtype=np.int64)
    visited = np.zeros(n, dtype=bool)
    cur = start
    order[0] = cur
    visited[cur] = True
    for t in range(1, n):
        row = np.where(visited, np.inf, inst.dist[cur])
        cur = int(np.argmin(row))  # first minimum = lowest index
        order[t] = cur
        visited[cur] = True
    return Tour(order, tour_length(inst, order))


def generate_instance(n, seed, name=None):
    """Seeded random EUC_2D instance: n distinct integer-grid points on
    [0, 1000]^2.  Identical (n, seed) always yields identical instances."""
    if n < 2:
        raise ValueError(f"need at least 2 nodes, got {n}")
    rng = np.random.default_rng(seed)
    pts = rng.integers(0, GRID_MAX + 1, size=(n, 2)).astype(np.float64)
    while True:
        seen = {}
        dups = []
        for idx, p in enumerate(map(tuple, pts)):
            if p in seen:
                dups.append(idx)
            else:
                seen[p] = idx
        if not dups:
            break
        pts[dups] = rng.integers(0, GRID_MAX + 1, size=(len(dups), 2)).astype(np.float64)
    return Instance.from_coords(name or f"rand{n}-s{seed}", pts)


def _fmt_number(v):
    f = float(v)
    return str(int(f)) if f.is_integer() else repr(f)


def format_tsplib(inst):
    """Render an Instance back to TSPLIB text (round-trips through parse_tsplib)."""
    lines = [f"NAME : {inst.name}", "TYPE : TSP", f"DIMENSION : {inst.n}"]
    if inst.weight_kind == EUC_2D:
        lines.append("EDGE_WEIGHT_TYPE : EUC_2D")
        lines.append("NODE_COORD_SECTION")
        for idx, (x, y) in enumerate(inst.coords, start=1):
            lines.append(f"{idx} {_fmt_number(x)} {_fmt_number(y)}")
    else:
        lines.append("EDGE_WEIGHT_TYPE : EXPLICIT")
        lines.append("EDGE_WEIGHT_FORMAT : FULL_MATRIX")
        lines.append("EDGE_WEIGHT_SECTION")
        for row in inst.dist:
            lines.append(" ".join(_fmt_number(v) for v in row))
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def _parse_dimension(header):
    if "DIMENSION" not in header:
        raise TsplibParseError("missing DIMENSION")
    value, lineno = header["DIMENSION"]
    try:
        n = int(value)
    except ValueError:
        raise TsplibParseError(f"DIMENSION is not an integer: {value!r}", lineno) from None
    if n < 2:
        raise TsplibParseError(f"DIMENSION must be at least 2, got {n}", lineno)
    return n


def parse_tsplib(text, fallback_name="unnamed"):
    """Parse the supported TSPLIB subset into an Instance.

    Supported: TYPE TSP with EDGE_WEIGHT_TYPE EUC_2D (NODE_COORD_SECTION)
    or EXPLICIT + EDGE_WEIGHT_FORMAT FULL_MATRIX (EDGE_WEIGHT_SECTION).
    Anything else is rejected with the offending line number.
    """
    lines = text.splitlines()
    header = {}
    coords = None
    matrix = None

    i = 0
    while i < len(lines):
        lineno = i + 1
        s = lines[i].strip()
        i += 1
        if not s:
            continue
        if s == "EOF":
            break
        key, sep, value = s.partition(":")
        key = key.strip()
        if key in _HEADER_KEYS:
            if not sep:
                raise TsplibParseError(f"expected ':' after {key}", lineno)
            if key != "COMMENT" and key in header:
                raise TsplibParseError(f"duplicate {key}", lineno)
            header[key] = (value.strip(), lineno)
        elif key == "NODE_COORD_SECTION":
            if coords is not None:
                raise TsplibParseError("duplicate NODE_COORD_SECTION", lineno)
            n = _parse_dimension(header)
            coords, i = _read_coord_section(lines, i, n)
        elif key == "EDGE_WEIGHT_SECTION":
            if matrix is not None:
                raise TsplibParseError("duplicate EDGE_WEIGHT_SECTION", lineno)
            n = _parse_dimension(header)
            matrix, i = _read_weight_section(lines, i, n)
        else:
            raise TsplibParseError(f"unrecognized line: {s!r}", lineno)

    if "TYPE" not in header:
        raise TsplibParseError("missing TYPE")
    type_value, type_line = header["TYPE"]
    if type_value.split()[0:1] != ["TSP"]:
        raise TsplibParseError(f"unsupported TYPE {type_value!r} (only TSP)", type_line)
    if "EDGE_WEIGHT_TYPE" not in header:
        raise TsplibParseError("missing EDGE_WEIGHT_TYPE")
    ewt, ewt_line = header["EDGE_WEIGHT_TYPE"]
    n = _parse_dimension(header)
    name = header.get("NAME", (fallback_name, 0))[0] or fallback_name

    if ewt == "EUC_2D":
        if matrix is not None:
            raise TsplibParseError("EDGE_WEIGHT_SECTION not allowed with EUC_2D")
        if coords is None:
            raise TsplibParseError("EUC_2D instance is missing NODE_COORD_SECTION")
        try:
            return Instance.from_coords(name, coords)
        except ValueError as exc:
            raise TsplibParseError(str(exc)) from exc
    if ewt == "EXPLICIT":
        fmt = header.get("EDGE_WEIGHT_FORMAT")
        if fmt is None:
            raise TsplibParseError("EXPLICIT requires EDGE_WEIGHT_FORMAT", ewt_line)
        if fmt[0] != "FULL_MATRIX":
            raise TsplibParseError(
                f"unsupported EDGE_WEIGHT_FORMAT {fmt[0]!r} (only FULL_MATRIX)", fmt[1])
        if matrix is None:
            raise TsplibParseError("EXPLICIT instance is missing EDGE_WEIGHT_SECTION")
        try:
            return Instance(name, matrix, coords=coords,
                            weight_kind=EXPLICIT_FULL_MATRIX)
        except ValueError as exc:
            raise TsplibParseError(str(exc)) from exc
    raise TsplibParseError(
        f"unsupported EDGE_WEIGHT_TYPE {ewt!r} (only EUC_2D, EXPLICIT)", ewt_line)


def _read_coord_section(lines, i, n):
    coords = np.empty((n, 2), dtype=np.float64)
    seen = np.zeros(n, dtype=bool)
    for _ in range(n):
        lineno = i + 1
        if i >= len(lines):
            raise TsplibParseError(
                f"expected {n} coordinate rows (DIMENSION mismatch)", lineno)
        tokens = lines[i].split()
        i += 1
        if len(tokens) != 3:
            raise TsplibParseError(
                f"expected 'id x y', got {lines[i - 1].strip()!r}"
                " (DIMENSION/coordinate-count mismatch?)", lineno)
        try:
            node = int(tokens[0])
            x, y = float(tokens[1]), float(tokens[2])
        except ValueError:
            raise TsplibParseError(
                f"non-numeric coordinate row: {lines[i - 1].strip()!r}", lineno) from None
        if not 1 <= node <= n:
            raise TsplibParseError(f"node id {node} outside 1..{n}", lineno)
        if seen[node - 1]:
            raise TsplibParseError(f"duplicate node id {node}", lineno)
        seen[node - 1] = True
        coords[node - 1] = (x, y)
    return coords, i


def _read_weight_section(lines, i, n):
    values = []
    need = n * n
    while len(values) < need:
        lineno = i + 1
        if i >= len(lines) or lines[i].strip() == "EOF":
            raise TsplibParseError(
                f"expected {need} edge weights, got {len(values)}"
                " (DIMENSION mismatch)", lineno)
        for token in lines[i].split():
            try:
                values.append(float(token))
            except ValueError:
                raise TsplibParseError(
                    f"non-numeric edge weight: {token!r}", lineno) from None
            if len(values) > need:
                raise TsplibParseError("more edge weights than DIMENSION^2", lineno)
        i += 1
    return np.array(values, dtype=np.float64).reshape(n, n), i


def load_instance(path):
    """Parse a TSPLIB file from disk; the file stem names unnamed instances."""
    p = Path(path)
    return parse_tsplib(p.read_text(), fallback_name=p.stem)


def write_instance(inst, path):
    Path(path).write_text(format_tsplib(inst))


def data_path(filename):
    """Path to a data file bundled with the package (e.g. 'berlin52.tsp')."""
    return Path(str(resources.files(__package__).joinpath("data", filename)))
