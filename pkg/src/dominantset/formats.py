"""Input parsers and deterministic JSON / CSV output.

All indices in files are 1-based; everything in memory is 0-based.
Reals are written with 17 significant digits so that reading them back
reproduces the exact float64 values.
"""

import json
import re
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .clustering import Cluster, ClusteringResult
from .dynamics import DynamicsConfig, Trajectory
from .equilibria import EquilibriumReport
from .hypergraph import AffinityTensor


class ParseError(ValueError):
    """Malformed input file; ``line`` is the 1-based offending line (or None)."""

    def __init__(self, message, line=None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


def _number(token, lineno):
    try:
        v = float(token)
    except ValueError:
        raise ParseError(f"non-numeric token {token!r}", lineno) from None
    if not np.isfinite(v):
        raise ParseError(f"non-finite value {token!r}", lineno)
    return v


def _index(token, n, lineno):
    try:
        i = int(token)
    except ValueError:
        raise ParseError(f"non-integer index {token!r}", lineno) from None
    if not 1 <= i <= n:
        raise ParseError(f"index {i} out of range 1..{n}", lineno)
    return i - 1


def parse_dense_csv(text):
    """Square matrix from comma-separated rows; '#' lines and blank lines are skipped."""
    rows, last = [], 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        row = [_number(tok.strip(), lineno) for tok in line.split(",")]
        if rows and len(row) != len(rows[0]):
            raise ParseError(f"ragged row: {len(row)} values, expected {len(rows[0])}", lineno)
        rows.append(row)
        last = lineno
    if not rows:
        raise ParseError("empty matrix")
    if len(rows) != len(rows[0]):
        raise ParseError(f"matrix is {len(rows)}x{len(rows[0])}, not square", last)
    return np.array(rows, dtype=np.float64)


def parse_matrix_market(text):
    """Dense matrix from a MatrixMarket ``coordinate real|integer general|symmetric`` file."""
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty file")
    header = lines[0].strip().lower().split()
    if len(header) != 5 or header[0] != "%%matrixmarket":
        raise ParseError("missing %%MatrixMarket header", 1)
    obj, fmt, field_, sym = header[1:]
    if obj != "matrix" or fmt != "coordinate" or field_ not in ("real", "integer") \
            or sym not in ("general", "symmetric"):
        raise ParseError(f"unsupported header fields {' '.join(header[1:])!r}", 1)
    A, n, nnz, seen = None, 0, 0, set()
    for lineno, line in enumerate(lines[1:], 2):
        line = line.strip()
        if not line or line.startswith("%"):
            continue
        toks = line.split()
        if A is None:
            if len(toks) != 3:
                raise ParseError("size line must be 'rows cols entries'", lineno)
            try:
                rows, cols, nnz = (int(t) for t in toks)
            except ValueError:
                raise ParseError("non-integer size line", lineno) from None
            if rows != cols or rows < 1:
                raise ParseError(f"matrix is {rows}x{cols}, not square", lineno)
            n = rows
            A = np.zeros((n, n))
            continue
        if len(toks) != 3:
            raise ParseError("entry line must be 'row col value'", lineno)
        i, j = _index(toks[0], n, lineno), _index(toks[1], n, lineno)
        key = (min(i, j), max(i, j)) if sym == "symmetric" else (i, j)
        if key in seen:
            raise ParseError(f"duplicate entry ({i + 1}, {j + 1})", lineno)
        seen.add(key)
        v = _number(toks[2], lineno)
        A[i, j] = v
        if sym == "symmetric":
            A[j, i] = v
    if A is None:
        raise ParseError("missing size line")
    if len(seen) != nnz:
        raise ParseError(f"expected {nnz} entries, found {len(seen)}")
    return A


def parse_hyperedges(text):
    """:class:`AffinityTensor` from an ``n k`` line followed by ``i_1 .. i_k weight`` lines."""
    n = k = None
    edges, weights, seen = [], [], set()
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        if n is None:
            if len(toks) != 2:
                raise ParseError("first line must be 'n k'", lineno)
            try:
                n, k = int(toks[0]), int(toks[1])
            except ValueError:
                raise ParseError("non-integer 'n k' line", lineno) from None
            if n < 1 or k < 2:
                raise ParseError("need n >= 1 and k >= 2", lineno)
            continue
        if len(toks) != k + 1:
            raise ParseError(f"expected {k} indices and a weight, got {len(toks)} tokens", lineno)
        idx = [_index(t, n, lineno) for t in toks[:k]]
        if len(set(idx)) != k:
            raise ParseError("repeated index in hyperedge", lineno)
        w = _number(toks[k], lineno)
        if w <= 0:
            raise ParseError(f"nonpositive weight {w!r}", lineno)
        key = tuple(sorted(idx))
        if key in seen:
            raise ParseError(f"duplicate hyperedge {[i + 1 for i in key]}", lineno)
        seen.add(key)
        edges.append(key)
        weights.append(w)
    if n is None:
        raise ParseError("empty hyperedge file")
    return AffinityTensor(n, k, np.array(edges, dtype=np.int64).reshape(-1, k), weights)


def parse_vector(text):
    """Whitespace- or comma-separated reals (e.g. a start point)."""
    values = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        values.extend(_number(t, lineno) for t in re.split(r"[,\s]+", line) if t)
    return np.array(values)


def load_matrix(path, fmt=None):
    path = Path(path)
    fmt = fmt or ("mtx" if path.suffix.lower() == ".mtx" else "csv")
    text = path.read_text()
    if fmt == "mtx":
        return parse_matrix_market(text)
    if fmt == "csv":
        return parse_dense_csv(text)
    raise ValueError(f"unknown matrix format {fmt!r}")


# --- output ---------------------------------------------------------------

def format_real(v):
    v = float(v)
    if not np.isfinite(v):
        raise ValueError(f"cannot serialize non-finite value {v!r}")
    return format(v, ".17g")


def dumps(obj):
    """Compact JSON with insertion-ordered keys and 17-digit reals."""
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_real(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class RunManifest:
    input_path: str = ""
    input_format: str = ""
    command: str = ""
    config: dict = field(default_factory=dict)
    shift_applied: float = 0.0
    version: str = ""
    duration_seconds: float = 0.0

    def as_dict(self):
        return asdict(self)


def _reals(a):
    return [float(v) for v in np.asarray(a).ravel()]


def _one_based(idx):
    return [int(i) + 1 for i in idx]


def _cluster_dict(c):
    return {
        "members": _one_based(c.members),
        "weights": _reals(c.weights),
        "cohesiveness": float(c.cohesiveness),
        "converged": bool(c.converged),
        "iterations": int(c.iterations),
    }


def _config_dict(cfg):
    return asdict(cfg) if isinstance(cfg, DynamicsConfig) else dict(cfg)


def result_to_dict(result, manifest=None):
    """Plain-dict form of a clustering result, trajectory or equilibrium list."""
    if isinstance(result, ClusteringResult):
        out = {
            "clusters": [_cluster_dict(c) for c in result.clusters],
            "outliers": _one_based(result.outliers),
            "n_objects": int(result.n_objects),
            "shift_applied": float(result.shift_applied),
            "converged": bool(result.converged),
            "config": dict(result.config),
        }
    elif isinstance(result, Trajectory):
        out = {
            "times": _reals(result.times),
            "states": [_reals(s) for s in result.states],
            "converged": bool(result.converged),
            "iterations_used": int(result.iterations_used),
            "shift": float(result.shift),
            "config": _config_dict(result.config),
        }
    else:
        out = {"equilibria": [
            {
                "point": _reals(r.point),
                "support": _one_based(r.support),
                "stationary": bool(r.stationary),
                "nash": bool(r.nash),
                "ess": bool(r.ess),
                "tol": float(r.tol),
                "certificate": r.certificate,
            }
            for r in result
        ]}
    if manifest is not None:
        out["manifest"] = manifest.as_dict()
    return out


def emit_result(result, manifest=None):
    """Deterministic JSON text for ``result`` with the manifest embedded."""
    return dumps(result_to_dict(result, manifest)) + "\n"


def _zero_based(idx):
    return np.array([int(i) - 1 for i in idx], dtype=np.int64)


def parse_result(text):
    """Inverse of :func:`emit_result`; returns ``(result, manifest_dict_or_None)``."""
    d = json.loads(text)
    manifest = d.get("manifest")
    if "clusters" in d:
        clusters = [
            Cluster(members=_zero_based(c["members"]),
                    weights=np.array(c["weights"], dtype=float),
                    cohesiveness=float(c["cohesiveness"]),
                    iterations=int(c.get("iterations", 0)),
                    converged=bool(c["converged"]))
            for c in d["clusters"]
        ]
        res = ClusteringResult(clusters=clusters, outliers=_zero_based(d["outliers"]),
                               n_objects=int(d["n_objects"]),
                               shift_applied=float(d["shift_applied"]),
                               config=d.get("config", {}),
                               converged=bool(d.get("converged", True)))
    elif "times" in d:
        cfg = d.get("config") or {}
        res = Trajectory(times=np.array(d["times"], dtype=float),
                         states=np.array(d["states"], dtype=float),
                         converged=bool(d["converged"]),
                         iterations_used=int(d["iterations_used"]),
                         shift=float(d["shift"]),
                         config=DynamicsConfig(**cfg))
    elif "equilibria" in d:
        res = [EquilibriumReport(point=np.array(r["point"], dtype=float),
                                 stationary=r["stationary"], nash=r["nash"], ess=r["ess"],
                                 tol=float(r["tol"]), support=_zero_based(r["support"]),
                                 certificate=r["certificate"])
               for r in d["equilibria"]]
    else:
        raise ParseError("unrecognized result document")
    return res, manifest


def trajectory_csv(times, states):
    """``t,x_1,...,x_n`` header plus one row per recorded state."""
    states = np.asarray(states)
    n = states.shape[1]
    lines = ["t," + ",".join(f"x_{i + 1}" for i in range(n))]
    for t, x in zip(times, states):
        lines.append(",".join([format_real(t)] + [format_real(v) for v in x]))
    return "\n".join(lines) + "\n"
