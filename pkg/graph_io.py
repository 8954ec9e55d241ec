"""
Graph and ground-truth files.

- Public graph, text: header `n m`, then one `u v` line per edge (0-indexed, u < v, sorted).
- Public graph, binary: magic `SGRB`, little-endian uint64 n, then the upper triangle
  (pairs u < v in row-major order) packed most significant bit first.
- Ground truth `<name>.truth.json`: params, seed, cliques, background edge count. Kept in a
  separate file so that recovery code cannot read it by accident.
"""

import os
import struct

import numpy as np

import libsg as lib
import state
from graphs import Graph, PlantedCoverInstance, PlantedCoverParams, gen_gnp, symmetrize_upper

BINARY_MAGIC = b"SGRB"


####################################################################################################

def write_graph(path: str, g: Graph):
    """
    Writes `g` in the binary format if `path` ends in `.sgrb`, in the text format otherwise.
    """
    lib.ensure_parent_dir(path)
    if path.endswith(".sgrb"):
        _write_binary(path, g)
        return
    with open(path, "w") as f:
        f.write(f"{g.n} {g.m}\n")
        for start in range(0, g.n, 1024):
            rows = np.arange(start, min(start + 1024, g.n))
            dense = g.unpack_rows(rows)
            lines = []
            for offset, u in enumerate(rows):
                for v in np.flatnonzero(dense[offset, u + 1:]) + u + 1:
                    lines.append(f"{u} {v}\n")
            f.writelines(lines)


def read_graph(path: str) -> Graph:
    """
    Reads a graph written by :py:func:`write_graph` (format chosen by the magic bytes).
    """
    try:
        with open(path, "rb") as f:
            head = f.read(4)
        if head == BINARY_MAGIC:
            return _read_binary(path)
        return _read_text(path)
    except (OSError, ValueError, struct.error) as e:
        raise lib.extend_exception(e, prefix=f"Failed to read graph file {path}: ") from None


def _read_text(path: str) -> Graph:
    with open(path, "r") as f:
        header = f.readline().split()
        if len(header) != 2:
            raise ValueError("expected a header line `n m`")
        n, m = int(header[0]), int(header[1])
        edges = np.loadtxt(f, dtype=np.int64, ndmin=2) if m > 0 else np.zeros((0, 2), np.int64)
    if edges.shape != (m, 2):
        raise ValueError(f"header announces {m} edges, found {edges.shape[0]}")
    dense = np.zeros((n, n), dtype=bool) if n <= 8192 else None
    if dense is None:
        return Graph.from_edges(n, edges)
    if m and (edges.min() < 0 or edges.max() >= n or np.any(edges[:, 0] == edges[:, 1])):
        raise ValueError("edge endpoints out of range or self-loop")
    dense[edges[:, 0], edges[:, 1]] = True
    dense[edges[:, 1], edges[:, 0]] = True
    return Graph.from_dense(dense)


####################################################################################################

def _write_binary(path: str, g: Graph):
    with open(path, "wb") as f:
        f.write(BINARY_MAGIC)
        f.write(struct.pack("<Q", g.n))
        carry = np.zeros(0, dtype=np.uint8)
        for start in range(0, g.n, 1024):
            rows = np.arange(start, min(start + 1024, g.n))
            dense = g.unpack_rows(rows)
            pieces = [carry] + [dense[offset, u + 1:] for offset, u in enumerate(rows)]
            stream = np.concatenate(pieces)
            full = stream.size - stream.size % 8
            f.write(np.packbits(stream[:full]).tobytes())
            carry = stream[full:]
        if carry.size:
            f.write(np.packbits(carry).tobytes())


def _read_binary(path: str) -> Graph:
    with open(path, "rb") as f:
        f.read(4)
        (n,) = struct.unpack("<Q", f.read(8))
        payload = np.frombuffer(f.read(), dtype=np.uint8)
    pairs = n * (n - 1) // 2
    if payload.size != (pairs + 7) // 8:
        raise ValueError(f"expected {(pairs + 7) // 8} payload bytes for n={n}, got {payload.size}")
    triangle = np.unpackbits(payload, count=pairs)
    bits = np.zeros((n, (n + 7) // 8), dtype=np.uint8)
    offset = 0
    for u in range(n - 1):
        row = np.zeros(n, dtype=np.uint8)
        row[u + 1:] = triangle[offset:offset + n - u - 1]
        offset += n - u - 1
        bits[u] = np.packbits(row)
    symmetrize_upper(bits, n)
    return Graph(n, bits)


####################################################################################################

def truth_path_for(graph_path: str) -> str:
    """`graphs/foo.sgrb` -> `graphs/foo.truth.json`."""
    base, _ = os.path.splitext(graph_path)
    return f"{base}.truth.json"


def write_truth(path: str, instance: PlantedCoverInstance):
    lib.write_json_file(path, {
        "params": instance.params.to_json(),
        "seed": instance.seed,
        "generator": instance.generator,
        "cliques": [sorted(c) for c in instance.planted_cliques],
        "background_edge_count": instance.background.m,
    })


def read_truth_file(path: str) -> dict:
    """
    Reads a ground-truth file, recording the access in `state.truth_files_opened`.
    """
    state.truth_files_opened.append(os.path.abspath(path))
    try:
        return lib.read_json_file(path)
    except (OSError, ValueError) as e:
        raise lib.extend_exception(e, prefix=f"Failed to read truth file {path}: ") from None


def load_instance(graph_path: str, truth_path: str) -> PlantedCoverInstance:
    """
    Rebuilds a :py:class:`PlantedCoverInstance` from its public graph and its truth file.

    The background edges are regenerated from the stored seed (generation is deterministic); the
    stored background edge count guards against a mismatch. Instances made by amplification
    cannot be regenerated this way, their background is then left unknown (`None`).
    """
    graph = read_graph(graph_path)
    truth = read_truth_file(truth_path)
    params = PlantedCoverParams(**truth["params"])
    if params.n != graph.n:
        raise lib.DimensionMismatchError(
            f"truth file is for n={params.n} but the graph has n={graph.n}")
    background = None
    if truth.get("generator", "planted_cover") == "planted_cover":
        background = gen_gnp(params.n, params.p, truth["seed"], tag="background")
        if background.m != truth["background_edge_count"]:
            raise lib.InvalidInputError(
                f"regenerated background has {background.m} edges, the truth file records "
                f"{truth['background_edge_count']}")
    return PlantedCoverInstance(
        graph=graph,
        background=background,
        planted_cliques=[frozenset(c) for c in truth["cliques"]],
        params=params,
        seed=truth["seed"],
        generator=truth.get("generator", "planted_cover"))

####################################################################################################
