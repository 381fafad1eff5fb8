"""Index file format (magic "SRR1", little-endian, length-prefixed sections).

Layout: magic, u16 format version, a fixed header (sizes and configuration),
then a section table of named numpy arrays: rank-space map, point tables,
per-level bit words, materialized coordinate arrays, RMQ bundle keys and the
NodeAux value arrays. Derived o(n)-bit directories (bit-vector rank/select
directories, packed argopt tables, block geometry, sub-block lookup tables)
are rebuilt deterministically on load — format v1 behavior, so loaded indexes
answer identically to the saved ones without storing redundant data.
"""

from __future__ import annotations

import struct

import numpy as np

from .model import PointSet, RankSpaceMap
from .successor import SuccessorConfig
from .wavetree import BallInheritanceConfig

MAGIC = b"SRR1"
VERSION = 1

_HEADER = struct.Struct("<qqbiqqbbd")
# n, n_hat, ball_mode, stride, block_size, sub_block_size, subblock_mode,
# pred_mode, epsilon   (-1 encodes "default"/None)

_BALL_MODES = ["walk", "skip", "full"]


class IndexFileError(ValueError):
    pass


def _write_section(f, name: str, arr: np.ndarray) -> None:
    arr = np.ascontiguousarray(arr)
    dt = arr.dtype.newbyteorder("<")
    data = arr.astype(dt, copy=False).tobytes()
    nb = name.encode()
    f.write(struct.pack("<H", len(nb)))
    f.write(nb)
    db = dt.str.encode()
    f.write(struct.pack("<H", len(db)))
    f.write(db)
    f.write(struct.pack("<B", arr.ndim))
    for dim in arr.shape:
        f.write(struct.pack("<Q", dim))
    f.write(struct.pack("<Q", len(data)))
    f.write(data)


def _read_sections(f) -> dict[str, np.ndarray]:
    out = {}
    (count,) = struct.unpack("<I", f.read(4))
    for _ in range(count):
        (nlen,) = struct.unpack("<H", f.read(2))
        name = f.read(nlen).decode()
        (dlen,) = struct.unpack("<H", f.read(2))
        dt = np.dtype(f.read(dlen).decode())
        (ndim,) = struct.unpack("<B", f.read(1))
        shape = tuple(struct.unpack("<Q", f.read(8))[0] for _ in range(ndim))
        (nbytes,) = struct.unpack("<Q", f.read(8))
        raw = f.read(nbytes)
        if len(raw) != nbytes:
            raise IndexFileError(f"truncated section {name!r}")
        out[name] = np.frombuffer(raw, dtype=dt).reshape(shape).copy()
    return out


def save_index(index, path) -> None:
    tree, aux, cfg = index.tree, index.aux, index.successor_cfg
    sections: list[tuple[str, np.ndarray]] = []
    if index.rank_map is not None:
        sections.append(("rankmap/xs", index.rank_map.xs_sorted))
        sections.append(("rankmap/ys", index.rank_map.ys_sorted))
    sections.append(("points/ys_by_x", index.ps.ys_by_x))
    if tree.L:
        sections.append(
            ("tree/words", np.vstack([bv.words for bv in tree.levels]))
        )
    for lev, arr in sorted(tree.mat.items()):
        sections.append((f"tree/mat/{lev:02d}", arr))
    sections.append(("rmq/keys", tree.level_y))
    sections.append(("aux/yrank", aux.yrank))
    sections.append(("aux/rpos", aux.rpos))
    if aux.stored_y is not None:
        sections.append(("aux/stored_y", aux.stored_y))
    for lev in range(tree.L + 1):
        sections.append((f"aux/d_min/{lev:02d}", aux.d_min[lev]))
        sections.append((f"aux/d_max/{lev:02d}", aux.d_max[lev]))
        sections.append((f"aux/e_min/{lev:02d}", aux.e_min[lev]))
        sections.append((f"aux/e_max/{lev:02d}", aux.e_max[lev]))
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<H", VERSION))
        f.write(
            _HEADER.pack(
                index.n,
                tree.n_hat,
                _BALL_MODES.index(index.ball.mode),
                -1 if index.ball.stride is None else index.ball.stride,
                -1 if cfg.block_size is None else cfg.block_size,
                -1 if cfg.sub_block_size is None else cfg.sub_block_size,
                0 if cfg.subblock_mode == "scan" else 1,
                0 if cfg.block_pred_mode == "probe" else 1,
                cfg.epsilon,
            )
        )
        f.write(struct.pack("<I", len(sections)))
        for name, arr in sections:
            _write_section(f, name, arr)


def load_index(path, engine: str = "auto"):
    from .index import RangeSuccessorIndex

    with open(path, "rb") as f:
        if f.read(4) != MAGIC:
            raise IndexFileError("not an SRR1 index file")
        (version,) = struct.unpack("<H", f.read(2))
        if version != VERSION:
            raise IndexFileError(f"unsupported format version {version}")
        hdr = _HEADER.unpack(f.read(_HEADER.size))
        sections = _read_sections(f)
    (n, n_hat, ball_mode, stride, bsz, ssz, sbm, bpm, eps) = hdr
    ball = BallInheritanceConfig(
        _BALL_MODES[ball_mode], None if stride < 0 else stride
    )
    cfg = SuccessorConfig(
        None if bsz < 0 else bsz,
        None if ssz < 0 else ssz,
        "scan" if sbm == 0 else "table",
        "probe" if bpm == 0 else "store_y",
        eps,
    )
    ps = PointSet(sections["points/ys_by_x"])
    if ps.n != n:
        raise IndexFileError("header/point-count mismatch")
    rank_map = None
    if "rankmap/xs" in sections:
        rank_map = RankSpaceMap(sections["rankmap/xs"], sections["rankmap/ys"])
    index = RangeSuccessorIndex(ps, rank_map, ball, cfg, engine="py")
    # cross-check the stored structural sections against the rebuild
    if index.tree.L and not np.array_equal(
        sections["tree/words"], np.vstack([bv.words for bv in index.tree.levels])
    ):
        raise IndexFileError("stored bit words disagree with the point set")
    if not np.array_equal(sections["rmq/keys"], index.tree.level_y):
        raise IndexFileError("stored rmq keys disagree with the point set")
    index.set_engine(engine)
    return index
