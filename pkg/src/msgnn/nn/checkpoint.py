"""``MSGN`` checkpoint container.

Layout (little-endian): magic ``MSGN``, u32 format version, u64 length of a
UTF-8 JSON config block, the block, u32 tensor count, then per tensor: u16 name
length, name, u8 ndim, ndim x u64 dims, f64 data in C order.
"""
from __future__ import annotations

import json
import struct

import numpy as np

from .model import ModelConfig, MsgnnModel

MAGIC = b"MSGN"
VERSION = 1


def save_model(model: MsgnnModel, path) -> None:
    cfg = json.dumps(model.config_dict(), sort_keys=True).encode("utf-8")
    params = model.parameters()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IQ", VERSION, len(cfg)))
        fh.write(cfg)
        fh.write(struct.pack("<I", len(params)))
        for name, arr in params.items():
            key = name.encode("utf-8")
            fh.write(struct.pack("<H", len(key)))
            fh.write(key)
            fh.write(struct.pack("<B", arr.ndim))
            fh.write(struct.pack(f"<{arr.ndim}Q", *arr.shape))
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def load_model(path, graph=None) -> MsgnnModel:
    """Rebuild a model; pass ``graph`` to attach its Laplacian immediately."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if raw[:4] != MAGIC:
        raise ValueError("not an MSGN checkpoint")
    version, n_cfg = struct.unpack_from("<IQ", raw, 4)
    if version != VERSION:
        raise ValueError(f"unsupported checkpoint version {version}")
    pos = 16
    cfg = ModelConfig(**json.loads(raw[pos : pos + n_cfg].decode("utf-8")))
    pos += n_cfg
    (count,) = struct.unpack_from("<I", raw, pos)
    pos += 4
    params = {}
    for _ in range(count):
        (klen,) = struct.unpack_from("<H", raw, pos)
        pos += 2
        name = raw[pos : pos + klen].decode("utf-8")
        pos += klen
        (ndim,) = struct.unpack_from("<B", raw, pos)
        pos += 1
        shape = struct.unpack_from(f"<{ndim}Q", raw, pos)
        pos += 8 * ndim
        size = int(np.prod(shape)) if ndim else 1
        params[name] = np.frombuffer(raw, dtype="<f8", count=size, offset=pos).reshape(shape).copy()
        pos += 8 * size
    model = MsgnnModel.build(cfg)
    model.set_parameters(params)
    if graph is not None:
        model.attach(graph)
    return model
