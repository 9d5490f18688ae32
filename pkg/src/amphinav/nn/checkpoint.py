"""Checkpoint I/O: JSON manifest + one little-endian float32 blob per network."""

import dataclasses
import json
import os
from typing import Dict, Optional, Tuple

import numpy as np

from .params import NetworkSpec, ParamSet

FORMAT_VERSION = 1
MANIFEST_NAME = "manifest.json"


class CheckpointError(RuntimeError):
    """Manifest/blob mismatch or malformed checkpoint."""


def save_checkpoint(directory: str, algorithm: str,
                    networks: Dict[str, Tuple[ParamSet, NetworkSpec]],
                    extra: Optional[dict] = None):
    """Write one .bin blob per network and a manifest describing them."""
    os.makedirs(directory, exist_ok=True)
    manifest = {"format_version": FORMAT_VERSION, "algorithm": algorithm,
                "dtype": "<f4", "networks": {}, "extra": extra or {}}
    for net_name, (ps, spec) in networks.items():
        entries = []
        offset = 0
        chunks = []
        for arr_name, arr in ps.arrays.items():
            data = arr.astype("<f4").tobytes()
            entries.append({"name": arr_name, "shape": list(arr.shape),
                            "offset": offset})
            offset += len(data)
            chunks.append(data)
        blob = f"{net_name}.bin"
        with open(os.path.join(directory, blob), "wb") as fh:
            fh.write(b"".join(chunks))
        manifest["networks"][net_name] = {
            "file": blob,
            "spec": dataclasses.asdict(spec),
            "arrays": entries,
            "nbytes": offset,
        }
    with open(os.path.join(directory, MANIFEST_NAME), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_checkpoint(directory: str):
    """Returns (algorithm, {net_name: (ParamSet, NetworkSpec)}, extra)."""
    path = os.path.join(directory, MANIFEST_NAME)
    try:
        with open(path) as fh:
            manifest = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"cannot read manifest at {path}: {exc}") from exc
    if manifest.get("format_version") != FORMAT_VERSION:
        raise CheckpointError(f"unsupported format_version "
                              f"{manifest.get('format_version')!r}")

    networks = {}
    for net_name, entry in manifest["networks"].items():
        spec = NetworkSpec(**entry["spec"])
        blob_path = os.path.join(directory, entry["file"])
        try:
            raw = open(blob_path, "rb").read()
        except OSError as exc:
            raise CheckpointError(f"missing blob {blob_path}") from exc
        if len(raw) != entry["nbytes"]:
            raise CheckpointError(f"{blob_path}: expected {entry['nbytes']} "
                                  f"bytes, found {len(raw)}")
        expected_shapes = spec.array_shapes()
        arrays = {}
        for arr in entry["arrays"]:
            shape = tuple(arr["shape"])
            if expected_shapes.get(arr["name"]) != shape:
                raise CheckpointError(f"array {arr['name']!r} shape {shape} "
                                      f"does not match spec {expected_shapes.get(arr['name'])}")
            count = int(np.prod(shape)) if shape else 1
            start = arr["offset"]
            stop = start + 4 * count
            if stop > len(raw):
                raise CheckpointError(f"array {arr['name']!r} overruns blob")
            data = np.frombuffer(raw[start:stop], dtype="<f4").astype(np.float64)
            arrays[arr["name"]] = data.reshape(shape)
        if set(arrays) != set(expected_shapes):
            raise CheckpointError(f"network {net_name!r} arrays do not match spec")
        networks[net_name] = (ParamSet(arrays), spec)
    return manifest["algorithm"], networks, manifest.get("extra", {})
