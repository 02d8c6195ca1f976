"""Download and cache the public task dataset.

The cache is content-addressed: every task file's digest is recorded in a
manifest, warm-cache calls never touch the network, and any corruption is
reported naming the offending file. Sources may be an HTTP(S) zip URL, a
local zip, or a local directory tree containing ``training/`` and
``evaluation/`` subdirectories.
"""

from __future__ import annotations

import hashlib
import io
import json
import shutil
import urllib.error
import urllib.request
import zipfile
from dataclasses import dataclass
from pathlib import Path

from .errors import ChecksumMismatch, NetworkError

DEFAULT_DATASET_URL = "https://github.com/fchollet/ARC/archive/refs/heads/master.zip"
SPLIT_DIRS = ("training", "evaluation")
MANIFEST_NAME = "checksums.json"


@dataclass(frozen=True)
class FetchResult:
    cache_dir: Path
    checksum: str
    file_count: int
    from_cache: bool

    def split_dir(self, split: str) -> Path:
        return self.cache_dir / split


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def dataset_checksum(files: dict[str, str]) -> str:
    joined = "\n".join(f"{name}\t{digest}" for name, digest in sorted(files.items()))
    return _sha256(joined.encode())


def verify_cache(cache_dir: str | Path) -> FetchResult | None:
    """Return the cached result if complete and intact; None if absent.

    Raises ChecksumMismatch (naming the file) when content was corrupted.
    """
    root = Path(cache_dir)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        return None
    manifest = json.loads(manifest_path.read_text())
    files: dict[str, str] = manifest["files"]
    for rel, digest in files.items():
        path = root / rel
        if not path.is_file():
            raise ChecksumMismatch(f"{rel}: missing from cache")
        if _sha256(path.read_bytes()) != digest:
            raise ChecksumMismatch(f"{rel}: content does not match recorded checksum")
    return FetchResult(
        cache_dir=root,
        checksum=manifest["dataset_checksum"],
        file_count=len(files),
        from_cache=True,
    )


def _read_source(url: str) -> bytes:
    if url.startswith(("http://", "https://", "file://")):
        try:
            with urllib.request.urlopen(url, timeout=60) as resp:
                return resp.read()
        except (urllib.error.URLError, OSError, TimeoutError) as e:
            raise NetworkError(f"cannot fetch {url}: {e}") from e
    path = Path(url)
    if not path.exists():
        raise NetworkError(f"source not found: {url}")
    return path.read_bytes()


def _tasks_from_zip(blob: bytes) -> dict[str, bytes]:
    out: dict[str, bytes] = {}
    with zipfile.ZipFile(io.BytesIO(blob)) as zf:
        for info in zf.infolist():
            parts = Path(info.filename).parts
            for split in SPLIT_DIRS:
                if split in parts and info.filename.endswith(".json"):
                    rel = f"{split}/{Path(info.filename).name}"
                    out[rel] = zf.read(info)
    return out


def _tasks_from_tree(root: Path) -> dict[str, bytes]:
    out: dict[str, bytes] = {}
    base = root / "data" if (root / "data").is_dir() else root
    for split in SPLIT_DIRS:
        d = base / split
        if d.is_dir():
            for f in sorted(d.glob("*.json")):
                out[f"{split}/{f.name}"] = f.read_bytes()
    return out


def fetch_dataset(
    url: str = DEFAULT_DATASET_URL, cache_dir: str | Path = "~/.cache/arcengine/arc"
) -> FetchResult:
    """Fetch (or reuse) the dataset; idempotent on a warm cache."""
    root = Path(cache_dir).expanduser()
    cached = verify_cache(root)
    if cached is not None:
        return cached

    source = Path(url)
    if not url.startswith(("http://", "https://", "file://")) and source.is_dir():
        tasks = _tasks_from_tree(source)
    else:
        blob = _read_source(url)
        tasks = _tasks_from_zip(blob)
    if not tasks:
        raise NetworkError(f"no task files found at {url}")

    if root.exists():
        shutil.rmtree(root)
    files: dict[str, str] = {}
    for rel, data in sorted(tasks.items()):
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(data)
        files[rel] = _sha256(data)
    checksum = dataset_checksum(files)
    (root / MANIFEST_NAME).write_text(
        json.dumps(
            {"files": files, "dataset_checksum": checksum, "source": url},
            indent=2,
            sort_keys=True,
        )
    )
    return FetchResult(cache_dir=root, checksum=checksum, file_count=len(files), from_cache=False)
