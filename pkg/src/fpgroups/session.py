"""Content-addressed session directories with a key=value manifest.

Every artifact is named by a digest of the command, its inputs and its
parameters, so rerunning the same command writes the same file name.  The
manifest holds one line per artifact::

    artifact=enum-3f2a...txt kind=report digest=... sha256=... argv=enum%20...

Values are percent-encoded so a line always splits on spaces.
"""

from __future__ import annotations

import fcntl
import hashlib
import shlex
from pathlib import Path
from typing import Mapping
from urllib.parse import quote, unquote

MANIFEST = "manifest.txt"


def digest(command: str, inputs: Mapping[str, str], params: Mapping[str, str]) -> str:
    h = hashlib.sha256()
    h.update(f"command={command}\n".encode())
    for prefix, d in (("input", inputs), ("param", params)):
        for k in sorted(d):
            h.update(f"{prefix}.{k}={quote(str(d[k]), safe='')}\n".encode())
    return h.hexdigest()


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def format_entry(entry: Mapping[str, str]) -> str:
    return " ".join(f"{k}={quote(str(v), safe='')}" for k, v in entry.items())


def parse_entry(line: str) -> dict[str, str]:
    out = {}
    for field in line.split():
        k, _, v = field.partition("=")
        out[k] = unquote(v)
    return out


class Session:
    def __init__(self, directory: str | Path):
        self.dir = Path(directory)
        self.dir.mkdir(parents=True, exist_ok=True)

    @property
    def manifest(self) -> Path:
        return self.dir / MANIFEST

    def entries(self) -> list[dict[str, str]]:
        if not self.manifest.exists():
            return []
        return [parse_entry(ln) for ln in self.manifest.read_text().splitlines() if ln.strip()]

    def store(
        self,
        kind: str,
        suffix: str,
        content: str | bytes,
        *,
        command: str,
        argv: list[str],
        inputs: Mapping[str, str],
        params: Mapping[str, str],
        label: str = "",
    ) -> Path:
        """Write one artifact and record it; returns its path.

        ``label`` distinguishes several artifacts of one kind from a single
        command (for example one presentation per derived-series level).
        """
        d = digest(command, inputs, params)
        stem = f"{command}-{kind}{'-' + label if label else ''}-{d[:16]}"
        name = f"{stem}.{suffix}"
        data = content.encode() if isinstance(content, str) else content
        path = self.dir / name
        path.write_bytes(data)
        entry = {
            "artifact": name,
            "kind": kind,
            "command": command,
            "digest": d,
            "sha256": hashlib.sha256(data).hexdigest(),
            "argv": shlex.join(argv),
        }
        for k in sorted(inputs):
            entry[f"input.{k}"] = inputs[k]
        for k in sorted(params):
            entry[f"param.{k}"] = params[k]
        line = format_entry(entry) + "\n"
        with open(self.manifest, "a+") as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                fh.seek(0)
                lines = fh.read().splitlines()
                # a rerun replaces nothing: same digest, same name, same bytes
                if not any(parse_entry(ln).get("artifact") == name for ln in lines if ln.strip()):
                    fh.write(line)
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)
        return path


def reproduce(entry: Mapping[str, str], scratch: str | Path) -> bool:
    """Rerun the command of a manifest entry in ``scratch`` and compare artifact bytes."""
    from . import cli

    argv = shlex.split(entry["argv"])
    for k, v in entry.items():
        if k.startswith("input.") and k.endswith(".sha256"):
            path = k[len("input."):-len(".sha256")]
            if file_digest(path) != v:
                raise ValueError(f"input file {path} changed since the artifact was made")
    cli.main(argv + ["--session", str(scratch), "--quiet"])
    produced = Path(scratch) / entry["artifact"]
    return produced.exists() and hashlib.sha256(produced.read_bytes()).hexdigest() == entry["sha256"]
