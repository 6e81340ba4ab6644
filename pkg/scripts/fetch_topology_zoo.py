#!/usr/bin/env python3
"""Download the Internet Topology Zoo GraphML archive and unpack it.

No topology data ships with this repository. The archive is fetched from the
Zoo's website; pass --url to use a mirror or a pinned snapshot. Reports record
a SHA-256 over the normalized graphs, so runs on different snapshots can be
told apart.

    python scripts/fetch_topology_zoo.py data/zoo
    FAILOVER_ZOO_DIR=data/zoo python scripts/run_acceptance.py
"""

import argparse
import hashlib
import io
import sys
import urllib.request
import zipfile
from pathlib import Path

DEFAULT_URL = "http://www.topology-zoo.org/files/archive.zip"


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("dest", type=Path)
    ap.add_argument("--url", default=DEFAULT_URL)
    ap.add_argument("--archive", type=Path, help="use an already downloaded zip instead of fetching")
    args = ap.parse_args()

    if args.archive:
        blob = args.archive.read_bytes()
    else:
        print(f"fetching {args.url}", file=sys.stderr)
        with urllib.request.urlopen(args.url, timeout=120) as resp:
            blob = resp.read()
    print(f"archive sha256 {hashlib.sha256(blob).hexdigest()}", file=sys.stderr)

    args.dest.mkdir(parents=True, exist_ok=True)
    count = 0
    with zipfile.ZipFile(io.BytesIO(blob)) as zf:
        for info in zf.infolist():
            name = Path(info.filename).name
            if info.is_dir() or not name.endswith(".graphml"):
                continue
            (args.dest / name).write_bytes(zf.read(info))
            count += 1
    print(f"wrote {count} GraphML files to {args.dest}")
    return 0 if count else 1


if __name__ == "__main__":
    sys.exit(main())
