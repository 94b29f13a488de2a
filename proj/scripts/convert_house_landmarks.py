"""Converts the CMU "house" landmark sequence into per-frame CSV files.

The sequence (111 frames, 30 hand-labelled points per frame) is part of the
CMU VASC image database and is redistributed by several graph-matching
benchmark packages. Download a copy yourself and point this script at the
directory holding the per-frame landmark text files; each file holds 30 lines
of whitespace-separated "x y" pixel coordinates. Output files are named
frame_NNN.csv so that `rigidmatch sequence` can pick them up.
"""
import argparse
import re
from pathlib import Path


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("source", type=Path, help="directory with the landmark text files")
    parser.add_argument("out", type=Path, help="output directory")
    parser.add_argument("--pattern", default="*", help="glob selecting landmark files (default: all files)")
    args = parser.parse_args()

    args.out.mkdir(parents=True, exist_ok=True)
    written = 0
    for path in sorted(args.source.glob(args.pattern)):
        match = re.search(r"(\d+)\D*$", path.name)
        if not path.is_file() or not match:
            continue
        rows = []
        for line in path.read_text().splitlines():
            fields = line.split()
            if len(fields) >= 2:
                rows.append(f"{float(fields[0])!r},{float(fields[1])!r}")
        if not rows:
            continue
        (args.out / f"frame_{int(match.group(1)):03d}.csv").write_text("\n".join(rows) + "\n")
        written += 1
    print(f"wrote {written} frames to {args.out}")


if __name__ == "__main__":
    main()
