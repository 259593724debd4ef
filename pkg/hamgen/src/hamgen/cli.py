"""hamgen command line: generate operator files for a preset or xyz geometry."""

from __future__ import annotations

import argparse
import sys

from .generate import generate
from .presets import PRESETS
from .verify import verify


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="hamgen",
        description=(
            "Generate qubit Hamiltonian and observable files (STO-6G, Jordan-Wigner, "
            "interleaved spin orbitals). Coordinates are in atomic units."
        ),
    )
    parser.add_argument("target", help=f"preset name {tuple(PRESETS)} or an xyz file")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--frozen-core", type=int, default=None, help="frozen orbital count (xyz input)")
    parser.add_argument("--skip-verify", action="store_true", help="skip the post-generation checks")
    args = parser.parse_args(argv)

    try:
        out_dir = generate(args.target, args.out, frozen_core=args.frozen_core)
    except Exception as exc:  # noqa: BLE001 - single reporting point for the CLI
        print(f"generation failed: {exc}", file=sys.stderr)
        return 1
    print(f"wrote operator files to {out_dir}")
    if args.skip_verify:
        return 0
    report = verify(out_dir)
    print(report)
    return 0 if report.ok else 1


if __name__ == "__main__":
    sys.exit(main())
