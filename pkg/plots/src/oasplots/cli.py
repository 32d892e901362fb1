"""plot: render benchmark CSVs into figures.

Exit status: 0 success, 1 invalid input or unusable data.
"""

from __future__ import annotations

import argparse
import sys

from oasplots.data import PlotDataError
from oasplots.figures import (
    KINDS,
    NORMS,
    FigureSpec,
    plot_fixed_target,
    plot_scaling,
    plot_switch_hist,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> _Parser:
    parser = _Parser(prog="plot",
                     description="Figures from oasbench event CSVs")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", required=True, dest="inputs",
                        help="input CSV path(s), comma-separated")
    parser.add_argument("--norm", choices=NORMS, default="none",
                        help="normalization for the scaling figure")
    parser.add_argument("--targets", default=None,
                        help="fixed-target distances, comma-separated")
    parser.add_argument("--out", required=True, help="output image path "
                        "(format by extension: .png, .svg, .pdf)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    targets = None
    if args.targets is not None:
        try:
            targets = [int(t) for t in args.targets.split(",") if t.strip()]
        except ValueError:
            print(f"error: bad target list {args.targets!r}", file=sys.stderr)
            return 1
    try:
        spec = FigureSpec(kind=args.kind,
                          inputs=[p for p in args.inputs.split(",") if p],
                          out=args.out, norm=args.norm, targets=targets)
        if spec.kind == "scaling":
            meta = plot_scaling(spec)
        elif spec.kind == "fixed_target":
            meta = plot_fixed_target(spec)
        else:
            meta = plot_switch_hist(spec)
    except PlotDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {meta['out']}")
    if meta["kind"] == "switch_hist":
        print(f"  markers: band={meta['d_prime']:.2f}"
              + (f" guard={meta['d_guard']:.2f}" if meta["d_guard"] else ""))
    elif meta["kind"] == "fixed_target" and meta["crossings"]:
        for a, b, t in meta["crossings"]:
            print(f"  curves {a} and {b} cross near distance {t}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
