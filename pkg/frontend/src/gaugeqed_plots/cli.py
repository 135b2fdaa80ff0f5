import argparse
import sys

from .render import render, RenderError, SPECS


def main(argv=None):
    parser = argparse.ArgumentParser(prog="plots",
                                     description="render gaugeqed CSV datasets")
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render a CSV to an image")
    p_render.add_argument("csv")
    p_render.add_argument("--spec", default=None,
                          choices=sorted(SPECS), help="override scenario detection")
    p_render.add_argument("--out", default=None, help="output image (.png or .svg)")
    args = parser.parse_args(argv)

    try:
        out = render(args.csv, spec_name=args.spec, out=args.out)
    except (RenderError, OSError) as exc:
        print(f"render error: {exc}", file=sys.stderr)
        return 1
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
