import sys

from ._core import main as _main


def main(argv=None):
    argv = sys.argv if argv is None else argv
    code, out, err = _main(["normhol", *argv[1:]])
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
