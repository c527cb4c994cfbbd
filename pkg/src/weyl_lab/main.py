import sys

from weyl_lab.core.constants import ensure_runtime_dirs
from weyl_lab.presentation.cli import run


def main() -> None:
    ensure_runtime_dirs()
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
