#!python3

import sys

from gjsd.cli import main


if __name__ == '__main__':
    sys.exit(main())


__author__ = 'GeneralizedJSD developers'
