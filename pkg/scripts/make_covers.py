"""Write the built-in 512x512 cover set as PGM files (needs scikit-image).

    python3 scripts/make_covers.py covers/
"""

import sys

from wavemark.covers import write_covers

if __name__ == "__main__":
    for path in write_covers(sys.argv[1] if len(sys.argv) > 1 else "covers"):
        print(path)
