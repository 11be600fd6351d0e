"""Search 5-strand plat theta curves for one whose subknots all have trivial
Jones polynomial but whose normalized Yamada polynomial is not that of the
trivial theta curve.

    python3 scripts/search_brunnian.py [max_length]
"""

import itertools
import sys

from thetapoly.bracket import jones
from thetapoly.diagram import DiagramError
from thetapoly.fixtures import KINOSHITA_PLAT, plat_theta, trivial_theta
from thetapoly.laurent import ONE
from thetapoly.theta import ThetaError, normalized_yamada, subknot, twist_numbers, validate_theta


def candidates(length):
    letters = [(i, s) for i in range(1, 5) for s in (1, -1)]
    for word in itertools.product(letters, repeat=length):
        # skip words with an adjacent cancelling pair
        if any(a[0] == b[0] and a[1] == -b[1] for a, b in zip(word, word[1:])):
            continue
        yield word


def main(max_length):
    trivial = normalized_yamada(validate_theta(trivial_theta()))
    for length in range(1, max_length + 1):
        for word in candidates(length):
            try:
                t = validate_theta(plat_theta(word, **KINOSHITA_PLAT))
                n = twist_numbers(t)
            except (DiagramError, ThetaError):
                continue
            if not all(jones(subknot(t, i)) == ONE for i in (1, 2, 3)):
                continue
            if normalized_yamada(t, n) != trivial:
                print(length, word, n.as_tuple())
                return word
    return None


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 6)
