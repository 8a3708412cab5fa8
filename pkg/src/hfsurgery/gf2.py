"""Linear algebra over the two-element field.

Vectors are Python ints used as bitmasks; bit ``i`` is the coefficient of
basis element ``i``.
"""

from __future__ import annotations


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace."""

    def __init__(self, vectors=()):
        self._pivots: dict[int, int] = {}
        for v in vectors:
            self.add(v)

    def __len__(self):
        return len(self._pivots)

    def reduce(self, v: int) -> int:
        while v:
            top = v.bit_length() - 1
            row = self._pivots.get(top)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        """Insert ``v``; return True if it enlarged the span."""
        v = self.reduce(v)
        if not v:
            return False
        self._pivots[v.bit_length() - 1] = v
        return True

    def vectors(self) -> list[int]:
        return list(self._pivots.values())

    def __contains__(self, v: int) -> bool:
        return self.reduce(v) == 0


def rank(vectors) -> int:
    return len(Echelon(vectors))


def kernel(images: list[int]) -> list[int]:
    """Basis of the kernel of the map sending basis element ``i`` to ``images[i]``.

    Kernel vectors are returned as bitmasks over the domain basis.
    """
    n = len(images)
    pivots: dict[int, tuple[int, int]] = {}
    out = []
    for i, img in enumerate(images):
        combo = 1 << i
        while img:
            top = img.bit_length() - 1
            hit = pivots.get(top)
            if hit is None:
                pivots[top] = (img, combo)
                break
            img ^= hit[0]
            combo ^= hit[1]
        else:
            out.append(combo)
    assert len(out) + len(pivots) == n
    return out


def apply(images: list[int], v: int) -> int:
    """Image of the domain vector ``v`` under the map with column images ``images``."""
    out = 0
    i = 0
    while v:
        if v & 1:
            out ^= images[i]
        v >>= 1
        i += 1
    return out
