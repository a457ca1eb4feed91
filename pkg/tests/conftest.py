import numpy as np
import pytest


class ScriptedRNG:
    """Stand-in generator that replays scripted draws.

    ``uniforms`` feeds ``random()`` calls (scalar or vector, consumed in
    order) and ``normals`` feeds ``standard_normal()``; ``integers`` feeds
    ``integers()``.  Lets tests pin down a kernel's acceptance arithmetic on a
    hand-chosen proposal.
    """

    def __init__(self, uniforms=(), normals=(), integers=()):
        self._uniforms = list(uniforms)
        self._normals = list(normals)
        self._integers = list(integers)

    def random(self, size=None):
        if size is None:
            return self._uniforms.pop(0)
        out = np.array([self._uniforms.pop(0) for _ in range(int(size))])
        return out

    def standard_normal(self, size=None):
        if size is None:
            return self._normals.pop(0)
        return np.array([self._normals.pop(0) for _ in range(int(size))])

    def integers(self, *args, **kwargs):
        return self._integers.pop(0)


@pytest.fixture
def scripted_rng():
    return ScriptedRNG
