"""Plain-text density-matrix files for the ``measures`` command.

Line 1 holds the dimension ``d``; then ``d`` lines follow, each with ``d``
whitespace-separated entries written as ``re,im``. Blank lines and lines
starting with ``#`` are ignored.
"""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .linalg import DensityMatrix


def parse_state(text: str, source: str = "<state>") -> DensityMatrix:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(n, ln) for n, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ConfigurationError(f"{source}: empty state file")
    n0, head = lines[0]
    try:
        dim = int(head)
    except ValueError:
        raise ConfigurationError(f"{source}:{n0}: expected the dimension, got {head!r}") from None
    if dim < 1:
        raise ConfigurationError(f"{source}:{n0}: dimension must be positive")
    entries = []
    for n, ln in lines[1:]:
        for tok in ln.split():
            try:
                re_part, im_part = tok.split(",")
                entries.append(complex(float(re_part), float(im_part)))
            except ValueError:
                raise ConfigurationError(f"{source}:{n}: bad entry {tok!r}, expected re,im") from None
    if len(entries) != dim * dim:
        raise ConfigurationError(f"{source}: expected {dim * dim} entries for dimension {dim}, got {len(entries)}")
    m = np.array(entries, dtype=np.complex128).reshape(dim, dim)
    labels = ("A", "B") if dim == 4 else ()
    return DensityMatrix(m, labels)


def format_state(rho) -> str:
    m = np.asarray(rho.matrix if isinstance(rho, DensityMatrix) else rho)
    rows = [" ".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row) for row in m]
    return "\n".join([str(m.shape[0]), *rows]) + "\n"


def load_state(path) -> DensityMatrix:
    with open(path, encoding="utf-8") as fh:
        return parse_state(fh.read(), source=str(path))
