"""Plain-text cache for structure constants, keyed by (scheme, n, p).

Format (diffable, one file per configuration, named f_s{scheme}_n{n}_p{p}.sc):

    line 1: ``scheme n p d``        (p is 0 for the three-class basis)
    line 2: the d Gram diagonal entries
    rest:   one ``a b c value`` record per nonzero f^c_ab, 0-based indices

Entries with |f| <= 1e-12 are treated as zeros.  Values are written with
repr(), so a load/save round trip is bit-exact.
"""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np

from . import liealg
from .liealg import StructureConstants

SPARSE_EPS = 1e-12
ENV_CACHE_DIR = "SU_EINSTEIN_CACHE_DIR"


def cache_filename(scheme: int, n: int, p: int | None) -> str:
    return f"f_s{scheme}_n{n}_p{0 if p is None else p}.sc"


def save_structure_constants(path: str | Path, sc: StructureConstants) -> Path:
    path = Path(path)
    lines = [f"{sc.scheme} {sc.n} {0 if sc.p is None else sc.p} {sc.d}"]
    lines.append(" ".join(repr(float(v)) for v in np.diag(sc.gram)))
    c_idx, a_idx, b_idx = np.nonzero(np.abs(sc.f) > SPARSE_EPS)
    for c, a, b in zip(c_idx, a_idx, b_idx):
        lines.append(f"{a} {b} {c} {float(sc.f[c, a, b])!r}")
    path.write_text("\n".join(lines) + "\n")
    return path


def load_structure_constants(path: str | Path) -> StructureConstants:
    path = Path(path)
    lines = path.read_text().splitlines()
    scheme, n, p, d = (int(t) for t in lines[0].split())
    gram_diag = np.array([float(t) for t in lines[1].split()])
    if gram_diag.shape != (d,):
        raise ValueError(f"{path}: expected {d} Gram entries, got {gram_diag.size}")
    f = np.zeros((d, d, d))
    for line in lines[2:]:
        if not line.strip():
            continue
        a_s, b_s, c_s, v_s = line.split()
        f[int(c_s), int(a_s), int(b_s)] = float(v_s)
    basis = _rebuild_basis(scheme, n, p)
    if basis.dim != d:
        raise ValueError(f"{path}: dimension {d} does not match scheme={scheme} n={n} p={p}")
    return StructureConstants(
        d=d,
        f=f,
        gram=np.diag(gram_diag),
        scheme=scheme,
        n=n,
        p=None if scheme == 1 else p,
        class_of=basis.class_of.copy(),
    )


def _rebuild_basis(scheme: int, n: int, p: int) -> liealg.GeneratorBasis:
    if scheme == 1:
        return liealg.build_scheme1_basis(n)
    return liealg.build_scheme2_basis(n, p)


def resolve_cache_dir(cli_value: str | None) -> Path | None:
    """Cache directory from the CLI flag, else the environment, else None."""
    if cli_value:
        return Path(cli_value)
    env = os.environ.get(ENV_CACHE_DIR)
    return Path(env) if env else None


def fetch_structure_constants(scheme: int, n: int, p: int | None,
                              cache_dir: str | Path | None = None) -> StructureConstants:
    """Load structure constants from the cache, computing and storing on miss."""
    if cache_dir is None:
        basis = _rebuild_basis(scheme, n, 0 if p is None else p)
        return liealg.structure_constants(basis)
    cache_dir = Path(cache_dir)
    path = cache_dir / cache_filename(scheme, n, p)
    if path.exists():
        return load_structure_constants(path)
    basis = _rebuild_basis(scheme, n, 0 if p is None else p)
    sc = liealg.structure_constants(basis)
    cache_dir.mkdir(parents=True, exist_ok=True)
    save_structure_constants(path, sc)
    return sc
