"""Quantum invariants of plumbed 3-manifolds with H-shaped graphs.

Every command returns ``(exit_code, report)`` where ``report`` is the same
JSON document the ``qtop`` command line tool prints.
"""

import json

from . import _qtop
from ._qtop import ConsistencyError, InputError, dataset_names

__all__ = [
    "analyze",
    "wrt",
    "zhat",
    "verify",
    "cone_basis",
    "dataset_names",
    "InputError",
    "ConsistencyError",
]


def _run(command, graph, ks=(), emax=None, schedule=(), **kw):
    if not isinstance(graph, str):
        graph = json.dumps(graph)
    if isinstance(ks, int):
        ks = [ks]
    if emax is not None:
        emax = str(emax)
    code, text = _qtop.run(command, graph, list(ks), emax, list(schedule), **kw)
    return code, json.loads(text)


def analyze(graph="poincare"):
    return _run("analyze", graph)


def wrt(graph="poincare", k=(2,), brute_cap=7, precision=128):
    return _run("wrt", graph, k, brute_cap=brute_cap, precision=precision)


def zhat(graph="poincare", k=2, emax=None):
    return _run("zhat", graph, k, emax)


def verify(graph="poincare", k=(2, 3), seed=42, schedule=(), order=3, orientation="auto"):
    return _run("verify", graph, k, schedule=schedule, order=order, seed=seed, orientation=orientation)


def cone_basis(S):
    """Cone basis for an indefinite 2x2 form S (nested lists of ints)."""
    return json.loads(_qtop.cone_basis([list(map(int, row)) for row in S]))
