"""Shared fixtures and test-local oracles.

The oracles here are deliberately primitive: plain-Python loops over all
spin states, all edge subsets, or all matchings.  They never call the
library's own enumeration code, so every identity gets checked by two
independent routes.
"""

from __future__ import annotations

import cmath
import itertools
import random

import pytest

from bozon import builtin, dual


# ------------------------------------------------------------ oracles


def oracle_partition(m, values, fixed=None):
    """Spin sum of prod_e exp(J_e s_u s_v) with arbitrary complex J_e."""
    fixed = dict(fixed or {})
    free = [v for v in range(m.vertex_count) if v not in fixed]
    ends = [m.edge_endpoints(e) for e in range(m.edge_count)]
    total = 0j
    for assign in itertools.product((1, -1), repeat=len(free)):
        spin = dict(zip(free, assign))
        spin.update(fixed)
        w = 1 + 0j
        for e, (u, v) in enumerate(ends):
            w *= cmath.exp(values[e] * spin[u] * spin[v])
        total += w
    return total


def oracle_expectation(m, values, vertices, fixed=None):
    """E[prod s_v] as a ratio of two oracle spin sums."""
    fixed = dict(fixed or {})
    free = [v for v in range(m.vertex_count) if v not in fixed]
    ends = [m.edge_endpoints(e) for e in range(m.edge_count)]
    num = 0j
    den = 0j
    for assign in itertools.product((1, -1), repeat=len(free)):
        spin = dict(zip(free, assign))
        spin.update(fixed)
        w = 1 + 0j
        for e, (u, v) in enumerate(ends):
            w *= cmath.exp(values[e] * spin[u] * spin[v])
        den += w
        for v in vertices:
            w *= spin[v]
        num += w
    return num / den


def modified_values(j, gamma=(), gamma_star=()):
    """The defect rule applied by hand: +i*pi/2 on order edges, sign flip
    on disorder-crossed edges."""
    out = list(complex(v) for v in j.real)
    for e in gamma:
        out[e] += 1j * cmath.pi / 2
    for e in gamma_star:
        out[e] = -out[e]
    return out


def oracle_even_subgraphs(m):
    """All edge subsets with even degree at every vertex, as bitmasks."""
    ends = [m.edge_endpoints(e) for e in range(m.edge_count)]
    out = []
    for mask in range(1 << m.edge_count):
        deg = [0] * m.vertex_count
        for e, (u, v) in enumerate(ends):
            if mask >> e & 1:
                deg[u] += 1
                deg[v] += 1
        if all(d % 2 == 0 for d in deg):
            out.append(mask)
    return out


def oracle_matchings(n_vertices, edge_ends):
    """All perfect matchings of an abstract graph, as sorted edge tuples.
    Expands the lowest uncovered vertex; plain recursion, no library code."""
    by_vertex = [[] for _ in range(n_vertices)]
    for k, (u, v) in enumerate(edge_ends):
        by_vertex[u].append(k)
        by_vertex[v].append(k)

    out = []

    def grow(covered, chosen):
        v = next((x for x in range(n_vertices) if x not in covered), None)
        if v is None:
            out.append(tuple(sorted(chosen)))
            return
        for k in by_vertex[v]:
            a, b = edge_ends[k]
            w = b if a == v else a
            if w == v or w in covered:
                continue
            grow(covered | {v, w}, chosen + [k])

    grow(frozenset(), [])
    return out


def random_j(rng, count, low=0.1, high=2.0):
    return [rng.uniform(low, high) for _ in range(count)]


# ----------------------------------------------------------- fixtures


@pytest.fixture(scope="session")
def maps():
    names = ("k3", "c4", "grid_2_3", "grid_3_3", "wheel_4", "wheel_5")
    return {name: builtin(name) for name in names}


@pytest.fixture(scope="session")
def duals(maps):
    return {name: dual(m) for name, m in maps.items()}


@pytest.fixture
def rng():
    return random.Random(20240817)
