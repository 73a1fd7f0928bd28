"""String specs for maps and chains used by the CLI and config files.

Maps::

    id:GROUP            identity on GROUP
    floor:n             k -> floor(k/n) on Z
    floor:n:coord:m     floor on one coordinate of Z^m
    incl:H:G            subgroup inclusion, e.g. incl:2Z:Z
    composite:n         incl(nZ < Z) o (floor on nZ)
    proj:k              Z x Z/k -> Z, (j, r) -> j
    chart:k             Z x Z/k -> Z, (j, r) -> k j + r
    fC:m:n              the n-to-1 map of BS(1,m)

Chains (all on Z)::

    index:n             [Z] - [nZ]
    pairs-boundary:n    boundary of the edges (nk, nk+1)
    steps-boundary      boundary of all edges (k, k+1)
    pushforward-floor:n (floor_n)_*[Z] - [Z]
"""
from __future__ import annotations

from .errors import SpecError
from .marked_group import ball
from .qi_maps import (
    QIMap,
    compose,
    floor_map_Z,
    floor_map_Zm,
    identity_map,
    inclusion_map,
    interleave_chart,
    projection_map,
    subgroup_floor_map,
)
from .uf_chain import (
    UFChain,
    boundary_1,
    difference,
    fundamental_class,
    index_chain,
    paired_edges,
    pushforward_chain,
    unit_edges,
)


def _int(s: str, what: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise SpecError(f"{what} must be an integer, got {s!r}") from None


def parse_map(spec: str) -> QIMap:
    parts = spec.split(":")
    kind, args = parts[0], parts[1:]
    if kind == "id" and len(args) == 1:
        return identity_map(args[0])
    if kind == "floor" and len(args) == 1:
        return floor_map_Z(_int(args[0], "n"))
    if kind == "floor" and len(args) == 3:
        return floor_map_Zm(_int(args[0], "n"), _int(args[1], "coord"), _int(args[2], "m"))
    if kind == "incl" and len(args) == 2:
        return inclusion_map(args[0], args[1])
    if kind == "composite" and len(args) == 1:
        n = _int(args[0], "n")
        return compose(inclusion_map(f"{n}Z", "Z"), subgroup_floor_map(n))
    if kind == "proj" and len(args) == 1:
        return projection_map(_int(args[0], "k"))
    if kind == "chart" and len(args) == 1:
        return interleave_chart(_int(args[0], "k"))
    if kind == "fC" and len(args) == 2:
        from .bs_model import f_C_map

        return f_C_map(f"BS(1,{_int(args[0], 'm')})", _int(args[1], "n"))
    raise SpecError(f"unknown map spec {spec!r}")


def parse_chain(spec: str, reach: int) -> UFChain:
    """``reach`` is the largest word length at which the chain will be evaluated."""
    parts = spec.split(":")
    kind, args = parts[0], parts[1:]
    if kind == "index" and len(args) == 1:
        return index_chain(_int(args[0], "n"))
    if kind == "pairs-boundary" and len(args) == 1:
        return boundary_1(paired_edges(_int(args[0], "n")), ball("Z", reach + 1))
    if kind == "steps-boundary" and not args:
        return boundary_1(unit_edges(), ball("Z", reach + 1))
    if kind == "pushforward-floor" and len(args) == 1:
        n = _int(args[0], "n")
        src = ball("Z", n * (reach + 2)).elements
        push = pushforward_chain(floor_map_Z(n), src, [(y,) for y in range(-reach, reach + 1)])
        return difference(push, fundamental_class("Z"))
    raise SpecError(f"unknown chain spec {spec!r}")
