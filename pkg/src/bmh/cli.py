"""Command-line front end: file I/O, fixture generation, report emission.

Exit codes: 0 = pass, 1 = mathematical failure, 2 = input error.  JSON
reports are deterministic (sorted keys); text summaries are for humans and
never parsed by the test suite.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from typing import List, Optional

from .intlinalg import AbelianGroup, CompositionNonzero, NotChainMap
from .simplicial import (
    Chain,
    Complex,
    Simplex,
    SimplexNotInComplex,
    SimplicialPair,
    NotFull,
    boundary,
    chain_from_json,
    chain_to_json,
    complex_from_json,
    complex_to_json,
    cylinder_pair,
    mobius_pair,
    pair_from_json,
    pair_to_json,
    simplex_pair,
    sphere,
    torus,
    unit_chain,
)
from .bmhomology import (
    NonOrientable,
    NotCover,
    NotPseudoManifold,
    SimplexAtInfinity,
    bm_homology,
    fundamental_cycle,
    mv_check,
    pd_check,
)
from .pseudocycle import (
    BoundaryMismatch,
    DegenerateSimplex,
    InconsistentPairing,
    NotACycle,
    NotClosedRelL,
    bordism_to_json,
    check_bordism,
    check_pseudomanifold,
    expand_to_unit,
    glue,
    nullbordism,
    pair_faces,
    phi,
    pm_to_json,
    psi,
    roundtrip_check,
)

EXIT_OK = 0
EXIT_MATH = 1
EXIT_INPUT = 2

_MATH_ERRORS = (
    NonOrientable, NotPseudoManifold, SimplexAtInfinity, NotCover,
    NotACycle, InconsistentPairing, NotClosedRelL, BoundaryMismatch,
    DegenerateSimplex, CompositionNonzero, NotChainMap,
    SimplexNotInComplex, NotFull,
)


class ParseError(ValueError):
    """Unreadable or structurally invalid input file."""


class InvariantViolation(ValueError):
    """Input parsed but does not satisfy the type's invariants."""


@dataclass
class RunConfig:
    command: str
    paths: List[str]
    format: str = "text"
    seed: int = 0
    degrees: Optional[range] = None


# ---------------------------------------------------------------------------
# input handling


def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise ParseError("cannot read %s: %s" % (path, e))
    except json.JSONDecodeError as e:
        raise ParseError("%s is not valid JSON: %s" % (path, e))


def _load_pair(path: str) -> SimplicialPair:
    data = _read_json(path)
    if not isinstance(data, dict):
        raise ParseError("%s: expected a JSON object describing a pair" % path)
    try:
        return pair_from_json(data)
    except (ValueError, TypeError, KeyError) as e:
        raise InvariantViolation("%s: %s" % (path, e))


def _load_chain(path: str, fallback_degree: Optional[int] = None) -> Chain:
    data = _read_json(path)
    if not isinstance(data, list):
        raise ParseError("%s: expected a JSON list of {s, a} entries" % path)
    try:
        if not data and fallback_degree is not None:
            return Chain(fallback_degree, {})
        return chain_from_json(data)
    except (ValueError, TypeError, KeyError) as e:
        raise InvariantViolation("%s: %s" % (path, e))


def _parse_degrees(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            return range(int(a), int(b) + 1)
        d = int(text)
        return range(d, d + 1)
    except ValueError:
        raise ParseError("bad degree filter %r (want a..b)" % text)


def _group_json(g: AbelianGroup) -> dict:
    return {"rank": g.rank, "torsion": list(g.torsion), "name": str(g)}


def _emit(cfg: RunConfig, payload: dict, lines: List[str]):
    if cfg.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in lines:
            print(line)


# ---------------------------------------------------------------------------
# commands


def cmd_homology(cfg: RunConfig) -> int:
    pair = _load_pair(cfg.paths[0])
    h = bm_homology(pair)
    degrees = cfg.degrees if cfg.degrees is not None else range(0, pair.k.dim + 1)
    groups = {d: h.group(d) for d in degrees}
    payload = {
        "command": "homology",
        "groups": {"H_%d" % d: _group_json(g) for d, g in groups.items()},
        "summary": ", ".join("H_%d=%s" % (d, g) for d, g in groups.items()),
    }
    lines = ["H_%d = %s" % (d, g) for d, g in groups.items()]
    if not groups:
        lines = ["(no degrees: empty complex)"]
    _emit(cfg, payload, lines)
    return EXIT_OK


def cmd_fundamental(cfg: RunConfig, seed_simplex: Optional[str],
                    seed_sign: int) -> int:
    pair = _load_pair(cfg.paths[0])
    seed = None
    if seed_simplex is not None:
        try:
            verts = tuple(sorted(int(v) for v in seed_simplex.split(",")))
            seed = (Simplex(verts), seed_sign)
        except ValueError as e:
            raise ParseError("bad seed simplex %r: %s" % (seed_simplex, e))
    fc = fundamental_cycle(pair, seed)
    payload = {
        "command": "fundamental",
        "cycle": chain_to_json(fc.cycle),
        "orientation": [{"s": list(s.vertices), "sign": sg}
                        for s, sg in sorted(fc.orientation.items())],
    }
    lines = ["fundamental cycle: %d top simplices, all coefficients +-1"
             % len(fc.cycle.coeffs)]
    _emit(cfg, payload, lines)
    return EXIT_OK


def cmd_glue(cfg: RunConfig) -> int:
    pair = _load_pair(cfg.paths[1])
    c = _load_chain(cfg.paths[0], fallback_degree=pair.k.dim)
    instances = expand_to_unit(c)
    pairing = pair_faces(instances, pair)
    m = glue(instances, pairing, c.degree)
    report = check_pseudomanifold(m)
    payload = {
        "command": "glue",
        "pseudomanifold": pm_to_json(m),
        "check": {
            "ok": report.ok,
            "interior_cells": report.interior_cells,
            "boundary_cells": report.boundary_cells,
            "codim2_cells": report.codim2_cells,
            "failures": list(report.failures),
        },
    }
    lines = ["glued %d instances: cells %s, euler %d"
             % (len(m.instances),
                {d: len(m.cells(d)) for d in range(m.dimension + 1)}, m.euler()),
             "pseudomanifold check: %s" % ("ok" if report.ok else "FAILED")]
    _emit(cfg, payload, lines)
    return EXIT_OK if report.ok else EXIT_MATH


def cmd_roundtrip(cfg: RunConfig) -> int:
    pair = _load_pair(cfg.paths[1])
    c = _load_chain(cfg.paths[0], fallback_degree=pair.k.dim)
    ok = roundtrip_check(c, pair)
    coords = phi(psi(c, pair))
    payload = {"command": "roundtrip", "pass": ok, "coordinates": list(coords)}
    _emit(cfg, payload, ["roundtrip: %s (class %s)" % ("pass" if ok else "FAIL",
                                                       list(coords))])
    return EXIT_OK if ok else EXIT_MATH


def cmd_pd(cfg: RunConfig) -> int:
    pair = _load_pair(cfg.paths[0])
    rep = pd_check(pair)
    degrees = {}
    for q in sorted(rep.matches):
        entry = {
            "cohomology": _group_json(rep.cohomology[q]),
            "homology": _group_json(rep.homology[q]),
            "match": rep.matches[q],
        }
        if rep.closed:
            entry["cap_iso"] = rep.cap_iso[q]
        degrees[str(q)] = entry
    payload = {
        "command": "pd",
        "ok": rep.ok,
        "closed": rep.closed,
        "subdivided": rep.subdivided,
        "degrees": degrees,
    }
    lines = ["duality %s (n=%d%s)" % ("ok" if rep.ok else "FAILED", rep.n,
                                      ", subdivided" if rep.subdivided else "")]
    for q in sorted(rep.matches):
        lines.append("  q=%d: H^q=%s vs H_%d=%s %s" % (
            q, rep.cohomology[q], rep.n - q, rep.homology[q],
            "match" if rep.matches[q] else "MISMATCH"))
    _emit(cfg, payload, lines)
    return EXIT_OK if rep.ok else EXIT_MATH


def cmd_mv(cfg: RunConfig) -> int:
    data = _read_json(cfg.paths[0])
    if not isinstance(data, dict):
        raise ParseError("%s: expected a cover object" % cfg.paths[0])
    try:
        k = complex_from_json(data["complex"])
        u = complex_from_json(data["u"])
        v = complex_from_json(data["v"])
    except (ValueError, TypeError, KeyError) as e:
        raise InvariantViolation("%s: %s" % (cfg.paths[0], e))
    if cfg.degrees is not None:
        degrees = cfg.degrees
    elif "degrees" in data:
        lo, hi = data["degrees"]
        degrees = range(int(lo), int(hi) + 1)
    else:
        degrees = range(0, k.dim + 1)
    rep = mv_check(k, u, v, degrees)
    payload = {
        "command": "mv",
        "ok": rep.ok,
        "exact_at": [[d, node, ok] for (d, node), ok in sorted(rep.exact_at.items())],
        "groups": {
            "intersection": {str(d): _group_json(g) for d, g in rep.w_groups.items()},
            "total": {str(d): _group_json(g) for d, g in rep.k_groups.items()},
        },
    }
    lines = ["mayer-vietoris %s over degrees %s"
             % ("exact" if rep.ok else "NOT EXACT", list(rep.degrees))]
    for (d, node), ok in sorted(rep.exact_at.items()):
        lines.append("  degree %d, %s node: %s" % (d, node, "exact" if ok else "FAIL"))
    _emit(cfg, payload, lines)
    return EXIT_OK if rep.ok else EXIT_MATH


def cmd_nullbordism(cfg: RunConfig) -> int:
    pair = _load_pair(cfg.paths[1])
    c = _load_chain(cfg.paths[0], fallback_degree=pair.k.dim)
    f = psi(c, pair)
    b = nullbordism(f)
    if b is None:
        coords = phi(f)
        payload = {"command": "nullbordism", "nullbordant": False,
                   "class": list(coords)}
        _emit(cfg, payload, ["nonzero class %s: no nullbordism" % (list(coords),)])
        return EXIT_OK
    rep = check_bordism(b)
    payload = {
        "command": "nullbordism",
        "nullbordant": True,
        "bordism": bordism_to_json(b),
        "check": {"ok": rep.ok, "failures": list(rep.failures)},
    }
    lines = ["nullbordism found: %d top cells, boundary cells %d"
             % (len(b.w.instances), rep.boundary1_cells),
             "bordism check: %s" % ("ok" if rep.ok else "FAILED")]
    _emit(cfg, payload, lines)
    return EXIT_OK if rep.ok else EXIT_MATH


def _prism_fixture() -> dict:
    """Prism complex with a bounding chain between its two triangle circles."""
    prism = Complex.from_top([(0, 1, 4), (0, 3, 4), (1, 2, 5), (1, 4, 5),
                              (0, 2, 3), (2, 3, 5), (0, 1, 2), (3, 4, 5)])
    tilde_c = (-1 * unit_chain((0, 1, 4)) + unit_chain((0, 3, 4))
               - unit_chain((1, 2, 5)) + unit_chain((1, 4, 5))
               + unit_chain((0, 2, 3)) - unit_chain((2, 3, 5)))
    c0 = boundary(unit_chain((0, 1, 2)))
    c1 = boundary(unit_chain((3, 4, 5)))
    return {
        "pair": complex_to_json(prism),
        "chain": chain_to_json(tilde_c),
        "c0": chain_to_json(c0),
        "c1": chain_to_json(c1),
    }


def cmd_fixtures(cfg: RunConfig) -> int:
    out = cfg.paths[0] if cfg.paths else os.environ.get("BMH_FIXTURES", "fixtures")
    try:
        os.makedirs(out, exist_ok=True)
    except OSError as e:
        raise ParseError("cannot create %s: %s" % (out, e))
    files = {}
    for n in range(1, 5):
        files["simplex%d.json" % n] = pair_to_json(simplex_pair(n))
    for n in range(1, 4):
        files["sphere%d.json" % n] = complex_to_json(sphere(n))
    files["torus.json"] = complex_to_json(torus())
    files["mobius.json"] = pair_to_json(mobius_pair())
    files["cylinder.json"] = pair_to_json(cylinder_pair())
    files["prism.json"] = _prism_fixture()
    written = []
    for name in sorted(files):
        path = os.path.join(out, name)
        with open(path, "w") as fh:
            json.dump(files[name], fh, sort_keys=True, indent=2)
            fh.write("\n")
        written.append(path)
    payload = {"command": "fixtures", "written": written}
    _emit(cfg, payload, ["wrote %d fixture files to %s" % (len(written), out)])
    return EXIT_OK


# ---------------------------------------------------------------------------
# dispatch


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="bmh",
        description="Homology of simplicial pairs, pseudomanifold gluing, "
                    "and duality/exactness verification.")
    ap.add_argument("--format", choices=("json", "text"), default="text")
    ap.add_argument("--seed", type=int, default=0,
                    help="seed for randomized suites (reports are "
                         "bit-reproducible per seed)")
    ap.add_argument("--degrees", type=str, default=None, metavar="a..b")
    sub = ap.add_subparsers(dest="command", required=True)

    sub.add_parser("homology").add_argument("pair")
    fp = sub.add_parser("fundamental")
    fp.add_argument("pair")
    fp.add_argument("--seed-simplex", default=None, metavar="v0,v1,..")
    fp.add_argument("--seed-sign", type=int, choices=(1, -1), default=1)
    gp = sub.add_parser("glue")
    gp.add_argument("cycle")
    gp.add_argument("pair")
    rp = sub.add_parser("roundtrip")
    rp.add_argument("cycle")
    rp.add_argument("pair")
    sub.add_parser("pd").add_argument("pair")
    sub.add_parser("mv").add_argument("cover")
    np_ = sub.add_parser("nullbordism")
    np_.add_argument("cycle")
    np_.add_argument("pair")
    fx = sub.add_parser("fixtures")
    fx.add_argument("dir", nargs="?", default=None)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors, which matches the input-error code
        return int(e.code) if e.code else EXIT_OK
    paths = [p for p in (getattr(ns, "cycle", None), getattr(ns, "pair", None),
                         getattr(ns, "cover", None), getattr(ns, "dir", None))
             if p is not None]
    cfg = RunConfig(
        command=ns.command,
        paths=paths,
        format=ns.format,
        seed=ns.seed,
        degrees=_parse_degrees(ns.degrees) if ns.degrees else None,
    )
    try:
        if ns.command == "homology":
            return cmd_homology(cfg)
        if ns.command == "fundamental":
            return cmd_fundamental(cfg, ns.seed_simplex, ns.seed_sign)
        if ns.command == "glue":
            return cmd_glue(cfg)
        if ns.command == "roundtrip":
            return cmd_roundtrip(cfg)
        if ns.command == "pd":
            return cmd_pd(cfg)
        if ns.command == "mv":
            return cmd_mv(cfg)
        if ns.command == "nullbordism":
            return cmd_nullbordism(cfg)
        if ns.command == "fixtures":
            return cmd_fixtures(cfg)
        raise ParseError("unknown command %r" % ns.command)
    except (ParseError, InvariantViolation) as e:
        print("%s: %s" % (type(e).__name__, e), file=sys.stderr)
        return EXIT_INPUT
    except _MATH_ERRORS as e:
        print("%s: %s" % (type(e).__name__, e), file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
