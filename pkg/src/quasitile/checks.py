"""Invariant suites behind ``quasitile verify``.

Every suite returns a JSON-ready dict with a ``passed`` flag. Floats are
rounded so that repeated runs print identical bytes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .exactnum import to_float


def _r(x: float, digits: int = 9) -> float:
    return float(f"{x:.{digits}g}")


def crystallographic_restriction(max_order: int = 24) -> dict:
    from .lattice import crystallographic_restriction as allowed

    orders = [n for n in range(1, max_order + 1) if allowed(n)]
    return {"max_order": max_order, "allowed_orders": orders, "passed": orders == [1, 2, 3, 4, 6]}


def route_equivalence(radius: int = 20) -> dict:
    """AB vertices from the octagon window versus the section of Z^4, on a disk."""
    from .cutproject import ab_scheme, ab_vertex_set
    from .dualcell import generic_offset, section_tiling

    s = ab_scheme()
    off = generic_offset(s)
    a = ab_vertex_set(radius, off).point_set()
    pad = radius + 2
    sec = section_tiling(s, "T*", off, ((-pad, -pad), (pad, pad)))
    r2 = Fraction(radius) ** 2
    from .exactnum import sign

    b = {p for p in sec.point_set() if sign(s.par_frame.norm2(p) - r2) <= 0}
    return {
        "radius": radius,
        "cutproject_points": len(a),
        "section_points": len(b),
        "only_cutproject": len(a - b),
        "only_section": len(b - a),
        "passed": a == b and len(a) > 0,
    }


def inflation(tiling: str) -> dict:
    from .inflation import RULES, substitution_matrix, tile_frequencies

    rule = RULES[tiling]()
    problems = rule.check()
    m = substitution_matrix(rule)
    perron = m.perron_value()
    factor_pow = rule.factor ** len(rule.prototiles[rule.types[0]][0])
    freqs = tile_frequencies(rule)
    return {
        "rule": rule.name,
        "problems": problems,
        "matrix": m.matrix,
        "perron_value": perron.to_json() if hasattr(perron, "to_json") else str(perron),
        "perron_matches_factor": perron == factor_pow,
        "frequencies": {t: _r(to_float(f)) for t, f in sorted(freqs.items())},
        "primitive": m.is_primitive(),
        "passed": not problems and perron == factor_pow and m.is_primitive(),
    }


def legality(steps: int = 4, trials: int = 100) -> dict:
    from .inflation import pair_halves, penrose_rule, seed_patch, substitute
    from .matching import PENROSE_TEMPLATE, check_legality, mutation_trials

    rule = penrose_rule()
    patch = pair_halves(substitute(rule, seed_patch(rule, "sun"), steps), PENROSE_TEMPLATE)
    rep = check_legality(patch)
    counts = mutation_trials(patch, trials, seed=0)
    return {
        "steps": steps,
        "tiles": len(patch.tiles),
        "legal": rep.legal,
        "interior_edges": rep.interior_edges,
        "mutation_trials": trials,
        "mutations_detected": sum(1 for c in counts if c >= 1),
        "min_violations": min(counts),
        "passed": rep.legal and all(c >= 1 for c in counts),
    }


def duality() -> dict:
    from .dualcell import duality_report
    from .lattice import an_lattice, zn_lattice

    reports = [duality_report(x) for x in (zn_lattice(2), an_lattice(2), an_lattice(4))]
    a2 = reports[1]
    shapes_ok = a2["voronoi_vertices"] == 6 and a2["delone_cell_sizes"] == [3] and a2["hole_classes"] == 2
    return {"lattices": reports, "a2_shapes": shapes_ok, "passed": shapes_ok and all(r["passed"] for r in reports)}


def fibonacci(length: int = 10000) -> dict:
    from .exactnum import TAU
    from .inflation import fibonacci_word, word_substitution
    from .lattice import fibonacci_scheme
    from .dualcell import section_tiling

    patch = section_tiling(fibonacci_scheme(), "T", None, ((0,), (length,)), names=["A", "B"], tiling="fibonacci")
    word = fibonacci_word(patch)
    lengths = {}
    for t in patch.tiles:
        a, b = (patch.points[v][0] for v in t.vertices)
        lengths.setdefault(t.type, set()).add(abs(b - a))
    ratio_exact = len(lengths.get("A", ())) == 1 and len(lengths.get("B", ())) == 1
    if ratio_exact:
        ratio_exact = next(iter(lengths["A"])) == TAU * next(iter(lengths["B"]))
    na, nb = word.count("A"), word.count("B")
    freq = na / nb if nb else float("inf")
    fixed = word_substitution("A", 25)
    window = word[:1000]
    return {
        "length": length,
        "letters": len(word),
        "has_BB": "BB" in word,
        "length_ratio_is_tau": ratio_exact,
        "frequency_ratio": _r(freq),
        "window_in_fixed_point": window in fixed,
        "passed": "BB" not in word and ratio_exact and abs(freq / to_float(TAU) - 1) < 0.01 and window in fixed,
    }


def covering(tiling: str, radius: int = 15) -> dict:
    from .covering import decagon_cluster, find_covering, pentagon_clusters, verify_covering
    from .cutproject import penrose_tiling, triangle_tiling

    if tiling == "penrose":
        patch, clusters = penrose_tiling(radius), [decagon_cluster()]
    else:
        patch, clusters = triangle_tiling(radius), pentagon_clusters()
    placements = find_covering(patch, clusters)
    rep = verify_covering(patch, placements)
    sizes = {c.name: c.tile_count for c in clusters}
    counts_ok = all(len(p.tiles) == sizes[p.cluster] for p in placements)
    out = {"radius": radius, "placements": len(placements), "tile_counts_ok": counts_ok}
    out.update(rep.to_dict())
    out["margin"] = _r(rep.margin)
    out["covered_fraction"] = _r(rep.fraction)
    out["passed"] = rep.complete and counts_ok and rep.interior_tiles > 0
    return out


def diffraction(radius: int = 51, count: int = 10) -> dict:
    from .cutproject import ab_spec, ab_vertex_set
    from .diffraction import compare_with_direct, orbit_spread, predict_peaks

    spec = ab_spec()
    pattern = predict_peaks(spec)
    spread = orbit_spread(spec, pattern)
    rows = compare_with_direct(pattern, ab_vertex_set(radius), count)
    worst = max(r["relative_error"] for r in rows)
    return {
        "peaks": len(pattern.peaks),
        "orbit_spread": _r(spread, 3),
        "compared": count,
        "worst_relative_error": _r(worst, 6),
        "passed": spread <= 1e-12 and worst <= 0.05,
    }


def repetitivity(steps: int = 5) -> dict:
    from .inflation import ab_rule, repetitivity_check, seed_patch, substitute

    rule = ab_rule()
    patch = substitute(rule, seed_patch(rule, "square"), steps)
    rep = repetitivity_check(patch)
    out = {"tiles": len(patch.tiles)}
    out.update(rep.to_dict())
    out["passed"] = rep.ok and len(patch.tiles) >= 10000
    return out


def patch_roundtrip(text: str) -> dict:
    """Re-ingest a patch JSON and check it re-serialises identically and is face to face."""
    from .inflation import face_to_face_defects
    from .matching import check_legality
    from .patch import Patch

    patch = Patch.from_json(text)
    again = patch.to_json()
    out = {
        "tiling": patch.tiling,
        "vertices": len(patch.points),
        "tiles": len(patch.tiles),
        "identical": again == text.strip(),
    }
    if patch.dim == 2 and patch.tiles:
        defects = face_to_face_defects(patch)
        out["face_to_face_defects"] = len(defects)
    decorated = patch.tiles and all(t.decoration is not None for t in patch.tiles)
    if decorated:
        out["legal"] = check_legality(patch).legal
    out["passed"] = out["identical"] and out.get("face_to_face_defects", 0) == 0 and out.get("legal", True)
    return out


# check name -> (tilings it applies to, runner taking the tiling id)
CHECKS: dict[str, tuple[tuple, Callable[[str], dict]]] = {
    "crystallographic-restriction": (("ab", "penrose", "ttt", "fibonacci"), lambda t: crystallographic_restriction()),
    "route-equivalence": (("ab",), lambda t: route_equivalence()),
    "inflation": (("ab", "penrose", "fibonacci"), inflation),
    "legality": (("penrose",), lambda t: legality()),
    "duality": (("ab", "penrose", "ttt", "fibonacci"), lambda t: duality()),
    "fibonacci": (("fibonacci",), lambda t: fibonacci()),
    "covering": (("penrose", "ttt"), covering),
    "diffraction": (("ab",), lambda t: diffraction()),
    "repetitivity": (("ab",), lambda t: repetitivity()),
}


def run_check(name: str, tiling: str) -> dict:
    if name not in CHECKS:
        raise KeyError(f"unknown check {name!r}")
    tilings, fn = CHECKS[name]
    if tiling not in tilings:
        raise ValueError(f"check {name!r} does not apply to tiling {tiling!r}")
    out = {"check": name, "tiling": tiling}
    out.update(fn(tiling))
    return out


def checks_for(tiling: str) -> list[str]:
    return [n for n, (ts, _) in CHECKS.items() if tiling in ts]
