"""Batch front end: build, enumerate, type, frame-check, automorphism,
glue, and a one-shot verify-all over every verified claim.

All emitted bytes are deterministic: values are exact integers or
fixed strings, rows are sorted, and no timings or floats appear in any
output.  Exit codes: 0 success, 1 claim failure, 2 input or format
error, 3 internal error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from math import isqrt
from pathlib import Path

import numpy as np

from .autgroup import _anchor_transversal, full_aut, verify_semidirect
from .construction import (
    ConstructionError,
    build_L,
    build_O40,
    load_fixtures,
    transcribed_basis,
)
from .enumeration import (
    cached_vectors_of_norm_at_most,
    fold_modulo_sign,
    read_vector_cache_text,
    vectors_of_norm_at_most,
    write_vector_cache_text,
)
from .frames import (
    complete_orthogonal_search,
    gamma_group,
    matrix_order,
    orbits,
    orthogonal_census,
)
from .glue import find_sublattice_M, glue_target_gram, verify_theorem3
from .lattice import (
    AmbientFrame,
    frame_scaled_gram,
    gram,
    is_even,
    make_lattice,
)
from .matrices import (
    det,
    hnf,
    hnf_basis,
    inverse,
    matmul,
    read_matrix,
    snf_diagonal,
    transpose,
    write_matrix_text,
)
from .reduction import ldl, lll_gram
from .vectortypes import (
    frame_signature_present,
    partition_by_type,
    refine_to_irreducible,
)

SCHEMA_VERSION = 1

CERTIFICATION_NODE_BUDGET = 200_000

# reference row multisets for the two type tables: (t0, t1, t2, t4, size)
_REFERENCE_TABLE1 = (
    (24018, 7752, 38, 1, 4),
    (24234, 7608, 74, 1, 304),
    (24270, 7584, 80, 1, 684),
    (24342, 7536, 92, 1, 912),
    (24378, 7512, 98, 1, 2736),
    (24414, 7488, 104, 1, 5472),
    (24450, 7464, 110, 1, 9576),
    (24486, 7440, 116, 1, 4788),
    (24522, 7416, 122, 1, 4788),
    (24558, 7392, 128, 1, 5016),
    (24594, 7368, 134, 1, 1368),
    (24630, 7344, 140, 1, 2052),
    (24666, 7320, 146, 1, 228),
    (24738, 7272, 158, 1, 684),
    (24810, 7224, 170, 1, 152),
    (24918, 7152, 188, 1, 684),
    (24990, 7104, 200, 1, 76),
    (25206, 6960, 236, 1, 76),
)
_REFERENCE_TABLE2 = (
    (2, 0, 0, 1, 4),
    (38, 18, 0, 1, 76),
    (162, 32, 0, 1, 228),
    (434, 120, 4, 1, 684),
    (114, 56, 0, 1, 228),
    (422, 128, 2, 1, 684),
    (362, 154, 6, 1, 684),
    (402, 138, 2, 1, 684),
    (414, 130, 4, 1, 684),
    (438, 120, 2, 1, 684),
    (330, 168, 8, 1, 684),
    (422, 128, 2, 1, 684),
    (422, 128, 2, 1, 684),
    (422, 128, 2, 1, 684),
    (446, 114, 4, 1, 684),
    (434, 120, 4, 1, 684),
    (434, 122, 2, 1, 684),
    (446, 112, 6, 1, 684),
    (330, 168, 8, 1, 684),
    (302, 178, 12, 1, 684),
    (362, 160, 0, 1, 684),
    (374, 152, 2, 1, 684),
    (374, 152, 2, 1, 684),
    (438, 120, 2, 1, 684),
    (850, 252, 6, 1, 1368),
    (426, 128, 0, 1, 684),
    (840, 260, 3, 1, 1368),
    (434, 122, 2, 1, 684),
    (402, 138, 2, 1, 684),
    (390, 146, 0, 1, 684),
    (362, 154, 6, 1, 684),
    (446, 114, 4, 1, 684),
    (434, 120, 4, 1, 684),
    (446, 114, 4, 1, 684),
    (434, 120, 4, 1, 684),
    (398, 136, 6, 1, 684),
    (446, 112, 6, 1, 684),
    (302, 178, 12, 1, 684),
    (422, 130, 0, 1, 684),
    (470, 98, 8, 1, 684),
    (434, 122, 2, 1, 684),
    (386, 144, 4, 1, 684),
    (426, 128, 0, 1, 684),
    (450, 112, 4, 1, 684),
    (434, 120, 4, 1, 684),
    (422, 128, 2, 1, 684),
    (422, 128, 2, 1, 684),
    (446, 114, 4, 1, 684),
    (422, 128, 2, 1, 684),
    (398, 136, 6, 1, 684),
    (114, 56, 0, 1, 228),
    (362, 154, 6, 1, 684),
    (422, 130, 0, 1, 684),
    (434, 122, 2, 1, 684),
    (330, 168, 8, 1, 684),
    (446, 114, 4, 1, 684),
    (422, 128, 2, 1, 684),
    (90, 62, 6, 1, 228),
    (450, 112, 4, 1, 684),
    (38, 0, 18, 1, 76),
    (38, 18, 0, 1, 76),
    (614, 0, 34, 1, 684),
    (38, 0, 18, 1, 76),
    (38, 0, 18, 1, 76),
)
# reference greedy census multiset {size: orbit count}
_REFERENCE_TABLE3 = {
    19: 6, 20: 15, 21: 30, 22: 12, 23: 12, 24: 12, 25: 15, 26: 8, 28: 21, 32: 1
}


class InputError(ValueError):
    """Bad paths, malformed files, or inconsistent flags."""


def _load_lattice(path):
    base = build_O40()
    if path is None:
        return base
    try:
        rows = read_matrix(path)
    except OSError as e:
        raise InputError(f"cannot read lattice file: {e}")
    except ValueError as e:
        raise InputError(f"bad lattice file: {e}")
    if any(not isinstance(x, int) for row in rows for x in row):
        raise InputError("lattice basis must be integral")
    if any(len(row) != base.frame.dim for row in rows):
        raise InputError(f"lattice rows must have {base.frame.dim} columns")
    return make_lattice(base.frame, rows)


def _load_vectors(path, lat):
    if path is None:
        return cached_vectors_of_norm_at_most(lat, 4)
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read vector file: {e}")
    try:
        return read_vector_cache_text(text, lat.frame)
    except (ValueError, IndexError) as e:
        raise InputError(f"bad vector file: {e}")


def _csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        p = Path(out)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)


def _table_rows(partition):
    return [
        (b.name, *b.sig.as_tuple(), b.size) for b in partition.blocks
    ]


def cmd_build(args) -> int:
    lat = build_O40()
    basis = [list(r) for r in lat.basis]
    fmt = args.format or "text"
    if fmt == "text":
        text = write_matrix_text(basis)
    elif fmt == "csv":
        text = _csv_text([f"c{i+1}" for i in range(len(basis[0]))], basis)
    else:
        text = _json_text(
            {"schema": SCHEMA_VERSION, "frame": lat.frame.name, "basis": basis}
        )
    _emit(text, args.out)
    return 0


def cmd_minvec(args) -> int:
    lat = _load_lattice(args.lattice)
    if args.norm < 1:
        raise InputError("--norm must be a positive integer")
    if args.vecs is not None:
        vs = _load_vectors(args.vecs, lat)
    elif args.norm == 4:
        vs = cached_vectors_of_norm_at_most(lat, 4)
    else:
        vs = vectors_of_norm_at_most(lat, args.norm)
    fmt = args.format or "text"
    if fmt == "text":
        text = write_vector_cache_text(vs)
    elif fmt == "csv":
        dim = lat.frame.dim
        rows = [list(v) + [m] for v, m in zip(vs.vectors, vs.norms)]
        text = _csv_text([f"x{i+1}" for i in range(dim)] + ["norm"], rows)
    else:
        text = _json_text(
            {
                "schema": SCHEMA_VERSION,
                "frame": vs.frame.name,
                "count": len(vs),
                "vectors": [list(v) for v in vs.vectors],
                "norms": list(vs.norms),
            }
        )
    _emit(text, args.out)
    return 0


def cmd_types(args) -> int:
    lat = _load_lattice(args.lattice)
    s = _load_vectors(args.vecs, lat)
    lvl1 = partition_by_type(s)
    irr = refine_to_irreducible(s)
    header = ["label", "t0", "t1", "t2", "t4", "size"]
    rows1 = _table_rows(lvl1)
    rows2 = _table_rows(irr)
    if args.out is not None:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        (outdir / "table1.csv").write_text(_csv_text(header, rows1))
        (outdir / "table2.csv").write_text(_csv_text(header, rows2))
        sys.stdout.write(f"wrote table1.csv and table2.csv to {outdir}\n")
        return 0
    fmt = args.format or "csv"
    if fmt == "json":
        text = _json_text(
            {
                "schema": SCHEMA_VERSION,
                "table1": [list(r) for r in rows1],
                "table2": [list(r) for r in rows2],
            }
        )
    else:
        text = _csv_text(header, rows1) + "\n" + _csv_text(header, rows2)
    _emit(text, None)
    return 0


def cmd_frames(args) -> int:
    lat = _load_lattice(args.lattice)
    s = _load_vectors(args.vecs, lat)
    gamma = gamma_group()
    census = orthogonal_census(s, gamma)
    sizes = Counter(row.size for row in census)
    nmax = max(sizes) if sizes else 0
    frame_found = nmax == lat.frame.dim
    verdict = f"n_max={nmax} frame={'true' if frame_found else 'false'}\n"
    fmt = args.format or "text"
    if fmt == "json":
        text = _json_text(
            {
                "schema": SCHEMA_VERSION,
                "census": {str(m): sizes[m] for m in sorted(sizes)},
                "n_max": nmax,
                "frame": frame_found,
            }
        )
    else:
        rows = [(m, sizes[m]) for m in sorted(sizes)]
        text = _csv_text(["m", "count"], rows) + verdict
    _emit(text, args.out)
    return 0


def cmd_aut(args) -> int:
    lat = _load_lattice(args.lattice)
    s = _load_vectors(args.vecs, lat)
    gamma = gamma_group()
    part = refine_to_irreducible(s)
    aut = full_aut(lat, s, gamma, partition=part)
    report = verify_semidirect(aut)
    payload = {
        "schema": SCHEMA_VERSION,
        "order": int(aut.order),
        "generators": [[[int(x) for x in r] for r in m] for m in aut.generators],
        "g1": [[int(x) for x in r] for r in report.g1],
        "g2": [[int(x) for x in r] for r in report.g2],
        "g1_order": int(report.g1_order),
        "g2_order": int(report.g2_order),
        "relation_exponent": int(report.relation_exponent),
        "normal": bool(report.normal),
        "trivial_intersection": bool(report.trivial_intersection),
        "product_is_group": bool(report.product_is_group),
        "order_census": [[int(a), int(b)] for a, b in report.order_census],
    }
    fmt = args.format or "json"
    if fmt == "json":
        text = _json_text(payload)
    elif fmt == "csv":
        rows = [
            (k, payload[k])
            for k in (
                "order",
                "g1_order",
                "g2_order",
                "relation_exponent",
                "normal",
                "trivial_intersection",
                "product_is_group",
            )
        ]
        text = _csv_text(["key", "value"], rows)
    else:
        text = (
            f"order={payload['order']}\n"
            f"g1_order={payload['g1_order']} g2_order={payload['g2_order']}\n"
            f"relation_exponent={payload['relation_exponent']}\n"
            f"normal={payload['normal']} "
            f"trivial_intersection={payload['trivial_intersection']} "
            f"product_is_group={payload['product_is_group']}\n"
        )
    _emit(text, args.out)
    return 0


def cmd_glue(args) -> int:
    lat = _load_lattice(args.lattice)
    s = _load_vectors(args.vecs, lat)
    part = refine_to_irreducible(s)
    m, chosen = find_sublattice_M(part)
    gram_ok = (
        tuple(tuple(int(x) for x in row) for row in gram(m)) == glue_target_gram()
    )
    theorem3 = verify_theorem3(build_L(), m, lat)
    fmt = args.format or "text"
    if fmt == "json":
        text = _json_text(
            {
                "schema": SCHEMA_VERSION,
                "chosen": [list(v) for v in chosen],
                "gram_blocks": [1, 1, 19, 19],
                "gram_matches_target": gram_ok,
                "theorem3": theorem3,
            }
        )
    elif fmt == "csv":
        rows = [list(v) for v in chosen]
        text = _csv_text([f"x{i+1}" for i in range(len(chosen[0]))], rows)
        text += f"theorem3,{'true' if theorem3 else 'false'}\n"
    else:
        lines = [" ".join(str(x) for x in v) for v in chosen]
        lines.append(
            "gram=diag([4],[4],A19(2),A19(2))"
            if gram_ok
            else "gram=MISMATCH"
        )
        lines.append(f"theorem3={'true' if theorem3 else 'false'}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


@dataclass
class Claim:
    id: str
    expected: str
    computed: str = ""
    status: str = "blocked"


def _covering_radii(basis, bound):
    g = matmul(basis, transpose(basis))
    ginv = inverse([[Fraction(x) for x in row] for row in g])
    radii = []
    for k in range(len(basis)):
        r2 = Fraction(bound) * ginv[k][k]
        radii.append(isqrt(r2.numerator // r2.denominator) + 1)
    return radii


def _brute_force_norms(basis, bound, radii):
    out = {}
    for c in iter_product(*[range(-r, r + 1) for r in radii]):
        if not any(c):
            continue
        vec = tuple(
            sum(c[i] * basis[i][j] for i in range(len(basis)))
            for j in range(len(basis[0]))
        )
        m = sum(x * x for x in vec)
        if m <= bound:
            out[vec] = m
    return out


def _random_full_rank(rng, n, lo=-4, hi=4):
    while True:
        b = [[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)]
        if det(b) != 0:
            return b


def _claim_construction(ctx):
    fx = load_fixtures()
    o40 = build_O40()
    same_span = hnf_basis([list(r) for r in o40.basis]) == hnf_basis(
        transcribed_basis(fx)
    )
    d = det([list(r) for r in o40.basis])
    g = gram(o40)
    even = all(g[i][i] % 2 == 0 for i in range(len(g)))
    dg = det([list(r) for r in g])
    ctx["fx"] = fx
    ctx["o40"] = o40
    ok = same_span and d == 63**10 and even and dg == 1
    return ok, f"hnf_equal={same_span} det_basis=63^10:{d == 63**10} gram_even={even} gram_det={dg}"


def _claim_minvec(ctx):
    s = cached_vectors_of_norm_at_most(ctx["o40"], 4)
    ctx["s"] = s
    mn = min(s.norms)
    count4 = sum(1 for m in s.norms if m == 4)
    ok = mn == 4 and count4 == 39600 and len(s) == 39600
    return ok, f"min_norm={mn} count_norm4={count4}"


def _claim_table1(ctx):
    lvl1 = partition_by_type(ctx["s"])
    ctx["lvl1"] = lvl1
    rows = Counter((*b.sig.as_tuple(), b.size) for b in lvl1.blocks)
    ok = len(lvl1.blocks) == 18 and rows == Counter(_REFERENCE_TABLE1)
    return ok, f"blocks={len(lvl1.blocks)} multiset_match={rows == Counter(_REFERENCE_TABLE1)}"


def _claim_table2(ctx):
    part = refine_to_irreducible(ctx["s"])
    ctx["part"] = part
    rows = Counter((*b.sig.as_tuple(), b.size) for b in part.blocks)
    again = refine_to_irreducible(ctx["s"], initial=part)
    stable = again.blocks == part.blocks
    ok = len(part.blocks) == 64 and rows == Counter(_REFERENCE_TABLE2) and stable
    return ok, (
        f"blocks={len(part.blocks)} multiset_match={rows == Counter(_REFERENCE_TABLE2)} "
        f"stable={stable}"
    )


def _claim_no_frame_signature(ctx):
    part = ctx["part"]
    present = frame_signature_present(part)
    bad = [b.name for b in part.blocks if b.sig.as_tuple() == (78, 0, 0, 1)]
    ok = not present and not bad
    return ok, f"frame_signature_present={present}"


def _claim_gamma(ctx):
    gamma = gamma_group()
    ctx["gamma"] = gamma
    orders = sorted(matrix_order(m) for m in gamma.generators)
    num, _ = frame_scaled_gram(ctx["o40"].frame)
    w = np.array(num, dtype=np.int64)
    isometries = all(
        (np.array(m, np.int64) @ w @ np.array(m, np.int64).T == w).all()
        for m in gamma.generators
    )
    folded = fold_modulo_sign(ctx["s"])
    orb = orbits(folded, gamma)
    n_orbits = len(orb.rep_indices)
    _, anchor_reps = _anchor_transversal(ctx["part"], gamma)
    ok = (
        gamma.order == 342
        and orders == [2, 9, 19]
        and isometries
        and n_orbits == 132
        and len(anchor_reps) == 4
    )
    return ok, (
        f"order={gamma.order} generator_orders={orders} isometries={isometries} "
        f"orbits={n_orbits} anchor_orbits={len(anchor_reps)}"
    )


def _claim_frame_bound(ctx):
    census = orthogonal_census(ctx["s"], ctx["gamma"])
    ctx["census"] = census
    sizes = Counter(row.size for row in census)
    nmax = max(sizes)
    frame_found = nmax == ctx["o40"].frame.dim
    exact = sizes == Counter(_REFERENCE_TABLE3)
    ties_logged = all(row.tie_steps > 0 for row in census)
    ok = nmax == 32 and not frame_found and (exact or ties_logged)
    detail = "exact" if exact else (
        "deviation attributed to logged greedy tie-breaks" if ties_logged
        else "deviation NOT attributable to ties"
    )
    return ok, (
        f"n_max={nmax} frame={'true' if frame_found else 'false'} "
        f"census={dict(sorted(sizes.items()))} multiset={detail}"
    )


def _claim_frame_certification(ctx):
    census = ctx["census"]
    reps = [row.vector for row in census if row.size >= 28]
    results = [
        complete_orthogonal_search(
            v, ctx["s"], target=40, node_budget=CERTIFICATION_NODE_BUDGET
        )
        for v in reps
    ]
    none_found = not any(r.found_target for r in results)
    exhausted = all(r.exhausted for r in results)
    largest = max(r.largest for r in results)
    ok = none_found and exhausted
    return ok, (
        f"representatives={len(reps)} none_reach_40={none_found} "
        f"largest_found={largest} search_exhausted={exhausted} "
        f"node_budget_per_rep={CERTIFICATION_NODE_BUDGET}"
    )


def _claim_aut(ctx):
    aut = full_aut(ctx["o40"], ctx["s"], ctx["gamma"], partition=ctx["part"])
    ctx["aut"] = aut
    report = verify_semidirect(aut)
    ok = (
        aut.order == 684
        and report.g1_order == 36
        and report.g2_order == 19
        and report.relation_exponent == 3
        and report.normal
        and report.trivial_intersection
        and report.product_is_group
    )
    return ok, (
        f"order={aut.order} g1_order={report.g1_order} g2_order={report.g2_order} "
        f"relation_exponent={report.relation_exponent} normal={report.normal} "
        f"trivial_intersection={report.trivial_intersection} "
        f"product_is_group={report.product_is_group}"
    )


def _claim_fixtures(ctx):
    fx = ctx["fx"]
    w = np.array(fx.gram_o40, dtype=np.int64)
    symmetric = (w == w.T).all()
    even = all(int(w[i, i]) % 2 == 0 for i in range(40))
    unimodular = det([list(r) for r in fx.gram_o40]) == 1
    _, diag = ldl([list(r) for r in fx.gram_o40])
    posdef = all(x > 0 for x in diag)
    ref_frame = AmbientFrame("gram-o40", fx.gram_o40)
    ident = [[1 if i == j else 0 for j in range(40)] for i in range(40)]
    ref_lat = make_lattice(ref_frame, ident)
    vs = cached_vectors_of_norm_at_most(ref_lat, 4)
    min4 = min(vs.norms) == 4 and len(vs) == 39600
    t = np.array(fx.basis_change, dtype=np.int64)
    g = np.array(gram(ctx["o40"]), dtype=np.int64)
    t_unimodular = abs(det([list(r) for r in fx.basis_change])) == 1
    carries = (t @ g @ t.T == w).all()
    g1 = np.array(fx.aut_g1, dtype=np.int64)
    g2 = np.array(fx.aut_g2, dtype=np.int64)
    preserve = (g1 @ w @ g1.T == w).all() and (g2 @ w @ g2.T == w).all()
    o1, o2 = matrix_order(fx.aut_g1, cap=100), matrix_order(fx.aut_g2, cap=100)
    relation = (
        g1 @ g2 @ np.linalg.matrix_power(g1, 35)
        == np.linalg.matrix_power(g2, 3)
    ).all()
    ok = bool(
        symmetric
        and even
        and unimodular
        and posdef
        and min4
        and t_unimodular
        and carries
        and preserve
        and o1 == 36
        and o2 == 19
        and relation
    )
    return ok, (
        f"symmetric={symmetric} even={even} det=1:{unimodular} posdef={posdef} "
        f"min4_count39600={min4} basis_change_unimodular={t_unimodular} "
        f"basis_change_carries_gram={carries} generators_preserve={preserve} "
        f"orders=({o1},{o2}) relation={relation}"
    )


def _claim_glue(ctx):
    m, chosen = find_sublattice_M(ctx["part"])
    gram_ok = (
        tuple(tuple(int(x) for x in row) for row in gram(m)) == glue_target_gram()
    )
    theorem3 = verify_theorem3(build_L(), m, ctx["o40"])
    ok = gram_ok and theorem3 and len(chosen) == 40
    return ok, f"gram_matches_target={gram_ok} theorem3={theorem3} chosen={len(chosen)}"


def _claim_properties(ctx):
    rng = random.Random(1404)
    plain4 = AmbientFrame(
        "plain4", tuple(tuple(1 if i == j else 0 for j in range(4)) for i in range(4))
    )
    enum_ok = True
    checked = 0
    while checked < 50:
        basis = _random_full_rank(rng, 4)
        bound = rng.randint(4, 12)
        radii = _covering_radii(basis, bound)
        cube = 1
        for r in radii:
            cube *= 2 * r + 1
        # skew bases give covering cubes too large to enumerate; resample
        if cube > 200_000:
            continue
        checked += 1
        want = _brute_force_norms(basis, bound, radii)
        vs = vectors_of_norm_at_most(make_lattice(plain4, basis), bound)
        got = dict(zip(vs.vectors, vs.norms))
        if got != want:
            enum_ok = False
            break
    linalg_ok = True
    for _ in range(20):
        m = [[rng.randint(-6, 6) for _ in range(4)] for _ in range(4)]
        h, u = hnf(m)
        if h != matmul(u, m) or abs(det(u)) != 1:
            linalg_ok = False
        d = snf_diagonal(m)
        nonzero = [x for x in d if x]
        if any(nonzero[i + 1] % nonzero[i] for i in range(len(nonzero) - 1)):
            linalg_ok = False
        b = _random_full_rank(rng, 4)
        gmat = matmul(b, transpose(b))
        red, tr = lll_gram(gmat)
        if red != matmul(matmul(tr, gmat), transpose(tr)) or abs(det(tr)) != 1:
            linalg_ok = False
    total = len(ctx["s"])
    sum1_ok = all(
        b.sig.t0 + 2 * (b.sig.t1 + b.sig.t2 + b.sig.t4) == total
        for b in ctx["lvl1"].blocks
    )
    sum2_ok = all(
        b.sig.t0 + 2 * (b.sig.t1 + b.sig.t2 + b.sig.t4) == b.size
        for b in ctx["part"].blocks
    )
    vecs = set(ctx["s"].vectors)
    negation_ok = all(tuple(-x for x in v) in vecs for v in ctx["s"].vectors)
    folded = fold_modulo_sign(ctx["s"])
    orb = orbits(folded, ctx["gamma"])
    orbit_ok = all(342 % x == 0 for x in orb.sizes) and sum(orb.sizes) == total
    ok = enum_ok and linalg_ok and sum1_ok and sum2_ok and negation_ok and orbit_ok
    return ok, (
        f"enumeration_vs_brute_force={enum_ok} hnf_snf_lll={linalg_ok} "
        f"sum_rule_level1={sum1_ok} sum_rule_level2={sum2_ok} "
        f"negation_closure={negation_ok} orbit_sizes_divide_342={orbit_ok}"
    )


_CLAIMS = (
    ("construction", "basis spans transcription; det 63^10; Gram even det 1",
     (), _claim_construction),
    ("minimal-vectors", "min norm 4 with 39600 vectors",
     ("o40",), _claim_minvec),
    ("table1", "18 level-1 blocks matching the reference multiset",
     ("s",), _claim_table1),
    ("table2", "64 stable blocks matching the reference multiset",
     ("s",), _claim_table2),
    ("no-frame-signature", "no block typed [78, 0, 0, 1]",
     ("part",), _claim_no_frame_signature),
    ("gamma", "monomial group of order 342, orbits 132, anchor orbits 4",
     ("o40", "s", "part"), _claim_gamma),
    ("frame-bound", "n_max 32, no 4-frame, census multiset or logged ties",
     ("o40", "s", "gamma"), _claim_frame_bound),
    ("frame-certification", "exhaustive completion search from all m>=28 reps",
     ("s", "census"), _claim_frame_certification),
    ("aut-group", "order 684 with verified semidirect structure",
     ("o40", "s", "gamma", "part"), _claim_aut),
    ("fixtures", "reference Gram even unimodular posdef min4; basis change; generators",
     ("fx", "o40"), _claim_fixtures),
    ("glue", "sublattice Gram diag([4],[4],A19(2),A19(2)); sum equals target",
     ("part", "o40"), _claim_glue),
    ("properties", "randomized enumeration/linalg checks; sum rule; closure",
     ("s", "lvl1", "part", "gamma"), _claim_properties),
)


def run_claims() -> list[Claim]:
    """Execute every claim in dependency order, recording failures and
    blocking claims whose inputs never materialized."""
    ctx = {}
    out = []
    for claim_id, expected, deps, fn in _CLAIMS:
        c = Claim(claim_id, expected)
        missing = [d for d in deps if d not in ctx]
        if missing:
            c.status = "blocked"
            c.computed = f"blocked: {missing[0]} unavailable after earlier failure"
        else:
            try:
                ok, computed = fn(ctx)
                c.status = "pass" if ok else "fail"
                c.computed = computed
            except Exception as e:
                c.status = "fail"
                c.computed = f"{type(e).__name__}: {e}"
        out.append(c)
    return out


def cmd_verify_all(args) -> int:
    claims = run_claims()
    counts = Counter(c.status for c in claims)
    summary = (
        f"verify-all: {counts.get('pass', 0)} pass, "
        f"{counts.get('fail', 0)} fail, {counts.get('blocked', 0)} blocked"
    )
    fmt = args.format or "text"
    if fmt == "json":
        text = _json_text(
            {
                "schema": SCHEMA_VERSION,
                "claims": [
                    {
                        "id": c.id,
                        "expected": c.expected,
                        "computed": c.computed,
                        "status": c.status,
                    }
                    for c in claims
                ],
                "pass": counts.get("pass", 0),
                "fail": counts.get("fail", 0),
                "blocked": counts.get("blocked", 0),
            }
        )
    elif fmt == "csv":
        rows = [(c.id, c.status, c.expected, c.computed) for c in claims]
        text = _csv_text(["id", "status", "expected", "computed"], rows)
    else:
        lines = [f"{c.status:<7} {c.id}: {c.computed}" for c in claims]
        lines.append(summary)
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if args.out is not None:
        sys.stdout.write(summary + "\n")
    return 0 if counts.get("pass", 0) == len(claims) else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lat40",
        description="Exact reconstruction and verification of the glued 40-dimensional lattice.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lattice", metavar="PATH", help="basis matrix file (default: built-in construction)")
    common.add_argument("--vecs", metavar="PATH", help="minimal-vector cache file (default: compute and cache)")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--format", choices=["csv", "json", "text"], help="output format")
    common.add_argument("--threads", type=int, default=0, metavar="N", help="worker cap, 0 = library default")

    p = sub.add_parser("build", parents=[common], help="construct the lattice and print its basis")
    p.set_defaults(fn=cmd_build)
    p = sub.add_parser("minvec", parents=[common], help="enumerate minimal vectors")
    p.add_argument("--norm", type=int, default=4, metavar="N", help="norm bound (default 4)")
    p.set_defaults(fn=cmd_minvec)
    p = sub.add_parser("types", parents=[common], help="emit both type tables")
    p.set_defaults(fn=cmd_types)
    p = sub.add_parser("frames", parents=[common], help="orthogonal census and 4-frame verdict")
    p.set_defaults(fn=cmd_frames)
    p = sub.add_parser("aut", parents=[common], help="automorphism group and structure report")
    p.set_defaults(fn=cmd_aut)
    p = sub.add_parser("glue", parents=[common], help="decomposable sublattice and gluing identity")
    p.set_defaults(fn=cmd_glue)
    p = sub.add_parser("verify-all", parents=[common], help="run every claim once and report")
    p.set_defaults(fn=cmd_verify_all)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.threads < 0:
        sys.stderr.write("lat40: --threads must be >= 0\n")
        return 2
    if args.threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    try:
        return args.fn(args)
    except (InputError, ConstructionError) as e:
        sys.stderr.write(f"lat40: {e}\n")
        return 2
    except Exception as e:
        sys.stderr.write(f"lat40: internal error: {type(e).__name__}: {e}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
