"""The acceptance suite: nine end-to-end checks, each returning a result record.

``scale`` multiplies every sample size (1.0 gives the full counts); the
exhaustive linear-algebra sweep ignores it unless ``scale < 1``, in which
case only matrices with at most four entries are swept.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import asdict, dataclass

from .errors import InternalInvariantBroken
from .generate import random_instance, random_repmap, random_surjection
from .linalg import Matrix, howell_form, howell_rows, kernel_matrix, smith_invariants, solve_rows
from .model import (
    classify_morphism,
    classify_object,
    cofibrant_replacement,
    factorize,
    fibrant_replacement,
    four_term_resolution,
    is_gorenstein_injective,
    is_gorenstein_projective,
    is_injective_object,
    is_projective_object,
    is_trivial,
    resolution_is_exact,
)
from .modules import FPModule, ModuleMap, is_exact
from .oracles import VectorTables, brute_kernel, latching_agrees, matching_agrees, module_maps
from .quiver import FIXTURE_QUIVERS, a_n, build_reedy_data, longest_path_degree
from .rep import (
    Rep,
    RepMap,
    canonical_cover,
    canonical_embedding,
    direct_sum_reps,
    ext1_oracle,
    indecomposable_projective,
    lift_rep_map,
    rep_cokernel,
    rep_kernel,
)
from .ring import TruncPoly, ZMod
from .stable import hovey_adjunction_check, sigma_omega_compare, stable_hom

RINGS = (ZMod(4), ZMod(8), ZMod(6), TruncPoly(2, 2), TruncPoly(3, 2))


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    checked: int
    failures: int
    seconds: float
    detail: str = ""

    def as_dict(self):
        return asdict(self)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return f"criterion {self.number} [{status}] {self.name}: {self.checked} checked, {self.failures} failed, {self.seconds:.1f}s{extra}"


def _n(count, scale):
    return max(1, int(round(count * scale)))


def _fixture_reps(ring, quiver):
    """A few hand-made representations plus the zero representation."""
    F = FPModule.free(ring, 1)
    nil = _nilpotent(ring)
    C = FPModule.cyclic(ring, nil)
    out = [Rep.zero(quiver, ring)]
    for mod in (F, C):
        mods = {v: mod for v in quiver.vertices}
        for scalar in (1, nil, 0):
            maps = {a.name: ModuleMap(mod, mod, [[scalar]], check=False) for a in quiver.arrows}
            out.append(Rep(quiver, ring, mods, maps, check=False))
    return out


def _seed(*parts):
    """Deterministic 32-bit seed from a tuple (string seeding is hash-independent)."""
    return random.Random(repr(parts)).getrandbits(32)


def _nilpotent(ring):
    """A non-zero non-unit: ``2`` in Z/4, Z/6, Z/8 and ``t`` in the truncated rings."""
    if isinstance(ring, ZMod):
        return 2
    return ring.p


def _timed(number, name, fn):
    t0 = time.perf_counter()
    checked, failures, detail = fn()
    return CriterionResult(number, name, failures == 0 and checked > 0, checked, failures,
                           time.perf_counter() - t0, detail)


# ---------------------------------------------------------------------------
# 1. Gorenstein-projective test against the Ext^1 oracle
# ---------------------------------------------------------------------------


def criterion_oracle(seed=0, scale=1.0, per_pair=500):
    def run():
        checked = failures = 0
        seen = {True: 0, False: 0}
        for ri, ring in enumerate(RINGS):
            for qi, (qname, qf) in enumerate(FIXTURE_QUIVERS.items()):
                q = qf()
                for s in range(_n(per_pair, scale)):
                    m = random_instance(_seed(seed, ri, qi, s), ring, q, 2)
                    gp = classify_object(m).gorenstein_projective
                    vanish = all(e.is_zero() for e in ext1_oracle(m).values())
                    checked += 1
                    seen[gp] += 1
                    failures += gp != vanish
        return checked, failures, f"{seen[True]} GP, {seen[False]} not GP"

    return _timed(1, "GP test agrees with Ext^1 oracle", run)


# ---------------------------------------------------------------------------
# 2. latching objects against the brute-force colimit
# ---------------------------------------------------------------------------


def criterion_latching(seed=0, scale=1.0, random_per_pair=10):
    def run():
        checked = failures = 0
        for ri, ring in enumerate(RINGS):
            for qi, qf in enumerate(FIXTURE_QUIVERS.values()):
                q = qf()
                reps = _fixture_reps(ring, q)
                reps += [random_instance(_seed(seed, ri, qi, s, "latch"), ring, q, 2)
                         for s in range(_n(random_per_pair, scale))]
                for m in reps:
                    for j in q.vertices:
                        checked += 1
                        failures += not (latching_agrees(m, j) and matching_agrees(m, j))
        return checked, failures, ""

    return _timed(2, "latching objects equal the colimit over paths", run)


# ---------------------------------------------------------------------------
# 3. trivial fibrations two ways
# ---------------------------------------------------------------------------


def criterion_trivial_fibration(seed=0, scale=1.0, count=300):
    def run():
        rng = random.Random(seed)
        checked = failures = 0
        seen = {True: 0, False: 0}
        pairs = [(r, q) for r in RINGS for q in FIXTURE_QUIVERS.values()]
        for s in range(_n(count, scale)):
            ring, qf = pairs[s % len(pairs)]
            q = qf()
            if s % 2:
                target = random_instance(rng.getrandbits(32), ring, q, 2)
                f = random_surjection(rng.getrandbits(32), target, 1)
            else:
                # cokernel projections: kernels are images, often not trivial
                Y = random_instance(rng.getrandbits(32), ring, q, 2)
                X = random_instance(rng.getrandbits(32), ring, q, 2)
                _, f = rep_cokernel(random_repmap(rng.getrandbits(32), X, Y))
            try:
                flags = classify_morphism(f)
            except InternalInvariantBroken:
                failures += 1
                checked += 1
                continue
            K, _ = rep_kernel(f)
            by_kernel = f.is_surjective() and is_trivial(K)
            by_def = flags.weak_equivalence and flags.rp_fibration
            checked += 1
            seen[by_def] += 1
            failures += by_kernel != by_def or not flags.rp_fibration
        return checked, failures, f"{seen[True]} trivial, {seen[False]} not"

    return _timed(3, "weq and fibration iff kernel has projdim <= 1", run)


# ---------------------------------------------------------------------------
# 4. replacements and the four-term resolution
# ---------------------------------------------------------------------------


def criterion_replacements(seed=0, scale=1.0, count=300):
    def run():
        rng = random.Random(seed + 4)
        checked = failures = 0
        pairs = [(r, q) for r in RINGS for q in FIXTURE_QUIVERS.values()]
        for s in range(_n(count, scale)):
            ring, qf = pairs[s % len(pairs)]
            m = random_instance(rng.getrandbits(32), ring, qf(), 2)
            try:
                cr = cofibrant_replacement(m)
                ok = is_gorenstein_projective(cr.gp) and classify_morphism(cr.trivfib).rp_trivial_fibration
                fr = fibrant_replacement(m)
                ok = ok and is_gorenstein_injective(fr.ginj) and classify_morphism(fr.trivcof).ri_trivial_cofibration
                ft = four_term_resolution(m)
                ok = ok and is_projective_object(ft.s) and is_projective_object(ft.t)
                ok = ok and resolution_is_exact(ft.maps)
            except InternalInvariantBroken:
                ok = False
            checked += 1
            failures += not ok
        return checked, failures, ""

    return _timed(4, "replacements and four-term resolutions certified", run)


# ---------------------------------------------------------------------------
# 5. lifting
# ---------------------------------------------------------------------------


def _random_trivial_fibration(rng, ring, q):
    """One of three constructions, all RP-trivial fibrations by design."""
    kind = rng.randrange(3)
    Y = random_instance(rng.getrandbits(32), ring, q, 2)
    if kind == 0:
        return cofibrant_replacement(Y).trivfib
    if kind == 1:
        P = canonical_cover(random_instance(rng.getrandbits(32), ring, q, 1)).projective
        S, _, prj = direct_sum_reps([Y, P])
        return prj[0]
    X = random_instance(rng.getrandbits(32), ring, q, 2)
    return factorize(random_repmap(rng.getrandbits(32), X, Y), "cof_then_trivfib").right


def criterion_lifting(seed=0, scale=1.0, count=100, negatives=20):
    def run():
        rng = random.Random(seed + 5)
        checked = failures = 0
        pairs = [(r, q) for r in RINGS for q in FIXTURE_QUIVERS.values()]
        done = 0
        while done < _n(count, scale):
            ring, qf = pairs[done % len(pairs)]
            q = qf()
            M = random_instance(rng.getrandbits(32), ring, q, 2)
            if not is_gorenstein_projective(M):
                continue
            p = _random_trivial_fibration(rng, ring, q)
            if not classify_morphism(p).rp_trivial_fibration:
                failures += 1
            g = random_repmap(rng.getrandbits(32), M, p.target)
            h = lift_rep_map(p, g)
            checked += 1
            done += 1
            failures += h is None or not (p @ h).equals(g)
        done = 0
        while done < _n(negatives, scale):
            ring, qf = pairs[done % len(pairs)]
            M = random_instance(rng.getrandbits(32), ring, qf(), 2)
            if is_gorenstein_projective(M):
                continue
            p = cofibrant_replacement(M).trivfib
            checked += 1
            done += 1
            failures += lift_rep_map(p, RepMap.identity(M)) is not None
        return checked, failures, ""

    return _timed(5, "GP objects lift against trivial fibrations, others do not", run)


# ---------------------------------------------------------------------------
# 6. triangulated structure
# ---------------------------------------------------------------------------


def stable_hom_fixture_by_search():
    """Stable endomorphisms of ``0 -> Z/2`` over Z/4 on A2, by enumeration.

    Every map ``Z/2 -> Z/2`` is enumerated; it is stably zero when some map
    into the cover ``0 -> Z/4`` composes to it.
    """
    ring = ZMod(4)
    Z2 = FPModule.cyclic(ring, 2)
    F = FPModule.free(ring, 1)
    zero = [g for g in module_maps(Z2, Z2)]
    cover = ModuleMap(F, Z2, [[1]])
    stable_zero = [g for g in zero if any((cover @ h).equals(g) for h in module_maps(Z2, F))]
    return len(zero), len(stable_zero)


def criterion_triangulated(seed=0, scale=1.0, count=200):
    def run():
        rng = random.Random(seed + 6)
        checked = failures = 0
        pairs = [(r, q) for r in RINGS for q in FIXTURE_QUIVERS.values()]
        for s in range(_n(count, scale)):
            ring, qf = pairs[s % len(pairs)]
            m = random_instance(rng.getrandbits(32), ring, qf(), 2)
            try:
                ok = sigma_omega_compare(m).is_weq
            except InternalInvariantBroken:
                ok = False
            checked += 1
            failures += not ok
        for s in range(_n(count, scale)):
            ring, qf = pairs[s % len(pairs)]
            q = qf()
            a = random_instance(rng.getrandbits(32), ring, q, 2)
            b = random_instance(rng.getrandbits(32), ring, q, 2)
            checked += 1
            failures += not hovey_adjunction_check(a, b).agree
        ring = ZMod(4)
        q = a_n(2)
        Z2, Z = FPModule.cyclic(ring, 2), FPModule.zero(ring)
        m = Rep(q, ring, {"0": Z, "1": Z2}, {"a0": ModuleMap.zero(Z, Z2)})
        h = stable_hom(m, m).module
        total, null = stable_hom_fixture_by_search()
        checked += 1
        failures += not (h.nontrivial_invariants == (2,) and h.order == total // null == 2)
        return checked, failures, ""

    return _timed(6, "sigma-omega comparison, adjunction, stable hom fixture", run)


# ---------------------------------------------------------------------------
# 7. linear algebra against enumeration
# ---------------------------------------------------------------------------


def check_matrix(ring, rows, m, n, tin, tout, rng=None):
    """Howell, kernel, solve and Smith outputs for one matrix versus enumeration."""
    A = Matrix(ring, rows, n)
    span = tout.span(rows)
    hf = howell_form(A)
    if tout.span(hf.H.rows) != span:
        return False
    if [tuple(r) for r in howell_rows(ring, hf.H.rows, n)[0]] != list(hf.H.rows):
        return False
    if hf.U @ A != hf.H:
        return False
    K = kernel_matrix(A)
    if tin.span(K.rows) != brute_kernel(ring, rows, n, tin, tout):
        return False
    # solve a sample of right-hand sides: some inside the span, some arbitrary
    rng = rng or random.Random(len(span))
    inside = sorted(span)
    targets = [inside[rng.randrange(len(inside))] for _ in range(4)]
    targets += [rng.randrange(len(tout.vectors)) for _ in range(4)]
    sols, _ = solve_rows(ring, rows, n, [tout.vectors[t] for t in targets])
    for t, x in zip(targets, sols):
        if (x is not None) != (t in span):
            return False
        if x is not None and tuple(A.vecmul(x)) != tout.vectors[t]:
            return False
    d = smith_invariants(A)
    for a, b in zip(d, d[1:]):
        if not ring.divides(a, b):
            return False
    size = 1
    for x in d:
        size *= ring.quotient_size(x)
    return size * len(span) == ring.size ** n


def linalg_sweep(ring, max_dim=3, max_entries=None):
    """Every matrix up to ``max_dim x max_dim``; returns ``(checked, failures)``."""
    checked = failures = 0
    rng = random.Random(ring.size)
    elems = range(ring.size)
    tables = {k: VectorTables(ring, k) for k in range(1, max_dim + 1)}
    for m in range(1, max_dim + 1):
        for n in range(1, max_dim + 1):
            if max_entries is not None and m * n > max_entries:
                continue
            for flat in itertools.product(elems, repeat=m * n):
                rows = [list(flat[i * n:(i + 1) * n]) for i in range(m)]
                checked += 1
                failures += not check_matrix(ring, rows, m, n, tables[m], tables[n], rng)
    return checked, failures


def criterion_linalg(seed=0, scale=1.0, random_count=1000):
    def run():
        checked = failures = 0
        max_entries = None if scale >= 1 else 4
        for ring in (ZMod(4), TruncPoly(2, 2)):
            c, f = linalg_sweep(ring, 3, max_entries)
            checked += c
            failures += f
        rng = random.Random(seed + 7)
        for ring in (ZMod(8), ZMod(6)):
            tables = {k: VectorTables(ring, k) for k in range(1, 4)}
            for _ in range(_n(random_count, scale)):
                m, n = rng.randint(1, 3), rng.randint(1, 3)
                rows = [[rng.randrange(ring.size) for _ in range(n)] for _ in range(m)]
                checked += 1
                failures += not check_matrix(ring, rows, m, n, tables[m], tables[n], rng)
        return checked, failures, ""

    return _timed(7, "linear algebra matches exhaustive enumeration", run)


# ---------------------------------------------------------------------------
# 8. independence of the degree function
# ---------------------------------------------------------------------------


def alternative_degrees(q, rng):
    """Three other strictly increasing degree functions."""
    base = longest_path_degree(q)
    shifted = {v: d + 3 for v, d in base.items()}
    doubled = {v: 2 * d + 1 for v, d in base.items()}
    rand = {}
    for v in build_reedy_data(q).topo_order:
        floor = max((rand[a.src] + 1 for a in q.arrows if a.tgt == v), default=0)
        rand[v] = floor + rng.randint(0, 3)
    return [shifted, doubled, rand]


def _outputs(m, f):
    obj = classify_object(m)
    mor = classify_morphism(f)
    gp_size = cofibrant_replacement(m).gp.order()
    return obj, mor, gp_size


def criterion_degree(seed=0, scale=1.0, per_pair=6):
    def run():
        rng = random.Random(seed + 8)
        checked = failures = 0
        for qf in FIXTURE_QUIVERS.values():
            q = qf()
            reedies = [build_reedy_data(q, d) for d in alternative_degrees(q, rng)]
            for ring in RINGS:
                for _ in range(_n(per_pair, scale)):
                    m = random_instance(rng.getrandbits(32), ring, q, 2)
                    n = random_instance(rng.getrandbits(32), ring, q, 2)
                    f = random_repmap(rng.getrandbits(32), m, n)
                    ref = _outputs(m, f)
                    for rd in reedies:
                        m2, n2 = m.with_reedy(rd), n.with_reedy(rd)
                        f2 = RepMap(m2, n2, f.components, check=False)
                        checked += 1
                        failures += _outputs(m2, f2) != ref
        return checked, failures, ""

    return _timed(8, "classification independent of the degree function", run)


# ---------------------------------------------------------------------------
# 9. injective coresolutions of the indecomposable projectives
# ---------------------------------------------------------------------------


def criterion_gorenstein(seed=0, scale=1.0):
    def run():
        checked = failures = 0
        for qf in FIXTURE_QUIVERS.values():
            q = qf()
            for ring in RINGS:
                for i in q.vertices:
                    P = indecomposable_projective(q, ring, i)
                    emb = canonical_embedding(P)
                    ok = (emb.inclusion.is_injective() and is_injective_object(emb.injective)
                          and is_injective_object(emb.cokernel) and emb.projection.is_surjective()
                          and all(is_exact(emb.inclusion.components[v], emb.projection.components[v])
                                  for v in q.vertices))
                    checked += 1
                    failures += not ok
        return checked, failures, ""

    return _timed(9, "indecomposable projectives have injective dimension <= 1", run)


CRITERIA = (
    criterion_oracle,
    criterion_latching,
    criterion_trivial_fibration,
    criterion_replacements,
    criterion_lifting,
    criterion_triangulated,
    criterion_linalg,
    criterion_degree,
    criterion_gorenstein,
)


def run_all(seed=0, scale=1.0):
    return [c(seed=seed, scale=scale) for c in CRITERIA]
