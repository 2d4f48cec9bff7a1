"""Finitely presented modules over the coefficient ring and their maps.

A module is ``R^g / rowspan(relations)``; elements are row vectors of length
``g``.  A map ``M -> N`` is a ``g_M x g_N`` matrix sending generator ``i`` of
``M`` to row ``i``.  Over a quasi-Frobenius ring projective and injective
modules coincide, which is what makes the stable tests below so short.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import (
    InternalInvariantBroken,
    NoExtension,
    NoSolution,
    NotInjectiveInclusion,
    ValidationError,
    Violation,
)
from .linalg import (
    LinearSystem,
    Matrix,
    _Solver,
    _kernel_rows,
    howell_rows,
    reduce_vector,
    smith_rows,
)


class FPModule:
    """A finitely presented module ``R^ngens / rowspan(relations)``."""

    def __init__(self, ring, ngens, relations=None, check=True):
        if relations is None:
            relations = Matrix.zeros(ring, 0, ngens)
        elif not isinstance(relations, Matrix):
            relations = Matrix(ring, relations, ngens)
        self.ring = ring
        self.ngens = ngens
        self.relations = relations
        if check:
            v = validate_module_data(self)
            if v is not None:
                raise ValidationError(v)

    @classmethod
    def zero(cls, ring):
        return cls(ring, 0)

    @classmethod
    def free(cls, ring, rank):
        return cls(ring, rank)

    @classmethod
    def cyclic(cls, ring, d):
        """``R/(d)`` on one generator."""
        return cls(ring, 1, Matrix(ring, [[d]], 1) if d else None)

    def __repr__(self):
        return f"FPModule({self.ring}, gens={self.ngens}, invariants={self.nontrivial_invariants})"

    # normal forms ---------------------------------------------------------
    @cached_property
    def _howell(self):
        return howell_rows(self.ring, self.relations.rows, self.ngens)

    def reduce(self, x):
        """Canonical representative of the residue class of ``x``."""
        H, piv = self._howell
        rem, _ = reduce_vector(self.ring, H, piv, x)
        return tuple(rem)

    def is_zero_element(self, x):
        return not any(self.reduce(x))

    @cached_property
    def _smith(self):
        return smith_rows(self.ring, self.relations.rows, self.ngens)

    @cached_property
    def invariants(self):
        """Invariant factors, one per generator, as a divisibility chain."""
        return tuple(self._smith[0])

    @cached_property
    def nontrivial_invariants(self):
        return tuple(d for d in self.invariants if not self.ring.is_unit(d))

    @cached_property
    def order(self):
        out = 1
        for d in self.invariants:
            out *= self.ring.quotient_size(d)
        return out

    def is_zero(self):
        return self.order == 1

    def is_isomorphic(self, other):
        return self.ring == other.ring and self.nontrivial_invariants == other.nontrivial_invariants

    @cached_property
    def simplified(self):
        """``(S, to_s, from_s)`` with ``S = ⊕ R/(d_i)`` over the non-unit
        invariant factors and mutually inverse isomorphisms."""
        ring = self.ring
        diag, V, Vinv = self._smith
        keep = [i for i, d in enumerate(diag) if not ring.is_unit(d)]
        rels = [[diag[i] if j == jj else 0 for jj in range(len(keep))] for j, i in enumerate(keep) if diag[i]]
        S = FPModule(ring, len(keep), Matrix(ring, rels, len(keep)), check=False)
        to_s = Matrix(ring, [[row[i] for i in keep] for row in V], len(keep))
        from_s = Matrix(ring, [Vinv[i] for i in keep], self.ngens)
        return S, ModuleMap(self, S, to_s, check=False), ModuleMap(S, self, from_s, check=False)

    def elements(self):
        """All elements as canonical tuples (brute force; small modules only)."""
        seen = set()
        for x in itertools.product(self.ring.elements(), repeat=self.ngens):
            seen.add(self.reduce(x))
        return sorted(seen)

    # serialization ----------------------------------------------------------
    def to_json(self):
        return {"generators": self.ngens, "relations": self.relations.to_json()}

    @classmethod
    def from_json(cls, ring, data, check=True):
        from .errors import ParseError

        if not isinstance(data, dict) or "generators" not in data:
            raise ParseError(f"not a module: {data!r}")
        g = data["generators"]
        if isinstance(g, bool) or not isinstance(g, int) or g < 0:
            raise ParseError(f"generator count must be a non-negative integer, got {g!r}")
        rels = data.get("relations", [])
        if not isinstance(rels, list) or any(not isinstance(r, list) for r in rels):
            raise ParseError("relations must be a list of rows")
        rows = [[ring.decode(x) for x in r] for r in rels]
        if any(len(r) != g for r in rows):
            m = cls.__new__(cls)
            m.ring, m.ngens, m.relations = ring, g, _RaggedRows(rows)
            if check:
                raise ValidationError(validate_module_data(m))
            return m
        return cls(ring, g, Matrix(ring, rows, g), check=check)


class _RaggedRows:
    """Stand-in for a malformed relation matrix, kept only so it can be reported."""

    def __init__(self, rows):
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = None


class ModuleMap:
    """A homomorphism ``source -> target`` given on generators."""

    def __init__(self, source, target, matrix, check=True):
        if not isinstance(matrix, Matrix):
            matrix = Matrix(source.ring, matrix, target.ngens)
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            v = validate_module_data(self)
            if v is not None:
                raise ValidationError(v)

    @classmethod
    def identity(cls, m):
        return cls(m, m, Matrix.identity(m.ring, m.ngens), check=False)

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, Matrix.zeros(source.ring, source.ngens, target.ngens), check=False)

    @property
    def ring(self):
        return self.source.ring

    def __repr__(self):
        return f"ModuleMap({self.source!r} -> {self.target!r}, {[list(r) for r in self.matrix.rows]})"

    def __call__(self, x):
        return self.target.reduce(self.matrix.vecmul(x))

    def __matmul__(self, other):
        """Composition ``self ∘ other``."""
        return ModuleMap(other.source, self.target, other.matrix @ self.matrix, check=False)

    def __add__(self, other):
        return ModuleMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other):
        return ModuleMap(self.source, self.target, self.matrix - other.matrix, check=False)

    def __neg__(self):
        return ModuleMap(self.source, self.target, -self.matrix, check=False)

    def scale(self, c):
        return ModuleMap(self.source, self.target, self.matrix.scale(c), check=False)

    def equals(self, other):
        """Equality as homomorphisms (matrices may differ by target relations)."""
        return all(self.target.is_zero_element(r) for r in (self.matrix - other.matrix).rows)

    def is_zero(self):
        return all(self.target.is_zero_element(r) for r in self.matrix.rows)

    @cached_property
    def _preimage_of_zero(self):
        """Vectors in ``R^{g_src}`` generating the preimage of ``0``."""
        stacked = [list(r) for r in self.matrix.rows] + [list(r) for r in self.target.relations.rows]
        return [r[: self.source.ngens] for r in _kernel_rows(self.ring, stacked, self.target.ngens)]

    @cached_property
    def _kernel(self):
        return _kernel_part(self)

    @cached_property
    def _image(self):
        return _image_part(self)

    @cached_property
    def _cokernel(self):
        return _cokernel_part(self)

    def kernel(self):
        """``(K, inclusion)``."""
        return self._kernel

    def image(self):
        """``(I, corestriction source -> I, inclusion I -> target)``."""
        return self._image

    def cokernel(self):
        """``(C, projection)``."""
        return self._cokernel

    def is_injective(self):
        return all(self.source.is_zero_element(x) for x in self._preimage_of_zero)

    def is_surjective(self):
        N = self.target
        H, piv = howell_rows(self.ring, list(self.matrix.rows) + list(N.relations.rows), N.ngens)
        ring = self.ring
        for i in range(N.ngens):
            e = [1 if j == i else 0 for j in range(N.ngens)]
            rem, _ = reduce_vector(ring, H, piv, e)
            if any(rem):
                return False
        return True

    def is_iso(self):
        return self.is_injective() and self.is_surjective()


def validate_module_data(obj):
    """Return ``None`` when a module or map satisfies its invariants, else a Violation."""
    if isinstance(obj, FPModule):
        rel = obj.relations
        if obj.ngens < 0:
            return Violation("shape", "negative generator count")
        if rel.ncols != obj.ngens:
            return Violation("shape", f"relations have {rel.ncols} columns but there are {obj.ngens} generators")
        return None
    if isinstance(obj, ModuleMap):
        for m in (obj.source, obj.target):
            v = validate_module_data(m)
            if v is not None:
                return v
        if obj.source.ring != obj.target.ring or obj.matrix.ring != obj.source.ring:
            return Violation("ring", "source, target and matrix must share one ring")
        if obj.matrix.shape != (obj.source.ngens, obj.target.ngens):
            return Violation(
                "shape",
                f"matrix is {obj.matrix.shape}, expected {(obj.source.ngens, obj.target.ngens)}",
            )
        for i, r in enumerate(obj.source.relations.rows):
            if not obj.target.is_zero_element(obj.matrix.vecmul(r)):
                return Violation("well-definedness", f"relation {i} of the source does not map to zero")
        return None
    return Violation("type", f"not a module or module map: {type(obj).__name__}")


# ---------------------------------------------------------------------------
# kernels, images, cokernels
# ---------------------------------------------------------------------------


def present_submodule(ring, gens, zero_rows, ncols):
    """Present the submodule generated by ``gens`` inside ``R^ncols / span(zero_rows)``.

    Returns an FPModule on ``len(gens)`` generators whose relations are the
    coefficient vectors ``c`` with ``c·gens`` in the span of ``zero_rows``.
    """
    k = len(gens)
    stacked = [list(g) for g in gens] + [list(z) for z in zero_rows]
    rels = [r[:k] for r in _kernel_rows(ring, stacked, ncols)]
    return FPModule(ring, k, Matrix(ring, rels, k), check=False)


@dataclass
class Subquotient:
    kernel: FPModule
    kernel_map: ModuleMap
    image: FPModule
    to_image: ModuleMap
    image_map: ModuleMap
    cokernel: FPModule
    cokernel_map: ModuleMap


def _kernel_part(f):
    ring, M = f.ring, f.source
    pre = f._preimage_of_zero
    K0 = present_submodule(ring, pre, M.relations.rows, M.ngens)
    K, _, K_from = K0.simplified
    kmat = K_from.matrix @ Matrix(ring, pre, M.ngens)
    return K, ModuleMap(K, M, kmat, check=False)


def _image_part(f):
    ring, M, N = f.ring, f.source, f.target
    I0 = present_submodule(ring, f.matrix.rows, N.relations.rows, N.ngens)
    I, I_to, I_from = I0.simplified
    # generator i of the source goes to generator i of I0
    to_image = ModuleMap(M, I, I_to.matrix, check=False)
    image_map = ModuleMap(I, N, I_from.matrix @ f.matrix, check=False)
    return I, to_image, image_map


def _cokernel_part(f):
    ring, N = f.ring, f.target
    C0 = FPModule(ring, N.ngens, N.relations.vstack(f.matrix), check=False)
    C, C_to, _ = C0.simplified
    return C, ModuleMap(N, C, C_to.matrix, check=False)


def subquotient(f):
    """Kernel, image and cokernel of ``f`` in diagonal presentations, with maps."""
    K, k = f.kernel()
    I, to_i, i_map = f.image()
    C, c = f.cokernel()
    return Subquotient(K, k, I, to_i, i_map, C, c)


def factor_through_injection(inc, g):
    """``X`` with ``inc ∘ X = g``, assuming the image of ``g`` lies in that of ``inc``.

    Raises NoSolution otherwise.  Well-definedness of ``X`` follows from
    injectivity of ``inc``.
    """
    B = inc.target
    rows = list(inc.matrix.rows) + list(B.relations.rows)
    solver = _Solver(inc.ring, rows, B.ngens)
    out = []
    for r in g.matrix.rows:
        x = solver.solve(r)
        if x is None:
            raise NoSolution("map does not factor through the injection")
        out.append(x[: inc.source.ngens])
    return ModuleMap(g.source, inc.source, Matrix(inc.ring, out, inc.source.ngens), check=False)


def generator_section(surj):
    """Matrix sending each generator of the target to a preimage."""
    B = surj.target
    rows = list(surj.matrix.rows) + list(B.relations.rows)
    solver = _Solver(surj.ring, rows, B.ngens)
    out = []
    for i in range(B.ngens):
        x = solver.solve([1 if j == i else 0 for j in range(B.ngens)])
        if x is None:
            raise NoSolution("map is not surjective")
        out.append(x[: surj.source.ngens])
    return Matrix(surj.ring, out, surj.source.ngens)


def factor_through_surjection(surj, g):
    """``X`` with ``X ∘ surj = g``, assuming ``g`` kills the kernel of ``surj``."""
    return ModuleMap(surj.target, g.target, generator_section(surj) @ g.matrix, check=False)


def is_exact(g, h):
    """For ``g: A -> B`` and ``h: B -> C`` with ``h ∘ g = 0``: is ``ker h = im g``?"""
    B = g.target
    H, piv = howell_rows(g.ring, list(g.matrix.rows) + list(B.relations.rows), B.ngens)
    for x in h._preimage_of_zero:
        rem, _ = reduce_vector(g.ring, H, piv, x)
        if any(rem):
            return False
    return True


def direct_sum_modules(ms, ring=None):
    """Block direct sum with its injections and projections."""
    if not ms:
        if ring is None:
            raise ValueError("ring is required for an empty direct sum")
        z = FPModule.zero(ring)
        return z, [], []
    ring = ms[0].ring
    total = sum(m.ngens for m in ms)
    S = FPModule(ring, total, Matrix.block_diag(ring, [m.relations for m in ms]) if total else None, check=False)
    if S.relations.ncols != total:
        S = FPModule(ring, total, Matrix.zeros(ring, 0, total), check=False)
    inj, proj = [], []
    off = 0
    for m in ms:
        g = m.ngens
        inj.append(ModuleMap(m, S, Matrix(ring, [[1 if j == off + i else 0 for j in range(total)] for i in range(g)], total), check=False))
        proj.append(ModuleMap(S, m, Matrix(ring, [[1 if i == off + j else 0 for j in range(g)] for i in range(total)], g), check=False))
        off += g
    return S, inj, proj


def direct_sum_maps(fs, source=None, target=None):
    """Block-diagonal map ``⊕ f_i : ⊕ src_i -> ⊕ tgt_i``."""
    ring = fs[0].ring
    if source is None:
        source = direct_sum_modules([f.source for f in fs])[0]
    if target is None:
        target = direct_sum_modules([f.target for f in fs])[0]
    return ModuleMap(source, target, Matrix.block_diag(ring, [f.matrix for f in fs]), check=False)


def hstack_maps(fs, source, target):
    """``(f_1, ..., f_r) : ⊕ src_i -> target`` (sum of components)."""
    ring = target.ring
    rows = []
    for f in fs:
        rows.extend(f.matrix.rows)
    return ModuleMap(source, target, Matrix(ring, rows, target.ngens), check=False)


def vstack_maps(fs, source, target):
    """``x -> (f_1(x), ..., f_r(x)) : source -> ⊕ tgt_i``."""
    ring = source.ring
    rows = [[] for _ in range(source.ngens)]
    for f in fs:
        for i, r in enumerate(f.matrix.rows):
            rows[i].extend(r)
    return ModuleMap(source, target, Matrix(ring, rows, target.ngens), check=False)


# ---------------------------------------------------------------------------
# projectivity and the stable category of Mod(R)
# ---------------------------------------------------------------------------


def is_projective_module(m):
    """Projective (equivalently injective) over the quasi-Frobenius ring.

    ``M ≅ ⊕ R/(d_i)`` is projective iff every ``R/(d_i)`` is, i.e. iff each
    ``(d_i)`` is generated by an idempotent.  For Z/n this is the statement
    that every prime-power component is free; for F_p[t]/(t^k) it means every
    invariant factor is a unit or zero.
    """
    return all(m.ring.is_idempotent_ideal(d) for d in m.invariants)


is_injective_module = is_projective_module


def free_cover(m):
    """The surjection ``R^g -> m`` sending basis vectors to generators."""
    F = FPModule.free(m.ring, m.ngens)
    return ModuleMap(F, m, Matrix.identity(m.ring, m.ngens), check=False)


def embed_into_injective(m):
    """A monomorphism from ``m`` into a free (hence injective) module.

    ``m ≅ ⊕ R/(d_i)`` and each summand embeds via ``1 ↦ ann(d_i)``, which is
    injective because ideals in a quasi-Frobenius ring satisfy
    ``ann(ann(I)) = I``.
    """
    ring = m.ring
    S, to_s, _ = m.simplified
    E = FPModule.free(ring, S.ngens)
    d = diagonal_entries(S)
    mat = to_s.matrix @ Matrix.diag(ring, [ring.ann(x) for x in d])
    return ModuleMap(m, E, mat, check=False)


def diagonal_entries(S):
    """Diagonal entries of a module produced by ``simplified``."""
    d = [0] * S.ngens
    for r in S.relations.rows:
        for j, x in enumerate(r):
            if x:
                d[j] = x
    return d


def extend_map_along_injection(inc, psi):
    """Extend ``psi: S -> E`` along a monomorphism ``inc: S -> K``.

    Solves for ``X: K -> E`` with ``inc·X ≡ psi`` and ``rel_K·X ≡ 0`` modulo the
    relations of ``E``.  For injective ``E`` a solution always exists.
    """
    if not inc.is_injective():
        raise NotInjectiveInclusion("the inclusion has a non-zero kernel")
    S, K, E = inc.source, inc.target, psi.target
    sysm = LinearSystem(inc.ring)
    X = sysm.unknown(K.ngens, E.ngens)
    sysm.equation([(inc.matrix, X, None)], rhs=psi.matrix, modulo=E.relations, shape=(S.ngens, E.ngens))
    if K.relations.nrows:
        sysm.equation([(K.relations, X, None)], modulo=E.relations, shape=(K.relations.nrows, E.ngens))
    try:
        (Xm,), _ = sysm.solve()
    except NoSolution:
        if is_projective_module(E):
            raise InternalInvariantBroken("no extension into an injective module") from None
        raise NoExtension("target is not injective and the map does not extend") from None
    return ModuleMap(K, E, Xm, check=False)


def lift_along_surjection(surj, psi):
    """Find ``h`` with ``surj ∘ h = psi``; raises NoSolution if none exists."""
    A, B = surj.source, surj.target
    P = psi.source
    sysm = LinearSystem(surj.ring)
    H = sysm.unknown(P.ngens, A.ngens)
    sysm.equation([(None, H, surj.matrix)], rhs=psi.matrix, modulo=B.relations)
    if P.relations.nrows:
        sysm.equation([(P.relations, H, None)], modulo=A.relations, shape=(P.relations.nrows, A.ngens))
    (Hm,), _ = sysm.solve()
    return ModuleMap(P, A, Hm, check=False)


def stable_zero(f):
    """Does ``f`` factor through a projective module?

    It suffices to test the free cover ``π: R^g -> target``: a factorisation
    through any projective ``P`` lifts along ``π`` because ``P`` is projective.
    """
    M, N = f.source, f.target
    sysm = LinearSystem(f.ring)
    H = sysm.unknown(M.ngens, N.ngens)
    sysm.equation([(None, H, None)], rhs=f.matrix, modulo=N.relations)
    if M.relations.nrows:
        sysm.equation([(M.relations, H, None)], shape=(M.relations.nrows, N.ngens))
    try:
        sysm.solve()
    except NoSolution:
        return False
    return True


def stable_equiv(f):
    """Is ``f`` an isomorphism in the stable category of R-modules?

    With ``π: P -> N`` the free cover, ``(f, π): M ⊕ P -> N`` is surjective
    and stably equivalent to ``f`` (the inclusion ``M -> M ⊕ P`` is a stable
    equivalence).  A surjection is a stable equivalence exactly when its
    kernel is projective, in which case it splits.
    """
    M, N = f.source, f.target
    pi = free_cover(N)
    S, _, _ = direct_sum_modules([M, pi.source])
    g = hstack_maps([f, pi], S, N)
    K, _ = g.kernel()
    return is_projective_module(K)


def splitting(f):
    """A section ``s`` of a surjection ``f`` (``f ∘ s = id``), or None."""
    try:
        return lift_along_surjection(f, ModuleMap.identity(f.target))
    except NoSolution:
        return None


def hom_modules(M, N):
    """``Hom_R(M, N)`` presented, with one ModuleMap per generator."""
    ring = M.ring
    sysm = LinearSystem(ring)
    sysm.unknown(M.ngens, N.ngens)
    if M.relations.nrows:
        sysm.equation([(M.relations, 0, None)], modulo=N.relations, shape=(M.relations.nrows, N.ngens))
    gens = sysm.homogeneous_kernel() if M.relations.nrows else [
        [1 if k == idx else 0 for k in range(M.ngens * N.ngens)] for idx in range(M.ngens * N.ngens)
    ]
    zero_rows = []
    for i in range(M.ngens):
        for r in N.relations.rows:
            row = [0] * (M.ngens * N.ngens)
            row[i * N.ngens : (i + 1) * N.ngens] = r
            zero_rows.append(row)
    H0 = present_submodule(ring, gens, zero_rows, M.ngens * N.ngens)
    H, _, frm = H0.simplified
    basis = []
    for coeffs in frm.matrix.rows:
        flat = [0] * (M.ngens * N.ngens)
        for c, g in zip(coeffs, gens):
            if c:
                flat = ring.axpy(c, g, flat)
        basis.append(ModuleMap(M, N, Matrix(ring, [flat[i * N.ngens : (i + 1) * N.ngens] for i in range(M.ngens)], N.ngens), check=False))
    return H, basis
