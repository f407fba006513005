"""Finitely presented modules over Z and Z/m.

A module is a cokernel presentation: `generators` many generators
subject to the column span of `relations`.  Maps are matrices on
generators, well defined when they carry source relations into the
target relation span; equality of maps is always equality modulo the
target relations.  The Smith decomposition of the relation matrix is
cached per module and doubles as the membership test, the invariant
factor computation and the coordinate system for Hom calculations.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterable, List, Optional, Tuple

from purcat.exact_linalg import (
    IntMatrix,
    InputError,
    LinearSystem,
    Ring,
    WorkbenchError,
    block_diag,
    from_columns,
    hstack,
    kernel_basis,
    smith_normal_form,
    solve_linear,
)


class IllDefinedMap(WorkbenchError):
    """The matrix does not carry source relations into target relations."""


class NotMono(WorkbenchError):
    """An operation requiring an injective map received a non-injective one."""


# ---------------------------------------------------------------------------
# modules


@dataclass(frozen=True)
class Decomposition:
    """Diagonal coordinates of a presentation.

    factors[i] is the annihilator of the i-th diagonal generator: over Z
    the value 0 means a free summand, over Z/m every factor is a divisor
    of m with m itself standing for a free Z/m summand.  to_diag and
    from_diag are the inverse change-of-basis matrices on generators.
    """

    factors: tuple
    to_diag: IntMatrix
    from_diag: IntMatrix


@dataclass(frozen=True)
class FpModule:
    ring: Ring
    generators: int
    relations: IntMatrix

    def __post_init__(self) -> None:
        if self.relations.rows != self.generators:
            raise InputError("relation matrix must have one row per generator")

    # -- structure ------------------------------------------------------

    def decomposition(self) -> Decomposition:
        cached = self.__dict__.get("_decomp")
        if cached is not None:
            return cached
        snf = smith_normal_form(self.relations, self.ring)
        k = min(self.generators, self.relations.cols)
        m = self.ring.modulus
        factors = []
        for i in range(self.generators):
            d = snf.d.at(i, i) if i < k else 0
            if m is not None and d == 0:
                d = m
            factors.append(d)
        dec = Decomposition(tuple(factors), snf.u, snf.u_inv)
        object.__setattr__(self, "_decomp", dec)
        return dec

    @property
    def invariant_factors(self) -> tuple:
        return tuple(a for a in self.decomposition().factors if a != 1)

    def is_zero(self) -> bool:
        return not self.invariant_factors

    def is_torsion(self) -> bool:
        """No free summand; over Z/m every module qualifies."""
        if self.ring.modulus is not None:
            return True
        return 0 not in self.decomposition().factors

    def annihilator_exponent(self) -> Optional[int]:
        """Least n > 0 with n * self = 0, or None for modules with free part."""
        n = 1
        for a in self.decomposition().factors:
            if a == 0:
                return None
            n = n * a // gcd(n, a)
        return n

    # -- membership -------------------------------------------------------

    def contains_in_relations(self, cols: IntMatrix) -> bool:
        """Do all columns lie in the relation span (mod m over Z/m)?"""
        if cols.rows != self.generators:
            raise InputError("membership test shape mismatch")
        if self.generators == 0 or cols.cols == 0:
            return True
        dec = self.decomposition()
        image = self.ring.reduce_matrix(dec.to_diag @ cols)
        for i, a in enumerate(dec.factors):
            row = image.data[i]
            if a == 0:
                if any(x != 0 for x in row):
                    return False
            else:
                if any(x % a for x in row):
                    return False
        return True

    def __str__(self) -> str:
        return f"FpModule({self.ring}, g={self.generators}, inv={self.invariant_factors})"


def make_module(ring: Ring, generators: int, relations=None) -> FpModule:
    """Build a module; relations may be an IntMatrix, row lists, or None."""
    if generators < 0:
        raise InputError("generator count must be nonnegative")
    if relations is None:
        rel = IntMatrix.zeros(generators, 0)
    elif isinstance(relations, IntMatrix):
        rel = relations
    else:
        rows = [list(r) for r in relations]
        if len(rows) != generators:
            raise InputError("relation rows must match generator count")
        rel = IntMatrix.from_rows(rows) if rows else IntMatrix.zeros(0, 0)
    return FpModule(ring, generators, ring.reduce_matrix(rel))


def zero_module(ring: Ring) -> FpModule:
    return make_module(ring, 0)


def free_module(ring: Ring, rank: int) -> FpModule:
    return make_module(ring, rank)


def cyclic_module(ring: Ring, d: int) -> FpModule:
    """R/(d); over Z/m the generator is annihilated by gcd(d, m)."""
    return make_module(ring, 1, IntMatrix.from_rows([[d]]))


def is_isomorphic(a: FpModule, b: FpModule) -> bool:
    return a.ring == b.ring and a.invariant_factors == b.invariant_factors


def canonical_form(module: FpModule) -> tuple:
    """Minimal presentation (one generator per nonunit invariant factor).

    Returns (minimal module, to_min, from_min) with to_min . from_min the
    identity on the nose and from_min . to_min the identity mod relations.
    """
    ring = module.ring
    m = ring.modulus
    dec = module.decomposition()
    keep = [i for i, a in enumerate(dec.factors) if a != 1]
    rel_cols = []
    for pos, i in enumerate(keep):
        a = dec.factors[i]
        if (m is None and a != 0) or (m is not None and a != m):
            col = [0] * len(keep)
            col[pos] = a
            rel_cols.append(col)
    mini = make_module(ring, len(keep), from_columns(rel_cols, len(keep)))
    sel_rows = [dec.to_diag.data[i] for i in keep]
    to_min = ModuleMap(module, mini, ring.reduce_matrix(
        IntMatrix.from_rows(sel_rows) if keep else IntMatrix.zeros(0, module.generators)))
    sel_cols = [dec.from_diag.column(i) for i in keep]
    from_min = ModuleMap(mini, module, ring.reduce_matrix(
        from_columns(sel_cols, module.generators)))
    return mini, to_min, from_min


# ---------------------------------------------------------------------------
# maps


@dataclass(frozen=True)
class ModuleMap:
    src: FpModule
    tgt: FpModule
    matrix: IntMatrix

    def __post_init__(self) -> None:
        if self.matrix.rows != self.tgt.generators or self.matrix.cols != self.src.generators:
            raise InputError("map matrix shape must be tgt.generators x src.generators")

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        if other.tgt != self.src:
            raise InputError("maps are not composable")
        ring = self.src.ring
        return ModuleMap(other.src, self.tgt, ring.reduce_matrix(self.matrix @ other.matrix))

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        if (self.src, self.tgt) != (other.src, other.tgt):
            raise InputError("map addition shape mismatch")
        return ModuleMap(self.src, self.tgt, self.src.ring.reduce_matrix(self.matrix + other.matrix))

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        if (self.src, self.tgt) != (other.src, other.tgt):
            raise InputError("map subtraction shape mismatch")
        return ModuleMap(self.src, self.tgt, self.src.ring.reduce_matrix(self.matrix - other.matrix))

    def __neg__(self) -> "ModuleMap":
        return ModuleMap(self.src, self.tgt, self.src.ring.reduce_matrix(-self.matrix))

    def scale(self, c: int) -> "ModuleMap":
        return ModuleMap(self.src, self.tgt, self.src.ring.reduce_matrix(self.matrix.scale(c)))

    def is_zero(self) -> bool:
        return self.tgt.contains_in_relations(self.matrix)

    def equals(self, other: "ModuleMap") -> bool:
        if (self.src, self.tgt) != (other.src, other.tgt):
            return False
        return self.tgt.contains_in_relations(self.matrix - other.matrix)

    def is_well_defined(self) -> bool:
        if self.src.relations.cols == 0:
            return True
        ring = self.src.ring
        return self.tgt.contains_in_relations(ring.reduce_matrix(self.matrix @ self.src.relations))


def make_map(src: FpModule, tgt: FpModule, matrix, check: bool = True) -> ModuleMap:
    if src.ring != tgt.ring:
        raise InputError("map between modules over different rings")
    if not isinstance(matrix, IntMatrix):
        matrix = IntMatrix.from_rows(matrix)
    f = ModuleMap(src, tgt, src.ring.reduce_matrix(matrix))
    if check and not f.is_well_defined():
        raise IllDefinedMap(
            f"matrix does not send relations of {src} into relations of {tgt}")
    return f


def identity_map(module: FpModule) -> ModuleMap:
    return ModuleMap(module, module, IntMatrix.identity(module.generators))


def zero_map(src: FpModule, tgt: FpModule) -> ModuleMap:
    return ModuleMap(src, tgt, IntMatrix.zeros(tgt.generators, src.generators))


# ---------------------------------------------------------------------------
# kernels, cokernels, images


def kernel(f: ModuleMap) -> tuple:
    """(K, inclusion) presenting {x in src : f(x) = 0}."""
    ring = f.src.ring
    gs = f.src.generators
    if gs == 0:
        z = zero_module(ring)
        return z, zero_map(z, f.src)
    stacked = hstack(f.matrix, f.tgt.relations)
    kb = kernel_basis(stacked, ring)
    cols = []
    for j in range(kb.cols):
        col = [kb.at(i, j) for i in range(gs)]
        col = [ring.reduce(x) for x in col]
        if any(col):
            cols.append(col)
    gen_mat = from_columns(cols, gs)
    k = gen_mat.cols
    if k == 0:
        z = zero_module(ring)
        return z, zero_map(z, f.src)
    stacked2 = hstack(gen_mat, f.src.relations)
    kb2 = kernel_basis(stacked2, ring)
    rel_cols = []
    for j in range(kb2.cols):
        col = [ring.reduce(kb2.at(i, j)) for i in range(k)]
        if any(col):
            rel_cols.append(col)
    kmod = make_module(ring, k, from_columns(rel_cols, k))
    incl = make_map(kmod, f.src, gen_mat)
    return kmod, incl


def cokernel(f: ModuleMap) -> tuple:
    """(C, projection) with C = tgt / image(f)."""
    ring = f.src.ring
    cmod = make_module(ring, f.tgt.generators, hstack(f.tgt.relations, f.matrix))
    proj = ModuleMap(f.tgt, cmod, IntMatrix.identity(f.tgt.generators))
    return cmod, proj


def image(f: ModuleMap) -> tuple:
    """(Im, inclusion into tgt, surjection from src)."""
    ring = f.src.ring
    gs = f.src.generators
    if gs == 0:
        z = zero_module(ring)
        return z, zero_map(z, f.tgt), zero_map(f.src, z)
    stacked = hstack(f.matrix, f.tgt.relations)
    kb = kernel_basis(stacked, ring)
    rel_cols = []
    for j in range(kb.cols):
        col = [ring.reduce(kb.at(i, j)) for i in range(gs)]
        if any(col):
            rel_cols.append(col)
    imod = make_module(ring, gs, from_columns(rel_cols, gs))
    incl = make_map(imod, f.tgt, f.matrix)
    epi = make_map(f.src, imod, IntMatrix.identity(gs))
    return imod, incl, epi


def is_injective(f: ModuleMap) -> bool:
    return kernel(f)[0].is_zero()


def is_surjective(f: ModuleMap) -> bool:
    return cokernel(f)[0].is_zero()


# ---------------------------------------------------------------------------
# biproducts, tensor, hom


def direct_sum(mods: Iterable[FpModule]) -> tuple:
    """(sum, injections, projections) with the block conventions fixed."""
    mods = list(mods)
    if not mods:
        raise InputError("direct_sum needs at least one summand")
    ring = mods[0].ring
    if any(m.ring != ring for m in mods):
        raise InputError("direct_sum over mixed rings")
    total = sum(m.generators for m in mods)
    rel = block_diag(*[m.relations for m in mods])
    s = make_module(ring, total, rel)
    injections = []
    projections = []
    offset = 0
    for m in mods:
        rows = []
        for i in range(total):
            row = [0] * m.generators
            if offset <= i < offset + m.generators:
                row[i - offset] = 1
            rows.append(tuple(row))
        inj = ModuleMap(m, s, IntMatrix(total, m.generators, tuple(rows)))
        proj_rows = []
        for i in range(m.generators):
            row = [0] * total
            row[offset + i] = 1
            proj_rows.append(tuple(row))
        proj = ModuleMap(s, m, IntMatrix(m.generators, total, tuple(proj_rows)))
        injections.append(inj)
        projections.append(proj)
        offset += m.generators
    return s, injections, projections


def tensor_modules(a: FpModule, b: FpModule) -> FpModule:
    """Tensor product presented on pairs (i, j) -> i * b.generators + j."""
    if a.ring != b.ring:
        raise InputError("tensor over mixed rings")
    ring = a.ring
    ga, gb = a.generators, b.generators
    parts = []
    if a.relations.cols:
        parts.append(a.relations.kron(IntMatrix.identity(gb)))
    if b.relations.cols:
        parts.append(IntMatrix.identity(ga).kron(b.relations))
    rel = hstack(*parts) if parts else IntMatrix.zeros(ga * gb, 0)
    return make_module(ring, ga * gb, rel)


def tensor_map(f: ModuleMap, g: ModuleMap) -> ModuleMap:
    """f tensor g on the pair presentations (Kronecker convention)."""
    src = tensor_modules(f.src, g.src)
    tgt = tensor_modules(f.tgt, g.tgt)
    ring = f.src.ring
    return ModuleMap(src, tgt, ring.reduce_matrix(f.matrix.kron(g.matrix)))


def _hom_cyclic(ring: Ring, a: int, b: int) -> tuple:
    """(order, generator multiplier) of Hom(R/<a>, R/<b>) on diagonal slots.

    Over Z the factor 0 encodes a free summand; Hom(Z/a, Z) vanishes for
    a > 0, which is the one case that does not follow the gcd formula.
    """
    if ring.modulus is None:
        if b == 0:
            return (0, 1) if a == 0 else (1, 0)
        if a == 0:
            return b, 1
        g = gcd(a, b)
        return g, b // g
    g = gcd(a, b)
    return g, b // g


@dataclass(frozen=True)
class HomSlot:
    src_index: int
    tgt_index: int
    order: int
    multiplier: int


@dataclass(frozen=True)
class HomModule:
    """Hom(source, target) as a module plus coordinate conversions.

    Generators are the surviving diagonal slots (i, j); to_map/from_map
    translate between coordinate vectors and actual ModuleMaps.
    """

    source: FpModule
    target: FpModule
    module: FpModule
    slots: tuple

    @property
    def invariant_factors(self) -> tuple:
        return self.module.invariant_factors

    def to_map(self, coords) -> ModuleMap:
        coords = list(coords)
        if len(coords) != len(self.slots):
            raise InputError("hom coordinate length mismatch")
        ring = self.source.ring
        dm = self.source.decomposition()
        dn = self.target.decomposition()
        lam = [[0] * self.source.generators for _ in range(self.target.generators)]
        for val, slot in zip(coords, self.slots):
            lam[slot.tgt_index][slot.src_index] += val * slot.multiplier
        lam_mat = (IntMatrix.from_rows(lam) if lam
                   else IntMatrix.zeros(0, self.source.generators))
        mat = dn.from_diag @ lam_mat @ dm.to_diag
        return ModuleMap(self.source, self.target, ring.reduce_matrix(mat))

    def from_map(self, f: ModuleMap):
        if f.src != self.source or f.tgt != self.target:
            raise InputError("from_map got a map between different modules")
        ring = self.source.ring
        m = ring.modulus
        dm = self.source.decomposition()
        dn = self.target.decomposition()
        lam = ring.reduce_matrix(dn.to_diag @ f.matrix @ dm.from_diag)
        coords = []
        for slot in self.slots:
            x = lam.at(slot.tgt_index, slot.src_index)
            b = dn.factors[slot.tgt_index]
            if m is None and b == 0:
                # free target slot: coordinate is the entry itself
                val = x
            else:
                x %= b
                if x % slot.multiplier:
                    raise WorkbenchError("map is not a hom element; not well defined?")
                val = (x // slot.multiplier) % slot.order
            coords.append(val)
        return tuple(coords)


def hom_modules(a: FpModule, b: FpModule) -> HomModule:
    """Hom(a, b) via the invariant factor decompositions of both sides."""
    if a.ring != b.ring:
        raise InputError("hom over mixed rings")
    ring = a.ring
    m = ring.modulus
    da = a.decomposition()
    db = b.decomposition()
    slots = []
    for i, fa in enumerate(da.factors):
        for j, fb in enumerate(db.factors):
            order, mult = _hom_cyclic(ring, fa, fb)
            if order == 1:
                continue
            slots.append(HomSlot(i, j, order, mult))
    rel_cols = []
    for pos, slot in enumerate(slots):
        free = (m is None and slot.order == 0) or (m is not None and slot.order == m)
        if not free:
            col = [0] * len(slots)
            col[pos] = slot.order
            rel_cols.append(col)
    module = make_module(ring, len(slots), from_columns(rel_cols, len(slots)))
    return HomModule(a, b, module, tuple(slots))


def hom_post(hm_src: HomModule, hm_tgt: HomModule, phi: ModuleMap) -> ModuleMap:
    """Post-composition Hom(A, B) -> Hom(A, B') induced by phi: B -> B'."""
    cols = []
    n = len(hm_src.slots)
    for s in range(n):
        coords = [0] * n
        coords[s] = 1
        f = hm_src.to_map(coords)
        cols.append(hm_tgt.from_map(phi @ f))
    mat = from_columns(cols, len(hm_tgt.slots))
    return ModuleMap(hm_src.module, hm_tgt.module, hm_src.module.ring.reduce_matrix(mat))


def hom_pre(hm_src: HomModule, hm_tgt: HomModule, psi: ModuleMap) -> ModuleMap:
    """Pre-composition Hom(A, B) -> Hom(A', B) induced by psi: A' -> A."""
    cols = []
    n = len(hm_src.slots)
    for s in range(n):
        coords = [0] * n
        coords[s] = 1
        f = hm_src.to_map(coords)
        cols.append(hm_tgt.from_map(f @ psi))
    mat = from_columns(cols, len(hm_tgt.slots))
    return ModuleMap(hm_src.module, hm_tgt.module, hm_src.module.ring.reduce_matrix(mat))


# ---------------------------------------------------------------------------
# pushout, pullback


def pushout(f: ModuleMap, g: ModuleMap) -> tuple:
    """Pushout of f: A -> B, g: A -> C; returns (D, from_b, from_c)."""
    if f.src != g.src:
        raise InputError("pushout legs must share their source")
    s, (ib, ic), _ = direct_sum([f.tgt, g.tgt])
    h = (ib @ f) - (ic @ g)
    d, proj = cokernel(h)
    return d, proj @ ib, proj @ ic


def pullback(f: ModuleMap, g: ModuleMap) -> tuple:
    """Pullback of f: B -> A, g: C -> A; returns (L, to_b, to_c)."""
    if f.tgt != g.tgt:
        raise InputError("pullback legs must share their target")
    s, _, (pb, pc) = direct_sum([f.src, g.src])
    h = (f @ pb) - (g @ pc)
    l, incl = kernel(h)
    return l, pb @ incl, pc @ incl


# ---------------------------------------------------------------------------
# joint solving for maps, retractions, factorizations


class MapSolver:
    """Joint solver for module map equations, modulo target relations.

    Unknown maps get their well-definedness constraint automatically;
    every equation receives a fresh auxiliary unknown absorbing the
    target relation span, so 'equal' always means equal in the module.
    """

    def __init__(self, ring: Ring):
        self.ring = ring
        self.system = LinearSystem(ring)
        self._maps: dict = {}
        self._aux = 0

    def add_map_unknown(self, key, src: FpModule, tgt: FpModule) -> None:
        if key in self._maps:
            raise InputError(f"unknown {key!r} already declared")
        self._maps[key] = (src, tgt)
        self.system.add_unknown(key, tgt.generators, src.generators)
        rel_s = src.relations
        if rel_s.cols == 0:
            return
        rel_t = tgt.relations
        terms = [(IntMatrix.identity(tgt.generators), key, rel_s)]
        if rel_t.cols:
            aux = ("_welldef", self._aux)
            self._aux += 1
            self.system.add_unknown(aux, rel_t.cols, rel_s.cols)
            terms.append((rel_t.scale(-1), aux, IntMatrix.identity(rel_s.cols)))
        self.system.add_equation(terms, IntMatrix.zeros(tgt.generators, rel_s.cols))

    def add_equation(self, terms: list, rhs: ModuleMap) -> None:
        """terms: list of (left IntMatrix, key, right IntMatrix); the sum
        must equal rhs as a map into rhs.tgt (mod its relations)."""
        tgt = rhs.tgt
        raw_terms = list(terms)
        rel_t = tgt.relations
        if rel_t.cols:
            aux = ("_eq", self._aux)
            self._aux += 1
            self.system.add_unknown(aux, rel_t.cols, rhs.src.generators)
            raw_terms.append((rel_t, aux, IntMatrix.identity(rhs.src.generators)))
        self.system.add_equation(raw_terms, rhs.matrix)

    def solve(self) -> Optional[dict]:
        sol = self.system.solve()
        if sol is None:
            return None
        out = {}
        for key, (src, tgt) in self._maps.items():
            out[key] = ModuleMap(src, tgt, self.ring.reduce_matrix(sol[key]))
        return out


def _top_rows(mat: IntMatrix, count: int, cols: int) -> IntMatrix:
    if count == 0:
        return IntMatrix.zeros(0, cols)
    return IntMatrix.from_rows(mat.row(i) for i in range(count))


def factor_through_mono(mono: ModuleMap, g: ModuleMap) -> ModuleMap:
    """The unique X with mono . X = g; raises if g misses the image.

    Solved column by column: adjoining the target relations to the matrix
    of the mono turns the congruence into an exact linear system, which is
    far smaller than the vectorized joint system.
    """
    if mono.tgt != g.tgt:
        raise InputError("factor_through_mono: targets differ")
    ring = mono.src.ring
    sol = solve_linear(hstack(mono.matrix, mono.tgt.relations), g.matrix, ring)
    if sol is None:
        raise WorkbenchError("map does not factor through the mono")
    x = ModuleMap(g.src, mono.src,
                  ring.reduce_matrix(_top_rows(sol, mono.src.generators,
                                               g.src.generators)))
    if x.is_well_defined():
        return x
    # injectivity forces well-definedness, so reaching this point means the
    # first argument has a kernel; let the joint solver settle it
    solver = MapSolver(ring)
    solver.add_map_unknown("x", g.src, mono.src)
    solver.add_equation([(mono.matrix, "x", IntMatrix.identity(g.src.generators))], g)
    joint = solver.solve()
    if joint is None:
        raise WorkbenchError("map does not factor through the mono")
    return joint["x"]


def factor_through_epi(epi: ModuleMap, g: ModuleMap) -> ModuleMap:
    """Some X with X . epi = g; raises if g does not kill ker(epi).

    A generator-wise preimage of the identity postcomposed with g gives the
    candidate directly; whenever a factoring exists at all, g kills the
    kernel and the candidate is well defined and correct.
    """
    if epi.src != g.src:
        raise InputError("factor_through_epi: sources differ")
    ring = epi.src.ring
    sec = solve_linear(hstack(epi.matrix, epi.tgt.relations),
                       IntMatrix.identity(epi.tgt.generators), ring)
    if sec is not None:
        s_mat = _top_rows(sec, epi.src.generators, epi.tgt.generators)
        x = ModuleMap(epi.tgt, g.tgt, ring.reduce_matrix(g.matrix @ s_mat))
        if x.is_well_defined() and (x @ epi).equals(g):
            return x
    # no section means the first argument is not onto; a failed candidate
    # means g does not kill the kernel; either way the joint solver is the
    # honest arbiter
    solver = MapSolver(ring)
    solver.add_map_unknown("x", epi.tgt, g.tgt)
    solver.add_equation([(IntMatrix.identity(g.tgt.generators), "x", epi.matrix)], g)
    joint = solver.solve()
    if joint is None:
        raise WorkbenchError("map does not factor through the epi")
    return joint["x"]


def element_preimage(f: ModuleMap, col: IntMatrix) -> Optional[IntMatrix]:
    """A generator column x with f(x) = col in the target, or None."""
    if col.rows != f.tgt.generators or col.cols != 1:
        raise InputError("element_preimage: column has the wrong shape")
    ring = f.src.ring
    rel = f.tgt.relations
    sol = solve_linear(hstack(f.matrix, rel), col, ring)
    if sol is None:
        return None
    x = IntMatrix.column_vector([sol.at(r, 0) for r in range(f.src.generators)])
    return ring.reduce_matrix(x)


def has_retraction(f: ModuleMap) -> Optional[ModuleMap]:
    """A left inverse r with r . f = id, or None; requires f injective."""
    if not is_injective(f):
        raise NotMono("has_retraction requires an injective map")
    solver = MapSolver(f.src.ring)
    solver.add_map_unknown("r", f.tgt, f.src)
    solver.add_equation([(IntMatrix.identity(f.src.generators), "r", f.matrix)],
                        identity_map(f.src))
    sol = solver.solve()
    return sol["r"] if sol else None


# ---------------------------------------------------------------------------
# short exact sequences


@dataclass(frozen=True)
class ShortExactSequence:
    """0 -> A -i-> B -p-> C -> 0, validated exactly."""

    i: ModuleMap
    p: ModuleMap


def short_exact_sequence(i: ModuleMap, p: ModuleMap) -> ShortExactSequence:
    if i.tgt != p.src:
        raise InputError("legs of a short exact sequence must be composable")
    if not is_injective(i):
        raise WorkbenchError("first leg is not injective")
    if not is_surjective(p):
        raise WorkbenchError("second leg is not surjective")
    if not (p @ i).is_zero():
        raise WorkbenchError("composite p . i is nonzero")
    kmod, incl = kernel(p)
    # image(i) = kernel(p): both inclusions factor through each other
    try:
        factor_through_mono(incl, i)
        factor_through_mono(i, incl)
    except WorkbenchError as exc:
        raise WorkbenchError("sequence is not exact in the middle") from exc
    return ShortExactSequence(i, p)
