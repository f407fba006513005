"""Constructive pure injective and pure projective resolutions.

The bounded builders run the pushout (injective side) and pullback
(projective side) inductions degree by degree.  Unbounded-looking input
(windows crossing zero on the wrong side) goes through towers of
truncations whose levels extend each other by degreewise split maps, and
the (co)limit at finite depth is read off degreewise and re-verified.
Every product ships with a certificate that re-validates from scratch.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from purcat.exact_linalg import (
    IntMatrix,
    InputError,
    WorkbenchError,
    hstack,
    vstack,
)
from purcat.fpmod import (
    FpModule,
    ModuleMap,
    cokernel,
    cyclic_module,
    direct_sum,
    factor_through_epi,
    factor_through_mono,
    identity_map,
    is_injective,
    is_surjective,
    kernel,
    pullback,
    pushout,
    zero_map,
)
from purcat.complexes import (
    ChainMap,
    Complex,
    Homotopy,
    cone,
    direct_sum_complexes,
    hom_module_chain_map,
    hom_module_complex,
    homology_map,
    identity_chain_map,
    minimize_complex,
    module_complex,
    shift,
    shift_map,
    tensor_module_chain_map,
    tensor_module_complex,
    trim,
    truncate_geq,
    truncate_leq,
    zero_chain_map,
    zero_complex,
    zero_homotopy,
)
from purcat.homotopy import (
    BY_BOUNDED_INJECTIVE,
    BY_BOUNDED_PROJECTIVE,
    certify_k_pure_injective,
    certify_k_pure_projective,
    contract_complex,
    _term_pure_injective,
)

INJECTIVE = "injective"
PROJECTIVE = "projective"


class UnsupportedRing(WorkbenchError):
    """The requested construction leaves the finitely presented universe."""


class DepthInsufficient(WorkbenchError):
    """The tower has not stabilized at the requested depth."""

    def __init__(self, required: int):
        super().__init__(f"tower needs depth at least {required}")
        self.required = required


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class ResolutionCertificate:
    """A resolution map together with everything needed to re-check it.

    side "injective": map runs source -> target into pure injectives.
    side "projective": map runs target -> source out of pure projectives.
    qis_witness contracts the cone of the map.
    """

    source: Complex
    target: Complex
    map: ChainMap
    side: str
    qis_witness: Homotopy
    termwise_flags: tuple

    def resolution_map(self) -> ChainMap:
        return self.map


def _termwise_ok(side: str, target: Complex) -> tuple:
    if side == INJECTIVE:
        return tuple(_term_pure_injective(m) for m in target.modules)
    return tuple(True for _ in target.modules)


def validate_certificate(cert: ResolutionCertificate) -> bool:
    """Re-check a certificate from scratch: direction, purity, contraction."""
    if cert.side == INJECTIVE:
        if cert.map.src != cert.source or cert.map.tgt != cert.target:
            return False
    elif cert.side == PROJECTIVE:
        if cert.map.src != cert.target or cert.map.tgt != cert.source:
            return False
    else:
        return False
    if not cert.map.is_chain_map():
        return False
    flags = _termwise_ok(cert.side, cert.target)
    if tuple(cert.termwise_flags) != flags or not all(flags):
        return False
    c = cone(cert.map).complex
    w = cert.qis_witness
    if w.src != c or w.tgt != c:
        return False
    return w.witnesses(identity_chain_map(c))


def _certificate(source: Complex, target: Complex, res_map: ChainMap,
                 side: str) -> ResolutionCertificate:
    witness = contract_complex(cone(res_map).complex)
    if witness is None:
        raise WorkbenchError("resolution map has a non-contractible cone")
    return ResolutionCertificate(
        source, target, res_map, side, witness, _termwise_ok(side, target)
    )


def _identity_cone_contraction(m: Complex, c: Complex) -> Homotopy:
    # degree i of the cone of the identity is m^(i+1) (+) m^i; sending
    # the second block onto the first block one degree down satisfies
    # d s + s d = id on the nose, so nothing has to be solved for
    comps = []
    for i in range(c.lo, c.hi + 1):
        rows = c.module(i - 1).generators
        cols = c.module(i).generators
        top = m.module(i + 1).generators
        keep = m.module(i).generators
        data = [[0] * cols for _ in range(rows)]
        for r in range(keep):
            data[r][top + r] = 1
        mat = IntMatrix(rows, cols, tuple(tuple(row) for row in data))
        comps.append(ModuleMap(c.module(i), c.module(i - 1), mat))
    return Homotopy(c, c, c.lo, tuple(comps))


def identity_resolution(m: Complex, side: str) -> ResolutionCertificate:
    """Certify a complex as its own resolution.

    Legitimate exactly when every term already lies in the class, which
    makes the bounded complex K-pure injective (or K-pure projective)
    and the identity a resolution map.  The certificate is as strong as
    a computed one: the qis witness is the explicit contraction of the
    identity cone, written down rather than solved for.
    """
    if side not in (INJECTIVE, PROJECTIVE):
        raise InputError("side must be injective or projective")
    flags = _termwise_ok(side, m)
    if not all(flags):
        raise WorkbenchError(
            "a complex can stand as its own resolution only when every "
            "term is already in the class"
        )
    res_map = identity_chain_map(m)
    c = cone(res_map).complex
    if not c.modules:
        witness = zero_homotopy(c, c)
    else:
        witness = _identity_cone_contraction(m, c)
    return ResolutionCertificate(m, m, res_map, side, witness, flags)


# ---------------------------------------------------------------------------
# bounded builders


def _require_injective_scope(cx: Complex) -> None:
    if cx.ring.modulus is not None:
        return
    for m in cx.modules:
        if not m.is_torsion():
            raise UnsupportedRing(
                "pure injective resolutions over the integers need torsion terms"
            )


def _rewindow_map(f: ChainMap, src: Complex, tgt: Complex) -> ChainMap:
    """Rebuild f against trimmed or extended windows of the same terms."""
    lo = min(src.lo, tgt.lo)
    hi = max(src.hi, tgt.hi)
    comps = []
    for i in range(lo, hi + 1):
        c = f.component(i)
        a, b = src.module(i), tgt.module(i)
        if c.src == a and c.tgt == b:
            comps.append(c)
        else:
            comps.append(zero_map(a, b))
    return ChainMap(src, tgt, lo, tuple(comps))


def _build_injective(m: Complex):
    """The pushout induction; returns (I, u: m -> I) on window [lo, hi+1]."""
    ring = m.ring
    lo, hi = m.lo, m.hi
    i_mods = [m.module(lo)]
    i_diffs = []
    u_comps = [identity_map(m.module(lo))]
    coker_proj = identity_map(m.module(lo))
    for k in range(lo + 1, hi + 2):
        q_prev = coker_proj @ u_comps[-1]
        d_prev = m.differential(k - 1)
        c_k, from_b, from_c = pushout(d_prev, q_prev)
        i_mods.append(c_k)
        i_diffs.append(from_c @ coker_proj)
        u_comps.append(from_b)
        _, coker_proj = cokernel(i_diffs[-1])
    i_cx = Complex(ring, lo, tuple(i_mods), tuple(i_diffs))
    u = ChainMap(m, i_cx, lo, tuple(u_comps))
    return i_cx, u


def resolve_injective_bounded_below(m: Complex) -> ResolutionCertificate:
    """Resolve by pure injectives via the degreewise pushout induction.

    Each step pushes the differential out along the previous embedding's
    cokernel; in scope the pushout term is already pure injective, so
    the embedding of each new term is the identity.
    """
    _require_injective_scope(m)
    m = trim(m)
    if not m.modules:
        target = zero_complex(m.ring)
        res_map = zero_chain_map(m, target)
        return ResolutionCertificate(
            m, target, res_map, INJECTIVE, zero_homotopy(
                cone(res_map).complex, cone(res_map).complex
            ), ()
        )
    mini, to_min, _ = minimize_complex(m)
    i_raw, u_raw = _build_injective(mini)
    i_trim = trim(i_raw)
    u_trim = _rewindow_map(u_raw, mini, i_trim)
    i_min, to_i, _ = minimize_complex(i_trim)
    res_map = to_i @ u_trim @ to_min
    res_map = _rewindow_map(res_map, m, i_min)
    return _certificate(m, i_min, res_map, INJECTIVE)


def _build_projective(m: Complex):
    """The pullback induction; returns (P, v: P -> m) on window [lo-1, hi]."""
    ring = m.ring
    lo, hi = m.lo, m.hi
    p_mods = [m.module(hi)]
    p_diffs = []
    v_comps = [identity_map(m.module(hi))]
    ker_incl = identity_map(m.module(hi))
    for k in range(hi - 1, lo - 2, -1):
        edge = v_comps[0] @ ker_incl
        l_k, to_b, to_c = pullback(m.differential(k), edge)
        p_mods.insert(0, l_k)
        p_diffs.insert(0, ker_incl @ to_c)
        v_comps.insert(0, to_b)
        _, ker_incl = kernel(p_diffs[0])
    p_cx = Complex(ring, lo - 1, tuple(p_mods), tuple(p_diffs))
    v = ChainMap(p_cx, m, lo - 1, tuple(v_comps))
    return p_cx, v


def resolve_projective_bounded_above(m: Complex) -> ResolutionCertificate:
    """Resolve by pure projectives via the degreewise pullback induction.

    In scope every finitely presented module is pure projective, so each
    new term covers its pullback by the identity.
    """
    m = trim(m)
    if not m.modules:
        target = zero_complex(m.ring)
        res_map = zero_chain_map(target, m)
        return ResolutionCertificate(
            m, target, res_map, PROJECTIVE, zero_homotopy(
                cone(res_map).complex, cone(res_map).complex
            ), ()
        )
    mini, to_min, back_min = minimize_complex(m)
    p_raw, v_raw = _build_projective(mini)
    p_trim = trim(p_raw)
    v_trim = _rewindow_map(v_raw, p_trim, mini)
    p_min, to_p, back_p = minimize_complex(p_trim)
    res_map = back_min @ v_trim @ back_p
    res_map = _rewindow_map(res_map, p_min, m)
    return _certificate(m, p_min, res_map, PROJECTIVE)


# ---------------------------------------------------------------------------
# degreewise families (sections and retractions are not chain maps)


@dataclass(frozen=True)
class DegreewiseFamily:
    """A bare family of module maps, one per degree, no chain condition."""

    src: Complex
    tgt: Complex
    lo: int
    components: tuple

    def component(self, i: int) -> ModuleMap:
        k = i - self.lo
        if 0 <= k < len(self.components):
            return self.components[k]
        return zero_map(self.src.module(i), self.tgt.module(i))


def _summand_inclusion(part: FpModule, total: FpModule, before: int) -> ModuleMap:
    if part.generators == 0:
        return zero_map(part, total)
    mat = vstack(
        IntMatrix.zeros(before, part.generators),
        IntMatrix.identity(part.generators),
        IntMatrix.zeros(total.generators - before - part.generators, part.generators),
    )
    return ModuleMap(part, total, mat)


# ---------------------------------------------------------------------------
# the shared extension steps


def _extend_injective(q: ChainMap, inner: Optional[ResolutionCertificate] = None):
    """Extend a level along q: N -> I.

    Returns (level, h: N -> level, p: level -> I, section, kern,
    kern_incl, inner) where level is degreewise I (+) J[-1] for J the
    resolution of cone(q), p is the degreewise split projection with
    kernel J[-1], and p . h = q on the nose.
    """
    n_cx, i_cx = q.src, q.tgt
    ring = q.src.ring
    cq = cone(q)
    if inner is None:
        inner = resolve_injective_bounded_below(cq.complex)
        if inner.source != cq.complex:
            g_full = _rewindow_map(inner.map, cq.complex, inner.target)
            inner = _certificate(cq.complex, inner.target, g_full, INJECTIVE)
    j_cx = inner.target
    g = inner.map
    gpp = g @ cq.inclusion
    lo = min(i_cx.lo, j_cx.lo + 1)
    hi = max(i_cx.hi, j_cx.hi + 1)
    mods = []
    injs_i, injs_j, projs_i, projs_j = [], [], [], []
    for d in range(lo, hi + 1):
        total, injs, projs = direct_sum([i_cx.module(d), j_cx.module(d - 1)])
        mods.append(total)
        injs_i.append(injs[0])
        injs_j.append(injs[1])
        projs_i.append(projs[0])
        projs_j.append(projs[1])
    diffs = []
    for d in range(lo, hi):
        k = d - lo
        step = injs_i[k + 1] @ i_cx.differential(d) @ projs_i[k]
        step = step + injs_j[k + 1] @ gpp.component(d) @ projs_i[k]
        step = step - injs_j[k + 1] @ j_cx.differential(d - 1) @ projs_j[k]
        diffs.append(step)
    level = Complex(ring, lo, tuple(mods), tuple(diffs))
    h_comps = []
    for d in range(lo, hi + 1):
        k = d - lo
        n_mod = n_cx.module(d)
        comp = injs_i[k] @ q.component(d)
        cmod = cq.complex.module(d - 1)
        if n_mod.generators and cmod.generators:
            into_cone = _summand_inclusion(n_mod, cmod, 0)
            comp = comp + injs_j[k] @ (g.component(d - 1) @ into_cone)
        h_comps.append(comp)
    h = ChainMap(n_cx, level, lo, tuple(h_comps))
    p = ChainMap(level, i_cx, lo, tuple(projs_i))
    section = DegreewiseFamily(i_cx, level, lo, tuple(injs_i))
    kern = shift(j_cx, -1)
    kern_incl = ChainMap(kern, level, lo, tuple(injs_j))
    return level, h, p, section, kern, kern_incl, inner


def _extend_projective(a: ChainMap, inner: Optional[ResolutionCertificate] = None):
    """Extend a level along a: P -> N.

    Returns (level, v: level -> N, incl: P -> level, retraction, coker,
    coker_proj, inner) where level is degreewise Q (+) P for Q the
    resolution of cone(a), incl is the degreewise split inclusion with
    cokernel Q, and v . incl = a on the nose.
    """
    p_cx, n_cx = a.src, a.tgt
    ca = cone(a)
    if inner is None:
        inner = resolve_projective_bounded_above(ca.complex)
        if inner.source != ca.complex:
            w_full = _rewindow_map(inner.map, inner.target, ca.complex)
            inner = _certificate(ca.complex, inner.target, w_full, PROJECTIVE)
    q_cx = inner.target
    w = inner.map
    w1 = shift_map(ca.projection @ w, -1)
    level_cone = cone(w1)
    level = level_cone.complex
    incl = level_cone.inclusion
    lo = level.lo
    v_comps = []
    retr_comps = []
    for d in range(lo, level.hi + 1):
        qd = q_cx.module(d)
        pd = p_cx.module(d)
        total = level.module(d)
        proj_q = _summand_projection(total, 0, qd)
        proj_p = _summand_projection(total, qd.generators, pd)
        comp = a.component(d) @ proj_p - _n_part(w, ca, n_cx, d) @ proj_q
        v_comps.append(comp)
        retr_comps.append(proj_p)
    v = ChainMap(level, n_cx, lo, tuple(v_comps))
    retraction = DegreewiseFamily(level, p_cx, lo, tuple(retr_comps))
    coker = q_cx
    proj_comps = []
    for d in range(lo, level.hi + 1):
        proj_comps.append(_summand_projection(level.module(d), 0, q_cx.module(d)))
    coker_proj = ChainMap(level, coker, lo, tuple(proj_comps))
    return level, v, incl, retraction, coker, coker_proj, inner


def _summand_projection(total: FpModule, before: int, part: FpModule) -> ModuleMap:
    if part.generators == 0:
        return zero_map(total, part)
    mat = hstack(
        IntMatrix.zeros(part.generators, before),
        IntMatrix.identity(part.generators),
        IntMatrix.zeros(part.generators, total.generators - before - part.generators),
    )
    return ModuleMap(total, part, mat)


def _n_part(w: ChainMap, ca, n_cx: Complex, d: int) -> ModuleMap:
    """Degree d of the target component of w: Q -> cone(a), into N^d."""
    q_mod = w.src.module(d)
    cmod = ca.complex.module(d)
    n_mod = n_cx.module(d)
    if q_mod.generators == 0 or cmod.generators == 0 or n_mod.generators == 0:
        return zero_map(q_mod, n_mod)
    p_part = cmod.generators - n_mod.generators
    proj_n = _summand_projection(cmod, p_part, n_mod)
    return proj_n @ w.component(d)


# ---------------------------------------------------------------------------
# towers


@dataclass(frozen=True)
class SemiSplitInverseTower:
    """Levels resolving deeper and deeper co-truncations of the source.

    Each surjection splits degree by degree and its kernel is a bounded
    complex of pure injectives, certified; cone_certificates carry the
    inner resolutions that make the level-step cone identity literal.
    """

    source: Complex
    truncations: tuple
    transitions: tuple
    levels: tuple
    surjections: tuple
    sections: tuple
    kernels: tuple
    kernel_inclusions: tuple
    kernel_certificates: tuple
    cone_certificates: tuple

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


@dataclass(frozen=True)
class SemiSplitDirectTower:
    """Levels resolving longer and longer truncations of the source."""

    source: Complex
    truncations: tuple
    transitions: tuple
    levels: tuple
    injections: tuple
    retractions: tuple
    cokernels: tuple
    cokernel_projections: tuple
    cokernel_certificates: tuple
    cone_certificates: tuple

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


def injective_tower(m: Complex, depth: int):
    """Build the inverse tower of resolutions of the co-truncations.

    Returns (tower, fs) with fs[n] the resolution map of the n-th
    co-truncation.  Stabilized steps extend by the zero resolution, so
    the degreewise product formula stays literally true at every level.
    """
    _require_injective_scope(m)
    m = trim(m)
    if depth < 0:
        raise InputError("tower depth must be nonnegative")
    truncations = []
    transitions = []
    for n in range(depth + 1):
        t_n, _ = truncate_geq(m, -n)
        truncations.append(t_n)
        if n >= 1:
            _, proj = truncate_geq(truncations[n], -(n - 1))
            if proj.tgt != truncations[n - 1]:
                raise WorkbenchError("truncation tower is not nested literally")
            transitions.append(proj)
    base = resolve_injective_bounded_below(truncations[0])
    levels = [base.target]
    fs = [_rewindow_map(base.map, truncations[0], base.target)]
    surjections, sections = [], []
    kernels, kernel_incls, kernel_certs, cone_certs = [], [], [], []
    for n in range(1, depth + 1):
        q = fs[n - 1] @ transitions[n - 1]
        inner = None
        if truncations[n] == truncations[n - 1]:
            cq = cone(q).complex
            target = zero_complex(m.ring)
            zmap = zero_chain_map(cq, target)
            witness = contract_complex(cone(zmap).complex)
            if witness is None:
                raise WorkbenchError("stabilized level has non-contractible cone")
            inner = ResolutionCertificate(cq, target, zmap, INJECTIVE, witness, ())
        level, h, p, section, kern, kern_incl, inner = _extend_injective(q, inner)
        levels.append(level)
        fs.append(h)
        surjections.append(p)
        sections.append(section)
        kernels.append(kern)
        kernel_incls.append(kern_incl)
        kernel_certs.append(certify_k_pure_injective(kern))
        cone_certs.append(inner)
    tower = SemiSplitInverseTower(
        m, tuple(truncations), tuple(transitions), tuple(levels),
        tuple(surjections), tuple(sections), tuple(kernels),
        tuple(kernel_incls), tuple(kernel_certs), tuple(cone_certs),
    )
    return tower, tuple(fs)


def projective_tower(m: Complex, depth: int):
    """Dual tower: resolutions of the truncations linked by split monos."""
    m = trim(m)
    if depth < 0:
        raise InputError("tower depth must be nonnegative")
    truncations = []
    transitions = []
    incls = []
    for n in range(depth + 1):
        t_n, incl = truncate_leq(m, n)
        truncations.append(t_n)
        incls.append(incl)
        if n >= 1:
            prev, here = truncations[n - 1], truncations[n]
            lo = min(prev.lo, here.lo)
            comps = []
            for i in range(lo, max(prev.hi, here.hi) + 1):
                comps.append(
                    factor_through_mono(
                        incls[n].component(i), incls[n - 1].component(i)
                    )
                )
            transitions.append(ChainMap(prev, here, lo, tuple(comps)))
    base = resolve_projective_bounded_above(truncations[0])
    levels = [base.target]
    fs = [_rewindow_map(base.map, base.target, truncations[0])]
    injections, retractions = [], []
    cokernels, coker_projs, coker_certs, cone_certs = [], [], [], []
    for n in range(1, depth + 1):
        a = transitions[n - 1] @ fs[n - 1]
        inner = None
        if truncations[n] == truncations[n - 1]:
            ca = cone(a).complex
            target = zero_complex(m.ring)
            zmap = zero_chain_map(target, ca)
            witness = contract_complex(cone(zmap).complex)
            if witness is None:
                raise WorkbenchError("stabilized level has non-contractible cone")
            inner = ResolutionCertificate(ca, target, zmap, PROJECTIVE, witness, ())
        level, v, incl, retraction, coker, coker_proj, inner = _extend_projective(a, inner)
        levels.append(level)
        fs.append(v)
        injections.append(incl)
        retractions.append(retraction)
        cokernels.append(coker)
        coker_projs.append(coker_proj)
        coker_certs.append(certify_k_pure_projective(coker))
        cone_certs.append(inner)
    tower = SemiSplitDirectTower(
        m, tuple(truncations), tuple(transitions), tuple(levels),
        tuple(injections), tuple(retractions), tuple(cokernels),
        tuple(coker_projs), tuple(coker_certs), tuple(cone_certs),
    )
    return tower, tuple(fs)


# ---------------------------------------------------------------------------
# tower validation


def _modules_match(x: FpModule, y: FpModule) -> bool:
    if x.generators == 0 and y.generators == 0:
        return True
    return x == y


def _complexes_match(a: Complex, b: Complex) -> bool:
    if a.ring != b.ring:
        return False
    lo = min(a.lo, b.lo)
    hi = max(a.hi, b.hi)
    for i in range(lo, hi + 1):
        if not _modules_match(a.module(i), b.module(i)):
            return False
    for i in range(lo, hi + 1):
        # maps touching a zero module are forced, so only compare the rest
        if a.module(i).generators and a.module(i + 1).generators:
            if not a.differential(i).equals(b.differential(i)):
                return False
    return True


def check_inverse_level_cone_identity(tower: SemiSplitInverseTower, fs,
                                      n: int) -> bool:
    """The level-n extension satisfies cone(f_n) = cone(-g)[-1] literally."""
    inner = tower.cone_certificates[n - 1]
    left = cone(fs[n]).complex
    right = shift(cone(-inner.map).complex, -1)
    return _complexes_match(left, right)


def check_direct_level_cone_identity(tower: SemiSplitDirectTower, fs,
                                     n: int) -> bool:
    """The level-n extension satisfies cone(f_n) = cone(-w) literally."""
    inner = tower.cone_certificates[n - 1]
    left = cone(fs[n]).complex
    right = cone(-inner.map).complex
    return _complexes_match(left, right)


def validate_inverse_tower(tower: SemiSplitInverseTower, fs) -> bool:
    """Degreewise split exactness, kernel certificates, cone identities."""
    for n in range(1, tower.depth + 1):
        p = tower.surjections[n - 1]
        s = tower.sections[n - 1]
        level, prev = tower.levels[n], tower.levels[n - 1]
        for i in range(level.lo, level.hi + 1):
            if not is_surjective(p.component(i)):
                return False
            comp = p.component(i) @ s.component(i)
            if not comp.equals(identity_map(prev.module(i))):
                return False
        if not p.is_chain_map():
            return False
        ki = tower.kernel_inclusions[n - 1]
        if not ki.is_chain_map():
            return False
        for i in range(tower.kernels[n - 1].lo, tower.kernels[n - 1].hi + 1):
            if not is_injective(ki.component(i)):
                return False
            if not (p.component(i) @ ki.component(i)).is_zero():
                return False
        cert = tower.kernel_certificates[n - 1]
        if cert.route != BY_BOUNDED_INJECTIVE or cert.subject != tower.kernels[n - 1]:
            return False
        if not validate_certificate(tower.cone_certificates[n - 1]):
            return False
        if not check_inverse_level_cone_identity(tower, fs, n):
            return False
        if not (p @ fs[n]).equals(fs[n - 1] @ tower.transitions[n - 1]):
            return False
    return True


def validate_direct_tower(tower: SemiSplitDirectTower, fs) -> bool:
    """Degreewise split monos, cokernel certificates, cone identities."""
    for n in range(1, tower.depth + 1):
        incl = tower.injections[n - 1]
        r = tower.retractions[n - 1]
        level, prev = tower.levels[n], tower.levels[n - 1]
        for i in range(level.lo, level.hi + 1):
            if not is_injective(incl.component(i)):
                return False
            comp = r.component(i) @ incl.component(i)
            if not comp.equals(identity_map(prev.module(i))):
                return False
        if not incl.is_chain_map():
            return False
        cp = tower.cokernel_projections[n - 1]
        if not cp.is_chain_map():
            return False
        for i in range(level.lo, level.hi + 1):
            if not is_surjective(cp.component(i)):
                return False
            if not (cp.component(i) @ incl.component(i)).is_zero():
                return False
        cert = tower.cokernel_certificates[n - 1]
        if cert.route != BY_BOUNDED_PROJECTIVE or cert.subject != tower.cokernels[n - 1]:
            return False
        if not validate_certificate(tower.cone_certificates[n - 1]):
            return False
        if not check_direct_level_cone_identity(tower, fs, n):
            return False
        if not (fs[n] @ incl).equals(tower.transitions[n - 1] @ fs[n - 1]):
            return False
    return True


# ---------------------------------------------------------------------------
# limits


def required_depth(m: Complex, side: str) -> int:
    m = trim(m)
    if not m.modules:
        return 0
    if side == INJECTIVE:
        return max(0, -m.lo)
    return max(0, m.hi)


def check_limit_product_formula(tower: SemiSplitInverseTower) -> bool:
    """Top level degree j equals I_0^j (+) sum of kernel terms, literally."""
    top = tower.levels[-1]
    base = tower.levels[0]
    for j in range(top.lo, top.hi + 1):
        parts = [base.module(j)]
        for kern in tower.kernels:
            parts.append(kern.module(j))
        want, _, _ = direct_sum(parts)
        if not _modules_match(top.module(j), want):
            return False
    return True


def check_colimit_sum_formula(tower: SemiSplitDirectTower) -> bool:
    """Top level degree j equals the cokernel terms plus P_0^j, literally."""
    top = tower.levels[-1]
    base = tower.levels[0]
    for j in range(top.lo, top.hi + 1):
        parts = []
        for coker in reversed(tower.cokernels):
            parts.append(coker.module(j))
        parts.append(base.module(j))
        want, _, _ = direct_sum(parts)
        if not _modules_match(top.module(j), want):
            return False
    return True


def limit_tower(tower: SemiSplitInverseTower, fs) -> ResolutionCertificate:
    """Read the limit off the stabilized tower and certify it directly."""
    m = tower.source
    need = required_depth(m, INJECTIVE)
    if tower.depth < need or tower.truncations[-1] != m:
        raise DepthInsufficient(need)
    if not check_limit_product_formula(tower):
        raise WorkbenchError("tower levels violate the degreewise product formula")
    for t in tower.transitions:
        for i in range(t.src.lo, t.src.hi + 1):
            if not is_surjective(t.component(i)):
                raise WorkbenchError("truncation transition is not degreewise surjective")
    if not validate_inverse_tower(tower, fs):
        raise WorkbenchError("tower invariants fail to re-validate")
    return _certificate(m, tower.levels[-1], fs[-1], INJECTIVE)


def colimit_tower(tower: SemiSplitDirectTower, fs) -> ResolutionCertificate:
    """Read the colimit off the stabilized tower and certify it directly."""
    m = tower.source
    need = required_depth(m, PROJECTIVE)
    if tower.depth < need or tower.truncations[-1] != m:
        raise DepthInsufficient(need)
    if not check_colimit_sum_formula(tower):
        raise WorkbenchError("tower levels violate the degreewise sum formula")
    if not validate_direct_tower(tower, fs):
        raise WorkbenchError("tower invariants fail to re-validate")
    return _certificate(m, tower.levels[-1], fs[-1], PROJECTIVE)


# ---------------------------------------------------------------------------
# lifting


def lift_injective(f: ChainMap, r1: ResolutionCertificate):
    """Lift resolutions along f: M2 -> M1 given r1 resolving M1.

    Returns (r2, g: I2 -> I1, square_homotopy) with g . u2 = u1 . f; the
    construction happens to make the square strict, so the witness is
    the zero homotopy.
    """
    if r1.side != INJECTIVE or f.tgt != r1.source:
        raise InputError("r1 must be an injective resolution of the target of f")
    _require_injective_scope(f.src)
    q = r1.map @ f
    level, h, p, _, _, _, _ = _extend_injective(q)
    r2 = _certificate(f.src, level, h, INJECTIVE)
    square = (p @ h) - (r1.map @ f)
    if not square.is_zero():
        raise WorkbenchError("lift square unexpectedly fails to commute strictly")
    return r2, p, zero_homotopy(f.src, r1.target)


def lift_projective(f: ChainMap, r2: ResolutionCertificate):
    """Lift resolutions along f: M2 -> M1 given r2 resolving M2.

    Returns (r1, g: P2 -> P1, square_homotopy) with v1 . g = f . v2
    strictly; the witness is the zero homotopy.
    """
    if r2.side != PROJECTIVE or f.src != r2.source:
        raise InputError("r2 must be a projective resolution of the source of f")
    a = f @ r2.map
    level, v, incl, _, _, _, _ = _extend_projective(a)
    r1 = _certificate(f.tgt, level, v, PROJECTIVE)
    square = (v @ incl) - (f @ r2.map)
    if not square.is_zero():
        raise WorkbenchError("lift square unexpectedly fails to commute strictly")
    return r1, incl, zero_homotopy(r2.target, f.tgt)


# ---------------------------------------------------------------------------
# dispatch and padding


def _minimize_certificate(cert: ResolutionCertificate) -> ResolutionCertificate:
    mini, to_min, back_min = minimize_complex(cert.target)
    mini = trim(mini)
    if cert.side == INJECTIVE:
        res_map = _rewindow_map(to_min, cert.target, mini) @ cert.map
        res_map = _rewindow_map(res_map, cert.source, mini)
    else:
        res_map = cert.map @ _rewindow_map(back_min, mini, cert.target)
        res_map = _rewindow_map(res_map, mini, cert.source)
    return _certificate(cert.source, mini, res_map, cert.side)


def resolve(m: Complex, side: str, depth: Optional[int] = None,
            minimize: bool = True) -> ResolutionCertificate:
    """Resolve either way: bounded fast path or tower plus (co)limit."""
    if side not in (INJECTIVE, PROJECTIVE):
        raise InputError("side must be injective or projective")
    m = trim(m)
    need = required_depth(m, side)
    if depth is not None and depth < need:
        raise DepthInsufficient(need)
    use = need if depth is None else depth
    if side == INJECTIVE:
        if use == 0:
            return resolve_injective_bounded_below(m)
        tower, fs = injective_tower(m, use)
        cert = limit_tower(tower, fs)
    else:
        if use == 0:
            return resolve_projective_bounded_above(m)
        tower, fs = projective_tower(m, use)
        cert = colimit_tower(tower, fs)
    if minimize:
        cert = _minimize_certificate(cert)
    return cert


def pad_resolution(cert: ResolutionCertificate, seed: int) -> ResolutionCertificate:
    """A different but equally valid resolution, varying with the seed.

    Pads the target with the cone of an identity map on a seeded cyclic
    module; torsion keeps the injective side in scope over the integers.
    """
    rng = random.Random(seed)
    ring = cert.target.ring
    order = rng.randint(2, 9)
    spot = rng.randint(cert.target.lo, max(cert.target.lo, cert.target.hi - 1))
    pad = cone(identity_chain_map(module_complex(cyclic_module(ring, order), spot))).complex
    total, injs, projs = direct_sum_complexes([cert.target, pad])
    if cert.side == INJECTIVE:
        res_map = injs[0] @ cert.map
        res_map = _rewindow_map(res_map, cert.source, total)
        return _certificate(cert.source, total, res_map, INJECTIVE)
    res_map = cert.map @ projs[0]
    res_map = _rewindow_map(res_map, total, cert.source)
    return _certificate(cert.source, total, res_map, PROJECTIVE)


# ---------------------------------------------------------------------------
# per-step displayed conditions


def injective_step_conditions(cert: ResolutionCertificate, battery) -> dict:
    """The two displayed conditions of the pushout induction, per probe.

    For each step degree k and probe N: (a) the induced map
    Coker(d^(k-1) (x) N) -> Coker(e^(k-1) (x) N) is injective, and
    (b) H^(k-1) of the tensored resolution map is an isomorphism.
    """
    m, i_cx, u = cert.source, cert.target, cert.map
    report = {}
    for probe in battery.probes:
        mn = tensor_module_complex(m, probe)
        in_cx = tensor_module_complex(i_cx, probe)
        un = tensor_module_chain_map(u, probe)
        per_probe = {}
        for k in range(i_cx.lo + 1, i_cx.hi + 2):
            cok_m, proj_m = cokernel(mn.differential(k - 1))
            cok_i, proj_i = cokernel(in_cx.differential(k - 1))
            induced = factor_through_epi(proj_m, proj_i @ un.component(k))
            hmap = homology_map(un, k - 1)
            per_probe[k] = (
                is_injective(induced),
                is_injective(hmap) and is_surjective(hmap),
            )
        report[probe.invariant_factors] = per_probe
    return report


def projective_step_conditions(cert: ResolutionCertificate, battery) -> dict:
    """The dual displayed conditions of the pullback induction, per probe.

    For each step degree k and probe Q: (a) the induced map
    Ker(Hom(Q, e^k)) -> Ker(Hom(Q, d^k)) is surjective, and (b) the
    degree k+1 homology of Hom(Q, resolution map) is an isomorphism.
    """
    m, p_cx, v = cert.source, cert.target, cert.map
    report = {}
    for probe in battery.probes:
        hm = hom_module_complex(probe, m)
        hp = hom_module_complex(probe, p_cx)
        hv = hom_module_chain_map(probe, v)
        per_probe = {}
        for k in range(p_cx.lo - 1, p_cx.hi):
            ker_p, incl_p = kernel(hp.differential(k))
            ker_m, incl_m = kernel(hm.differential(k))
            induced = factor_through_mono(incl_m, hv.component(k) @ incl_p)
            hmap = homology_map(hv, k + 1)
            per_probe[k] = (
                is_surjective(induced),
                is_injective(hmap) and is_surjective(hmap),
            )
        report[probe.invariant_factors] = per_probe
    return report
