"""Resolution builders, towers, limits, lifts, and their certificates."""

import random

import pytest

from purcat.exact_linalg import InputError, WorkbenchError, ZZ, Zmod
from purcat.fpmod import cyclic_module, free_module, identity_map
from purcat.complexes import (
    complexes_equal,
    homology_invariants,
    make_chain_map,
    make_complex,
    module_complex,
    trim,
    zero_complex,
)
from purcat.homotopy import BY_BOUNDED_INJECTIVE, BY_BOUNDED_PROJECTIVE
from purcat.purity import default_battery, is_pure_qis
from purcat.randgen import random_chain_map, random_complex
from purcat.resolutions import (
    DepthInsufficient,
    UnsupportedRing,
    check_colimit_sum_formula,
    check_direct_level_cone_identity,
    check_inverse_level_cone_identity,
    check_limit_product_formula,
    colimit_tower,
    identity_resolution,
    injective_step_conditions,
    injective_tower,
    lift_injective,
    lift_projective,
    limit_tower,
    pad_resolution,
    projective_step_conditions,
    projective_tower,
    required_depth,
    resolve,
    resolve_injective_bounded_below,
    resolve_projective_bounded_above,
    validate_certificate,
    validate_direct_tower,
    validate_inverse_tower,
)


def x2_complex(ring, order=4):
    a = cyclic_module(ring, order)
    return make_complex(ring, 0, [a, a], [[[2]]])


def z_projective_example():
    zc = free_module(ZZ, 1)
    return make_complex(ZZ, 0, [zc, zc, cyclic_module(ZZ, 2)], [[[2]], [[1]]])


# ---------------------------------------------------------------------------
# bounded builders


def test_single_pure_injective_module_is_fixed_point():
    m = module_complex(cyclic_module(Zmod(4), 2), 0)
    cert = resolve_injective_bounded_below(m)
    assert validate_certificate(cert)
    assert cert.target == m
    assert cert.map.component(0).equals(identity_map(m.module(0)))


def test_resolve_x2_over_z4():
    m = x2_complex(Zmod(4))
    cert = resolve(m, "injective")
    assert validate_certificate(cert)
    assert homology_invariants(cert.target)[0] == (2,)
    assert homology_invariants(cert.target)[1] == (2,)
    assert all(cert.termwise_flags)
    assert is_pure_qis(cert.map).is_pure()


def test_zero_complex_resolves_to_zero_both_sides():
    for ring in (ZZ, Zmod(6)):
        z = zero_complex(ring)
        for side in ("injective", "projective"):
            cert = resolve(z, side)
            assert validate_certificate(cert)
            assert cert.target.is_zero_complex()


def test_projective_resolution_over_z():
    m = z_projective_example()
    cert = resolve_projective_bounded_above(m)
    assert validate_certificate(cert)
    assert all(inv == () for inv in homology_invariants(cert.target).values())
    assert is_pure_qis(cert.map).is_pure()


def test_injective_scope_refuses_free_parts_over_z():
    m = z_projective_example()
    with pytest.raises(UnsupportedRing):
        resolve_injective_bounded_below(m)
    with pytest.raises(UnsupportedRing):
        resolve(m, "injective")


def test_injective_over_z_torsion_terms():
    a = cyclic_module(ZZ, 4)
    b = cyclic_module(ZZ, 8)
    m = make_complex(ZZ, 0, [a, b], [[[2]]])
    cert = resolve(m, "injective")
    assert validate_certificate(cert)
    assert is_pure_qis(cert.map).is_pure()


def test_resolutions_preserve_homology_z12():
    rng = random.Random(11)
    ring = Zmod(12)
    for _ in range(4):
        m = random_complex(rng, ring, -1, 3)
        for side in ("injective", "projective"):
            cert = resolve(m, side)
            assert validate_certificate(cert)
            hm = homology_invariants(m)
            ht = homology_invariants(cert.target)
            for i, inv in hm.items():
                assert ht.get(i, ()) == inv


def test_certified_maps_are_pure_qis_z8():
    rng = random.Random(23)
    ring = Zmod(8)
    for _ in range(3):
        m = random_complex(rng, ring, 0, 2)
        for side in ("injective", "projective"):
            cert = resolve(m, side)
            assert is_pure_qis(cert.map).is_pure()


# ---------------------------------------------------------------------------
# towers


def test_injective_tower_z8_window_crossing_zero():
    rng = random.Random(7)
    ring = Zmod(8)
    m = random_complex(rng, ring, -2, 3)
    need = required_depth(m, "injective")
    assert need == 2
    tower, fs = injective_tower(m, need)
    for n in range(1, need + 1):
        assert check_inverse_level_cone_identity(tower, fs, n)
    assert check_limit_product_formula(tower)
    assert validate_inverse_tower(tower, fs)
    for cert in tower.kernel_certificates:
        assert cert.route == BY_BOUNDED_INJECTIVE
    cert = limit_tower(tower, fs)
    assert validate_certificate(cert)


def test_projective_tower_over_z():
    m = z_projective_example()
    need = required_depth(m, "projective")
    assert need == 2
    tower, fs = projective_tower(m, need)
    for n in range(1, need + 1):
        assert check_direct_level_cone_identity(tower, fs, n)
    assert check_colimit_sum_formula(tower)
    assert validate_direct_tower(tower, fs)
    for cert in tower.cokernel_certificates:
        assert cert.route == BY_BOUNDED_PROJECTIVE
    cert = colimit_tower(tower, fs)
    assert validate_certificate(cert)


def test_tower_depth_gate_reports_requirement():
    rng = random.Random(19)
    m = random_complex(rng, Zmod(8), -2, 3)
    tower, fs = injective_tower(m, 1)
    with pytest.raises(DepthInsufficient) as info:
        limit_tower(tower, fs)
    assert info.value.required == 2
    with pytest.raises(DepthInsufficient):
        resolve(m, "injective", depth=1)


def test_tower_stabilizes_beyond_required_depth():
    rng = random.Random(31)
    m = random_complex(rng, Zmod(8), -1, 2)
    tower, fs = injective_tower(m, 3)
    assert validate_inverse_tower(tower, fs)
    assert complexes_equal(tower.levels[-1], tower.levels[-2])
    assert tower.kernels[-1].is_zero_complex()
    cert = limit_tower(tower, fs)
    assert validate_certificate(cert)


def test_resolve_accepts_extra_depth_on_bounded_input():
    m = x2_complex(Zmod(4))
    cert = resolve(m, "injective", depth=2)
    assert validate_certificate(cert)
    certp = resolve(m, "projective", depth=3)
    assert validate_certificate(certp)


def test_required_depth_windows():
    rng = random.Random(43)
    m = random_complex(rng, Zmod(4), -3, 5)
    assert required_depth(m, "injective") >= 0
    flat = x2_complex(Zmod(4))
    assert required_depth(flat, "injective") == 0
    assert required_depth(flat, "projective") == 1


# ---------------------------------------------------------------------------
# lifts


def test_lift_injective_strict_square():
    rng = random.Random(5)
    ring = Zmod(4)
    for _ in range(3):
        m1 = trim(random_complex(rng, ring, 0, 2))
        m2 = trim(random_complex(rng, ring, 0, 2))
        f = random_chain_map(rng, m2, m1)
        r1 = resolve(m1, "injective")
        r2, g, square = lift_injective(f, r1)
        assert validate_certificate(r2)
        assert g.is_chain_map()
        assert (g @ r2.map).equals(r1.map @ f)
        assert square.boundary().is_zero()


def test_lift_projective_strict_square():
    rng = random.Random(6)
    ring = Zmod(8)
    for _ in range(3):
        m1 = trim(random_complex(rng, ring, 0, 2))
        m2 = trim(random_complex(rng, ring, 0, 2))
        f = random_chain_map(rng, m2, m1)
        r2 = resolve(m2, "projective")
        r1, g, square = lift_projective(f, r2)
        assert validate_certificate(r1)
        assert g.is_chain_map()
        assert (r1.map @ g).equals(f @ r2.map)
        assert square.boundary().is_zero()


def test_lift_rejects_mismatched_certificate():
    ring = Zmod(4)
    m1 = x2_complex(ring)
    m2 = module_complex(cyclic_module(ring, 2), 0)
    f = make_chain_map(m2, m1, 0, [[[2]]])
    wrong = resolve(m1, "projective")
    with pytest.raises(InputError):
        lift_injective(f, wrong)
    with pytest.raises(InputError):
        lift_projective(f, resolve(m2, "injective"))


# ---------------------------------------------------------------------------
# padding


def test_pad_resolution_validates_and_varies():
    m = x2_complex(Zmod(4))
    base = resolve(m, "injective")
    one = pad_resolution(base, seed=1)
    two = pad_resolution(base, seed=2)
    again = pad_resolution(base, seed=1)
    assert validate_certificate(one)
    assert validate_certificate(two)
    assert one.target.modules == again.target.modules
    assert one.target.modules != base.target.modules


def test_pad_resolution_projective_side():
    m = z_projective_example()
    base = resolve(m, "projective")
    padded = pad_resolution(base, seed=9)
    assert validate_certificate(padded)
    assert all(inv == () for inv in homology_invariants(padded.target).values())


# ---------------------------------------------------------------------------
# per-step conditions


def test_injective_step_conditions_hold_on_traced_runs():
    rng = random.Random(13)
    ring = Zmod(8)
    for _ in range(3):
        m = random_complex(rng, ring, 0, 3)
        cert = resolve_injective_bounded_below(m)
        battery = default_battery(ring, m, cert.target)
        report = injective_step_conditions(cert, battery)
        for per_probe in report.values():
            for coker_mono, homology_iso in per_probe.values():
                assert coker_mono
                assert homology_iso


def test_projective_step_conditions_hold_on_traced_runs():
    rng = random.Random(17)
    for ring in (ZZ, Zmod(8)):
        m = random_complex(rng, ring, -2, 3)
        cert = resolve_projective_bounded_above(m)
        battery = default_battery(ring, m, cert.target)
        report = projective_step_conditions(cert, battery)
        for per_probe in report.values():
            for ker_epi, homology_iso in per_probe.values():
                assert ker_epi
                assert homology_iso


# ---------------------------------------------------------------------------
# identity certificates


def test_identity_resolution_validates_both_sides():
    rng = random.Random(21)
    ring = Zmod(8)
    m = random_complex(rng, ring, -1, 3)
    for side in ("injective", "projective"):
        cert = identity_resolution(m, side)
        assert cert.source == m and cert.target == m
        assert validate_certificate(cert)


def test_identity_resolution_over_z():
    torsion = make_complex(ZZ, 0, [cyclic_module(ZZ, 4), cyclic_module(ZZ, 8)],
                           [[[2]]])
    assert validate_certificate(identity_resolution(torsion, "injective"))
    assert validate_certificate(identity_resolution(z_projective_example(),
                                                    "projective"))


def test_identity_resolution_guards_the_class():
    free_part = module_complex(free_module(ZZ, 1), 0)
    with pytest.raises(WorkbenchError):
        identity_resolution(free_part, "injective")
    with pytest.raises(InputError):
        identity_resolution(free_part, "sideways")


def test_identity_resolution_of_zero_complex():
    cert = identity_resolution(zero_complex(Zmod(12)), "projective")
    assert validate_certificate(cert)
