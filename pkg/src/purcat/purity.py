"""Exact purity decisions with re-checkable witnesses.

Over the supported rings a finitely presented pure submodule splits and
a pure acyclic complex of finitely presented modules contracts, so
purity verdicts come from solvable linear systems.  Tensor probes stay
on as an independent necessary-condition oracle: every NotPure verdict
prefers a failing probe that plain homology can re-check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from purcat.exact_linalg import InputError, Ring, WorkbenchError
from purcat.fpmod import (
    FpModule,
    ModuleMap,
    cyclic_module,
    free_module,
    has_retraction,
    identity_map,
    is_injective,
    kernel,
    tensor_map,
)
from purcat.complexes import (
    ChainMap,
    Complex,
    cone,
    homology,
    identity_chain_map,
    tensor_module_complex,
)
from purcat.homotopy import null_homotopy

PURE = "Pure"
NOT_PURE = "NotPure"


class NotAcyclicAt(WorkbenchError):
    """The complex has homology at the inspected degree."""

    def __init__(self, degree: int):
        super().__init__(f"complex is not acyclic at degree {degree}")
        self.degree = degree


@dataclass(frozen=True)
class ProbeBattery:
    """Finitely presented test modules for tensor probing."""

    ring: Ring
    probes: tuple

    def __post_init__(self):
        if not self.probes:
            raise InputError("a probe battery must not be empty")
        if not any(
            p.relations.cols == 0 and p.generators == 1 for p in self.probes
        ):
            raise InputError("a probe battery must contain the free rank 1 module")


@dataclass(frozen=True)
class PurityVerdict:
    """Pure or NotPure, with evidence either way.

    Pure carries a split witness (retraction or contracting homotopy).
    NotPure carries a failing probe when the battery finds one, plus the
    induced data that fails; otherwise only the unsolvability note.
    """

    verdict: str
    witness: object = None
    probe: Optional[FpModule] = None
    detail: str = ""

    def is_pure(self) -> bool:
        return self.verdict == PURE


def probe_battery(ring: Ring, bound: int = 1) -> ProbeBattery:
    """The standard battery: free rank 1 plus small cyclic torsion.

    Over Z/m the divisors of m are complete for purity detection, so the
    bound only matters over Z.
    """
    if bound < 1:
        raise InputError("battery bound must be at least 1")
    probes = [free_module(ring, 1)]
    if ring.modulus is None:
        for d in range(2, bound + 1):
            probes.append(cyclic_module(ring, d))
    else:
        m = ring.modulus
        for d in range(2, m):
            if m % d == 0:
                probes.append(cyclic_module(ring, d))
    return ProbeBattery(ring, tuple(probes))


def _entry_bound(*objects) -> int:
    best = 1
    for obj in objects:
        if obj is None:
            continue
        if isinstance(obj, FpModule):
            best = max(best, obj.relations.max_abs())
            for a in obj.invariant_factors:
                best = max(best, abs(a))
        elif isinstance(obj, ModuleMap):
            best = max(best, obj.matrix.max_abs())
            best = max(best, _entry_bound(obj.src, obj.tgt))
        elif isinstance(obj, Complex):
            for m in obj.modules:
                best = max(best, _entry_bound(m))
            for d in obj.diffs:
                best = max(best, d.matrix.max_abs())
        elif isinstance(obj, ChainMap):
            best = max(best, _entry_bound(obj.src, obj.tgt))
            for c in obj.components:
                best = max(best, c.matrix.max_abs())
    return best


def default_battery(ring: Ring, *objects) -> ProbeBattery:
    """Battery sized from the input: twice its largest entry or divisor."""
    return probe_battery(ring, 2 * _entry_bound(*objects))


# ---------------------------------------------------------------------------
# probe evaluation


def failing_probe_for_mono(f: ModuleMap, battery: ProbeBattery):
    """(probe, induced map with nonzero kernel) or None."""
    for probe in battery.probes:
        induced = tensor_map(identity_map(probe), f)
        if not is_injective(induced):
            return probe, induced
    return None


def failing_probe_for_acyclic(cx: Complex, battery: ProbeBattery):
    """(probe, degree where probe (x) cx has homology) or None."""
    for probe in battery.probes:
        tensored = tensor_module_complex(cx, probe)
        for i in range(tensored.lo, tensored.hi + 1):
            if not homology(tensored, i).is_zero():
                return probe, i
    return None


# ---------------------------------------------------------------------------
# decisions


def is_pure_mono(f: ModuleMap, battery: Optional[ProbeBattery] = None) -> PurityVerdict:
    """Decide purity of a monomorphism; the split criterion is exact here."""
    retraction = has_retraction(f)
    if retraction is not None:
        return PurityVerdict(PURE, witness=retraction)
    if battery is None:
        battery = default_battery(f.src.ring, f)
    hit = failing_probe_for_mono(f, battery)
    if hit is not None:
        probe, induced = hit
        return PurityVerdict(
            NOT_PURE, witness=induced, probe=probe,
            detail="tensoring with the probe is not injective",
        )
    return PurityVerdict(
        NOT_PURE,
        detail="no retraction exists; no battery probe exhibits the failure",
    )


def is_pure_acyclic(cx: Complex, battery: Optional[ProbeBattery] = None) -> PurityVerdict:
    """Decide pure acyclicity via one contraction system over all degrees."""
    contraction = null_homotopy(identity_chain_map(cx))
    if contraction is not None:
        return PurityVerdict(PURE, witness=contraction)
    if battery is None:
        battery = default_battery(cx.ring, cx)
    hit = failing_probe_for_acyclic(cx, battery)
    if hit is not None:
        probe, degree = hit
        return PurityVerdict(
            NOT_PURE, witness=degree, probe=probe,
            detail=f"probe tensor has homology in degree {degree}",
        )
    return PurityVerdict(
        NOT_PURE,
        detail="no contraction exists; no battery probe exhibits the failure",
    )


def is_pure_acyclic_at(cx: Complex, n: int,
                       battery: Optional[ProbeBattery] = None) -> PurityVerdict:
    """Decide purity of the cycle inclusion at one exact degree."""
    if not homology(cx, n).is_zero():
        raise NotAcyclicAt(n)
    _, incl = kernel(cx.differential(n))
    return is_pure_mono(incl, battery)


def is_pure_qis(f: ChainMap, battery: Optional[ProbeBattery] = None) -> PurityVerdict:
    """Decide whether the cone of f is pure acyclic."""
    return is_pure_acyclic(cone(f).complex, battery)
