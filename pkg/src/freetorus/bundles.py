"""Twisted suspensions and circle/torus bundle total spaces.

Two evaluation routes are implemented and cross-checked:

* the Betti recurrence for principal circle bundles over form (*) bases
  (b_2 drops by one, interior degrees add consecutively, spin decided by
  GF(2) span membership of w_2 in the Euler classes), iterated for torus
  bundles; and
* the suspension decomposition: split off one summand whose restriction is
  primitive, take its known bundle total space, and suspend the remaining
  summands one by one (with the twist dictated by the split-off summand's
  spin type).

Mixed bases containing complex projective spaces, sphere bundles over them,
or a projective bundle over S^2 are only evaluable along the second route
and only for the supported restriction patterns (the pullback of a
generator, the tautological class); anything else raises
UnsupportedConfiguration rather than guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import lattice
from .errors import (
    EngineDefect,
    InputError,
    NonPrimitiveEulerError,
    UnsupportedConfiguration,
)
from .manifolds import (
    BettiProfile,
    ComplexProjective,
    ConnectedSumExpr,
    CPSphereBundle,
    ProjectiveBundleOverS2,
    SphereProduct,
    StandardSphere,
    Summand,
    TwistedS2Bundle,
    _h2_bits,
    betti_profile,
    canonicalize,
    from_betti,
    h2_basis,
    summand_to_json,
)

EulerClassVec = tuple[int, ...]
EulerMatrix = tuple[EulerClassVec, ...]


@dataclass(frozen=True)
class FourManifoldSpec:
    """Closed simply-connected 4-manifold with torsion-free H^2 of rank b2.

    w2 is the second Stiefel-Whitney class in GF(2) coordinates; the zero
    vector means spin.
    """

    b2: int
    w2: tuple[int, ...]

    def __post_init__(self):
        if self.b2 < 0:
            raise InputError("b2 must be nonnegative")
        if len(self.w2) != self.b2:
            raise InputError("w2 must have length b2")
        if any(bit not in (0, 1) for bit in self.w2):
            raise InputError("w2 entries must be 0 or 1")

    @property
    def spin(self) -> bool:
        return not any(self.w2)


@dataclass(frozen=True)
class BundleResult:
    """Total space of an iterated circle-bundle tower with its stages."""

    total: BettiProfile
    stages: tuple[BettiProfile, ...]


# ---------------------------------------------------------------------------
# Closed-form Betti numbers over 4-manifolds


def _comb(k: int, j: int) -> int:
    return math.comb(k, j) if 0 <= j <= k else 0


def _aki_raw(k: int, i: int, r: int) -> int:
    return (i - 2) * _comb(k, i - 1) + r * _comb(k, i - 2) + (2 + k - i) * _comb(k, i - 3)


def a_ki(k: int, i: int, r: int) -> int:
    """Betti number b_i of a simply-connected T^k-bundle total space over a
    4-manifold with b_2 = r + k.

    Defined for k, r >= 0 and 2 <= i <= k + 2.
    """
    if k < 0 or r < 0:
        raise ValueError(f"a_ki needs k, r >= 0, got k={k}, r={r}")
    if not 2 <= i <= k + 2:
        raise ValueError(f"a_ki index i={i} out of range 2..{k + 2}")
    return _aki_raw(k, i, r)


# ---------------------------------------------------------------------------
# The Betti recurrence


def _bundle_step_betti(p: BettiProfile) -> tuple[int, ...]:
    """Betti numbers b_2..b_{N-2} of the circle-bundle total space (N = dim+1).

    b_2 and b_{N-2} drop to b_2(B)-1; interior degrees are consecutive sums
    of B's duality-completed Betti numbers.  The result satisfies Poincare
    duality and has vanishing Euler characteristic by construction.
    """
    n = p.dim
    if p.b(2) < 1:
        raise NonPrimitiveEulerError("no primitive Euler class exists over a base with b_2 = 0")
    out = []
    for i in range(2, n):
        if i == 2 or i == n - 1:
            out.append(p.b(2) - 1)
        else:
            out.append(p.b(i - 1) + p.b(i))
    return tuple(out)


def _step_profile(p: BettiProfile, spin: bool) -> BettiProfile:
    return BettiProfile(dim=p.dim + 1, betti=_bundle_step_betti(p), spin=spin)


def spin_by_divisibility(expr: ConnectedSumExpr, e: EulerClassVec) -> bool:
    """Theorem's divisibility-parity spin rule on a form (*) base.

    Spin iff there is no twisted summand, or every twisted summand's
    restriction has odd divisibility and every trivial S^2-product's
    restriction has even divisibility (0 counts as even).
    """
    if not expr.is_star:
        raise UnsupportedConfiguration("divisibility spin rule applies to form (*) bases only")
    basis = h2_basis(expr)
    if len(e) != len(basis):
        raise InputError("Euler vector length must match the number of degree-2 generators")
    if not any(isinstance(s, TwistedS2Bundle) for s in expr.summands):
        return True
    for idx, s in enumerate(expr.summands):
        lo, hi = basis.slices[idx]
        if lo == hi:
            continue
        d = abs(e[lo])
        if isinstance(s, TwistedS2Bundle) and d % 2 == 0:
            return False
        if isinstance(s, SphereProduct) and d % 2 == 1:
            return False
    return True


# ---------------------------------------------------------------------------
# Per-summand building blocks for the decomposition route


def _kb_bundle_total(s: Summand) -> tuple[Summand, ...] | None:
    """Total space of the circle bundle over s with its unit restriction.

    Returns the summand list of the total space (empty tuple = sphere), or
    None if the summand has no knowledge-base entry.
    """
    if isinstance(s, SphereProduct) and s.k == 2:
        return (SphereProduct(3, s.l),)
    if isinstance(s, TwistedS2Bundle):
        return (SphereProduct(3, s.n - 2),)
    if isinstance(s, ComplexProjective):
        return ()
    if isinstance(s, CPSphereBundle):
        a, b = sorted((2 * s.m + 1, s.r))
        return (SphereProduct(a, b),)
    if isinstance(s, ProjectiveBundleOverS2):
        return (TwistedS2Bundle(2 * s.r + 3),)
    return None


def _suspend_summand(s: Summand, d: int, twisted: bool) -> tuple[Summand, ...]:
    """Suspension of a single summand, twisted by a class of divisibility d.

    For knowledge-base summands d must be 1 (the supported restriction is a
    generator pullback / the tautological class); sphere products and the
    twisted S^2-bundle accept any d, with 0 the untwisted case.
    """
    n = s.dim
    d = abs(d)
    if isinstance(s, StandardSphere):
        return ()
    if isinstance(s, SphereProduct) and s.k >= 3:
        return (SphereProduct(s.k, s.l + 1), SphereProduct(min(s.k + 1, s.l), max(s.k + 1, s.l)))
    if isinstance(s, SphereProduct):  # S^2 x S^{n-2}
        if twisted or d % 2 == 0:
            first: Summand = SphereProduct(2, n - 1)
        else:
            first = TwistedS2Bundle(n + 1)
        return (first, SphereProduct(3, n - 2))
    if isinstance(s, TwistedS2Bundle):
        if not twisted and d % 2 == 1:
            first = SphereProduct(2, n - 1)
        else:
            first = TwistedS2Bundle(n + 1)
        return (first, SphereProduct(3, n - 2))
    if isinstance(s, ComplexProjective):
        if d != 1:
            raise UnsupportedConfiguration(
                "suspensions of CP^m are supported only for a generator class",
                diagnostics={"summand": summand_to_json(s), "divisibility": d},
            )
        untwisted_out = twisted == s.spin
        return (SphereProduct(2, 2 * s.m - 1),) if untwisted_out else (TwistedS2Bundle(2 * s.m + 1),)
    if isinstance(s, (CPSphereBundle, ProjectiveBundleOverS2)):
        if d != 1:
            raise UnsupportedConfiguration(
                "suspensions of bundle summands need the supported primitive class",
                diagnostics={"summand": summand_to_json(s), "divisibility": d},
            )
        total = _kb_bundle_total(s)
        extra: Summand = SphereProduct(2, n - 1) if twisted == s.spin else TwistedS2Bundle(n + 1)
        return total + (extra,)
    raise TypeError(f"unknown summand {s!r}")


def _restriction_scalars(expr: ConnectedSumExpr, e: EulerClassVec) -> list[int]:
    """Per-summand restriction divisibility; validates KB restriction shapes."""
    basis = h2_basis(expr)
    scalars = []
    for idx, s in enumerate(expr.summands):
        lo, hi = basis.slices[idx]
        coords = e[lo:hi]
        if isinstance(s, ProjectiveBundleOverS2):
            if not (abs(coords[0]) == 1 and coords[1] == 0):
                raise UnsupportedConfiguration(
                    "a projective bundle over S^2 supports only the tautological Euler class",
                    diagnostics={"summand": summand_to_json(s), "restriction": list(coords)},
                )
            scalars.append(1)
        elif isinstance(s, (ComplexProjective, CPSphereBundle)):
            if abs(coords[0]) != 1:
                raise UnsupportedConfiguration(
                    "restriction to a projective-space summand must be a generator",
                    diagnostics={"summand": summand_to_json(s), "restriction": list(coords)},
                )
            scalars.append(1)
        else:
            scalars.append(abs(coords[0]) if coords else 0)
    return scalars


def _check_euler_vec(expr: ConnectedSumExpr, e) -> EulerClassVec:
    e = lattice.as_vec(e)
    basis = h2_basis(expr)
    if len(e) != len(basis):
        raise InputError(
            f"Euler vector has length {len(e)}, base has {len(basis)} degree-2 generators"
        )
    if lattice.content(e) != 1:
        free, torsion = lattice.cokernel((e,))
        raise NonPrimitiveEulerError(
            "Euler class is not primitive; the total space is not simply-connected",
            diagnostics={"pi1_free_rank": free, "pi1_torsion": list(torsion)},
        )
    return e


def circle_bundle_by_decomposition(expr: ConnectedSumExpr, e) -> BettiProfile:
    """Evaluate a circle bundle by splitting off one summand and suspending.

    The split summand is the first one carrying a knowledge-base entry with
    unit restriction; on pure form (*) bases without a unit restriction the
    first S^2-type summand whose divisibility d1 satisfies d1 = +-1 mod d2
    (d2 the content of the remaining coordinates) is split off instead.
    """
    e = _check_euler_vec(expr, e)
    summands = expr.summands
    if any(isinstance(s, ProjectiveBundleOverS2) for s in summands) and len(summands) > 1:
        raise UnsupportedConfiguration(
            "a projective bundle over S^2 is supported only as a standalone base"
        )
    scalars = _restriction_scalars(expr, e)
    basis = h2_basis(expr)

    b1 = None
    h1_outputs: tuple[Summand, ...] | None = None
    for idx, s in enumerate(summands):
        if scalars[idx] == 1 and _kb_bundle_total(s) is not None:
            b1 = idx
            h1_outputs = _kb_bundle_total(s)
            break
    if b1 is None:
        # No unit restriction: split off an S^2-type summand under the
        # d1 = +-1 mod d2 side condition.
        for idx, s in enumerate(summands):
            if not (isinstance(s, TwistedS2Bundle) or (isinstance(s, SphereProduct) and s.k == 2)):
                continue
            lo, hi = basis.slices[idx]
            rest = e[:lo] + e[hi:]
            d2 = lattice.content(rest)
            d1 = scalars[idx]
            if d2 == 1 or (d1 - 1) % d2 == 0 or (d1 + 1) % d2 == 0:
                b1 = idx
                h1_outputs = (SphereProduct(3, expr.dim - 2),)
                break
        if b1 is None:
            raise UnsupportedConfiguration(
                "no summand with a primitive restriction satisfies the splitting condition",
                diagnostics={"restriction_divisibilities": scalars},
            )

    twist = summands[b1].spin
    outputs: list[Summand] = list(h1_outputs)
    for idx, s in enumerate(summands):
        if idx != b1:
            outputs.extend(_suspend_summand(s, scalars[idx], twist))
    profile = betti_profile(ConnectedSumExpr(dim=expr.dim + 1, summands=tuple(outputs)))

    gf2_spin = lattice.gf2_in_span(basis.w2, (e,))
    if gf2_spin != profile.spin:
        # Literal summand-wise bookkeeping would need a basis change here.
        raise UnsupportedConfiguration(
            "Euler coordinate pattern requires a basis change outside the supported normal forms",
            diagnostics={"restriction_divisibilities": scalars},
        )
    return profile


def circle_bundle(expr: ConnectedSumExpr, e) -> BettiProfile:
    """Total space of the principal circle bundle over expr with Euler class e.

    Pure form (*) bases go through the Betti recurrence with the GF(2) spin
    rule; mixed bases through the suspension decomposition.
    """
    e = _check_euler_vec(expr, e)
    if expr.is_star:
        spin = lattice.gf2_in_span(h2_basis(expr).w2, (e,))
        return _step_profile(betti_profile(expr), spin)
    return circle_bundle_by_decomposition(expr, e)


def _check_euler_matrix(E, cols: int) -> EulerMatrix:
    E = lattice.as_mat(E)
    if len(E) < 1:
        raise InputError("Euler matrix needs at least one row")
    if len(E[0]) != cols:
        raise InputError(f"Euler matrix has {len(E[0])} columns, base has {cols} generators")
    if len(E) > cols:
        raise InputError("more Euler rows than degree-2 generators")
    if not lattice.extends_to_basis(E):
        free, torsion = lattice.cokernel(E)
        raise NonPrimitiveEulerError(
            "Euler classes do not extend to a basis; the total space is not simply-connected",
            diagnostics={"pi1_free_rank": free, "pi1_torsion": list(torsion)},
        )
    return E


def torus_bundle(expr: ConnectedSumExpr, E) -> BundleResult:
    """Iterated circle bundles realizing the principal torus bundle over expr."""
    if not expr.is_star:
        raise InputError("torus bundles are evaluated over form (*) bases only")
    basis = h2_basis(expr)
    E = _check_euler_matrix(E, len(basis))
    stages: list[BettiProfile] = []
    current = betti_profile(expr)
    for m in range(1, len(E) + 1):
        spin = lattice.gf2_in_span(basis.w2, E[:m])
        current = _step_profile(current, spin)
        stages.append(current)
    return BundleResult(total=stages[-1], stages=tuple(stages))


def torus_bundle_over_4(base: FourManifoldSpec, E) -> BettiProfile:
    """Simply-connected T^k-bundle total space over a 4-manifold base."""
    E = _check_euler_matrix(E, base.b2)
    k = len(E)
    r = base.b2 - k
    betti = tuple(a_ki(k, i, r) for i in range(2, k + 3))
    spin = lattice.gf2_in_span(base.w2, E)
    return BettiProfile(dim=k + 4, betti=betti, spin=spin)


# ---------------------------------------------------------------------------
# Twisted suspensions


def suspend(base: Summand | ConnectedSumExpr, e, twisted: bool) -> ConnectedSumExpr:
    """The suspension of base twisted by e (plain for twisted=False).

    Supported bases: single catalog summands with their supported classes
    (any class on a sphere product or twisted S^2-bundle, a generator on
    CP^m and the bundle summands, zero on spheres), and connected sums with
    a primitive class whose bundle total space the engine can evaluate.
    """
    e = lattice.as_vec(e)
    if not isinstance(base, ConnectedSumExpr):
        return _suspend_single(base, e, twisted)
    if len(base.summands) == 0:
        if any(e):
            raise UnsupportedConfiguration("a sphere has no nonzero degree-2 classes")
        return ConnectedSumExpr(dim=base.dim + 1)
    if len(base.summands) == 1:
        return _suspend_single(base.summands[0], e, twisted)
    if lattice.content(e) != 1:
        raise UnsupportedConfiguration(
            "suspensions of connected sums are supported only for primitive classes",
            diagnostics={"content": lattice.content(e)},
        )
    bundle = circle_bundle(base, e)
    extra: Summand = (
        SphereProduct(2, base.dim - 1) if twisted == base.spin else TwistedS2Bundle(base.dim + 1)
    )
    realized = from_betti(bundle)
    return canonicalize(ConnectedSumExpr(dim=base.dim + 1, summands=realized.summands + (extra,)))


def _suspend_single(s: Summand, e: EulerClassVec, twisted: bool) -> ConnectedSumExpr:
    bits = len(_h2_bits(s))
    if len(e) != bits:
        raise InputError(f"Euler vector has length {len(e)}, summand has {bits} degree-2 generators")
    if isinstance(s, ProjectiveBundleOverS2):
        if not (abs(e[0]) == 1 and e[1] == 0):
            raise UnsupportedConfiguration(
                "a projective bundle over S^2 supports only the tautological class"
            )
        d = 1
    elif isinstance(s, (ComplexProjective, CPSphereBundle)):
        if abs(e[0]) != 1:
            raise UnsupportedConfiguration(
                "restriction to a projective-space summand must be a generator",
                diagnostics={"summand": summand_to_json(s), "restriction": list(e)},
            )
        d = 1
    else:
        d = abs(e[0]) if e else 0
    outputs = _suspend_summand(s, d, twisted)
    expr = ConnectedSumExpr(dim=s.dim + 1, summands=tuple(outputs))
    return canonicalize(expr) if expr.is_star else expr
