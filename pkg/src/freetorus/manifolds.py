"""Connected-sum expressions, Betti profiles, and their normal forms.

A manifold is either a ConnectedSumExpr (an ordered list of catalog summands
of one dimension) or a BettiProfile (dimension, free Betti numbers, spin
flag).  For connected sums of sphere products and twisted S^2-bundles the
profile determines the diffeomorphism type, so the two representations
convert back and forth; the extended catalog summands (complex projective
spaces, sphere bundles over them, projective bundles over S^2) only appear
as bundle bases and never come out of a normal form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import InputError, UnsupportedConfiguration


# ---------------------------------------------------------------------------
# Summands


@dataclass(frozen=True)
class SphereProduct:
    """S^k x S^l with 2 <= k <= l."""

    k: int
    l: int

    def __post_init__(self):
        if not (2 <= self.k <= self.l):
            raise InputError(f"sphere product needs 2 <= k <= l, got ({self.k}, {self.l})")

    @property
    def dim(self) -> int:
        return self.k + self.l

    @property
    def spin(self) -> bool:
        return True


@dataclass(frozen=True)
class TwistedS2Bundle:
    """S^2 ~x S^{n-2}, the nontrivial linear S^{n-2}-bundle over S^2; non-spin."""

    n: int

    def __post_init__(self):
        if self.n < 5:
            raise InputError(f"twisted S^2-bundle needs dimension >= 5, got {self.n}")

    @property
    def dim(self) -> int:
        return self.n

    @property
    def spin(self) -> bool:
        return False


@dataclass(frozen=True)
class ComplexProjective:
    """CP^m; spin exactly when m is odd."""

    m: int

    def __post_init__(self):
        if self.m < 2:
            raise InputError(f"CP^m needs m >= 2, got {self.m}")

    @property
    def dim(self) -> int:
        return 2 * self.m

    @property
    def spin(self) -> bool:
        return self.m % 2 == 1


@dataclass(frozen=True)
class CPSphereBundle:
    """Linear S^r-bundle over CP^m with split Gysin sequence.

    twisted=False is the spin variant, twisted=True the non-spin one.  Both
    have the additive cohomology of CP^m x S^r, and the circle bundle given
    by the pullback of a generator of H^2(CP^m) has total space
    S^{2m+1} x S^r.
    """

    m: int
    r: int
    twisted: bool = False

    def __post_init__(self):
        if self.m < 1 or self.r < 2:
            raise InputError(f"CP-sphere bundle needs m >= 1, r >= 2, got ({self.m}, {self.r})")

    @property
    def dim(self) -> int:
        return 2 * self.m + self.r

    @property
    def spin(self) -> bool:
        return not self.twisted


@dataclass(frozen=True)
class ProjectiveBundleOverS2:
    """CP^r-bundle over S^2 with odd first Chern class; always non-spin.

    Carries two degree-2 generators (tautological class first, then the base
    class); the circle bundle of the tautological class has total space
    S^2 ~x S^{2r+1}.
    """

    r: int

    def __post_init__(self):
        if self.r < 2:
            raise InputError(f"projective bundle over S^2 needs fiber CP^r with r >= 2, got {self.r}")

    @property
    def dim(self) -> int:
        return 2 * self.r + 2

    @property
    def spin(self) -> bool:
        return False


@dataclass(frozen=True)
class StandardSphere:
    """S^n, the neutral element for connected sums."""

    n: int

    def __post_init__(self):
        if self.n < 5:
            raise InputError(f"standard sphere summand needs dimension >= 5, got {self.n}")

    @property
    def dim(self) -> int:
        return self.n

    @property
    def spin(self) -> bool:
        return True


Summand = Union[
    SphereProduct,
    TwistedS2Bundle,
    ComplexProjective,
    CPSphereBundle,
    ProjectiveBundleOverS2,
    StandardSphere,
]

_STAR_TYPES = (SphereProduct, TwistedS2Bundle, StandardSphere)


def is_star_summand(s: Summand) -> bool:
    return isinstance(s, _STAR_TYPES)


def _summand_betti(s: Summand, i: int) -> int:
    """Contribution of s to b_i of the connected sum, 0 < i < dim."""
    if i <= 0 or i >= s.dim:
        return 0
    if isinstance(s, SphereProduct):
        return (1 if i == s.k else 0) + (1 if i == s.l else 0)
    if isinstance(s, TwistedS2Bundle):
        return 1 if i in (2, s.n - 2) else 0
    if isinstance(s, ComplexProjective):
        return 1 if i % 2 == 0 else 0
    if isinstance(s, CPSphereBundle):
        # b_i(CP^m) + b_{i-r}(CP^m): the defining bundle has a trivial factor,
        # so the Gysin sequence splits.
        total = 0
        if i % 2 == 0 and 0 <= i <= 2 * s.m:
            total += 1
        j = i - s.r
        if j % 2 == 0 and 0 <= j <= 2 * s.m:
            total += 1
        return total
    if isinstance(s, ProjectiveBundleOverS2):
        # Leray-Hirsch: the Betti numbers of S^2 x CP^r.
        total = 0
        if i % 2 == 0 and 0 <= i <= 2 * s.r:
            total += 1
        if i % 2 == 0 and 2 <= i <= 2 * s.r + 2:
            total += 1
        return total
    if isinstance(s, StandardSphere):
        return 0
    raise TypeError(f"unknown summand {s!r}")


def _h2_bits(s: Summand) -> tuple[int, ...]:
    """w_2-coordinates of the degree-2 generators owned by s."""
    if isinstance(s, SphereProduct):
        return (0,) if s.k == 2 else ()
    if isinstance(s, TwistedS2Bundle):
        return (1,)
    if isinstance(s, ComplexProjective):
        return ((s.m + 1) % 2,)
    if isinstance(s, CPSphereBundle):
        # One generator (the pullback of the CP^m generator); the extra fiber
        # generator in the r = 2 case carries no w_2 and no supported Euler
        # coordinate, so it is never tracked.
        return (1,) if s.twisted else (0,)
    if isinstance(s, ProjectiveBundleOverS2):
        # (tautological, base); w_2 = (r+1) t + x mod 2.
        return ((s.r + 1) % 2, 1)
    if isinstance(s, StandardSphere):
        return ()
    raise TypeError(f"unknown summand {s!r}")


# ---------------------------------------------------------------------------
# Expressions


@dataclass(frozen=True)
class ConnectedSumExpr:
    """Connected sum of summands of one dimension; empty tuple means S^dim."""

    dim: int
    summands: tuple[Summand, ...] = ()

    def __post_init__(self):
        if self.dim < 5:
            raise InputError(f"connected-sum expressions need dimension >= 5, got {self.dim}")
        for s in self.summands:
            if s.dim != self.dim:
                raise InputError(
                    f"summand {summand_to_json(s)} has dimension {s.dim}, expected {self.dim}"
                )

    @property
    def is_star(self) -> bool:
        return all(is_star_summand(s) for s in self.summands)

    @property
    def spin(self) -> bool:
        return all(s.spin for s in self.summands)


@dataclass(frozen=True)
class H2Basis:
    """Ordered degree-2 generators of an expression.

    owners[g] is the index of the summand owning generator g; w2[g] its
    w_2-coordinate in GF(2).  slices[i] is the range of generator indices of
    summand i (empty for summands without degree-2 cohomology).
    """

    owners: tuple[int, ...]
    w2: tuple[int, ...]
    slices: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.owners)


def h2_basis(expr: ConnectedSumExpr) -> H2Basis:
    owners: list[int] = []
    w2: list[int] = []
    slices: list[tuple[int, int]] = []
    for idx, s in enumerate(expr.summands):
        bits = _h2_bits(s)
        start = len(owners)
        owners.extend([idx] * len(bits))
        w2.extend(bits)
        slices.append((start, len(owners)))
    return H2Basis(owners=tuple(owners), w2=tuple(w2), slices=tuple(slices))


# ---------------------------------------------------------------------------
# Profiles


@dataclass(frozen=True)
class BettiProfile:
    """Free Betti numbers b_2..b_{n-2} of a closed simply-connected n-manifold.

    b_0 = b_n = 1 and b_1 = b_{n-1} = 0 are implicit.  The stored tuple is
    the full closed range, which must satisfy Poincare duality.
    """

    dim: int
    betti: tuple[int, ...]
    spin: bool

    def __post_init__(self):
        n = self.dim
        if n < 4:
            raise InputError(f"profiles need dimension >= 4, got {n}")
        if len(self.betti) != max(0, n - 3):
            raise InputError(f"profile of dimension {n} needs b_2..b_{n-2} ({n - 3} values)")
        if any(b < 0 for b in self.betti):
            raise InputError("Betti numbers must be nonnegative")
        for i in range(2, n - 1):
            if self.betti[i - 2] != self.betti[n - i - 2]:
                raise InputError(f"Poincare duality fails: b_{i} != b_{n - i}")

    def b(self, i: int) -> int:
        if i in (0, self.dim):
            return 1
        if 2 <= i <= self.dim - 2:
            return self.betti[i - 2]
        return 0

    @property
    def euler_characteristic(self) -> int:
        return sum((-1) ** i * self.b(i) for i in range(self.dim + 1))

    def star_violation(self) -> str | None:
        """Why this profile is not realizable in form (*); None if it is."""
        n = self.dim
        if n < 5:
            return f"form (*) needs dimension >= 5, got {n}"
        if n % 2 == 0 and self.b(n // 2) % 2 != 0:
            return f"middle Betti number b_{n // 2} = {self.b(n // 2)} must be even"
        if not self.spin and self.b(2) == 0:
            return "a non-spin form (*) manifold needs b_2 >= 1"
        return None

    @property
    def is_star(self) -> bool:
        return self.star_violation() is None


def profile_from_partial(dim: int, partial: dict[int, int], spin: bool) -> BettiProfile:
    """Build a profile from b_i given on any subset of 2..dim-2.

    Missing degrees are filled by duality where the partner is given and by 0
    otherwise; contradictions with duality raise InputError (through the
    BettiProfile validator).
    """
    values = {}
    for i, b in partial.items():
        if not (2 <= i <= dim - 2):
            raise InputError(f"Betti degree {i} out of range 2..{dim - 2}")
        for j in (i, dim - i):
            if j in values and values[j] != b:
                raise InputError(f"duality conflict at degree {j}: {values[j]} vs {b}")
        values[i] = b
        values[dim - i] = b
    betti = tuple(values.get(i, 0) for i in range(2, dim - 1))
    return BettiProfile(dim=dim, betti=betti, spin=spin)


def betti_profile(expr: ConnectedSumExpr) -> BettiProfile:
    """Betti profile of a connected sum (middle-degree additivity)."""
    n = expr.dim
    betti = tuple(
        sum(_summand_betti(s, i) for s in expr.summands) for i in range(2, n - 1)
    )
    return BettiProfile(dim=n, betti=betti, spin=expr.spin)


def _require_star_profile(p: BettiProfile) -> None:
    reason = p.star_violation()
    if reason is not None:
        raise InputError(f"not a form (*) profile: {reason}")


def from_betti(p: BettiProfile) -> ConnectedSumExpr:
    """Canonical form (*) realization of a valid profile.

    Non-spin profiles get exactly one twisted S^2-bundle summand and b_2 - 1
    trivial ones; sphere products are sorted by first factor.
    """
    _require_star_profile(p)
    n = p.dim
    summands: list[Summand] = []
    b2 = p.b(2)
    if not p.spin:
        summands.append(TwistedS2Bundle(n))
        b2 -= 1
    summands.extend([SphereProduct(2, n - 2)] * b2)
    for k in range(3, n // 2 + 1):
        count = p.b(k)
        if 2 * k == n:
            count //= 2
        summands.extend([SphereProduct(k, n - k)] * count)
    return ConnectedSumExpr(dim=n, summands=tuple(summands))


def _sort_key(s: Summand):
    # Twisted bundles sort before trivial S^2-products (first factor ties).
    if isinstance(s, TwistedS2Bundle):
        return (2, 0, s.n - 2)
    if isinstance(s, SphereProduct):
        return (s.k, 1, s.l)
    raise UnsupportedConfiguration(
        f"canonical form is defined only for form (*) summands, got {summand_to_json(s)}"
    )


def canonicalize(expr: ConnectedSumExpr) -> ConnectedSumExpr:
    """Canonical representative of a form (*) expression.

    Drops sphere summands, rewrites every twisted S^2-bundle after the first
    into S^2 x S^{n-2}, and sorts; idempotent, preserves the Betti profile.
    """
    if not expr.is_star:
        raise UnsupportedConfiguration("canonicalization is defined only for form (*) expressions")
    n = expr.dim
    kept = [s for s in expr.summands if not isinstance(s, StandardSphere)]
    twisted = sum(1 for s in kept if isinstance(s, TwistedS2Bundle))
    if twisted > 1:
        rewritten: list[Summand] = []
        seen = False
        for s in kept:
            if isinstance(s, TwistedS2Bundle):
                rewritten.append(s if not seen else SphereProduct(2, n - 2))
                seen = True
            else:
                rewritten.append(s)
        kept = rewritten
    kept.sort(key=_sort_key)
    return ConnectedSumExpr(dim=n, summands=tuple(kept))


def is_diffeomorphic(a: ConnectedSumExpr, b: ConnectedSumExpr) -> bool:
    """Diffeomorphism test for form (*) expressions: dimension, Betti, spin."""
    if not (a.is_star and b.is_star):
        raise UnsupportedConfiguration("diffeomorphism test is defined only for form (*) expressions")
    return betti_profile(a) == betti_profile(b)


# ---------------------------------------------------------------------------
# JSON encoding (shared with the CLI)


def summand_to_json(s: Summand) -> dict:
    if isinstance(s, SphereProduct):
        return {"type": "sphere_product", "k": s.k, "l": s.l}
    if isinstance(s, TwistedS2Bundle):
        return {"type": "twisted_s2"}
    if isinstance(s, ComplexProjective):
        return {"type": "cp", "m": s.m}
    if isinstance(s, CPSphereBundle):
        return {"type": "cp_sphere_bundle", "m": s.m, "r": s.r, "twisted": s.twisted}
    if isinstance(s, ProjectiveBundleOverS2):
        return {"type": "proj_bundle_s2", "r": s.r}
    if isinstance(s, StandardSphere):
        return {"type": "sphere"}
    raise TypeError(f"unknown summand {s!r}")


def summand_from_json(obj: dict, dim: int) -> Summand:
    if not isinstance(obj, dict) or "type" not in obj:
        raise InputError(f"summand must be an object with a 'type' field, got {obj!r}")
    kind = obj["type"]
    try:
        if kind == "sphere_product":
            return SphereProduct(int(obj["k"]), int(obj["l"]))
        if kind == "twisted_s2":
            return TwistedS2Bundle(dim)
        if kind == "cp":
            return ComplexProjective(int(obj["m"]))
        if kind == "cp_sphere_bundle":
            return CPSphereBundle(int(obj["m"]), int(obj["r"]), bool(obj.get("twisted", False)))
        if kind == "proj_bundle_s2":
            return ProjectiveBundleOverS2(int(obj["r"]))
        if kind == "sphere":
            return StandardSphere(dim)
    except KeyError as exc:
        raise InputError(f"summand {kind!r} is missing field {exc}") from exc
    raise InputError(f"unknown summand type {kind!r}")


def expr_to_json(expr: ConnectedSumExpr) -> dict:
    return {"dim": expr.dim, "summands": [summand_to_json(s) for s in expr.summands]}


def expr_from_json(obj: dict) -> ConnectedSumExpr:
    if "dim" not in obj:
        raise InputError("expression needs a 'dim' field")
    dim = int(obj["dim"])
    summands = obj.get("summands", [])
    if not isinstance(summands, list):
        raise InputError("'summands' must be a list")
    return ConnectedSumExpr(dim=dim, summands=tuple(summand_from_json(s, dim) for s in summands))


def profile_to_json(p: BettiProfile) -> dict:
    return {
        "dim": p.dim,
        "betti": {str(i): p.b(i) for i in range(2, p.dim - 1)},
        "spin": p.spin,
    }


def profile_from_json(obj: dict) -> BettiProfile:
    if "dim" not in obj or "spin" not in obj:
        raise InputError("profile needs 'dim' and 'spin' fields")
    dim = int(obj["dim"])
    raw = obj.get("betti", {})
    if not isinstance(raw, dict):
        raise InputError("'betti' must be a map from degree to Betti number")
    partial = {}
    for key, value in raw.items():
        try:
            partial[int(key)] = int(value)
        except (TypeError, ValueError) as exc:
            raise InputError(f"bad Betti entry {key!r}: {value!r}") from exc
    return profile_from_partial(dim, partial, bool(obj["spin"]))


def manifold_from_json(obj: dict) -> ConnectedSumExpr | BettiProfile:
    """Parse either encoding; expressions win when both field sets appear."""
    if not isinstance(obj, dict):
        raise InputError("manifold payload must be a JSON object")
    if "summands" in obj:
        return expr_from_json(obj)
    if "betti" in obj or "spin" in obj:
        return profile_from_json(obj)
    raise InputError("manifold payload needs either 'summands' or 'betti'/'spin'")
