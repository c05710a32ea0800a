"""The Tate/slice filtration on homotopy of the sphere, in coordinates.

For integers n, p, q and a supported field F the filtration level is the
subgroup K^MW_{q-p}(F) * I(F)^N with N = max(0, min(n-p, n-q)); for n <= p it
is the whole group.  Subgroups are reported in the dichotomy used by the
convergence argument: inside Witt coordinates for negative degree, inside GW
coordinates as the ideal I^{N+m} for nonnegative degree, and as the full
degree-coordinate group when N = 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from mwslice.abelian import (
    Ambient,
    QuotientShape,
    SubgroupDescription,
    full_subgroup,
    zero_subgroup,
)
from mwslice.fields import FINITE, REAL, FieldDescriptor
from mwslice.forms import (
    fundamental_power_description,
    fundamental_power_in_witt,
)
from mwslice.milnor_witt import (
    eta_power_times,
    kmw_ambient,
    kmw_generating_forms,
)


def shift_index(a: int, b: int) -> int:
    """N(a, b) = max(0, min(a, b))."""
    return max(0, min(a, b))


@dataclass(frozen=True)
class FiltrationQuery:
    n: int
    p: int
    q: int
    field: FieldDescriptor

    @property
    def degree(self) -> int:
        return self.q - self.p

    @property
    def N(self) -> int:
        return shift_index(self.n - self.p, self.n - self.q)

    def to_json(self) -> dict:
        return {"n": self.n, "p": self.p, "q": self.q, "field": str(self.field)}


def kmw_times_In(m: int, n: int, field: FieldDescriptor) -> SubgroupDescription:
    """The subgroup K^MW_m(F) * I(F)^n in the convergence-argument dichotomy.

    n = 0 gives the full degree-m coordinate group; for n >= 1 the subgroup is
    I^n inside Witt coordinates when m < 0 and I^{n+m} inside GW coordinates
    when m >= 0.
    """
    if n < 0:
        raise ValueError("ideal powers are indexed by naturals")
    if n == 0:
        return full_subgroup(kmw_ambient(field, m))
    if m < 0:
        return fundamental_power_in_witt(field, n)
    return fundamental_power_description(field, n + m)


def tate_filtration(query: FiltrationQuery) -> SubgroupDescription:
    """F^n_Tate of pi_{p,p} of the q-fold twist, evaluated at the field.

    For n <= p the filtration level is the whole group (the stabilization
    regime); otherwise it is K^MW_{q-p} * I^N with N from shift_index.
    """
    if query.n <= query.p:
        return full_subgroup(kmw_ambient(query.field, query.degree))
    return kmw_times_In(query.degree, query.N, query.field)


def filtration_in_degree_coords(query: FiltrationQuery) -> SubgroupDescription:
    """The same subgroup, embedded in the degree-(q-p) coordinate group.

    Used wherever two filtration levels must be compared inside one ambient
    (graded pieces, eta-image consistency, transfer closures).
    """
    field, m = query.field, query.degree
    ambient = kmw_ambient(field, m)
    if query.n <= query.p:
        return full_subgroup(ambient)
    N = query.N
    if N == 0:
        return full_subgroup(ambient)
    if m < 0:
        return fundamental_power_in_witt(field, N)
    if m == 0:
        return fundamental_power_description(field, N)
    # positive degree: pull I^{N+m} back through the degree-m coordinates
    if field.kind == FINITE:
        return zero_subgroup(ambient)  # I^{N+m} = 0 once N + m >= 2
    if field.kind == REAL:
        return SubgroupDescription(ambient, ((1 << N,),))
    return zero_subgroup(ambient)


@dataclass(frozen=True)
class FiltrationReport:
    query: FiltrationQuery
    N: int
    subgroup: SubgroupDescription

    def to_json(self) -> dict:
        return {
            "query": self.query.to_json(),
            "N": self.N,
            "subgroup": self.subgroup.describe(),
        }


def filtration_report(query: FiltrationQuery) -> FiltrationReport:
    return FiltrationReport(query, query.N, tate_filtration(query))


def graded_piece(query: FiltrationQuery) -> QuotientShape:
    """F^n / F^{n+1} computed inside the degree coordinates."""
    top = filtration_in_degree_coords(query)
    nxt = filtration_in_degree_coords(
        FiltrationQuery(query.n + 1, query.p, query.q, query.field)
    )
    return top.quotient_shape(nxt)


def eta_image_subgroup(query: FiltrationQuery) -> SubgroupDescription:
    """Image of x eta^M : K^MW_{q-p+M} -> K^MW_{q-p}, M = N or p - q + N.

    This is the independent computation of the filtration subgroup used by the
    consistency tests: the main theorem's proof identifies the level with this
    eta-power image (for n > p).
    """
    field, m, N = query.field, query.degree, query.N
    M = N if m >= 0 else -m + N
    gens = []
    for nf in kmw_generating_forms(field, m + M):
        img = eta_power_times(nf, M)
        gens.append(img.coords() if img.degree is not None else ())
    ambient = kmw_ambient(field, m)
    return SubgroupDescription(ambient, tuple(g for g in gens if len(g) == ambient.dim))


# -- convergence -------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceReport:
    field: FieldDescriptor
    cutoff: int
    separated: bool
    certificate: str
    details: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "field": str(self.field),
            "cutoff": self.cutoff,
            "separated": self.separated,
            "certificate": self.certificate,
            "details": list(self.details),
        }


def convergence_check(field: FieldDescriptor, cutoff: int) -> ConvergenceReport:
    """Verify that the filtration of K^MW_{q-p} is separated up to the cutoff.

    Checks monotonicity of the chain on a small (p, q) grid and certifies the
    vanishing of the intersection structurally: I^2 = 0 over a finite field,
    the dyadic valuation bound on signatures over a real closed field, and
    I = 0 over a quadratically closed field.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    details = []
    ok = True
    for p in range(0, 3):
        for q in range(0, 3):
            chain = [
                filtration_in_degree_coords(FiltrationQuery(n, p, q, field))
                for n in range(0, cutoff + 1)
            ]
            for a, b in zip(chain, chain[1:]):
                if not b <= a:
                    ok = False
                    details.append(f"monotonicity fails at (p,q)=({p},{q})")
            tail = chain[-1]
            if field.kind == FINITE:
                if not tail.is_zero and cutoff >= max(p, q) + 2:
                    ok = False
                    details.append(f"tail not zero at (p,q)=({p},{q})")
            elif field.kind == REAL:
                # any fixed nonzero coordinate leaves the chain at a finite stage
                probe = [1, 2, 3, 4]
                for c in probe:
                    stays = all(level.contains(_embed(field, q - p, c)) for level in chain[1:])
                    if stays and cutoff > p + c.bit_length() + 2:
                        ok = False
                        details.append(f"element {c} never leaves the chain at ({p},{q})")
            else:
                if not tail.is_zero and cutoff >= max(p, q) + 2:
                    ok = False
                    details.append(f"tail not zero at (p,q)=({p},{q})")
    if field.kind == FINITE:
        sq = fundamental_power_description(field, 2)
        cert = "I^2 = 0"
        if not sq.is_zero:
            ok = False
            details.append("I^2 is not zero")
    elif field.kind == REAL:
        cert = "nonzero signatures have bounded dyadic valuation"
    else:
        cert = "I = 0"
        if not fundamental_power_description(field, 1).is_zero:
            ok = False
            details.append("I(C) is not zero")
    if ok:
        details.append("intersection of the chain is zero at the cutoff")
    return ConvergenceReport(field, cutoff, ok, cert, tuple(details))


def _embed(field: FieldDescriptor, m: int, c: int) -> tuple[int, ...]:
    """A nonzero degree-m coordinate vector scaled by c, for probing chains."""
    amb = kmw_ambient(field, m)
    if amb.dim == 0:
        return ()
    v = [0] * amb.dim
    v[-1] = c
    if m == 0 and field.kind == REAL:
        return (0, c)
    return tuple(v)


# -- the Moore-spectrum counterexample ---------------------------------------------


def gw_mod_ell_ambient(field: FieldDescriptor, ell: int) -> Ambient:
    """GW(F)/ell coordinates (the odd-torsion part; disc_dev dies for odd ell)."""
    if field.kind == FINITE:
        return Ambient(0, (ell,), ("rank",), f"GW({field})/{ell}")
    if field.kind == REAL:
        return Ambient(0, (ell, ell), ("rank", "index"), f"GW(R)/{ell}")
    return Ambient(0, (ell,), ("rank",), f"GW(C)/{ell}")


def moore_filtration(ell: int, field: FieldDescriptor, n: int) -> SubgroupDescription:
    """Image of I(F)^n in GW(F)/ell, the pi_{0,0} filtration of the mod-ell Moore spectrum.

    Over a real closed field the image is Z/ell for every n >= 1 (the
    filtration is constant, hence not separated); over a finite field the
    augmentation ideal is 2-primary torsion, so the image vanishes.
    """
    if ell == 2 or ell < 2 or any(ell % k == 0 for k in range(2, ell)):
        raise ValueError("ell must be an odd prime")
    if n < 0:
        raise ValueError("filtration levels are indexed by naturals")
    ambient = gw_mod_ell_ambient(field, ell)
    if n == 0:
        return full_subgroup(ambient)
    desc = fundamental_power_description(field, n)
    gens = []
    for g in desc.generators:
        if field.kind == FINITE:
            # disc_dev is killed: (0, 1) = ell * (0, 1) in GW since ell is odd
            gens.append((g[0] % ell,))
        elif field.kind == REAL:
            gens.append((g[0] % ell, g[1] % ell))
        else:
            gens.append((g[0] % ell,))
    return SubgroupDescription(ambient, tuple(gens))
