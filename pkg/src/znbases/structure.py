"""Structure analysis of sets with small doubling, and the end-to-end trace
of the large-order argument on concrete inputs.

Z_n has exactly one subgroup per divisor m of n (the multiples of n/m), so
the subgroup scan is a divisor scan.  The quotient by the size-m subgroup is
identified with Z_{n/m}, and the projection is reduction mod n/m.

Everything here measures; hypothesis failures are recorded as flags, never
raised.  The theorem constants (doubling threshold 2.04, density threshold
10^-9) are configuration values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import ZnSet, divisors, format_fraction
from .sumsets import add_sets, h_fold, order

DOUBLING_SIGMA = Fraction(204, 100)
DENSITY_THRESHOLD = Fraction(1, 10**9)

CASE_GENERIC = "generic"          # met cosets != 1 and != 3
CASE_THREE_COSETS = "three_cosets"
CASE_SINGLE_COSET = "single_coset"
BRANCH_UNAVAILABLE = "unavailable"


def project(a: ZnSet, q: int) -> ZnSet:
    """Image of A under the projection Z_n -> Z_q, q | n (reduction mod q)."""
    n = a.modulus
    if q < 1 or n % q != 0:
        raise ValueError(f"q must divide the modulus {n}, got {q}")
    if q == n:
        return a
    mask = 0
    for m in a:
        mask |= 1 << (m % q)
    return ZnSet(q, mask)


def coset_profile(a: ZnSet, m: int) -> tuple[int, Fraction]:
    """(number of cosets of the size-m subgroup met by A, max occupied fraction)."""
    n = a.modulus
    if m < 1 or n % m != 0:
        raise ValueError(f"m must divide the modulus {n}, got {m}")
    q = n // m
    counts: dict[int, int] = {}
    for x in a:
        r = x % q
        counts[r] = counts.get(r, 0) + 1
    if not counts:
        raise ValueError("coset profile of an empty set")
    return len(counts), Fraction(max(counts.values()), m)


def ap_cover(s: ZnSet, coprime_only: bool = False) -> tuple[int, int, int]:
    """Minimal arithmetic progression {start + i*d : 0 <= i < l} in Z_q covering S.

    Searches every difference d in [1, q-1] (restricted to gcd(d, q) = 1 when
    coprime_only); ties break by smallest l, then smallest d, then smallest
    start.  Returns (start, difference, length).
    """
    if not s:
        raise ValueError("AP cover of an empty set")
    q = s.modulus
    if q == 1:
        return (0, 1, 1)
    card = len(s)
    elems = s.members
    anchor = elems[0]
    best: tuple[int, int, int] | None = None  # (l, d, start)
    for d in range(1, q):
        if best is not None and best[0] <= card:
            break  # l = |S| cannot be beaten and a smaller d already achieved it
        g = math.gcd(d, q)
        if coprime_only and g != 1:
            continue
        if g > 1 and any((x - anchor) % g for x in elems):
            continue  # an AP with difference d stays in one class mod g
        cycle = q // g
        # Walk the stride-d cycle through anchor once; record member positions.
        positions = []
        cell = anchor
        for i in range(cycle):
            if cell in s:
                positions.append(i)
            cell = (cell + d) % q
        # Minimal covering arc leaves out the largest cyclic gap; the arc
        # starts at the position that ends that gap.
        max_gap = positions[0] + cycle - positions[-1]
        starts = [positions[0]]
        for i in range(1, len(positions)):
            gap = positions[i] - positions[i - 1]
            if gap > max_gap:
                max_gap = gap
                starts = [positions[i]]
            elif gap == max_gap:
                starts.append(positions[i])
        length = cycle - max_gap + 1
        start = min((anchor + p * d) % q for p in starts)
        cand = (length, d, start)
        if best is None or cand < best:
            best = cand
    if best is None:
        raise AssertionError("no covering progression found (d = 1 always covers)")
    length, d, start = best
    return (start, d, length)


@dataclass(frozen=True)
class StructureReport:
    """Coset statistics of A relative to the size-m subgroup H of Z_n.

    inequality_holds records (l - 1)*m <= |2A| - |A|, with l replaced by
    min(l, 4) when exactly three cosets are met.
    """

    m: int
    q: int
    cosets_met: int
    max_coset_fraction: Fraction
    ap_start: int
    ap_diff: int
    ap_len: int
    case: str
    inequality_holds: bool

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "q": self.q,
            "cosets_met": self.cosets_met,
            "max_coset_fraction": format_fraction(self.max_coset_fraction),
            "ap_start": self.ap_start,
            "ap_diff": self.ap_diff,
            "ap_len": self.ap_len,
            "case": self.case,
            "inequality_holds": self.inequality_holds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> StructureReport:
        d = dict(d)
        d["max_coset_fraction"] = Fraction(d["max_coset_fraction"])
        return cls(**d)


@dataclass(frozen=True)
class DfAnalysis:
    """Small-doubling structure scan of A over every proper subgroup of Z_n.

    The hypothesis flags record whether the doubling ratio is below sigma and
    the density below the configured threshold; the scan runs either way.
    best is the report with a true case-consistent inequality minimizing
    l*m (smallest m on ties), or None when no divisor qualifies.
    """

    input_set: ZnSet
    sigma: Fraction
    set_size: int
    double_size: int
    doubling_ratio: Fraction
    doubling_hypothesis_ok: bool
    density_hypothesis_ok: bool
    reports: tuple[StructureReport, ...]
    best: StructureReport | None

    def to_dict(self) -> dict:
        return {
            "modulus": self.input_set.modulus,
            "set": self.input_set.to_text(),
            "sigma": format_fraction(self.sigma),
            "set_size": self.set_size,
            "double_size": self.double_size,
            "doubling_ratio": format_fraction(self.doubling_ratio),
            "doubling_hypothesis_ok": self.doubling_hypothesis_ok,
            "density_hypothesis_ok": self.density_hypothesis_ok,
            "reports": [r.to_dict() for r in self.reports],
            "best": None if self.best is None else self.best.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> DfAnalysis:
        return cls(
            input_set=ZnSet.from_text(d["modulus"], d["set"]),
            sigma=Fraction(d["sigma"]),
            set_size=d["set_size"],
            double_size=d["double_size"],
            doubling_ratio=Fraction(d["doubling_ratio"]),
            doubling_hypothesis_ok=d["doubling_hypothesis_ok"],
            density_hypothesis_ok=d["density_hypothesis_ok"],
            reports=tuple(StructureReport.from_dict(r) for r in d["reports"]),
            best=None if d["best"] is None else StructureReport.from_dict(d["best"]),
        )


def _structure_report(a: ZnSet, m: int, excess: int, coprime_only: bool) -> StructureReport:
    n = a.modulus
    q = n // m
    s, frac = coset_profile(a, m)
    start, diff, length = ap_cover(project(a, q), coprime_only=coprime_only)
    if s == 1:
        case = CASE_SINGLE_COSET
    elif s == 3:
        case = CASE_THREE_COSETS
    else:
        case = CASE_GENERIC
    effective_l = min(length, 4) if case == CASE_THREE_COSETS else length
    return StructureReport(
        m=m,
        q=q,
        cosets_met=s,
        max_coset_fraction=frac,
        ap_start=start,
        ap_diff=diff,
        ap_len=length,
        case=case,
        inequality_holds=(effective_l - 1) * m <= excess,
    )


def df_analyze(
    a: ZnSet,
    sigma: Fraction = DOUBLING_SIGMA,
    density_threshold: Fraction = DENSITY_THRESHOLD,
    coprime_only: bool = False,
) -> DfAnalysis:
    """Structure scan of A over every proper-subgroup size m | n, m < n."""
    if not a:
        raise ValueError("structure analysis of an empty set")
    if sigma <= 1:
        raise ValueError(f"sigma must exceed 1, got {sigma}")
    n = a.modulus
    double = add_sets(a, a)
    size, dsize = len(a), len(double)
    excess = dsize - size
    reports = tuple(
        _structure_report(a, m, excess, coprime_only)
        for m in divisors(n)
        if m < n
    )
    best = None
    for r in reports:
        if not r.inequality_holds:
            continue
        if best is None or (r.ap_len * r.m, r.m) < (best.ap_len * best.m, best.m):
            best = r
    return DfAnalysis(
        input_set=a,
        sigma=sigma,
        set_size=size,
        double_size=dsize,
        doubling_ratio=Fraction(dsize, size),
        doubling_hypothesis_ok=dsize < sigma * size,
        density_hypothesis_ok=size < density_threshold * n,
        reports=reports,
        best=best,
    )


def doubling_search(a: ZnSet, sigma: Fraction = DOUBLING_SIGMA, j_max: int | None = None) -> int | None:
    """Smallest j in [0, j_max] with |2^(j+1) A| < sigma * |2^j A|, else None.

    Once the doublings stabilize the ratio is 1 < sigma, so for j_max of at
    least about log2(n) the search always succeeds; the default allows that.
    """
    if 0 not in a:
        raise ValueError("doubling search expects a 0-translated set")
    if j_max is None:
        j_max = a.modulus.bit_length() + 1
    if j_max < 0:
        raise ValueError(f"j_max must be >= 0, got {j_max}")
    cur = a
    cur_size = len(a)
    for j in range(j_max + 1):
        nxt = add_sets(cur, cur)
        nxt_size = len(nxt)
        if nxt_size < sigma * cur_size:
            return j
        cur, cur_size = nxt, nxt_size
    return None


@dataclass(frozen=True)
class ProjectionBounds:
    """Order of the projection vs order of the set, for one divisor q of n.

    The lower bound (projection order <= order) always holds; the upper
    candidate (projection order + n/q) is evaluated and reported, never
    asserted -- it depends on structural context and fails for general input.
    upper_holds is None when the set is not a basis.
    """

    n: int
    q: int
    lower: int | None
    actual: int | None
    upper_candidate: int | None
    upper_holds: bool | None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "q": self.q,
            "lower": self.lower,
            "actual": self.actual,
            "upper_candidate": self.upper_candidate,
            "upper_holds": self.upper_holds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ProjectionBounds:
        return cls(**d)


def projection_order_bounds(a: ZnSet, q: int) -> ProjectionBounds:
    n = a.modulus
    if q < 1 or n % q != 0:
        raise ValueError(f"q must divide the modulus {n}, got {q}")
    m = n // q
    lower = order(project(a, q))
    actual = order(a)
    if actual is None or lower is None:
        upper_candidate = None if lower is None else lower + m
        return ProjectionBounds(
            n=n, q=q, lower=lower, actual=actual,
            upper_candidate=upper_candidate, upper_holds=None,
        )
    return ProjectionBounds(
        n=n, q=q, lower=lower, actual=actual,
        upper_candidate=lower + m, upper_holds=actual <= lower + m,
    )


@dataclass(frozen=True)
class PipelineTrace:
    """Every intermediate quantity of the large-order structure argument, run
    end to end on a concrete basis: doubling search, structure scan of the
    doubled set, coset counts, branch selection, and the evaluated slack of
    each inequality along the way.  Nothing is asserted; everything is
    measured exactly.
    """

    input_set: ZnSet
    k: int
    sigma: Fraction
    rho: int | None
    exceeds_n_over_k: bool
    j: int | None
    h: int | None
    doubling_sizes: tuple[int, ...]
    b: ZnSet | None
    m: int | None
    q: int | None
    s: int | None
    s_prime: int | None
    ap_len: int | None
    branch: str
    rho_q_proj_a: int | None
    rho_q_proj_b: int | None
    # measured inequality data, None where not evaluable
    subgroup_bound_slack: Fraction | None      # (3/2)|B| - m, from the 2/3-coset relation
    two_thirds_holds: bool | None
    proj_lower_slack: int | None               # rho_n(A) - rho_q(pi(A)) >= 0
    proj_upper_slack: int | None               # rho_q(pi(A)) + m - rho_n(A), may be negative
    h_scaling_value: int | None                # |rho_n(A) - h * rho_q(pi(B))|
    multiple_gap: Fraction | None              # min over multiples q' of h of |rho_q(pi(B)) - n/q'|
    multiple_gap_argmin: int | None
    ap_gap: Fraction | None                    # |rho_q(pi(B)) - n/(l-1)|, needs l >= 2
    ap_reduction_ok: bool | None               # 2s - 3 >= l - 1

    def to_dict(self) -> dict:
        return {
            "modulus": self.input_set.modulus,
            "set": self.input_set.to_text(),
            "k": self.k,
            "sigma": format_fraction(self.sigma),
            "rho": self.rho,
            "exceeds_n_over_k": self.exceeds_n_over_k,
            "j": self.j,
            "h": self.h,
            "doubling_sizes": list(self.doubling_sizes),
            "b": None if self.b is None else self.b.to_text(),
            "m": self.m,
            "q": self.q,
            "s": self.s,
            "s_prime": self.s_prime,
            "ap_len": self.ap_len,
            "branch": self.branch,
            "rho_q_proj_a": self.rho_q_proj_a,
            "rho_q_proj_b": self.rho_q_proj_b,
            "subgroup_bound_slack": _opt_frac(self.subgroup_bound_slack),
            "two_thirds_holds": self.two_thirds_holds,
            "proj_lower_slack": self.proj_lower_slack,
            "proj_upper_slack": self.proj_upper_slack,
            "h_scaling_value": self.h_scaling_value,
            "multiple_gap": _opt_frac(self.multiple_gap),
            "multiple_gap_argmin": self.multiple_gap_argmin,
            "ap_gap": _opt_frac(self.ap_gap),
            "ap_reduction_ok": self.ap_reduction_ok,
        }

    @classmethod
    def from_dict(cls, d: dict) -> PipelineTrace:
        n = d["modulus"]
        return cls(
            input_set=ZnSet.from_text(n, d["set"]),
            k=d["k"],
            sigma=Fraction(d["sigma"]),
            rho=d["rho"],
            exceeds_n_over_k=d["exceeds_n_over_k"],
            j=d["j"],
            h=d["h"],
            doubling_sizes=tuple(d["doubling_sizes"]),
            b=None if d["b"] is None else ZnSet.from_text(n, d["b"]),
            m=d["m"],
            q=d["q"],
            s=d["s"],
            s_prime=d["s_prime"],
            ap_len=d["ap_len"],
            branch=d["branch"],
            rho_q_proj_a=d["rho_q_proj_a"],
            rho_q_proj_b=d["rho_q_proj_b"],
            subgroup_bound_slack=_opt_unfrac(d["subgroup_bound_slack"]),
            two_thirds_holds=d["two_thirds_holds"],
            proj_lower_slack=d["proj_lower_slack"],
            proj_upper_slack=d["proj_upper_slack"],
            h_scaling_value=d["h_scaling_value"],
            multiple_gap=_opt_unfrac(d["multiple_gap"]),
            multiple_gap_argmin=d["multiple_gap_argmin"],
            ap_gap=_opt_unfrac(d["ap_gap"]),
            ap_reduction_ok=d["ap_reduction_ok"],
        )


def _opt_frac(f: Fraction | None) -> str | None:
    return None if f is None else format_fraction(f)


def _opt_unfrac(s: str | None) -> Fraction | None:
    return None if s is None else Fraction(s)


def pipeline_trace(
    a: ZnSet,
    k: int,
    sigma: Fraction = DOUBLING_SIGMA,
    j_max: int | None = None,
    coprime_only: bool = False,
) -> PipelineTrace:
    """Run the whole structure argument on a concrete basis and record it.

    Steps: translate 0 into the set, search for the first doubling step with
    ratio below sigma, form B = 2^j A, scan B's coset structure to choose the
    subgroup, project, and evaluate every inequality of the argument as exact
    slack values.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if not a:
        raise ValueError("pipeline trace of an empty set")
    n = a.modulus
    base = a.rotate(-(a.mask & -a.mask).bit_length() + 1)
    rho = order(base)
    exceeds = rho is not None and rho * k > n

    if j_max is None:
        j_max = n.bit_length() + 1
    # Doubling sizes |2^j A| for j = 0.. until the ratio drops below sigma.
    sizes = [len(base)]
    j: int | None = None
    cur = base
    for jj in range(j_max + 1):
        nxt = add_sets(cur, cur)
        sizes.append(len(nxt))
        if len(nxt) < sigma * len(cur):
            j = jj
            break
        cur = nxt

    if j is None:
        return PipelineTrace(
            input_set=base, k=k, sigma=sigma, rho=rho, exceeds_n_over_k=exceeds,
            j=None, h=None, doubling_sizes=tuple(sizes), b=None, m=None, q=None,
            s=None, s_prime=None, ap_len=None, branch=BRANCH_UNAVAILABLE,
            rho_q_proj_a=None, rho_q_proj_b=None, subgroup_bound_slack=None,
            two_thirds_holds=None, proj_lower_slack=None, proj_upper_slack=None,
            h_scaling_value=None, multiple_gap=None, multiple_gap_argmin=None,
            ap_gap=None, ap_reduction_ok=None,
        )

    h = 1 << j
    b = h_fold(base, h)
    analysis = df_analyze(b, sigma=sigma, coprime_only=coprime_only)
    chosen = analysis.best
    if chosen is None and analysis.reports:
        chosen = min(analysis.reports, key=lambda r: (r.ap_len * r.m, r.m))
    if chosen is None:
        # n = 1 has no proper subgroup; emit the doubling data only.
        return PipelineTrace(
            input_set=base, k=k, sigma=sigma, rho=rho, exceeds_n_over_k=exceeds,
            j=j, h=h, doubling_sizes=tuple(sizes), b=b, m=None, q=None,
            s=None, s_prime=None, ap_len=None, branch=BRANCH_UNAVAILABLE,
            rho_q_proj_a=None, rho_q_proj_b=None, subgroup_bound_slack=None,
            two_thirds_holds=None, proj_lower_slack=None, proj_upper_slack=None,
            h_scaling_value=None, multiple_gap=None, multiple_gap_argmin=None,
            ap_gap=None, ap_reduction_ok=None,
        )

    m, q = chosen.m, chosen.q
    s = chosen.cosets_met
    s_prime = len(project(base, q))
    l = chosen.ap_len
    branch = CASE_THREE_COSETS if s == 3 else CASE_GENERIC

    rho_pa = order(project(base, q))
    rho_pb = order(project(b, q))

    subgroup_slack = Fraction(3, 2) * len(b) - m
    two_thirds = chosen.max_coset_fraction > Fraction(2, 3)

    proj_lower_slack = None if (rho is None or rho_pa is None) else rho - rho_pa
    proj_upper_slack = None if (rho is None or rho_pa is None) else rho_pa + m - rho
    h_scaling = None if (rho is None or rho_pb is None) else abs(rho - h * rho_pb)

    multiple_gap = None
    multiple_argmin = None
    if rho_pb is not None:
        for qp in range(h, n + 1, h):
            gap = abs(rho_pb - Fraction(n, qp))
            if multiple_gap is None or gap < multiple_gap:
                multiple_gap, multiple_argmin = gap, qp

    ap_gap = None
    if rho_pb is not None and l >= 2:
        ap_gap = abs(rho_pb - Fraction(n, l - 1))

    return PipelineTrace(
        input_set=base,
        k=k,
        sigma=sigma,
        rho=rho,
        exceeds_n_over_k=exceeds,
        j=j,
        h=h,
        doubling_sizes=tuple(sizes),
        b=b,
        m=m,
        q=q,
        s=s,
        s_prime=s_prime,
        ap_len=l,
        branch=branch,
        rho_q_proj_a=rho_pa,
        rho_q_proj_b=rho_pb,
        subgroup_bound_slack=subgroup_slack,
        two_thirds_holds=two_thirds,
        proj_lower_slack=proj_lower_slack,
        proj_upper_slack=proj_upper_slack,
        h_scaling_value=h_scaling,
        multiple_gap=multiple_gap,
        multiple_gap_argmin=multiple_argmin,
        ap_gap=ap_gap,
        ap_reduction_ok=2 * s - 3 >= l - 1,
    )
