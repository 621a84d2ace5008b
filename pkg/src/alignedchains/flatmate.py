"""Flatmate complexes on products of two trees, and norm-constant probes.

A product of two trees carries tuples of product vertices; a tuple is
"flatmate" when each coordinate projection is aligned in its factor, i.e.
the tuple fits inside a product of two geodesic segments.  The flatmate
subcomplex supports the same exactness checks as the aligned complex, and
an LP probe estimates, instance by instance, the best constant for
filling unit cycles by one-degree-up chains.  The probe emits data only;
it never decides whether those constants stay bounded as instances grow.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from itertools import combinations

from .chains import AltChain
from .exactness import DegreeExactness, verify_exactness
from .limits import DEFAULT_DIM_CAP, DEFAULT_LP_BASIS_CAP
from .lp import BoundaryProblem, PreimageResult, min_l1_preimage
from .trees import Tree, aligned_tuples, convex_hull, geodesic, is_aligned, path_tree


@dataclass(frozen=True)
class ProductComplex:
    """Product of two trees; vertices are encoded pairs.

    The product vertex (a, b) gets id a * factor2.vertex_count + b, so a
    trivial second factor reproduces the first factor's ids verbatim.
    """

    factor1: Tree
    factor2: Tree

    @property
    def vertex_count(self) -> int:
        return self.factor1.vertex_count * self.factor2.vertex_count

    def vertices(self) -> range:
        return range(self.vertex_count)

    def encode(self, a: int, b: int) -> int:
        n2 = self.factor2.vertex_count
        if not (0 <= a < self.factor1.vertex_count and 0 <= b < n2):
            raise ValueError(f"({a}, {b}) is not a product vertex")
        return a * n2 + b

    def decode(self, vid: int) -> tuple[int, int]:
        if not 0 <= vid < self.vertex_count:
            raise ValueError(f"{vid} is not a product vertex id")
        return divmod(vid, self.factor2.vertex_count)


def is_flatmate(p: ProductComplex, tup: Sequence[int]) -> bool:
    """True when both coordinate projections of the tuple are aligned."""
    if len(set(tup)) <= 2:
        return True
    pairs = [p.decode(v) for v in tup]
    return is_aligned(p.factor1, [a for a, _ in pairs]) and is_aligned(
        p.factor2, [b for _, b in pairs]
    )


def flatmate_tuples(p: ProductComplex, size: int) -> list[tuple[int, ...]]:
    """All canonical flatmate tuples with `size` entries, sorted.

    Flatmate-ness is monotone under subtuples, so prefixes that already
    fail are pruned exactly.
    """
    if size < 1:
        raise ValueError("size must be positive")
    n = p.vertex_count
    out: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def extend(start: int) -> None:
        if len(chosen) == size:
            out.append(tuple(chosen))
            return
        for v in range(start, n):
            chosen.append(v)
            if len(chosen) <= 2 or is_flatmate(p, chosen):
                extend(v + 1)
            chosen.pop()

    extend(0)
    return out


def flatmate_exactness(
    p: ProductComplex, n_max: int, *, dim_cap: int = DEFAULT_DIM_CAP
) -> list[DegreeExactness]:
    """Exactness of the flatmate subcomplex at degrees 0..n_max."""
    return verify_exactness(
        p.vertices(),
        n_max,
        basis_enumerator=lambda size: flatmate_tuples(p, size),
        dim_cap=dim_cap,
    )


def flatmate_boundary_problem(p: ProductComplex, degree: int) -> BoundaryProblem:
    """Boundary data rows=flatmate (degree+1)-tuples, columns one up."""
    return BoundaryProblem(
        degree,
        tuple(flatmate_tuples(p, degree + 1)),
        tuple(flatmate_tuples(p, degree + 2)),
    )


def aligned_boundary_problem(t: Tree, degree: int) -> BoundaryProblem:
    """Same boundary data over a single tree's aligned tuples."""
    return BoundaryProblem(
        degree,
        tuple(aligned_tuples(t, degree + 1)),
        tuple(aligned_tuples(t, degree + 2)),
    )


def hull_problem(p: ProductComplex, degree: int, chain: AltChain) -> BoundaryProblem:
    """Filling problem restricted to the hull product around one cycle.

    Take the subtree hulls H1, H2 of the cycle's two coordinate
    projections.  Componentwise nearest-point projection onto H1 x H2
    fixes the cycle, sends flatmate tuples to flatmate tuples (subtree
    projection carries geodesics onto geodesics), and so induces a chain
    map that commutes with the boundary and never increases the l1 norm.
    Applying it to any filling of the cycle yields one supported in
    H1 x H2 of no larger norm, hence the restricted minimum equals the
    minimum over the whole instance.  The restriction is what keeps the
    filling LPs window-sized instead of instance-sized.
    """
    if chain.degree != degree:
        raise ValueError("chain degree does not match the requested problem")
    coords = [p.decode(v) for key in chain.terms for v in key]
    if not coords:
        raise ValueError("hull of the zero chain is undefined")
    h1 = sorted(convex_hull(p.factor1, [a for a, _ in coords]).vertices)
    h2 = sorted(convex_hull(p.factor2, [b for _, b in coords]).vertices)
    window = sorted(p.encode(a, b) for a in h1 for b in h2)
    rows = tuple(
        tup for tup in combinations(window, degree + 1) if is_flatmate(p, tup)
    )
    cols = tuple(
        tup for tup in combinations(window, degree + 2) if is_flatmate(p, tup)
    )
    return BoundaryProblem(degree, rows, cols)


def sample_unit_cycles(
    problem: BoundaryProblem,
    count: int,
    rng: random.Random,
    *,
    terms: int = 3,
) -> list[tuple[AltChain, tuple[tuple[int, ...], ...]]]:
    """Random unit-l1 cycles paired with the columns that produced them.

    Each cycle is the boundary of a sparse random column chain, normalized
    to unit norm; the producing columns make a warm start for the filling
    LP.  Sampling boundaries gives exactly the cycle space whenever the
    complex is exact at the problem degree, which callers establish first.
    Zero boundaries are discarded and redrawn.
    """
    if not problem.columns:
        return []
    out: list[tuple[AltChain, tuple[tuple[int, ...], ...]]] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 50 * count + 50:
            raise RuntimeError("cycle sampling kept producing zero boundaries")
        width = min(terms, len(problem.columns))
        picked = rng.sample(problem.columns, width)
        coeffs = [rng.choice((-2, -1, 1, 2)) for _ in picked]
        z = AltChain.from_tuples(list(zip(picked, coeffs))).boundary()
        if z.is_zero():
            continue
        out.append((z * (1 / z.l1_norm()), tuple(sorted(picked))))
    return out


def _tree_diameter(t: Tree) -> int:
    far = max(t.vertices(), key=lambda v: t.distance(0, v))
    dist = t.distances_from(far)
    return max(dist[v] for v in t.vertices())


def _random_segment(t: Tree, size: int, rng: random.Random) -> list[int]:
    """A uniform-ish geodesic with `size` vertices; size must fit the tree."""
    for _ in range(200):
        u = rng.choice(range(t.vertex_count))
        du = t.distances_from(u)
        ends = [v for v in t.vertices() if du[v] == size - 1]
        if ends:
            return geodesic(t, u, rng.choice(ends))
    raise RuntimeError(f"no geodesic with {size} vertices found")


def sample_window_cycles(
    p: ProductComplex,
    degree: int,
    count: int,
    rng: random.Random,
    *,
    window_cap: int = 12,
    terms: int = 3,
) -> list[tuple[AltChain, tuple[tuple[int, ...], ...]]]:
    """Random unit cycles supported in small apartment windows.

    A window is a product of two short geodesic segments, so every tuple
    inside it is flatmate; each cycle is the normalized boundary of a few
    random window tuples one degree up, returned with those tuples as an
    LP warm start.  Window locality keeps the filling problems small while
    still sampling cycles at every position of the instance; it is a
    sampling choice, not a restriction of the complex being probed.
    """
    diam1 = _tree_diameter(p.factor1)
    diam2 = _tree_diameter(p.factor2)
    out: list[tuple[AltChain, tuple[tuple[int, ...], ...]]] = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 50 * count + 50:
            raise RuntimeError("cycle sampling kept producing zero boundaries")
        s1 = rng.randint(2, max(2, min(6, diam1 + 1, window_cap // 2)))
        s2_low = max(2, -(-(degree + 2) // s1))
        s2_high = max(s2_low, min(6, diam2 + 1, window_cap // s1))
        s2 = rng.randint(s2_low, s2_high)
        seg1 = _random_segment(p.factor1, s1, rng)
        seg2 = _random_segment(p.factor2, min(s2, diam2 + 1), rng)
        window = sorted(p.encode(a, b) for a in seg1 for b in seg2)
        if len(window) < degree + 2:
            continue
        width = min(terms, math.comb(len(window), degree + 2))
        picked: set[tuple[int, ...]] = set()
        while len(picked) < width:
            picked.add(tuple(sorted(rng.sample(window, degree + 2))))
        cols = sorted(picked)
        coeffs = [rng.choice((-2, -1, 1, 2)) for _ in cols]
        z = AltChain.from_tuples(list(zip(cols, coeffs))).boundary()
        if z.is_zero():
            continue
        out.append((z * (1 / z.l1_norm()), tuple(cols)))
    return out


@dataclass
class HomotopyNormReport:
    """Per-instance record of the worst minimal filling norm observed.

    `max_min_preimage_norm` is populated only when the flatmate complex is
    exact at `degree` on the instance; the per-degree exactness flags are
    always recorded.
    """

    factor_sizes: tuple[int, int]
    degree: int
    cycles_tested: int
    max_min_preimage_norm: Fraction | None
    exact_flags: tuple[bool, ...]
    seed: str

    @property
    def exact_at_degree(self) -> bool:
        return self.exact_flags[self.degree]

    def to_record(self) -> dict:
        norm = self.max_min_preimage_norm
        return {
            "factor1_size": self.factor_sizes[0],
            "factor2_size": self.factor_sizes[1],
            "degree": self.degree,
            "samples": self.cycles_tested,
            "max_min_norm_num": None if norm is None else norm.numerator,
            "max_min_norm_den": None if norm is None else norm.denominator,
            "exact_flags": "".join("1" if f else "0" for f in self.exact_flags),
        }


def homotopy_norm_probe(
    family: Iterable[ProductComplex],
    degree: int,
    samples: int,
    seed: int | str,
    *,
    dim_cap: int = DEFAULT_DIM_CAP,
    lp_basis_cap: int = DEFAULT_LP_BASIS_CAP,
) -> list[HomotopyNormReport]:
    """Probe each instance with random unit cycles and exact minimal fillings.

    Exactness at the probe degree is established per instance before any
    LP runs; an inexact instance is recorded with no norm instead of
    aborting the family.  Each cycle's LP is posed on the hull product
    around its support, where `hull_problem` shows the minimum agrees
    with the instance-wide one.  Instance randomness derives from
    (seed, index) only, so probes are reproducible and order-independent.
    """
    if degree < 1:
        raise ValueError("probe degree must be at least 1")
    reports: list[HomotopyNormReport] = []
    for index, p in enumerate(family):
        instance_seed = f"{seed}:{index}"
        exactness = flatmate_exactness(p, degree, dim_cap=dim_cap)
        flags = tuple(rec.exact for rec in exactness)
        sizes = (p.factor1.vertex_count, p.factor2.vertex_count)
        if not flags[degree]:
            reports.append(
                HomotopyNormReport(sizes, degree, 0, None, flags, instance_seed)
            )
            continue
        rng = random.Random(instance_seed)
        cycles = sample_window_cycles(p, degree, samples, rng)
        worst = Fraction(0)
        for z, witness in cycles:
            result = min_l1_preimage(
                hull_problem(p, degree, z),
                z,
                warm_columns=witness,
                lp_basis_cap=lp_basis_cap,
            )
            if not result.ok or not result.certified:
                raise AssertionError(
                    "a sampled boundary failed to fill; exactness check lied"
                )
            worst = max(worst, result.norm)
        reports.append(
            HomotopyNormReport(
                sizes, degree, len(cycles), worst, flags, instance_seed
            )
        )
    return reports


def flag_growth(
    reports: Sequence[HomotopyNormReport], ratio: Fraction | int
) -> list[int]:
    """Indices whose norm jumped by more than `ratio` over the previous one.

    Instances without a norm (inexact, or zero previous norm) never flag;
    the flags mark data for human inspection, they prove nothing.
    """
    flagged = []
    for i in range(1, len(reports)):
        prev = reports[i - 1].max_min_preimage_norm
        cur = reports[i].max_min_preimage_norm
        if prev is None or cur is None or prev == 0:
            continue
        if cur > ratio * prev:
            flagged.append(i)
    return flagged


def path_product_family(kmin: int, kmax: int) -> list[ProductComplex]:
    """path(k) x path(k) for k = kmin..kmax, k counted in vertices."""
    if kmin < 1 or kmax < kmin:
        raise ValueError("need 1 <= kmin <= kmax")
    return [
        ProductComplex(path_tree(k), path_tree(k)) for k in range(kmin, kmax + 1)
    ]
