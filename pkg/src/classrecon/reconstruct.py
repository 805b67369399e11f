"""Blind reconstruction of arithmetic data from quotient invariants.

The only reconstruction input is an `InvariantBundle`: a rank, a set of
opaque labels, and for finite label sets F the isomorphism type of the
lattice quotient attached to F.  From that alone the pipeline recovers

  * the class number (the rank),
  * the norm behind every label (inverting the one-prime closed form),
  * which labels have odd norm,
  * subgroup orders of the classes behind odd-norm label sets, and
  * the isomorphism type of the class group, one prime at a time, by a
    greedy maximal-order chain.

Labels never carry arithmetic annotations here; `build_bundle` erases them.
The round-trip driver compares the reconstruction against ground truth.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from sympy import factorint

from .abgroup import FinGenAbGroup, integer_nth_root, iso_equal, p_part
from .fields import FieldSpec, class_group_model, enumerate_prime_ideals
from .lattice import ClassGroupModel, PrimeIdealDatum, lattice_quotient


class MalformedBundle(Exception):
    """The bundle's entries cannot come from consistent arithmetic data."""


class InsufficientGenerators(Exception):
    """The label set is too small to exhibit the whole class group."""


class BundleEntryMissing(Exception):
    """A required entry is absent and the bundle cannot compute it."""


@dataclass
class InvariantBundle:
    """Opaque quotient data: label sets to isomorphism types, plus a rank.

    Entries may be precomputed or supplied lazily through `compute`; lazy
    results are memoized.  The memo supports concurrent reads with a lock
    held only around inserts.
    """

    rank: int
    labels: tuple[str, ...]
    entries: dict[frozenset[str], FinGenAbGroup] = field(default_factory=dict)
    compute: Callable[[frozenset[str]], FinGenAbGroup] | None = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise MalformedBundle("rank must be at least 1")
        if len(set(self.labels)) != len(self.labels):
            raise MalformedBundle("duplicate labels")
        unknown = set().union(*self.entries) - set(self.labels) if self.entries else set()
        if unknown:
            raise MalformedBundle(f"entries mention unknown labels {sorted(unknown)}")

    def entry(self, labels: Iterable[str]) -> FinGenAbGroup:
        key = frozenset(labels)
        if not key <= set(self.labels):
            raise BundleEntryMissing(
                f"labels {sorted(key - set(self.labels))} are not in the bundle"
            )
        got = self.entries.get(key)
        if got is not None:
            return got
        if self.compute is None:
            raise BundleEntryMissing(
                f"no entry for {sorted(key)} and the bundle is not computable"
            )
        value = self.compute(key)
        with self._lock:
            self.entries.setdefault(key, value)
        return self.entries[key]


def build_bundle(
    cl: ClassGroupModel,
    primes: Sequence[PrimeIdealDatum],
    subsets: Sequence[Iterable[str]] = (),
    lazy: bool = True,
) -> InvariantBundle:
    """Evaluate brute-force quotients and erase all arithmetic annotations.

    The empty set and every singleton are always included.  With `lazy`,
    later requests for other subsets are served on demand (and memoized);
    the ground truth stays enclosed in the supplier and is never exposed.
    """
    labels = tuple(p.label for p in primes)
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate prime labels")
    by_label = {p.label: p for p in primes}

    def quotient_for(key: frozenset[str]) -> FinGenAbGroup:
        return lattice_quotient(cl, [by_label[l] for l in sorted(key)])[0]

    entries: dict[frozenset[str], FinGenAbGroup] = {}
    wanted: list[frozenset[str]] = [frozenset()]
    wanted += [frozenset({l}) for l in labels]
    for subset in subsets:
        key = frozenset(subset)
        if not key <= set(labels):
            raise ValueError(f"unknown labels in subset {sorted(key)}")
        wanted.append(key)
    for key in wanted:
        if key not in entries:
            entries[key] = quotient_for(key)
    return InvariantBundle(
        rank=cl.size,
        labels=labels,
        entries=entries,
        compute=quotient_for if lazy else None,
    )


def recover_class_number(bundle: InvariantBundle) -> int:
    """The class number is the free rank of the empty-set entry."""
    empty = bundle.entry(())
    if empty.factors != (0,) * bundle.rank:
        raise MalformedBundle(
            f"empty-set entry {empty.factors} is not free of rank {bundle.rank}"
        )
    return bundle.rank


def recover_norm(bundle: InvariantBundle, label: str) -> int:
    """Invert the one-prime closed form: read N off the singleton entry.

    A singleton entry is s copies of Z/t with s * ord = class number and
    t + 1 = N**ord; the exact ord-th root gives N.  A trivial entry forces
    N**ord = 2, hence N = 2.  Anything else is not arithmetic data.
    """
    h = recover_class_number(bundle)
    entry = bundle.entry((label,))
    if not entry.is_finite:
        raise MalformedBundle(f"singleton entry for {label} has free summands")
    if entry.is_trivial:
        return 2
    values = set(entry.factors)
    if len(values) != 1:
        raise MalformedBundle(
            f"singleton entry for {label} is not homogeneous: {entry.factors}"
        )
    t = entry.factors[0]
    s = len(entry.factors)
    if h % s:
        raise MalformedBundle(
            f"summand count {s} for {label} does not divide the class number {h}"
        )
    ord_p = h // s
    n = integer_nth_root(t + 1, ord_p)
    if n is None:
        raise MalformedBundle(
            f"torsion {t} + 1 for {label} is not a perfect {ord_p}-th power"
        )
    return n


def label_has_odd_norm(bundle: InvariantBundle, label: str) -> bool:
    return recover_norm(bundle, label) % 2 == 1


def subgroup_order_from_bundle(
    bundle: InvariantBundle, labels: Iterable[str]
) -> int:
    """Order of the subgroup generated by the classes behind odd-norm labels.

    The entry for F is homogeneous with one summand per coset, so the
    summand count is the subgroup index; dividing the class number gives
    the subgroup order.
    """
    key = tuple(labels)
    if not key:
        raise ValueError("subgroup order requires a non-empty label set")
    for label in key:
        if not label_has_odd_norm(bundle, label):
            raise ValueError(f"label {label} has even norm; not allowed in chains")
    h = recover_class_number(bundle)
    entry = bundle.entry(key)
    if not entry.is_finite or entry.is_trivial or len(set(entry.factors)) != 1:
        raise MalformedBundle(
            f"entry for {sorted(key)} is not homogeneous torsion: {entry.factors}"
        )
    s = len(entry.factors)
    if h % s:
        raise MalformedBundle(
            f"summand count {s} for {sorted(key)} does not divide {h}"
        )
    return h // s


TieBreak = Callable[[list[str]], str]


def _first(candidates: list[str]) -> str:
    return candidates[0]


def greedy_primary_factors(
    p: int,
    candidates: Sequence[str],
    subgroup_order: Callable[[tuple[str, ...]], int],
    tie_break: TieBreak = _first,
) -> list[int]:
    """Greedy chain recovering the p-primary invariant factors.

    At each step, pick the unused candidate maximizing the p-part of the
    index [<chain, c> : <chain>]; the maxima are the cyclic orders of the
    p-primary component, largest first.  Any maximizer may be chosen.
    `subgroup_order` maps a non-empty candidate tuple to the order of the
    subgroup its classes generate.
    """
    chain: list[str] = []
    chain_order = 1
    out: list[int] = []
    remaining = list(candidates)
    while remaining:
        best_val = 1
        best: list[str] = []
        for c in remaining:
            val = p_part(subgroup_order(tuple(chain) + (c,)) // chain_order, p)
            if val > best_val:
                best_val, best = val, [c]
            elif val == best_val and val > 1:
                best.append(c)
        if best_val == 1:
            break
        pick = tie_break(best)
        chain.append(pick)
        remaining.remove(pick)
        chain_order = subgroup_order(tuple(chain))
        out.append(best_val)
    return out


def reconstruct_class_group(
    bundle: InvariantBundle, tie_break: TieBreak = _first
) -> FinGenAbGroup:
    """Isomorphism type of the class group, from the bundle alone.

    Runs the greedy chain for every prime dividing the class number over
    the odd-norm labels, then audits completeness: the recovered orders
    must multiply to the class number, else the label set cannot exhibit
    the whole group and InsufficientGenerators is raised.
    """
    h = recover_class_number(bundle)
    if h == 1:
        return FinGenAbGroup.trivial()
    odd_labels = [l for l in bundle.labels if label_has_odd_norm(bundle, l)]

    def subgroup_order(key: tuple[str, ...]) -> int:
        return subgroup_order_from_bundle(bundle, key)

    cyclic_orders: list[int] = []
    total = 1
    for p in sorted(factorint(h)):
        parts = greedy_primary_factors(int(p), odd_labels, subgroup_order, tie_break)
        cyclic_orders.extend(parts)
        for d in parts:
            total *= d
    if total != h:
        raise InsufficientGenerators(
            f"odd-norm labels exhibit a subgroup of order {total}, "
            f"but the class number is {h}; supply more primes"
        )
    return FinGenAbGroup.from_orders(cyclic_orders)


@dataclass(frozen=True)
class ZetaData:
    """Truncated Dirichlet coefficients of the zeta function.

    `coefficients[n-1]` counts the multisets of prime-ideal norms whose
    product is n (that is, ideals of norm n), for n up to the bound.
    """

    norms: tuple[int, ...]
    bound: int
    coefficients: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.coefficients[0] != 1:
            raise ValueError("the unit ideal must be counted exactly once")
        if any(n < 2 or len(factorint(n)) != 1 for n in self.norms):
            raise ValueError("every norm must be a prime power > 1")


def zeta_coefficients(norms: Iterable[int], bound: int) -> list[int]:
    """Ideal counts a_1..a_bound from a complete multiset of prime norms.

    Each prime ideal of norm N contributes the Euler factor
    1 + N^-s + N^-2s + ...; multiplying the factors out is a multiplicative
    sieve: walking the multiples of N in ascending order picks up all powers
    of N automatically.  Completeness of `norms` below the bound is the
    caller's contract.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    a = [0] * (bound + 1)
    a[1] = 1  # the unit ideal
    for n in norms:
        if n < 2:
            raise ValueError(f"norm {n} is below 2")
        if n > bound:
            continue
        for k in range(n, bound + 1, n):
            a[k] += a[k // n]
    return a[1:]


def zeta_data(norms: Iterable[int], bound: int) -> ZetaData:
    norms = tuple(sorted(norms))
    return ZetaData(
        norms=norms,
        bound=bound,
        coefficients=tuple(zeta_coefficients(norms, bound)),
    )


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    message: str


@dataclass(frozen=True)
class ReconstructionReport:
    class_number: int
    class_group: FinGenAbGroup
    norms: Mapping[str, int]
    zeta: ZetaData
    verdicts: tuple[Verdict, ...]

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.verdicts)


def reconstruct_all(
    bundle: InvariantBundle, zeta_bound: int, tie_break: TieBreak = _first
) -> ReconstructionReport:
    """Full blind reconstruction: class number, group, norms, zeta data."""
    h = recover_class_number(bundle)
    group = reconstruct_class_group(bundle, tie_break)
    norms = {label: recover_norm(bundle, label) for label in bundle.labels}
    zeta = zeta_data(norms.values(), zeta_bound)
    if group.order() != h:
        raise MalformedBundle("recovered group order disagrees with the rank")
    return ReconstructionReport(
        class_number=h, class_group=group, norms=norms, zeta=zeta, verdicts=()
    )


def roundtrip(
    cl: ClassGroupModel,
    primes: Sequence[PrimeIdealDatum],
    zeta_bound: int,
    tie_break: TieBreak = _first,
) -> ReconstructionReport:
    """Build a bundle, reconstruct blind, and compare with the ground truth.

    The classes of the odd-norm primes must generate the class group; for
    genuine fields that always holds once enough primes are supplied, so
    failure carries guidance to raise the norm bound.
    """
    odd = [cl.index_of(p.cls) for p in primes if p.has_odd_norm]
    if len(cl.subgroup_closure(tuple(odd))) != cl.size:
        raise InsufficientGenerators(
            "the odd-norm primes supplied do not generate the class group; "
            "raise the prime norm bound"
        )
    bundle = build_bundle(cl, primes, lazy=True)
    report = reconstruct_all(bundle, zeta_bound, tie_break)
    true_norms = {p.label: p.norm for p in primes}
    true_group = cl.group
    verdicts = [
        Verdict(
            "class_number",
            report.class_number == cl.size,
            f"recovered {report.class_number}, true {cl.size}",
        ),
        Verdict(
            "class_group",
            iso_equal(report.class_group, true_group),
            f"recovered {report.class_group}, true {true_group}",
        ),
        Verdict(
            "norms",
            report.norms == true_norms,
            "all labelwise norms agree"
            if report.norms == true_norms
            else f"norm map differs: {_norm_diff(report.norms, true_norms)}",
        ),
        Verdict(
            "zeta",
            report.zeta.coefficients
            == tuple(zeta_coefficients(true_norms.values(), zeta_bound)),
            f"coefficients up to {zeta_bound} compared",
        ),
    ]
    return ReconstructionReport(
        class_number=report.class_number,
        class_group=report.class_group,
        norms=report.norms,
        zeta=report.zeta,
        verdicts=tuple(verdicts),
    )


def _norm_diff(got: Mapping[str, int], want: Mapping[str, int]) -> str:
    keys = [k for k in want if got.get(k) != want[k]]
    return ", ".join(f"{k}: got {got.get(k)}, want {want[k]}" for k in keys[:5])


@dataclass(frozen=True)
class ComparisonResult:
    equivalent: bool
    bound: int
    first_zeta_difference: tuple[int, int, int] | None  # (n, a_n left, a_n right)
    groups_isomorphic: bool
    group_left: FinGenAbGroup
    group_right: FinGenAbGroup

    def describe(self) -> str:
        if self.equivalent:
            return f"equivalent at bound {self.bound}"
        parts = []
        if self.first_zeta_difference:
            n, a, b = self.first_zeta_difference
            parts.append(f"zeta coefficients differ at n = {n} ({a} vs {b})")
        if not self.groups_isomorphic:
            parts.append(
                f"class groups differ ({self.group_left} vs {self.group_right})"
            )
        return "; ".join(parts)


def compare_fields(
    spec_left: FieldSpec, spec_right: FieldSpec, bound: int
) -> ComparisonResult:
    """Compare two field specs through the blind pipeline, up to a bound.

    Both sides get a bundle built from their prime data; zeta coefficients
    come from the recovered norms and the groups from blind reconstruction.
    """
    sides = []
    for spec in (spec_left, spec_right):
        cl = class_group_model(spec)
        primes = enumerate_prime_ideals(spec, bound)
        bundle = build_bundle(cl, primes, lazy=True)
        norms = [recover_norm(bundle, label) for label in bundle.labels]
        group = reconstruct_class_group(bundle)
        sides.append((tuple(zeta_coefficients(norms, bound)), group))
    (za, ga), (zb, gb) = sides
    first_diff = None
    for n, (x, y) in enumerate(zip(za, zb), start=1):
        if x != y:
            first_diff = (n, x, y)
            break
    groups_ok = iso_equal(ga, gb)
    return ComparisonResult(
        equivalent=first_diff is None and groups_ok,
        bound=bound,
        first_zeta_difference=first_diff,
        groups_isomorphic=groups_ok,
        group_left=ga,
        group_right=gb,
    )
