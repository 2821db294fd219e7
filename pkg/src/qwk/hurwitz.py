"""One-part double Hurwitz numbers and Hurwitz correlators.

The closed formula (genus g, n parts over infinity, r = 2g-1+n simple
branch points) is

    H_g(mu) = r! * (mu_1+..+mu_n)^(r-1) * [z^(2g)] prod_i S(mu_i z) / S(z),

a polynomial in the parts.  A Hurwitz correlator extracts one monomial:

    <<tau_{d_1}..tau_{d_n}>>_g = (-1)^((4g-3+n-sum d)/2) [mu^d] ( H_g / (r! d) ),

which vanishes unless sum d lies in [2g-3+n, 4g-3+n] with the parity
opposite to n.

The independent oracle counts transposition factorizations: with sigma_0 the
fixed cycle (1 2 .. d), it counts r-tuples of transpositions whose product
with sigma_0 has cycle type mu, divided by d.  The count runs as a dynamic
program over the group algebra of S_d (one convolution step per branch
point), exact and fast for d <= 6.  The closed formula equals
aut_factor(mu) times this count: the formula counts covers with labeled
preimages of infinity, the count weights unlabeled covers by 1/|Aut|.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, List, Sequence, Tuple

from .algebra import GaussRat, MultiPoly, Rat
from .special import s_series, s_series_of, series_inverse

DEFAULT_DEGREE_CAP = 6


@dataclass(frozen=True)
class Partition:
    """Partition with positive parts, stored sorted descending."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        if not self.parts or any(p < 1 for p in self.parts):
            raise ValueError("parts must be positive")
        object.__setattr__(self, "parts", tuple(sorted(self.parts, reverse=True)))

    @property
    def degree(self) -> int:
        return sum(self.parts)

    def __len__(self):
        return len(self.parts)


@dataclass(frozen=True)
class HurwitzPoly:
    """The one-part Hurwitz number as a polynomial in mu_1..mu_n."""

    g: int
    n: int
    poly: MultiPoly

    def __call__(self, mu: Sequence[int]) -> Rat:
        names = mu_names(self.n)
        v = self.poly.evaluate(dict(zip(names, mu)))
        if not v.is_real():
            raise ArithmeticError("Hurwitz polynomial produced a non-real value")
        return v.re


def mu_names(n: int) -> Tuple[str, ...]:
    return tuple(f"mu{i}" for i in range(1, n + 1))


def _mu_sum(n: int) -> MultiPoly:
    names = mu_names(n)
    return MultiPoly(names, {tuple(1 if i == j else 0 for i in range(n)): GaussRat(1)
                             for j in range(n)})


@lru_cache(maxsize=None)
def _s_quotient(g: int, n: int) -> MultiPoly:
    """[z^(2g)] of prod_i S(mu_i z) / S(z), a polynomial in mu_1..mu_n."""
    order = 2 * g
    names = mu_names(n)
    vs = names + ("z",)
    trunc = {"z": order}
    prod = series_inverse(s_series(order), "z", order)
    prod = MultiPoly(vs, prod._remap(vs), trunc)
    for name in names:
        prod = prod * s_series_of(MultiPoly.var(name, vs), "z", order)
    return prod.coeff_of_var_power("z", order)


def one_part_polynomial(g: int, n: int) -> HurwitzPoly:
    """r! * (sum mu)^(r-1) * [z^(2g)] prod S(mu_i z)/S(z), with r = 2g-1+n."""
    r = 2 * g - 1 + n
    if r - 1 < 0:
        raise ValueError("need 2g-2+n >= 0")
    poly = _s_quotient(g, n) * factorial(r)
    if r - 1 > 0:
        poly = poly * _mu_sum(n) ** (r - 1)
    return HurwitzPoly(g, n, poly)


def one_part_number(g: int, mu: Partition) -> Rat:
    """Closed-form value r! * d^(r-1) * [z^(2g)] prod S(mu_i z)/S(z) at a partition.

    Unlike one_part_polynomial this also covers r = 0 (g = 0 with a single
    part), where d^(r-1) is the rational 1/d.
    """
    n = len(mu)
    r = 2 * g - 1 + n
    if r < 0:
        raise ValueError("negative number of simple branch points")
    base = _s_quotient(g, n)
    v = base.evaluate(dict(zip(mu_names(n), mu.parts)))
    if not v.is_real():
        raise ArithmeticError("non-real Hurwitz value")
    return v.re * factorial(r) * Fraction(mu.degree) ** (r - 1)


def hurwitz_correlator(d: Sequence[int], g: int) -> Rat:
    """Signed mu-coefficient of H_g/(r! d); 0 outside the level interval/parity."""
    d = tuple(d)
    n = len(d)
    if 2 * g - 3 + n < 0:
        raise ValueError("need 2g-3+n >= 0")
    total = sum(d)
    if (total - n) % 2 == 0:
        return Fraction(0)
    if total < 2 * g - 3 + n or total > 4 * g - 3 + n:
        return Fraction(0)
    # H/(r! d) = (sum mu)^(2g-3+n) [z^(2g)] prod S / S
    poly = _s_quotient(g, n)
    e = 2 * g - 3 + n
    if e:
        poly = poly * _mu_sum(n) ** e
    c = poly.coeff_extract(dict(zip(mu_names(n), d)))
    sign = -1 if ((4 * g - 3 + n - total) // 2) % 2 else 1
    value = c * sign
    if not value.is_real():
        raise ArithmeticError("non-real Hurwitz correlator")
    return value.re


def hurwitz_correlator_tau0(rest: Sequence[int], g: int) -> Rat:
    """<<tau_0 tau_{d_1}..tau_{d_n}>>_g from the closed formula, S(0) = 1."""
    rest = tuple(rest)
    n = len(rest)
    if 2 * g - 2 + n < 0:
        raise ValueError("need 2g-2+n >= 0")
    total = sum(rest)
    if (total - n) % 2 != 0:
        return Fraction(0)
    poly = _s_quotient(g, n)
    e = 2 * g - 2 + n
    if e:
        poly = poly * _mu_sum(n) ** e
    c = poly.coeff_extract(dict(zip(mu_names(n), rest)))
    sign = -1 if ((-2 + n - total) // 2) % 2 else 1
    value = c * sign
    if not value.is_real():
        raise ArithmeticError("non-real Hurwitz correlator")
    return value.re


# ----------------------------------------------------------------------
# permutation-factorization oracle

def _cycle_type(p: Tuple[int, ...]) -> Tuple[int, ...]:
    seen = [False] * len(p)
    lens: List[int] = []
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        lens.append(length)
    return tuple(sorted(lens, reverse=True))


def factorization_count(g: int, mu: Partition, cap: int = DEFAULT_DEGREE_CAP,
                        left_to_right: bool = True) -> Rat:
    """(1/d) * #{transposition tuples (t_1..t_r): sigma_0 t_1..t_r has type mu}.

    sigma_0 is the fixed d-cycle (1 2 .. d); r = 2g-1+n.  The 1/d absorbs the
    (d-1)! choices of the full cycle over the d! normalization of covers.
    """
    d = mu.degree
    if d > cap:
        raise ValueError(f"degree {d} above enumeration cap {cap}")
    r = 2 * g - 1 + len(mu)
    if r < 0:
        raise ValueError("negative number of simple branch points")
    sigma0 = tuple(list(range(1, d)) + [0])
    transpositions = []
    for i, j in itertools.combinations(range(d), 2):
        t = list(range(d))
        t[i], t[j] = j, i
        transpositions.append(tuple(t))
    counts: Dict[Tuple[int, ...], int] = {sigma0: 1}
    for _ in range(r):
        nxt: Dict[Tuple[int, ...], int] = {}
        for p, c in counts.items():
            for t in transpositions:
                if left_to_right:
                    q = tuple(p[t[x]] for x in range(d))   # p composed after t
                else:
                    q = tuple(t[p[x]] for x in range(d))
                nxt[q] = nxt.get(q, 0) + c
        counts = nxt
    target = mu.parts
    total = sum(c for p, c in counts.items() if _cycle_type(p) == target)
    return Fraction(total, d)


def aut_factor(mu: Partition) -> int:
    """Product over distinct part sizes of (multiplicity)!."""
    out = 1
    for v in set(mu.parts):
        out *= factorial(mu.parts.count(v))
    return out


def partitions_of(d: int):
    """All partitions of d, parts descending."""
    def rec(remaining: int, largest: int):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, largest), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest
    yield from rec(d, d)
