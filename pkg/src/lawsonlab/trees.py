"""Rooted trees and exact order-condition checks for explicit RK tableaus.

The order conditions of a Lawson method reduce to those of the underlying
Runge--Kutta method once the multivariate integrals and quadratures are
applied to the constant function one: a tableau has order ``p`` iff
``integral_weight(t)(1) == quadrature_weight(t, tab)`` for every tree with
at most ``p`` nodes.  Monomial integrands reduce to the same check on a
larger tree obtained by sprouting leaves (see :func:`sprout`).

Trees are kept in a canonical form so that structurally equal trees compare
and hash equal.  Node enumeration (used to index sprout vectors) is
pre-order over that canonical form: root first, then each child subtree in
canonical order.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

from .errors import DimensionMismatch, LimitExceeded
from .rk_tableau import RKTableau

MAX_TREE_ORDER = 10
LEAF_SYMBOL = "•"


class RootedTree:
    """Unordered rooted tree ``[t_1, ..., t_k]``; ``RootedTree()`` is the single node.

    Children are sorted by a canonical key (order first, then the child keys
    recursively), which makes the representation unique.
    """

    __slots__ = ("children", "order", "_key", "_hash")

    def __init__(self, children: Iterable["RootedTree"] = ()):
        kids = tuple(sorted(children, key=lambda t: t._key))
        self.children = kids
        self.order = 1 + sum(t.order for t in kids)
        self._key = (self.order, tuple(t._key for t in kids))
        self._hash = hash(self._key)

    @classmethod
    def parse(cls, text: str) -> "RootedTree":
        """Read nested-bracket notation such as ``[•,[•]]`` (``o`` and ``*`` also mean a leaf)."""
        text = "".join(text.split())
        tree, pos = cls._parse_at(text, 0)
        if pos != len(text):
            raise ValueError(f"trailing characters in tree {text!r}")
        return tree

    @classmethod
    def _parse_at(cls, text, pos):
        if pos >= len(text):
            raise ValueError("unexpected end of tree text")
        if text[pos] in (LEAF_SYMBOL, "o", "*"):
            return cls(), pos + 1
        if text[pos] != "[":
            raise ValueError(f"unexpected character {text[pos]!r} at {pos}")
        kids = []
        pos += 1
        while True:
            kid, pos = cls._parse_at(text, pos)
            kids.append(kid)
            if pos < len(text) and text[pos] == ",":
                pos += 1
                continue
            if pos < len(text) and text[pos] == "]":
                return cls(kids), pos + 1
            raise ValueError("unbalanced brackets in tree text")

    def nodes_preorder(self) -> list["RootedTree"]:
        out = [self]
        for kid in self.children:
            out.extend(kid.nodes_preorder())
        return out

    def __eq__(self, other):
        return isinstance(other, RootedTree) and self._key == other._key

    def __lt__(self, other):
        return self._key < other._key

    def __hash__(self):
        return self._hash

    def __str__(self):
        if not self.children:
            return LEAF_SYMBOL
        return "[" + ",".join(str(t) for t in self.children) + "]"

    def __repr__(self):
        return f"RootedTree({self})"


LEAF = RootedTree()


def bush(k: int) -> RootedTree:
    return RootedTree([LEAF] * k) if k else LEAF


@lru_cache(maxsize=None)
def _trees_of_order(n: int) -> tuple[RootedTree, ...]:
    if n == 1:
        return (LEAF,)
    # children form a multiset of trees with total order n - 1; generate it as
    # a non-decreasing sequence over the canonically sorted pool of smaller trees
    pool = [t for m in range(1, n) for t in _trees_of_order(m)]
    out = []

    def extend(start, remaining, acc):
        if remaining == 0:
            out.append(RootedTree(acc))
            return
        for idx in range(start, len(pool)):
            t = pool[idx]
            if t.order > remaining:
                break
            extend(idx, remaining - t.order, acc + [t])

    extend(0, n - 1, [])
    return tuple(sorted(out))


def enumerate_trees(p: int) -> list[RootedTree]:
    """All trees with at most ``p`` nodes, each once, sorted canonically (hence by order)."""
    if not 1 <= p <= MAX_TREE_ORDER:
        raise LimitExceeded(f"tree order must be in 1..{MAX_TREE_ORDER}, got {p}")
    return [t for n in range(1, p + 1) for t in _trees_of_order(n)]


def symmetry(t: RootedTree) -> int:
    """Symmetry coefficient: product of children's coefficients times mu_1! mu_2! ..."""
    out = 1
    for kid, mult in Counter(t.children).items():
        out *= symmetry(kid) ** mult * factorial(mult)
    return out


@dataclass(frozen=True)
class PolynomialInZeta:
    """Exact polynomial in one variable; ``coefficients[k]`` multiplies ``zeta**k``."""

    coefficients: tuple[Fraction, ...] = ()

    def __post_init__(self):
        coeffs = [Fraction(x) for x in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def one(cls) -> "PolynomialInZeta":
        return cls((Fraction(1),))

    @classmethod
    def monomial(cls, k: int) -> "PolynomialInZeta":
        return cls((Fraction(0),) * k + (Fraction(1),))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __mul__(self, other: "PolynomialInZeta") -> "PolynomialInZeta":
        if not self.coefficients or not other.coefficients:
            return PolynomialInZeta()
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, x in enumerate(self.coefficients):
            for j, y in enumerate(other.coefficients):
                out[i + j] += x * y
        return PolynomialInZeta(tuple(out))

    def integrate(self) -> "PolynomialInZeta":
        """Antiderivative vanishing at zero."""
        return PolynomialInZeta((Fraction(0),) + tuple(
            x / (k + 1) for k, x in enumerate(self.coefficients)))

    def __call__(self, zeta) -> Fraction:
        zeta = Fraction(zeta)
        acc = Fraction(0)
        for x in reversed(self.coefficients):
            acc = acc * zeta + x
        return acc


@lru_cache(maxsize=None)
def integral_weight(t: RootedTree) -> PolynomialInZeta:
    """Multivariate integral of the constant one over ``t`` as a polynomial in the upper limit."""
    integrand = PolynomialInZeta.one()
    for kid in t.children:
        integrand = integrand * integral_weight(kid)
    return integrand.integrate()


def density(t: RootedTree) -> int:
    """Classical density ``gamma(t) = 1 / integral_weight(t)(1)``."""
    value = 1 / integral_weight(t)(1)
    assert value.denominator == 1
    return int(value)


@lru_cache(maxsize=None)
def _stage_weights(t: RootedTree, tab: RKTableau) -> tuple[Fraction, ...]:
    # entry i is Q_i[t]1 = sum_{j<i} a_ij prod_m Q_j[t_m]1
    inner = _node_products(t, tab)
    return tuple(sum((tab.a[i][j] * inner[j] for j in range(i)), Fraction(0))
                 for i in range(tab.s))


def _node_products(t: RootedTree, tab: RKTableau) -> list[Fraction]:
    out = [Fraction(1)] * tab.s
    for kid in t.children:
        kid_w = _stage_weights(kid, tab)
        out = [x * y for x, y in zip(out, kid_w)]
    return out


def quadrature_weight(t: RootedTree, tab: RKTableau) -> Fraction:
    """Elementary weight ``Q[t]1 = sum_j b_j prod_m Q_j[t_m]1``."""
    inner = _node_products(t, tab)
    return sum((b * x for b, x in zip(tab.b, inner)), Fraction(0))


def quadrature_weight_stage(t: RootedTree, tab: RKTableau, i: int) -> Fraction:
    """Stage weight ``Q_i[t]1`` for stage ``i`` (1-based, as in the tableau)."""
    if not 1 <= i <= tab.s:
        raise DimensionMismatch(f"stage index must be in 1..{tab.s}, got {i}")
    return _stage_weights(t, tab)[i - 1]


def _split_kappa(t: RootedTree, kappa: Sequence[int]):
    if len(kappa) != t.order:
        raise DimensionMismatch(
            f"sprout vector has length {len(kappa)}, tree {t} has {t.order} nodes")
    if any(k < 0 for k in kappa):
        raise DimensionMismatch("sprout vector entries must be non-negative")
    parts, pos = [], 1
    for kid in t.children:
        parts.append(tuple(kappa[pos:pos + kid.order]))
        pos += kid.order
    return kappa[0], parts


def sprout(t: RootedTree, kappa: Sequence[int]) -> RootedTree:
    """Attach ``kappa[j]`` leaves to node ``j`` (pre-order numbering) of ``t``."""
    k_root, parts = _split_kappa(t, tuple(kappa))
    kids = [LEAF] * k_root + [sprout(kid, part) for kid, part in zip(t.children, parts)]
    return RootedTree(kids)


def _monomial_stage(t, kappa, tab):
    # vector over stages i of Q_i[t] x^kappa, evaluated straight from the recursion
    k_root, parts = _split_kappa(t, kappa)
    inner = [c ** k_root for c in tab.c]
    for kid, part in zip(t.children, parts):
        kid_w, _ = _monomial_stage(kid, part, tab)
        inner = [x * y for x, y in zip(inner, kid_w)]
    return [sum((tab.a[i][j] * inner[j] for j in range(i)), Fraction(0)) for i in range(tab.s)], inner


def quadrature_monomial(t: RootedTree, kappa: Sequence[int], tab: RKTableau) -> Fraction:
    """``Q[t] x^kappa``: the node variable of node ``j`` is raised to ``kappa[j]``."""
    _, inner = _monomial_stage(t, tuple(kappa), tab)
    return sum((b * x for b, x in zip(tab.b, inner)), Fraction(0))


def quadrature_monomial_stage(t: RootedTree, kappa: Sequence[int], tab: RKTableau, i: int) -> Fraction:
    if not 1 <= i <= tab.s:
        raise DimensionMismatch(f"stage index must be in 1..{tab.s}, got {i}")
    stages, _ = _monomial_stage(t, tuple(kappa), tab)
    return stages[i - 1]


def integral_monomial(t: RootedTree, kappa: Sequence[int]) -> PolynomialInZeta:
    """``I_zeta[t] x^kappa`` as a polynomial in ``zeta``."""
    k_root, parts = _split_kappa(t, tuple(kappa))
    integrand = PolynomialInZeta.monomial(k_root)
    for kid, part in zip(t.children, parts):
        integrand = integrand * integral_monomial(kid, part)
    return integrand.integrate()


@dataclass(frozen=True)
class OrderCheck:
    order: int
    tree_count: int
    passed: bool


@dataclass(frozen=True)
class OrderCertificate:
    tableau_id: str
    max_order_checked: int
    certified_order: int
    first_failure: tuple[RootedTree, Fraction, Fraction] | None = None
    per_order: tuple[OrderCheck, ...] = field(default=(), repr=False)

    def report(self) -> str:
        lines = [f"tableau: {self.tableau_id}"]
        for row in self.per_order:
            status = "pass" if row.passed else "FAIL"
            lines.append(f"  order {row.order}: {row.tree_count} trees  {status}")
        lines.append(f"certified order {self.certified_order} (checked up to {self.max_order_checked})")
        if self.first_failure is not None:
            tree, lhs, rhs = self.first_failure
            lines.append(f"witness tree {tree} of order {tree.order}: "
                         f"integral {lhs} != quadrature {rhs}")
        return "\n".join(lines)


def check_order(tab: RKTableau, p_max: int) -> OrderCertificate:
    """Certify the classical order of ``tab`` up to ``p_max`` by exact comparison."""
    if not 1 <= p_max <= MAX_TREE_ORDER:
        raise LimitExceeded(f"p_max must be in 1..{MAX_TREE_ORDER}, got {p_max}")
    certified = None
    failure = None
    rows = []
    for q in range(1, p_max + 1):
        trees = _trees_of_order(q)
        ok = True
        for t in trees:
            lhs = integral_weight(t)(1)
            rhs = quadrature_weight(t, tab)
            if lhs != rhs:
                ok = False
                if failure is None:
                    failure = (t, lhs, rhs)
                break
        rows.append(OrderCheck(q, len(trees), ok))
        if not ok and certified is None:
            certified = q - 1
    if certified is None:
        certified = p_max
    return OrderCertificate(
        tableau_id=tab.name or "anonymous",
        max_order_checked=p_max,
        certified_order=certified,
        first_failure=failure,
        per_order=tuple(rows),
    )


def cayley_sum(p: int) -> Fraction:
    """``sum over trees of order p of p! / (sigma * gamma)``.

    This counts increasingly labelled trees, so the value is ``(p-1)!``.
    """
    return sum((Fraction(factorial(p), symmetry(t) * density(t)) for t in _trees_of_order(p)),
               Fraction(0))


def labelled_tree_sum(p: int) -> Fraction:
    """``sum over trees of order p of p! / sigma``: Cayley's ``p**(p-1)`` labelled rooted trees."""
    return sum((Fraction(factorial(p), symmetry(t)) for t in _trees_of_order(p)), Fraction(0))


def count_by_order(trees: Iterable[RootedTree]) -> tuple[int, ...]:
    counts = Counter(t.order for t in trees)
    return tuple(counts[k] for k in range(1, max(counts) + 1))


__all__ = [
    "LEAF", "RootedTree", "labelled_tree_sum", "PolynomialInZeta", "OrderCertificate", "OrderCheck",
    "bush", "enumerate_trees", "symmetry", "integral_weight", "density",
    "quadrature_weight", "quadrature_weight_stage", "sprout", "quadrature_monomial",
    "quadrature_monomial_stage", "integral_monomial", "check_order", "cayley_sum",
    "count_by_order",
]
