"""Explicit Runge--Kutta tableaus with exact rational coefficients.

Tableaus are the raw material for Lawson methods: every explicit RK method
with ``c_1 = 0`` and row sums ``sum_j a_ij = c_i`` yields one.  Entries are
stored as :class:`fractions.Fraction` so that order conditions can be
checked with exact equality; float views are produced on demand.

The text format understood by :func:`parse_tableau` is::

    # Heun's method
    s=2
    c= 0 1
    a2= 1
    b= 1/2 1/2

Line ``a<i>=`` lists the ``i-1`` entries below the diagonal of row ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .errors import InvariantError, ParseError, UnknownTableau

MAX_STAGES = 16


@dataclass(frozen=True)
class RKTableau:
    """Explicit Runge--Kutta coefficients ``(A, b, c)``.

    ``a`` is the full ``s x s`` matrix stored row-wise as nested tuples; only
    the strictly lower triangle may be nonzero.  Instances are validated on
    construction and are immutable (and hashable), so they can be used as
    cache keys by the tree module.
    """

    a: tuple[tuple[Fraction, ...], ...]
    b: tuple[Fraction, ...]
    c: tuple[Fraction, ...]
    name: str = field(default="", compare=False)
    semigroup_only: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(tuple(Fraction(x) for x in row) for row in self.a))
        object.__setattr__(self, "b", tuple(Fraction(x) for x in self.b))
        object.__setattr__(self, "c", tuple(Fraction(x) for x in self.c))
        validate(self)

    @property
    def s(self) -> int:
        return len(self.b)

    def a_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.a])

    def b_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.b])

    def c_float(self) -> np.ndarray:
        return np.array([float(x) for x in self.c])

    def render(self) -> str:
        return render_tableau(self)

    def __repr__(self):
        label = self.name or "anonymous"
        return f"RKTableau({label!r}, s={self.s})"


def validate(tab: RKTableau) -> None:
    """Raise :class:`InvariantError` naming the first violated invariant."""
    s = len(tab.b)
    if not 1 <= s <= MAX_STAGES:
        raise InvariantError(f"stage count must be between 1 and {MAX_STAGES}, got {s}")
    if len(tab.c) != s or len(tab.a) != s or any(len(row) != s for row in tab.a):
        raise InvariantError("dimensions of a, b and c disagree")
    if tab.c[0] != 0:
        raise InvariantError("c_1 must be 0")
    for i in range(s):
        for j in range(i, s):
            if tab.a[i][j] != 0:
                raise InvariantError(
                    f"a_{i + 1}{j + 1} must be 0 for an explicit method (j >= i)"
                )
    for i in range(1, s):
        if sum(tab.a[i][:i], Fraction(0)) != tab.c[i]:
            raise InvariantError(f"row-sum c_i mismatch at stage {i + 1}")
    if sum(tab.b, Fraction(0)) != 1:
        raise InvariantError("weights b_i must sum to 1")
    if tab.semigroup_only:
        if any(tab.c[i] > tab.c[i + 1] for i in range(s - 1)) or tab.c[-1] > 1:
            raise InvariantError("semigroup case requires 0 = c_1 <= c_2 <= ... <= c_s <= 1")


def _rational(token: str) -> Fraction:
    parts = token.split("/")
    try:
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            den = int(parts[1])
            if den <= 0:
                raise ValueError
            return Fraction(int(parts[0]), den)
    except ValueError:
        pass
    raise ParseError(f"cannot parse {token!r} as a rational p/q")


def _fields(line: str, key: str, count: int, lineno: int) -> list[Fraction]:
    head, sep, rest = line.partition("=")
    if not sep or head.strip() != key:
        raise ParseError(f"line {lineno}: expected '{key}=', got {line!r}")
    values = [_rational(tok) for tok in rest.split()]
    if len(values) != count:
        raise ParseError(f"line {lineno}: '{key}=' needs {count} entries, got {len(values)}")
    return values


def parse_tableau(text: str, *, name: str = "", semigroup_only: bool = False) -> RKTableau:
    """Parse tableau text into a validated :class:`RKTableau`."""
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise ParseError("empty tableau text")

    lineno, first = lines[0]
    head, sep, rest = first.partition("=")
    if not sep or head.strip() != "s":
        raise ParseError(f"line {lineno}: expected 's=<int>'")
    try:
        s = int(rest.strip())
    except ValueError:
        raise ParseError(f"line {lineno}: stage count {rest.strip()!r} is not an integer") from None
    if not 1 <= s <= MAX_STAGES:
        raise InvariantError(f"stage count must be between 1 and {MAX_STAGES}, got {s}")
    if len(lines) != s + 2:
        raise ParseError(f"expected {s + 2} non-comment lines for s={s}, got {len(lines)}")

    c = _fields(lines[1][1], "c", s, lines[1][0])
    a = [[Fraction(0)] * s for _ in range(s)]
    for i in range(1, s):
        lineno, line = lines[i + 1]
        a[i][:i] = _fields(line, f"a{i + 1}", i, lineno)
    b = _fields(lines[-1][1], "b", s, lines[-1][0])
    return RKTableau(a=tuple(map(tuple, a)), b=tuple(b), c=tuple(c), name=name,
                     semigroup_only=semigroup_only)


def render_tableau(tab: RKTableau) -> str:
    """Inverse of :func:`parse_tableau`: ``parse_tableau(render_tableau(t)) == t``."""
    out = []
    if tab.name:
        out.append(f"# {tab.name}")
    out.append(f"s={tab.s}")
    out.append("c= " + " ".join(str(x) for x in tab.c))
    for i in range(1, tab.s):
        out.append(f"a{i + 1}= " + " ".join(str(x) for x in tab.a[i][:i]))
    out.append("b= " + " ".join(str(x) for x in tab.b))
    return "\n".join(out) + "\n"


def _lower(rows, s):
    full = [[Fraction(0)] * s for _ in range(s)]
    for i, row in enumerate(rows, start=1):
        full[i][: len(row)] = [Fraction(x) for x in row]
    return tuple(map(tuple, full))


_F = Fraction
_BUILTIN = {
    "explicit-euler": dict(a=[], b=[1], c=[0]),
    "heun2": dict(a=[[1]], b=[_F(1, 2), _F(1, 2)], c=[0, 1]),
    "midpoint2": dict(a=[[_F(1, 2)]], b=[0, 1], c=[0, _F(1, 2)]),
    "kutta3": dict(a=[[_F(1, 2)], [-1, 2]], b=[_F(1, 6), _F(2, 3), _F(1, 6)], c=[0, _F(1, 2), 1]),
    "rk4": dict(
        a=[[_F(1, 2)], [0, _F(1, 2)], [0, 0, 1]],
        b=[_F(1, 6), _F(1, 3), _F(1, 3), _F(1, 6)],
        c=[0, _F(1, 2), _F(1, 2), 1],
    ),
}

BUILTIN_NAMES = tuple(_BUILTIN)


def builtin_tableau(name: str) -> RKTableau:
    """Return one of the classical tableaus listed in ``BUILTIN_NAMES``."""
    try:
        spec = _BUILTIN[name]
    except KeyError:
        raise UnknownTableau(f"unknown tableau {name!r}; choose from {', '.join(BUILTIN_NAMES)}") from None
    s = len(spec["b"])
    return RKTableau(a=_lower(spec["a"], s), b=tuple(spec["b"]), c=tuple(spec["c"]), name=name)


def load_tableau(name_or_path: str | Path) -> RKTableau:
    """Resolve a builtin name first, otherwise read a tableau file."""
    if isinstance(name_or_path, str) and name_or_path in _BUILTIN:
        return builtin_tableau(name_or_path)
    path = Path(name_or_path)
    if not path.exists():
        raise UnknownTableau(f"{name_or_path!r} is neither a builtin tableau nor a file")
    return parse_tableau(path.read_text(encoding="utf-8"), name=path.stem)
