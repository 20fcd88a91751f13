"""Finite (or degreewise finite) associative unital algebras from structure constants."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import BoundError, InputError, ParseError
from .exactlin import ONE, axpy, vec_clean

VAR_NAMES = "xyz"


class AlgebraSpec:
    """Basis labels, a unit vector and products of basis elements.

    ``table[(i, j)]`` is the sparse product e_i * e_j; absent pairs multiply
    to zero.  In degreewise mode (``degree_bound`` set) products whose
    degree would exceed the bound are not representable and raise
    :class:`BoundError`.
    """

    def __init__(
        self,
        labels: Sequence[str],
        unit: Mapping[int, object],
        table: Mapping[tuple[int, int], Mapping[int, object]],
        grading: Sequence[int] | None = None,
        degree_bound: int | None = None,
        name: str = "",
        nvars: int = 0,
    ):
        self.labels = tuple(labels)
        n = len(self.labels)
        if n == 0:
            raise InputError("an algebra needs at least one basis element")
        if len(set(self.labels)) != n:
            raise InputError("basis labels must be distinct")
        self.unit = vec_clean(unit)
        self.table = {}
        for (i, j), v in table.items():
            for idx in (i, j, *v.keys()):
                if not (0 <= idx < n):
                    raise ParseError(f"basis index {idx} out of range 0..{n - 1}")
            cv = vec_clean(v)
            if cv:
                self.table[(i, j)] = cv
        for idx in self.unit:
            if not (0 <= idx < n):
                raise ParseError(f"unit index {idx} out of range")
        if not self.unit:
            raise InputError("unit vector is zero")
        self.grading = tuple(grading) if grading is not None else None
        if self.grading is not None and len(self.grading) != n:
            raise InputError("grading must list one degree per basis element")
        if degree_bound is not None and self.grading is None:
            raise InputError("degreewise mode needs a grading")
        self.degree_bound = degree_bound
        self.name = name or "custom"
        self.nvars = nvars
        # complement of the unit line: drop the first basis direction the unit touches
        self.pivot = min(self.unit)
        self.bar = tuple(i for i in range(n) if i != self.pivot)
        self._bar_set = frozenset(self.bar)
        self.cache: dict = {}  # memo space for derived data (bar products, complexes)

    @property
    def dim(self) -> int:
        return len(self.labels)

    @property
    def degreewise(self) -> bool:
        return self.degree_bound is not None

    def degree(self, i: int) -> int:
        return self.grading[i] if self.grading else 0

    def _check_pair(self, i: int, j: int) -> None:
        if self.degree_bound is not None and self.grading[i] + self.grading[j] > self.degree_bound:
            raise BoundError(
                f"product {self.labels[i]}*{self.labels[j]} exceeds degree bound {self.degree_bound}",
                {"degree": self.grading[i] + self.grading[j]},
            )

    def mul_basis(self, i: int, j: int) -> dict:
        self._check_pair(i, j)
        return self.table.get((i, j), {})

    def mul(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                ab = a * b
                for k, c in self.mul_basis(i, j).items():
                    axpy(out, k, ab * c)
        return out

    def project_bar(self, v: Mapping) -> dict:
        """Image of v in A / K*1, written in the complement basis ``bar``."""
        c = v.get(self.pivot)
        if not c:
            return dict(v)
        s = c / self.unit[self.pivot]
        out = dict(v)
        for k, u in self.unit.items():
            axpy(out, k, -s * u)
        out.pop(self.pivot, None)
        return out

    def is_bar(self, i: int) -> bool:
        return i in self._bar_set

    def is_commutative(self) -> bool:
        n = self.dim
        for i in range(n):
            for j in range(i + 1, n):
                try:
                    if self.mul_basis(i, j) != self.mul_basis(j, i):
                        return False
                except BoundError:
                    continue
        return True

    def basis_vector(self, i: int) -> dict:
        return {i: ONE}

    def element(self, coords: Mapping) -> "Element":
        return Element(self, vec_clean(coords))

    def label_of(self, i: int) -> str:
        return self.labels[i]

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown basis label {label!r}") from None

    def key(self) -> tuple:
        k = self.cache.get("__key__")
        if k is None:
            k = self.cache["__key__"] = self._key()
        return k

    def _key(self) -> tuple:
        return (
            self.labels,
            tuple(sorted(self.unit.items())),
            tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self.table.items())),
            self.grading,
            self.degree_bound,
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, AlgebraSpec) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"AlgebraSpec({self.name}, dim={self.dim})"


@dataclass(frozen=True)
class Element:
    algebra: AlgebraSpec
    coords: dict = field(default_factory=dict)

    def __mul__(self, other: "Element") -> "Element":
        return multiply(self, other)

    def __add__(self, other: "Element") -> "Element":
        if other.algebra is not self.algebra:
            raise InputError("elements of different algebras")
        out = dict(self.coords)
        for k, c in other.coords.items():
            axpy(out, k, c)
        return Element(self.algebra, out)

    def __str__(self) -> str:
        return format_vector(self.coords, self.algebra.labels)


def multiply(a: Element, b: Element) -> Element:
    if a.algebra != b.algebra:
        raise InputError("cannot multiply elements of different algebras")
    return Element(a.algebra, a.algebra.mul(a.coords, b.coords))


def format_vector(v: Mapping, labels: Sequence[str]) -> str:
    if not v:
        return "0"
    parts = []
    for k in sorted(v):
        c = v[k]
        parts.append(f"{c}*{labels[k]}")
    return " + ".join(parts)


@dataclass
class ValidationReport:
    ok: bool
    violations: list = field(default_factory=list)
    checked_triples: int = 0


def validate(spec: AlgebraSpec) -> ValidationReport:
    """Associativity on basis triples and two-sided unitality, within bounds."""
    n = spec.dim
    violations = []
    count = 0
    for i in range(n):
        try:
            left = spec.mul(spec.unit, {i: ONE})
            right = spec.mul({i: ONE}, spec.unit)
        except BoundError:
            continue
        if left != {i: ONE} or right != {i: ONE}:
            violations.append({"kind": "unit", "element": spec.labels[i]})
    for i, j, k in itertools.product(range(n), repeat=3):
        if spec.degreewise and spec.degree(i) + spec.degree(j) + spec.degree(k) > spec.degree_bound:
            continue
        count += 1
        lhs = spec.mul(spec.mul_basis(i, j), {k: ONE})
        rhs = spec.mul({i: ONE}, spec.mul_basis(j, k))
        if lhs != rhs:
            violations.append(
                {
                    "kind": "associativity",
                    "triple": [spec.labels[i], spec.labels[j], spec.labels[k]],
                    "lhs": format_vector(lhs, spec.labels),
                    "rhs": format_vector(rhs, spec.labels),
                }
            )
    if spec.grading is not None:
        for (i, j), v in spec.table.items():
            for k in v:
                if spec.grading[k] != spec.grading[i] + spec.grading[j]:
                    violations.append(
                        {"kind": "grading", "pair": [spec.labels[i], spec.labels[j]], "target": spec.labels[k]}
                    )
    return ValidationReport(not violations, violations, count)


# ---------------------------------------------------------------- builtins


def monomials(nvars: int, max_degree: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= max_degree, graded then lexicographic."""
    out = [e for e in itertools.product(range(max_degree + 1), repeat=nvars) if sum(e) <= max_degree]
    out.sort(key=lambda e: (sum(e), tuple(-x for x in e)))
    return out


def monomial_label(e: Sequence[int], names: Sequence[str] | None = None) -> str:
    names = names or var_names(len(e))
    parts = []
    for name, k in zip(names, e):
        if k == 1:
            parts.append(name)
        elif k > 1:
            parts.append(f"{name}^{k}")
    return "*".join(parts) if parts else "1"


def var_names(n: int) -> list[str]:
    if n <= len(VAR_NAMES):
        return list(VAR_NAMES[:n])
    return [f"x{i + 1}" for i in range(n)]


def _poly_algebra(nvars: int, max_degree: int, degreewise: bool, name: str) -> AlgebraSpec:
    mons = monomials(nvars, max_degree)
    index = {e: i for i, e in enumerate(mons)}
    table = {}
    for (i, a), (j, b) in itertools.product(enumerate(mons), repeat=2):
        s = tuple(x + y for x, y in zip(a, b))
        if s in index:
            table[(i, j)] = {index[s]: ONE}
    return AlgebraSpec(
        [monomial_label(e) for e in mons],
        {index[(0,) * nvars]: ONE},
        table,
        grading=[sum(e) for e in mons],
        degree_bound=max_degree if degreewise else None,
        name=name,
        nvars=nvars,
    )


def dual_numbers() -> AlgebraSpec:
    return AlgebraSpec(["1", "eps"], {0: 1}, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}}, name="dual_numbers")


def ground_field() -> AlgebraSpec:
    return AlgebraSpec(["1"], {0: 1}, {(0, 0): {0: 1}}, name="K")


def matrix(n: int) -> AlgebraSpec:
    if not (1 <= n <= 4):
        raise InputError("matrix(n) supports 1 <= n <= 4")
    labels = [f"e{i + 1}{j + 1}" for i in range(n) for j in range(n)]
    idx = {(i, j): i * n + j for i in range(n) for j in range(n)}
    table = {}
    for (i, j), (k, l) in itertools.product(idx, repeat=2):
        if j == k:
            table[(idx[(i, j)], idx[(k, l)])] = {idx[(i, l)]: ONE}
    unit = {idx[(i, i)]: ONE for i in range(n)}
    return AlgebraSpec(labels, unit, table, name=f"matrix({n})")


def truncated_poly(nvars: int, max_degree: int) -> AlgebraSpec:
    """K[x_1..x_n] modulo all monomials of degree > max_degree."""
    if not (1 <= nvars <= 4 and 0 <= max_degree <= 8):
        raise InputError("truncated_poly supports 1..4 variables and degree 0..8")
    return _poly_algebra(nvars, max_degree, False, f"truncated_poly({nvars},{max_degree})")


def graded_poly(nvars: int, degree_bound: int) -> AlgebraSpec:
    """K[x_1..x_n] stored up to degree_bound; larger products are out of bounds."""
    if not (1 <= nvars <= 4 and 0 <= degree_bound <= 12):
        raise InputError("graded_poly supports 1..4 variables and bound 0..12")
    return _poly_algebra(nvars, degree_bound, True, f"graded_poly({nvars},{degree_bound})")


def group_algebra_z2() -> AlgebraSpec:
    return AlgebraSpec(
        ["1", "g"], {0: 1}, {(0, 0): {0: 1}, (0, 1): {1: 1}, (1, 0): {1: 1}, (1, 1): {0: 1}}, name="group_algebra_Z2"
    )


_BUILTIN_RE = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\(([^)]*)\))?\s*$")


def builtin(name: str, *params: int) -> AlgebraSpec:
    """Build a fixture algebra by name, e.g. ``builtin("matrix", 2)`` or ``builtin("matrix(2)")``."""
    m = _BUILTIN_RE.match(name)
    if not m:
        raise InputError(f"cannot parse algebra name {name!r}")
    base = m.group(1)
    if m.group(2):
        if params:
            raise InputError("parameters given twice")
        try:
            params = tuple(int(p) for p in m.group(2).split(",") if p.strip())
        except ValueError:
            raise InputError(f"non-integer parameter in {name!r}") from None
    makers = {
        "dual_numbers": (dual_numbers, 0),
        "K": (ground_field, 0),
        "ground_field": (ground_field, 0),
        "matrix": (matrix, 1),
        "truncated_poly": (truncated_poly, 2),
        "graded_poly": (graded_poly, 2),
        "group_algebra_Z2": (group_algebra_z2, 0),
    }
    if base not in makers:
        raise InputError(f"unknown builtin algebra {base!r}")
    maker, nparams = makers[base]
    if len(params) != nparams:
        raise InputError(f"{base} takes {nparams} parameter(s), got {len(params)}")
    spec = maker(*params)
    report = validate(spec)
    if not report.ok:  # pragma: no cover - builtins are tested
        raise InputError(f"builtin {name} failed validation: {report.violations[:3]}")
    return spec


# ---------------------------------------------------------------- file format


def _fmt_q(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(tok: str) -> Fraction:
    m = re.fullmatch(r"(-?\d+)(?:/(\d+))?", tok)
    if not m:
        raise ParseError(f"not a rational: {tok!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ParseError(f"zero denominator in {tok!r}")
    if math.gcd(num, den) != 1 and not (num == 0 and den == 1):
        raise ParseError(f"rational {tok!r} is not in lowest terms")
    return Fraction(num, den)


def dumps(spec: AlgebraSpec) -> str:
    lines = [f"name: {spec.name}", "basis: " + " ".join(spec.labels)]
    if spec.grading is not None:
        lines.append("degrees: " + " ".join(str(d) for d in spec.grading))
    if spec.degree_bound is not None:
        lines.append(f"bound: {spec.degree_bound}")
    if spec.nvars:
        lines.append(f"vars: {spec.nvars}")
    lines.append("unit: " + " ".join(_fmt_q(spec.unit.get(i, Fraction(0))) for i in range(spec.dim)))
    for (i, j) in sorted(spec.table):
        for k, c in sorted(spec.table[(i, j)].items()):
            lines.append(f"{i} {j} {k} {_fmt_q(c)}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> AlgebraSpec:
    header: dict[str, str] = {}
    table: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            key, val = line.split(":", 1)
            key = key.strip()
            if key in header:
                raise ParseError(f"line {lineno}: duplicate header {key!r}")
            header[key] = val.strip()
            continue
        toks = line.split()
        if len(toks) != 4:
            raise ParseError(f"line {lineno}: expected 'i j k num/den', got {raw!r}")
        try:
            i, j, k = (int(t) for t in toks[:3])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer index") from None
        c = parse_rational(toks[3])
        if k in table.get((i, j), {}):
            raise ParseError(f"line {lineno}: duplicate structure constant")
        table.setdefault((i, j), {})[k] = c
    if "basis" not in header or "unit" not in header:
        raise ParseError("missing 'basis:' or 'unit:' header")
    labels = header["basis"].split()
    unit_toks = header["unit"].split()
    if len(unit_toks) != len(labels):
        raise ParseError("unit vector length differs from basis size")
    unit = {i: parse_rational(t) for i, t in enumerate(unit_toks)}
    grading = None
    if "degrees" in header:
        grading = [int(t) for t in header["degrees"].split()]
    bound = int(header["bound"]) if "bound" in header else None
    nvars = int(header["vars"]) if "vars" in header else 0
    for key in header:
        if key not in {"name", "basis", "unit", "degrees", "bound", "vars"}:
            raise ParseError(f"unknown header {key!r}")
    try:
        return AlgebraSpec(labels, unit, table, grading, bound, header.get("name", ""), nvars)
    except InputError as exc:
        raise ParseError(str(exc)) from None


def load_algebra(source: str) -> AlgebraSpec:
    """A builtin name or a path to an algebra file."""
    import os

    if os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            spec = loads(fh.read())
        report = validate(spec)
        if not report.ok:
            raise InputError(f"algebra file {source} is invalid: {report.violations[:3]}")
        return spec
    return builtin(source)
