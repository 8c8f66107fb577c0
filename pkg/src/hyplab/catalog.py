"""Named group constructors, the group-spec DSL, and the default catalogs.

Grammar (whitespace-insensitive)::

    spec := term ('x' term)*
    term := NAME '(' params ')' | 'perm' '(' degree ';' gens ')'

``D(n)`` is the dihedral group of order ``2n``. Permutation cycles are
written with 1-based points, e.g. ``perm(3; (1 2), (1 2 3))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .caps import InputError
from .group import GroupTable, close_permutation_generators, direct_product, format_cycles, validate_cayley_table


class SpecSyntaxError(InputError):
    def __init__(self, message: str, text: str, pos: int) -> None:
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.pos = pos


@dataclass(frozen=True)
class NamedTerm:
    name: str
    params: tuple = ()

    def __str__(self) -> str:
        return f"{self.name}({','.join(str(p) for p in self.params)})"


@dataclass(frozen=True)
class PermTerm:
    degree: int
    generators: tuple  # 0-based image tuples

    def __str__(self) -> str:
        gens = ", ".join(format_cycles(g) for g in self.generators)
        return f"perm({self.degree}; {gens})"


Term = Union[NamedTerm, PermTerm]


@dataclass(frozen=True)
class GroupSpec:
    terms: tuple

    def __str__(self) -> str:
        return " x ".join(str(t) for t in self.terms)


FAMILIES = ("C", "D", "S", "A", "Q8", "SL23", "E")


# ---------------------------------------------------------------- constructors


def cyclic(n: int) -> GroupTable:
    if n < 1:
        raise InputError(f"C(n) needs n >= 1, got {n}")
    idx = np.arange(n)
    table = (idx[:, None] + idx[None, :]) % n
    return GroupTable(table, 0, (-idx) % n, f"C({n})")


def dihedral(n: int) -> GroupTable:
    """Order ``2n``: element ``r^k s^e`` has index ``2k + e``."""
    if n < 1:
        raise InputError(f"D(n) needs n >= 1, got {n}")
    size = 2 * n
    table = np.empty((size, size), dtype=np.int64)
    inverse = np.empty(size, dtype=np.int64)
    for k1, e1, k2, e2 in itertools.product(range(n), range(2), range(n), range(2)):
        k = (k1 + (k2 if e1 == 0 else -k2)) % n
        table[2 * k1 + e1, 2 * k2 + e2] = 2 * k + (e1 ^ e2)
    for k, e in itertools.product(range(n), range(2)):
        inverse[2 * k + e] = 2 * ((-k) % n) if e == 0 else 2 * k + 1
    return GroupTable(table, 0, inverse, f"D({n})")


def symmetric(n: int) -> GroupTable:
    if not 1 <= n <= 6:
        raise InputError(f"S(n) supports 1 <= n <= 6, got {n}")
    gens = []
    if n >= 2:
        gens.append(tuple([1, 0] + list(range(2, n))))
    if n >= 3:
        gens.append(tuple(list(range(1, n)) + [0]))
    return close_permutation_generators(n, gens, label=f"S({n})")


def alternating(n: int) -> GroupTable:
    if not 1 <= n <= 6:
        raise InputError(f"A(n) supports 1 <= n <= 6, got {n}")
    gens = []
    for k in range(2, n):
        perm = list(range(n))
        perm[0], perm[1], perm[k] = 1, k, 0
        gens.append(tuple(perm))
    return close_permutation_generators(n, gens, label=f"A({n})")


def quaternion() -> GroupTable:
    # index = 4*sign + unit with units 1, i, j, k
    unit_mul = {
        (0, 0): (0, 0), (0, 1): (0, 1), (0, 2): (0, 2), (0, 3): (0, 3),
        (1, 0): (0, 1), (1, 1): (1, 0), (1, 2): (0, 3), (1, 3): (1, 2),
        (2, 0): (0, 2), (2, 1): (1, 3), (2, 2): (1, 0), (2, 3): (0, 1),
        (3, 0): (0, 3), (3, 1): (0, 2), (3, 2): (1, 1), (3, 3): (1, 0),
    }
    table = np.empty((8, 8), dtype=np.int64)
    for s1, u1, s2, u2 in itertools.product(range(2), range(4), range(2), range(4)):
        sign, unit = unit_mul[(u1, u2)]
        table[4 * s1 + u1, 4 * s2 + u2] = 4 * (s1 ^ s2 ^ sign) + unit
    return validate_cayley_table(table, label="Q8()")


def sl23() -> GroupTable:
    """SL(2,3) on 2x2 matrices over GF(3), listed lexicographically."""
    mats = [
        m
        for m in itertools.product(range(3), repeat=4)
        if (m[0] * m[3] - m[1] * m[2]) % 3 == 1
    ]
    index = {m: i for i, m in enumerate(mats)}

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return ((a * e + b * g) % 3, (a * f + b * h) % 3, (c * e + d * g) % 3, (c * f + d * h) % 3)

    table = [[index[mul(x, y)] for y in mats] for x in mats]
    return validate_cayley_table(table, label="SL23()")


def extraspecial(p: int, kind: str = "+") -> GroupTable:
    """Extraspecial group of order ``p^3``.

    ``+``: Heisenberg group mod p (exponent p for odd p, D(4) for p = 2).
    ``-``: exponent ``p^2`` (Q8 for p = 2).
    """
    if p not in (2, 3, 5):
        raise InputError(f"E(p) supports p in (2, 3, 5), got {p}")
    if kind not in ("+", "-"):
        raise InputError(f"E(p, kind) needs kind '+' or '-', got {kind!r}")
    label = f"E({p},{kind})"
    if p == 2 and kind == "-":
        table = quaternion().product
        return validate_cayley_table(table, label=label)
    if kind == "+":
        elems = list(itertools.product(range(p), repeat=3))

        def mul(x, y):
            return ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p)

    else:
        # C_{p^2} semidirect C_p, generator acting by 1 + p
        elems = list(itertools.product(range(p * p), range(p)))

        def mul(x, y):
            return ((x[0] + y[0] * pow(1 + p, x[1], p * p)) % (p * p), (x[1] + y[1]) % p)

    index = {e: i for i, e in enumerate(elems)}
    table = [[index[mul(x, y)] for y in elems] for x in elems]
    return validate_cayley_table(table, label=label)


def _int_params(term: NamedTerm, count: int) -> list[int]:
    if len(term.params) != count or not all(isinstance(p, int) for p in term.params):
        raise InputError(f"{term.name} expects {count} integer parameter(s), got {term.params}")
    return list(term.params)


def construct_named(family: str, params: tuple = ()) -> GroupTable:
    term = NamedTerm(family, tuple(params))
    if family == "C":
        return cyclic(*_int_params(term, 1))
    if family == "D":
        return dihedral(*_int_params(term, 1))
    if family == "S":
        return symmetric(*_int_params(term, 1))
    if family == "A":
        return alternating(*_int_params(term, 1))
    if family == "Q8":
        _int_params(term, 0)
        return quaternion()
    if family == "SL23":
        _int_params(term, 0)
        return sl23()
    if family == "E":
        if len(params) == 1 and isinstance(params[0], int):
            return extraspecial(params[0])
        if len(params) == 2 and isinstance(params[0], int) and params[1] in ("+", "-"):
            return extraspecial(params[0], params[1])
        raise InputError(f"E expects (p) or (p,+|-), got {params}")
    raise InputError(f"unknown group family {family!r}; known: {', '.join(FAMILIES)}")


def construct_term(term: Term) -> GroupTable:
    if isinstance(term, PermTerm):
        return close_permutation_generators(term.degree, term.generators, label=str(term))
    return construct_named(term.name, term.params)


def construct(spec: GroupSpec) -> GroupTable:
    group = construct_term(spec.terms[0])
    for term in spec.terms[1:]:
        group = direct_product(group, construct_term(term))
    return group


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, message: str):
        return SpecSyntaxError(message, self.text, self.pos)

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str) -> None:
        if self.peek() != char:
            found = self.peek() or "end of input"
            raise self.error(f"expected {char!r}, found {found!r}")
        self.pos += 1

    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.peek() == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.text[start:self.pos] in ("", "-"):
            self.pos = start
            raise self.error("expected an integer")
        return int(self.text[start:self.pos])

    def name(self) -> str:
        self.skip()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos].isalpha():
            self.pos += 1
            while self.pos < len(self.text) and self.text[self.pos].isalnum():
                self.pos += 1
        if start == self.pos:
            raise self.error("expected a group name")
        return self.text[start:self.pos]

    def spec(self) -> GroupSpec:
        terms = [self.term()]
        while self.peek() == "x":
            self.pos += 1
            terms.append(self.term())
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return GroupSpec(tuple(terms))

    def term(self) -> Term:
        name = self.name()
        self.expect("(")
        if name == "perm":
            return self.perm_body()
        params = []
        if self.peek() != ")":
            params.append(self.param())
            while self.peek() == ",":
                self.pos += 1
                params.append(self.param())
        self.expect(")")
        return NamedTerm(name, tuple(params))

    def param(self):
        if self.peek() == "+":
            self.pos += 1
            return "+"
        if self.peek() == "-" and not self.text[self.pos + 1:self.pos + 2].isdigit():
            self.pos += 1
            return "-"
        return self.integer()

    def perm_body(self) -> PermTerm:
        degree = self.integer()
        if degree < 0:
            raise self.error("degree must be non-negative")
        gens = []
        if self.peek() == ";":
            self.pos += 1
            if self.peek() != ")":
                gens.append(self.generator(degree))
                while self.peek() == ",":
                    self.pos += 1
                    gens.append(self.generator(degree))
        self.expect(")")
        return PermTerm(degree, tuple(gens))

    def generator(self, degree: int) -> tuple:
        perm = list(range(degree))
        if self.peek() != "(":
            raise self.error("expected a cycle")
        while self.peek() == "(":
            self.pos += 1
            cycle = []
            while self.peek() not in (")", ""):
                start = self.pos
                point = self.integer()
                if not 1 <= point <= degree:
                    self.pos = start
                    raise self.error(f"point {point} outside 1..{degree}")
                cycle.append(point - 1)
                if self.peek() == ",":
                    self.pos += 1
            self.expect(")")
            if len(set(cycle)) != len(cycle):
                raise self.error("repeated point in cycle")
            # cycles in one generator compose left to right
            step = list(range(degree))
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                step[a] = b
            perm = [step[perm[i]] for i in range(degree)]
        return tuple(perm)


def parse_spec(text: str) -> GroupSpec:
    return _Parser(text).spec()


def parse_group_spec(text: str) -> GroupTable:
    return construct(parse_spec(text))


def load_catalog_file(path: str | Path) -> list[str]:
    """One spec per line; ``#`` starts a comment."""
    specs = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            specs.append(line)
    return specs


# ---------------------------------------------------------------- catalogs

BUILTIN_SPECS = (
    [f"C({n})" for n in range(1, 13)]
    + [f"D({n})" for n in range(3, 9)]
    + ["S(3)", "S(4)", "A(4)", "A(5)", "Q8()", "E(3,+)", "E(3,-)", "SL23()"]
    + ["C(2) x S(3)", "C(3) x S(3)", "C(4) x A(4)", "D(4) x S(3)", "C(2) x SL23()", "Q8() x S(3)"]
)


def builtin_catalog_specs() -> list[str]:
    return list(BUILTIN_SPECS)


def builtin_catalog() -> list[GroupTable]:
    return [parse_group_spec(s) for s in BUILTIN_SPECS]


# (label, invariants, action matrices)
BUILTIN_MODULE_SPECS = (
    ("trivial", [1], [[[1]]]),
    ("C6 trivial action", [6], [[[1]]]),
    ("C2xC2 trivial action", [2, 2], [[[1, 0], [0, 1]]]),
    ("C3 negation", [3], [[[2]]]),
    ("Z4 negation", [4], [[[3]]]),
    ("C5 negation", [5], [[[4]]]),
    ("C5 doubling", [5], [[[2]]]),
    ("C3xC3 swap", [3, 3], [[[0, 1], [1, 0]]]),
    ("C3xC3 negate first", [3, 3], [[[2, 0], [0, 1]]]),
    ("Z4xC2 unipotent", [4, 2], [[[1, 1], [0, 1]]]),
    ("C2+C3 negate C3", [2, 3], [[[1, 0], [0, 2]]]),
    ("Z4+C3 negation", [4, 3], [[[3, 0], [0, 2]]]),
    ("C5+C5 doubling second", [5, 5], [[[1, 0], [0, 2]]]),
    ("C3xC3 signed permutations (D4)", [3, 3], [[[0, 1], [1, 0]], [[2, 0], [0, 1]]]),
    (
        "C3xC3xC3 D4 on first two, trivial third",
        [3, 3, 3],
        [[[0, 1, 0], [1, 0, 0], [0, 0, 1]], [[2, 0, 0], [0, 1, 0], [0, 0, 1]]],
    ),
    ("C7 Frobenius cube roots", [7], [[[2]]]),
    ("C2xC2 GL(2,2)", [2, 2], [[[0, 1], [1, 0]], [[1, 1], [0, 1]]]),
    ("C3xC3 S3 nonsplit", [3, 3], [[[1, 0], [1, 1]], [[1, 0], [0, 2]]]),
)


def builtin_module_catalog():
    from .zgmodule import build_module

    return [build_module(inv, mats, label=label) for label, inv, mats in BUILTIN_MODULE_SPECS]
