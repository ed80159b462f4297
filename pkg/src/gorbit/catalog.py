"""Static tables of pair spaces and of representations with nontrivial
principal isotropy, with dimension bookkeeping and lookup.

Record grammar (one record per line, fields separated by ``|``)::

    case | k | g1 | rho1 | g2 | rho2 | iso1 | iso2 | flags | note

``k``
    ``su(n)``, ``so(n)``, ``sp(n)`` with a literal or symbolic n followed by
    constraints (``n>=5``, ``odd``, ``even``, ``n%4==0``), or an exceptional
    label ``G2``, ``F4``, ``E6``, ``E7``.
``g1``, ``g2``
    Group labels ``SO(expr)``, ``Spin(expr)``, ``SU(expr)``, ``Sp(expr)`` or
    ``G2 F4 E6 E7 E8``.  Expressions use n, integers, + - * / ^ and implicit
    multiplication (``n(n-1)/2``).  Finite quotients are left out.
``rho1``, ``rho2``
    Highest weights of the complexified isotropy module.  Summands are
    joined by ``(+)``; a summand is ``c1 phi i1 + c2 phi i2 ...`` where the
    index may be ``{expr}``.  A prefix such as ``A3:`` evaluates the summand
    in another root-system labeling (``D3 = A3``, ``D2 = A1 x A1``).  A
    suffix ``[x2]`` doubles the real dimension of that summand.  A
    conditional ``{n=3: ...; n=4: ...; *: ...}`` selects by n.  The real
    dimension is the sum of the complex dimensions of the summands.
``iso1``, ``iso2``
    Expected principal isotropy: ``trivial``, ``finite``, ``torus`` (maximal
    torus), ``abelian=expr`` (a torus of that dimension) or ``dim=expr``
    (nonabelian subalgebra of that dimension); conditionals allowed.
``flags``
    Space separated: ``needs_review``, ``build=N``, ``emb1=TREE``,
    ``emb2=TREE`` (construction trees, see ``representations.build_rep``;
    ``defining-block`` pads the defining module).  An entry is constructible
    when both trees are present and k is classical.
"""
from __future__ import annotations

import ast
import functools
import operator
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Callable

from .errors import RepNotConstructible, SpecError, UnknownCase
from .roots import EXCEPTIONAL_DIMS, algebra_dimension, rank_of, weyl_dimension

# -- small expression language --------------------------------------------------

_OPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
        ast.Div: operator.truediv, ast.Pow: operator.pow, ast.Mod: operator.mod}


def eval_expr(text: str, n: int | None) -> int:
    """Integer value of an arithmetic expression in n."""
    src = text.strip().replace("^", "**")
    src = re.sub(r"(?<=[\dn)])\s*(?=[(n])", "*", src)
    try:
        tree = ast.parse(src, mode="eval").body
    except SyntaxError as exc:
        raise SpecError(f"bad expression {text!r}") from exc

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name) and node.id == "n":
            if n is None:
                raise SpecError(f"{text!r} needs a value of n")
            return Fraction(n)
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -ev(node.operand)
        raise SpecError(f"unsupported expression {text!r}")

    value = ev(tree)
    if value.denominator != 1:
        raise SpecError(f"{text!r} is not an integer at n={n}")
    return int(value)


def _split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside braces."""
    parts, depth, cur, i = [], 0, "", 0
    while i < len(text):
        if text.startswith(sep, i) and depth == 0:
            parts.append(cur)
            cur = ""
            i += len(sep)
            continue
        ch = text[i]
        depth += ch == "{"
        depth -= ch == "}"
        cur += ch
        i += 1
    parts.append(cur)
    return [p.strip() for p in parts]


def select_case(text: str, n: int | None) -> str:
    """Resolve ``{n=3: a; *: b}``; plain text is returned unchanged."""
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")) or ":" not in text:
        return text
    for case in _split_top(text[1:-1], ";"):
        key, _, value = case.partition(":")
        key = key.strip()
        if key == "*":
            return value.strip()
        m = re.fullmatch(r"n\s*=\s*(\d+)", key)
        if m is None:
            raise SpecError(f"bad condition {key!r}")
        if n is not None and int(m.group(1)) == n:
            return value.strip()
    raise SpecError(f"no branch of {text!r} applies to n={n}")


# -- algebras and groups --------------------------------------------------------

_EXCEPTIONAL_K = {"G2": ("G", 2), "F4": ("F", 4), "E6": ("E", 6), "E7": ("E", 7), "E8": ("E", 8)}


@dataclass(frozen=True)
class KSpec:
    family: str                 # su, so, sp or an exceptional label
    n: int | None               # None when symbolic
    constraints: tuple[str, ...] = ()

    @property
    def classical(self) -> bool:
        return self.family in ("su", "so", "sp")

    def admits(self, n: int) -> bool:
        for c in self.constraints:
            if c == "odd" and n % 2 == 0:
                return False
            if c == "even" and n % 2 == 1:
                return False
            m = re.fullmatch(r"n(>=|>)(\d+)", c)
            if m and not (n >= int(m.group(2)) if m.group(1) == ">=" else n > int(m.group(2))):
                return False
            m = re.fullmatch(r"n%(\d+)==(\d+)", c)
            if m and n % int(m.group(1)) != int(m.group(2)):
                return False
        return True

    def root_system(self, n: int | None) -> tuple[str, int]:
        if not self.classical:
            return _EXCEPTIONAL_K[self.family]
        return rank_of(self.family, self.resolve(n))

    def resolve(self, n: int | None) -> int:
        if self.n is not None:
            return self.n
        if n is None:
            raise SpecError("symbolic entry needs n")
        return n

    def dim(self, n: int | None) -> int:
        fam, rank = self.root_system(n)
        if fam == "D" and rank == 2:
            return 6
        return algebra_dimension(fam, rank)

    def label(self) -> str:
        if not self.classical:
            return self.family
        base = f"{self.family}({'n' if self.n is None else self.n})"
        return " ".join((base,) + self.constraints)


def parse_k(text: str) -> KSpec:
    text = text.strip()
    if text in _EXCEPTIONAL_K:
        return KSpec(text, None)
    m = re.fullmatch(r"(su|so|sp)\((n|\d+)\)\s*(.*)", text)
    if m is None:
        raise SpecError(f"cannot parse k {text!r}")
    n = None if m.group(2) == "n" else int(m.group(2))
    return KSpec(m.group(1), n, tuple(m.group(3).split()))


@dataclass(frozen=True)
class GroupSpec:
    label: str

    def kind(self) -> tuple[str, str | None]:
        m = re.fullmatch(r"(SO|Spin|SU|Sp)\((.+)\)", self.label)
        if m:
            return {"SO": "so", "Spin": "so", "SU": "su", "Sp": "sp"}[m.group(1)], m.group(2)
        if self.label in EXCEPTIONAL_DIMS:
            return self.label, None
        raise SpecError(f"cannot parse group {self.label!r}")

    @property
    def classical(self) -> bool:
        return self.kind()[0] in ("so", "su", "sp")

    def size(self, n: int | None) -> int:
        fam, expr = self.kind()
        if expr is None:
            raise SpecError(f"{self.label} has no matrix size")
        return eval_expr(expr, n)

    def dim(self, n: int | None) -> int:
        fam, expr = self.kind()
        if expr is None:
            return EXCEPTIONAL_DIMS[fam]
        size = eval_expr(expr, n)
        return {"so": size * (size - 1) // 2, "su": size * size - 1, "sp": size * (2 * size + 1)}[fam]


# -- weights ------------------------------------------------------------------------

@dataclass(frozen=True)
class Summand:
    family: str
    rank: int
    weight: tuple[int, ...]
    factor: int = 1

    def real_dim(self) -> int:
        if self.family == "D" and self.rank == 2:
            # D2 = A1 x A1: product of two sl2 modules
            return (self.weight[0] + 1) * (self.weight[1] + 1) * self.factor
        return weyl_dimension(self.family, self.rank, self.weight) * self.factor


_TERM = re.compile(r"^\s*(\d*)\s*phi\s*(\d+|\{[^}]*\})\s*$")


def parse_weights(text: str, k: KSpec, n: int | None) -> list[Summand]:
    text = select_case(text, n)
    out = []
    for summand in _split_top(text, "(+)"):
        factor = 1
        if summand.startswith("(") and summand.endswith(")"):
            summand = summand[1:-1].strip()
        if summand.endswith("[x2]"):
            factor = 2
            summand = summand[:-4].strip()
        m = re.match(r"^([ABCDEFG])(\d+):(.*)$", summand)
        if m:
            fam, rank, summand = m.group(1), int(m.group(2)), m.group(3)
        else:
            fam, rank = k.root_system(n)
        weight = [0] * rank
        for term in _split_top(summand, "+"):
            tm = _TERM.match(term)
            if tm is None:
                raise SpecError(f"bad weight term {term!r} in {text!r}")
            coeff = int(tm.group(1)) if tm.group(1) else 1
            idx_txt = tm.group(2)
            idx = eval_expr(idx_txt[1:-1], n) if idx_txt.startswith("{") else int(idx_txt)
            if not 1 <= idx <= rank:
                raise SpecError(f"phi{idx} out of range for {fam}{rank} in {text!r}")
            weight[idx - 1] += coeff
        out.append(Summand(fam, rank, tuple(weight), factor))
    return out


def real_dimension(text: str, k: KSpec, n: int | None) -> int:
    return sum(s.real_dim() for s in parse_weights(text, k, n))


# -- expected isotropy --------------------------------------------------------------

def expected_isotropy(tag: str, k: KSpec, n: int | None) -> tuple[str, int]:
    """(structure, dim) for a tag; structure in trivial / abelian / nonabelian."""
    tag = select_case(tag, n)
    if tag in ("trivial", "finite"):
        return "trivial", 0
    if tag == "torus":
        return "abelian", k.root_system(n)[1] if k.family != "so" or k.resolve(n) != 4 else 2
    m = re.fullmatch(r"(abelian|dim)=(.+)", tag)
    if m is None:
        raise SpecError(f"bad isotropy tag {tag!r}")
    d = eval_expr(m.group(2), n)
    if d == 0:
        return "trivial", 0
    return ("abelian" if m.group(1) == "abelian" else "nonabelian"), d


# -- records --------------------------------------------------------------------

_BUILT: dict = {}

@dataclass
class PairEntry:
    case_id: str
    k: KSpec
    g1: GroupSpec
    rho1: str
    g2: GroupSpec
    rho2: str
    iso1: str
    iso2: str
    flags: dict = field(default_factory=dict)
    note: str = ""

    @property
    def kind(self) -> str:
        return self.case_id.split(".")[0]

    @property
    def needs_review(self) -> bool:
        return "needs_review" in self.flags

    @property
    def build_n(self) -> int | None:
        if self.k.n is not None:
            return self.k.n
        b = self.flags.get("build")
        return int(b) if b else None

    @property
    def constructible(self) -> bool:
        return (self.k.classical and self.g1.classical and self.g2.classical
                and "emb1" in self.flags and "emb2" in self.flags and self.build_n is not None)

    def admissible_ns(self, limit: int = 3, upto: int = 40) -> list[int]:
        if self.k.n is not None:
            return [self.k.n]
        return [n for n in range(2, upto) if self.k.admits(n)][:limit]

    def space_description(self, n: int | None = None) -> dict:
        if not self.constructible:
            raise RepNotConstructible(f"{self.case_id} is not constructible")
        n = self.build_n if n is None else n
        if not self.k.admits(n):
            raise SpecError(f"{self.case_id}: n={n} violates {self.k.constraints}")
        kn = self.k.resolve(n)

        def g(spec: GroupSpec) -> dict:
            return {"family": spec.kind()[0], "n": spec.size(n)}

        return {
            "label": f"{self.case_id}(n={kn})" if self.k.n is None else self.case_id,
            "k": {"family": self.k.family, "n": kn},
            "g1": g(self.g1), "embedding1": self.flags["emb1"],
            "g2": g(self.g2), "embedding2": self.flags["emb2"],
        }

    def build_space(self, n: int | None = None):
        """Construct the space; results are cached per (case, n)."""
        from .spaces import space_from_dict
        desc = self.space_description(n)
        key = (self.case_id, desc["k"]["n"])
        if key not in _BUILT:
            _BUILT[key] = space_from_dict(desc)
        return _BUILT[key]


def _parse_flags(text: str) -> dict:
    flags: dict = {}
    for tok in text.split():
        key, eq, value = tok.partition("=")
        flags[key] = value if eq else True
    return flags


def parse_record(line: str) -> PairEntry:
    fields = [f.strip() for f in line.split("|")]
    if len(fields) != 10:
        raise SpecError(f"record needs 10 fields, got {len(fields)}: {line!r}")
    case_id, k, g1, rho1, g2, rho2, iso1, iso2, flags, note = fields
    return PairEntry(case_id, parse_k(k), GroupSpec(g1), rho1, GroupSpec(g2), rho2, iso1, iso2,
                     _parse_flags(flags), note)


def _data_lines(name: str):
    text = resources.files("gorbit.data").joinpath(name).read_text()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            yield line


@functools.lru_cache(maxsize=1)
def load_pairs() -> tuple[PairEntry, ...]:
    entries = tuple(parse_record(line) for line in _data_lines("pair_spaces.txt"))
    seen = set()
    for e in entries:
        if e.case_id in seen:
            raise SpecError(f"duplicate case {e.case_id}")
        seen.add(e.case_id)
    return entries


def lookup(case_id: str) -> PairEntry:
    for e in load_pairs():
        if e.case_id == case_id:
            return e
    raise UnknownCase(case_id)


def filter_entries(predicate: Callable[[PairEntry], bool]) -> list[PairEntry]:
    return [e for e in load_pairs() if predicate(e)]


def counts() -> dict[str, int]:
    out: dict[str, int] = {}
    for e in load_pairs():
        out[e.kind] = out.get(e.kind, 0) + 1
    return out


# -- validation -------------------------------------------------------------------

@dataclass
class Validation:
    case_id: str
    n: int | None
    ok: bool
    dim_g1: int
    dim_g2: int
    dim_k: int
    real_dim1: int
    real_dim2: int
    message: str = ""
    c1: float | None = None
    c2: float | None = None


def check_dimensions(entry: PairEntry, n: int | None) -> Validation:
    dk = entry.k.dim(n)
    d1, d2 = entry.g1.dim(n), entry.g2.dim(n)
    try:
        r1 = real_dimension(entry.rho1, entry.k, n)
        r2 = real_dimension(entry.rho2, entry.k, n)
    except (SpecError, ValueError, ArithmeticError) as exc:
        return Validation(entry.case_id, n, False, d1, d2, dk, -1, -1, f"weight error: {exc}")
    ok = d1 == dk + r1 and d2 == dk + r2
    msg = "" if ok else f"dimension mismatch: {d1} vs {dk}+{r1}, {d2} vs {dk}+{r2}"
    return Validation(entry.case_id, n, ok, d1, d2, dk, r1, r2, msg)


def validate_entry(entry: PairEntry, build: bool = True, ns: list[int] | None = None) -> list[Validation]:
    """Dimension identity at admissible n; constructible entries are also built."""
    ns = entry.admissible_ns() if ns is None else ns
    if entry.build_n is not None and entry.build_n not in ns:
        ns = list(ns) + [entry.build_n]
    out = []
    for n in ns:
        v = check_dimensions(entry, n if entry.k.n is None else None)
        v.n = entry.k.resolve(n) if entry.k.classical else None
        if v.ok and build and entry.constructible and n == entry.build_n:
            try:
                space = entry.build_space(n)
                v.c1, v.c2 = space.c1, space.c2
                if space.dim_p1 != v.real_dim1 or space.dim_p2 != v.real_dim2:
                    v.ok = False
                    v.message = f"built complements have dims {space.dim_p1}, {space.dim_p2}"
            except Exception as exc:  # report, do not raise
                v.ok = False
                v.message = f"construction failed: {type(exc).__name__}: {exc}"
        out.append(v)
    return out


def cross_check_isotropy(entry: PairEntry, trials: int = 20, seed: int = 42, n: int | None = None) -> dict:
    """Generic stabilizers of both isotropy modules versus the tabulated tags."""
    from .isotropy import classify_pair, generic_stabilizer, isotropy_rep

    if not entry.constructible:
        raise RepNotConstructible(f"{entry.case_id}: k={entry.k.label()}, {entry.g1.label}, {entry.g2.label}")
    n = entry.build_n if n is None else n
    space = entry.build_space(n)
    nn = n if entry.k.n is None else None
    reports, matches = [], []
    for i, tag in ((1, entry.iso1), (2, entry.iso2)):
        rep = generic_stabilizer(isotropy_rep(space, i), trials, seed)
        structure, dim = expected_isotropy(tag, entry.k, nn)
        reports.append(rep)
        matches.append(rep.dim == dim and rep.structure == structure)
    verdict = classify_pair(*reports)
    return {
        "case": entry.case_id,
        "n": entry.k.resolve(n),
        "computed": [(r.dim, r.structure) for r in reports],
        "expected": [expected_isotropy(t, entry.k, nn) for t in (entry.iso1, entry.iso2)],
        "match": all(matches),
        "verdict": verdict,
        "alarm": verdict == "neither",
        "attainment": [r.attainment for r in reports],
    }


def theorem_alarm_from_tags(entry: PairEntry, n: int | None = None) -> bool:
    """True when neither tabulated principal isotropy is trivial or abelian."""
    ns = entry.admissible_ns(limit=1) if n is None else [n]
    nn = None if entry.k.n is not None else ns[0]
    kinds = [expected_isotropy(t, entry.k, nn)[0] for t in (entry.iso1, entry.iso2)]
    return not any(s in ("trivial", "abelian") for s in kinds)


# -- representations with nontrivial principal isotropy ---------------------------------

@dataclass
class IsotropyRow:
    table: str
    algebra: str         # e.g. so(5), su(3)
    rep_label: str
    group: str
    expected: str        # trivial-with-note / torus / subgroup / finite
    expected_dim: int | None
    tree: str = ""
    note: str = ""


def load_isotropy_rows() -> list[IsotropyRow]:
    rows = []
    for line in _data_lines("principal_isotropy.txt"):
        f = [x.strip() for x in line.split("|")]
        if len(f) != 8:
            raise SpecError(f"isotropy row needs 8 fields: {line!r}")
        table, alg, label, group, expected, dim, tree, note = f
        exp_dim = int(dim) if dim not in ("", "-") else None
        if (expected in ("torus", "subgroup")) != (exp_dim is not None):
            raise SpecError(f"expected_dim must accompany torus/subgroup rows: {line!r}")
        rows.append(IsotropyRow(table, alg, label, group, expected, exp_dim, tree, note))
    return rows


def check_isotropy_row(row: IsotropyRow, trials: int = 20, seed: int = 42) -> dict:
    """Build the module of a table row and compare its generic stabilizer."""
    from .algebra import build_classical
    from .isotropy import generic_stabilizer
    from .representations import build_rep

    m = re.fullmatch(r"(su|so|sp)\((\d+)\)", row.algebra)
    if not row.tree or m is None:
        raise RepNotConstructible(f"{row.table}: {row.rep_label} of {row.algebra}")
    rep = build_rep(build_classical(m.group(1), int(m.group(2))), row.tree)
    rep_report = generic_stabilizer(rep, trials, seed)
    want = row.expected_dim or 0
    structure = {"torus": "abelian", "finite": "trivial", "trivial": "trivial"}.get(row.expected)
    ok = rep_report.dim == want and (structure is None or rep_report.structure == structure)
    if row.expected == "subgroup":
        ok = ok and rep_report.structure == "nonabelian"
    return {"table": row.table, "algebra": row.algebra, "rep": row.rep_label,
            "expected": (row.expected, want), "computed": (rep_report.structure, rep_report.dim),
            "attainment": rep_report.attainment, "match": bool(ok)}
