"""Energy models over binary variables, with exact rational energies.

A model declares a set of binary variables and a list of k-local energy
terms.  Each term names k distinct variables (1 <= k <= K_MAX) and carries a
table of 2**k energies; table index i encodes the assignment in which bit j
of i is the value of vars[j] (little-endian on the listed variable order).
The energy of a total assignment is the sum of all table lookups.  Variables
may be clamped to a fixed bit, which removes them from free enumeration.

Energies are `fractions.Fraction` throughout.  Degeneracy counts and the
energy-uniformity checks built on top of this module require exact equality,
so floats are rejected at the boundary.  All numeric scales (penalties,
biases, couplings) are conventions chosen by callers, not physical
constants.

The line-oriented dump format::

    VAR <id> <role> [label]
    CLAMP <id> <0|1>
    TERM <k> <id_1> ... <id_k> : <e_0> ... <e_{2^k-1}>
    # comment

round-trips exactly: parsing a formatted model and formatting it again
reproduces the same text.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

Energy = Fraction
Assignment = dict[int, int]

K_MAX = 8
DEFAULT_CAP = 2 ** 24

ROLES = ("input", "output", "ancilla", "wire", "constant")


class ModelError(Exception):
    """Base class for energy-model errors."""


class IncompleteAssignmentError(ModelError):
    """An assignment is missing a declared variable."""


class CapacityError(ModelError):
    """An exact operation would exceed its state-space budget."""


class DumpFormatError(ModelError):
    """A dump file could not be parsed; carries the offending line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def as_energy(value) -> Fraction:
    """Coerce an exact number (int, Fraction, or rational string) to Fraction.

    Floats are rejected: ground-state degeneracy and energy-uniformity
    checks rely on exact arithmetic.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"energies must be exact rationals, got {type(value).__name__}")


@dataclass(frozen=True)
class Variable:
    """A declared binary variable.  Roles are metadata only."""

    id: int
    role: str = "wire"
    label: str | None = None

    def __post_init__(self):
        if self.id < 0:
            raise ModelError(f"variable id must be non-negative, got {self.id}")
        if self.role not in ROLES:
            raise ModelError(f"unknown role {self.role!r}")


@dataclass(frozen=True)
class EnergyTerm:
    """A k-local energy table over an ordered tuple of distinct variables."""

    vars: tuple[int, ...]
    table: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "table", tuple(as_energy(e) for e in self.table))
        k = len(self.vars)
        if not 1 <= k <= K_MAX:
            raise ModelError(f"term arity {k} outside 1..{K_MAX}; decompose first")
        if len(set(self.vars)) != k:
            raise ModelError(f"term variables must be distinct: {self.vars}")
        if len(self.table) != 1 << k:
            raise ModelError(
                f"table for arity {k} needs {1 << k} entries, got {len(self.table)}"
            )

    @property
    def arity(self) -> int:
        return len(self.vars)

    def index(self, assignment: Assignment) -> int:
        idx = 0
        for j, v in enumerate(self.vars):
            idx |= (assignment[v] & 1) << j
        return idx

    def energy(self, assignment: Assignment) -> Fraction:
        return self.table[self.index(assignment)]

    def restrict(self, fixed: dict[int, int]) -> tuple["EnergyTerm | None", Fraction]:
        """Fold fixed bits out of the table.

        Returns (smaller term, 0) when free variables remain, or
        (None, constant energy) when every variable was fixed.
        """
        if not any(v in fixed for v in self.vars):
            return self, Fraction(0)
        keep = [(j, v) for j, v in enumerate(self.vars) if v not in fixed]
        base = 0
        for j, v in enumerate(self.vars):
            if v in fixed:
                base |= (fixed[v] & 1) << j
        if not keep:
            return None, self.table[base]
        sub = []
        for i in range(1 << len(keep)):
            idx = base
            for jj, (j, _) in enumerate(keep):
                idx |= ((i >> jj) & 1) << j
            sub.append(self.table[idx])
        return EnergyTerm(tuple(v for _, v in keep), tuple(sub)), Fraction(0)


@dataclass(frozen=True)
class EnergyModel:
    """Declared variables, k-local terms, and clamped bits.

    Treat instances as immutable; `with_terms` / `with_clamps` build
    modified copies.
    """

    variables: tuple[Variable, ...]
    terms: tuple[EnergyTerm, ...] = ()
    clamps: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "clamps", dict(self.clamps))
        ids = [v.id for v in self.variables]
        declared = set(ids)
        if len(ids) != len(declared):
            raise ModelError("duplicate variable ids")
        for t in self.terms:
            undecl = set(t.vars) - declared
            if undecl:
                raise ModelError(f"term references undeclared variables {sorted(undecl)}")
        for v, b in self.clamps.items():
            if v not in declared:
                raise ModelError(f"clamp on undeclared variable {v}")
            if b not in (0, 1):
                raise ModelError(f"clamp value must be 0 or 1, got {b}")

    @property
    def var_ids(self) -> tuple[int, ...]:
        return tuple(sorted(v.id for v in self.variables))

    @property
    def free_vars(self) -> tuple[int, ...]:
        return tuple(v for v in self.var_ids if v not in self.clamps)

    def variable(self, var_id: int) -> Variable:
        for v in self.variables:
            if v.id == var_id:
                return v
        raise ModelError(f"unknown variable {var_id}")

    def with_terms(self, extra) -> "EnergyModel":
        return EnergyModel(self.variables, self.terms + tuple(extra), self.clamps)

    def with_clamps(self, extra: dict[int, int]) -> "EnergyModel":
        merged = dict(self.clamps)
        for v, b in extra.items():
            if v in merged and merged[v] != (b & 1):
                raise ModelError(f"conflicting clamp on variable {v}")
            merged[v] = b & 1
        return EnergyModel(self.variables, self.terms, merged)


@dataclass(frozen=True)
class SpectrumReport:
    """Ground level, degeneracy, and gap to the first excited level."""

    ground_energy: Fraction
    ground_degeneracy: int
    first_excited_energy: Fraction | None
    gap: Fraction | None


def total_energy(model: EnergyModel, assignment: Assignment) -> Fraction:
    """Sum of all term-table lookups under a total assignment."""
    missing = [v for v in model.var_ids if v not in assignment]
    if missing:
        raise IncompleteAssignmentError(f"assignment missing variables {missing[:8]}")
    for v, b in model.clamps.items():
        if assignment[v] != b:
            raise ModelError(f"assignment violates clamp {v}={b}")
    e = Fraction(0)
    for t in model.terms:
        e += t.table[t.index(assignment)]
    return e


def _folded(model: EnergyModel):
    """Fold clamps out; map remaining term vars to free-variable positions."""
    free = list(model.free_vars)
    pos = {v: i for i, v in enumerate(free)}
    offset = Fraction(0)
    folded = []
    for t in model.terms:
        sub, const = t.restrict(model.clamps)
        offset += const
        if sub is not None:
            folded.append((tuple(pos[v] for v in sub.vars), sub.table))
    return free, offset, folded


def _integerized(offset: Fraction, folded):
    """Scale all energies by a common denominator so the hot loop is int-only."""
    denom = offset.denominator
    for _, table in folded:
        for e in table:
            denom = lcm(denom, e.denominator)
    off = int(offset * denom)
    terms = [
        (positions, tuple(int(e * denom) for e in table)) for positions, table in folded
    ]
    return denom, off, terms


def _mask_to_assignment(mask: int, free, clamps) -> Assignment:
    a = dict(clamps)
    for i, v in enumerate(free):
        a[v] = (mask >> i) & 1
    return a


def _sort_key(assignment: Assignment):
    return tuple(assignment[v] for v in sorted(assignment))


def _check_cap(n_free: int, cap: int):
    if n_free > 0 and (1 << n_free) > cap:
        raise CapacityError(
            f"{n_free} free variables require {1 << n_free} states, cap is {cap}; "
            "shrink the model, clamp inputs, or use the annealer"
        )


def enumerate_ground_states(
    model: EnergyModel, cap: int = DEFAULT_CAP
) -> tuple[Fraction, list[Assignment]]:
    """Exact minimum energy and the complete set of minimizing assignments.

    Exhaustive over all free (unclamped) variables; clamped bits are included
    in each returned assignment.  Assignments come back sorted
    lexicographically by variable id.
    """
    free, offset, folded = _folded(model)
    _check_cap(len(free), cap)
    denom, off, terms = _integerized(offset, folded)
    best = None
    masks: list[int] = []
    for mask in range(1 << len(free)):
        e = off
        for positions, table in terms:
            idx = 0
            for j, p in enumerate(positions):
                idx |= ((mask >> p) & 1) << j
            e += table[idx]
        if best is None or e < best:
            best, masks = e, [mask]
        elif e == best:
            masks.append(mask)
    assert best is not None
    out = [_mask_to_assignment(m, free, model.clamps) for m in masks]
    out.sort(key=_sort_key)
    return Fraction(best, denom), out


def spectrum(model: EnergyModel, cap: int = DEFAULT_CAP) -> SpectrumReport:
    """Ground energy, exact degeneracy, and the first excited level if any."""
    free, offset, folded = _folded(model)
    _check_cap(len(free), cap)
    denom, off, terms = _integerized(offset, folded)
    e0 = None
    count0 = 0
    e1 = None
    for mask in range(1 << len(free)):
        e = off
        for positions, table in terms:
            idx = 0
            for j, p in enumerate(positions):
                idx |= ((mask >> p) & 1) << j
            e += table[idx]
        if e0 is None or e < e0:
            if e0 is not None:
                e1 = e0 if e1 is None or e0 < e1 else e1
            e0, count0 = e, 1
        elif e == e0:
            count0 += 1
        elif e1 is None or e < e1:
            e1 = e
    assert e0 is not None
    ground = Fraction(e0, denom)
    first = Fraction(e1, denom) if e1 is not None else None
    gap = first - ground if first is not None else None
    return SpectrumReport(ground, count0, first, gap)


def project(assignments, vars: list[int]) -> list[Assignment]:
    """Deduplicated projections of assignments onto the listed variables."""
    seen: dict[tuple, Assignment] = {}
    for a in assignments:
        try:
            key = tuple(a[v] for v in vars)
        except KeyError as exc:
            raise ModelError(f"assignment has no variable {exc.args[0]}") from None
        seen.setdefault(key, dict(zip(vars, key)))
    return [seen[k] for k in sorted(seen)]


# --- dump format -----------------------------------------------------------


def format_model(model: EnergyModel, ports=None) -> str:
    """Render the dump format.  `ports` is an optional list of
    ("in"|"out"|"anc", var_id) pairs appended as PORT lines (gadget dumps)."""
    lines = []
    for v in sorted(model.variables, key=lambda v: v.id):
        line = f"VAR {v.id} {v.role}"
        if v.label:
            line += f" {v.label}"
        lines.append(line)
    for vid in sorted(model.clamps):
        lines.append(f"CLAMP {vid} {model.clamps[vid]}")
    for t in model.terms:
        ids = " ".join(str(v) for v in t.vars)
        energies = " ".join(str(e) for e in t.table)
        lines.append(f"TERM {t.arity} {ids} : {energies}")
    for kind, vid in ports or ():
        lines.append(f"PORT {kind} {vid}")
    return "\n".join(lines) + "\n"


def _parse_int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise DumpFormatError(lineno, f"bad {what} {token!r}") from None


def _parse_energy(token: str, lineno: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError):
        raise DumpFormatError(lineno, f"bad energy {token!r}") from None


def parse_statements(text: str, allow_ports: bool = False):
    """Parse dump statements into (variables, clamps, terms, ports).

    Shared by the model and gadget parsers; `#` starts a comment anywhere on
    a line.  Raises DumpFormatError with a line number on any defect.
    """
    variables: list[Variable] = []
    clamps: dict[int, int] = {}
    terms: list[EnergyTerm] = []
    ports: list[tuple[str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "VAR":
            if len(tokens) < 3:
                raise DumpFormatError(lineno, "VAR needs <id> <role> [label]")
            vid = _parse_int(tokens[1], lineno, "variable id")
            role = tokens[2]
            if role not in ROLES:
                raise DumpFormatError(lineno, f"unknown role {role!r}")
            label = " ".join(tokens[3:]) or None
            variables.append(Variable(vid, role, label))
        elif kind == "CLAMP":
            if len(tokens) != 3 or tokens[2] not in ("0", "1"):
                raise DumpFormatError(lineno, "CLAMP needs <id> <0|1>")
            clamps[_parse_int(tokens[1], lineno, "variable id")] = int(tokens[2])
        elif kind == "TERM":
            if len(tokens) < 2:
                raise DumpFormatError(lineno, "TERM needs an arity")
            k = _parse_int(tokens[1], lineno, "arity")
            if not 1 <= k <= K_MAX:
                raise DumpFormatError(lineno, f"arity {k} outside 1..{K_MAX}")
            expected = 2 + k + 1 + (1 << k)
            if len(tokens) != expected or tokens[2 + k] != ":":
                raise DumpFormatError(
                    lineno, f"TERM {k} needs {k} ids, ':', then {1 << k} energies"
                )
            vids = tuple(_parse_int(t, lineno, "variable id") for t in tokens[2 : 2 + k])
            table = tuple(_parse_energy(t, lineno) for t in tokens[3 + k :])
            try:
                terms.append(EnergyTerm(vids, table))
            except ModelError as exc:
                raise DumpFormatError(lineno, str(exc)) from None
        elif kind == "PORT" and allow_ports:
            if len(tokens) != 3 or tokens[1] not in ("in", "out", "anc"):
                raise DumpFormatError(lineno, "PORT needs <in|out|anc> <id>")
            ports.append((tokens[1], _parse_int(tokens[2], lineno, "variable id")))
        else:
            raise DumpFormatError(lineno, f"unknown statement {kind!r}")
    return variables, clamps, terms, ports


def parse_model(text: str) -> EnergyModel:
    """Parse the dump format (without PORT lines) into an EnergyModel."""
    variables, clamps, terms, _ = parse_statements(text, allow_ports=False)
    try:
        return EnergyModel(tuple(variables), tuple(terms), clamps)
    except ModelError as exc:
        raise DumpFormatError(0, str(exc)) from None
