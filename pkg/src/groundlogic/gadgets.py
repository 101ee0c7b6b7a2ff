"""Logic gates as energy fragments.

A gadget is an energy model over input ports, one output port, and internal
ancillae, built so that minimum-energy configurations realize a boolean
function on the ports.  The default synthesis gives every satisfied row
energy 0 and every violation a penalty P, which makes the per-input ground
energy identically zero.  "Physical" gate profiles with input-dependent
ground energies model gates whose two identical outputs can still sit at
different energies; the input-symmetrization construction repairs that by
driving one gate copy per input pattern so the total ground energy becomes
input-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .logic import AND2, NOT, OR2, TruthFunction
from .model import (
    CapacityError,
    EnergyModel,
    EnergyTerm,
    K_MAX,
    ModelError,
    Variable,
    as_energy,
    format_model,
    parse_statements,
    total_energy,
    _integerized,
)

SCAN_CAP = 2 ** 22


class Forcing(NamedTuple):
    """var = table[index(args)]: the unique minimizing value of a driven
    variable given already-determined arguments (little-endian index)."""

    var: int
    args: tuple[int, ...]
    table: tuple[int, ...]


class LogicDominanceError(ModelError):
    """A gate's penalty is too small relative to its energy profile."""


@dataclass(frozen=True)
class Gadget:
    """A boolean gate packaged as an energy fragment with ports.

    `forcings`, when complete, give the unique minimum-energy extension of
    any input pattern; `ground_table` caches the per-input ground energies
    claimed by the constructor; `penalty_floor` is a lower bound on the extra
    energy of any configuration that deviates from the minimizing extension
    while the inputs stay fixed.  `exact_extension` marks gadgets whose
    forcings are guaranteed-exact by construction.
    """

    name: str
    inputs: tuple[int, ...]
    output: int
    ancillae: tuple[int, ...]
    fragment: EnergyModel
    forcings: tuple[Forcing, ...] = ()
    counts: dict[str, int] = field(default_factory=dict)
    penalty_floor: Fraction = Fraction(0)
    ground_table: tuple[Fraction, ...] | None = None
    exact_extension: bool = False

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "ancillae", tuple(self.ancillae))
        ports = [*self.inputs, self.output, *self.ancillae]
        if len(set(ports)) != len(ports):
            raise ModelError("gadget ports must be pairwise disjoint")
        if set(ports) != set(self.fragment.var_ids):
            raise ModelError("gadget ports must cover the fragment's variables exactly")
        if self.fragment.clamps:
            raise ModelError("gadget fragments carry no clamps")

    @property
    def arity(self) -> int:
        return len(self.inputs)

    @property
    def internal_vars(self) -> tuple[int, ...]:
        return (self.output,) + self.ancillae

    def forcings_complete(self) -> bool:
        forced = {f.var for f in self.forcings}
        return forced == set(self.internal_vars)


@dataclass(frozen=True)
class EdcReport:
    """Per-input ground energies and whether they are all exactly equal."""

    per_input_ground: dict[tuple[int, ...], Fraction]
    is_edc: bool


@dataclass(frozen=True)
class ImplementsReport:
    implements: bool
    logical_gap: Fraction


def _input_pattern(x: int, n: int) -> tuple[int, ...]:
    return tuple((x >> j) & 1 for j in range(n))


def _scan_minima(g: Gadget, fn: TruthFunction | None = None, cap: int = SCAN_CAP):
    """Exhaustive per-input minimization over the gadget's internal variables.

    Returns, per input pattern, (ground energy, ground energy among
    wrong-output configurations) -- the second entry only when `fn` is given.
    """
    internals = g.internal_vars
    order = g.inputs + internals
    n_in, n_int = len(g.inputs), len(internals)
    if (1 << (n_in + n_int)) > cap:
        raise CapacityError(
            f"exhaustive scan needs {1 << (n_in + n_int)} states, cap is {cap}"
        )
    pos = {v: i for i, v in enumerate(order)}
    folded = [(tuple(pos[v] for v in t.vars), t.table) for t in g.fragment.terms]
    denom, off, terms = _integerized(Fraction(0), folded)
    out_bit = pos[g.output] - n_in
    results = []
    for x in range(1 << n_in):
        want = fn.outputs[x] if fn is not None else None
        best = None
        best_wrong = None
        for m in range(1 << n_int):
            e = off
            for positions, table in terms:
                idx = 0
                for j, p in enumerate(positions):
                    bit = (x >> p) & 1 if p < n_in else (m >> (p - n_in)) & 1
                    idx |= bit << j
                e += table[idx]
            if best is None or e < best:
                best = e
            if want is not None and ((m >> out_bit) & 1) != want:
                if best_wrong is None or e < best_wrong:
                    best_wrong = e
        results.append(
            (
                Fraction(best, denom),
                Fraction(best_wrong, denom) if best_wrong is not None else None,
            )
        )
    return results


def extend_by_forcings(inputs_assignment: dict[int, int], forcings) -> dict[int, int]:
    """Apply forcing rules in order, returning the extended assignment."""
    a = dict(inputs_assignment)
    for var, args, table in forcings:
        idx = 0
        for j, arg in enumerate(args):
            idx |= (a[arg] & 1) << j
        a[var] = table[idx]
    return a


def _witness_grounds(g: Gadget) -> list[Fraction]:
    if not g.forcings_complete() or not g.exact_extension:
        raise CapacityError(
            f"gadget {g.name!r} is too large for exhaustive scanning and has no "
            "exact extension plan"
        )
    out = []
    for x in range(1 << g.arity):
        a = extend_by_forcings(
            {v: (x >> j) & 1 for j, v in enumerate(g.inputs)}, g.forcings
        )
        out.append(total_energy(g.fragment, a))
    return out


def per_input_grounds(g: Gadget, cap: int = SCAN_CAP) -> list[Fraction]:
    """Ground energy for each input pattern, minimized over output+ancillae.

    Uses the exhaustive scan whenever it fits the cap; otherwise falls back
    to the gadget's guaranteed-exact extension plan.
    """
    try:
        return [e for e, _ in _scan_minima(g, cap=cap)]
    except CapacityError:
        return _witness_grounds(g)


def check_edc(g: Gadget, cap: int = SCAN_CAP) -> EdcReport:
    """Is the per-input ground energy the same for every input?"""
    if g.arity > 16:
        raise CapacityError(f"EDC check limited to 16 inputs, gadget has {g.arity}")
    grounds = per_input_grounds(g, cap=cap)
    table = {_input_pattern(x, g.arity): e for x, e in enumerate(grounds)}
    return EdcReport(table, len(set(grounds)) <= 1)


def check_implements(g: Gadget, fn: TruthFunction, cap: int = SCAN_CAP) -> ImplementsReport:
    """Exhaustively check that every minimizing configuration computes fn."""
    if fn.arity != g.arity:
        raise ModelError(f"arity mismatch: gadget {g.arity}, function {fn.arity}")
    minima = _scan_minima(g, fn=fn, cap=cap)
    gap = None
    for ground, wrong in minima:
        d = wrong - ground
        if gap is None or d < gap:
            gap = d
    assert gap is not None
    return ImplementsReport(gap > 0, gap)


def _default_name(fn: TruthFunction) -> str:
    if fn == AND2:
        return "AND"
    if fn == OR2:
        return "OR"
    if fn == NOT:
        return "inverter"
    return f"F{fn.arity}"


def synthesize_gadget(fn: TruthFunction, penalty=1, name: str | None = None) -> Gadget:
    """One (n+1)-ary term: energy 0 iff output = fn(inputs), else `penalty`."""
    p = as_energy(penalty)
    if p <= 0:
        raise ModelError("penalty must be positive")
    n = fn.arity
    if n > K_MAX - 1:
        raise ModelError(f"arity {n} exceeds {K_MAX - 1}; decompose first")
    name = name or _default_name(fn)
    variables = tuple(Variable(j, "input", f"x{j}") for j in range(n)) + (
        Variable(n, "output", "y"),
    )
    table = []
    for idx in range(1 << (n + 1)):
        x = idx & ((1 << n) - 1)
        y = (idx >> n) & 1
        table.append(Fraction(0) if y == fn.outputs[x] else p)
    term = EnergyTerm(tuple(range(n + 1)), tuple(table))
    return Gadget(
        name=name,
        inputs=tuple(range(n)),
        output=n,
        ancillae=(),
        fragment=EnergyModel(variables, (term,)),
        forcings=(Forcing(n, tuple(range(n)), fn.outputs),),
        counts={name: 1},
        penalty_floor=p,
        ground_table=tuple(Fraction(0) for _ in range(1 << n)),
        exact_extension=True,
    )


def make_physical_and(e00, e01, e10, e11, penalty) -> Gadget:
    """AND gate whose correct-output rows carry input-dependent energies.

    Row (a,b) with the correct output costs e_ab; the wrong output costs
    e_ab + penalty.  Requires penalty > max pairwise difference of the four
    profile energies so that logic still dominates.
    """
    p = as_energy(penalty)
    profile = {
        (0, 0): as_energy(e00),
        (0, 1): as_energy(e01),
        (1, 0): as_energy(e10),
        (1, 1): as_energy(e11),
    }
    spread = max(profile.values()) - min(profile.values())
    if p <= spread:
        raise LogicDominanceError(
            f"penalty {p} must exceed the profile spread {spread}"
        )
    variables = (
        Variable(0, "input", "a"),
        Variable(1, "input", "b"),
        Variable(2, "output", "c"),
    )
    table = []
    for idx in range(8):
        a, b, c = idx & 1, (idx >> 1) & 1, (idx >> 2) & 1
        base = profile[(a, b)]
        table.append(base if c == (a & b) else base + p)
    ground = tuple(profile[((x >> 0) & 1, (x >> 1) & 1)] for x in range(4))
    return Gadget(
        name="physical-AND",
        inputs=(0, 1),
        output=2,
        ancillae=(),
        fragment=EnergyModel(variables, (EnergyTerm((0, 1, 2), tuple(table)),)),
        forcings=(Forcing(2, (0, 1), AND2.outputs),),
        counts={"AND": 1},
        penalty_floor=p,
        ground_table=ground,
        exact_extension=True,
    )


def instantiate(g: Gadget, var_map: dict[int, int]):
    """Rename a gadget's terms and forcings through a variable mapping."""
    terms = tuple(
        EnergyTerm(tuple(var_map[v] for v in t.vars), t.table) for t in g.fragment.terms
    )
    forcings = tuple(
        Forcing(var_map[f.var], tuple(var_map[a] for a in f.args), f.table)
        for f in g.forcings
    )
    return terms, forcings


def symmetrize(g: Gadget, inverter_penalty=None) -> Gadget:
    """Input-symmetrized composite: 2^n copies of g exhaust all input patterns.

    Copy s receives the pattern x XOR s through one shared inverter per
    input, so for any actual input x the copies jointly see every pattern
    and the total ground energy is the (input-independent) sum of g's
    per-pattern ground energies.  Copy 0's output is the designated output;
    the other copies' outputs stay dangling as ancillae.

    The inverter penalty defaults to 1 + 2^n * spread(g); anything at or
    below 2^n * spread(g) could let inverter violations re-route copies
    profitably and break the energy bookkeeping.
    """
    n = g.arity
    if n < 1:
        raise ModelError("cannot symmetrize a gadget with no inputs")
    if n > 8:
        raise ModelError(f"symmetrization of {n} inputs needs {1 << n} copies; refusing")
    grounds = per_input_grounds(g)
    spread = max(grounds) - min(grounds)
    gain_bound = (1 << n) * spread
    p_inv = as_energy(inverter_penalty) if inverter_penalty is not None else 1 + gain_bound
    if p_inv <= gain_bound:
        raise LogicDominanceError(
            f"inverter penalty {p_inv} must exceed {gain_bound} for this profile"
        )

    variables = [Variable(j, "input", f"x{j}") for j in range(n)]
    variables += [Variable(n + j, "ancilla", f"nx{j}") for j in range(n)]
    terms: list[EnergyTerm] = []
    forcings: list[Forcing] = []
    for j in range(n):
        terms.append(EnergyTerm((j, n + j), (p_inv, Fraction(0), Fraction(0), p_inv)))
        forcings.append(Forcing(n + j, (j,), (1, 0)))

    next_id = 2 * n
    output = None
    ancillae = [n + j for j in range(n)]
    for s in range(1 << n):
        var_map = {}
        for j, v in enumerate(g.inputs):
            var_map[v] = j if not (s >> j) & 1 else n + j
        var_map[g.output] = next_id
        out_var = next_id
        next_id += 1
        for a in g.ancillae:
            var_map[a] = next_id
            next_id += 1
        role = "output" if s == 0 else "ancilla"
        variables.append(Variable(out_var, role, f"c{s}.y"))
        for a in g.ancillae:
            variables.append(Variable(var_map[a], "ancilla", f"c{s}.{a}"))
        copy_terms, copy_forcings = instantiate(g, var_map)
        terms += copy_terms
        forcings += copy_forcings
        if s == 0:
            output = out_var
        else:
            ancillae.append(out_var)
        ancillae += [var_map[a] for a in g.ancillae]

    counts = {k: v << n for k, v in g.counts.items()}
    counts["inverter"] = counts.get("inverter", 0) + n
    total_ground = sum(grounds, Fraction(0))
    return Gadget(
        name=f"sym:{g.name}",
        inputs=tuple(range(n)),
        output=output,
        ancillae=tuple(ancillae),
        fragment=EnergyModel(tuple(variables), tuple(terms)),
        forcings=tuple(forcings),
        counts=counts,
        penalty_floor=min(g.penalty_floor, p_inv - gain_bound),
        ground_table=tuple(total_ground for _ in range(1 << n)),
        exact_extension=g.exact_extension,
    )


# --- gadget dumps ----------------------------------------------------------


def format_gadget(g: Gadget) -> str:
    ports = [("in", v) for v in g.inputs]
    ports.append(("out", g.output))
    ports += [("anc", v) for v in g.ancillae]
    return format_model(g.fragment, ports=ports)


def parse_gadget(text: str, name: str = "parsed") -> Gadget:
    """Parse a dump with PORT lines.  Forcing plans are not serialized, so
    parsed gadgets support exhaustive checks only."""
    variables, clamps, terms, ports = parse_statements(text, allow_ports=True)
    ins = tuple(v for kind, v in ports if kind == "in")
    outs = [v for kind, v in ports if kind == "out"]
    anc = tuple(v for kind, v in ports if kind == "anc")
    if len(outs) != 1:
        raise ModelError(f"gadget dump needs exactly one out port, found {len(outs)}")
    fragment = EnergyModel(tuple(variables), tuple(terms), clamps)
    return Gadget(name=name, inputs=ins, output=outs[0], ancillae=anc, fragment=fragment)
