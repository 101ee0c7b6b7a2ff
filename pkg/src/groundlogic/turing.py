"""Deterministic Turing machines as ground-state verification lattices.

A machine run of p steps over p tape cells becomes a (p+1) x p grid of tape
registers plus a p x p grid of identical cell controls.  The control at
(i, j) reads register (i, j) on its R end and writes register (i+1, j) on
its W end; the head travels on s-bit move buses (s = bit length of the
state count, code 0 = no head): the down-move input of (i, j) is the
down-move output of (i-1, j+1) and the up-move input is the up-move output
of (i-1, j-1).  Boundary in-buses are clamped to 0 except at row 1, where
the up-move bus of the start column injects the start state.  Out-buses at
the boundary dangle with zero bias, so a head that walks off the tape
simply vanishes; a head in a halt state is passed through as if absent,
which freezes the tape from that row on.

Ground states of the compiled lattice are exactly the valid computation
histories: with the first register row clamped to a tape there is a unique
ground state, with the row left free there is one ground state per possible
input tape.  `simulate_dtm_oracle` is the independent step-by-step reference
simulator those ground states are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .logic import TruthFunction
from .model import Assignment, DEFAULT_CAP, ModelError
from .netbuilder import Network, clamp_inputs, compile_netlist
from .netlist import Gate, Netlist, netlist_from_bit_functions

MOVE_UP = "U"
MOVE_DOWN = "D"


class DtmError(ModelError):
    pass


class DtmFormatError(DtmError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class DtmSpec:
    """A deterministic one-tape machine over the alphabet {0, 1}.

    `delta` must be total on (non-halt state, bit) pairs; `decision_cell` is
    the tape index carrying the answer bit when the machine halts.
    """

    states: tuple[str, ...]
    start: str
    halts: frozenset[str]
    delta: dict[tuple[str, int], tuple[str, int, str]]
    decision_cell: int = 1

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "halts", frozenset(self.halts))
        object.__setattr__(self, "delta", dict(self.delta))
        if len(set(self.states)) != len(self.states):
            raise DtmError("duplicate state names")
        if self.start not in self.states:
            raise DtmError(f"start state {self.start!r} not declared")
        if not self.halts <= set(self.states):
            raise DtmError("halt states must be declared states")
        for q in self.states:
            if q in self.halts:
                continue
            for bit in (0, 1):
                if (q, bit) not in self.delta:
                    raise DtmError(f"delta not total: missing ({q!r}, {bit})")
        for (q, bit), (q2, b2, move) in self.delta.items():
            if q not in self.states or q2 not in self.states:
                raise DtmError(f"delta uses undeclared state in ({q!r},{bit})")
            if b2 not in (0, 1) or move not in (MOVE_UP, MOVE_DOWN):
                raise DtmError(f"bad delta target for ({q!r},{bit})")

    @property
    def bus_width(self) -> int:
        return len(self.states).bit_length()

    def code(self, state: str) -> int:
        return self.states.index(state) + 1


@dataclass(frozen=True)
class SfscFunction:
    """Truth map of one cell control: (R, in-down, in-up) -> (W, out-down, out-up).

    Bus codes are state indices + 1, with 0 meaning "no head here".  Inputs
    are indexed little-endian as R | ID << 1 | IU << (1 + s).
    """

    bus_width: int
    entries: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        if len(self.entries) != 1 << (1 + 2 * self.bus_width):
            raise DtmError("entry count must be 2^(1 + 2s)")

    def index(self, r: int, id_code: int, iu_code: int) -> int:
        s = self.bus_width
        return (r & 1) | (id_code << 1) | (iu_code << (1 + s))

    def value(self, r: int, id_code: int, iu_code: int) -> tuple[int, int, int]:
        return self.entries[self.index(r, id_code, iu_code)]

    def with_entry(self, r, id_code, iu_code, entry) -> "SfscFunction":
        idx = self.index(r, id_code, iu_code)
        entries = list(self.entries)
        entries[idx] = tuple(entry)
        return SfscFunction(self.bus_width, tuple(entries))

    @property
    def arity(self) -> int:
        return 1 + 2 * self.bus_width

    def _bit_fn(self, extract) -> TruthFunction:
        return TruthFunction(self.arity, tuple(extract(e) for e in self.entries))

    def w_bit(self) -> TruthFunction:
        return self._bit_fn(lambda e: e[0])

    def od_bit(self, b: int) -> TruthFunction:
        return self._bit_fn(lambda e: (e[1] >> b) & 1)

    def ou_bit(self, b: int) -> TruthFunction:
        return self._bit_fn(lambda e: (e[2] >> b) & 1)


def build_sfsc_function(dtm: DtmSpec) -> SfscFunction:
    """Total cell-control map for a machine.

    No head (both buses 0), two heads (both nonzero; unreachable in valid
    histories), an unused code, or a halt-state head all pass the tape bit
    through with empty out-buses.  A live head applies delta and routes the
    successor state onto the bus matching its move direction.
    """
    s = dtm.bus_width
    entries = []
    for idx in range(1 << (1 + 2 * s)):
        r = idx & 1
        id_code = (idx >> 1) & ((1 << s) - 1)
        iu_code = (idx >> (1 + s)) & ((1 << s) - 1)
        entries.append(_sfsc_rule(dtm, r, id_code, iu_code))
    return SfscFunction(s, tuple(entries))


def _sfsc_rule(dtm: DtmSpec, r: int, id_code: int, iu_code: int):
    passthrough = (r, 0, 0)
    if (id_code and iu_code) or (not id_code and not iu_code):
        return passthrough
    code = id_code or iu_code
    if code > len(dtm.states):
        return passthrough
    state = dtm.states[code - 1]
    if state in dtm.halts:
        return passthrough
    q2, b2, move = dtm.delta[(state, r)]
    c2 = dtm.code(q2)
    if move == MOVE_UP:
        return (b2, 0, c2)
    return (b2, c2, 0)


def sfsc_input_nets(s: int) -> list[str]:
    return ["r"] + [f"id{b}" for b in range(s)] + [f"iu{b}" for b in range(s)]


def sfsc_output_nets(s: int) -> list[str]:
    return ["w"] + [f"od{b}" for b in range(s)] + [f"ou{b}" for b in range(s)]


def build_sfsc_netlist(f: SfscFunction) -> Netlist:
    """Per-output-bit sum-of-products decomposition of the cell control."""
    s = f.bus_width
    bits: dict[str, TruthFunction] = {"w": f.w_bit()}
    for b in range(s):
        bits[f"od{b}"] = f.od_bit(b)
    for b in range(s):
        bits[f"ou{b}"] = f.ou_bit(b)
    return netlist_from_bit_functions(sfsc_input_nets(s), bits)


@dataclass(frozen=True)
class SfscBlock:
    """One compiled cell control: network, port directory, and element count."""

    function: SfscFunction
    netlist: Netlist
    network: Network
    m_elements: int

    def port(self, net: str) -> int:
        return self.network.port_map[net]


def build_sfsc_gadget(
    f: SfscFunction, policy: str = "edc-symmetrized", penalty=1
) -> SfscBlock:
    """Compile one cell control under the given policy and report its size."""
    if f.bus_width > 3:
        raise DtmError(f"bus width {f.bus_width} exceeds the desk-scale limit 3")
    nl = build_sfsc_netlist(f)
    network = compile_netlist(nl, policy=policy, penalty=penalty)
    return SfscBlock(f, nl, network, network.elements.total)


def sfsc_block_gadget(block: SfscBlock):
    """View a compiled cell control as a single gadget (W is the designated
    output; move-bus outputs and all internals become ancillae)."""
    from .gadgets import Gadget

    net = block.network
    inputs = tuple(net.port_map[n] for n in sfsc_input_nets(block.function.bus_width))
    output = net.port_map["w"]
    rest = tuple(
        v.id for v in net.model.variables if v.id not in inputs and v.id != output
    )
    return Gadget(
        name="sfsc",
        inputs=inputs,
        output=output,
        ancillae=rest,
        fragment=net.model,
        forcings=net.plan,
        counts=dict(net.elements.counts),
        penalty_floor=net.penalty_floor,
        ground_table=tuple(net.base_ground for _ in range(1 << len(inputs))),
        exact_extension=net.edc,
    )


@dataclass(frozen=True)
class LatticePlan:
    """Directory from lattice coordinates to model variables."""

    p: int
    bus_width: int
    head_start: int
    register_var: dict[tuple[int, int], int]
    inbus_down: dict[tuple[int, int], tuple[int, ...]]
    inbus_up: dict[tuple[int, int], tuple[int, ...]]


@dataclass(frozen=True)
class SqdtmComplexity:
    """Element accounting for a compiled lattice.

    `bound` is (M+1) * p^2; the honest total carries (p+1) * p registers
    because row p of controls writes into register row p+1, so the check is
    against bound + p.
    """

    m_per_sfsc: int
    p: int
    sfsc_elements: int
    registers: int
    total: int
    bound: int
    bound_plus_p: int
    within_bound: bool


@dataclass(frozen=True)
class Lattice:
    dtm: DtmSpec
    p: int
    head_start: int
    tape_in: tuple[int, ...] | None
    function: SfscFunction
    network: Network
    plan: LatticePlan
    complexity: SqdtmComplexity

    def register_assignment(self, history) -> Assignment:
        """Embed an oracle history into the lattice's register variables."""
        out = {}
        for (i, j), var in self.plan.register_var.items():
            out[var] = history.rows[i - 1][j - 1]
        return out


def _reg(i: int, j: int) -> str:
    return f"t{i}_{j}"


def build_lattice(
    dtm: DtmSpec,
    p: int,
    head_start: int,
    tape_in=None,
    policy: str = "penalty",
    penalty=1,
    function: SfscFunction | None = None,
) -> Lattice:
    """Wire p x p cell controls between (p+1) x p tape registers and compile.

    With `tape_in` the first register row is clamped and the ground state is
    the unique run on that tape; without it the row stays free and every
    input tape contributes one ground state.  `function` overrides the
    machine-derived cell-control map (used by mutation tests).
    """
    if not 1 <= head_start <= p:
        raise DtmError(f"head start {head_start} outside 1..{p}")
    if tape_in is not None:
        tape_in = tuple(b & 1 for b in tape_in)
        if len(tape_in) != p:
            raise DtmError(f"tape length {len(tape_in)} != p = {p}")
    f = function if function is not None else build_sfsc_function(dtm)
    s = f.bus_width
    sub = build_sfsc_netlist(f)

    big = Netlist()
    clamp_bits: dict[str, int] = {}
    inbus_down: dict[tuple[int, int], tuple[str, ...]] = {}
    inbus_up: dict[tuple[int, int], tuple[str, ...]] = {}

    def boundary(name: str, bits: int) -> str:
        big.inputs.append(name)
        clamp_bits[name] = bits
        return name

    for i in range(1, p + 2):
        for j in range(1, p + 1):
            if i == 1:
                big.inputs.append(_reg(i, j))
            elif i == p + 1:
                big.outputs.append(_reg(i, j))

    start_code = dtm.code(dtm.start)
    for i in range(1, p + 1):
        for j in range(1, p + 1):
            down_nets = []
            up_nets = []
            for b in range(s):
                if i >= 2 and j + 1 <= p:
                    down_nets.append(f"od{i - 1}_{j + 1}_{b}")
                else:
                    injected = 0  # down bus never carries the injection
                    down_nets.append(boundary(f"bid{i}_{j}_{b}", injected))
                if i >= 2 and j - 1 >= 1:
                    up_nets.append(f"ou{i - 1}_{j - 1}_{b}")
                else:
                    injected = (start_code >> b) & 1 if (i, j) == (1, head_start) else 0
                    up_nets.append(boundary(f"biu{i}_{j}_{b}", injected))
            inbus_down[(i, j)] = tuple(down_nets)
            inbus_up[(i, j)] = tuple(up_nets)

            rename = {"r": _reg(i, j), "w": _reg(i + 1, j)}
            for b in range(s):
                rename[f"id{b}"] = down_nets[b]
                rename[f"iu{b}"] = up_nets[b]
                rename[f"od{b}"] = f"od{i}_{j}_{b}"
                rename[f"ou{b}"] = f"ou{i}_{j}_{b}"

            def net_of(name: str) -> str:
                return rename.get(name) or f"s{i}_{j}.{name}"

            for g in sub.gates:
                big.gates.append(
                    Gate(g.kind, tuple(net_of(n) for n in g.inputs), net_of(g.output), g.func)
                )

    network = compile_netlist(big, policy=policy, penalty=penalty)
    bindings = dict(clamp_bits)
    if tape_in is not None:
        for j in range(1, p + 1):
            bindings[_reg(1, j)] = tape_in[j - 1]
    network = clamp_inputs(network, bindings)

    registers = (p + 1) * p
    gate_total = network.elements.total
    if gate_total % (p * p) != 0:
        raise DtmError("internal error: lattice gate count not divisible by p^2")
    m = gate_total // (p * p)
    network = replace(
        network, elements=network.elements.merged({"register": registers})
    )
    total = gate_total + registers
    bound = (m + 1) * p * p
    complexity = SqdtmComplexity(
        m_per_sfsc=m,
        p=p,
        sfsc_elements=gate_total,
        registers=registers,
        total=total,
        bound=bound,
        bound_plus_p=bound + p,
        within_bound=total <= bound + p,
    )
    plan = LatticePlan(
        p=p,
        bus_width=s,
        head_start=head_start,
        register_var={
            (i, j): network.port_map[_reg(i, j)]
            for i in range(1, p + 2)
            for j in range(1, p + 1)
        },
        inbus_down={
            key: tuple(network.port_map[n] for n in nets)
            for key, nets in inbus_down.items()
        },
        inbus_up={
            key: tuple(network.port_map[n] for n in nets)
            for key, nets in inbus_up.items()
        },
    )
    return Lattice(dtm, p, head_start, tape_in, f, network, plan, complexity)


@dataclass(frozen=True)
class DtmHistory:
    """Reference run: p+1 register rows plus the head trace.

    heads[i] is (position, state, arrival direction) right before step i+1,
    or None once the head has left the tape or been absorbed after a halt.
    """

    rows: tuple[tuple[int, ...], ...]
    heads: tuple[tuple[int, str, str] | None, ...]


def simulate_dtm_oracle(dtm: DtmSpec, tape, head_start: int, p: int) -> DtmHistory:
    """Direct step-by-step simulation with the lattice boundary conventions:
    a head that moves off cells 1..p vanishes; a halt-state head survives one
    row (it was just written) and is absorbed at the next step; remaining
    rows copy forward unchanged."""
    tape = tuple(b & 1 for b in tape)
    if len(tape) != p:
        raise DtmError(f"tape length {len(tape)} != p = {p}")
    if not 1 <= head_start <= p:
        raise DtmError(f"head start {head_start} outside 1..{p}")
    rows = [tape]
    heads: list[tuple[int, str, str] | None] = [(head_start, dtm.start, MOVE_UP)]
    for _ in range(p):
        row = rows[-1]
        head = heads[-1]
        if head is None or head[1] in dtm.halts:
            rows.append(row)
            heads.append(None)
            continue
        pos, state, _ = head
        q2, b2, move = dtm.delta[(state, row[pos - 1])]
        new_row = list(row)
        new_row[pos - 1] = b2
        rows.append(tuple(new_row))
        new_pos = pos + 1 if move == MOVE_UP else pos - 1
        heads.append((new_pos, q2, move) if 1 <= new_pos <= p else None)
    return DtmHistory(tuple(rows), tuple(heads))


def admissible_tapes(lattice: Lattice):
    if lattice.tape_in is not None:
        return [lattice.tape_in]
    return [
        tuple((x >> j) & 1 for j in range(lattice.p)) for x in range(1 << lattice.p)
    ]


def verify_ground_histories(lattice: Lattice, cap: int = DEFAULT_CAP) -> bool:
    """True iff the ground-state set corresponds one-to-one with the oracle
    histories over all admissible input tapes."""
    reg_order = sorted(lattice.plan.register_var.values())
    expected = set()
    for tape in admissible_tapes(lattice):
        history = simulate_dtm_oracle(lattice.dtm, tape, lattice.head_start, lattice.p)
        embedded = lattice.register_assignment(history)
        expected.add(tuple(embedded[v] for v in reg_order))
    _, states = lattice.network.ground_states(cap)
    if len(states) != len(expected):
        return False
    actual = {tuple(a[v] for v in reg_order) for a in states}
    return actual == expected


def head_bus_codes(lattice: Lattice, assignment: Assignment, i: int, j: int):
    """Decode the incoming bus values of control (i, j) in a ground state."""
    down = up = 0
    for b, v in enumerate(lattice.plan.inbus_down[(i, j)]):
        down |= (assignment[v] & 1) << b
    for b, v in enumerate(lattice.plan.inbus_up[(i, j)]):
        up |= (assignment[v] & 1) << b
    return down, up


# --- machine text format ----------------------------------------------------


def format_dtm(dtm: DtmSpec) -> str:
    lines = [f"STATE {q}" for q in dtm.states]
    lines.append(f"START {dtm.start}")
    lines += [f"HALT {q}" for q in sorted(dtm.halts)]
    lines.append(f"DECISION {dtm.decision_cell}")
    for (q, bit), (q2, b2, move) in sorted(dtm.delta.items()):
        lines.append(f"DELTA {q} {bit} -> {q2} {b2} {move}")
    return "\n".join(lines) + "\n"


def parse_dtm(text: str) -> DtmSpec:
    states: list[str] = []
    start = None
    halts: set[str] = set()
    delta: dict[tuple[str, int], tuple[str, int, str]] = {}
    decision = 1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        kind = tokens[0]
        if kind == "STATE" and len(tokens) == 2:
            states.append(tokens[1])
        elif kind == "START" and len(tokens) == 2:
            start = tokens[1]
        elif kind == "HALT" and len(tokens) == 2:
            halts.add(tokens[1])
        elif kind == "DECISION" and len(tokens) == 2:
            try:
                decision = int(tokens[1])
            except ValueError:
                raise DtmFormatError(lineno, f"bad decision cell {tokens[1]!r}") from None
        elif kind == "DELTA":
            if len(tokens) != 7 or tokens[3] != "->":
                raise DtmFormatError(lineno, "DELTA needs <q> <0|1> -> <q'> <0|1> <U|D>")
            if tokens[2] not in ("0", "1") or tokens[5] not in ("0", "1"):
                raise DtmFormatError(lineno, "tape symbols must be 0 or 1")
            if tokens[6] not in (MOVE_UP, MOVE_DOWN):
                raise DtmFormatError(lineno, "move must be U or D")
            key = (tokens[1], int(tokens[2]))
            if key in delta:
                raise DtmFormatError(lineno, f"duplicate DELTA for {key}")
            delta[key] = (tokens[4], int(tokens[5]), tokens[6])
        else:
            raise DtmFormatError(lineno, f"unknown statement {kind!r}")
    if start is None:
        raise DtmFormatError(0, "missing START")
    try:
        return DtmSpec(tuple(states), start, frozenset(halts), delta, decision)
    except DtmError as exc:
        raise DtmFormatError(0, str(exc)) from None
