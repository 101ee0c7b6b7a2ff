"""Shared builders for the test suite."""

import random
from fractions import Fraction

import groundlogic as gl


def random_model(rng: random.Random, n_vars=6, n_terms=5, max_arity=3) -> gl.EnergyModel:
    variables = tuple(gl.Variable(i) for i in range(n_vars))
    terms = []
    for _ in range(n_terms):
        k = rng.randint(1, max_arity)
        vars_ = tuple(rng.sample(range(n_vars), k))
        table = tuple(Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2))) for _ in range(1 << k))
        terms.append(gl.EnergyTerm(vars_, table))
    return gl.EnergyModel(variables, tuple(terms))


def random_cnf(rng: random.Random, n: int, m: int, k: int = 3) -> gl.Cnf:
    clauses = []
    for _ in range(m):
        vs = rng.sample(range(1, n + 1), k)
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return gl.Cnf(n, tuple(clauses))


def random_netlist(rng: random.Random, n_inputs=4, n_gates=8) -> gl.Netlist:
    nl = gl.Netlist(inputs=[f"i{j}" for j in range(n_inputs)], outputs=[])
    nets = list(nl.inputs)
    for g in range(n_gates):
        kind = rng.choice(("AND", "OR", "NOT"))
        out = f"g{g}"
        if kind == "NOT":
            ins = (rng.choice(nets),)
        else:
            ins = tuple(rng.sample(nets, 2))
        nl.gates.append(gl.Gate(kind, ins, out))
        nets.append(out)
    nl.outputs.append(nets[-1])
    nl.validate()
    return nl


def cnf_inputs_projection(network: gl.Network, states, n: int):
    vars_ = [network.port_map[f"x{i}"] for i in range(1, n + 1)]
    return {tuple(a[v] for v in vars_) for a in states}


FLIPPER = gl.DtmSpec(
    ("q",), "q", frozenset(),
    {("q", 0): ("q", 1, "U"), ("q", 1): ("q", 0, "U")},
)

TWO_STATE = gl.DtmSpec(
    ("a", "b"), "a", frozenset(),
    {
        ("a", 0): ("b", 1, "U"),
        ("a", 1): ("a", 0, "U"),
        ("b", 0): ("a", 1, "D"),
        ("b", 1): ("b", 0, "D"),
    },
)

WRITE1_HALT = gl.DtmSpec(
    ("go", "stop"), "go", frozenset({"stop"}),
    {("go", 0): ("stop", 1, "U"), ("go", 1): ("stop", 1, "U")},
)
