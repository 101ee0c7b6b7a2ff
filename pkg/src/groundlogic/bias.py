"""Degeneracy-lifting bias units and their assembly onto a network.

A decision unit puts a unary bias on one answer wire: cost delta when the
wire reads 0, cost 0 when it reads 1, so all-YES instances stay in the
ground level and anything with a NO answer is lifted.  A minimization unit
weights a group of wires z_0..z_m by c * 2^i so its total energy is exactly
c * Z for the encoded integer Z; the ground states then carry the minimal
objective value.

The assembly enforces the penalty hierarchy

    gate penalty  >  (#decision units) * delta  +  c * (2^(m+1) - 1)

so that logic consistency always dominates decision bias, which in turn
dominates the objective bias, making "all YES, then minimal Z" the
lexicographic ground-state semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import EnergyTerm, ModelError, as_energy
from .netbuilder import Network


class HierarchyError(ModelError):
    """The requested biases are not dominated by the gate penalty."""


@dataclass(frozen=True)
class Dedlu:
    """Decision unit: unary term (delta at 0, zero at 1) on one port."""

    dport: int
    delta: Fraction


@dataclass(frozen=True)
class Medlu:
    """Minimization unit: unary terms c * 2^i on ports z_0..z_m."""

    mports: tuple[int, ...]
    scale: Fraction

    def energy_of(self, bits) -> Fraction:
        z = sum(b << i for i, b in enumerate(bits))
        return self.scale * z


@dataclass(frozen=True)
class UsqcPlan:
    """Record of an assembled search network and its penalty hierarchy."""

    penalty_floor: Fraction
    dedlus: tuple[Dedlu, ...]
    medlu: Medlu | None
    bias_budget: Fraction

    @property
    def hierarchy_ok(self) -> bool:
        return self.penalty_floor > self.bias_budget


def attach_dedlu(net: Network, port: str, delta=1) -> Network:
    """Bias a declared output so reading 0 costs delta and reading 1 is free."""
    d = as_energy(delta)
    if d <= 0:
        raise ModelError("delta must be positive")
    if port not in net.outputs:
        raise ModelError(f"port {port!r} is not a declared output")
    var = net.port_map[port]
    unit = Dedlu(var, d)
    term = EnergyTerm((var,), (d, Fraction(0)))
    return net.with_bias_term(term, d, dedlus=net.dedlus + (unit,))


def attach_medlu(net: Network, ports, scale=1) -> Network:
    """Weight ports z_0..z_m with c * 2^i unary biases (total energy c * Z)."""
    c = as_energy(scale)
    if c <= 0:
        raise ModelError("scale must be positive")
    if net.medlu is not None:
        raise ModelError("network already carries a minimization unit")
    ports = list(ports)
    if not ports:
        raise ModelError("minimization unit needs at least one port")
    vars_ = []
    for name in ports:
        if name not in net.port_map:
            raise ModelError(f"unknown port {name!r}")
        vars_.append(net.port_map[name])
    unit = Medlu(tuple(vars_), c)
    out = net
    for i, var in enumerate(vars_):
        weight = c * (1 << i)
        term = EnergyTerm((var,), (Fraction(0), weight))
        records = {"medlu": unit} if i == len(vars_) - 1 else {}
        out = out.with_bias_term(term, weight, **records)
    return out


def assemble_usqc(
    base: Network,
    dedlu_ports=(),
    medlu_ports=(),
    delta=1,
    scale=None,
) -> tuple[UsqcPlan, Network]:
    """Attach decision and minimization units under a checked hierarchy.

    With both kinds of unit present and no explicit scale, c defaults to
    delta / 2^(m+1) so the whole objective range stays below one decision
    penalty.  Raises HierarchyError when the gate penalty cannot dominate
    the requested biases.  With no units this is the identity on `base`.
    """
    dedlu_ports = list(dedlu_ports)
    medlu_ports = list(medlu_ports)
    d = as_energy(delta)
    if scale is not None:
        c = as_energy(scale)
    elif medlu_ports and dedlu_ports:
        c = d / (1 << len(medlu_ports))
    else:
        c = Fraction(1)
    budget = len(dedlu_ports) * d
    if medlu_ports:
        budget += c * ((1 << len(medlu_ports)) - 1)
    if (dedlu_ports or medlu_ports) and not base.penalty_floor > budget:
        raise HierarchyError(
            f"penalty floor {base.penalty_floor} must exceed total bias {budget}; "
            "recompile with a larger penalty or shrink the biases"
        )
    net = base
    for port in dedlu_ports:
        net = attach_dedlu(net, port, d)
    if medlu_ports:
        net = attach_medlu(net, medlu_ports, c)
    plan = UsqcPlan(
        penalty_floor=base.penalty_floor,
        dedlus=net.dedlus,
        medlu=net.medlu,
        bias_budget=net.bias_budget,
    )
    return plan, net
