"""Truth functions: boolean functions given by explicit output tables."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class TruthFunction:
    """A boolean function of `arity` inputs.

    `outputs[i]` is the function value on the input whose bit j equals bit j
    of i (little-endian input indexing, matching energy-table indexing).
    """

    arity: int
    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "outputs", tuple(b & 1 for b in self.outputs))
        if self.arity < 0:
            raise ValueError("arity must be non-negative")
        if len(self.outputs) != 1 << self.arity:
            raise ValueError(
                f"arity {self.arity} needs {1 << self.arity} outputs, got {len(self.outputs)}"
            )

    @classmethod
    def from_callable(cls, arity: int, fn) -> "TruthFunction":
        outs = []
        for i in range(1 << arity):
            bits = tuple((i >> j) & 1 for j in range(arity))
            outs.append(fn(*bits) & 1)
        return cls(arity, tuple(outs))

    def value(self, bits) -> int:
        bits = tuple(bits)
        if len(bits) != self.arity:
            raise ValueError(f"expected {self.arity} inputs, got {len(bits)}")
        idx = 0
        for j, b in enumerate(bits):
            idx |= (b & 1) << j
        return self.outputs[idx]

    def __call__(self, *bits) -> int:
        return self.value(bits)

    def minterms(self) -> list[int]:
        return [i for i, b in enumerate(self.outputs) if b]

    @property
    def is_constant(self) -> bool:
        return len(set(self.outputs)) == 1


NOT = TruthFunction(1, (1, 0))
AND2 = TruthFunction(2, (0, 0, 0, 1))
OR2 = TruthFunction(2, (0, 1, 1, 1))
XOR2 = TruthFunction(2, (0, 1, 1, 0))


def and_n(arity: int) -> TruthFunction:
    return TruthFunction(arity, tuple(int(i == (1 << arity) - 1) for i in range(1 << arity)))


def or_n(arity: int) -> TruthFunction:
    return TruthFunction(arity, tuple(int(i != 0) for i in range(1 << arity)))


def fold_repeated_inputs(fn: TruthFunction, names) -> tuple[TruthFunction, list]:
    """Collapse duplicate input names, restricting the table accordingly.

    Returns the reduced function over the unique names in first-occurrence
    order.  Used when a gate instance ties two of its pins to one net.
    """
    names = list(names)
    if len(names) != fn.arity:
        raise ValueError("name count must match arity")
    unique: list = []
    slot = []
    for n in names:
        if n not in unique:
            unique.append(n)
        slot.append(unique.index(n))
    if len(unique) == len(names):
        return fn, names
    outs = []
    for i in range(1 << len(unique)):
        full = 0
        for j in range(fn.arity):
            full |= ((i >> slot[j]) & 1) << j
        outs.append(fn.outputs[full])
    return TruthFunction(len(unique), tuple(outs)), unique
