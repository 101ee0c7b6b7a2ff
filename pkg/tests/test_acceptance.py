"""Acceptance suite: one test per criterion, one printed PASS/FAIL line each.

Everything here is exact-arithmetic and oracle-checked: expected values come
from independent brute-force evaluation (clause checking, netlist
evaluation, step-by-step machine simulation), never from the compilation
path under test.
"""

import itertools
import random
import time
from contextlib import contextmanager
from fractions import Fraction

import groundlogic as gl
from util import FLIPPER, TWO_STATE, cnf_inputs_projection, random_cnf


@contextmanager
def criterion(number, name, limit_seconds):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} {name}: FAIL")
        raise
    elapsed = time.perf_counter() - start
    assert elapsed < limit_seconds, f"{name} took {elapsed:.2f}s (limit {limit_seconds}s)"
    print(f"ACCEPTANCE {number} {name}: PASS ({elapsed:.2f}s < {limit_seconds}s)")


def test_criterion_1_edc_suite():
    with criterion(1, "edc-suite", 1.0):
        inverter = gl.synthesize_gadget(gl.NOT, 1)
        assert gl.check_edc(inverter).is_edc

        physical = gl.make_physical_and(0, 0, 0, -1, 2)
        assert not gl.check_edc(physical).is_edc

        sym = gl.symmetrize(physical)
        rep = gl.check_edc(sym)
        assert rep.is_edc
        per_pattern = gl.per_input_grounds(physical)
        assert sum(per_pattern) == Fraction(-1)
        assert set(rep.per_input_ground.values()) == {Fraction(-1)}


def test_criterion_2_universal_gate_check():
    with criterion(2, "universal-gates", 5.0):
        penalty = 1
        for bits in itertools.product((0, 1), repeat=4):
            fn = gl.TruthFunction(2, bits)
            g = gl.synthesize_gadget(fn, penalty)
            rep = gl.check_implements(g, fn)
            assert rep.implements and rep.logical_gap == penalty
            sym = gl.symmetrize(g)
            assert gl.check_implements(sym, fn).implements
            assert gl.check_edc(sym).is_edc


def test_criterion_3_sat_oracle_equivalence():
    """DEDLU-lifted network ground states project onto the inputs exactly as
    the brute-force satisfying set; unsatisfiable instances show up as the
    whole input space lifted by delta."""
    with criterion(3, "sat-oracle-equivalence", 300.0):
        rng = random.Random(301)
        sizes = [8, 9, 10, 11, 12] * 10  # 50 instances
        for k, n in enumerate(sizes):
            m = min(30, int(2.5 * n))
            cnf = random_cnf(rng, n=n, m=m)
            net = gl.attach_dedlu(
                gl.compile_netlist(gl.encode_cnf(cnf), penalty=2), "sat", 1
            )
            energy, states = net.ground_states()
            oracle = set(gl.brute_force_satisfying_set(cnf))
            if oracle:
                assert energy == 0, f"instance {k}"
                assert cnf_inputs_projection(net, states, n) == oracle, f"instance {k}"
            else:
                assert energy == 1, f"instance {k}"
                assert len(states) == 1 << n, f"instance {k}"


def test_criterion_4_ground_history_bijection():
    with criterion(4, "ground-history-bijection", 120.0):
        for dtm, p, start in ((FLIPPER, 4, 1), (TWO_STATE, 3, 2)):
            lattice = gl.build_lattice(dtm, p, start)
            energy, states = lattice.network.ground_states()
            assert len(states) == 1 << p
            assert gl.verify_ground_histories(lattice)

        # a single corrupted truth-table row breaks the bijection
        f = gl.build_sfsc_function(FLIPPER)
        bad = f.with_entry(0, 0, FLIPPER.code("q"), (0, 0, FLIPPER.code("q")))
        broken = gl.build_lattice(FLIPPER, 3, 1, function=bad)
        assert not gl.verify_ground_histories(broken)


def test_criterion_5_element_accounting():
    with criterion(5, "element-accounting", 5.0):
        for dtm, p in ((FLIPPER, 3), (TWO_STATE, 3), (FLIPPER, 4)):
            c = gl.build_lattice(dtm, p, 1).complexity
            assert c.sfsc_elements == c.m_per_sfsc * p * p
            assert c.registers == (p + 1) * p
            assert c.total == c.sfsc_elements + c.registers
            assert c.bound == (c.m_per_sfsc + 1) * p * p
            assert c.within_bound and c.total <= c.bound + p


def test_criterion_6_medlu_minimization():
    with criterion(6, "medlu-minimization", 10.0):
        def cost(x0, x1, x2):
            return ((3 * x0 + 5 * x1 + 6 * x2 - 7) ** 2) % 13

        bits = {
            f"z{i}": gl.TruthFunction.from_callable(
                3, lambda a, b, c, i=i: (cost(a, b, c) >> i) & 1
            )
            for i in range(4)
        }
        nl = gl.netlist_from_bit_functions(["x0", "x1", "x2"], bits)
        net = gl.attach_medlu(gl.compile_netlist(nl, penalty=16), [f"z{i}" for i in range(4)], 1)

        # term-by-term weighting: 2^i on z_i, so pattern 101 costs 5c
        tables = [t.table for t in net.model.terms[-4:]]
        assert tables == [(0, 1), (0, 2), (0, 4), (0, 8)]
        assert gl.Medlu((0, 1, 2), Fraction(1)).energy_of((1, 0, 1)) == 5

        energy, states = net.ground_states()
        costs = {x: cost(x & 1, (x >> 1) & 1, (x >> 2) & 1) for x in range(8)}
        best = min(costs.values())
        argmin = {x for x, c in costs.items() if c == best}
        got = {
            sum(a[net.port_map[f"x{i}"]] << i for i in range(3)) for a in states
        }
        assert energy == best
        assert got == argmin


def test_criterion_7_annealer_soundness():
    with criterion(7, "annealer-soundness", 120.0):
        instances = []
        for length in (4, 6, 8, 10):
            chain = gl.make_wire_chain(length)
            e0, _ = gl.enumerate_ground_states(chain.fragment)
            instances.append((f"chain{length}", chain.fragment, e0))
        for n, m in ((6, 13), (8, 16), (10, 16)):
            cnf = random_cnf(random.Random(n * 100 + m), n, m)
            net = gl.attach_dedlu(
                gl.compile_netlist(gl.encode_cnf(cnf), penalty=2), "sat", 1
            )
            e0, _ = net.ground_states()
            instances.append((f"sat{n}", net.model, e0))

        runs = 0
        for name, model, e0 in instances:
            hit = False
            for seed in range(15):
                sched = gl.AnnealSchedule(
                    t_start=4.0, t_end=0.05, sweeps=300, restarts=5, seed=seed
                )
                result = gl.metropolis_anneal(model, sched, target=e0)
                runs += 1
                assert result.best_energy >= e0, f"{name} seed {seed} went below ground"
                hit = hit or result.success
            assert hit, f"easy instance {name} never reached its ground energy"
        assert runs >= 100

        # same-seed determinism, byte-exact
        name, model, e0 = instances[-1]
        sched = gl.AnnealSchedule(t_start=4.0, t_end=0.05, sweeps=300, restarts=5, seed=3)
        a = gl.metropolis_anneal(model, sched, target=e0)
        b = gl.metropolis_anneal(model, sched, target=e0)
        assert a == b and repr(a) == repr(b)


def test_criterion_8_relaxation_scan_csv():
    # the closing slow-relaxation remark is a conjecture: the scan only has
    # to emit well-formed data, no scaling target is asserted
    with criterion(8, "relaxation-scan-csv", 600.0):
        rng = random.Random(801)
        instances = []
        ids = []
        for n in (6, 8, 10, 12, 14):
            m = int(4.2 * n)
            cnf = random_cnf(rng, n=n, m=m)
            net = gl.attach_dedlu(
                gl.compile_netlist(gl.encode_cnf(cnf), penalty=2), "sat", 1
            )
            e0, _ = net.ground_states()
            instances.append((net.model, e0))
            ids.append(f"cnf_n{n}")
        sched = gl.AnnealSchedule(t_start=4.0, t_end=0.05, sweeps=200, restarts=5, seed=88)
        stats = gl.relaxation_scan(instances, sched, ids=ids)
        csv_text = gl.stats_to_csv(stats)
        lines = csv_text.strip().split("\n")
        assert lines[0] == "instance,n,restarts,successes,success_rate,median_first_hit_sweep"
        assert len(lines) == 6
        for line, (expected_id, n) in zip(lines[1:], zip(ids, (6, 8, 10, 12, 14))):
            fields = line.split(",")
            assert fields[0] == expected_id
            assert int(fields[2]) == 5
            assert 0.0 <= float(fields[4]) <= 1.0
