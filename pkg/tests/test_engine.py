"""
Tests for the pool-based F engine on the hand-checked fixtures.
"""

import re
import unittest
import sys
import os

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from conic_farkas.cone import ConeSpec, contains
from conic_farkas.engine import (
    Feasible, Infeasible, MinimalPool, certificate_check, eval_pool, eval_spec, init,
    lsm_pool, pool_feasible, run, step, unique_columns
)
from conic_farkas.errors import InstanceError
from conic_farkas.model import Instance, VarSign, enumerate_rhs, split_free_variables
from tests.corpus import load_fixture

TRACE_LINE = re.compile(r"^k=\d+ \|C\|=\d+ \|B\|=\d+ solved=\d+/\d+ elapsed_ms=\d+$")


def pool_of(k, *elements):
    return MinimalPool(k, tuple(sorted(elements)), {})


class TestI1(unittest.TestCase):
    """m=2, n=1, K = R^2_+, a = (1, -1): feasible iff beta1 >= 0 and beta1 + beta2 >= 0."""

    def setUp(self):
        parsed = load_fixture("i1.json")
        self.inst = parsed.instance
        self.cone = self.inst.cone
        self.box = enumerate_rhs(parsed.rhs)

    def test_init(self):
        state = init(self.inst, [(2, 1), (5, -3), (0, 0)])
        self.assertEqual(state.table.verdict((2, 1)), 0)
        self.assertEqual(state.table.verdict((5, -3)), -1)
        self.assertEqual(state.table.verdict((0, 0)), 0)
        self.assertEqual(state.pool.elements, ((0, 0),))
        self.assertEqual(state.k, 0)
        self.assertEqual(state.table.first_feasible_k[(0, 0)], 0)

    def test_pool_feasible(self):
        self.assertEqual(pool_feasible(pool_of(0, (0, 0)), (2, 1), self.cone), 0)
        b1 = pool_of(1, (0, 0), (1, -1))
        self.assertEqual(pool_feasible(b1, (3, -1), self.cone), 0)
        self.assertEqual(pool_feasible(b1, (3, -2), self.cone), -1)

    def test_lsm_pool(self):
        state = init(self.inst, self.box)
        self.assertEqual(lsm_pool(state), ((0, 0), (1, -1)))
        state = step(state)
        self.assertEqual(lsm_pool(state), ((0, 0), (1, -1), (2, -2)))

    def test_eval_spec(self):
        columns = [a for _, a in unique_columns(self.inst)]
        b0 = pool_of(0, (0, 0))
        self.assertEqual(eval_spec((1, -1), b0, columns, self.cone), 0)
        self.assertEqual(eval_spec((0, 0), b0, columns, self.cone), 0)
        b2 = pool_of(2, (0, 0), (1, -1), (2, -2))
        self.assertEqual(eval_spec((2, -3), b2, columns, self.cone), -1)

    def test_eval_pool(self):
        b1 = pool_of(1, (0, 0), (1, -1))
        self.assertEqual(eval_pool((4, 0), b1, self.cone), 0)
        # (1,-1) is not <= (2,-2) under the orthant: x = 2 is needed
        self.assertEqual(eval_pool((2, -2), b1, self.cone), -1)
        self.assertEqual(eval_pool((0, -1), b1, self.cone), -1)
        self.assertEqual(eval_pool((2, -2), pool_of(2, (0, 0), (1, -1), (2, -2)), self.cone), 0)

    def test_step_to_one(self):
        state = step(init(self.inst, self.box))
        self.assertEqual(state.pool.elements, ((0, 0), (1, -1)))
        for beta in self.box:
            expected = 0 if contains(self.cone, beta) or (beta[0] >= 1 and beta[1] >= -1) else -1
            self.assertEqual(state.table.verdict(beta), expected, beta)
        for beta in [(1, -1), (2, -1), (5, -1)]:
            self.assertEqual(state.table.first_feasible_k[beta], 1)

    def test_step_to_three(self):
        state = run(self.inst, self.box, 2)
        self.assertEqual(state.table.verdict((5, -3)), -1)
        state = step(state)
        self.assertEqual(state.table.verdict((5, -3)), 0)
        self.assertEqual(state.table.first_feasible_k[(5, -3)], 3)

    def test_pool_witnesses(self):
        state = run(self.inst, self.box, 4)
        self.assertEqual(state.pool.elements, tuple((x, -x) for x in range(5)))
        for bbar in state.pool.elements:
            witness = state.pool.witnesses[bbar]
            self.assertEqual(self.inst.apply(witness), bbar)
            self.assertLessEqual(sum(witness), 4)

    def test_run_converged(self):
        state = run(self.inst, self.box, 5)
        feasible = set(state.table.feasible)
        self.assertEqual(feasible, {b for b in self.box if b[0] >= 0 and b[0] + b[1] >= 0})
        self.assertEqual(len(feasible), 21)
        self.assertEqual(state.table.first_feasible_k[(5, -3)], 3)
        self.assertIsNone(state.table.first_feasible_k[(2, -3)])
        self.assertTrue(state.pool.is_antichain(self.cone))
        self.assertEqual(len(state.trace), 6)
        for record in state.trace:
            self.assertRegex(record.line, TRACE_LINE)

    def test_run_zero(self):
        state = run(self.inst, self.box, 0)
        for beta in self.box:
            self.assertEqual(state.table.verdict(beta) == 0, contains(self.cone, beta))

    def test_run_rejects_negative(self):
        with self.assertRaises(ValueError):
            run(self.inst, self.box, -1)

    def test_threads_match_inline(self):
        inline = run(self.inst, self.box, 5)
        threaded = run(self.inst, self.box, 5, threads=4)
        self.assertEqual(inline.table.verdicts, threaded.table.verdicts)
        self.assertEqual(inline.pool.elements, threaded.pool.elements)
        self.assertEqual(inline.table.first_feasible_k, threaded.table.first_feasible_k)

    def test_certificate_check(self):
        state = run(self.inst, self.box, 5)
        branch = certificate_check(self.inst, state, (2, -3))
        self.assertIsInstance(branch, Infeasible)
        self.assertEqual(branch.column_checks, (True,))
        self.assertEqual(branch.alternative, "nonneg")
        self.assertEqual(branch.pool, state.pool.elements)
        branch = certificate_check(self.inst, state, (5, -3))
        self.assertIsInstance(branch, Feasible)
        self.assertEqual(branch.witness, (3,))
        self.assertEqual(certificate_check(self.inst, state, (0, 0)).witness, (0,))

    def test_certificate_check_from_pool_witness(self):
        state = run(self.inst, self.box, 5)
        branch = certificate_check(self.inst, state, (5, -3), reextract=False)
        self.assertIsInstance(branch, Feasible)
        self.assertTrue(contains(self.cone, (5 - branch.witness[0], -3 + branch.witness[0])))

    def test_certificate_check_steps_past_zero(self):
        state = run(self.inst, [(0, 0), (3, 1)], 0)
        self.assertIsInstance(certificate_check(self.inst, state, (0, 0)), Feasible)
        self.assertIsInstance(certificate_check(self.inst, state, (-1, 0)), Infeasible)


class TestI2(unittest.TestCase):
    """Second-order cone t >= |x|, a = (1, -3)."""

    def setUp(self):
        parsed = load_fixture("i2.json")
        self.inst = parsed.instance
        self.rhs = enumerate_rhs(parsed.rhs)

    def test_flip_at_three(self):
        state = run(self.inst, self.rhs, 2)
        self.assertEqual(state.table.verdict((4, -5)), -1)
        state = step(state)
        self.assertEqual(state.table.verdict((4, -5)), 0)
        self.assertEqual(state.table.first_feasible_k[(4, -5)], 3)

    def test_feasible_certificate(self):
        state = run(self.inst, self.rhs, 3)
        self.assertEqual(certificate_check(self.inst, state, (4, -5)).witness, (3,))


class TestDegenerateColumns(unittest.TestCase):

    def test_duplicate_columns_deduplicated(self):
        inst = Instance(A=((1, 1), (-1, -1)), cone=ConeSpec.orthant(2),
                        var_signs=(VarSign.NONNEG, VarSign.NONNEG))
        single = Instance(A=((1,), (-1,)), cone=ConeSpec.orthant(2), var_signs=(VarSign.NONNEG,))
        self.assertEqual(unique_columns(inst), ((0, (1, -1)),))
        box = [(a, b) for a in range(0, 4) for b in range(-3, 1)]
        self.assertEqual(run(inst, box, 3).table.verdicts, run(single, box, 3).table.verdicts)

    def test_zero_column(self):
        inst = Instance(A=((0, 1), (0, -1)), cone=ConeSpec.orthant(2),
                        var_signs=(VarSign.NONNEG, VarSign.NONNEG))
        state = init(inst, [(0, 0)])
        self.assertEqual(lsm_pool(state), ((0, 0), (1, -1)))
        state = run(inst, [(2, -2), (1, -2)], 3)
        self.assertEqual(state.table.verdicts, {(2, -2): 0, (1, -2): -1})


class TestFreeVariables(unittest.TestCase):

    def setUp(self):
        parsed = load_fixture("free.json")
        self.original = parsed.instance
        self.inst = split_free_variables(parsed.instance)
        self.box = enumerate_rhs(parsed.rhs)

    def test_engine_needs_split(self):
        with self.assertRaises(InstanceError):
            init(self.original, self.box)

    def test_interval_feasibility(self):
        state = run(self.inst, self.box, 2)
        self.assertEqual(set(state.table.feasible), {b for b in self.box if b[0] + b[1] >= 0})
        self.assertEqual(state.table.first_feasible_k[(-2, 2)], 2)

    def test_free_alternative(self):
        state = run(self.inst, self.box, 2)
        branch = certificate_check(self.inst, state, (-2, 1))
        self.assertIsInstance(branch, Infeasible)
        self.assertEqual(branch.alternative, "free")
        self.assertEqual(branch.column_checks, (True, True))
        feasible = certificate_check(self.inst, state, (-2, 2))
        self.assertEqual(self.inst.to_original(feasible.witness), (-2,))


if __name__ == '__main__':
    unittest.main()
