"""
Tests for dual certificates and the stopping bound.
"""

import unittest
import sys
import os
import random
from fractions import Fraction

sys.path.insert(0, os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from conic_farkas.bound import (
    DualCertificate, DualLPStatus, compute_kbar, solve_dual_lp, verify_certificate
)
from conic_farkas.cone import ConeSpec
from conic_farkas.errors import DimensionError
from conic_farkas.model import Instance, VarSign, enumerate_rhs
from tests.corpus import load_fixture, orthant_dual_feasible, random_instance


class TestVerifyCertificate(unittest.TestCase):

    def test_I1(self):
        inst = load_fixture("i1.json").instance
        self.assertTrue(verify_certificate(inst, [1, 0]))
        self.assertTrue(verify_certificate(inst, [2, 1]))
        self.assertFalse(verify_certificate(inst, [0, 0]))
        # A^T u = 1 but u leaves the orthant
        self.assertFalse(verify_certificate(inst, [0, -1]))

    def test_I2_rejects(self):
        inst = load_fixture("i2.json").instance
        self.assertFalse(verify_certificate(inst, [-1, 2]))

    def test_psd_user_certificate(self):
        inst = load_fixture("psd.json").instance
        self.assertTrue(verify_certificate(inst, [1, 0, 0]))
        self.assertFalse(verify_certificate(inst, [Fraction(1, 2), 0, 0]))

    def test_length_mismatch(self):
        inst = load_fixture("i1.json").instance
        with self.assertRaises(DimensionError):
            verify_certificate(inst, [1])


class TestComputeKbar(unittest.TestCase):

    def test_I1_box(self):
        parsed = load_fixture("i1.json")
        self.assertEqual(compute_kbar(DualCertificate.of([1, 0]), enumerate_rhs(parsed.rhs)), 5)

    def test_clamped_at_zero(self):
        u = DualCertificate.of([1, 0])
        self.assertEqual(compute_kbar(u, [(-3, 0)]), 0)
        self.assertEqual(compute_kbar(u, [(0, 0)]), 0)
        self.assertEqual(compute_kbar(u, []), 0)

    def test_rounds_up(self):
        u = DualCertificate.of([Fraction(1, 3), 0])
        self.assertEqual(compute_kbar(u, [(4, 0)]), 2)

    def test_psd_fixture(self):
        parsed = load_fixture("psd.json")
        u = DualCertificate.of(parsed.options.dual_cert)
        self.assertEqual(compute_kbar(u, enumerate_rhs(parsed.rhs)), 5)


class TestSolveDualLP(unittest.TestCase):

    def test_I1(self):
        outcome = solve_dual_lp(load_fixture("i1.json").instance)
        self.assertIs(outcome.status, DualLPStatus.CERTIFIED)
        self.assertEqual(outcome.certificate.u, (1, 0))

    def test_polyhedral_fixture(self):
        parsed = load_fixture("polyhedral.json")
        outcome = solve_dual_lp(parsed.instance)
        self.assertIs(outcome.status, DualLPStatus.CERTIFIED)
        self.assertTrue(verify_certificate(parsed.instance, outcome.certificate.u))
        self.assertEqual(compute_kbar(outcome.certificate, enumerate_rhs(parsed.rhs)), 3)

    def test_second_order_unsupported(self):
        outcome = solve_dual_lp(load_fixture("i2.json").instance)
        self.assertIs(outcome.status, DualLPStatus.UNSUPPORTED_CONE)
        self.assertIsNone(outcome.certificate)

    def test_zero_column_has_no_certificate(self):
        inst = Instance(A=((0, 1), (0, 0)), cone=ConeSpec.orthant(2),
                        var_signs=(VarSign.NONNEG, VarSign.NONNEG))
        self.assertIs(solve_dual_lp(inst).status, DualLPStatus.NO_CERTIFICATE)

    def test_recession_direction_has_no_certificate(self):
        # x = 1 gives Ax = (-1, 0) <= 0, so x can grow without bound
        inst = Instance(A=((-1,), (0,)), cone=ConeSpec.orthant(2), var_signs=(VarSign.NONNEG,))
        self.assertIs(solve_dual_lp(inst).status, DualLPStatus.NO_CERTIFICATE)

    def test_certificates_verify_and_match_vertex_enumeration(self):
        rng = random.Random(31)
        certified = 0
        for _ in range(60):
            m = rng.randint(1, 3)
            inst = random_instance(rng, m=m, cone=ConeSpec.orthant(m))
            outcome = solve_dual_lp(inst)
            self.assertEqual(outcome.status is DualLPStatus.CERTIFIED, orthant_dual_feasible(inst),
                             inst.A)
            if outcome.status is DualLPStatus.CERTIFIED:
                certified += 1
                self.assertTrue(verify_certificate(inst, outcome.certificate.u))
        self.assertGreater(certified, 0)

    def test_polyhedral_certificates_verify(self):
        rng = random.Random(37)
        for _ in range(40):
            inst = random_instance(rng)
            if not inst.cone.polyhedral_only:
                continue
            outcome = solve_dual_lp(inst)
            if outcome.status is DualLPStatus.CERTIFIED:
                self.assertTrue(verify_certificate(inst, outcome.certificate.u))


if __name__ == '__main__':
    unittest.main()
