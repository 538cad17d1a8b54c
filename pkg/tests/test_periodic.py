import numpy as np
import pytest

from anuca.analysis import (
    CertificateKind,
    psi_invertibility_check,
    psi_left_inverse_holds,
    replay,
    synthesize_inverse,
    wrap_compatibility,
)
from anuca.analysis.periodic import residue_rule_layers
from anuca.corpus import CENTRE, READ_RIGHT, XOR_LEFT, bounded_singularity_config, ring_box
from anuca.rules import Constant, LocalRule, Patched
from anuca.universe import Box, CellSet

M3 = CellSet.interval(-1, 1)
PLANE = CellSet([(0, 0), (1, 0)])


@pytest.fixture
def rings_1d():
    flip = LocalRule.read(M3, 2, 0, [1, 0], name="flip")
    identity = LocalRule.identity(M3, 2, name="id")
    return bounded_singularity_config(1, (5, 10, 18), (2, 6, 12), flip, identity, 3)


@pytest.fixture
def rings_2d():
    flip = LocalRule.read(PLANE, 2, (0, 0), [1, 0], name="flip")
    identity = LocalRule.identity(PLANE, 2, name="id")
    return bounded_singularity_config(2, (2, 6, 12), (1, 4, 9), flip, identity, 3)


class TestWrapCompatibility:
    def test_constant_always_compatible(self, examples):
        assert wrap_compatibility(examples["shift"], Box.interval(-2, 5))

    def test_ring_box_is_compatible(self, rings_1d):
        K = ring_box((2, 6, 12), (5, 10, 18), 0, 1, 2)
        assert K == Box.interval(-3, 3)
        assert wrap_compatibility(rings_1d, K)

    def test_box_crossing_a_gap(self, rings_1d):
        assert not wrap_compatibility(rings_1d, Box.interval(-1, 1))

    def test_two_dimensional_ring(self, rings_2d):
        assert wrap_compatibility(rings_2d, Box.cube(1, 2))
        assert not wrap_compatibility(rings_2d, Box((0, 0), (1, 1)))

    def test_two_sided_boxes(self, examples):
        s = examples["ex2_s"]
        assert wrap_compatibility(s, Box.interval(0, 0))
        assert not wrap_compatibility(s, Box.interval(0, 2))
        assert not wrap_compatibility(examples["ex3_s"], Box.interval(0, 0))

    def test_custom_window(self, examples):
        s = Patched(READ_RIGHT, {3: CENTRE})
        assert wrap_compatibility(s, Box.interval(0, 1), CellSet.of(0))
        assert not wrap_compatibility(s, Box.interval(0, 1), CellSet.interval(0, 2))


class TestPsi:
    def test_shift_is_a_bijection(self, examples):
        certificate = psi_invertibility_check(examples["shift"], Box.interval(0, 4))
        assert certificate.kind == CertificateKind.PSI_BIJECTION
        assert certificate.payload["entries"] == 32
        assert replay(certificate, examples["shift"])

    def test_xor_collides(self, examples):
        certificate = psi_invertibility_check(examples["xor2"], Box.interval(0, 2))
        assert certificate.kind == CertificateKind.PSI_COLLISION
        assert (certificate.payload["x"], certificate.payload["y"]) == ("000", "111")
        assert replay(certificate, examples["xor2"])

    def test_ring_configurations_are_bijective(self, rings_1d, rings_2d):
        assert psi_invertibility_check(rings_1d, Box.interval(-3, 3)).kind == CertificateKind.PSI_BIJECTION
        assert psi_invertibility_check(rings_2d, Box.cube(1, 2)).kind == CertificateKind.PSI_BIJECTION

    def test_two_dimensional_shift(self):
        shift = Constant(LocalRule.read(PLANE, 2, (1, 0)))
        certificate = psi_invertibility_check(shift, Box.cube(1, 2))
        assert certificate.kind == CertificateKind.PSI_BIJECTION
        inverse = certificate.artifacts["inverse_table"]
        forward = certificate.artifacts["forward_table"]
        assert np.array_equal(inverse[forward], np.arange(2 ** 9))

    def test_tampered_hash_fails_replay(self, examples):
        certificate = psi_invertibility_check(examples["shift"], Box.interval(0, 2))
        certificate.payload["forward_sha256"] = "0" * 64
        assert not replay(certificate, examples["shift"])


class TestLeftInverseLaw:
    def test_involution_on_rings(self, rings_1d, rings_2d):
        # both ring configurations are their own inverse
        K = Box.interval(-3, 3)
        assert wrap_compatibility(rings_1d, K, rings_1d.memory)
        assert psi_left_inverse_holds(rings_1d, rings_1d, K)
        assert psi_left_inverse_holds(rings_2d, rings_2d, Box.cube(1, 2))

    def test_shift_and_inverse(self, examples):
        inverse = Constant(LocalRule.read(M3, 2, -1))
        for K in (Box.interval(0, 0), Box.interval(-2, 3)):
            assert psi_left_inverse_holds(inverse, examples["shift"], K)
        assert not psi_left_inverse_holds(examples["shift"], examples["shift"], Box.interval(0, 3))


def test_residue_layers(examples):
    layers = residue_rule_layers(examples["ex1_s"], Box.interval(0, 0))
    assert [layer[0] for layer in layers] == [READ_RIGHT, XOR_LEFT]
    assert residue_rule_layers(examples["shift"], Box.interval(0, 3)) == [[READ_RIGHT] * 4]


class TestShiftRings:
    def test_one_dimensional(self):
        gap = LocalRule.read(M3, 2, 1, [1, 0], name="flipped")
        s = bounded_singularity_config(1, (5, 10, 18), (2, 6, 12), READ_RIGHT, gap, 3)
        K = ring_box((2, 6, 12), (5, 10, 18), 0, 1, 2)
        assert wrap_compatibility(s, K)
        assert psi_invertibility_check(s, K).kind == CertificateKind.PSI_BIJECTION

        certificate = synthesize_inverse(s, 2)
        assert certificate.kind == CertificateKind.INVERSE_SYNTHESIZED
        assert certificate.payload["memory"] == [[-1]]
        inverse = certificate.artifacts["inverse"]
        assert psi_left_inverse_holds(inverse, s, K)
        assert not psi_left_inverse_holds(s, s, K)

    def test_two_dimensional(self):
        ring = LocalRule.read(PLANE, 2, (1, 0), name="shift")
        gap = LocalRule.read(PLANE, 2, (1, 0), [1, 0], name="flipped")
        s = bounded_singularity_config(2, (2, 6, 12), (1, 4, 9), ring, gap, 3)
        K = ring_box((1, 4, 9), (2, 6, 12), 0, 2, 1)
        assert K.volume <= 20
        assert wrap_compatibility(s, K)
        assert psi_invertibility_check(s, K).kind == CertificateKind.PSI_BIJECTION
