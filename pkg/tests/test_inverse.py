import numpy as np
import pytest

from anuca.analysis import (
    CertificateKind,
    collision_search,
    invertibility_check,
    min_determining_radius,
    replay,
    stable_injectivity_check,
    stable_reversibility_check,
    surjectivity_deficit,
    synthesize_inverse,
    verify_left_inverse,
)
from anuca.analysis.pair_automaton import constant_injectivity_1d
from anuca.corpus import M3, READ_LEFT, READ_RIGHT
from anuca.engine import Pattern, apply_window
from anuca.exceptions import CapExceededException
from anuca.rules import Constant, LocalRule, Patched, TwoSided1D
from anuca.rules.rule_file import from_dict
from anuca.universe import CellSet, minkowski


class TestDeterminingRadius:
    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_ex2_radius_grows_with_distance(self, examples, n):
        # x(n) = y(n) + y(n-1) + ... + y(0) for n >= 1
        assert min_determining_radius(examples["ex2_s"], n, 5) == n

    @pytest.mark.parametrize("n", [-3, -1])
    def test_ex2_left_half_is_copied(self, examples, n):
        assert min_determining_radius(examples["ex2_s"], n, 5) == 0

    @pytest.mark.parametrize("n, radius", [(-4, 1), (1, 1), (2, 2), (3, 3)])
    def test_ex1(self, examples, n, radius):
        assert min_determining_radius(examples["ex1_s"], n, 5) == radius

    def test_not_found(self, examples):
        assert min_determining_radius(examples["ex2_s"], 4, 2) is None

    @pytest.mark.parametrize("n", range(3, 9))
    def test_radius_tracks_distance_from_cut(self, examples, n):
        assert min_determining_radius(examples["ex2_s"], n, 10) == n
        radius = min_determining_radius(examples["ex1_s"], n, 10)
        assert radius is not None and radius > n - 2

    def test_ex2_alternating_sum(self, examples, rng):
        s = examples["ex2_s"]
        for _ in range(100):
            E = CellSet.interval(-int(rng.integers(0, 6)), int(rng.integers(1, 9)))
            support = minkowski(E, s.memory)
            pattern = Pattern(support, rng.integers(0, 2, size=len(support)))
            x, y = pattern.as_dict(), apply_window(s, E, pattern).as_dict()
            for (n,) in E.cells:
                if n <= 0:
                    assert x[(n,)] == y[(n,)]
                else:
                    assert x[(n,)] == sum(y[(i,)] for i in range(0, n + 1)) % 2

    def test_cap_partial(self, examples):
        with pytest.raises(CapExceededException) as ex:
            min_determining_radius(examples["ex2_s"], 6, 6, cap=256)
        assert ex.value.partial["cell"] == [6]


class TestSynthesizeInverse:
    @pytest.mark.parametrize("name, memory", [("shift", [[-1]]), ("identity", [[0]]), ("ex1_p", [[-1]]),
                                              ("ex3_q", [[1]])])
    def test_constant_inverses(self, examples, name, memory):
        certificate = synthesize_inverse(examples[name], 3)
        assert certificate.kind == CertificateKind.INVERSE_SYNTHESIZED
        assert certificate.payload["memory"] == memory
        assert replay(certificate, examples[name])

    def test_shift_inverse_reads_left(self, examples):
        inverse = synthesize_inverse(examples["shift"], 2).artifacts["inverse"]
        assert inverse == Constant(LocalRule.read(CellSet.of(-1), 2, -1))

    def test_ex3(self, examples):
        s = examples["ex3_s"]
        certificate = synthesize_inverse(s, 3)
        assert certificate.payload["radius"] == 1
        assert certificate.payload["memory"] == [[-1], [0], [1]]
        inverse = certificate.artifacts["inverse"]
        assert isinstance(inverse, TwoSided1D)
        assert verify_left_inverse(inverse, s)
        assert from_dict(certificate.payload["inverse"]) == inverse

    @pytest.mark.parametrize("name", ["ex1_s", "ex2_s"])
    def test_inconclusive_without_finite_inverse(self, examples, name):
        certificate = synthesize_inverse(examples[name], 3)
        assert certificate.is_inconclusive
        assert certificate.payload == {"check": "inverse", "bound": 3}

    def test_patched_permutation(self):
        memory = CellSet.interval(-1, 1)
        flipped_shift = LocalRule.read(memory, 2, 1, [1, 0])
        s = Patched(LocalRule.read(memory, 2, 1), {0: flipped_shift, 3: flipped_shift})
        certificate = synthesize_inverse(s, 2)
        assert certificate.kind == CertificateKind.INVERSE_SYNTHESIZED
        assert certificate.payload["memory"] == [[-1]]
        assert verify_left_inverse(certificate.artifacts["inverse"], s, trials=50)

    def test_tampered_inverse_fails_replay(self, examples):
        certificate = synthesize_inverse(examples["shift"], 2)
        certificate.payload["inverse"]["rules"] = {name: "01" for name in certificate.payload["inverse"]["rules"]}
        certificate.payload["inverse"]["memory"] = [[1]]
        assert not replay(certificate, examples["shift"])


class TestInvertibility:
    def test_ex3_is_only_left_invertible(self, examples):
        certificate = invertibility_check(examples["ex3_s"], 3)
        assert certificate.kind == CertificateKind.INVERSE_SYNTHESIZED
        assert certificate.payload["two_sided"] is False
        assert replay(certificate, examples["ex3_s"])

    def test_shift_is_invertible(self, examples):
        certificate = invertibility_check(examples["shift"], 2)
        assert certificate.payload["two_sided"] is True

    def test_inconclusive(self, examples):
        assert invertibility_check(examples["ex1_s"], 2).payload == {"check": "invertibility", "bound": 2}


class TestVerifyLeftInverse:
    def test_shifts_cancel(self):
        assert verify_left_inverse(Constant(READ_LEFT), Constant(READ_RIGHT))

    def test_wrong_inverse(self):
        assert not verify_left_inverse(Constant(READ_RIGHT), Constant(READ_RIGHT))

    def test_seeded(self, examples):
        s = examples["ex3_s"]
        inverse = synthesize_inverse(s, 2).artifacts["inverse"]
        assert verify_left_inverse(s, inverse, seed=7) == verify_left_inverse(s, inverse, seed=7)


class TestStableReversibility:
    def test_ex3_with_synthesized_inverse(self, examples):
        s = examples["ex3_s"]
        inverse = synthesize_inverse(s, 2).artifacts["inverse"]
        report = stable_reversibility_check(inverse, s)
        assert report.verdict == "verified"
        assert [r.label for r in report.results] == ["s", "limit[0]", "limit[1]"]

    def test_refuted_when_a_limit_fails(self, examples):
        s = examples["ex3_s"]
        candidate = TwoSided1D(LocalRule.read(s.memory, 2, -1), LocalRule.read(s.memory, 2, -1), 0)
        report = stable_reversibility_check(candidate, s)
        assert report.verdict == "refuted"
        assert report.results[-1].value is False

    def test_constant(self, examples):
        report = stable_reversibility_check(Constant(READ_LEFT), examples["shift"])
        assert report.verdict == "verified"
        assert len(report.results) == 1


class TestPatchedInjectiveReads:
    """Patched configurations over Z built from injective constant rules."""

    @pytest.fixture
    def injective_reads(self):
        rules = [LocalRule.read(M3, 2, offset, permutation) for offset in (-1, 0, 1) for permutation in ([0, 1], [1, 0])]
        for rule in rules:
            assert constant_injectivity_1d(rule).injective
        return rules

    def _draw(self, rng, rules):
        background = rules[int(rng.integers(len(rules)))]
        same_offset = [r for r in rules if r.essential_offsets() == background.essential_offsets()]
        patch = {}
        for cell in rng.choice(np.arange(-3, 4), size=int(rng.integers(1, 4)), replace=False):
            pool = same_offset if rng.random() < 0.5 else rules
            patch[int(cell)] = pool[int(rng.integers(len(pool)))]
        return Patched(background, patch)

    def test_collision_free_configurations(self, injective_reads):
        rng = np.random.default_rng(12)
        kept = []
        for _ in range(500):
            s = self._draw(rng, injective_reads)
            if collision_search(s, 4).is_inconclusive:
                kept.append(s)
            if len(kept) == 20:
                break
        assert len(kept) == 20
        for s in kept:
            assert surjectivity_deficit(s, 5).is_inconclusive, s.describe()
            if not stable_injectivity_check(s, 4).refuted:
                certificate = synthesize_inverse(s, 3)
                assert certificate.kind == CertificateKind.INVERSE_SYNTHESIZED, s.describe()
                assert replay(certificate, s)
