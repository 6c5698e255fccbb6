import math

import numpy as np
import pytest

from icpsk.channel import (
    NoiseModel,
    SimConfig,
    ml_decode,
    mindist_decode,
    simulate,
    simulate_reference,
    transmit,
    wilson_interval,
)
from icpsk.codes import DecodabilityError, parse_code
from icpsk.geometry import Constellation, PskMapping, rotate_mapping
from icpsk.gf2 import BitVec

PTS8 = Constellation(3).points


@pytest.fixture(scope="module")
def pair1(ex1, code1):
    from icpsk.optimizer import priority_cascade

    return code1, PskMapping(priority_cascade(ex1, [code1]).blocks[0][1][0])


class TestNoise:
    def test_snr_convention(self):
        assert NoiseModel.from_snr_db(10).n0 == pytest.approx(0.1)
        assert NoiseModel.from_snr_db(0).sigma == pytest.approx(math.sqrt(0.5))

    def test_positive(self):
        with pytest.raises(ValueError):
            NoiseModel(0.0)

    def test_config(self):
        with pytest.raises(ValueError):
            SimConfig([], 10)
        with pytest.raises(ValueError):
            SimConfig([1.0], 0)
        with pytest.raises(ValueError):
            SimConfig([1.0], 10, decoder="map")


class TestTransmit:
    def test_zero_to_first_point(self, pair1):
        code, M = pair1
        assert np.allclose(transmit(BitVec.zero(5), code, M), [1.0, 0.0])

    def test_encode_then_map(self, pair1):
        code, M = pair1
        got = transmit(BitVec.from_bits("10000"), code, M)
        assert np.allclose(got, PTS8[M.position(0b110)])

    def test_unit_energy(self, pair1):
        code, M = pair1
        for x in range(32):
            assert np.hypot(*transmit(x, code, M)) == pytest.approx(1.0)

    def test_width_mismatch(self, pair1):
        code, M = pair1
        with pytest.raises(ValueError):
            transmit(BitVec.zero(4), code, M)


class TestDecoders:
    def test_ml_near_point(self):
        assert ml_decode(PTS8[0], [0], [4], 1e-3, 8) == 0

    def test_ml_tie(self):
        assert ml_decode((0.0, 0.0), [0], [4], 0.5, 8) == 0
        assert mindist_decode((0.0, 0.0), [0], [4], 8) == 0

    def test_ml_worked_value(self):
        assert ml_decode((0.9, 0.1), [0], [4], 1.0, 8) == 0

    def test_ml_high_snr_no_underflow(self):
        assert ml_decode(PTS8[5] * 0.99, [0, 1], [4, 5], 1e-8, 8) == 1

    def test_mindist_on_one_point(self):
        assert mindist_decode(PTS8[5], [0, 1], [4, 5], 8) == 1

    def test_empty(self):
        with pytest.raises(ValueError):
            ml_decode((0, 0), [], [1], 1.0, 8)
        with pytest.raises(ValueError):
            mindist_decode((0, 0), [0], [], 8)

    def test_singletons_agree(self):
        rng = np.random.default_rng(1)
        for _ in range(300):
            r = rng.normal(size=2)
            a, b = rng.choice(8, 2, replace=False)
            assert ml_decode(r, [a], [b], rng.uniform(0.01, 3), 8) == mindist_decode(r, [a], [b], 8)

    def test_small_noise_limit(self):
        rng = np.random.default_rng(2)
        for _ in range(300):
            r = rng.normal(size=2)
            pts = rng.permutation(8)
            S0, S1 = list(pts[:2]), list(pts[2:4])
            assert ml_decode(r, S0, S1, 1e-6, 8) == mindist_decode(r, S0, S1, 8)


class TestSimulate:
    def test_noiseless(self, ex1, pair1):
        curve = simulate(ex1, *pair1, SimConfig([100.0], 20_000, 3))
        assert all(p.errors == 0 for p in curve.points)

    @pytest.mark.parametrize("decoder", ["ml", "mindist"])
    def test_matches_scalar_reference(self, ex1, pair1, decoder):
        cfg = SimConfig([2.0, 6.0], 1500, 9, decoder)
        assert simulate(ex1, *pair1, cfg) == simulate_reference(ex1, *pair1, cfg)

    def test_reference_third_example(self, ex3, code3):
        M = PskMapping(range(16))
        cfg = SimConfig([8.0], 800, 4, "ml")
        assert simulate(ex3, code3, M, cfg) == simulate_reference(ex3, code3, M, cfg)

    def test_seed_and_threads(self, ex1, pair1):
        a = simulate(ex1, *pair1, SimConfig([4.0, 8.0], 70_000, 5, threads=1))
        b = simulate(ex1, *pair1, SimConfig([4.0, 8.0], 70_000, 5, threads=3))
        c = simulate(ex1, *pair1, SimConfig([4.0, 8.0], 70_000, 6, threads=1))
        assert a.to_csv() == b.to_csv()
        assert a.to_csv() != c.to_csv()

    def test_non_increasing_in_snr(self, ex1, pair1):
        curve = simulate(ex1, *pair1, SimConfig([0, 3, 6, 9, 12], 100_000, 11))
        for i in range(ex1.m):
            pts = curve.receiver(i)
            for lo, hi in zip(pts, pts[1:]):
                assert hi.rate <= lo.rate + 3 * math.hypot(lo.sigma, hi.sigma)

    def test_ml_not_worse(self, ex3, code3):
        M = PskMapping(range(16))
        snrs = [0, 4, 8, 12]
        ml = simulate(ex3, code3, M, SimConfig(snrs, 100_000, 2, "ml"))
        md = simulate(ex3, code3, M, SimConfig(snrs, 100_000, 2, "mindist"))
        for p in ml.points:
            assert p.rate <= md.at(p.receiver, p.snr_db).rate + 3 * p.sigma

    def test_rotation_invariance(self, ex1, pair1):
        code, M = pair1
        a = simulate(ex1, code, M, SimConfig([6.0], 200_000, 1))
        b = simulate(ex1, code, rotate_mapping(M, 3), SimConfig([6.0], 200_000, 2))
        for p, q in zip(a.points, b.points):
            assert abs(p.rate - q.rate) <= 4 * math.hypot(p.sigma, q.sigma)

    def test_undecodable(self, ex1):
        with pytest.raises(DecodabilityError):
            simulate(ex1, parse_code("x1, x2, x3", 5), PskMapping.identity(8), SimConfig([5], 10))

    def test_csv(self, ex1, pair1):
        text = simulate(ex1, *pair1, SimConfig([4, 8], 1000, 0)).to_csv()
        lines = text.splitlines()
        assert lines[0] == "snr_db,receiver,trials,errors,rate,ci_lo,ci_hi"
        assert len(lines) == 1 + 2 * 5
        assert lines[1].startswith("4.0,1,1000,")


class TestWilson:
    def test_brackets(self):
        for e, n in [(0, 10), (3, 10), (10, 10), (57, 10_000)]:
            lo, hi = wilson_interval(e, n)
            assert 0 <= lo <= e / n <= hi <= 1

    def test_zero(self):
        lo, hi = wilson_interval(0, 10**6)
        assert lo == 0 and hi == pytest.approx(3.84e-6, rel=1e-2)
