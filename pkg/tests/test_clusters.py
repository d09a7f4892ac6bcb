import dataclasses
import math

import numpy as np
import pytest

from eochannel.clusters import (
    ClusterSet,
    ScenarioParams,
    azimuth_scaling,
    draw_lsps,
    generate_clusters,
    load_scenario,
    zenith_scaling,
)
from eochannel.geometry import LinkGeometry
from eochannel.metrics import rms_delay_spread

UMI = load_scenario()
LINK = LinkGeometry([0, 0, 1.6], [0, 26, 1.6], 26e9)


def rng(seed=0):
    return np.random.default_rng(seed)


def test_bundled_scenario():
    assert UMI.num_clusters == 19 and UMI.rays_per_cluster == 20
    assert UMI.delay_scaling == 2.1
    # median DS of roughly 67 ns at 26 GHz
    assert 10**UMI.ds_log_mean == pytest.approx(67e-9, rel=0.01)


def test_unknown_scenario():
    with pytest.raises(KeyError):
        load_scenario("nowhere")


def test_scenario_from_file(tmp_path):
    rec = dataclasses.asdict(UMI) | {"num_clusters": 12}
    path = tmp_path / "s.json"
    path.write_text('{"tiny": %s}' % __import__("json").dumps(rec))
    assert load_scenario("tiny", path).num_clusters == 12


def test_invalid_scenario_params():
    with pytest.raises(ValueError):
        dataclasses.replace(UMI, delay_scaling=1.0)
    with pytest.raises(ValueError):
        dataclasses.replace(UMI, rays_per_cluster=21)
    with pytest.raises(ValueError):
        ScenarioParams.from_dict(dataclasses.asdict(UMI) | {"bogus": 1})


def test_tabulated_scaling_factors():
    assert azimuth_scaling(19) == 1.273
    assert zenith_scaling(19) == 1.184
    assert azimuth_scaling(9) == pytest.approx((1.018 + 1.090) / 2)


class TestLsps:
    def test_degenerate_distribution(self):
        p = dataclasses.replace(UMI, ds_log_std=0.0, asa_log_std=0.0, asd_log_std=0.0, zsa_log_std=0.0, zsd_log_std=0.0)
        lsp = draw_lsps(p, rng())
        assert lsp.ds == 10.0**p.ds_log_mean
        assert lsp.asa == 10.0**p.asa_log_mean
        assert lsp.asd == 10.0**p.asd_log_mean
        assert lsp.zsa == 10.0**p.zsa_log_mean

    def test_deterministic(self):
        assert draw_lsps(UMI, rng(5)) == draw_lsps(UMI, rng(5))

    def test_log_normal_statistics(self):
        g = rng(123)
        logs = np.log10([draw_lsps(UMI, g).ds for _ in range(100_000)])
        assert logs.mean() == pytest.approx(UMI.ds_log_mean, rel=0.01)
        assert logs.std() == pytest.approx(UMI.ds_log_std, rel=0.01)


class TestGenerateClusters:
    def test_invariants(self):
        g = rng(1)
        for _ in range(200):
            cs = generate_clusters(draw_lsps(UMI, g), UMI, g, LINK)
            assert cs.delays[0] == 0.0
            assert np.all(np.diff(cs.delays) >= 0)
            assert math.fsum(cs.powers) == pytest.approx(1.0, abs=1e-12)
            assert cs.phases.shape == (19, 20)
            for az in (cs.aoa, cs.aod):
                assert np.all(az > -np.pi) and np.all(az <= np.pi)
            for zen in (cs.zoa, cs.zod):
                assert np.all(zen >= 0) and np.all(zen <= np.pi)
            assert np.all(cs.phases > -np.pi) and np.all(cs.phases <= np.pi)

    def test_no_shadowing_gives_decreasing_powers(self):
        p = dataclasses.replace(UMI, cluster_shadowing_std=0.0)
        g = rng(2)
        for _ in range(50):
            cs = generate_clusters(draw_lsps(p, g), p, g)
            assert np.all(np.diff(cs.powers) < 0)

    def test_byte_identical(self):
        a = generate_clusters(draw_lsps(UMI, rng(9)), UMI, rng(10), LINK)
        b = generate_clusters(draw_lsps(UMI, rng(9)), UMI, rng(10), LINK)
        for f in dataclasses.fields(ClusterSet):
            assert getattr(a, f.name).tobytes() == getattr(b, f.name).tobytes()

    def test_single_cluster_single_ray(self):
        p = dataclasses.replace(UMI, num_clusters=1, rays_per_cluster=1)
        cs = generate_clusters(draw_lsps(p, rng()), p, rng())
        assert cs.delays.tolist() == [0.0] and cs.powers.tolist() == [1.0]

    def test_angles_centered_on_los(self):
        g = rng(4)
        p = dataclasses.replace(UMI, asa_log_std=0.0, asa_log_mean=0.5)
        mean_dir = np.zeros(2)
        for _ in range(300):
            cs = generate_clusters(draw_lsps(p, g), p, g, LINK)
            mean_dir += np.sum(cs.powers[:, None] * np.stack([np.cos(cs.aoa), np.sin(cs.aoa)], -1).mean(1), 0)
        # Rx sees the Tx toward -y
        assert math.degrees(math.atan2(mean_dir[1], mean_dir[0])) == pytest.approx(-90, abs=3)

    def test_median_ds_tracks_configured_ds(self):
        medians = []
        for ds in (20e-9, 50e-9, 100e-9):
            p = dataclasses.replace(UMI, ds_log_mean=math.log10(ds))
            g = rng(77)
            realized = []
            for _ in range(1000):
                cs = generate_clusters(draw_lsps(p, g), p, g)
                realized.append(rms_delay_spread(cs.delays, cs.powers))
            medians.append(np.median(realized))
        assert medians[0] < medians[1] < medians[2]
