import json

import numpy as np
import pytest

from eochannel.cir import EO
from eochannel.config import DEFAULTS, from_dict, load_config, normalize
from eochannel.errors import ConfigError, DegenerateInput
from eochannel.experiment import drop_rng, eo_geometries, monte_carlo, run_drop, run_sweep
from eochannel.metrics import compute_pdp


@pytest.fixture(scope="module")
def table_config():
    return load_config(num_drops=50)


class TestConfig:
    def test_defaults_follow_table(self, table_config):
        c = table_config
        assert c.link.carrier_freq == 26e9
        assert c.bin_width == pytest.approx(1 / 600e6)
        np.testing.assert_array_equal(c.link.tx_pos, [0, 0, 1.6])
        np.testing.assert_array_equal(c.link.rx_pos, [0, 26, 1.6])
        assert c.k_eo == 0.5
        assert c.tx.pattern.kind == "directional" and c.tx.pattern.azimuth_hpbw == 8.0
        assert len(c.tx.layout) == 1 and len(c.rx.layout) == 1
        assert (c.eo[0].d_tx, c.eo[0].d_rx) == (6.5, 6.5)

    def test_echo_round_trips(self, table_config):
        echo = table_config.to_dict()
        again = from_dict(json.loads(json.dumps(echo)))
        assert again.to_dict() == echo
        assert normalize(echo) == echo

    def test_partial_override(self):
        c = from_dict({"rx": {"antenna": {"pattern": "isotropic"}}, "k_eo": 0.2})
        assert c.rx.pattern.kind == "isotropic"
        assert c.tx.pattern.kind == "directional"
        assert c.k_eo == 0.2

    def test_explicit_boresight(self):
        c = from_dict({"rx": {"antenna": {"boresight": {"zenith_deg": 90, "azimuth_deg": 180}}}})
        assert c.rx.pattern.boresight.azimuth == pytest.approx(np.pi)

    @pytest.mark.parametrize(
        "bad",
        [
            {"k_eo": 1.5},
            {"eo": [{"d_tx": -1, "d_rx": 2}]},
            {"eo": [{"d_tx": 1, "d_rx": 2, "material": "cheese"}]},
            {"scenario": "rural"},
            {"sweep": {"parameter": "height", "grid": [1]}},
            {"sweep": {"parameter": "k_eo", "grid": []}},
            {"num_drops": 0},
            {"unknown_field": 1},
        ],
    )
    def test_invalid(self, bad):
        with pytest.raises(ConfigError):
            from_dict(bad)

    def test_material_override(self):
        c = from_dict({"materials": {"wall": {"kind": "pec"}}, "eo": [{"d_tx": 3, "d_rx": 3, "material": "wall"}]})
        assert c.material("wall").kind == "pec"

    def test_explicit_plane(self):
        c = from_dict({"eo": [{"plane_point": [-6.5, 0, 0], "plane_normal": [1, 0, 0], "material": "metal"}]})
        assert eo_geometries(c)[0].tau_eo == pytest.approx(eo_geometries(load_config())[0].tau_eo)

    def test_defaults_not_mutated(self):
        before = json.dumps(DEFAULTS, sort_keys=True)
        from_dict({"tx": {"position": [1, 2, 3]}})
        assert json.dumps(DEFAULTS, sort_keys=True) == before

    def test_load_file_and_overrides(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text(json.dumps({"seed": 5, "num_drops": 7}))
        c = load_config(path, seed=9, num_drops=None)
        assert (c.seed, c.num_drops) == (9, 7)

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "c.json"
        path.write_text("{ nope")
        with pytest.raises(ConfigError):
            load_config(path)


class TestRunDrop:
    def test_deterministic(self, table_config):
        a = run_drop(table_config, 3)
        b = run_drop(table_config, 3)
        assert a.sample == b.sample
        assert all(x.coeff.tobytes() == y.coeff.tobytes() for x, y in zip(a.cir.taps, b.cir.taps))

    def test_substreams_differ(self):
        assert drop_rng(1, 0).random() != drop_rng(1, 1).random()
        assert drop_rng(1, 0).random() == drop_rng(1, 0).random()

    def test_single_path_channel(self):
        c = load_config(k_eo=1.0)
        drop = run_drop(c, 0)
        assert drop.sample.rms_ds == 0.0
        assert [t.kind for t in drop.cir.taps] == [EO]

    def test_table_drop_has_reflector_tap_at_97ns(self, table_config):
        drop = run_drop(table_config, 0)
        eo = [t for t in drop.cir.taps if t.kind == EO]
        assert len(eo) == 1
        assert abs(eo[0].delay * 1e9 - 97.0) < 0.5
        assert drop.cir.kind_power(EO) / drop.cir.total_power() == pytest.approx(0.5, abs=1e-9)
        pdp = compute_pdp(drop.cir, table_config.bin_width)
        k = int(eo[0].delay // table_config.bin_width)
        assert pdp.powers[k] >= 0.5 - 1e-12

    def test_no_reflector_needs_k_zero(self):
        with pytest.raises(DegenerateInput):
            run_drop(from_dict({"eo": []}), 0)
        assert run_drop(from_dict({"eo": [], "k_eo": 0.0}), 0).sample.rms_ds > 0

    def test_static_drop_is_time_invariant(self, table_config):
        a = run_drop(table_config, 1, t=0.0)
        b = run_drop(table_config, 1, t=5.0)
        assert all(x.coeff.tobytes() == y.coeff.tobytes() for x, y in zip(a.cir.taps, b.cir.taps))

    def test_moving_terminal_changes_with_time(self):
        c = from_dict({"rx": {"velocity": [0, 10, 0]}})
        a = run_drop(c, 1, t=0.0)
        b = run_drop(c, 1, t=1e-3)
        assert a.cir.taps[0].coeff[0, 0] != b.cir.taps[0].coeff[0, 0]
        assert a.cir.taps[0].power == pytest.approx(b.cir.taps[0].power)


class TestSweep:
    def test_single_value_grid_equals_plain_run(self):
        base = load_config(num_drops=30, k_eo=0.3)
        sweep = from_dict(base.to_dict() | {"sweep": {"parameter": "k_eo", "grid": [0.3]}})
        result = run_sweep(sweep)
        assert result.samples[0.3] == monte_carlo(base)

    def test_workers_do_not_change_results(self):
        c = load_config(num_drops=40, sweep={"parameter": "k_eo", "grid": [0.2, 0.8]})
        serial = run_sweep(c, workers=1)
        parallel = run_sweep(c, workers=3)
        assert serial.samples == parallel.samples

    def test_common_random_numbers(self):
        # at k_eo = 0 the reflector is absent, so d_rx cannot matter
        c = load_config(num_drops=20, k_eo=0.0, sweep={"parameter": "d_rx", "grid": [3.0, 9.0]})
        r = run_sweep(c)
        assert r.samples[3.0] == r.samples[9.0]

    def test_infeasible_value_is_reported(self):
        c = load_config(num_drops=10, sweep={"parameter": "d_rx", "grid": [6.5, 100.0]})
        r = run_sweep(c)
        assert list(r.samples) == [6.5]
        assert 100.0 in r.errors and "exceeds" in r.errors[100.0]

    def test_drx_sweep_needs_offsets(self):
        c = from_dict({"eo": [{"plane_point": [-6.5, 0, 0], "plane_normal": [1, 0, 0]}],
                       "sweep": {"parameter": "d_rx", "grid": [3.0]}})
        with pytest.raises(ConfigError):
            run_sweep(c)

    def test_configured_antennas_option(self):
        omni = monte_carlo(load_config(num_drops=10))
        horn = monte_carlo(load_config(num_drops=10, ds_antennas="configured"))
        assert omni != horn

    def test_keo_trend_small(self):
        c = load_config(num_drops=300, sweep={"parameter": "k_eo", "grid": [0.1, 0.5, 0.9]})
        r = run_sweep(c)
        means = [r.mean_ds(v) for v in r.grid]
        assert means[0] > means[1] > means[2]
