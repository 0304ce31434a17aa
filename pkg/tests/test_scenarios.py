import pytest
from hypothesis import given, settings, strategies as st

from timepref.engine import SimConfig
from timepref.errors import ConfigError
from timepref.scenarios import (
    PRESETS,
    Scenario,
    load_scenarios,
    parse_config,
    parse_vary,
    serialize_config,
    sweep_scenarios,
)


def test_empty_document_is_default():
    sc = parse_config("")
    assert sc.config == SimConfig()
    assert sc.n_seeds == 1


def test_preset_with_empty_doc():
    sc = parse_config("", preset="fig2")
    assert sc.config.interaction.eps_k == 0.1
    assert sc.config.interaction.eps_c == 0.0


def test_document_preset_key():
    sc = parse_config("preset: fig4\nn_seeds: 10\n")
    assert sc.config.interaction.eps_c == 0.1
    assert sc.seeds() == list(range(10))


def test_grid_has_twelve_cells():
    cells = load_scenarios(preset="fig6-grid")
    assert len(cells) == 12
    assert len({c.name for c in cells}) == 12
    pairs = {(c.config.interaction.eps_k, c.config.interaction.eps_c, c.config.interaction.eps_rho) for c in cells}
    assert (0.0, 0.3, 0.1) in pairs and (0.2, 0.0, 0.0) in pairs
    with pytest.raises(ConfigError, match="12 scenarios"):
        parse_config("", preset="fig6-grid")


def test_every_preset_resolves():
    for name in PRESETS:
        assert load_scenarios(preset=name)


def test_fractions_and_overrides():
    doc = """
name: trial
schedule: {dt: 1/24, t_p: 1/4, t_max: 2}
population: {n_agents: 50}
interaction: {eps_c: 0.3, mode: mixed}
economy: {lambda: 0}
output: {sample_agents: [1, 2]}
"""
    sc = parse_config(doc)
    assert sc.name == "trial"
    assert sc.config.dt == 1 / 24 and sc.config.steps_per_period == 6
    assert sc.config.interaction.mode == "mixed"
    assert sc.config.sample_agents == (1, 2)


@pytest.mark.parametrize(
    "doc,fragment",
    [
        ("colour: red", "colour"),
        ("population: {agents: 5}", "population.agents"),
        ("interaction: {eps_k: 2.0}", "eps_k"),
        ("schedule: {dt: 1/24, t_p: 1/100}", "multiple of dt"),
        ("population: {n_agents: ten}", "n_agents"),
        ("economy: {lambda: 0.01}", "lambda"),
        ("n_seeds: 0", "n_seeds"),
        ("- a\n- b", "mapping"),
        ("a: [", "YAML"),
        ("preset: nope", "unknown preset"),
    ],
)
def test_rejects(doc, fragment):
    with pytest.raises(ConfigError, match=fragment):
        load_scenarios(doc)


def test_all_problems_reported():
    with pytest.raises(ConfigError) as info:
        load_scenarios("population: {n_agents: 1, rho0: -1}\ninteraction: {eps_k: 5}")
    assert len(info.value.violations) >= 3


@settings(max_examples=40, deadline=None)
@given(
    st.integers(2, 5000),
    st.floats(0.01, 2.0),
    st.floats(0.0, 1.0),
    st.floats(0.0, 1.0),
    st.floats(1.0, 2.0),
    st.sampled_from(["fixed", "mixed"]),
    st.sampled_from(["absolute", "event"]),
    st.integers(0, 2**64 - 1),
)
def test_round_trip(n, rho0, ek, ec, bk, mode, clock, seed):
    base = parse_config(
        f"population: {{n_agents: {n}, rho0: {rho0!r}}}\n"
        f"interaction: {{eps_k: {ek!r}, eps_c: {ec!r}, beta_k: {bk!r}, mode: {mode}}}\n"
        f"schedule: {{path_clock: {clock}}}\nbase_seed: {seed}\n"
    )
    again = parse_config(serialize_config(base))
    assert again == base


class TestSweep:
    def test_vary_lookup(self):
        assert parse_vary("eps_c=0.1,0.2") == ("interaction", "eps_c", ["0.1", "0.2"])
        assert parse_vary("schedule.t_max=1") == ("schedule", "t_max", ["1"])

    @pytest.mark.parametrize("bad", ["eps_c", "nope=1", "interaction.nope=1", "eps_c="])
    def test_vary_errors(self, bad):
        with pytest.raises(ConfigError):
            parse_vary(bad)

    def test_product(self):
        base = Scenario("base", SimConfig())
        cells = sweep_scenarios(base, ["eps_c=0.1,0.2,0.3", "eps_rho=0,0.1"])
        assert len(cells) == 6
        assert cells[0].name == "base_eps_c-0.1_eps_rho-0"
        assert {(c.config.interaction.eps_c, c.config.interaction.eps_rho) for c in cells} == {
            (a, b) for a in (0.1, 0.2, 0.3) for b in (0.0, 0.1)
        }

    def test_invalid_value(self):
        with pytest.raises(ConfigError, match="eps_c"):
            sweep_scenarios(Scenario("b", SimConfig()), ["eps_c=0.5,1.5"])
