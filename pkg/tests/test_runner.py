import json
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from qdt.config import OUTPUT_CONFIG
from qdt.errors import ConsistencyError, ScenarioError
from qdt.runner import collect, output_path, run, sweep
from qdt.scenario_file import parse_scenario, validate_scenario

SCENARIOS = Path(__file__).parent.parent / 'scenarios'


def _load(name):
    return parse_scenario(SCENARIOS / name)


def _network_document(horizon=200, memory='long-term'):
    return {
        'kind': 'network',
        'network': {
            'N': 2, 'J': 1.0, 'tau': 1, 'memory': memory, 'horizon': horizon,
            'agents': [{'f': [0.4, 0.6], 'q0': [0.3, -0.3]}, {'f': [0.6, 0.4], 'q0': [-0.2, 0.2]}],
        },
    }


def test_planning_run_writes_outputs(tmp_path):
    report = run(_load('planning.json'), tmp_path)
    assert report.exit_status == 0
    assert sorted(Path(p).name for p in report.outputs) == ['summary.json', 'trajectory.csv']
    table = report.summary['tables'][0]
    assert table['p']['B1'] == pytest.approx(0.35)
    assert table['p']['B2'] == pytest.approx(0.65)
    frame = pd.read_csv(tmp_path / 'trajectory.csv')
    assert list(frame.columns) == ['t', 'alternative', 'f', 'q', 'p']
    saved = json.loads((tmp_path / 'summary.json').read_text(encoding='utf-8'))
    assert saved['kind'] == 'paradox'


def test_infeasible_paradox_fails():
    scenario = validate_scenario({'kind': 'paradox', 'paradox': {'name': 'planning', 'inputs': {'p_a1': 0.25}}})
    with pytest.raises(ConsistencyError) as excinfo:
        collect(scenario)
    assert excinfo.value.exit_code == 3


def test_single_decision_decomposition():
    result = collect(_load('single_decision.json'))
    frame = result.frame
    assert len(frame) == 5 * 2
    np.testing.assert_allclose(frame['f'], 0.5, atol=1e-12)
    np.testing.assert_allclose(frame['f'] + frame['q'], frame['p'], atol=1e-12)
    first = frame[frame['alternative'] == 'A1']
    np.testing.assert_allclose(first['p'], 0.5 * (1.0 + np.cos(first['t'])), atol=1e-12)
    assert result.summary['final']['A2'] == pytest.approx(1.0)


def test_successive_run():
    result = collect(_load('successive_order.json'))
    assert result.summary['order'] == 'AB'
    assert set(result.frame['alternative']) == {'A1B1', 'A1B2', 'A2B1', 'A2B2'}
    assert result.frame['f'].isna().all()
    assert sum(result.summary['final'].values()) == pytest.approx(1.0, abs=1e-10)
    swapped = _load('successive_order.json').model_copy(update={'order': 'BA'})
    reversed_result = collect(swapped)
    assert reversed_result.summary['order'] == 'BA'
    assert sum(reversed_result.summary['final'].values()) == pytest.approx(1.0, abs=1e-10)


def test_behavioral_run():
    result = collect(_load('behavioral_decoherence.json'))
    assert len(result.summary['max_abs_q']) == 5
    assert sum(result.summary['final'].values()) == pytest.approx(1.0, abs=1e-10)
    np.testing.assert_allclose(result.frame.groupby('t')['q'].sum(), 0.0, atol=1e-10)


def test_network_discordance_run(tmp_path):
    report = run(_load('network_discordance.json'), tmp_path)
    summary = report.summary
    assert summary['regime'] == 'common-convention'
    assert summary['initial_relation'] == 'discordance'
    assert summary['p_star'] == pytest.approx(0.52)
    assert summary['final'][0][0] == pytest.approx(0.52, abs=1.5e-3)
    frame = pd.read_csv(tmp_path / 'trajectory.csv')
    assert list(frame.columns) == ['t', 'agent', 'alternative', 'f', 'q', 'p', 'M']
    assert len(frame) == 10001 * 2 * 2


def test_network_degenerate_fixed_point_is_reported():
    document = _network_document()
    document['network']['agents'] = [{'f': [0.4, 0.6], 'q0': [0.1, -0.1]}, {'f': [0.6, 0.4], 'q0': [0.1, -0.1]}]
    summary = collect(validate_scenario(document)).summary
    assert summary['p_star'] is None


def test_csv_output_is_byte_identical(tmp_path):
    scenario = _load('single_decision.json')
    run(scenario, tmp_path / 'first')
    run(scenario, tmp_path / 'second')
    first = (tmp_path / 'first' / 'trajectory.csv').read_bytes()
    assert first == (tmp_path / 'second' / 'trajectory.csv').read_bytes()
    assert b'\r\n' not in first


def test_output_path_resolution(tmp_path):
    scenario = validate_scenario({'kind': 'paradox', 'paradox': {'name': 'disjunction'}})
    assert output_path(scenario) == Path(OUTPUT_CONFIG['output_dir']) / 'paradox'
    assert output_path(scenario, tmp_path) == tmp_path
    assert output_path(_load('planning.json')) == Path('outputs/planning')


def test_sweep_coupling(tmp_path):
    scenario = validate_scenario(_network_document())
    report = sweep(scenario, 'network.J', [0.5, 1.0, 2.0], tmp_path, max_workers=2)
    assert report.exit_status == 0
    index = json.loads((tmp_path / 'sweep_index.json').read_text(encoding='utf-8'))
    assert index['parameter'] == 'network.J'
    assert [run['directory'] for run in index['runs']] == ['network.J=0.5', 'network.J=1', 'network.J=2']
    for entry in index['runs']:
        assert (tmp_path / entry['directory'] / 'trajectory.csv').exists()
        assert entry['summary']['kind'] == 'network'
        assert entry['summary']['regime'] != 'everlasting-fluctuations'


def test_sweep_rate_shows_decoherence(tmp_path):
    report = sweep(_load('behavioral_decoherence.json'), 'generator.rate', [1.0, 1e6], tmp_path)
    runs = report.summary['runs']
    assert runs[1]['directory'] == 'generator.rate=1e+06'
    assert runs[1]['summary']['max_abs_q'][-1] <= 1e-3


def test_sweep_integer_field_and_agent_index(tmp_path):
    scenario = validate_scenario(_network_document())
    report = sweep(scenario, 'network.horizon', [5, 10], tmp_path)
    frame = pd.read_csv(tmp_path / 'network.horizon=10' / 'trajectory.csv')
    assert frame['t'].max() == 10
    assert report.exit_status == 0
    report = sweep(scenario, 'network.agents.0.q0.0', [0.2], tmp_path / 'agents')
    assert report.exit_status == 2
    assert 'error' in report.summary['runs'][0]


def test_sweep_records_failures(tmp_path):
    scenario = validate_scenario({'kind': 'paradox', 'paradox': {'name': 'planning', 'inputs': {'p_a1': 0.85}}})
    report = sweep(scenario, 'paradox.inputs.p_a1', [0.85, 0.25], tmp_path)
    assert report.exit_status == 3
    ok, failed = report.summary['runs']
    assert ok['summary']['tables'][0]['p']['B1'] == pytest.approx(0.35)
    assert 'error' in failed
    assert not (tmp_path / failed['directory']).exists()


def test_sweep_invalid_value_recorded(tmp_path):
    scenario = validate_scenario(_network_document())
    report = sweep(scenario, 'network.J', [1.0, -1.0], tmp_path)
    assert report.exit_status == 2
    assert 'summary' in report.summary['runs'][0]
    assert 'error' in report.summary['runs'][1]


def test_sweep_argument_errors(tmp_path):
    scenario = validate_scenario(_network_document())
    with pytest.raises(ScenarioError):
        sweep(scenario, 'network.J', [], tmp_path)
    with pytest.raises(ScenarioError):
        sweep(scenario, 'kind', [1.0], tmp_path)
    with pytest.raises(ScenarioError):
        sweep(scenario, 'network.K', [1.0], tmp_path)
    with pytest.raises(ScenarioError):
        sweep(scenario, 'network.agents.5.f.0', [1.0], tmp_path)
