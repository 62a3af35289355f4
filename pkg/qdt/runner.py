"""
Senaryo çalıştırıcı: doğrulanmış senaryoyu ilgili modüle yönlendirir,
sonuçları toplar ve CSV/JSON olarak kaydeder.
"""

from __future__ import annotations

import copy
import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd

from .behavioral import behavioral_trajectory
from .config import OUTPUT_CONFIG
from .errors import ConsistencyError, DegenerateFixedPointError, QDTError, ScenarioError
from .measures import AlternativeSet, projector, sample_feelings
from .network import AgentState, NetworkConfig, consensus_fixed_point, initial_relation, simulate
from .probability import (
	DecisionSequence, DecisionStage, clamp_probability, evolved_probability, joint_probability, limit_probability,
)
from .scenario_file import GeneratorSpec, ScenarioFile, StateSpec, to_complex, validate_scenario
from .scenarios import run_paradox
from .state import DecisionWindow, DensityOperator, EvolutionGenerator, make_density
from .tensor import SpaceLayout

logger = logging.getLogger(__name__)

PROBABILITY_COLUMNS = ['t', 'alternative', 'f', 'q', 'p']
NETWORK_COLUMNS = ['t', 'agent', 'alternative', 'f', 'q', 'p', 'M']


@dataclass
class RunReport:
	exit_status: int
	outputs: list[str] = field(default_factory=list)
	summary: dict[str, Any] = field(default_factory=dict)
	duration: float = 0.0


@dataclass
class RunResult:
	"""Bir senaryonun bellek içi sonucu (henüz diske yazılmamış)."""

	frame: pd.DataFrame
	summary: dict[str, Any]


# --- senaryo nesnelerinin kurulumu ---

def _vector(entries) -> np.ndarray:
	return np.array([to_complex(e) for e in entries], dtype=np.complex128)


def build_layout(scenario: ScenarioFile) -> SpaceLayout:
	return SpaceLayout.from_pairs(scenario.dimensions.items())


def build_state(spec: StateSpec, layout: SpaceLayout) -> DensityOperator:
	if spec.pure is not None:
		return make_density(_vector(spec.pure), layout)
	return make_density([(item.weight, _vector(item.vector)) for item in spec.mixture], layout)


def build_generator(spec: GeneratorSpec, layout: SpaceLayout) -> EvolutionGenerator:
	basis = None
	if spec.basis is not None:
		basis = np.column_stack([_vector(column) for column in spec.basis])
	return EvolutionGenerator.from_energies(
		np.asarray(spec.eigenvalues, dtype=float), layout, basis=basis, rate=spec.rate, profile=spec.profile
	)


def build_alternatives(vectors, label: str) -> AlternativeSet:
	return AlternativeSet(np.array([_vector(v) for v in vectors]), label)


def _display(prefix: str, n: int) -> str:
	return f"{prefix}{n + 1}"


# --- tür bazında hesaplama ---

def _single_decision(scenario: ScenarioFile) -> RunResult:
	layout = build_layout(scenario)
	state0 = build_state(scenario.state, layout)
	gen = build_generator(scenario.generator, layout)
	alts = build_alternatives(scenario.alternatives, 'A')
	rows = []
	for t in scenario.times:
		for n in range(alts.count):
			proj = projector(alts, n)
			p = evolved_probability(state0, gen, proj, t, alts.label)
			# Özbazda sönümlenmiş (klasik) kısım f, girişim kısmı q = p − f
			f = limit_probability(state0, gen, proj, t, 'fast', alts.label)
			rows.append((t, _display('A', n), clamp_probability(f), p - f, clamp_probability(p)))
	frame = pd.DataFrame(rows, columns=PROBABILITY_COLUMNS)
	return RunResult(frame, {'kind': scenario.kind, 'final': _final_probabilities(frame)})


def _successive(scenario: ScenarioFile) -> RunResult:
	layout = build_layout(scenario)
	state0 = build_state(scenario.state, layout)
	gen_a = build_generator(scenario.generator, layout.subset(['A', 'S']))
	gen_b = build_generator(scenario.generator_b, layout.subset(['B', 'S']))
	alts_a = build_alternatives(scenario.alternatives, 'A')
	alts_b = build_alternatives(scenario.alternatives_b, 'B')
	windows = scenario.windows
	sequence = DecisionSequence(
		DecisionStage(gen_a, DecisionWindow(windows.first.start, windows.first.duration), 'A'),
		DecisionStage(gen_b, DecisionWindow(windows.second.start, windows.second.duration), 'B'),
	)
	# Ters sıra: önce B, sonra A
	if scenario.order == 'BA':
		sequence = sequence.swapped()
	rows = []
	for t in scenario.times:
		for n in range(alts_a.count):
			for k in range(alts_b.count):
				record = joint_probability(state0, sequence, alts_a, n, alts_b, k, t)
				rows.append((t, f"{_display('A', n)}{_display('B', k)}", np.nan, np.nan, record.reported()))
	frame = pd.DataFrame(rows, columns=PROBABILITY_COLUMNS)
	summary = {'kind': scenario.kind, 'order': ''.join(sequence.order), 'final': _final_probabilities(frame)}
	return RunResult(frame, summary)


def _behavioral(scenario: ScenarioFile) -> RunResult:
	layout = build_layout(scenario)
	state0 = build_state(scenario.state, layout)
	gen = build_generator(scenario.generator, layout)
	alts = build_alternatives(scenario.alternatives, 'A')
	subject = scenario.feelings.subject_label
	feelings = sample_feelings(alts.count, layout.dim(subject), scenario.feelings.seed,
		scenario.feelings.distribution)
	trajectory = behavioral_trajectory(state0, gen, alts, feelings, scenario.times,
		window=scenario.observation_window, subject_label=subject)
	rows = [(item.time, _display('A', item.alternative), item.f, item.q, clamp_probability(item.p))
		for snapshot in trajectory for item in snapshot]
	frame = pd.DataFrame(rows, columns=PROBABILITY_COLUMNS)
	max_q = [max(abs(item.q) for item in snapshot) for snapshot in trajectory]
	summary = {'kind': scenario.kind, 'final': _final_probabilities(frame), 'max_abs_q': max_q}
	return RunResult(frame, summary)


def _network(scenario: ScenarioFile) -> RunResult:
	spec = scenario.network
	config = NetworkConfig(
		N=spec.N, J=spec.J, interaction=spec.interaction, memory=spec.memory, tau=spec.tau,
		horizon=spec.horizon, adjacency=None if spec.adjacency is None else np.array(spec.adjacency),
	)
	agents = [AgentState(np.array(a.f), np.array(a.q0)) for a in spec.agents]
	trajectory = simulate(config, agents)
	frame = pd.DataFrame(list(trajectory.records()), columns=NETWORK_COLUMNS)
	frame['alternative'] = frame['alternative'].map(lambda n: _display('A', n))
	regime = trajectory.regime
	summary = {
		'kind': scenario.kind,
		'regime': regime.label,
		'converged': regime.converged,
		'period': regime.period,
		'tail_change': regime.tail_change,
		'final': trajectory.final().round(12).tolist(),
	}
	# İki grup, iki alternatif: başlangıç ilişkisi ve ortak uzlaşı noktası
	if spec.N == 2 and len(spec.agents[0].f) == 2:
		f1, f2 = trajectory.f[0, 0], trajectory.f[1, 0]
		q1, q2 = trajectory.q0[0, 0], trajectory.q0[1, 0]
		summary['initial_relation'] = initial_relation(f1, f2, f1 + q1, f2 + q2)
		try:
			summary['p_star'] = consensus_fixed_point(f1, f2, q1, q2)
		except DegenerateFixedPointError as e:
			logger.info("📊 Ortak uzlaşı noktası yok: %s", e)
			summary['p_star'] = None
	return RunResult(frame, summary)


def _paradox(scenario: ScenarioFile) -> RunResult:
	tables = run_paradox(scenario.paradox.name, scenario.paradox.inputs)
	infeasible = [table.name for table in tables if not table.feasible]
	if infeasible:
		raise ConsistencyError(f"Paradoks girdileri [0, 1] dışında olasılık üretiyor: {infeasible}")
	rows = [row for stage, table in enumerate(tables) for row in table.rows(stage)]
	frame = pd.DataFrame(rows, columns=PROBABILITY_COLUMNS)
	return RunResult(frame, {'kind': scenario.kind, 'tables': [table.summary() for table in tables]})


DISPATCH = {
	'single-decision': _single_decision,
	'successive': _successive,
	'behavioral': _behavioral,
	'network': _network,
	'paradox': _paradox,
}


def _final_probabilities(frame: pd.DataFrame) -> dict[str, float]:
	last = frame[frame['t'] == frame['t'].max()]
	return {row.alternative: round(float(row.p), 12) for row in last.itertuples()}


def collect(scenario: ScenarioFile) -> RunResult:
	"""Senaryoyu hesaplar; dosya yazmaz."""
	try:
		return DISPATCH[scenario.kind](scenario)
	except QDTError as e:
		logger.error("❌ '%s' senaryosu başarısız: %s", scenario.kind, e)
		raise


# --- kayıt ---

def output_path(scenario: ScenarioFile, output_dir=None) -> Path:
	if output_dir is not None:
		return Path(output_dir)
	if scenario.output.path is not None:
		return Path(scenario.output.path)
	return Path(OUTPUT_CONFIG['output_dir']) / scenario.kind


def save(result: RunResult, directory: Path) -> list[str]:
	"""
	trajectory.csv ve summary.json dosyalarını yazar.

	Returns:
		list[str]: Yazılan dosya yolları
	"""
	directory.mkdir(parents=True, exist_ok=True)
	csv_path = directory / 'trajectory.csv'
	json_path = directory / 'summary.json'
	result.frame.to_csv(csv_path, index=False, float_format=OUTPUT_CONFIG['float_format'], lineterminator='\n')
	with open(json_path, 'w', encoding='utf-8') as f:
		json.dump(result.summary, f, indent=2, ensure_ascii=False, default=_json_default)
	logger.info("💾 Çıktılar kaydedildi: %s", directory)
	return [str(csv_path), str(json_path)]


def _json_default(value):
	if isinstance(value, np.generic):
		return value.item()
	if isinstance(value, np.ndarray):
		return value.tolist()
	raise TypeError(f"JSON'a çevrilemeyen değer: {type(value).__name__}")


def run(scenario: ScenarioFile, output_dir=None) -> RunReport:
	"""
	Tek senaryo çalıştırır ve çıktıları kaydeder.

	Args:
		scenario (ScenarioFile): Doğrulanmış senaryo
		output_dir: Çıktı dizini (verilmezse output.path veya QDT_OUTPUT_DIR)

	Returns:
		RunReport: Başarılı çalıştırma raporu (hatalar yukarı iletilir)
	"""
	started = time.perf_counter()
	logger.info("🚀 '%s' senaryosu çalıştırılıyor", scenario.kind)
	# Hesapla ve kaydet
	result = collect(scenario)
	outputs = save(result, output_path(scenario, output_dir))
	duration = time.perf_counter() - started
	logger.info("✅ Senaryo tamamlandı (%.3f sn)", duration)
	return RunReport(0, outputs, result.summary, duration)


# --- parametre taraması ---

def _resolve(document: dict[str, Any], parameter: str) -> tuple[Any, Any]:
	"""Noktalı yolun ebeveyn kabını ve son anahtarını döndürür."""
	parts = parameter.split('.')
	container: Any = document
	for part in parts[:-1]:
		container = _step(container, part, parameter)
	last = parts[-1]
	if isinstance(container, list):
		last = _index(container, last, parameter)
	elif not isinstance(container, dict) or last not in container:
		raise ScenarioError(f"Tarama parametresi bulunamadı: '{parameter}'")
	return container, last


def _index(container: list, part: str, parameter: str) -> int:
	if not part.isdigit() or int(part) >= len(container):
		raise ScenarioError(f"Tarama parametresi bulunamadı: '{parameter}'")
	return int(part)


def _step(container: Any, part: str, parameter: str) -> Any:
	if isinstance(container, list):
		return container[_index(container, part, parameter)]
	if isinstance(container, dict) and container.get(part) is not None:
		return container[part]
	raise ScenarioError(f"Tarama parametresi bulunamadı: '{parameter}'")


def _numeric_target(document: dict[str, Any], parameter: str) -> tuple[Any, Any]:
	container, key = _resolve(document, parameter)
	current = container[key]
	if isinstance(current, bool) or not isinstance(current, (int, float)):
		raise ScenarioError(f"'{parameter}' sayısal bir alan değil (değer: {current!r})")
	return container, key


def _with_value(scenario: ScenarioFile, parameter: str, value: float) -> ScenarioFile:
	document = copy.deepcopy(scenario.model_dump())
	container, key = _numeric_target(document, parameter)
	current = container[key]
	if isinstance(current, int) and float(value).is_integer():
		value = int(value)
	container[key] = value
	return validate_scenario(document)


def _label(parameter: str, value: float) -> str:
	return f"{parameter}={value:g}"


def sweep(scenario: ScenarioFile, parameter: str, values: Sequence[float], output_dir=None,
		max_workers: Optional[int] = None) -> RunReport:
	"""
	Sayısal bir senaryo alanını verilen değerler üzerinde tarar.

	Hesaplamalar iş parçacıklarında paralel yürür; dosyaları yalnızca
	çağıran iş parçacığı yazar. Başarısız değerler dizinde hata mesajıyla
	kaydedilir ve raporun çıkış kodu ilk hatanın kodudur.
	"""
	if not values:
		raise ScenarioError("Tarama için değer listesi boş")
	started = time.perf_counter()
	# Hedef alanı baştan doğrula; yol hatası tüm taramayı durdurur
	_numeric_target(scenario.model_dump(), parameter)

	# Her değer için ayrı senaryo kopyası
	variants = []
	for value in values:
		try:
			variants.append((_with_value(scenario, parameter, value), None))
		except ScenarioError as e:
			logger.warning("⚠️ %s=%g geçersiz: %s", parameter, value, e)
			variants.append((None, e))
	root = output_path(scenario, output_dir)
	logger.info("🚀 '%s' taraması: %d değer", parameter, len(values))

	def compute(item):
		variant, invalid = item
		if invalid is not None:
			return None, invalid
		try:
			return collect(variant), None
		except QDTError as e:
			return None, e

	# Hesaplamalar paralel, kayıt tek iş parçacığında
	with ThreadPoolExecutor(max_workers=max_workers or OUTPUT_CONFIG['max_workers']) as pool:
		results = list(pool.map(compute, variants))

	exit_status = 0
	outputs: list[str] = []
	index = {'parameter': parameter, 'runs': []}
	for value, (result, error) in zip(values, results):
		entry: dict[str, Any] = {'value': value, 'directory': _label(parameter, value)}
		if error is not None:
			exit_status = exit_status or error.exit_code
			entry['error'] = str(error)
		else:
			files = save(result, root / entry['directory'])
			outputs.extend(files)
			entry['outputs'] = files
			entry['summary'] = result.summary
		index['runs'].append(entry)

	# Tarama dizini
	root.mkdir(parents=True, exist_ok=True)
	index_path = root / 'sweep_index.json'
	with open(index_path, 'w', encoding='utf-8') as f:
		json.dump(index, f, indent=2, ensure_ascii=False, default=_json_default)
	outputs.append(str(index_path))
	duration = time.perf_counter() - started
	if exit_status:
		logger.warning("⚠️ Taramada başarısız değerler var (çıkış kodu %d)", exit_status)
	else:
		logger.info("✅ Tarama tamamlandı (%.3f sn)", duration)
	return RunReport(exit_status, outputs, index, duration)
