"""
Hazır senaryolar: planlama paradoksu, ayrılma (disjunction) etkisi, soru
sırası etkisi, Fishburn geçişsizliği ve döngü kırma yolları.

Her tablo, beklenen değerlerin kaynağını provenance alanında taşır.
"""

from __future__ import annotations

import copy
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .errors import ConsistencyError, ScenarioError
from .measures import AlternativeSet
from .network import attraction_discount
from .priors import Attitude, aggregate_probability, attributes_from_utilities, luce_weights
from .probability import DecisionSequence, DecisionStage, joint_probability
from .state import DecisionWindow, EvolutionGenerator, make_density
from .tensor import SpaceLayout

logger = logging.getLogger(__name__)

PRESTIGE_RANKS = {'low': 0, 'medium': 1, 'high': 2}


@dataclass
class ProbabilityTable:
	name: str
	p: dict[str, float]
	f: dict[str, float] = field(default_factory=dict)
	q: dict[str, float] = field(default_factory=dict)
	feasible: bool = True
	flags: dict[str, Any] = field(default_factory=dict)
	empirical: dict[str, float] = field(default_factory=dict)
	provenance: str = ''

	def rows(self, stage: int = 0) -> list[tuple[int, str, float, float, float]]:
		return [(stage, label, self.f.get(label, value), self.q.get(label, 0.0), value)
			for label, value in self.p.items()]

	def summary(self) -> dict[str, Any]:
		return {
			'name': self.name,
			'p': {k: round(v, 12) for k, v in self.p.items()},
			'f': {k: round(v, 12) for k, v in self.f.items()},
			'q': {k: round(v, 12) for k, v in self.q.items()},
			'feasible': self.feasible,
			'flags': self.flags,
			'empirical': self.empirical,
			'provenance': self.provenance,
		}


def _check_alternation(attitudes: Sequence[Attitude]) -> None:
	if abs(sum(Attitude(a).attraction for a in attitudes)) > 1e-12:
		raise ConsistencyError(f"Tutum işaretleri alternasyon yasasını bozuyor: {[Attitude(a).value for a in attitudes]}")


def _attitude_entry(f: float, attitude: Attitude) -> tuple[float, float, bool]:
	"""(q, p, aralıkta mı); f zaten [0, 1] dışındaysa ham değer döner."""
	q = Attitude(attitude).attraction
	if not 0.0 <= f <= 1.0:
		return q, f + q, False
	aggregate = aggregate_probability(f, attitude)
	return q, aggregate.value, not aggregate.out_of_range


def planning_paradox(p_a1: float = 0.85) -> ProbabilityTable:
	"""
	Sigarayı bırakma planı (A) ve uygulaması (B).

	Planlamada bırakmak çekici (+0.25), uygulamada itici (−0.25); rasyonel
	kesirler zamanla değişmez, f(A_i) = f(B_i). Doğrusal sistem:
	f(A1) = p(A1) − 0.25, p(B1) = f(A1) − 0.25.
	"""
	f1 = p_a1 - Attitude.ATTRACTIVE.attraction
	f2 = 1.0 - f1
	plan = ((f1, Attitude.ATTRACTIVE), (f2, Attitude.REPULSIVE))
	execution = ((f1, Attitude.REPULSIVE), (f2, Attitude.ATTRACTIVE))
	_check_alternation([a for _, a in plan])
	_check_alternation([a for _, a in execution])

	table = ProbabilityTable(name='planning', p={}, provenance='sigara bırakma: planlama ile uygulama arasında tutum dönüşü')
	feasible = 0.0 <= f1 <= 1.0
	for prefix, stage in (('A', plan), ('B', execution)):
		for i, (f, attitude) in enumerate(stage, start=1):
			q, p, ok = _attitude_entry(f, attitude)
			label = f"{prefix}{i}"
			table.f[label], table.q[label], table.p[label] = f, q, p
			feasible = feasible and ok
	table.feasible = feasible
	table.flags['preference_reversal'] = bool(table.p['A1'] > table.p['A2'] and table.p['B1'] < table.p['B2'])
	table.empirical = {'B1': 0.36, 'B2': 0.64}
	if not feasible:
		logger.warning("⚠️ Planlama paradoksu girdisi p(A1)=%.3f uygulanamaz", p_a1)
	return table


def disjunction_effect(fractions: Sequence[float] = (0.345, 0.295, 0.155, 0.205)) -> ProbabilityTable:
	"""
	Klasik ortak kesirler f(A1B1), f(A1B2), f(A2B1), f(A2B2) toplanarak
	f(A_iB) bulunur; belirsizlik altında A1 itici, A2 çekicidir.
	"""
	f = np.asarray(fractions, dtype=float)
	if f.shape != (4,) or np.any(f < 0):
		raise ConsistencyError(f"Dört negatif olmayan ortak kesir bekleniyordu: {fractions}")
	if abs(f.sum() - 1.0) > 1e-10:
		raise ConsistencyError(f"Ortak kesirler toplamı 1 değil: {f.sum()}")
	f_a1b, f_a2b = f[0] + f[1], f[2] + f[3]
	table = ProbabilityTable(name='disjunction', p={}, provenance='belirsiz sonuç altında karar, kesin şey ilkesi')
	for label, value, attitude in (('A1B', f_a1b, Attitude.REPULSIVE), ('A2B', f_a2b, Attitude.ATTRACTIVE)):
		q, p, ok = _attitude_entry(value, attitude)
		table.f[label], table.q[label], table.p[label] = value, q, p
		table.feasible = table.feasible and ok
	table.flags['sure_thing_holds_for_f'] = bool(table.f['A1B'] > table.f['A2B'])
	table.flags['sure_thing_holds_for_p'] = bool(table.p['A1B'] > table.p['A2B'])
	table.empirical = {'A1B': 0.36, 'A2B': 0.64}
	return table


def find_preference_loop(preferences: Sequence[tuple[str, str]]) -> Optional[list[str]]:
	"""(kazanan, kaybeden) kenarlarında yönlü döngü arar; bulursa düğüm listesini döndürür."""
	graph: dict[str, list[str]] = {}
	for winner, loser in preferences:
		graph.setdefault(winner, []).append(loser)
		graph.setdefault(loser, [])

	visiting: list[str] = []
	done: set[str] = set()

	def visit(node: str) -> Optional[list[str]]:
		if node in visiting:
			return visiting[visiting.index(node):] + [node]
		if node in done:
			return None
		visiting.append(node)
		for nxt in graph[node]:
			cycle = visit(nxt)
			if cycle:
				return cycle
		visiting.pop()
		done.add(node)
		return None

	for start in graph:
		cycle = visit(start)
		if cycle:
			return cycle
	return None


def _pair_attitudes(rank_x: int, rank_y: int) -> tuple[Attitude, Attitude]:
	# Yakın prestij: nötr; çok farklı prestij: yüksek olan çekici
	if abs(rank_x - rank_y) < 2:
		return Attitude.NEUTRAL, Attitude.NEUTRAL
	if rank_x > rank_y:
		return Attitude.ATTRACTIVE, Attitude.REPULSIVE
	return Attitude.REPULSIVE, Attitude.ATTRACTIVE


@dataclass
class FishburnResult:
	tables: list[ProbabilityTable]
	preferences: list[tuple[str, str]]
	loop: Optional[list[str]]

	@property
	def loop_detected(self) -> bool:
		return self.loop is not None


PAIRS = (('A', 'B'), ('B', 'C'), ('C', 'A'))


def _fishburn_pairs(salaries: Sequence[float], prestige: Sequence[str], memory: float = 0.0) -> FishburnResult:
	names = ('A', 'B', 'C')
	salary = dict(zip(names, salaries))
	rank = {name: PRESTIGE_RANKS[level] for name, level in zip(names, prestige)}
	tables, preferences = [], []
	for x, y in PAIRS:
		f = luce_weights(attributes_from_utilities((salary[x], salary[y])))
		att_x, att_y = _pair_attitudes(rank[x], rank[y])
		_check_alternation((att_x, att_y))
		table = ProbabilityTable(name=f"{x}-{y}", p={}, provenance='iş adayı seçimi: maaş ve prestij')
		for label, fraction, attitude in ((x, f[0], att_x), (y, f[1], att_y)):
			q = float(attraction_discount(attitude.attraction, memory))
			table.f[label], table.q[label], table.p[label] = float(fraction), q, float(fraction) + q
		preferences.append((x, y) if table.p[x] > table.p[y] else (y, x))
		tables.append(table)
	return FishburnResult(tables, preferences, find_preference_loop(preferences))


def fishburn_intransitivity(salaries: Sequence[float] = (65000, 58000, 50000),
		prestige: Sequence[str] = ('low', 'medium', 'high')) -> FishburnResult:
	result = _fishburn_pairs(salaries, prestige)
	if result.loop_detected:
		logger.info("📊 Tercih döngüsü bulundu: %s", " > ".join(result.loop))
	return result


def break_loop(mode: str, salaries: Sequence[float] = (65000, 58000, 50000),
		prestige: Sequence[str] = ('low', 'medium', 'high'), memory: float = float('inf')):
	"""
	Tercih döngüsünü kırar.

	'decay': çekim faktörleri q·exp(−M) ile söner; M = ∞ tamamen rasyonel
	karşılaştırmadır, sonlu M ara durumu verir.
	'joint-choice': üç aday aynı anda Luce ağırlıklarıyla değerlendirilir,
	en düşük prestij −0.25, en yüksek +0.25 alır.
	"""
	if mode == 'decay':
		return _fishburn_pairs(salaries, prestige, memory)
	if mode != 'joint-choice':
		raise ConsistencyError(f"Bilinmeyen döngü kırma kipi '{mode}'")

	names = ('A', 'B', 'C')
	f = luce_weights(attributes_from_utilities(salaries))
	ranks = [PRESTIGE_RANKS[level] for level in prestige]
	attitudes = []
	for r in ranks:
		if r == max(ranks) and ranks.count(r) == 1:
			attitudes.append(Attitude.ATTRACTIVE)
		elif r == min(ranks) and ranks.count(r) == 1:
			attitudes.append(Attitude.REPULSIVE)
		else:
			attitudes.append(Attitude.NEUTRAL)
	_check_alternation(attitudes)
	table = ProbabilityTable(name='joint-choice', p={}, provenance='üç adayın tek seferde yeniden değerlendirilmesi')
	for name, fraction, attitude in zip(names, f, attitudes):
		table.f[name], table.q[name] = float(fraction), attitude.attraction
		table.p[name] = float(fraction) + attitude.attraction
	table.flags['ordering'] = sorted(names, key=lambda name: table.p[name])
	return table


def _plus_minus_basis(label: str) -> AlternativeSet:
	return AlternativeSet(np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0), label)


def order_effect_demo(seed: int = 0, commuting: bool = False) -> ProbabilityTable:
	"""
	A ⊗ B ⊗ S (2×2×2) üzerinde iki soru; A sorusu S ile standart bazda,
	B sorusu S ile Hadamard bazında kontrollü faz etkileşimine girer.
	commuting=True iken her iki üreteç de standart bazdadır.
	"""
	rng = np.random.default_rng(seed)
	theta_a, theta_b = np.pi * (1.0 + 0.1 * rng.uniform(-1.0, 1.0, size=2))
	layout = SpaceLayout((('A', 2), ('B', 2), ('S', 2)))
	plus = np.array([1.0, 1.0]) / np.sqrt(2.0)
	state = make_density(np.kron(np.kron(plus, plus), plus), layout)

	hadamard = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
	gen_a = EvolutionGenerator.product({}, [0.0, 0.0, 0.0, theta_a], SpaceLayout((('A', 2), ('S', 2))))
	subject_basis = np.eye(2) if commuting else hadamard
	gen_b = EvolutionGenerator.product({'S': subject_basis}, [0.0, 0.0, 0.0, theta_b], SpaceLayout((('B', 2), ('S', 2))))
	sequence = DecisionSequence(
		DecisionStage(gen_a, DecisionWindow(0.0, 1.0), 'A'),
		DecisionStage(gen_b, DecisionWindow(1.5, 1.0), 'B'),
	)
	alts_a, alts_b = _plus_minus_basis('A'), _plus_minus_basis('B')
	t = 3.0
	p_ab = joint_probability(state, sequence, alts_a, 0, alts_b, 0, t).value
	p_ba = joint_probability(state, sequence, alts_a, 0, alts_b, 0, -t).value
	gap = abs(p_ab - p_ba)
	table = ProbabilityTable(name='order-effect', p={'AB': p_ab, 'BA': p_ba},
		provenance='soru sırası etkisi: değişmeyen (commuting olmayan) soru bazları')
	table.flags.update({'gap': gap, 'relative_gap': gap / p_ab if p_ab > 0 else None,
		'commuting': commuting, 'seed': seed})
	return table


def _fishburn_tables(result) -> list[ProbabilityTable]:
	if isinstance(result, FishburnResult):
		for table in result.tables:
			table.flags['loop'] = result.loop
		return result.tables
	return [result]


PARADOXES: dict[str, Callable[..., Any]] = {
	'planning': planning_paradox,
	'disjunction': disjunction_effect,
	'fishburn': fishburn_intransitivity,
	'fishburn-decay': lambda **kw: break_loop('decay', **kw),
	'fishburn-joint': lambda **kw: break_loop('joint-choice', **kw),
	'order-effect': order_effect_demo,
}


def run_paradox(name: str, inputs: Optional[dict[str, Any]] = None) -> list[ProbabilityTable]:
	if name not in PARADOXES:
		raise ScenarioError(f"Bilinmeyen paradoks '{name}', seçenekler {sorted(PARADOXES)}")
	try:
		result = PARADOXES[name](**(inputs or {}))
	except TypeError as e:
		raise ScenarioError(f"'{name}' paradoksu için geçersiz girdiler: {e}") from e
	return _fishburn_tables(result)


_NETWORK_BASE = {
	'kind': 'network',
	'network': {
		'N': 2, 'J': 1.0, 'tau': 1, 'interaction': 'long-range', 'memory': 'long-term', 'horizon': 10000,
		'agents': [],
	},
}


def _network(agents, **overrides) -> dict[str, Any]:
	doc = copy.deepcopy(_NETWORK_BASE)
	doc['network'].update(overrides)
	doc['network']['agents'] = [{'f': [f, 1.0 - f], 'q0': [q, -q]} for f, q in agents]
	return doc


BUILTIN_SCENARIOS: dict[str, dict[str, Any]] = {
	'planning': {'kind': 'paradox', 'paradox': {'name': 'planning', 'inputs': {'p_a1': 0.85}}},
	'disjunction': {'kind': 'paradox', 'paradox': {'name': 'disjunction',
		'inputs': {'fractions': [0.345, 0.295, 0.155, 0.205]}}},
	'fishburn': {'kind': 'paradox', 'paradox': {'name': 'fishburn', 'inputs': {}}},
	'fishburn-decay': {'kind': 'paradox', 'paradox': {'name': 'fishburn-decay', 'inputs': {}}},
	'fishburn-joint': {'kind': 'paradox', 'paradox': {'name': 'fishburn-joint', 'inputs': {}}},
	'order-effect': {'kind': 'paradox', 'paradox': {'name': 'order-effect', 'inputs': {'seed': 0}}},
	'network-accordance': _network([(0.6, 0.2), (0.4, -0.1)]),
	'network-discordance': _network([(0.4, 0.3), (0.6, -0.2)]),
	'network-short-term': _network([(0.4, 0.3), (0.6, -0.2)], memory='short-term', horizon=500),
	'network-fluctuations': _network([(0.5, 0.4), (0.5, -0.4)], J=20.0, memory='short-term', horizon=400),
	'behavioral-decoherence': {
		'kind': 'behavioral',
		'dimensions': {'A': 2, 'S': 2},
		'generator': {'eigenvalues': [0.3, 1.1, 1.9, 3.2], 'profile': 'constant', 'rate': 1.0},
		'state': {'pure': [0.6, [0.3, 0.2], 0.4, [0.1, -0.5]]},
		'alternatives': [[1, 0], [0, 1]],
		'feelings': {'seed': 7, 'distribution': 'gaussian'},
		'times': [0.0, 0.5, 1.0, 2.0, 5.0],
		'observation_window': 0.05,
	},
}


def builtin_scenario(name: str) -> dict[str, Any]:
	if name not in BUILTIN_SCENARIOS:
		raise ScenarioError(f"Bilinmeyen hazır senaryo '{name}', seçenekler {sorted(BUILTIN_SCENARIOS)}")
	return copy.deepcopy(BUILTIN_SCENARIOS[name])
