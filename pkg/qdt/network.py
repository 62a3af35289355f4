"""
Kullback-Leibler bilgisi paylaşan karar ajanlarından oluşan ayrık zamanlı
zeka ağı.

Dinamik:
	p_i(t) = p_i(0),                             t < τ
	p_i(t) = f_i + q_i(0)·exp(−M_i(t − τ)),      t ≥ τ
	M_i(0) = 0, M_i(t) kazançları t' = 1'den itibaren toplar.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterator, Optional, Sequence

import numpy as np

from .config import CLASSIFIER_CONFIG, NETWORK_CONFIG, TOLERANCES
from .errors import ConsistencyError, DegenerateFixedPointError, NumericalDivergenceError

logger = logging.getLogger(__name__)

REGIME_LABELS = ('rational-convention', 'common-convention', 'group-conventions', 'everlasting-fluctuations')


class Interaction(str, Enum):
	LONG_RANGE = 'long-range'
	SHORT_RANGE = 'short-range'


class Memory(str, Enum):
	LONG_TERM = 'long-term'
	SHORT_TERM = 'short-term'


def ring_adjacency(n: int) -> np.ndarray:
	adj = np.zeros((n, n))
	for i in range(n):
		adj[i, (i + 1) % n] = 1.0
		adj[i, (i - 1) % n] = 1.0
	np.fill_diagonal(adj, 0.0)
	return adj


@dataclass(frozen=True, eq=False)
class NetworkConfig:
	N: int
	J: float = NETWORK_CONFIG['J']
	interaction: Interaction = Interaction.LONG_RANGE
	memory: Memory = Memory.LONG_TERM
	tau: int = NETWORK_CONFIG['tau']
	horizon: int = 1000
	adjacency: Optional[np.ndarray] = None

	def __post_init__(self):
		if self.N < 2:
			raise ConsistencyError(f"Ağ en az iki ajan içermeli: N={self.N}")
		if self.tau < 1:
			raise ConsistencyError(f"Gecikme τ en az 1 olmalı: {self.tau}")
		if self.J < 0:
			raise ConsistencyError(f"Negatif bağlaşım J desteklenmiyor: {self.J}")
		if self.horizon < 1:
			raise ConsistencyError(f"Ufuk en az 1 adım olmalı: {self.horizon}")
		object.__setattr__(self, 'interaction', Interaction(self.interaction))
		object.__setattr__(self, 'memory', Memory(self.memory))
		if self.adjacency is not None:
			adj = np.asarray(self.adjacency, dtype=float)
			if adj.shape != (self.N, self.N):
				raise ConsistencyError(f"Komşuluk matrisi şekli {adj.shape}, beklenen {(self.N, self.N)}")
			if not np.array_equal(adj, adj.T) or np.any(np.diag(adj) != 0) or not np.all(np.isin(adj, (0.0, 1.0))):
				raise ConsistencyError("Komşuluk matrisi simetrik, 0/1 değerli ve köşegeni sıfır olmalı")
			object.__setattr__(self, 'adjacency', adj)

	@cached_property
	def kernel(self) -> np.ndarray:
		"""Etkileşim ağırlıkları w_ij."""
		if self.interaction is Interaction.LONG_RANGE:
			w = np.full((self.N, self.N), self.J / (self.N - 1))
			np.fill_diagonal(w, 0.0)
			return w
		adj = self.adjacency if self.adjacency is not None else ring_adjacency(self.N)
		return self.J * adj


@dataclass(frozen=True, eq=False)
class AgentState:
	"""Ajanın sabit rasyonel kesirleri f, başlangıç çekim faktörleri q0 ve güncel p, M."""

	f: np.ndarray
	q0: np.ndarray
	p: Optional[np.ndarray] = None
	M: float = 0.0

	def __post_init__(self):
		f = np.asarray(self.f, dtype=float)
		q0 = np.asarray(self.q0, dtype=float)
		tol = TOLERANCES['orthonormal']
		if f.shape != q0.shape or f.ndim != 1 or f.size < 2:
			raise ConsistencyError(f"f ve q0 aynı uzunlukta (≥ 2) olmalı: {f.shape} / {q0.shape}")
		if abs(f.sum() - 1.0) > tol:
			raise ConsistencyError(f"Σf = {f.sum():.12g}, 1 olmalı")
		if abs(q0.sum()) > tol:
			raise ConsistencyError(f"Σq0 = {q0.sum():.3e}, 0 olmalı")
		if np.any(f < -tol) or np.any(q0 < -f - tol) or np.any(q0 > 1.0 - f + tol):
			raise ConsistencyError("−f ≤ q0 ≤ 1 − f sınırı ihlal edildi")
		object.__setattr__(self, 'f', f)
		object.__setattr__(self, 'q0', q0)
		object.__setattr__(self, 'p', f + q0 if self.p is None else np.asarray(self.p, dtype=float))

	@classmethod
	def two_alternative(cls, f: float, q0: float) -> "AgentState":
		return cls(np.array([f, 1.0 - f]), np.array([q0, -q0]))


def _check_support(p_i: np.ndarray, p_j: np.ndarray, eps: float) -> None:
	# ε altındaki bir bileşen ancak karşı bileşen de ε altındaysa kabul edilir
	if np.any((p_i < eps) != (p_j < eps)):
		raise NumericalDivergenceError(f"KL sınırda tanımsız: yalnız bir tarafta sıfıra yakın bileşen ({p_i} / {p_j})")


def info_gain(p_i: Sequence[float], p_j: Sequence[float], eps: float = NETWORK_CONFIG['kl_epsilon']) -> float:
	"""
	μ_ij = Σ_n p_i(n) ln(p_i(n)/p_j(n)).

	İki tarafta da ε altında kalan bileşenler katkı vermez; yalnız bir
	tarafta ε altında kalan bileşen ıraksama hatası fırlatır.
	"""
	p_i = np.asarray(p_i, dtype=float)
	p_j = np.asarray(p_j, dtype=float)
	_check_support(p_i, p_j, eps)
	mask = (p_i >= eps) & (p_j >= eps)
	a = np.clip(p_i[mask], eps, 1.0 - eps)
	b = np.clip(p_j[mask], eps, 1.0 - eps)
	return float(np.sum(a * np.log(a / b)))


def pairwise_info_gain(p: np.ndarray, eps: float = NETWORK_CONFIG['kl_epsilon']) -> np.ndarray:
	"""Tüm ajan çiftleri için μ_ij matrisi."""
	if np.all(p >= eps):
		clipped = np.clip(p, eps, 1.0 - eps)
		logs = np.log(clipped)
		self_term = np.sum(clipped * logs, axis=1)
		mu = self_term[:, None] - clipped @ logs.T
		np.fill_diagonal(mu, 0.0)
		return np.maximum(mu, 0.0)
	n = p.shape[0]
	mu = np.zeros((n, n))
	for i in range(n):
		for j in range(n):
			if i != j:
				mu[i, j] = info_gain(p[i], p[j], eps)
	return mu


class GainHistory:
	"""
	μ_ij(t) kazançları ve t' = 1..t birikimli toplamları.
	"""

	def __init__(self, n_agents: int, horizon: int):
		self.gains = np.zeros((horizon + 1, n_agents, n_agents))
		self.cumulative = np.zeros((horizon + 1, n_agents, n_agents))
		self.last = 0

	def record(self, t: int, mu: np.ndarray) -> None:
		if t != self.last + 1:
			raise ConsistencyError(f"Kazanç geçmişi sıralı kaydedilmeli: beklenen t={self.last + 1}, gelen {t}")
		self.gains[t] = mu
		self.cumulative[t] = self.cumulative[t - 1] + mu
		self.last = t

	@classmethod
	def from_series(cls, gains: Sequence[np.ndarray]) -> "GainHistory":
		"""gains[0] → t = 1 olacak şekilde hazır seriden geçmiş kurar."""
		gains = [np.asarray(g, dtype=float) for g in gains]
		history = cls(gains[0].shape[0], len(gains))
		for t, mu in enumerate(gains, start=1):
			history.record(t, mu)
		return history


def memory_functional(history: GainHistory, config: NetworkConfig, i: int, t: int) -> float:
	"""
	M_i(t).

	Uzun erimli etkileşimde ağırlık J/(N−1), kısa erimlide komşular için J.
	Uzun süreli bellek t' = 1..t toplamını, kısa süreli bellek yalnızca
	μ(t) değerini kullanır.
	"""
	if t == 0:
		return 0.0
	if t > history.last:
		raise ConsistencyError(f"Kazanç geçmişi t={t} anına kadar tamamlanmamış (son {history.last})")
	source = history.cumulative if config.memory is Memory.LONG_TERM else history.gains
	return float(config.kernel[i] @ source[t][i])


def attraction_discount(q0: float, M: float) -> float:
	if M < 0:
		raise ConsistencyError(f"Bellek fonksiyoneli negatif olamaz: {M}")
	return q0 * np.exp(-M)


class IntelligenceNetwork:
	"""
	Ajan topluluğunun ardışık simülasyonu.
	"""

	def __init__(self, config: NetworkConfig, agents: Sequence[AgentState], horizon: Optional[int] = None):
		if len(agents) != config.N:
			raise ConsistencyError(f"{config.N} ajan bekleniyordu, {len(agents)} verildi")
		sizes = {agent.f.size for agent in agents}
		if len(sizes) != 1:
			raise ConsistencyError("Tüm ajanlar aynı sayıda alternatif içermeli")
		self.config = config
		self.horizon = config.horizon if horizon is None else horizon
		self.f = np.array([agent.f for agent in agents])
		self.q0 = np.array([agent.q0 for agent in agents])
		self.p_history = np.zeros((self.horizon + 1,) + self.f.shape)
		self.M_history = np.zeros((self.horizon + 1, config.N))
		self.p_history[0] = self.f + self.q0
		self.history = GainHistory(config.N, self.horizon)
		self.t = 0

	@property
	def p(self) -> np.ndarray:
		return self.p_history[self.t]

	@property
	def M(self) -> np.ndarray:
		return self.M_history[self.t]

	def agents(self) -> list[AgentState]:
		return [AgentState(self.f[i], self.q0[i], self.p[i].copy(), float(self.M[i])) for i in range(self.config.N)]

	def step(self) -> "IntelligenceNetwork":
		"""Bir zaman birimi ilerler: p(t+1) bellekten, ardından μ(t+1) ve M(t+1)."""
		if self.t >= self.horizon:
			raise ConsistencyError(f"Ufuk aşıldı: t={self.t}")
		nxt = self.t + 1
		lagged = nxt - self.config.tau
		# Gecikme dolmadan p başlangıç değerinde kalır
		if lagged < 0:
			p_next = self.p_history[0]
		else:
			p_next = self.f + self.q0 * np.exp(-self.M_history[lagged])[:, None]
		self.p_history[nxt] = p_next
		# Yeni durumdan kazançlar, ardından bellek
		self.history.record(nxt, pairwise_info_gain(p_next))
		for i in range(self.config.N):
			self.M_history[nxt, i] = memory_functional(self.history, self.config, i, nxt)
		self.t = nxt
		return self

	def run(self) -> "IntelligenceNetwork":
		while self.t < self.horizon:
			self.step()
		return self


def consensus_fixed_point(f1: float, f2: float, q1_0: float, q2_0: float) -> float:
	"""İki grup için ortak uzlaşı p* = (f1·q2 − f2·q1)/(q2 − q1)."""
	if abs(q2_0 - q1_0) <= TOLERANCES['strict']:
		raise DegenerateFixedPointError(f"q1(0) = q2(0) = {q1_0}, sabit nokta tanımsız")
	return (f1 * q2_0 - f2 * q1_0) / (q2_0 - q1_0)


def initial_relation(f1: float, f2: float, p1: float, p2: float) -> str:
	"""İki grubun başlangıç koşulu: 'accordance', 'discordance' veya 'neutral'."""
	sign = (f1 - f2) * (p1 - p2)
	if sign > 0:
		return 'accordance'
	if sign < 0:
		return 'discordance'
	return 'neutral'


@dataclass(frozen=True)
class RegimeResult:
	label: str
	converged: bool
	period: Optional[int] = None
	tail_change: float = 0.0


def _label_state(final: np.ndarray, f: np.ndarray, tol: float) -> str:
	if np.max(np.abs(final - f)) < tol:
		return 'rational-convention'
	if np.max(np.abs(final - final[0])) < tol:
		return 'common-convention'
	return 'group-conventions'


def detect_recurrence(series: np.ndarray, window: int, tol: float) -> Optional[int]:
	"""
	Son window durumda en kısa geri dönüş aralığı.

	s < t çifti, |x_t − x_s| < tol ise ve aradaki bir durum x_s'ten en az
	tol kadar uzaklaşmışsa geri dönüş sayılır. Tek yönlü sürüklenme bu
	koşulu sağlamaz.
	"""
	series = np.asarray(series, dtype=float)
	tail = series[-window:].reshape(min(window, len(series)), -1)
	best = None
	for s in range(len(tail) - 2):
		row = np.max(np.abs(tail[s + 1:] - tail[s]), axis=1)
		excursion = np.maximum.accumulate(row)
		hits = np.nonzero((row[1:] < tol) & (excursion[:-1] >= tol))[0]
		if hits.size:
			lag = int(hits[0]) + 2
			best = lag if best is None else min(best, lag)
			if best == 2:
				break
	return best


def classify_regime(series: np.ndarray, f: np.ndarray, tau: int = 1, **overrides) -> RegimeResult:
	"""
	Yörünge sonundaki davranışa göre rejim etiketi.

	Args:
		series: p değerleri, şekil (T+1, N, N_A)
		f: Rasyonel kesirler, şekil (N, N_A)
		tau (int): Karşılaştırma gecikmesi
		**overrides: CLASSIFIER_CONFIG anahtarları

	Returns:
		RegimeResult: etiket, yakınsama bayrağı ve varsa geri dönüş aralığı
	"""
	settings = {**CLASSIFIER_CONFIG, **overrides}
	series = np.asarray(series, dtype=float)
	f = np.asarray(f, dtype=float)
	window = settings['window']
	if len(series) <= tau:
		return RegimeResult(_label_state(series[-1], f, settings['label_tol']), False)
	changes = np.max(np.abs(series[tau:] - series[:-tau]), axis=tuple(range(1, series.ndim)))
	tail = changes[-window:]
	tail_change = float(tail.max())
	final = series[-1]
	# Son window adım boyunca durağan
	if len(changes) >= window and tail_change < settings['convergence_tol']:
		return RegimeResult(_label_state(final, f, settings['label_tol']), True, None, tail_change)
	# Yakınsamadı: tekrar ziyaret varsa kalıcı salınım
	period = detect_recurrence(series, settings['recurrence_window'], settings['recurrence_tol'])
	if period is not None:
		return RegimeResult('everlasting-fluctuations', False, period, tail_change)
	logger.warning("⚠️ Ufukta yakınsama yok ama tekrarlanan durum da yok (son değişim %.2e), son duruma göre etiketlendi",
		tail_change)
	return RegimeResult(_label_state(final, f, settings['label_tol']), False, None, tail_change)


@dataclass(eq=False)
class Trajectory:
	p: np.ndarray
	M: np.ndarray
	f: np.ndarray
	q0: np.ndarray
	regime: RegimeResult
	config: NetworkConfig = field(repr=False)

	@property
	def q(self) -> np.ndarray:
		return self.p - self.f[None, :, :]

	@property
	def horizon(self) -> int:
		return len(self.p) - 1

	def final(self) -> np.ndarray:
		return self.p[-1]

	def records(self) -> Iterator[tuple[int, int, int, float, float, float, float]]:
		"""(t, ajan, alternatif, f, q, p, M) satırları."""
		q = self.q
		for t in range(len(self.p)):
			for i in range(self.p.shape[1]):
				for n in range(self.p.shape[2]):
					yield t, i, n, self.f[i, n], q[t, i, n], self.p[t, i, n], self.M[t, i]


def simulate(config: NetworkConfig, agents: Sequence[AgentState], horizon: Optional[int] = None) -> Trajectory:
	network = IntelligenceNetwork(config, agents, horizon).run()
	# Her adımda satır toplamları 1 kalmalı
	row_error = float(np.max(np.abs(network.p_history.sum(axis=2) - 1.0)))
	if row_error > TOLERANCES['orthonormal']:
		raise ConsistencyError(f"Yörünge normalize değil (sapma {row_error:.3e})")
	regime = classify_regime(network.p_history, network.f, config.tau)
	logger.info("📊 Simülasyon tamamlandı: T=%d, rejim=%s", network.horizon, regime.label)
	return Trajectory(network.p_history, network.M_history, network.f, network.q0, regime, config)
