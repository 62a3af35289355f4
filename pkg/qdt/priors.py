"""
Başlangıç anı değerlendirmesi: piyangolardan Luce ağırlıkları, fayda
kaydırma, çeyrek yasası ve ±0.25 toplu kuralı.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .config import TOLERANCES
from .errors import ConsistencyError

logger = logging.getLogger(__name__)

QUARTER = 0.25


@dataclass(frozen=True)
class Lottery:
	"""Sonuçlar (x_i, p(x_i)); olasılıklar toplamı 1."""

	outcomes: tuple[tuple[float, float], ...]

	def __post_init__(self):
		outcomes = tuple((float(x), float(p)) for x, p in self.outcomes)
		if not outcomes:
			raise ConsistencyError("Piyango en az bir sonuç içermeli")
		probs = np.array([p for _, p in outcomes])
		if np.any(probs < 0) or np.any(probs > 1):
			raise ConsistencyError(f"Piyango olasılıkları [0, 1] dışında: {probs}")
		if abs(probs.sum() - 1.0) > TOLERANCES['orthonormal']:
			raise ConsistencyError(f"Piyango olasılıkları toplamı 1 değil: {probs.sum()}")
		object.__setattr__(self, 'outcomes', outcomes)


@dataclass(frozen=True)
class UtilityProfile:
	utilities: tuple[float, ...]
	wealth_shift: float
	attributes: tuple[float, ...]


def expected_utility(lottery: Lottery, u: Callable[[float], float] = lambda x: x) -> float:
	return float(sum(u(x) * p for x, p in lottery.outcomes))


def attributes_from_utilities(utilities: Sequence[float]) -> UtilityProfile:
	"""
	Faydalardan Luce özniteliklerine geçiş.

	Tümü negatif değilse a_n = U_n; tümü negatifse a_n = 1/|U_n|; karışık
	işaretlerde U₀ = |min U| kadar kaydırılıp negatif olmayan kural
	uygulanır. Sıfır faydalar negatif olmayan sayılır.
	"""
	values = tuple(float(u) for u in utilities)
	if not values:
		raise ConsistencyError("Fayda listesi boş")
	arr = np.array(values)
	if np.all(arr >= 0):
		return UtilityProfile(values, 0.0, values)
	if np.all(arr < 0):
		return UtilityProfile(values, 0.0, tuple(1.0 / np.abs(arr)))
	shift = abs(float(arr.min()))
	return UtilityProfile(values, shift, tuple(arr + shift))


def luce_weights(profile: UtilityProfile) -> np.ndarray:
	"""f_n = a_n / Σ a_m."""
	a = np.asarray(profile.attributes, dtype=float)
	if np.any(a < 0):
		raise ConsistencyError(f"Öznitelikler negatif olamaz: {a}")
	total = a.sum()
	if total <= 0:
		raise ConsistencyError("Tüm öznitelikler sıfır, Luce ağırlıkları tanımsız")
	return a / total


def lottery_fractions(lotteries: Sequence[Lottery], u: Callable[[float], float] = lambda x: x) -> np.ndarray:
	"""Piyangolar -> beklenen fayda -> öznitelik -> rasyonel kesirler."""
	utilities = [expected_utility(lottery, u) for lottery in lotteries]
	return luce_weights(attributes_from_utilities(utilities))


@dataclass(frozen=True)
class PriorDensity:
	"""[−1, 1] üzerinde çekim faktörü öncül yoğunluğu φ."""

	phi: Callable[[float], float]
	name: str = 'custom'

	def __post_init__(self):
		# φ ≥ 0 örnekleme ızgarasında denetlenir
		grid = np.linspace(-1.0, 1.0, 2001)
		values = np.array([float(self.phi(x)) for x in grid])
		if np.min(values) < -TOLERANCES['compare']:
			x = grid[int(np.argmin(values))]
			raise ConsistencyError(f"Öncül yoğunluk negatif: φ({x:.3f}) = {np.min(values):.4g}")

	def mass(self, a: float = -1.0, b: float = 1.0) -> float:
		value, _ = integrate.quad(self.phi, a, b, epsabs=1e-12)
		return value

	@classmethod
	def uniform(cls) -> "PriorDensity":
		return cls(lambda x: 0.5, 'uniform')


def quarter_law(prior: PriorDensity) -> tuple[float, float]:
	"""
	q₊ = ∫₀¹ xφ dx ve q₋ = ∫₋₁⁰ xφ dx.

	Bilgi vermeyen öncül, [−1, 1] üzerinde düzgün yoğunluk olarak alınır;
	bu durumda λ± = ±1 sınırları arasındaki ortalama x± = ±1/2, ağırlıklar
	1/2 olur ve q± = ±1/4 elde edilir.
	"""
	mass = prior.mass()
	if abs(mass - 1.0) > 1e-8:
		raise ConsistencyError(f"Öncül yoğunluk normalize değil: ∫φ = {mass:.10g}")
	q_plus, _ = integrate.quad(lambda x: x * prior.phi(x), 0.0, 1.0, epsabs=1e-12)
	q_minus, _ = integrate.quad(lambda x: x * prior.phi(x), -1.0, 0.0, epsabs=1e-12)
	return q_plus, q_minus


class Attitude(str, Enum):
	ATTRACTIVE = 'attractive'
	REPULSIVE = 'repulsive'
	NEUTRAL = 'neutral'

	@property
	def attraction(self) -> float:
		return {'attractive': QUARTER, 'repulsive': -QUARTER, 'neutral': 0.0}[self.value]


@dataclass(frozen=True)
class AggregateProbability:
	value: float
	fraction: float
	attraction: float
	out_of_range: bool


def aggregate_probability(f: float, attitude) -> AggregateProbability:
	"""p = f + q, q ∈ {+0.25, −0.25, 0}; [0, 1] dışı değerler bayrakla işaretlenir, kırpılmaz."""
	if not 0.0 <= f <= 1.0:
		raise ConsistencyError(f"Rasyonel kesir [0, 1] dışında: {f}")
	attitude = Attitude(attitude)
	q = attitude.attraction
	value = f + q
	out_of_range = not (-TOLERANCES['compare'] <= value <= 1.0 + TOLERANCES['compare'])
	if out_of_range:
		logger.warning("⚠️ Toplu olasılık aralık dışında: f=%.4f, q=%+.2f", f, q)
	return AggregateProbability(value=value, fraction=f, attraction=q, out_of_range=out_of_range)
