"""
Davranışsal olasılığın rasyonel kesir f ve çekim faktörü q olarak
ayrıştırılması, zaman evrimi ve sönüm limitleri.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import BEHAVIOR_CONFIG, TOLERANCES
from .errors import ConsistencyError, LayoutError, UnnormalizedFeelingsError
from .measures import AlternativeSet, FeelingAmplitudes, normalize_feelings
from .state import DensityOperator, EvolutionGenerator, evolve, evolve_window_average
from .tensor import restrict

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BehavioralProbability:
	"""
	p = f + q üçlüsü.

	interference, köşegen dışı (α ≠ β) ham toplamdır; q ise normalize
	edilmiş f ile p arasındaki farktır.
	"""

	f: float
	q: float
	p: float
	alternative: int
	time: float
	interference: float = 0.0


def _alternative_blocks(state: DensityOperator, alts: AlternativeSet, subject_label: str) -> np.ndarray:
	"""Her n için M_n[α, β] = ⟨α A_n|ρ|A_n β⟩ blokları, şekil (N_A, d_S, d_S)."""
	if state.layout.dim(alts.label) != alts.dim:
		raise LayoutError(f"'{alts.label}' faktör boyutu alternatiflerle uyuşmuyor")
	d_s = state.layout.dim(subject_label)
	rho = restrict(state.matrix, state.layout, [alts.label, subject_label])
	tensor = rho.reshape(alts.dim, d_s, alts.dim, d_s)
	return np.einsum('ni,iajb,nj->nab', alts.vectors.conj(), tensor, alts.vectors)


def _raw_components(state: DensityOperator, alts: AlternativeSet, feelings: FeelingAmplitudes,
		subject_label: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
	blocks = _alternative_blocks(state, alts, subject_label)
	b = feelings.b[: alts.count]
	if b.shape[1] != blocks.shape[1]:
		raise LayoutError(f"Duygu genlikleri özne boyutu {b.shape[1]}, durum {blocks.shape[1]}")
	diagonal = np.einsum('na,naa->n', np.abs(b) ** 2, blocks).real
	full = np.einsum('na,nab,nb->n', b.conj(), blocks, b)
	interference = full - diagonal
	residue = float(np.max(np.abs(interference.imag)))
	if residue > TOLERANCES['imag_residue']:
		raise ConsistencyError(f"Çekim faktörünün sanal artığı çok büyük: {residue:.3e}")
	return diagonal, interference.real, full.real


def decompose_all(state: DensityOperator, alts: AlternativeSet, feelings: FeelingAmplitudes, t: float = 0.0,
		subject_label: str = 'S') -> list[BehavioralProbability]:
	"""
	Tüm alternatifler için (f, q, p) ayrıştırması.

	Duygular Σ_n p(A_n) = 1 olacak şekilde normalize edilmiş olmalıdır.
	"""
	diagonal, interference, p = _raw_components(state, alts, feelings, subject_label)
	if abs(p.sum() - 1.0) > TOLERANCES['imag_residue']:
		raise UnnormalizedFeelingsError(f"Duygular normalize değil: Σp = {p.sum():.12g}")
	total = diagonal.sum()
	if not total > TOLERANCES['strict']:
		raise UnnormalizedFeelingsError("Köşegen ağırlıklar toplamı sıfır")
	f = diagonal / total
	out = []
	for n in range(alts.count):
		q = float(p[n] - f[n])
		out.append(BehavioralProbability(
			f=float(f[n]), q=q, p=float(f[n]) + q, alternative=n, time=t, interference=float(interference[n])
		))
	return out


def decompose(state: DensityOperator, alts: AlternativeSet, feelings: FeelingAmplitudes, n: int,
		t: float = 0.0, subject_label: str = 'S') -> BehavioralProbability:
	if not 0 <= n < alts.count:
		raise LayoutError(f"Alternatif indisi aralık dışında: {n}")
	return decompose_all(state, alts, feelings, t, subject_label)[n]


def observed_state(state0: DensityOperator, gen: EvolutionGenerator, t: float,
		window: Optional[float] = None) -> DensityOperator:
	"""t anında gözlem aralığı boyunca ortalanmış durum; window=0 anlık durumu verir."""
	if gen.layout != state0.layout:
		gen = gen.embed(state0.layout)
	width = BEHAVIOR_CONFIG['observation_window'] if window is None else window
	if width == 0:
		return evolve(state0, gen, 0.0, t)
	return evolve_window_average(state0, gen, t, width)


def behavioral_snapshot(state0: DensityOperator, gen: EvolutionGenerator, alts: AlternativeSet,
		feelings: FeelingAmplitudes, t: float, g: Optional[float] = None,
		window: Optional[float] = None, subject_label: str = 'S') -> list[BehavioralProbability]:
	if g is not None:
		gen = gen.with_rate(g)
	state_t = observed_state(state0, gen, t, window)
	# Zayıf birim çözünürlüğü her t anında yeniden sağlanır
	feelings_t = normalize_feelings(state_t, alts, feelings, subject_label)
	return decompose_all(state_t, alts, feelings_t, t, subject_label)


def evolve_behavioral(state0: DensityOperator, gen: EvolutionGenerator, alts: AlternativeSet,
		feelings: FeelingAmplitudes, n: int, t: float, g: Optional[float] = None,
		window: Optional[float] = None, subject_label: str = 'S') -> BehavioralProbability:
	"""
	A_n için t anındaki davranışsal olasılık.

	Args:
		state0: Başlangıç durumu (alternatif ⊗ özne)
		gen: Evrim üreteci
		alts: Alternatifler
		feelings: Duygu genlikleri (her t anında yeniden normalize edilir)
		n (int): Alternatif indisi
		t (float): Zaman
		g (float): Hız parametresi; verilirse üretecin hızı yerine geçer
		window (float): Gözlem aralığı genişliği (varsayılan BEHAVIOR_CONFIG)

	Returns:
		BehavioralProbability: (f, q, p)
	"""
	return behavioral_snapshot(state0, gen, alts, feelings, t, g, window, subject_label)[n]


def behavioral_trajectory(state0: DensityOperator, gen: EvolutionGenerator, alts: AlternativeSet,
		feelings: FeelingAmplitudes, times: Sequence[float], g: Optional[float] = None,
		window: Optional[float] = None,
		subject_label: str = 'S') -> list[list[BehavioralProbability]]:
	return [behavioral_snapshot(state0, gen, alts, feelings, t, g, window, subject_label) for t in times]


def correspondence_check(sequence: Sequence[BehavioralProbability],
		tol: float = BEHAVIOR_CONFIG['fast_tolerance']) -> bool:
	"""|p − f| = |q| her noktada ve son |q| toleransın altında ise True."""
	if not sequence:
		return False
	magnitudes = np.array([abs(item.q) for item in sequence])
	if np.any(np.diff(magnitudes) > TOLERANCES['compare']):
		logger.warning("⚠️ |q| dizisi monoton azalmıyor, yalnızca uç nokta değerlendiriliyor")
	consistent = all(abs(abs(item.p - item.f) - abs(item.q)) <= TOLERANCES['strict'] for item in sequence)
	return bool(consistent and magnitudes[-1] <= tol)
