"""
Olasılık formülleri: tekil, evrilmiş, karar sonrası, Lüders/Wigner,
ardışık ortak olasılık, davranışsal ortak olasılık, Kirkwood dağılımı ve
yavaş/hızlı limitler.

Fonksiyonlar ham float döndürür; küçük negatif yuvarlama hataları yalnızca
ProbabilityRecord.reported() ile raporlama sınırında kırpılır.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .config import TOLERANCES
from .errors import ConsistencyError, LayoutError, UnnormalizedFeelingsError, WindowError
from .measures import AlternativeSet, FeelingAmplitudes, ProspectOperator, prospect_family, projector
from .state import (
	DecisionWindow,
	DensityOperator,
	EvolutionGenerator,
	dephase,
	evolve,
	luders_update,
)
from .tensor import as_matrix, embed_operator, restrict, trace_product

REGIMES = ('exact', 'slow', 'fast')


def clamp_probability(value: float) -> float:
	return min(1.0, max(0.0, value))


@dataclass(frozen=True)
class ProbabilityRecord:
	value: float
	time: float
	context: dict[str, Any] = field(default_factory=dict)

	def reported(self) -> float:
		return clamp_probability(self.value)


@dataclass(frozen=True)
class JointProbabilityRecord:
	value: float
	order: tuple[str, str]
	time: float
	first: int
	second: int
	imag_residue: float = 0.0

	def reported(self) -> float:
		return clamp_probability(self.value)


def _factor_projector(state: DensityOperator, proj, label: str) -> np.ndarray:
	"""Tek faktörlü izdüşümü durumun tam düzenine taşır."""
	p = as_matrix(proj)
	if p.shape == (state.dim, state.dim) and label not in state.layout.labels:
		return p
	return embed_operator(p, state.layout.subset([label]), state.layout)


def single_probability(state: DensityOperator, proj, label: str = 'A') -> float:
	"""
	Tr(ρ_A P(A_n)); bileşik durumda ρ_A kısmi izle elde edilir.
	"""
	p = as_matrix(proj)
	if p.shape == (state.dim, state.dim) and (label not in state.layout.labels or len(state.layout.factors) == 1):
		return trace_product(state.matrix, p).real
	rho_a = restrict(state.matrix, state.layout, [label])
	if rho_a.shape != p.shape:
		raise LayoutError(f"İzdüşüm şekli {p.shape}, '{label}' faktörü {rho_a.shape} ile uyuşmuyor")
	return trace_product(rho_a, p).real


def _aligned(state: DensityOperator, gen: EvolutionGenerator) -> EvolutionGenerator:
	if gen.layout == state.layout:
		return gen
	return gen.embed(state.layout)


def evolved_probability(state0: DensityOperator, gen: EvolutionGenerator, proj, t: float,
		label: str = 'A') -> float:
	"""
	Özbazdaki açık çift toplam:
	p(t) = Σ_{u,v} e^{−iΦ_u} ρ_uv e^{iΦ_v} ⟨v|P ⊗ 1|u⟩.

	Sonuç evolve yoluyla çapraz kontrol edilir.
	"""
	gen = _aligned(state0, gen)
	if t == 0:
		return single_probability(state0, proj, label)
	ph = np.exp(-1j * gen.integrated(0.0, t))
	rho = gen.basis.conj().T @ state0.matrix @ gen.basis
	p_full = gen.basis.conj().T @ _factor_projector(state0, proj, label) @ gen.basis
	value = np.sum(ph[:, None] * rho * ph.conj()[None, :] * p_full.T)
	check = single_probability(evolve(state0, gen, 0.0, t), proj, label)
	if abs(value.real - check) > TOLERANCES['compare'] or abs(value.imag) > TOLERANCES['imag_residue']:
		raise ConsistencyError(f"Evrilmiş olasılık çapraz kontrolü başarısız: {value} / {check}")
	return float(value.real)


def fast_limit_state(state: DensityOperator, gen: EvolutionGenerator) -> DensityOperator:
	"""Üretecin özbazında sönümlenmiş durum (dejenere olmayan enerjiler)."""
	return dephase(state, _aligned(state, gen).basis)


def limit_probability(state0: DensityOperator, gen: EvolutionGenerator, proj, t: float, mode: str,
		label: str = 'A') -> float:
	"""
	Yavaş limit: Tr(ρ_A(0)P). Hızlı limit: özbazda sönümlenmiş durumun
	olasılığı; çarpım özbazında bu, ρ_A'nın alternatif bazında
	sönümlenmesiyle aynıdır. t, kayıt bağlamı içindir.
	"""
	if mode == 'slow':
		return single_probability(state0, proj, label)
	if mode == 'fast':
		return single_probability(fast_limit_state(state0, gen), proj, label)
	raise ConsistencyError(f"Bilinmeyen limit kipi '{mode}'")


def post_decision_probability(state: DensityOperator, gen: EvolutionGenerator, alts: AlternativeSet,
		chosen: int, t_n: float, target: int, t: float,
		regime: str = 'exact') -> float:
	"""
	t_n anında A_n seçildikten sonra t anında A_m olasılığı.

	Args:
		state: Başlangıç durumu ρ(0)
		gen: Evrim üreteci
		alts: Alternatifler (alts.label faktöründe)
		chosen (int): Seçilen alternatif n
		t_n (float): Karar anı
		target (int): Hedef alternatif m
		t (float): Değerlendirme anı, t ≥ t_n
		regime (str): 'exact', 'slow' veya 'fast'

	Returns:
		float: p(A_m, t) Lüders başlangıç koşulu ile
	"""
	if regime not in REGIMES:
		raise ConsistencyError(f"Bilinmeyen rejim '{regime}', seçenekler {REGIMES}")
	if t < t_n:
		raise WindowError(f"Değerlendirme anı karar anından önce: t={t} < t_n={t_n}")
	gen = _aligned(state, gen)
	if regime == 'exact':
		before = evolve(state, gen, 0.0, t_n)
	elif regime == 'slow':
		before = state
	else:
		before = fast_limit_state(state, gen)

	conditioned = luders_update(before, _factor_projector(state, projector(alts, chosen), alts.label))
	target_proj = projector(alts, target)
	if regime == 'exact':
		after = evolve(conditioned, gen, t_n, t)
	elif regime == 'slow':
		after = conditioned
	else:
		after = fast_limit_state(conditioned, gen)
	return single_probability(after, target_proj, alts.label)


def _reduced_alternative_state(state: DensityOperator, label: str) -> DensityOperator:
	if len(state.layout.factors) == 1:
		return state
	return state.reduced([label])


def _state_at(state: DensityOperator, gen: Optional[EvolutionGenerator], t: Optional[float]) -> DensityOperator:
	"""ρ(t). Üreteç yoksa state zaten istenen ana ait kabul edilir."""
	if gen is None:
		if t is not None:
			raise ConsistencyError(f"t={t} verildi ama üreteç yok")
		return state
	return evolve(state, _aligned(state, gen), 0.0, 0.0 if t is None else t)


def luders_probability(state: DensityOperator, proj_n, proj_m, label: str = 'A', *,
		gen: Optional[EvolutionGenerator] = None, t: Optional[float] = None) -> float:
	"""
	Tr(ρ_L P(A_m)), ρ_L = P_n ρ_A(t_n) P_n / Tr(ρ_A(t_n) P_n).

	gen ve t verilirse state ρ(0) sayılır ve t_n = t anına evrilir; aksi
	halde state'in ρ(t_n) olduğu varsayılır. Saf alternatiflerde
	|⟨A_m|A_n⟩|² değerine eşittir.
	"""
	rho_a = _reduced_alternative_state(_state_at(state, gen, t), label)
	return trace_product(luders_update(rho_a, proj_n).matrix, as_matrix(proj_m)).real


def wigner_probability(state: DensityOperator, proj_n, proj_m, label: str = 'A', *,
		gen: Optional[EvolutionGenerator] = None, t: Optional[float] = None) -> float:
	"""Tr(P_n ρ_A(t_n) P_n P_m); zaman davranışı luders_probability ile aynıdır."""
	rho_a = _reduced_alternative_state(_state_at(state, gen, t), label).matrix
	p_n = as_matrix(proj_n)
	return trace_product(p_n @ rho_a @ p_n, as_matrix(proj_m)).real


@dataclass(frozen=True)
class DecisionStage:
	"""Bir karar penceresinde etkin olan (alternatif ⊗ özne) üreteci."""

	generator: EvolutionGenerator
	window: DecisionWindow
	label: str = 'A'


@dataclass(frozen=True)
class DecisionSequence:
	"""
	Ardışık iki karar: önce first.window, sonra second.window.

	Pencereler arasında üreteç sıfırdır.
	"""

	first: DecisionStage
	second: DecisionStage

	def __post_init__(self):
		if self.second.window.t_start < self.first.window.end:
			raise WindowError(
				f"Karar pencereleri çakışıyor: [{self.first.window.t_start}, {self.first.window.end}] "
				f"ve [{self.second.window.t_start}, {self.second.window.end}]"
			)

	@property
	def order(self) -> tuple[str, str]:
		return (self.first.label, self.second.label)

	def swapped(self) -> "DecisionSequence":
		"""Aynı pencerelerle karar sırası ters çevrilmiş dizi."""
		return DecisionSequence(
			DecisionStage(self.second.generator, self.first.window, self.second.label),
			DecisionStage(self.first.generator, self.second.window, self.first.label),
		)


def sequence_state(state0: DensityOperator, sequence: DecisionSequence, t: float) -> DensityOperator:
	"""Her aşama yalnızca penceresinin [0, t] ile kesişiminde evrilir."""
	rho = state0
	for stage in (sequence.first, sequence.second):
		start = stage.window.t_start
		end = min(stage.window.end, t)
		if end > start:
			rho = evolve(rho, _aligned(rho, stage.generator), start, end)
	return rho


def joint_probability(state0: DensityOperator, sequence: DecisionSequence, alts_a: AlternativeSet, n: int,
		alts_b: AlternativeSet, k: int, t: float) -> JointProbabilityRecord:
	"""
	Ardışık karar ortak olasılığı Tr(ρ(t) P(A_n) ⊗ P(B_k)).

	Karar sırası dizide kodludur; negatif t, ters sıralı dizinin |t|
	anındaki değerini verir.
	"""
	if t < 0:
		sequence = sequence.swapped()
		t = -t
	rho = sequence_state(state0, sequence, t)
	op = embed_operator(
		np.kron(projector(alts_a, n), projector(alts_b, k)),
		rho.layout.subset([alts_a.label, alts_b.label]),
		rho.layout,
	)
	value = trace_product(rho.matrix, op)
	if abs(value.imag) > TOLERANCES['strict']:
		raise ConsistencyError(f"Ortak olasılığın sanal artığı çok büyük: {value.imag:.3e}")
	return JointProbabilityRecord(
		value=value.real, order=sequence.order, time=t, first=n, second=k, imag_residue=abs(value.imag)
	)


def joint_table(state0: DensityOperator, sequence: DecisionSequence, alts_a: AlternativeSet,
		alts_b: AlternativeSet, t: float) -> np.ndarray:
	return np.array([
		[joint_probability(state0, sequence, alts_a, n, alts_b, k, t).value for k in range(alts_b.count)]
		for n in range(alts_a.count)
	])


def marginal_probability(state0: DensityOperator, sequence: DecisionSequence, alts: AlternativeSet, n: int,
		t: float) -> float:
	"""Dizi altında evrilmiş durumda tek faktör olasılığı Tr(ρ(t) P(A_n) ⊗ 1)."""
	if t < 0:
		sequence = sequence.swapped()
		t = -t
	rho = sequence_state(state0, sequence, t)
	return single_probability(rho, projector(alts, n), alts.label)


def behavioral_joint(state: DensityOperator, prospect_a: ProspectOperator, prospect_b: ProspectOperator, *,
		gen: Optional[EvolutionGenerator] = None, t: Optional[float] = None) -> float:
	"""
	Tr(ρ(t) P(A_n z_n) ⊗ P(B_k z_k)).

	İki beklenti ailesi kendi özne faktörlerini taşır; faktörler ayrık
	olmalıdır. gen ve t verilirse state ρ(0) sayılıp t anına evrilir,
	verilmezse state doğrudan ρ(t) olarak kullanılır.
	"""
	state = _state_at(state, gen, t)
	overlap = set(prospect_a.layout.labels) & set(prospect_b.layout.labels)
	if overlap:
		raise LayoutError(f"Beklenti operatörleri ortak faktör paylaşıyor: {sorted(overlap)}")
	labels = prospect_a.layout.labels + prospect_b.layout.labels
	rho = restrict(state.matrix, state.layout, labels)
	return trace_product(rho, np.kron(prospect_a.matrix, prospect_b.matrix)).real


def behavioral_joint_table(state: DensityOperator, family_a: Sequence[ProspectOperator],
		family_b: Sequence[ProspectOperator]) -> np.ndarray:
	return np.array([[behavioral_joint(state, pa, pb) for pb in family_b] for pa in family_a])


def normalize_joint_feelings(state: DensityOperator, alts_a: AlternativeSet, feelings_a: FeelingAmplitudes,
		alts_b: AlternativeSet, feelings_b: FeelingAmplitudes,
		subject_a: str = 'SA', subject_b: str = 'SB') -> tuple[FeelingAmplitudes, FeelingAmplitudes]:
	"""İki aileyi ortak bir skalerle ölçekler; (n, k) toplamı 1 olur."""
	table = behavioral_joint_table(
		state, prospect_family(alts_a, feelings_a, subject_a), prospect_family(alts_b, feelings_b, subject_b)
	)
	total = float(table.sum())
	if not total > TOLERANCES['strict']:
		raise UnnormalizedFeelingsError(f"Ortak beklenti ağırlığı sıfır: {total:.3e}")
	factor = total ** -0.25
	return feelings_a.scaled(factor), feelings_b.scaled(factor)


def kirkwood(state_a: DensityOperator, proj_b, proj_a, label: str = 'A') -> complex:
	"""Tr(ρ_A P(B_k) P(A_n)); aynı uzaydaki olaylar için genelde kompleks."""
	rho_a = _reduced_alternative_state(state_a, label).matrix
	p_b = as_matrix(proj_b)
	p_a = as_matrix(proj_a)
	if p_b.shape != rho_a.shape or p_a.shape != rho_a.shape:
		raise LayoutError(f"Kirkwood için izdüşümler aynı faktörde olmalı: {p_b.shape}, {p_a.shape} / {rho_a.shape}")
	return trace_product(rho_a, p_b @ p_a)


def context(state_id: Optional[str] = None, generator_id: Optional[str] = None,
		window: Optional[DecisionWindow] = None) -> dict[str, Any]:
	"""ProbabilityRecord için koşullama bağlamı."""
	out: dict[str, Any] = {}
	if state_id is not None:
		out['state'] = state_id
	if generator_id is not None:
		out['generator'] = generator_id
	if window is not None:
		out['window'] = (window.t_start, window.duration)
	return out
