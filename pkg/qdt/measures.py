"""
Test edilebilir alternatifler için izdüşüm ölçüleri ve rastgele duygu
genlikleri taşıyan beklenti (prospect) operatörleri.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .config import FEELING_CONFIG, TOLERANCES
from .errors import ConsistencyError, LayoutError, UnnormalizedFeelingsError
from .state import DensityOperator
from .tensor import SpaceLayout, restrict, trace_product

logger = logging.getLogger(__name__)

DISTRIBUTIONS = ('gaussian', 'uniform-modulus')


@dataclass(frozen=True, eq=False)
class AlternativeSet:
	"""
	Alternatif faktördeki karşılıklı dik birim vektörler |A_n⟩ (satırlar).

	İndisler 0 tabanlıdır: A_1 ↔ n = 0. Vektörlerin tam bir baz
	oluşturması gerekmez.
	"""

	vectors: np.ndarray
	label: str = 'A'

	def __post_init__(self):
		vectors = np.atleast_2d(np.asarray(self.vectors, dtype=np.complex128))
		if vectors.shape[0] > vectors.shape[1]:
			raise LayoutError(f"{vectors.shape[1]} boyutlu uzayda {vectors.shape[0]} dik alternatif olamaz")
		gram = vectors.conj() @ vectors.T
		err = float(np.max(np.abs(gram - np.eye(vectors.shape[0]))))
		if err > TOLERANCES['orthonormal']:
			raise ConsistencyError(f"'{self.label}' alternatifleri ortonormal değil (sapma {err:.3e})")
		vectors.setflags(write=False)
		object.__setattr__(self, 'vectors', vectors)

	@classmethod
	def standard(cls, dim: int, label: str = 'A', count: Optional[int] = None) -> "AlternativeSet":
		return cls(np.eye(dim, dtype=np.complex128)[: count or dim], label)

	@property
	def count(self) -> int:
		return self.vectors.shape[0]

	@property
	def dim(self) -> int:
		return self.vectors.shape[1]

	@property
	def complete(self) -> bool:
		return self.count == self.dim

	@property
	def layout(self) -> SpaceLayout:
		return SpaceLayout.single(self.label, self.dim)

	def basis(self) -> np.ndarray:
		"""Sütun bazı; eksik alternatifler dik tümleyenle tamamlanır."""
		if self.complete:
			return self.vectors.T.copy()
		q, _ = np.linalg.qr(np.column_stack([self.vectors.T, np.eye(self.dim)]))
		out = q[:, : self.dim].copy()
		out[:, : self.count] = self.vectors.T
		return out


def projector(alts: AlternativeSet, n: int) -> np.ndarray:
	"""P(A_n) = |A_n⟩⟨A_n| (n 0 tabanlı)."""
	if not 0 <= n < alts.count:
		raise LayoutError(f"Alternatif indisi aralık dışında: {n} (0..{alts.count - 1})")
	v = alts.vectors[n]
	return np.outer(v, v.conj())


@dataclass(frozen=True, eq=False)
class FeelingAmplitudes:
	"""Duygu genlikleri b_{nα}; satırların normalize olması gerekmez."""

	b: np.ndarray
	seed: Optional[int] = None
	distribution: str = FEELING_CONFIG['distribution']

	def __post_init__(self):
		b = np.atleast_2d(np.asarray(self.b, dtype=np.complex128)).copy()
		b.setflags(write=False)
		object.__setattr__(self, 'b', b)

	@property
	def subject_dim(self) -> int:
		return self.b.shape[1]

	def norms(self) -> np.ndarray:
		"""⟨z_n|z_n⟩ = Σ_α |b_{nα}|²."""
		return np.sum(np.abs(self.b) ** 2, axis=1)

	def scaled(self, factor: float) -> "FeelingAmplitudes":
		return FeelingAmplitudes(self.b * factor, self.seed, self.distribution)


def sample_feelings(n_alts: int, subject_dim: int, seed: int = FEELING_CONFIG['seed'],
		distribution: str = FEELING_CONFIG['distribution'], scale: float = 1.0) -> FeelingAmplitudes:
	"""
	Tohumlu rastgele duygu genlikleri üretir.

	Args:
		n_alts (int): Alternatif sayısı
		subject_dim (int): Özne uzayı boyutu
		seed (int): RNG tohumu
		distribution (str): 'gaussian' (her reel bileşen N(0, scale²)) veya
			'uniform-modulus' (|b| = scale, faz düzgün)
		scale (float): Ölçek

	Returns:
		FeelingAmplitudes: (n_alts, subject_dim) genlikler
	"""
	if n_alts < 1 or subject_dim < 1:
		raise LayoutError(f"Boyutlar pozitif olmalı: {n_alts}, {subject_dim}")
	rng = np.random.default_rng(seed)
	shape = (n_alts, subject_dim)
	if distribution == 'gaussian':
		b = rng.normal(0.0, scale, size=shape) + 1j * rng.normal(0.0, scale, size=shape)
	elif distribution == 'uniform-modulus':
		b = scale * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, size=shape))
	else:
		raise ConsistencyError(f"Bilinmeyen dağılım '{distribution}', seçenekler {DISTRIBUTIONS}")
	return FeelingAmplitudes(b, seed, distribution)


@dataclass(frozen=True, eq=False)
class ProspectOperator:
	"""P(A_n z_n) = P(A_n) ⊗ |z_n⟩⟨z_n|, kendi (alternatif, özne) düzeniyle."""

	matrix: np.ndarray
	n: int
	layout: SpaceLayout

	@property
	def weight(self) -> float:
		"""Çarpım kuralındaki ⟨z_n|z_n⟩ sabiti."""
		return float(np.real(np.trace(self.matrix)))


def prospect_operator(alts: AlternativeSet, n: int, feelings: FeelingAmplitudes,
		subject_label: str = 'S') -> ProspectOperator:
	if feelings.b.shape[0] < alts.count:
		raise LayoutError(f"{alts.count} alternatif için duygu satırı eksik: {feelings.b.shape}")
	z = feelings.b[n]
	matrix = np.kron(projector(alts, n), np.outer(z, z.conj()))
	layout = SpaceLayout(((alts.label, alts.dim), (subject_label, feelings.subject_dim)))
	return ProspectOperator(matrix, n, layout)


def prospect_family(alts: AlternativeSet, feelings: FeelingAmplitudes,
		subject_label: str = 'S') -> list[ProspectOperator]:
	return [prospect_operator(alts, n, feelings, subject_label) for n in range(alts.count)]


def prospect_probability(state: DensityOperator, prospect: ProspectOperator) -> float:
	"""Tr(ρ P(A_n z_n)); durum daha büyük bir düzende olabilir."""
	for label, dim in prospect.layout.factors:
		if state.layout.dim(label) != dim:
			raise LayoutError(f"'{label}' faktör boyutu uyuşmuyor: {dim} / {state.layout.dim(label)}")
	rho = restrict(state.matrix, state.layout, prospect.layout.labels)
	return trace_product(rho, prospect.matrix).real


def check_resolution_weak(state: DensityOperator, prospects: Sequence[ProspectOperator]) -> float:
	"""|Tr(ρ Σ_n P(A_n z_n)) − 1| artığını döndürür."""
	return abs(sum(prospect_probability(state, p) for p in prospects) - 1.0)


def normalize_feelings(state: DensityOperator, alts: AlternativeSet, feelings: FeelingAmplitudes,
		subject_label: str = 'S') -> FeelingAmplitudes:
	"""
	Tüm genlikleri tek bir pozitif skalerle ölçekleyerek
	Σ_n Tr(ρ P(A_n z_n)) = 1 koşulunu sağlar.
	"""
	total = sum(prospect_probability(state, p) for p in prospect_family(alts, feelings, subject_label))
	if not total > TOLERANCES['strict']:
		raise UnnormalizedFeelingsError(f"Toplam beklenti ağırlığı sıfır: {total:.3e}")
	factor = 1.0 / np.sqrt(total)
	logger.debug("Duygu genlikleri %.6g katsayısıyla ölçeklendi", factor)
	return feelings.scaled(factor)
