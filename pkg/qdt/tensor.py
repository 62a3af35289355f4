"""
Yoğun kompleks lineer cebir: tensör çarpımı, iz ve etiketli faktörler
üzerinden kısmi iz.

Karmaşık matrisler complex128 tipinde iki boyutlu numpy dizileridir.
Bileşik indisler, SpaceLayout içindeki faktör sırasına göre karışık tabanlı
(mixed-radix) kodlanır.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

from .config import TOLERANCES
from .errors import LayoutError


def as_matrix(m) -> np.ndarray:
	arr = np.asarray(m, dtype=np.complex128)
	if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
		raise LayoutError(f"İki boyutlu boş olmayan matris bekleniyordu, gelen şekil {arr.shape}")
	return arr


def is_hermitian(m: np.ndarray, tol: float = TOLERANCES['hermitian']) -> bool:
	m = as_matrix(m)
	if m.shape[0] != m.shape[1]:
		return False
	return bool(np.max(np.abs(m - m.conj().T)) <= tol)


@dataclass(frozen=True)
class SpaceLayout:
	"""
	Karar uzayının sıralı faktör listesi, örn. (("A", 2), ("B", 2), ("S", 3)).

	Faktör sırası anlamlıdır ve bileşik indisleri belirler.
	"""

	factors: tuple[tuple[str, int], ...]

	def __post_init__(self):
		factors = tuple((str(label), int(dim)) for label, dim in self.factors)
		if not factors:
			raise LayoutError("Düzen en az bir faktör içermelidir")
		labels = [label for label, _ in factors]
		if len(set(labels)) != len(labels):
			raise LayoutError(f"Faktör etiketleri benzersiz olmalı: {labels}")
		for label, dim in factors:
			if dim < 1:
				raise LayoutError(f"{label} faktörünün boyutu pozitif olmalı: {dim}")
		object.__setattr__(self, 'factors', factors)

	@classmethod
	def from_pairs(cls, pairs: Iterable[tuple[str, int]]) -> "SpaceLayout":
		return cls(tuple(pairs))

	@classmethod
	def single(cls, label: str, dim: int) -> "SpaceLayout":
		return cls(((label, dim),))

	@property
	def labels(self) -> tuple[str, ...]:
		return tuple(label for label, _ in self.factors)

	@property
	def dims(self) -> tuple[int, ...]:
		return tuple(dim for _, dim in self.factors)

	@property
	def total_dim(self) -> int:
		return int(np.prod(self.dims))

	def index(self, label: str) -> int:
		try:
			return self.labels.index(label)
		except ValueError:
			raise LayoutError(f"Düzende '{label}' faktörü yok: {self.labels}") from None

	def dim(self, label: str) -> int:
		return self.dims[self.index(label)]

	def subset(self, labels: Sequence[str]) -> "SpaceLayout":
		"""Verilen sırayla seçilen faktörlerden yeni düzen."""
		return SpaceLayout(tuple((label, self.dim(label)) for label in labels))

	def extend(self, label: str, dim: int) -> "SpaceLayout":
		return SpaceLayout(self.factors + ((label, dim),))

	def complement(self, labels: Iterable[str]) -> tuple[str, ...]:
		chosen = set(labels)
		return tuple(label for label in self.labels if label not in chosen)


def tensor_product(a, b) -> np.ndarray:
	return np.kron(as_matrix(a), as_matrix(b))


def kron_all(matrices: Sequence) -> np.ndarray:
	return reduce(np.kron, (as_matrix(m) for m in matrices))


def _check_square(m: np.ndarray, layout: SpaceLayout) -> None:
	if m.shape != (layout.total_dim, layout.total_dim):
		raise LayoutError(
			f"Matris şekli {m.shape} düzen boyutu {layout.total_dim} ile uyuşmuyor ({layout.factors})"
		)


def partial_trace(m, layout: SpaceLayout, keep: Iterable[str]) -> np.ndarray:
	"""
	İzlenmeyen faktörler üzerinden kısmi iz alır.

	Args:
		m: Düzen üzerinde kare matris
		layout: Faktör düzeni
		keep: Tutulacak etiketler (boş olmayan alt küme)

	Returns:
		np.ndarray: Tutulan faktörler üzerinde (düzen sırasıyla) matris
	"""
	m = as_matrix(m)
	_check_square(m, layout)
	keep = set(keep)
	unknown = keep - set(layout.labels)
	if not keep or unknown:
		raise LayoutError(f"Geçersiz tutulacak faktörler: {sorted(keep)} / düzen {layout.labels}")
	if keep == set(layout.labels):
		return m.copy()

	n = len(layout.factors)
	tensor = m.reshape(layout.dims + layout.dims)
	row_axes = list(range(n))
	col_axes = [n + i if label in keep else i for i, label in enumerate(layout.labels)]
	kept = [i for i, label in enumerate(layout.labels) if label in keep]
	out_axes = kept + [n + i for i in kept]
	reduced = np.einsum(tensor, row_axes + col_axes, out_axes)
	kept_dim = int(np.prod([layout.dims[i] for i in kept]))
	return reduced.reshape(kept_dim, kept_dim)


def trace_product(rho, op) -> complex:
	rho = as_matrix(rho)
	op = as_matrix(op)
	if rho.shape[0] != rho.shape[1] or rho.shape != op.shape:
		raise LayoutError(f"İz çarpımı için eşit boyutlu kare matrisler gerekli: {rho.shape} / {op.shape}")
	# Tr(ρ·O) = Σ_ij ρ_ij O_ji
	return complex(np.sum(rho * op.T))


def reorder(m, layout: SpaceLayout, labels: Sequence[str]) -> np.ndarray:
	"""Matrisi, faktörleri labels sırasına dizilmiş düzene taşır."""
	m = as_matrix(m)
	_check_square(m, layout)
	if sorted(labels) != sorted(layout.labels):
		raise LayoutError(f"Yeniden sıralama tüm faktörleri içermeli: {labels} / {layout.labels}")
	n = len(layout.factors)
	perm = [layout.index(label) for label in labels]
	tensor = m.reshape(layout.dims + layout.dims).transpose(perm + [n + p for p in perm])
	return tensor.reshape(m.shape)


def embed_operator(op, sub_layout: SpaceLayout, full_layout: SpaceLayout) -> np.ndarray:
	"""
	Faktörlerin bir alt kümesi üzerindeki operatörü, eksik faktörlerde birim
	operatörle tam düzene genişletir.
	"""
	op = as_matrix(op)
	_check_square(op, sub_layout)
	for label, dim in sub_layout.factors:
		if full_layout.dim(label) != dim:
			raise LayoutError(f"'{label}' faktör boyutu uyuşmuyor: {dim} / {full_layout.dim(label)}")
	rest = full_layout.complement(sub_layout.labels)
	if not rest:
		return reorder(op, sub_layout, full_layout.labels)
	rest_dim = int(np.prod([full_layout.dim(label) for label in rest]))
	big = np.kron(op, np.eye(rest_dim, dtype=np.complex128))
	staged = full_layout.subset(sub_layout.labels + rest)
	return reorder(big, staged, full_layout.labels)


def restrict(m, layout: SpaceLayout, labels: Sequence[str]) -> np.ndarray:
	"""Kısmi iz alıp sonucu labels sırasındaki faktör düzenine getirir."""
	kept_in_order = [label for label in layout.labels if label in set(labels)]
	if len(kept_in_order) != len(labels):
		raise LayoutError(f"Düzende bulunmayan faktör: {labels} / {layout.labels}")
	reduced = partial_trace(m, layout, kept_in_order)
	return reorder(reduced, layout.subset(kept_in_order), labels)
