"""
Karar durumları, öz-benzer evrim üreteçleri ve unitary yayılım.

Üreteçler her zaman sabit bir özbaz ile zamana bağlı gerçek özdeğer
fonksiyonları E(t, g) olarak tanımlanır; böylece Lappo-Danilevsky koşulu
yapı gereği sağlanır. Ham H(t) matrisleri yalnızca RawGenerator üzerinden,
check_self_similarity kontrolüne girer.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence, Union

import numpy as np
from scipy import integrate
from scipy.stats import unitary_group

from .config import GENERATOR_CONFIG, QUADRATURE_CONFIG, TOLERANCES
from .errors import (
	ConsistencyError,
	ImpossibleConditioningError,
	InvalidStateError,
	LayoutError,
	NumericalDivergenceError,
	WindowError,
)
from .tensor import SpaceLayout, as_matrix, kron_all, partial_trace, reorder, trace_product

logger = logging.getLogger(__name__)

EigenvalueFn = Callable[[float, float], float]


def _freeze(arr: np.ndarray) -> np.ndarray:
	arr = np.array(arr, dtype=np.complex128, copy=True)
	arr.setflags(write=False)
	return arr


@dataclass(frozen=True, eq=False)
class DensityOperator:
	"""Yarı pozitif, izi bir olan karar durumu ρ."""

	matrix: np.ndarray
	layout: SpaceLayout

	def __post_init__(self):
		m = as_matrix(self.matrix)
		if m.shape != (self.layout.total_dim, self.layout.total_dim):
			raise LayoutError(f"Durum boyutu {m.shape} düzenle uyuşmuyor: {self.layout.factors}")
		if np.max(np.abs(m - m.conj().T)) > TOLERANCES['hermitian']:
			raise InvalidStateError("Durum matrisi hermitsel değil")
		tr = np.trace(m)
		if abs(tr - 1.0) > TOLERANCES['trace']:
			raise InvalidStateError(f"Durum izi 1 değil: {tr}")
		lowest = float(np.min(np.linalg.eigvalsh(m)))
		if lowest < TOLERANCES['positivity_floor']:
			raise InvalidStateError(f"Durum pozitif değil, en küçük özdeğer {lowest:.3e}")
		object.__setattr__(self, 'matrix', _freeze(m))

	@property
	def dim(self) -> int:
		return self.layout.total_dim

	def eigenvalues(self) -> np.ndarray:
		return np.linalg.eigvalsh(self.matrix)

	def reduced(self, keep: Sequence[str]) -> "DensityOperator":
		kept = [label for label in self.layout.labels if label in set(keep)]
		return DensityOperator(partial_trace(self.matrix, self.layout, kept), self.layout.subset(kept))

	def tensor(self, other: "DensityOperator") -> "DensityOperator":
		layout = SpaceLayout(self.layout.factors + other.layout.factors)
		return DensityOperator(np.kron(self.matrix, other.matrix), layout)


StateSpec = Union[Sequence[complex], np.ndarray, Sequence[tuple[float, Sequence[complex]]]]


def _is_mixture(spec) -> bool:
	if isinstance(spec, np.ndarray):
		return False
	return len(spec) > 0 and isinstance(spec[0], (tuple, list)) and len(spec[0]) == 2 and np.ndim(spec[0][1]) == 1


def make_density(spec: StateSpec, layout: Optional[SpaceLayout] = None) -> DensityOperator:
	"""
	Saf vektörden veya ağırlıklı saf vektör karışımından durum kurar.

	Args:
		spec: Vektör ya da [(ağırlık, vektör), ...] listesi
		layout: Düzen; verilmezse tek faktörlü ("A", boyut)

	Returns:
		DensityOperator: Normalize edilmiş durum
	"""
	pairs = list(spec) if _is_mixture(spec) else [(1.0, spec)]
	vectors = [np.asarray(v, dtype=np.complex128).ravel() for _, v in pairs]
	weights = np.array([float(w) for w, _ in pairs])
	dim = vectors[0].size
	if layout is None:
		layout = SpaceLayout.single('A', dim)
	if any(v.size != layout.total_dim for v in vectors):
		raise LayoutError(f"Vektör boyutu düzen boyutu {layout.total_dim} ile uyuşmuyor")
	if np.any(weights < 0):
		raise InvalidStateError("Karışım ağırlıkları negatif olamaz")
	if weights.sum() <= 0:
		raise InvalidStateError("Tüm karışım ağırlıkları sıfır")

	rho = np.zeros((layout.total_dim, layout.total_dim), dtype=np.complex128)
	for w, v in zip(weights, vectors):
		norm = np.linalg.norm(v)
		if norm == 0:
			raise InvalidStateError("Sıfır vektörden durum kurulamaz")
		u = v / norm
		rho += w * np.outer(u, u.conj())
	return DensityOperator(rho / weights.sum(), layout)


@dataclass(frozen=True)
class DecisionWindow:
	t_start: float
	duration: float

	def __post_init__(self):
		if not self.duration > 0:
			raise WindowError(f"Karar penceresi süresi pozitif olmalı: {self.duration}")

	@property
	def end(self) -> float:
		return self.t_start + self.duration

	def sample_times(self, count: int) -> np.ndarray:
		return np.linspace(self.t_start, self.end, count)


# Profil adı -> (h(t), ∫₀ᵗ h)
PROFILES: dict[str, tuple[Callable[[float], float], Callable[[float], float]]] = {
	'constant': (lambda t: 1.0, lambda t: t),
	'saturating': (lambda t: 1.0 - np.exp(-t), lambda t: t - (1.0 - np.exp(-t))),
	'oscillating': (lambda t: 1.0 + 0.5 * np.sin(t), lambda t: t + 0.5 * (1.0 - np.cos(t))),
}


def _check_orthonormal(basis: np.ndarray, what: str = "özbaz") -> None:
	gram = basis.conj().T @ basis
	err = float(np.max(np.abs(gram - np.eye(basis.shape[1]))))
	if err > TOLERANCES['orthonormal']:
		raise ConsistencyError(f"{what} ortonormal değil (sapma {err:.3e})")


@dataclass(frozen=True, eq=False)
class EvolutionGenerator:
	"""
	Sabit özbaz |u⟩ ve özdeğer fonksiyonları E_u(t, g).

	Varsayılan biçim E_u(t, g) = g·ε_u·h(t); functions verilirse
	E_u(t, g) = functions[u](t, g) kullanılır.
	"""

	basis: np.ndarray
	energies: np.ndarray
	layout: SpaceLayout
	rate: float = 1.0
	profile: str = 'constant'
	functions: Optional[tuple[EigenvalueFn, ...]] = field(default=None, compare=False)

	def __post_init__(self):
		basis = as_matrix(self.basis)
		n = self.layout.total_dim
		if basis.shape != (n, n):
			raise LayoutError(f"Özbaz şekli {basis.shape}, düzen boyutu {n} ile uyuşmuyor")
		_check_orthonormal(basis)
		energies = np.asarray(self.energies, dtype=float).ravel()
		if energies.size != n:
			raise LayoutError(f"{n} özdeğer bekleniyordu, {energies.size} verildi")
		if self.rate < 0:
			raise ConsistencyError(f"Hız parametresi negatif olamaz: {self.rate}")
		if self.profile not in PROFILES:
			raise ConsistencyError(f"Bilinmeyen profil '{self.profile}', seçenekler {tuple(PROFILES)}")
		if self.functions is not None and len(self.functions) != n:
			raise LayoutError(f"{n} özdeğer fonksiyonu bekleniyordu")
		object.__setattr__(self, 'basis', _freeze(basis))
		energies = energies.copy()
		energies.setflags(write=False)
		object.__setattr__(self, 'energies', energies)

	@classmethod
	def from_energies(cls, energies, layout: SpaceLayout, basis=None, rate: float = 1.0,
			profile: str = 'constant') -> "EvolutionGenerator":
		if basis is None:
			basis = np.eye(layout.total_dim, dtype=np.complex128)
		return cls(basis=basis, energies=energies, layout=layout, rate=rate, profile=profile)

	@classmethod
	def from_functions(cls, functions: Sequence[EigenvalueFn], layout: SpaceLayout,
			basis=None) -> "EvolutionGenerator":
		if basis is None:
			basis = np.eye(layout.total_dim, dtype=np.complex128)
		return cls(basis=basis, energies=np.zeros(layout.total_dim), layout=layout,
			functions=tuple(functions))

	@classmethod
	def zero(cls, layout: SpaceLayout) -> "EvolutionGenerator":
		return cls.from_energies(np.zeros(layout.total_dim), layout)

	@classmethod
	def product(cls, factor_bases: Mapping[str, np.ndarray], energies, layout: SpaceLayout,
			rate: float = 1.0, profile: str = 'constant') -> "EvolutionGenerator":
		"""Özbazı faktör bazlarının tensör çarpımı olan üreteç (eksik faktör için standart baz)."""
		bases = [factor_bases.get(label, np.eye(dim)) for label, dim in layout.factors]
		return cls.from_energies(energies, layout, basis=kron_all(bases), rate=rate, profile=profile)

	def with_rate(self, rate: float) -> "EvolutionGenerator":
		return EvolutionGenerator(self.basis, self.energies, self.layout, rate, self.profile, self.functions)

	def embed(self, full_layout: SpaceLayout) -> "EvolutionGenerator":
		"""Üreteci, eksik faktörlerde birim operatörle daha büyük düzene taşır."""
		rest = full_layout.complement(self.layout.labels)
		for label, dim in self.layout.factors:
			if full_layout.dim(label) != dim:
				raise LayoutError(f"'{label}' faktör boyutu uyuşmuyor")
		rest_dim = int(np.prod([full_layout.dim(label) for label in rest])) if rest else 1
		staged = full_layout.subset(self.layout.labels + rest)
		basis = reorder(np.kron(self.basis, np.eye(rest_dim)), staged, full_layout.labels)
		order = np.repeat(np.arange(self.layout.total_dim), rest_dim).astype(float)
		order = np.rint(np.real(np.diag(reorder(np.diag(order), staged, full_layout.labels)))).astype(int)
		functions = None
		if self.functions is not None:
			functions = tuple(self.functions[u] for u in order)
		return EvolutionGenerator(basis, self.energies[order], full_layout, self.rate, self.profile, functions)

	def eigenvalue(self, u: int, t: float) -> float:
		if self.functions is not None:
			return float(self.functions[u](t, self.rate))
		return float(self.rate * self.energies[u] * PROFILES[self.profile][0](t))

	def eigenvalues(self, t: float) -> np.ndarray:
		return np.array([self.eigenvalue(u, t) for u in range(self.layout.total_dim)])

	def matrix(self, t: float) -> np.ndarray:
		"""H(t) = Σ_u E_u(t)|u⟩⟨u|."""
		return (self.basis * self.eigenvalues(t)) @ self.basis.conj().T

	def integrated(self, t0: float, t1: float) -> np.ndarray:
		"""Her özdeğer için ∫_{t0}^{t1} E_u dt."""
		if self.functions is None:
			antiderivative = PROFILES[self.profile][1]
			return self.rate * self.energies * (antiderivative(t1) - antiderivative(t0))
		out = np.empty(self.layout.total_dim)
		for u, fn in enumerate(self.functions):
			value, _ = integrate.quad(
				lambda s: fn(s, self.rate), t0, t1,
				epsabs=QUADRATURE_CONFIG['epsabs'], epsrel=QUADRATURE_CONFIG['epsrel'],
				limit=QUADRATURE_CONFIG['limit'],
			)
			out[u] = value
		return out

	def check_rate_limits(self, t: float = 1.0) -> bool:
		"""E(t, g) → 0 (g → 0) ve |E| → ∞ (g → ∞) eşik kontrolü."""
		slow = self.with_rate(GENERATOR_CONFIG['slow_rate']).eigenvalues(t)
		fast = self.with_rate(GENERATOR_CONFIG['fast_rate']).eigenvalues(t)
		return bool(np.all(np.abs(slow) <= 1e-3) and np.all(np.abs(fast) >= 1e3))


@dataclass(frozen=True, eq=False)
class RawGenerator:
	"""Ham H(t) matrisi için doğrulayıcı adaptör."""

	matrix_fn: Callable[[float], np.ndarray]
	layout: SpaceLayout

	def matrix(self, t: float) -> np.ndarray:
		m = as_matrix(self.matrix_fn(t))
		if m.shape != (self.layout.total_dim, self.layout.total_dim):
			raise LayoutError(f"H({t}) şekli {m.shape} düzenle uyuşmuyor")
		return m


def check_self_similarity(gen: Union[EvolutionGenerator, RawGenerator], window: DecisionWindow) -> bool:
	"""
	‖[H(t), ∫₀ᵗ H dt']‖ ≤ 1e-10 koşulunu pencere içindeki örnek zamanlarda sınar.

	Returns:
		bool: Koşul tüm örneklerde sağlanıyorsa True
	"""
	for t in window.sample_times(GENERATOR_CONFIG['self_similarity_samples']):
		if t == 0:
			continue
		h = gen.matrix(t)
		re, _ = integrate.quad_vec(lambda s: gen.matrix(s).real, 0.0, t, epsabs=QUADRATURE_CONFIG['epsabs'])
		im, _ = integrate.quad_vec(lambda s: gen.matrix(s).imag, 0.0, t, epsabs=QUADRATURE_CONFIG['epsabs'])
		integral = re + 1j * im
		commutator = h @ integral - integral @ h
		if np.linalg.norm(commutator) > TOLERANCES['commutator']:
			logger.debug("Öz-benzerlik t=%.4g noktasında bozuluyor", t)
			return False
	return True


def _phases(gen: EvolutionGenerator, t0: float, t1: float) -> np.ndarray:
	if t1 < t0:
		raise WindowError(f"Faz aralığı ters: [{t0}, {t1}]")
	total = gen.integrated(t0, t1)
	if not np.all(np.isfinite(total)):
		raise NumericalDivergenceError(f"Özdeğer integrali [{t0}, {t1}] aralığında sonlu değil")
	return np.exp(-1j * total)


def phase(gen: EvolutionGenerator, label: int, t0: float, t1: float) -> complex:
	"""exp(−i ∫_{t0}^{t1} E_label(t, g) dt)."""
	if not 0 <= label < gen.layout.total_dim:
		raise LayoutError(f"Özdeğer etiketi aralık dışında: {label}")
	return complex(_phases(gen, t0, t1)[label])


def _check_layout(state: DensityOperator, gen: EvolutionGenerator) -> None:
	if state.layout != gen.layout:
		raise LayoutError(f"Üreteç düzeni {gen.layout.factors} durum düzeni {state.layout.factors} ile uyuşmuyor")


def _in_basis(gen: EvolutionGenerator, m: np.ndarray) -> np.ndarray:
	return gen.basis.conj().T @ m @ gen.basis


def _from_basis(gen: EvolutionGenerator, m: np.ndarray, layout: SpaceLayout) -> DensityOperator:
	out = gen.basis @ m @ gen.basis.conj().T
	return DensityOperator(0.5 * (out + out.conj().T), layout)


def evolve(state: DensityOperator, gen: EvolutionGenerator, t0: float, t1: float) -> DensityOperator:
	"""ρ' = U ρ U†, özbazda ρ'_uv = φ_u ρ_uv φ_v*."""
	_check_layout(state, gen)
	ph = _phases(gen, t0, t1)
	rotated = _in_basis(gen, state.matrix) * np.outer(ph, ph.conj())
	return _from_basis(gen, rotated, state.layout)


def window_average_kernel(gen: EvolutionGenerator, t: float, width: float) -> np.ndarray:
	"""
	K_uv = (1/w) ∫_{t−w}^{t} exp(−i(Φ_u(s) − Φ_v(s))) ds, Φ_u(s) = ∫₀ˢ E_u.
	"""
	if width <= 0:
		raise WindowError(f"Gözlem aralığı pozitif olmalı: {width}")
	start = max(0.0, t - width)
	width = t - start
	n = gen.layout.total_dim
	if width == 0:
		ph = _phases(gen, 0.0, t)
		return np.outer(ph, ph.conj())
	if gen.functions is None and gen.profile == 'constant':
		omega = gen.rate * gen.energies
		delta = omega[:, None] - omega[None, :]
		mid = start + 0.5 * width
		return np.exp(-1j * delta * mid) * np.sinc(delta * width / (2.0 * np.pi))

	def accumulated(s):
		return gen.integrated(0.0, s)

	kernel = np.eye(n, dtype=np.complex128)
	opts = dict(epsabs=QUADRATURE_CONFIG['epsabs'], limit=10 * QUADRATURE_CONFIG['limit'])
	for u in range(n):
		for v in range(u + 1, n):
			re, _ = integrate.quad(lambda s: np.cos(accumulated(s)[u] - accumulated(s)[v]), start, t, **opts)
			im, _ = integrate.quad(lambda s: -np.sin(accumulated(s)[u] - accumulated(s)[v]), start, t, **opts)
			kernel[u, v] = (re + 1j * im) / width
			kernel[v, u] = np.conj(kernel[u, v])
	return kernel


def evolve_window_average(state: DensityOperator, gen: EvolutionGenerator, t: float,
		width: float) -> DensityOperator:
	"""Sonlu gözlem çözünürlüğü: [t − w, t] aralığında zaman ortalamalı durum."""
	_check_layout(state, gen)
	averaged = _in_basis(gen, state.matrix) * window_average_kernel(gen, t, width)
	return _from_basis(gen, averaged, state.layout)


def luders_update(state: DensityOperator, projector) -> DensityOperator:
	"""Karar sonrası durum PρP / Tr(ρP)."""
	p = as_matrix(projector)
	weight = trace_product(state.matrix, p).real
	if weight <= TOLERANCES['conditioning']:
		raise ImpossibleConditioningError(f"Tr(ρP) = {weight:.3e}, koşullama imkânsız")
	conditioned = p @ state.matrix @ p / weight
	return DensityOperator(0.5 * (conditioned + conditioned.conj().T), state.layout)


def basis_matrix(basis) -> np.ndarray:
	"""Vektör listesi ya da sütun matrisi -> sütunları baz vektörleri olan matris."""
	if isinstance(basis, np.ndarray) and basis.ndim == 2:
		return as_matrix(basis)
	return as_matrix(np.column_stack([np.asarray(v, dtype=np.complex128) for v in basis]))


def dephase(state: DensityOperator, basis) -> DensityOperator:
	"""Σ_m P_m ρ P_m: verilen bazdaki köşegen dışı terimleri siler."""
	b = basis_matrix(basis)
	if b.shape != (state.dim, state.dim):
		raise LayoutError(f"Baz şekli {b.shape}, durum boyutu {state.dim} ile uyuşmuyor")
	_check_orthonormal(b, "sönümleme bazı")
	populations = np.real(np.diag(b.conj().T @ state.matrix @ b))
	return DensityOperator((b * populations) @ b.conj().T, state.layout)


def random_unitary(dim: int, seed: int) -> np.ndarray:
	if dim == 1:
		return np.ones((1, 1), dtype=np.complex128)
	return unitary_group.rvs(dim, random_state=np.random.default_rng(seed))


def random_density(layout: SpaceLayout, seed: int, rank: Optional[int] = None) -> DensityOperator:
	"""Ginibre dağılımından rastgele durum (rank=1 saf durum verir)."""
	rng = np.random.default_rng(seed)
	n = layout.total_dim
	k = n if rank is None else rank
	g = rng.normal(size=(n, k)) + 1j * rng.normal(size=(n, k))
	rho = g @ g.conj().T
	rho /= np.trace(rho).real
	return DensityOperator(0.5 * (rho + rho.conj().T), layout)
