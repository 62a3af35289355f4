"""
JSON senaryo dosyası şeması (pydantic) ve ayrıştırıcı.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from .errors import ScenarioError, ScenarioFileMissingError

SUM_TOL = 1e-10

# Kompleks sayı: reel sayı ya da [re, im] çifti
ComplexEntry = Union[float, tuple[float, float]]
Vector = list[ComplexEntry]


def to_complex(entry: ComplexEntry) -> complex:
	if isinstance(entry, (tuple, list)):
		return complex(entry[0], entry[1])
	return complex(entry)


class StrictModel(BaseModel):
	model_config = ConfigDict(extra='forbid')


class GeneratorSpec(StrictModel):
	eigenvalues: list[float]
	basis: Optional[list[Vector]] = None  # sütun vektörleri
	profile: Literal['constant', 'saturating', 'oscillating'] = 'constant'
	rate: float = Field(1.0, ge=0)


class MixtureItem(StrictModel):
	weight: float = Field(ge=0)
	vector: Vector


class StateSpec(StrictModel):
	pure: Optional[Vector] = None
	mixture: Optional[list[MixtureItem]] = None

	@model_validator(mode='after')
	def exactly_one(self):
		if (self.pure is None) == (self.mixture is None):
			raise ValueError("state içinde 'pure' ya da 'mixture' anahtarlarından tam olarak biri olmalı")
		return self


class FeelingsSpec(StrictModel):
	seed: int = 0
	distribution: Literal['gaussian', 'uniform-modulus'] = 'gaussian'
	subject_label: str = 'S'


class WindowSpec(StrictModel):
	start: float = Field(ge=0)
	duration: float = Field(gt=0)


class WindowsSpec(StrictModel):
	first: WindowSpec
	second: WindowSpec

	@model_validator(mode='after')
	def ordered(self):
		if self.second.start < self.first.start + self.first.duration:
			raise ValueError("ikinci karar penceresi birincisi bitmeden başlıyor")
		return self


class AgentSpec(StrictModel):
	f: list[float]
	q0: list[float]


class NetworkSpec(StrictModel):
	N: int = Field(ge=2)
	J: float = Field(1.0, ge=0)
	tau: int = Field(1, ge=1)
	interaction: Literal['long-range', 'short-range'] = 'long-range'
	memory: Literal['long-term', 'short-term'] = 'long-term'
	horizon: int = Field(ge=1)
	agents: list[AgentSpec]
	adjacency: Optional[list[list[int]]] = None

	@model_validator(mode='after')
	def agents_valid(self):
		if len(self.agents) != self.N:
			raise ValueError(f"N={self.N} ama {len(self.agents)} ajan tanımlı")
		sizes = {len(agent.f) for agent in self.agents}
		if len(sizes) != 1:
			raise ValueError("tüm ajanlar aynı sayıda alternatif içermeli")
		for i, agent in enumerate(self.agents):
			if len(agent.f) != len(agent.q0) or len(agent.f) < 2:
				raise ValueError(f"agents[{i}]: f ve q0 aynı uzunlukta (≥ 2) olmalı")
			if any(not 0.0 <= value <= 1.0 for value in agent.f):
				raise ValueError(f"agents[{i}]: f değerleri [0, 1] dışında")
			if abs(sum(agent.f) - 1.0) > SUM_TOL:
				raise ValueError(f"agents[{i}]: Σf = {sum(agent.f):.12g}, 1 olmalı")
			if abs(sum(agent.q0)) > SUM_TOL:
				raise ValueError(f"agents[{i}]: Σq0 = {sum(agent.q0):.3e}, 0 olmalı")
			if any(not -SUM_TOL <= f + q <= 1.0 + SUM_TOL for f, q in zip(agent.f, agent.q0)):
				raise ValueError(f"agents[{i}]: p(0) = f + q0 değerleri [0, 1] dışında")
		return self


class ParadoxSpec(StrictModel):
	name: Literal['planning', 'disjunction', 'fishburn', 'fishburn-decay', 'fishburn-joint', 'order-effect']
	inputs: dict[str, Any] = Field(default_factory=dict)


class OutputSpec(StrictModel):
	path: Optional[str] = None
	format: Literal['csv'] = 'csv'


Kind = Literal['single-decision', 'successive', 'behavioral', 'network', 'paradox']

REQUIRED_SECTIONS: dict[str, tuple[str, ...]] = {
	'single-decision': ('dimensions', 'generator', 'state', 'alternatives'),
	'behavioral': ('dimensions', 'generator', 'state', 'alternatives', 'feelings'),
	'successive': ('dimensions', 'generator', 'generator_b', 'state', 'alternatives', 'alternatives_b', 'windows'),
	'network': ('network',),
	'paradox': ('paradox',),
}


class ScenarioFile(StrictModel):
	kind: Kind
	dimensions: Optional[dict[str, int]] = None
	generator: Optional[GeneratorSpec] = None
	generator_b: Optional[GeneratorSpec] = None
	state: Optional[StateSpec] = None
	alternatives: Optional[list[Vector]] = None
	alternatives_b: Optional[list[Vector]] = None
	feelings: Optional[FeelingsSpec] = None
	times: list[float] = Field(default_factory=lambda: [0.0])
	windows: Optional[WindowsSpec] = None
	order: Literal['AB', 'BA'] = 'AB'
	observation_window: Optional[float] = Field(None, ge=0)
	network: Optional[NetworkSpec] = None
	paradox: Optional[ParadoxSpec] = None
	output: OutputSpec = Field(default_factory=OutputSpec)

	@field_validator('dimensions')
	@classmethod
	def positive_dimensions(cls, value):
		if value is not None:
			for label, dim in value.items():
				if dim < 1:
					raise ValueError(f"'{label}' boyutu pozitif olmalı")
		return value

	@model_validator(mode='after')
	def sections_present(self):
		missing = [name for name in REQUIRED_SECTIONS[self.kind] if getattr(self, name) is None]
		if missing:
			raise ValueError(f"'{self.kind}' senaryosu için eksik bölümler: {missing}")
		if self.kind == 'successive' and not {'A', 'B', 'S'} <= set(self.dimensions):
			raise ValueError("ardışık karar senaryosu A, B ve S boyutlarını tanımlamalı")
		return self


def _format_issue(error: dict[str, Any]) -> str:
	location = '.'.join(str(part) for part in error.get('loc', ()))
	if error.get('type') == 'extra_forbidden':
		return f"{location}: bilinmeyen anahtar '{location.split('.')[-1]}'"
	return f"{location or '<kök>'}: {error.get('msg')}"


def validate_scenario(data: Any) -> ScenarioFile:
	try:
		return ScenarioFile.model_validate(data)
	except ValidationError as e:
		issues = [_format_issue(err) for err in e.errors()]
		raise ScenarioError("Senaryo şema doğrulaması başarısız:\n  " + "\n  ".join(issues), issues) from e


def parse_scenario(path) -> ScenarioFile:
	"""
	Senaryo dosyasını okuyup doğrular.

	Returns:
		ScenarioFile: Doğrulanmış senaryo
	"""
	path = Path(path)
	try:
		text = path.read_text(encoding='utf-8')
	except (FileNotFoundError, IsADirectoryError, PermissionError) as e:
		raise ScenarioFileMissingError(f"Senaryo dosyası okunamadı: {path} ({e})") from e
	try:
		data = json.loads(text)
	except json.JSONDecodeError as e:
		raise ScenarioError(f"{path}: JSON hatası satır {e.lineno}, sütun {e.colno}: {e.msg}") from e
	return validate_scenario(data)
