"""
Motorun hata hiyerarşisi.

Her hata sınıfı, CLI katmanının kullandığı bir çıkış koduna sahiptir.
Kütüphane kodu yalnızca hata fırlatır; yakalama ve raporlama main.py içindedir.
"""


class QDTError(Exception):
	"""Model değişmezi ihlali (çıkış kodu 3)."""

	exit_code = 3


class LayoutError(QDTError):
	pass


class InvalidStateError(QDTError):
	pass


class ImpossibleConditioningError(QDTError):
	pass


class ConsistencyError(QDTError):
	pass


class UnnormalizedFeelingsError(QDTError):
	pass


class WindowError(QDTError):
	pass


class DegenerateFixedPointError(QDTError):
	pass


class NumericalDivergenceError(QDTError):
	"""Sonsuz faz integrali veya sınırda KL ıraksaması."""

	exit_code = 4


class ScenarioError(QDTError):
	"""Senaryo dosyası sözdizimi veya şema hatası."""

	exit_code = 2

	def __init__(self, message, issues=None):
		super().__init__(message)
		self.issues = list(issues or [])


class ScenarioFileMissingError(ScenarioError):
	exit_code = 1
