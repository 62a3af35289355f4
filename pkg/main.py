#!/usr/bin/env python3
"""
Kuantum Karar Teorisi simülatörü
- JSON senaryo dosyalarını çalıştırır (tek karar, ardışık, davranışsal, ağ, paradoks)
- Parametre taramalarını paralel yürütür
- Hazır senaryoları listeler ve dışa aktarır
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from qdt.config import LOGGING_CONFIG
from qdt.errors import QDTError, ScenarioError
from qdt.runner import RunReport, run, sweep
from qdt.scenario_file import parse_scenario, validate_scenario
from qdt.scenarios import BUILTIN_SCENARIOS, builtin_scenario

logger = logging.getLogger(__name__)


class QDTApp:
	"""
	Komut satırı uygulaması.
	Senaryo ayrıştırma, çalıştırma ve çıktı özetini yönetir.
	"""

	def __init__(self, output_dir=None):
		self.output_dir = output_dir

	def run_file(self, path):
		"""
		Senaryo dosyasını çalıştırır.

		Returns:
			RunReport: Çalıştırma raporu
		"""
		print(f"🚀 Senaryo çalıştırılıyor: {path}")
		# Ayrıştır, çalıştır, özetle
		scenario = parse_scenario(path)
		report = run(scenario, self.output_dir)
		self.print_report(report)
		return report

	def sweep_file(self, path, param, values):
		print(f"🚀 Tarama: {param} ∈ {values}")
		scenario = parse_scenario(path)
		report = sweep(scenario, param, values, self.output_dir)
		for entry in report.summary['runs']:
			if 'error' in entry:
				print(f"   ❌ {entry['directory']}: {entry['error']}")
			else:
				print(f"   ✅ {entry['directory']}: {self._headline(entry['summary'])}")
		self.print_outputs(report)
		return report

	def list_scenarios(self):
		print("\n📋 HAZIR SENARYOLAR")
		print("-" * 30)
		for name, document in BUILTIN_SCENARIOS.items():
			print(f"   {name:<24} ({document['kind']})")

	def show_scenario(self, name, output=None):
		"""
		Hazır senaryoyu JSON olarak yazar; output verilmezse ekrana basar.
		"""
		document = builtin_scenario(name)
		validate_scenario(document)
		text = json.dumps(document, indent=2, ensure_ascii=False)
		if output is None:
			print(text)
			return
		Path(output).parent.mkdir(parents=True, exist_ok=True)
		Path(output).write_text(text + '\n', encoding='utf-8')
		print(f"💾 '{name}' senaryosu kaydedildi: {output}")

	def print_report(self, report: RunReport):
		print(f"\n📊 ÖZET ({report.summary.get('kind')})")
		print("-" * 30)
		print(f"   {self._headline(report.summary)}")
		self.print_outputs(report)

	def print_outputs(self, report: RunReport):
		for path in report.outputs:
			print(f"   💾 {path}")
		print(f"⏱️ Süre: {report.duration:.3f} sn")

	@staticmethod
	def _headline(summary):
		if summary.get('kind') == 'network':
			text = f"rejim={summary['regime']}, yakınsadı={summary['converged']}"
			if summary.get('p_star') is not None:
				text += f", p*={summary['p_star']:.6f}"
			return text
		if summary.get('kind') == 'paradox':
			return '; '.join(
				f"{table['name']}: " + ', '.join(f"p({label})={value:.3f}" for label, value in table['p'].items())
				for table in summary['tables']
			)
		return ', '.join(f"p({label})={value:.6f}" for label, value in summary.get('final', {}).items())


def build_parser() -> argparse.ArgumentParser:
	parser = argparse.ArgumentParser(description='Kuantum Karar Teorisi simülatörü')
	parser.add_argument('--output-dir', default=None, help='Çıktı dizini (varsayılan: senaryo veya QDT_OUTPUT_DIR)')
	commands = parser.add_subparsers(dest='command', required=True)

	run_parser = commands.add_parser('run', help='Senaryo dosyasını çalıştır')
	run_parser.add_argument('file')

	sweep_parser = commands.add_parser('sweep', help='Sayısal bir alanı tara')
	sweep_parser.add_argument('file')
	sweep_parser.add_argument('--param', required=True, help='Noktalı alan yolu, örn. network.J')
	sweep_parser.add_argument('--values', required=True, help='Virgülle ayrılmış değerler, örn. 0.5,1,2')

	scenario_parser = commands.add_parser('scenario', help='Hazır senaryolar')
	scenario_commands = scenario_parser.add_subparsers(dest='action', required=True)
	scenario_commands.add_parser('list', help='Hazır senaryoları listele')
	show_parser = scenario_commands.add_parser('show', help='Hazır senaryoyu JSON olarak göster')
	show_parser.add_argument('name')
	show_parser.add_argument('--output', default=None, help='JSON dosya yolu')
	return parser


def parse_values(text):
	try:
		return [float(item) for item in text.split(',') if item.strip()]
	except ValueError as e:
		raise ScenarioError(f"Tarama değerleri sayı olmalı: {text}") from e


def main(argv=None) -> int:
	"""
	Ana fonksiyon.

	Returns:
		int: Çıkış kodu (0 başarı, 1 dosya yok, 2 şema, 3 model değişmezi, 4 ıraksama)
	"""
	logging.basicConfig(level=LOGGING_CONFIG['level'], format=LOGGING_CONFIG['format'])
	args = build_parser().parse_args(argv)
	app = QDTApp(args.output_dir)
	try:
		if args.command == 'run':
			return app.run_file(args.file).exit_status
		if args.command == 'sweep':
			return app.sweep_file(args.file, args.param, parse_values(args.values)).exit_status
		if args.action == 'list':
			app.list_scenarios()
		else:
			app.show_scenario(args.name, args.output)
		return 0
	except QDTError as e:
		print(f"❌ {e}")
		return e.exit_code
	except KeyboardInterrupt:
		print("\n🛑 Kesintiye uğradı")
		return 130
	except Exception as e:
		logger.exception("Beklenmeyen hata")
		print(f"❌ Kritik hata: {e}")
		return QDTError.exit_code


if __name__ == "__main__":
	sys.exit(main())
