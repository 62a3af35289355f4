import os

from dotenv import load_dotenv

load_dotenv()

# Sayısal toleranslar
TOLERANCES = {
	'compare': 1e-9,
	'strict': 1e-12,
	'hermitian': 1e-12,
	'trace': 1e-12,
	'orthonormal': 1e-10,
	'positivity_floor': -1e-10,
	'conditioning': 1e-12,  # Lüders için Tr(ρP) alt sınırı
	'imag_residue': 1e-10,
	'commutator': 1e-10,
}

# Faz integralleri (scipy.integrate.quad)
QUADRATURE_CONFIG = {
	'epsabs': 1e-12,
	'epsrel': 1e-12,
	'limit': 200,
}

# Evrim üreteci
GENERATOR_CONFIG = {
	'slow_rate': 1e-6,
	'fast_rate': 1e6,
	'profiles': ('constant', 'saturating', 'oscillating'),
	'self_similarity_samples': 7,
}

# Duygu genlikleri b_{nα}
FEELING_CONFIG = {
	'distribution': 'gaussian',  # veya 'uniform-modulus'
	'seed': 0,
}

# Davranışsal ayrıştırma
BEHAVIOR_CONFIG = {
	'observation_window': 0.05,  # gözlem aralığı genişliği
	'fast_tolerance': 1e-3,
}

# Zeka ağı
NETWORK_CONFIG = {
	'J': 1.0,
	'tau': 1,
	'kl_epsilon': 1e-12,
}

# Rejim sınıflandırıcı
CLASSIFIER_CONFIG = {
	'convergence_tol': 1e-8,
	'window': 50,
	'label_tol': 1e-3,
	'recurrence_tol': 1e-6,
	'recurrence_window': 200,
}

# Çıktı ayarları
OUTPUT_CONFIG = {
	'output_dir': os.getenv('QDT_OUTPUT_DIR', 'outputs'),
	'float_format': '%.12g',
	'max_workers': int(os.getenv('QDT_MAX_WORKERS', '4')),
}

LOGGING_CONFIG = {
	'level': os.getenv('QDT_LOG_LEVEL', 'INFO'),
	'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
}
