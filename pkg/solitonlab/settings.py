"""Django settings for solitonlab project (command-line verification laboratory)."""
from pathlib import Path
import os

BASE_DIR = Path(__file__).resolve().parent.parent

# No secrets are handled; the key only satisfies Django's startup checks.
SECRET_KEY = os.environ.get('SOLITONLAB_SECRET_KEY', 'solitonlab-local-only')

DEBUG = False

ALLOWED_HOSTS = []

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'solitons',
]

DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / 'db.sqlite3',
    }
}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

LOG_LEVEL = os.environ.get('SOLITONLAB_LOG_LEVEL', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'solitons': {
            'handlers': ['console'],
            'level': LOG_LEVEL,
            'propagate': False,
        },
    },
}

# Verification defaults. Command-line flags and config files override these.
SOLITONLAB = {
    'SAMPLES': 100,
    'SEED': 42,
    'RANK_TOL': 1e-8,
    'CAUSAL_TOL': 1e-9,
    'GRID_SIZE': 5,
    'CLASSIFY_TOL': 1e-8,
    'QUADRATURE_ORDER': 12,
    'QUADRATURE_PANEL': 0.25,
    'N_JOBS': int(os.environ.get('SOLITONLAB_N_JOBS', '1')),
    'TOLERANCES': {
        'soliton_residual': 1e-9,
        'ric_grad_f': 1e-8,
        'grad_norm_spread': 1e-8,
        'curvature_gradient_identity': 1e-8,
        'ricci_transport_identity': 1e-8,
        'trace_identity': 1e-8,
        'steady_hessian_norm': 1e-10,
        'steady_grad_norm_spread': 1e-9,
        'bochner': 1e-8,
        'hamilton_identity': 1e-8,
        'scalar_gradient_identity': 1e-8,
        'scalar_curvature_spread': 1e-9,
        'schouten_codazzi': 1e-10,
        'killing_fields': 1e-10,
        'killing_gradient_parallel': 1e-8,
        'parallel_fields': 1e-10,
        'isotropic_einstein': 1e-8,
        'steady_structure': 1e-10,
        'rigid_eigenstructure': 1e-10,
        'recurrence_theta': 1e-8,
        'ricci_profile': 1e-8,
        'expected_profile': 1e-8,
        'reconstruction': 1e-8,
    },
}
