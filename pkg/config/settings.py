from pathlib import Path

from decouple import config

BASE_DIR = Path(__file__).resolve().parent.parent


SECRET_KEY = config('SECRET_KEY', default='django-insecure-quantify-local-cli-only')

DEBUG = config('DEBUG', default=False, cast=bool)

LOG_LEVEL = config('LOG_LEVEL', default='INFO')

ALLOWED_HOSTS = []


INSTALLED_APPS = [
    'rest_framework',

    'common',
    'core_law',
    'site_model',
    'monitor',
    'relevance',
    'cli',
]

# Every file-backed artifact (matrix, event log, index) lives outside a database.
DATABASES = {}

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


QUANTIFY_REPORT_DIGITS = config('QUANTIFY_REPORT_DIGITS', default=4, cast=int)

# Stand-in for the O(ln n) term of the lower intensity bound.
QUANTIFY_O_CONSTANT = config('QUANTIFY_O_CONSTANT', default=0.0, cast=float)

QUANTIFY_ORACLE_ENUMERATION_MAX_N = config('QUANTIFY_ORACLE_ENUMERATION_MAX_N', default=20, cast=int)
QUANTIFY_ORACLE_MAX_N = config('QUANTIFY_ORACLE_MAX_N', default=10_000, cast=int)

QUANTIFY_CURVE_RESOLUTION = config('QUANTIFY_CURVE_RESOLUTION', default=100, cast=int)

# Relative distance |c/p - 1| below which the divergence switches to its series form.
QUANTIFY_SERIES_THRESHOLD = config('QUANTIFY_SERIES_THRESHOLD', default=1e-4, cast=float)


LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {module} {message}',
            'style': '{',
        },
        'simple': {
            'format': '{levelname} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose' if DEBUG else 'simple',
        },
    },
    'loggers': {
        'quantify': {
            'handlers': ['console'],
            'level': 'DEBUG' if DEBUG else LOG_LEVEL,
            'propagate': False,
        },
        'django': {
            'handlers': ['console'],
            'level': 'WARNING',
            'propagate': False,
        },
    },
}
