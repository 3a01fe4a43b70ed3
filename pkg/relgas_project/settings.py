"""
Django settings for relgas_project.

The project hosts no web endpoints; Django supplies configuration, logging
and the management-command CLI for the ``relgas`` app.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/6.0/ref/settings/
"""

import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# Nothing is served, the key only satisfies Django's startup checks.
SECRET_KEY = os.environ.get('RELGAS_SECRET_KEY', 'relgas-local-only-not-a-secret')

DEBUG = False

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    # Third-party apps
    'rest_framework',
    # Local apps
    'relgas',
]

MIDDLEWARE = []


# No persistent state: evaluations are pure functions of their inputs.

DATABASES = {}


# Numerical defaults, read through relgas.conf.relgas_settings

RELGAS = {
    'RTOL': float(os.environ.get('RELGAS_RTOL', '1e-10')),
    'SERIES_MAX_TERMS': 5000,
    'K_MAX': 64,
    'QUAD_RTOL': 1e-13,
    'QUAD_MAX_SUBDIVISIONS': 500,
    'WORKERS': 4,
}


# Logging

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'loggers': {
        'relgas': {
            'handlers': ['console'],
            'level': os.environ.get('RELGAS_LOG_LEVEL', 'WARNING'),
            'propagate': False,
        },
    },
}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True
