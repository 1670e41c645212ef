"""
Django settings for pbec_service project.
Generated by 'django-admin startproject' using Django 5.1.
"""

from pathlib import Path
from decouple import config

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = config('SECRET_KEY', default='django-insecure-development-key-for-pbec-toolkit')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = config('DEBUG', default=True, cast=bool)

ALLOWED_HOSTS = []

# Application definition
INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'rest_framework',
    'coding_engine',
]

# Database
DATABASES = {
    'default': {
        'ENGINE': 'django.db.backends.sqlite3',
        'NAME': BASE_DIR / config('DATABASE_NAME', default='db.sqlite3'),
    }
}

# Internationalization
LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = True
USE_TZ = True

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Logging
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {asctime} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'loggers': {
        'coding_engine': {
            'handlers': ['console'],
            'level': config('LOG_LEVEL', default='INFO'),
            'propagate': False,
        },
    },
}

# Custom settings for the PBEC toolkit
PBEC_SETTINGS = {
    # Exhaustive oracle caps
    'ORACLE_MAX_ENUMERATION': config('PBEC_ORACLE_MAX_ENUMERATION', default=10**8, cast=int),
    'ORACLE_MAX_PAIRS': config('PBEC_ORACLE_MAX_PAIRS', default=10**10, cast=int),
    'ORACLE_MAX_SEARCH_NODES': config('PBEC_ORACLE_MAX_SEARCH_NODES', default=10**7, cast=int),
    'ORACLE_WORKERS': config('PBEC_ORACLE_WORKERS', default=4, cast=int),
    # Code search
    'DISTANCE_BUDGET': config('PBEC_DISTANCE_BUDGET', default=2**24, cast=int),
    'PACKED_DISTANCE_BUDGET': config('PBEC_PACKED_DISTANCE_BUDGET', default=2**30, cast=int),
    'GV_CANDIDATE_POOL': config('PBEC_GV_CANDIDATE_POOL', default=2**20, cast=int),
    'GV_STALL_LIMIT': config('PBEC_GV_STALL_LIMIT', default=4096, cast=int),
    'GV_SPAN_BYTES': config('PBEC_GV_SPAN_BYTES', default=2**28, cast=int),
    'CONSTRUCTION_RETRIES': config('PBEC_CONSTRUCTION_RETRIES', default=8, cast=int),
    'DEFAULT_SEED': config('PBEC_DEFAULT_SEED', default=0, cast=int),
    # Bound sweeps
    'SWEEP_WORKERS': config('PBEC_SWEEP_WORKERS', default=4, cast=int),
    # Run ledger
    'RECORD_RUNS': config('PBEC_RECORD_RUNS', default=True, cast=bool),
}
