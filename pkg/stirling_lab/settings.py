import os
from pathlib import Path
from dotenv import load_dotenv

load_dotenv()

BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv('SECRET_KEY', 'django-insecure-dev-key-change-this')

DEBUG = os.getenv('DEBUG', 'False') == 'True'

ALLOWED_HOSTS = os.getenv('ALLOWED_HOSTS', 'localhost,127.0.0.1').split(',')

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'django.contrib.auth',
    'rest_framework',
    'core',
]

# Nothing is persisted; results go to CSV/JSON files.
DATABASES = {}

LANGUAGE_CODE = 'en-us'
TIME_ZONE = 'UTC'
USE_I18N = False
USE_TZ = True

REST_FRAMEWORK = {
    'STRICT_JSON': True,
    'COMPACT_JSON': False,
}

CELERY_BROKER_URL = os.getenv('REDIS_URL', 'redis://localhost:6379/0')
CELERY_RESULT_BACKEND = os.getenv('REDIS_URL', 'redis://localhost:6379/0')
CELERY_ACCEPT_CONTENT = ['json']
CELERY_TASK_SERIALIZER = 'json'
CELERY_RESULT_SERIALIZER = 'json'
CELERY_TIMEZONE = TIME_ZONE
CELERY_TASK_ALWAYS_EAGER = os.getenv('CELERY_TASK_ALWAYS_EAGER', 'True') == 'True'

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'verbose': {
            'format': '{levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'verbose',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': os.getenv('LOG_LEVEL', 'INFO'),
    },
}

# Stirling triangle
STIRLING_N_MAX = int(os.getenv('STIRLING_N_MAX', '2000'))
STIRLING_ROW_CACHE = int(os.getenv('STIRLING_ROW_CACHE', '64'))

# Extended precision and root isolation
STIRLING_PRECISION_BITS = int(os.getenv('STIRLING_PRECISION_BITS', '256'))
STIRLING_STURM_MAX_DEGREE = int(os.getenv('STIRLING_STURM_MAX_DEGREE', '120'))
STIRLING_ROOT_TOLERANCE = float(os.getenv('STIRLING_ROOT_TOLERANCE', '1e-10'))

# Verification worker pool
STIRLING_WORKERS = int(os.getenv('STIRLING_WORKERS', str(os.cpu_count() or 1)))
STIRLING_USE_CELERY = os.getenv('STIRLING_USE_CELERY', 'False') == 'True'
