"""
Django settings for richardson_sim project.

El proyecto no sirve páginas: solo aporta la configuración, los comandos de
``manage.py`` y la base de datos donde se guardan las estimaciones.

For the full list of settings and their values, see
https://docs.djangoproject.com/en/5.1/ref/settings/
"""

import os
from pathlib import Path
import dj_database_url
from dotenv import load_dotenv

load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.getenv('DJANGO_SECRET_KEY', 'richardson-sim-local')

DEBUG = os.getenv('DJANGO_DEBUG', '0') == '1'

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    'django.contrib.contenttypes',
    'lattice',
    'topology',
    'randomness',
    'engine',
    'forest',
    'coupling',
    'experiments',
    'cli',
]

MIDDLEWARE = []


# Database
# https://docs.djangoproject.com/en/5.1/ref/settings/#databases

DATABASES = {
    'default':
    dj_database_url.config(default=os.getenv('DATABASE_URL', f"sqlite:///{BASE_DIR / 'db.sqlite3'}"))
}


# Internationalization
# https://docs.djangoproject.com/en/5.1/topics/i18n/

LANGUAGE_CODE = 'es-co'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True

# Default primary key field type
# https://docs.djangoproject.com/en/5.1/ref/settings/#default-auto-field

DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'


# Configuración del simulador
RICHARDSON_VERSION = os.getenv('RICHARDSON_VERSION', '0.1.0')
RICHARDSON_DEFAULT_SEED = int(os.getenv('RICHARDSON_DEFAULT_SEED', '20030501'))
RICHARDSON_STREAM_BLOCK = int(os.getenv('RICHARDSON_STREAM_BLOCK', '32'))
RICHARDSON_MAX_COORD = int(os.getenv('RICHARDSON_MAX_COORD', str(2 ** 31 - 1)))
RICHARDSON_DEFAULT_THREADS = int(os.getenv('RICHARDSON_DEFAULT_THREADS', '1'))
RICHARDSON_LOG_LEVEL = os.getenv('RICHARDSON_LOG_LEVEL', 'INFO')

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{asctime} {levelname} {name}: {message}',
            'style': '{',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': RICHARDSON_LOG_LEVEL,
    },
}
