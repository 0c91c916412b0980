"""
    Minimal Django settings used by the "fdpo" console script,
    if DJANGO_SETTINGS_MODULE is not set.
"""
import os


SECRET_KEY = 'fdpo_toolkit does not sign anything'

INSTALLED_APPS = ['fdpo_toolkit']

DATABASES = {}
USE_TZ = True

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '{asctime} {levelname} {name} {message}',
            'style': '{',
        },
    },
    'handlers': {'console': {'class': 'logging.StreamHandler', 'formatter': 'simple'}},
    'loggers': {
        '': {'handlers': ['console'], 'level': 'WARNING', 'propagate': False},
        'fdpo_toolkit': {
            'handlers': ['console'],
            'level': os.environ.get('FDPO_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}
