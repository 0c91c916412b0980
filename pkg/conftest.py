"""
    pytest wiring: configure Django with the test project settings (as manage.py does).
"""
import os

import django


os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'fdpo_toolkit_tests.test_project.settings')
django.setup()
