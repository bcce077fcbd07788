"""Configure Django before pytest collects the solitons test modules."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'solitonlab.settings')
django.setup()
