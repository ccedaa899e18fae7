import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'kdelta_project.settings')
django.setup()
