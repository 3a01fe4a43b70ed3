import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'relgas_project.settings')
django.setup()
