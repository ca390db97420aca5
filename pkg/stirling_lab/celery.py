import os
from celery import Celery

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'stirling_lab.settings')

app = Celery('stirling_lab')
app.config_from_object('django.conf:settings', namespace='CELERY')
app.autodiscover_tasks()
