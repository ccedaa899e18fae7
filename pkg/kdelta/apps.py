from django.apps import AppConfig


class KdeltaConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'kdelta'
    verbose_name = 'K-stability engine'
