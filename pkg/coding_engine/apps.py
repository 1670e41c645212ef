from django.apps import AppConfig


class CodingEngineConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'coding_engine'
    verbose_name = 'PBEC Coding Engine'
