from django.apps import AppConfig


class CoreLawConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'core_law'
