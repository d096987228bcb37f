from django.apps import AppConfig
from django.utils.translation import gettext_lazy as _


class GroverConfig(AppConfig):
    name = "outpost.django.grover"
    verbose_name = _("Grover phase matching")
