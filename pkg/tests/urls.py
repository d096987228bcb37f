from django.urls import (
    include,
    path,
)

urlpatterns = [
    path("grover/", include("outpost.django.grover.urls", namespace="grover")),
]
