import json
import logging

from django.http import (
    HttpResponse,
    HttpResponseBadRequest,
    HttpResponseNotFound,
)
from django.utils.translation import gettext as _
from django.views import View
from pydantic import BaseModel

from . import schemas

logger = logging.getLogger(__name__)


class SchemaView(View):
    def get(self, request, name):
        cls = getattr(schemas, name, None)
        if not cls:
            return HttpResponseNotFound(_("No such schema found"))
        if not (isinstance(cls, type) and issubclass(cls, BaseModel)):
            logger.debug(f"Refusing to publish {name} as a schema")
            return HttpResponseBadRequest(_("Requested class is not a schema"))
        return HttpResponse(
            json.dumps(cls.model_json_schema(), indent=2),
            content_type="application/schema+json",
        )
