from .base import *
from .norm_mean import *
from .curved_normal import *

from ..exceptions import InvalidParameterError

MODEL_KINDS = {
    'norm_mean': NormMeanModel,
    'NormMean': NormMeanModel,
    'curved_normal': CurvedNormalModel,
    'CurvedNormal': CurvedNormalModel,
}


def get_model(kind, **params):
    """Get a model by its kind (``norm_mean`` or ``curved_normal``), initialised with the given parameters."""
    try:
        model_class = MODEL_KINDS[kind]
    except KeyError:
        raise InvalidParameterError('Unknown model kind "{}" (choices: {})'.format(kind, ', '.join(sorted(MODEL_KINDS))))
    return model_class(**params)
