"""Rate regions, codes and converse proofs for multilevel diversity coding."""

from .model import (Decoder, MdcsInstance, validate, from_config_matrix,
                    to_config_matrix, canonical_form, from_text, to_text)
from .region import region, outer_region, classify_sufficiency, RateRegion

__version__ = "0.1.0"
