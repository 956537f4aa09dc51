from .base import FieldElement, FieldError, PrimeModulus, field_arith, field_sum, is_prime, next_prime_above
from .matrix import FieldMatrix, rank_mod_q

__all__ = [
    "FieldElement",
    "FieldError",
    "FieldMatrix",
    "PrimeModulus",
    "field_arith",
    "field_sum",
    "is_prime",
    "next_prime_above",
    "rank_mod_q",
]
