"""Exact models of the universal inverse semigroup of a group-embeddable
left cancellative semigroup, with word problems, constructible right ideals,
truncated regular representations and partial actions."""

from .backends import Abelian, Block, Free, Numerical, parse_spec
from .classes import ClassRep, Flavor, canonize, class_eq, class_leq, class_union, translate
from .errors import DomainError, EmptyIntervalError, ResourceError, UisError, UsageError
from .uis import UisElement, Word, enumerate_elements, eval_word, parse_word, uis_mul, uis_star, word_eq

__all__ = [
    "Abelian", "Block", "Free", "Numerical", "parse_spec",
    "ClassRep", "Flavor", "canonize", "class_eq", "class_leq", "class_union", "translate",
    "DomainError", "EmptyIntervalError", "ResourceError", "UisError", "UsageError",
    "UisElement", "Word", "enumerate_elements", "eval_word", "parse_word", "uis_mul", "uis_star",
    "word_eq",
]

__version__ = "0.1.0"
