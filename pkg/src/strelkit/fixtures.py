"""Small presentations and relations used in examples and tests."""

from .exactla import QQ, Field
from .presentation import parse_presentation

LAMBDA2 = """\
# one vertex, two loops, xx = yy = 0
field Q
vertex v
arrow x : v -> v
arrow y : v -> v
rel x x
rel y y
"""

# finite-dimensional truncation of LAMBDA2
LAMBDA2_TRUNC = LAMBDA2 + """\
rel x y x
rel y x y
"""

A1 = """\
field Q
vertex u
vertex v
arrow a : u -> v
"""


def _with_field(text, field):
    from .exactla import field_name
    if field is QQ:
        return text
    return text.replace("field Q", f"field {field_name(field)}")


def lambda2(field: Field = QQ):
    return parse_presentation(_with_field(LAMBDA2, field))


def lambda2_trunc(field: Field = QQ):
    return parse_presentation(_with_field(LAMBDA2_TRUNC, field))


def a1(field: Field = QQ):
    return parse_presentation(_with_field(A1, field))
