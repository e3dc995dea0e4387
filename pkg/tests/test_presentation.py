import itertools

import pytest
from hypothesis import given, settings, strategies as st

from strelkit import fixtures
from strelkit.presentation import (Letter, PresentationError, assign_signs, check_sign_table,
                                   format_presentation, parse_presentation,
                                   validate_string_algebra)


def test_lambda2_parses():
    P = fixtures.lambda2()
    assert P.vertices == ("v",)
    assert [a.name for a in P.arrows] == ["x", "y"]
    assert set(P.rho) == {("x", "x"), ("y", "y")}
    assert validate_string_algebra(P) == []
    assert not P.is_finite_dimensional()
    assert fixtures.lambda2_trunc().is_finite_dimensional()


def test_round_trip():
    P = fixtures.lambda2_trunc()
    assert parse_presentation(format_presentation(P)) == P


def test_empty_arrow_list():
    P = parse_presentation("vertex v\n")
    assert P.arrows == () and validate_string_algebra(P) == []


@pytest.mark.parametrize("text, fragment", [
    ("vertex v\narrow x : v -> v\nrel x z\n", "z"),
    ("vertex v\nvertex v\n", "duplicate"),
    ("vertex u\nvertex v\narrow a : u -> v\nrel a a\n", "compos"),
    ("vertex v\nbogus\n", "line 2"),
])
def test_parse_errors(text, fragment):
    with pytest.raises(PresentationError) as e:
        parse_presentation(text)
    assert fragment in str(e.value)


def test_three_loops_violates_a():
    P = parse_presentation("vertex v\n" + "".join(f"arrow {a} : v -> v\n" for a in "xyz"))
    axioms = {v.axiom for v in validate_string_algebra(P)}
    assert "a" in axioms


def test_free_loops_violate_b():
    P = parse_presentation("vertex v\narrow x : v -> v\narrow y : v -> v\n")
    bad = validate_string_algebra(P)
    assert any(v.axiom == "b" and v.where == "x" for v in bad)


def test_signs_lambda2():
    P = fixtures.lambda2()
    s = assign_signs(P)
    x, y = Letter("x"), Letter("y")
    assert s[x] == s[x.inv()] == 1
    assert s[y] == s[y.inv()] == -1


def test_signs_single_arrow():
    s = assign_signs(fixtures.a1())
    assert s[Letter("a")] == 1 and s[Letter("a", True)] == 1


def test_shared_head_forces_opposite_signs():
    P = parse_presentation("vertex u\nvertex w\nvertex v\narrow y : u -> v\narrow z : w -> v\n")
    s = assign_signs(P)
    assert s[Letter("y")] != s[Letter("z")]


# brute-force comparison on random small quivers --------------------------------


def brute_is_string_algebra(vertices, arrows, rho):
    for v in vertices:
        if sum(h == v for _, _, h in arrows) > 2 or sum(t == v for _, t, _ in arrows) > 2:
            return False
    for y, ty, hy in arrows:
        after = [x for x, tx, _ in arrows if tx == hy and (x, y) not in rho]
        before = [z for z, _, hz in arrows if hz == ty and (y, z) not in rho]
        if len(after) > 1 or len(before) > 1:
            return False
    return True


quivers = st.integers(1, 3).flatmap(lambda nv: st.tuples(
    st.just(nv),
    st.lists(st.tuples(st.integers(0, nv - 1), st.integers(0, nv - 1)), max_size=4),
    st.lists(st.booleans(), min_size=16, max_size=16)))


@settings(max_examples=200, deadline=None)
@given(quivers)
def test_validation_matches_brute_force(q):
    nv, ends, mask = q
    vertices = [f"v{i}" for i in range(nv)]
    arrows = [(f"a{k}", f"v{t}", f"v{h}") for k, (t, h) in enumerate(ends)]
    paths = [(x, y) for (x, tx, _), (y, _, hy) in itertools.product(arrows, arrows) if tx == hy]
    rho = {p for p, keep in zip(paths, mask) if keep}
    text = "".join(f"vertex {v}\n" for v in vertices)
    text += "".join(f"arrow {a} : {t} -> {h}\n" for a, t, h in arrows)
    text += "".join(f"rel {x} {y}\n" for x, y in sorted(rho))
    P = parse_presentation(text)
    ok = brute_is_string_algebra(vertices, arrows, rho)
    assert (validate_string_algebra(P) == []) == ok
    if ok:
        assert check_sign_table(P, assign_signs(P)) == []
