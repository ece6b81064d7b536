import pytest

from garnier.algebra import AlgebraError, parse_expression
from garnier.catalog import (
    dump,
    painleve_hamiltonian,
    phase_degree,
    registry_filter,
    registry_get,
    registry_keys,
    vector_field,
)


def test_registry_contains_the_families():
    keys = registry_keys()
    for k in ("G11111", "uraS", "dVV", "SdeG3", "SdeG4", "SdeGa", "autoG14", "SdeGaK"):
        assert k in keys
    assert "dV.amended" not in keys
    assert "dV.amended" in registry_keys(amended=True)


def test_filter():
    assert set(registry_filter("SdeG*")) >= {"SdeG3", "SdeG4", "SdeGa"}
    assert registry_filter("nothing-matches*") == []


def test_unknown_key():
    with pytest.raises(KeyError):
        registry_get("P7")


def test_autoG14_shape_and_hamiltonians():
    s = registry_get("autoG14")
    assert len(s.times) == 2 and len(s.pairs) == 2 and len(s.params) == 3
    assert s.hamiltonians[0] == s.expr(
        "-q1^2*p1 + p1^2/2 - a2*q1 - q2^2*p2 + p2^2/2 - a0*q2 + p1*p2")
    assert phase_degree(s, 1) == 4
    assert s.degree_record == 4


def test_vector_field_convention():
    s = registry_get("autoG14")
    v = vector_field(s, 0)
    # dq/dt = dH/dp, dp/dt = -dH/dq
    assert v[0] == s.expr("-q1^2 + p1 + p2")
    assert v[1] == s.expr("2*q1*p1 + a2")


def test_constraint_solution_eliminates_last_parameter():
    s = registry_get("autoG14")
    sol = s.constraint_solution()
    assert list(sol) == ["a2"]
    assert sol["a2"] == s.expr("-a0-a1")


def test_painleve_hamiltonian_arity():
    s = registry_get("autoG14")
    x, y, t = s.gen("q1"), s.gen("p1"), s.gen("t")
    h = painleve_hamiltonian("II", (x, y, t), (s.gen("a0"),))
    assert h == s.expr("p1^2/2 - (q1^2 + t/2)*p1 - a0*q1")
    with pytest.raises(ValueError):
        painleve_hamiltonian("VI", (x, y, t), (s.gen("a0"),))
    with pytest.raises(KeyError):
        painleve_hamiltonian("VII", (x, y, t), ())


def test_cyclic_symmetry_builds_later_hamiltonians():
    s = registry_get("dVV")
    assert len(s.hamiltonians) == 2
    assert s.hamiltonians[0] != s.hamiltonians[1]


def test_dump_is_deterministic():
    assert dump(registry_get("uraS")) == dump(registry_get("uraS"))
    assert dump(registry_get("uraS")).startswith("system: uraS\n")


def test_with_hamiltonians_keeps_structure():
    s = registry_get("SdeG4")
    m = s.with_hamiltonians([h * 2 for h in s.hamiltonians], name="SdeG4x2")
    assert m.name == "SdeG4x2" and m.pairs == s.pairs and m.params == s.params
