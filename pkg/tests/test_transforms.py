import pytest

from garnier.algebra import Variable, substitute
from garnier.catalog import registry_get
from garnier.transforms import (
    BirationalMap,
    TransformError,
    amended_home,
    base_system,
    check_symplectic,
    compose,
    degeneration_ids,
    gauge_residual,
    get_transform,
    identity_map,
    inverse_map,
    manifest,
    maps_differ,
    power,
    pushforward_vector_field,
    reconstruct_hamiltonian,
    solve_triangular,
    transform_ids,
    transform_residuals,
)


@pytest.fixture(scope="module")
def auto():
    return registry_get("autoG14")


def test_inverse_round_trip(auto):
    m = get_transform("autoG14:R0", auto)
    inv = inverse_map(m)
    for n in auto.phase:
        assert substitute(m.image(n), inv) == auto.gen(n)
        assert substitute(inv[n], {k: m.image(k) for k in auto.phase}) == auto.gen(n)


def test_solve_triangular_moebius_chain(auto):
    ring = auto.ring.extend([Variable("U", "phase"), Variable("W", "phase")])
    q1, p1 = ring.gen("q1"), ring.gen("p1")
    sol = solve_triangular({"U": q1 + 1, "W": q1 * p1 + 1 / q1}, ["q1", "p1"])
    U, W = ring.gen("U"), ring.gen("W")
    assert sol["q1"] == U - 1
    assert sol["p1"] == (W - 1 / (U - 1)) / (U - 1)


def test_solve_triangular_rejects_coupled_system(auto):
    ring = auto.ring.extend([Variable("U", "phase"), Variable("W", "phase")])
    q1, p1 = ring.gen("q1"), ring.gen("p1")
    with pytest.raises(TransformError):
        solve_triangular({"U": q1 * q1 + p1, "W": p1 * p1 + q1}, ["q1", "p1"])


def test_charts_are_symplectic(auto):
    for tid in transform_ids("autoG14", "chart"):
        assert check_symplectic(get_transform(tid, auto), auto.pairs)


def test_non_symplectic_map_has_witness(auto):
    images = {n: auto.gen(n) for n in auto.phase}
    images["q1"] = 2 * auto.gen("q1")
    bad = BirationalMap(ring=auto.ring, phase=auto.phase, images=images, label="x:scale",
                        kind="chart")
    res = check_symplectic(bad, auto.pairs)
    assert not res
    assert "expected 1" in res.witness()


def test_chart_pushforward_is_polynomial_and_hamiltonian(auto):
    m = get_transform("autoG14:R2", auto)
    for a in range(2):
        field_ = pushforward_vector_field(m, auto, a)
        assert all(c.is_polynomial_in(auto.phase) for c in field_)
        h = reconstruct_hamiltonian(field_, auto.pairs)
        assert h.is_polynomial_in(auto.phase)


def test_generator_relations(auto):
    names = list(auto.phase) + list(auto.params)
    s0 = get_transform("autoG14:s0", auto)
    assert maps_differ(compose(s0, s0), identity_map(auto.ring, auto.phase), names) == []
    pi = get_transform("autoG14:pi", auto)
    assert maps_differ(power(pi, 2), identity_map(auto.ring, auto.phase), names) == []
    s1 = get_transform("autoG14:s1", auto)
    assert maps_differ(power(compose(s0, s1), 2), identity_map(auto.ring, auto.phase), names)


def test_symmetry_residuals_vanish(auto):
    g = get_transform("autoG14:s1", auto)
    assert transform_residuals(g, auto, auto) == [] or \
        transform_residuals(g, auto, auto, auto.constraint_solution()) == []


def test_printed_tuple_of_wrong_length_is_rejected():
    with pytest.raises(TransformError, match="13 entries"):
        get_transform("deGHS:s2")


def test_amended_readings_are_registered():
    assert "uraS:u1.amended" in transform_ids("uraS", "amended")
    assert amended_home("dV:s0.amended") == "dV.amended"
    assert base_system("SdeGaK.amended") == "SdeGaK"


def test_gauge_read_in_original_coordinates():
    s = registry_get("uraS")
    m = get_transform("uraS:chart6", s)
    cs = s.constraint_solution()
    assert gauge_residual(m, s, 0, cs).is_zero()
    assert gauge_residual(m, s, 1, cs).is_zero()


def test_printed_s_gauge_of_the_garnier_chart_does_not_match():
    s = registry_get("G11111")
    m = get_transform("G11111:chart6", s)
    cs = s.constraint_solution()
    assert gauge_residual(m, s, 0, cs).is_zero()
    assert not gauge_residual(m, s, 1, cs).is_zero()


def test_manifest_and_degenerations():
    assert len(manifest()) > 100
    assert degeneration_ids() == ["uraS:to-dVV", "dVV:to-SdeG3", "dVV:to-SdeGa",
                                  "SdeG3:to-SdeG4"]
