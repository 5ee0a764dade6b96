import moddeg2 as m


def test_arith():
    assert m.is_prime(24859)
    assert not m.is_prime(2537)
    assert m.factor(2537) == [(43, 1), (59, 1)]
    assert m.represent_u2_plus_16v2(73) == (3, 2)
    assert not m.merel_criterion(73)
    assert m.merel_criterion(113)
    assert m.neumann_setzer_test(73) == (3, True)
    assert m.neumann_setzer_test(11) is None


def test_curve():
    info = m.curve_info([0, -1, 1, -10, -20])
    assert info["disc"] == -161051
    assert not info["has_two_torsion"]
    assert info["real_connected"]
    assert info["supersingular_at_2"]
    assert m.ap([0, -1, 1, -10, -20], 3) == -1
    cm = m.curve_info([0, 0, 1, 0, 2])
    assert cm["cm_discriminant"] == -3


def test_modsym():
    sp = m.space_info(11)
    assert sp["genus"] == 1
    assert sp["cuspidal_dim"] == 2
    assert m.genus_x0(37) == 2


def test_hecke_and_parity():
    facs = m.local_factors(37)
    assert len(facs) == 1
    assert facs[0]["d_m"] == 2
    assert facs[0]["residue_degree"] == 1
    p = m.parity(11, [0, -1, 1, -10, -20])
    assert p["parity"] == "odd"
    p37 = m.parity(37, [0, 0, 1, -1, 0])
    assert p37["parity"] == "even"


def test_classify():
    v = m.theorem_one_filter([0, 0, 1, 0, 2], 243)
    assert v["rule"] == "CASE_3C"
    assert v["parity"] == "undetermined"
    v = m.theorem_one_filter([1, -1, 0, -58, -105], 2537)
    assert v["rule"] == "CASE_3A"


def test_rank_parity():
    assert m.rank_parity(11, [0, -1, 1, -10, -20]) == "even"
    assert m.rank_parity(37, [0, 0, 1, -1, 0]) == "odd"


def test_two_division_field():
    k = m.two_division_field([0, -1, 1, -10, -20])
    assert k["field_disc"] == -44
    assert k["signature"] == (1, 1)
    assert k["two_totally_ramified"]
