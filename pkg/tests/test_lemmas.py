"""The lemma battery at test bounds; each check enumerates its own
instances and returns a violation list."""

from smforge import lemmas


def _run(fn, **kw):
    rep = fn(**kw)
    assert rep["ok"], rep["violations"][:5]
    assert rep["instances"] > 0
    return rep


def test_prim():
    rep = _run(lemmas.check_prim, max_u=2, depth=4)
    assert rep["instances"] > 1000


def test_prim_clause4():
    _run(lemmas.check_prim4)


def test_r_prim():
    _run(lemmas.check_r_prim, m=2, max_k=2)


def test_gen():
    _run(lemmas.check_gen, depth=4, max_u=2)


def test_gen1():
    _run(lemmas.check_gen1, depth=6, max_u=2)


def test_gen2_wi():
    rep = _run(lemmas.check_gen2_wi, depth=6, max_u=2)
    assert rep["nontrivial"] > 0


def test_w():
    _run(lemmas.check_w, depth=8, max_u=2)


def test_nine():
    _run(lemmas.check_nine, depth=5, max_u=1)


def test_m31():
    _run(lemmas.check_m31, depth=4)


def test_i2a2():
    _run(lemmas.check_i2a2, ks=(0, 1, 2), hist_len=2, depth=8)


def test_forbidden_step_histories():
    _run(lemmas.check_forbidden_step_histories, depth=4)


def test_sh_dichotomy():
    _run(lemmas.check_sh_dichotomy, depth=4)


def test_i6a6():
    _run(lemmas.check_i6a6, ks=(0, 2), reject_ks=(1,), bound=4)


def test_mixture():
    _run(lemmas.check_mixture, max_beads=7, J_max=3)


def test_ochev():
    _run(lemmas.check_ochev, samples=20000)


def test_conj():
    _run(lemmas.check_conj, accept_ks=(0,), reject_ks=(1,), bound=4)
