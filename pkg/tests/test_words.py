import random

import pytest

from smforge.words import (Hardware, Letter, Slot, NotAdmissible,
                           NonInjectiveMap, copy_word, free_reduce,
                           is_faulty_base, is_reduced, is_tight_base,
                           tokenize, y_length)


def L(kind, part, sym, sign=1, sup=None):
    return Letter(kind, part, sym, sign, sup)


a = L("y", 1, "a")
q = L("q", 0, "q")


def test_free_reduce_cancellation():
    assert free_reduce((a, a.inv(), q)) == (q,)
    assert free_reduce(()) == ()


def test_free_reduce_middle_of_chain():
    # q^-1 a^-1 a a q reduces to q^-1 a q
    w = (q.inv(), a.inv(), a, a, q)
    assert free_reduce(w) == (q.inv(), a, q)


def test_free_reduce_idempotent_and_shrinking():
    rng = random.Random(12)
    letters = [a, q, L("y", 1, "b"), L("q", 0, "p")]
    for _ in range(500):
        w = tuple(rng.choice(letters)._replace(sign=rng.choice((1, -1)))
                  for _ in range(rng.randint(0, 14)))
        r = free_reduce(w)
        assert free_reduce(r) == r
        assert len(r) <= len(w)
        assert is_reduced(r)


def test_y_length_counts_literal_letters():
    w = (q.inv(), a, q, a, a, q)
    assert y_length(w) == 3
    assert y_length((q, q)) == 0
    # unreduced input counts letters as given; the reduced form differs
    unreduced = (a, a.inv())
    assert y_length(unreduced) == 2
    assert y_length(free_reduce(unreduced)) == 0


def test_copy_word_homomorphism_and_roundtrip():
    b = L("y", 1, "b")
    m = {a: L("y", 2, "A"), b: L("y", 2, "B")}
    back = {v: k for k, v in m.items()}
    u = (a, b.inv(), a)
    v = (b, b)
    assert copy_word(u + v, m) == copy_word(u, m) + copy_word(v, m)
    assert copy_word(copy_word(u, m), back) == u
    assert copy_word((), m) == ()


def test_copy_word_triple():
    h = [L("y", 1, "h%d" % i) for i in range(1, 4)]
    hb = [L("y", 1, "H%d" % i) for i in range(1, 4)]
    m = dict(zip(h, hb))
    assert copy_word(tuple(h), m) == tuple(hb)


def test_copy_word_noninjective():
    b = L("y", 1, "b")
    m = {a: L("y", 2, "A"), b: L("y", 2, "A")}
    with pytest.raises(NonInjectiveMap):
        copy_word((a, b), m)


# ---------------------------------------------------------------------------


def lr_hardware():
    return Hardware((Slot("Q1", 1, ("q1",)), Slot("P", 1, ("p1", "p2")),
                     Slot("Q2", 1, ("q2",))),
                    ((), ("a",), ("a'",)))


def test_parse_admissible_standard():
    hw = lr_hardware()
    adm = hw.parse_admissible(hw.word("q1 a p1 q2"))
    assert adm.base == ((0, 1), (1, 1), (2, 1))
    assert [s.junction for s in adm.sectors] == [1, 2]
    # the base is recoverable by deleting tape letters
    assert tuple((x.part, x.sign) for x in adm.word if x.kind == "q") \
        == adm.base


def test_parse_admissible_turnaround():
    hw = lr_hardware()
    adm = hw.parse_admissible(hw.word("q1 a p1 a' p1^-1 a^-1 q1^-1"))
    assert adm.base == ((0, 1), (1, 1), (1, -1), (0, -1))


def test_parse_admissible_rejects_leading_tape_letter():
    hw = lr_hardware()
    with pytest.raises(NotAdmissible) as e:
        hw.parse_admissible(hw.word("a q1"))
    assert e.value.position == 0


def test_parse_admissible_rejects_wrong_junction():
    hw = lr_hardware()
    with pytest.raises(NotAdmissible):
        hw.parse_admissible(hw.word("q1 a' p1 q2"))
    with pytest.raises(NotAdmissible):
        hw.parse_admissible(hw.word("q1 q2"))


def test_parse_admissible_rejects_wrong_turnaround_letter():
    hw = lr_hardware()
    with pytest.raises(NotAdmissible):
        hw.parse_admissible(hw.word("q1 a p1 a' p2^-1"))


# ---------------------------------------------------------------------------


def B(text):
    out = []
    for t in text.split():
        if t.endswith("^-1"):
            out.append((t[:-3], -1))
        else:
            out.append((t, 1))
    return out


def faulty_oracle(base):
    """Literal three-condition check, counting signed letters."""
    if len(base) < 2 or base[0] != base[-1]:
        return False
    from collections import Counter
    c = Counter(map(tuple, base))
    if c[tuple(base[0])] != 2:
        return False
    if any(v > 1 for k, v in c.items() if k != tuple(base[0])):
        return False
    return any(base[i][0] == base[i + 1][0] and base[i][1] == -base[i + 1][1]
               for i in range(len(base) - 1))


def test_faulty_base_examples():
    cases = ["Q P P^-1 Q", "Q P Q'", "Q P Q", "Q P^-1 P Q", "Q Q"]
    for text in cases:
        base = B(text)
        assert is_faulty_base(base) == faulty_oracle(base), text
    assert is_faulty_base(B("Q P P^-1 Q")) is True
    assert is_faulty_base(B("Q P Q'")) is False
    assert is_faulty_base(B("Q P Q")) is False


def test_tight_base_examples():
    assert is_tight_base(B("x x"), 1) is True
    assert is_tight_base(B("x"), 1) is False
    assert is_tight_base(B("u x v x"), 1) is True
    # with an x inside v the count exceeds L - 1 = 0
    assert is_tight_base(B("u x x v x"), 1) is False
    assert is_tight_base(B("u x v x w x"), 2) is True
    assert is_tight_base(B("u x v x x"), 2) is True


def test_tight_base_no_tight_proper_prefix():
    # exhaustive scan: a tight base has no proper prefix of the u x v x shape
    import itertools
    from smforge.words import _tight_shape
    alph = ["x", "y"]
    for n in range(2, 7):
        for combo in itertools.product(alph, repeat=n):
            base = [(s, 1) for s in combo]
            for LL in (1, 2):
                if is_tight_base(base, LL):
                    assert not any(_tight_shape(base[:k], LL)
                                   for k in range(2, n))


def test_tokenize():
    toks = tokenize("q a^-1 p^(3) r^(2)^-1")
    assert toks == [("q", None, 1), ("a", None, -1), ("p", 3, 1),
                    ("r", 2, -1)]
