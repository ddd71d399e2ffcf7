import itertools

import pytest

from braidcover.rewrite import (FreeWord, RewriteError, SubstitutionRule,
                                format_word, parse_word, solve_relation,
                                cycle_relators, verify_lemma_x, verify_lemma_y,
                                verify_lemma_left, verify_lemma_right,
                                verify_product_relation, replay_transcript,
                                left_elimination, right_elimination,
                                left_alphabet)
from braidcover.diagram import DecoratedCycleGraph

w = FreeWord.gen


def test_reduce_basics():
    assert (w("x") * w("x", -1)).is_identity()
    assert w("x") * w("y") * w("y", -1) * w("x") == FreeWord.from_pairs([("x", 2)])
    u = parse_word("x y^-2 x^3")
    assert FreeWord(u.letters) == u          # reduce is idempotent


def test_reduce_cancels_inverse():
    for word in [parse_word("x y x^-1"), parse_word("a^3 b^-2 a"), FreeWord()]:
        assert (word * word.inverse()).is_identity()
        assert (word.inverse() * word).is_identity()


def test_word_algebra():
    u = parse_word("x y^-1")
    assert u ** 3 == parse_word("x y^-1 x y^-1 x y^-1")
    assert u ** -2 == (u.inverse()) ** 2
    assert u ** 0 == FreeWord()
    assert u.substitute({"y": parse_word("x")}).is_identity()


def test_substitute():
    u = parse_word("a b a^-1")
    got = u.substitute({"b": parse_word("a c")})
    assert got == parse_word("a a c a^-1")
    # substituted symbol disappears
    assert "b" not in got.symbols()


def test_cyclic_reduce_and_canonical():
    u = parse_word("x y x^-1")
    assert u.cyclic_reduce() == parse_word("y")
    r1 = parse_word("a b c")
    r2 = parse_word("b c a")
    r3 = r1.inverse()
    assert r1.canonical_cyclic() == r2.canonical_cyclic() == r3.canonical_cyclic()


def test_format_and_parse_roundtrip():
    for text in ["x1 x0^-1 x1", "y0^3", "1"]:
        assert format_word(parse_word(text), fold=False) == text
    assert format_word(parse_word("x1 x0^-1 x1 x0^-1 x1 x0^-1 x1")) == "(x1 x0^-1)^3 x1"


def test_substitution_rule_rejects_cycles():
    with pytest.raises(RewriteError):
        SubstitutionRule("x", parse_word("y x"))


def test_solve_relation_examples():
    # x2 = x1 x0^-1 x1 from the path relator
    r = parse_word("x0^-1 x1 x2^-1 x1")
    assert solve_relation(r, "x2") == parse_word("x1 x0^-1 x1")
    # bare generator solves to the identity
    assert solve_relation(parse_word("g"), "g").is_identity()
    # r = a g^-1 b  ->  g = b a, checked by substitution
    r = parse_word("a g^-1 b")
    sol = solve_relation(r, "g")
    assert sol == parse_word("b a")
    assert r.substitute({"g": sol}).is_identity()


def test_solve_relation_errors():
    with pytest.raises(RewriteError):
        solve_relation(parse_word("a b"), "g")
    with pytest.raises(RewriteError):
        solve_relation(parse_word("g a g"), "g")


def test_lemma_x_base_cases():
    t = verify_lemma_x(2)
    assert t.results["x2"] == parse_word("x1 x0^-1 x1")
    t = verify_lemma_x(1)
    assert t.results["x1"] == parse_word("x1")


def test_lemma_x_closed_form():
    t = verify_lemma_x(5)
    assert t.results["x5"] == (parse_word("x1 x0^-1")) ** 4 * parse_word("x1")
    for m in range(1, 9):
        verify_lemma_x(m)


def test_lemma_x_transcript_replays():
    t = verify_lemma_x(6)
    assert replay_transcript(t)
    # corrupt a step: replay must fail
    t.steps[2].word = t.steps[2].word * w("x1")
    assert not replay_transcript(t)


def test_lemma_y_degenerate_segment():
    # b_k = 1 collapses to y_{c_k} = y_{c_{k-1}+1}
    verify_lemma_y((1, 1), (1,))


def test_lemma_y_one_substitution_step():
    # b_k = 2: y_{c_k} = (y_{c_{k-1}+1} y_{c_{k-1}}^-1) y_{c_{k-1}+1}
    verify_lemma_y((1, 1), (2,))


def test_lemma_y_forward_backward_agreement():
    verify_lemma_y((1, 1), (3,))


def test_lemma_left_examples():
    d = DecoratedCycleGraph(1, (2, 2), (1,))
    t, words = verify_lemma_left(d)
    assert [format_word(v, fold=False) for v in words] == ["y0", "qL y0"]
    assert all(v.is_positive() for v in words)
    # y1 y0^-1 = x1 y0^(a0-1) is the first recorded check
    checks = [s for s in t.steps if s.rule == "check"]
    assert checks[0].target == "y1 y0^-1"


def test_lemma_left_k0_trivial():
    d = DecoratedCycleGraph(2, (1, 1), (1,))
    _, words = verify_lemma_left(d)
    assert words[0] == w("y0")


def test_lemma_right_base():
    d = DecoratedCycleGraph(3, (1, 1, 1), (1, 1))
    _, words = verify_lemma_right(d)
    assert words[-1] == w("y2")
    assert all(v.is_positive() for v in words)


def test_product_relation_examples():
    for params in [(1, (2, 2), (1,)), (3, (1, 1, 1), (1, 1))]:
        verify_product_relation(DecoratedCycleGraph(*params))


def test_product_relation_rejects_degenerate():
    with pytest.raises(ValueError):
        verify_product_relation(DecoratedCycleGraph(2, (1,), ()))


def test_elimination_is_acyclic():
    # every derived word only mentions the base alphabet
    d = DecoratedCycleGraph(2, (2, 1, 2), (2, 1))
    el = left_elimination(d.m, d.a, d.b)
    for sym, word in el.results.items():
        assert word.symbols() <= {"y0", "x1"}
    er = right_elimination(d.m, d.a, d.b)
    for sym, word in er.results.items():
        assert word.symbols() <= {"y%d" % d.cn, "x%d" % (d.m - 1)}


def test_eliminations_replay():
    d = DecoratedCycleGraph(2, (2, 1, 2), (2, 1))
    assert replay_transcript(left_elimination(d.m, d.a, d.b))
    assert replay_transcript(right_elimination(d.m, d.a, d.b))


def test_left_and_right_words_expand_to_same_element():
    # both ends express the marked generators; through the eliminations the
    # left expansion of y_{c_k} matches its left ground truth and the right
    # expansion its right ground truth, which were derived from the same
    # relators in opposite orders
    d = DecoratedCycleGraph(4, (2, 1, 2), (1, 2))
    tl, lw = verify_lemma_left(d)
    tr, rw = verify_lemma_right(d)
    el = left_elimination(d.m, d.a, d.b)
    c = d.c
    for k in range(d.n + 1):
        assert lw[k].substitute(left_alphabet(d.m, d.a, d.b)) == el.results["y%d" % c[k]]


def test_grid_small():
    count = 0
    for n in (1, 2):
        for m in (1, 2, 3):
            for a in itertools.product((1, 2), repeat=n + 1):
                for b in itertools.product((1, 2), repeat=n):
                    d = DecoratedCycleGraph(m, a, b)
                    verify_lemma_y(a, b)
                    verify_lemma_left(d)
                    verify_lemma_right(d)
                    verify_product_relation(d)
                    count += 1
    assert count == 3 * (4 * 2 + 8 * 4)


def test_cycle_relators_shapes():
    rel = cycle_relators(3, [1, 1, 1], [1, 1])
    assert set(rel) == {"x1", "x2", "y0", "y1", "y2", "z", "z_rel"}
    assert rel["z"] == w("z")
    assert rel["z_rel"] == parse_word("y2^-1 y1^-1 y0^-1")
    # relator of an interior marked vertex
    assert rel["y1"] == parse_word("y0^-1 y1 y1 y2^-1 y1")


def test_all_verify_transcripts_replay():
    d = DecoratedCycleGraph(3, (2, 1, 2), (1, 2))
    assert replay_transcript(verify_lemma_x(d.m, d.cn))
    assert replay_transcript(verify_lemma_y(d.a, d.b))
    assert replay_transcript(verify_lemma_left(d)[0])
    assert replay_transcript(verify_lemma_right(d)[0])
    assert replay_transcript(verify_product_relation(d))
    d = DecoratedCycleGraph(1, (2, 2), (1,))
    assert replay_transcript(verify_lemma_left(d)[0])
    assert replay_transcript(verify_lemma_right(d)[0])
    assert replay_transcript(verify_product_relation(d))


def test_transcript_json_schema():
    d = DecoratedCycleGraph(2, (1, 2), (1,))
    blob = verify_product_relation(d).to_json()
    assert blob["lemma"] == "product"
    for step in blob["steps"]:
        assert set(step) == {"rule", "target", "using", "word"}
