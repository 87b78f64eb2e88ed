import random

import pytest
import sympy

from handlecalc import kirby as K
from handlecalc import words as W
from handlecalc.bundles import build_cacime, build_E, puncture_fiber, surface_times_disk
from handlecalc.errors import DomainError, InvalidMoveError, RefusedError
from handlecalc.kirby import Circle, FramedLink, HandleBody4
from handlecalc.linalg import AbelianInvariants, IntMatrix
from handlecalc.presentation import Presentation, TietzeMove
from linkgen import random_link, random_move
from oracles import coker_invariants, rational_kernel_signature
from test_linalg import e8


def hopf_pair(f1=0, f2=0, lk=1):
    return FramedLink.build([Circle("a", False, (), f1), Circle("b", False, (), f2)], {(0, 1): lk})


def unknot(framing):
    return FramedLink.build([Circle("u", False, (), framing)])


def single_dot():
    return FramedLink.build([Circle("d", True)])


def e8_link():
    m = e8()
    circles = [Circle(f"v{i}", False, (), 2) for i in range(8)]
    return FramedLink.build(circles, {(i, j): m[i][j] for i in range(8) for j in range(i + 1, 8)})


def boundary_oracle(L):
    return coker_invariants(L.linking.tolist(), len(L.circles))


def signature_oracle(L):
    return rational_kernel_signature(L.linking.tolist(), L.handle_indices, L.dotted_indices)


# --- algebraic layer -------------------------------------------------------

def test_euler_characteristic_examples():
    h, _ = surface_times_disk(2)
    assert K.euler_characteristic(h) == -2
    assert K.euler_characteristic(build_cacime()) == 4
    e0 = puncture_fiber(build_E())
    assert (e0.generator_count, e0.relator_count, e0.n3, e0.n4) == (6, 9, 2, 0)
    assert K.euler_characteristic(e0) == (-2) * (-1)


def test_h1_total_examples():
    assert K.h1_total(surface_times_disk(2)[0]) == AbelianInvariants(4)
    assert K.h1_total(build_cacime()) == AbelianInvariants(6)


def test_closed_invariants_s4():
    r = K.closed_invariants(HandleBody4(Presentation(()), 0, 1, True))
    assert (r.chi, r.b1, r.b2, r.sigma) == (2, 0, 0, "unknown")


def test_closed_invariants_t4_like():
    names = ("a", "b", "c", "d")
    rels = tuple(W.commutator(W.gen(i), W.gen(j)) for i in range(4) for j in range(i + 1, 4))
    r = K.closed_invariants(HandleBody4(Presentation(names, rels), 4, 1, True))
    # H*(T^4): betti numbers 1, 4, 6, 4, 1
    assert (r.chi, r.b1, r.b2) == (1 - 4 + 6 - 4 + 1, 4, 6)


def test_closed_invariants_cacime_with_hint():
    r = K.closed_invariants(build_cacime(), sigma_hint=0)
    assert r.to_json() == {"chi": 4, "b1": 6, "b2": 14, "sigma": 0, "h1_torsion": []}


def test_closed_invariants_refuses_open_handlebody():
    with pytest.raises(DomainError):
        K.closed_invariants(surface_times_disk(2)[0])


def test_handlebody_validation():
    with pytest.raises(DomainError):
        HandleBody4(Presentation(()), 0, 2)
    with pytest.raises(DomainError):
        HandleBody4(Presentation(()), 0, 0, closed=True)


# --- framed links -------------------------------------------------------------

def test_link_consistency_enforced():
    circles = (Circle("d", True), Circle("h", False, ((0, 1),), 0))
    with pytest.raises(DomainError):
        FramedLink(circles, IntMatrix.from_rows([[0, 0], [0, 0]]))
    with pytest.raises(DomainError):
        FramedLink((Circle("d", True, (), 1),), IntMatrix.from_rows([[1]]))


def test_hopf_slide_framing():
    L = hopf_pair()
    M = K.handle_slide(L, 0, 1, 1)
    assert M.circles[0].framing == 2
    E = sympy.Matrix([[1, 1], [0, 1]])
    assert sympy.Matrix(M.linking.tolist()) == E * sympy.Matrix(L.linking.tolist()) * E.T


def test_slide_over_unlinked_zero_unknot():
    L = FramedLink.build([Circle("a", False, (), 3), Circle("o", False, (), 0)])
    M = K.handle_slide(L, 0, 1, -1)
    assert [c.framing for c in M.circles] == [3, 0]
    assert K.h1_boundary(M) == K.h1_boundary(L)


def test_slide_rejects_dotted_and_self():
    L = surface_times_disk(1)[1]
    with pytest.raises(InvalidMoveError):
        K.handle_slide(L, 0, 2)
    with pytest.raises(InvalidMoveError):
        K.handle_slide(L, 2, 2)


def test_slide_word_update():
    L = FramedLink.build([Circle("d", True), Circle("a", False, ((0, 1),), 0),
                          Circle("b", False, ((0, 1),), 0)])
    M = K.handle_slide(L, 1, 2, -1, conjugator=((0, 1),))
    assert M.circles[1].word == ()
    assert M.linking[1, 0] == 0


def test_swap_single_dot():
    L = single_dot()
    assert K.h1_boundary(L) == AbelianInvariants(1)
    M = K.dot_surgery_swap(L, 0)
    assert not M.circles[0].dotted and M.circles[0].framing == 0
    assert K.h1_boundary(M) == AbelianInvariants(1)


def test_swap_all_dots_of_surface_link():
    L = surface_times_disk(2)[1]
    for i in range(4):
        L = K.dot_surgery_swap(L, i)
    assert all(not c.dotted and c.framing == 0 and not c.word for c in L.circles)
    assert L.linking == IntMatrix.zeros(5, 5)
    assert K.h1_boundary(L) == AbelianInvariants(5) == AbelianInvariants(*boundary_oracle(L))


def test_swap_blowup_blowdown():
    L = K.dot_surgery_swap(single_dot(), 0)
    M = K.blow_down(K.blow_up(L, -1), 1)
    assert M == L and K.h1_boundary(M) == AbelianInvariants(1)


def test_swap_refusals():
    L = K.companion_link(build_cacime())
    with pytest.raises(RefusedError):
        K.dot_surgery_swap(L, 0)
    with pytest.raises(InvalidMoveError):
        K.dot_surgery_swap(unknot(1), 0)


def test_stabilize_round_trip():
    L = K.empty_link()
    S = K.stabilize(L)
    assert [c.dotted for c in S.circles] == [True, False]
    assert K.destabilize(S, 0, 1) == L


def test_stabilize_surface_link_keeps_h1():
    _, L = surface_times_disk(2)
    S = K.stabilize(L)
    assert K.h1_total(K.handlebody_of(S)) == AbelianInvariants(4)
    assert K.link_euler_characteristic(S) == K.link_euler_characteristic(L)


def test_destabilize_pattern_violations():
    S = K.stabilize(single_dot())
    with pytest.raises(InvalidMoveError):
        K.destabilize(S, 0, 2)       # 2-handle runs over circle 1, not 0
    linked = K.handle_slide(K.blow_up(S, 1), 3, 2, 1)
    with pytest.raises(InvalidMoveError):
        K.destabilize(linked, 1, 2)


def test_blowup_examples():
    assert K.link_signature(K.blow_up(K.empty_link(), 1)) == 1
    assert K.link_signature(K.blow_up(e8_link(), 1)) == 9
    L = hopf_pair()
    assert K.blow_down(K.blow_up(L, 1), 2) == L
    with pytest.raises(InvalidMoveError):
        K.blow_down(L, 0)


def test_h1_boundary_examples():
    assert K.h1_boundary(single_dot()) == AbelianInvariants(1)
    assert K.h1_boundary(unknot(1)) == AbelianInvariants(0)
    assert K.h1_boundary(surface_times_disk(2)[1]) == AbelianInvariants(5)
    assert K.h1_boundary(unknot(5)) == AbelianInvariants(0, (5,))


def test_intersection_form_examples():
    assert K.signature(K.intersection_form(hopf_pair())) == 0
    assert K.link_signature(e8_link()) == 8
    assert K.link_signature(unknot(1)) == 1
    q = K.intersection_form(surface_times_disk(2)[1])
    assert q == IntMatrix.from_rows([[0]])


def test_intersection_form_restricts_to_kernel():
    # 2-handle over the dot twice: no closed class; the other handle survives
    L = FramedLink.build([Circle("d", True), Circle("a", False, ((0, 1), (0, 1)), 1),
                          Circle("b", False, (), -1)])
    assert K.intersection_form(L) == IntMatrix.from_rows([[-1]])


def test_algebraic_only_refusals():
    L = K.companion_link(build_cacime())
    for op in (K.h1_boundary, K.intersection_form, K.link_signature):
        with pytest.raises(RefusedError, match="algebraic-only"):
            op(L)


def test_companion_link_reproduces_presentation():
    h = build_cacime()
    L = K.companion_link(h)
    assert K.presentation_of(L) == h.presentation
    assert L.algebraic_only and len(L.circles) == 26


def test_tietze_on_link_matches_presentation():
    h = build_cacime()
    L = K.companion_link(h)
    p = h.presentation
    from handlecalc.presentation import tietze_apply
    moves = [TietzeMove("T1", i=1, j=2, sign=-1, conjugator=((0, 1),)),
             TietzeMove("T2", i=4, invert=True, conjugator=((6, -1),)),
             TietzeMove("T3", word=((0, 1), (7, 1)), name="z"),
             TietzeMove("T4", generator=8)]
    for m in moves:
        L = K.tietze_on_link(L, m)
        p = tietze_apply(p, m)
        assert K.presentation_of(L) == p


@pytest.mark.parametrize("seed", range(25))
def test_random_move_contracts(seed):
    rng = random.Random(seed)
    L = random_link(rng)
    for _ in range(12):
        kind, args, M = random_move(L, rng)
        chi0, chi1 = K.link_euler_characteristic(L), K.link_euler_characteristic(M)
        assert boundary_oracle(M) == boundary_oracle(L)
        assert K.h1_boundary(M) == AbelianInvariants(*boundary_oracle(M))
        s0, s1 = signature_oracle(L), signature_oracle(M)
        assert K.link_signature(M) == s1
        if kind == "swap":
            assert chi1 == chi0 + 2
        elif kind == "blowup":
            assert (chi1 - chi0, s1 - s0) == (1, args["sign"])
        elif kind == "blowdown":
            assert (chi1 - chi0, s1 - s0) == (-1, -args["framing"])
        else:
            assert chi1 == chi0 and s1 == s0
            assert K.h1_total(K.handlebody_of(M)) == K.h1_total(K.handlebody_of(L))
        L = M
