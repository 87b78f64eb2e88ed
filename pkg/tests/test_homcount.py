from fractions import Fraction
from math import factorial

import pytest

from handlecalc import homcount, words as W
from handlecalc.bundles import build_cacime, surface_presentation
from handlecalc.errors import DomainError, ResourceLimitError
from handlecalc.finite import FiniteGroupTable, cyclic_group, named_group, symmetric_group
from handlecalc.homcount import count_homs, plan_search
from handlecalc.presentation import Presentation, abelian_invariants
from oracles import brute_force_homs, s3_table, vectorized_homs

backends = pytest.mark.parametrize("backend", sorted(homcount.KERNELS))

Z2_PRES = Presentation(("x", "y"), (W.commutator(W.gen(0), W.gen(1)),))


def test_compiled_kernel_available():
    # the build ships the compiled kernel; the fallback is exercised explicitly below
    assert "python" in homcount.KERNELS
    assert homcount.BACKEND in homcount.KERNELS


@backends
def test_trivial_relator_forces_identity(backend):
    p = Presentation(("x",), (W.gen(0),))
    assert count_homs(p, symmetric_group(3), backend=backend) == 1


@backends
def test_commuting_pairs_in_s3(backend):
    mult, inv, e = s3_table()
    expected = brute_force_homs(2, Z2_PRES.relators, mult, inv, e)
    assert expected == 18
    assert count_homs(Z2_PRES, symmetric_group(3), backend=backend) == 18


@backends
def test_surface_group_into_z2(backend):
    assert count_homs(surface_presentation(2).presentation, cyclic_group(2), backend=backend) == 16


@backends
def test_free_generators_contribute_order(backend):
    p = Presentation(("a", "b", "c"), (W.power(W.gen(1), 2),))
    # b has order dividing 2 in S3 (4 choices), a and c free
    assert count_homs(p, symmetric_group(3), backend=backend) == 6 * 4 * 6


@backends
def test_empty_presentation(backend):
    assert count_homs(Presentation(()), symmetric_group(3), backend=backend) == 1


def test_cap_guard():
    p = build_cacime().presentation
    with pytest.raises(ResourceLimitError) as err:
        count_homs(p, symmetric_group(3), cap=6 ** 8 - 1)
    assert err.value.required == 6 ** 8


def test_plan_orders_every_used_generator_once():
    p = build_cacime().presentation
    plan = plan_search(p)
    assert sorted(plan.order) == list(range(8))
    assert plan.free_generators == 0
    assert len(plan.rel_offsets) == len(p.relators) + 1


def test_cacime_z2_matches_abelianization():
    p = build_cacime().presentation
    assert count_homs(p, cyclic_group(2)) == 2 ** abelian_invariants(p).free_rank == 64


def test_cacime_s3_backends_agree_with_vectorized_brute_force():
    p = build_cacime().presentation
    mult, inv, e = s3_table()
    expected = vectorized_homs(8, p.relators, mult, inv, e)
    for backend in homcount.KERNELS:
        assert count_homs(p, symmetric_group(3), backend=backend) == expected


def test_group_tables_validate():
    assert symmetric_group(3).order == 6 and not symmetric_group(3).is_abelian()
    assert cyclic_group(3).is_abelian()
    with pytest.raises(DomainError):
        FiniteGroupTable(2, ((0, 1), (1, 1)), (0, 1), 0)
    with pytest.raises(DomainError):
        named_group("a5")


def test_evaluate():
    G = symmetric_group(3)
    w = W.commutator(W.gen(0), W.gen(1))
    assert G.evaluate(w, [1, 1]) == G.identity


# |Hom(surface group of genus g, G)| = |G|^(2g-1) * sum over irreducibles of dim^(2-2g)
IRREP_DIMS = {3: (1, 1, 2), 4: (1, 1, 2, 3, 3)}


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("g", [1, 2])
def test_surface_counts_match_character_formula(n, g):
    order = factorial(n)
    expected = order ** (2 * g - 1) * sum(Fraction(d) ** (2 - 2 * g) for d in IRREP_DIMS[n])
    assert expected.denominator == 1
    p = surface_presentation(g).presentation
    for backend in homcount.KERNELS:
        assert count_homs(p, symmetric_group(n), backend=backend) == expected


def test_falls_back_to_python_without_extension():
    import subprocess
    import sys
    code = ("import sys; sys.modules['handlecalc._homcount'] = None\n"
            "from handlecalc import homcount\n"
            "from handlecalc.bundles import build_cacime\n"
            "from handlecalc.finite import cyclic_group\n"
            "print(homcount.BACKEND, sorted(homcount.KERNELS), "
            "homcount.count_homs(build_cacime().presentation, cyclic_group(2)))")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "['python']", "64"]
