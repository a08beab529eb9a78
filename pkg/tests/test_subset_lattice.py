from pytest import raises

from errors import SubsetCapError
from formula_service import Atom, Compound
from subset_lattice import ascending_subsets, canonical_sort, check_cap, maximal_subsets

p, q, r = Atom("p"), Atom("q"), Atom("r")
not_p = Compound("~", (p,))


def test_ascending_subsets_in_canonical_order():
    subsets = list(ascending_subsets([not_p, q, p]))
    assert subsets == [
        frozenset(),
        frozenset([p]),
        frozenset([q]),
        frozenset([not_p]),
        frozenset([p, q]),
        frozenset([p, not_p]),
        frozenset([q, not_p]),
        frozenset([p, q, not_p]),
    ]


def test_ascending_subsets_bounded_by_size():
    assert len(list(ascending_subsets([p, q, r], max_size=1))) == 4
    assert len(list(ascending_subsets([p, q, r], max_size=9))) == 8


def test_maximal_subsets_top_down():
    calls = []

    def at_most_one_atom(subset):
        calls.append(subset)
        return len(subset) <= 1

    assert maximal_subsets([r, p, q], at_most_one_atom) == [frozenset([p]), frozenset([q]), frozenset([r])]
    # the empty set lies inside a found maximal subset
    assert frozenset() not in calls


def test_maximal_subsets_of_a_consistent_whole():
    assert maximal_subsets([p, q], lambda subset: True) == [frozenset([p, q])]


def test_canonical_sort():
    assert canonical_sort([frozenset([q, r]), frozenset([p]), frozenset([p, r])], [p, q, r]) == [
        frozenset([p]),
        frozenset([p, r]),
        frozenset([q, r]),
    ]


def test_cap():
    assert check_cap([p, q], cap=2) == 2
    with raises(SubsetCapError) as error:
        check_cap([p, q, r], cap=2)
    assert error.value.code == "SUBSET_CAP_EXCEEDED"
    assert error.value.details == {"size": 3, "cap": 2}


def test_maximal_subsets_come_back_in_canonical_order():
    allowed = [frozenset([q, r]), frozenset([p])]

    def inside_allowed(subset):
        return any(subset <= a for a in allowed)

    # the walk finds {q, r} before {p}
    assert maximal_subsets([p, q, r], inside_allowed) == [frozenset([p]), frozenset([q, r])]
