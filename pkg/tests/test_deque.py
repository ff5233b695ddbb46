from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.stateful import RuleBasedStateMachine, invariant, precondition, rule

from opmpc.deque import IntervalHeap
from opmpc.search import PartialSolution, PriorityDeque


class IntervalHeapMachine(RuleBasedStateMachine):
    """Compare against a plain sorted list."""

    def __init__(self):
        super().__init__()
        self.heap = IntervalHeap()
        self.model = []
        self.counter = 0

    @rule(value=st.integers(-20, 20))
    def push(self, value):
        self.counter += 1
        key = (value, self.counter)
        self.heap.push(key, key)
        self.model.append(key)
        self.model.sort()

    @precondition(lambda self: self.model)
    @rule()
    def pop_low(self):
        assert self.heap.pop_low() == self.model.pop(0)

    @precondition(lambda self: self.model)
    @rule()
    def pop_high(self):
        assert self.heap.pop_high() == self.model.pop()

    @invariant()
    def consistent(self):
        self.heap.check()
        assert len(self.heap) == len(self.model)
        if self.model:
            assert self.heap.peek_low() == self.model[0]
            assert self.heap.peek_high() == self.model[-1]


TestIntervalHeap = IntervalHeapMachine.TestCase
TestIntervalHeap.settings = settings(max_examples=200, stateful_step_count=60, deadline=None)


def _sol(potential, cost, seq):
    return PartialSolution(frozenset(), (), cost, 0.0, potential, potential, seq)


@given(st.lists(st.tuples(st.sampled_from([0.0, 0.5, 1.0, 1.5]), st.integers(0, 3)), min_size=1, max_size=40))
def test_priority_order_is_potential_then_cost_then_insertion(items):
    dq = PriorityDeque()
    sols = [_sol(p, c, i) for i, (p, c) in enumerate(items)]
    for s in sols:
        dq.push(s)
    expected = sorted(sols, key=lambda s: (-s.potential, s.cost, s.seq))
    assert dq.peek_minimum() is expected[-1]
    out = [dq.pop_maximum() for _ in range(len(sols))]
    assert out == expected
