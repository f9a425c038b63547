"""Labelled bases, label-carrying exchange steps, and the sequence verifier.

A labelled basis pairs a basis with a bijection from labels 1..r to its
elements; an exchange step removes one basis element and hands its label to
the incoming element.  Two labelled bases are equal exactly when they have
the same elements carrying the same labels.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidStepError, UsageError


@dataclass(frozen=True)
class LabelledBasis:
    """by_label[i] is the element carrying label i+1."""

    by_label: tuple

    def __post_init__(self):
        elems = set(self.by_label)
        if len(elems) != len(self.by_label):
            raise UsageError("labelling must be a bijection onto the basis")

    @classmethod
    def from_dict(cls, mapping) -> "LabelledBasis":
        labels = sorted(int(k) for k in mapping)
        if labels != list(range(1, len(labels) + 1)):
            raise UsageError(f"labels must be exactly 1..r, got {labels}")
        return cls(tuple(int(mapping[l]) for l in labels))

    @property
    def rank(self) -> int:
        return len(self.by_label)

    @property
    def basis(self) -> frozenset:
        return frozenset(self.by_label)

    def element_of(self, label) -> int:
        if not 1 <= label <= len(self.by_label):
            raise UsageError(f"label {label} out of range 1..{len(self.by_label)}")
        return self.by_label[label - 1]

    def label_of(self, element) -> int:
        try:
            return self.by_label.index(element) + 1
        except ValueError:
            raise UsageError(f"element {element} carries no label") from None

    def as_dict(self) -> dict:
        return {i + 1: e for i, e in enumerate(self.by_label)}

    def key(self) -> tuple:
        """Canonical node key: sorted (element, label) pairs."""
        return tuple(sorted((e, i + 1) for i, e in enumerate(self.by_label)))


@dataclass(frozen=True)
class ExchangeStep:
    """One exchange: drop leaves the basis, add enters carrying drop's label."""

    drop: int
    add: int
    label: int

    def __post_init__(self):
        if self.drop == self.add:
            raise UsageError("an exchange must replace an element with a different one")

    def inverted(self) -> "ExchangeStep":
        return ExchangeStep(drop=self.add, add=self.drop, label=self.label)


@dataclass(frozen=True)
class ExchangeSequence:
    steps: tuple

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def __add__(self, other):
        return ExchangeSequence(self.steps + tuple(other))

    def inverted(self) -> "ExchangeSequence":
        """Label-aware reverse: inverted steps in reverse order."""
        return ExchangeSequence(tuple(s.inverted() for s in reversed(self.steps)))


EMPTY_SEQUENCE = ExchangeSequence(())


def apply_step(matroid, state: LabelledBasis, step: ExchangeStep) -> LabelledBasis:
    """Apply one exchange, validating every clause against the oracle."""
    basis = state.basis
    if step.drop not in basis:
        raise InvalidStepError(f"outgoing element {step.drop} is not in the basis")
    if not 1 <= step.label <= state.rank:
        raise InvalidStepError(f"label {step.label} out of range 1..{state.rank}")
    if state.element_of(step.label) != step.drop:
        raise InvalidStepError(
            f"label {step.label} is on element {state.element_of(step.label)}, "
            f"not on outgoing element {step.drop}"
        )
    if step.add in basis:
        raise InvalidStepError(f"incoming element {step.add} is already in the basis")
    if step.add not in matroid.element_set:
        raise InvalidStepError(f"incoming element {step.add} is not a ground element")
    new_basis = (basis - {step.drop}) | {step.add}
    if not matroid.is_independent(new_basis):
        raise InvalidStepError(
            f"replacing {step.drop} by {step.add} does not yield a basis"
        )
    replaced = list(state.by_label)
    replaced[step.label - 1] = step.add
    return LabelledBasis(tuple(replaced))


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    steps_applied: int
    failed_index: int | None = None
    reason: str | None = None
    final: LabelledBasis | None = None


def verify_sequence(matroid, start: LabelledBasis, sequence, target: LabelledBasis) -> VerifyReport:
    """Replay a sequence step by step using only the independence oracle.

    The verdict is ok exactly when every step applies and the final labelled
    basis matches the target element-wise and label-wise.
    """
    steps = tuple(sequence)
    if not matroid.is_basis(start.basis):
        return VerifyReport(False, 0, None, "start is not a basis of the matroid")
    if not matroid.is_basis(target.basis):
        return VerifyReport(False, 0, None, "target is not a basis of the matroid")
    state = start
    for i, step in enumerate(steps):
        try:
            state = apply_step(matroid, state, step)
        except InvalidStepError as err:
            return VerifyReport(False, i, i, err.reason)
    if state != target:
        return VerifyReport(
            False, len(steps), None, "final labelled basis differs from the target", state
        )
    return VerifyReport(True, len(steps), None, None, state)
