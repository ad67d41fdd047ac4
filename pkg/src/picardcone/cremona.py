"""Cremona-Kantor action on N_s: quadratic moves, permutations, words, reduction."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Sequence, Union

from picardcone.lattice import ClassVector, class_from_json, class_to_json


@dataclass(frozen=True)
class Permutation:
    """Sends point i to point ``images[i-1]`` (1-based)."""

    images: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(int(x) for x in self.images))
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(self.images)}: {self.images}")

    @classmethod
    def swap(cls, i: int, j: int, s: int) -> "Permutation":
        images = list(range(1, s + 1))
        images[i - 1], images[j - 1] = j, i
        return cls(tuple(images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, img in enumerate(self.images, start=1):
            inv[img - 1] = i
        return Permutation(tuple(inv))

    def max_index(self) -> int:
        return len(self.images)


@dataclass(frozen=True)
class Quadratic:
    """Standard quadratic transformation based at points i, j, k (1-based)."""

    i: int
    j: int
    k: int

    def __post_init__(self):
        if len({self.i, self.j, self.k}) != 3:
            raise ValueError(f"quadratic move needs distinct indices, got {(self.i, self.j, self.k)}")
        if min(self.i, self.j, self.k) < 1:
            raise ValueError("indices are 1-based")

    def inverse(self) -> "Quadratic":
        return self

    def max_index(self) -> int:
        return max(self.i, self.j, self.k)


CKMove = Union[Permutation, Quadratic]


@dataclass(frozen=True)
class CKWord:
    """Finite sequence of moves, applied left to right."""

    moves: tuple[CKMove, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "moves", tuple(self.moves))

    def __add__(self, other: "CKWord") -> "CKWord":
        return CKWord(self.moves + other.moves)

    def __len__(self) -> int:
        return len(self.moves)

    def max_index(self) -> int:
        return max((mv.max_index() for mv in self.moves), default=0)


def _quadratic_coords(c: list, i: int, j: int, k: int) -> list:
    d, mi, mj, mk = c[0], c[i], c[j], c[k]
    out = list(c)
    out[0] = 2 * d - mi - mj - mk
    out[i] = d - mj - mk
    out[j] = d - mi - mk
    out[k] = d - mi - mj
    return out


def apply_quadratic(L: ClassVector, i: int, j: int, k: int) -> ClassVector:
    move = Quadratic(i, j, k)
    if move.max_index() > L.s:
        raise ValueError(f"quadratic move {(i, j, k)} out of range for s={L.s}")
    return ClassVector.from_coords(_quadratic_coords(list(L.coords), i, j, k))


def _apply_coords(move: CKMove, c: list) -> list:
    if isinstance(move, Quadratic):
        return _quadratic_coords(c, move.i, move.j, move.k)
    out = list(c)
    for i, img in enumerate(move.images, start=1):
        out[img] = c[i]
    return out


def _check_range(w: CKWord, s: int) -> None:
    for mv in w.moves:
        if isinstance(mv, Permutation) and len(mv.images) != s:
            raise ValueError(f"permutation of size {len(mv.images)} applied on s={s}")
        if mv.max_index() > s:
            raise ValueError(f"move {mv} references an index beyond s={s}")


def apply_word(w: CKWord, L: ClassVector) -> ClassVector:
    _check_range(w, L.s)
    c = list(L.coords)
    for mv in w.moves:
        c = _apply_coords(mv, c)
    return ClassVector.from_coords(c)


def invert(w: CKWord) -> CKWord:
    return CKWord(tuple(mv.inverse() for mv in reversed(w.moves)))


def random_word(s: int, rng: random.Random, length: int, perm_rate: float = 0.2) -> CKWord:
    """A random word mixing quadratic moves and permutations."""
    if s < 3:
        raise ValueError("quadratic moves need s >= 3")
    moves: list[CKMove] = []
    for _ in range(length):
        if rng.random() < perm_rate:
            images = list(range(1, s + 1))
            rng.shuffle(images)
            moves.append(Permutation(tuple(images)))
        else:
            moves.append(Quadratic(*rng.sample(range(1, s + 1), 3)))
    return CKWord(tuple(moves))


def three_largest(m: Sequence) -> tuple[int, int, int]:
    """1-based indices of the three largest entries, lower index wins ties."""
    order = sorted(range(len(m)), key=lambda t: (-m[t], t))
    return order[0] + 1, order[1] + 1, order[2] + 1


def is_cremona_reduced(L: ClassVector) -> bool:
    if L.s < 3:
        raise ValueError("reducedness needs s >= 3")
    top = sorted(L.m, reverse=True)[:3]
    return L.d >= sum(top)


class Status(str, enum.Enum):
    REDUCED = "Reduced"
    NEGATIVE_MULTIPLICITY = "NegativeMultiplicity"
    NEGATIVE_DEGREE = "NegativeDegree"


@dataclass(frozen=True)
class ReductionResult:
    initial: ClassVector
    final: ClassVector
    word: CKWord
    status: Status
    steps: int = field(default=0)


def cremona_reduce(L: ClassVector) -> ReductionResult:
    """Lower the degree by quadratic moves at the three largest multiplicities.

    Halting checks run at the top of each iteration, in this order: a negative
    multiplicity, a negative degree, reducedness.
    """
    if not L.is_integral():
        raise ValueError("cremona_reduce needs an integral class; scale it first")
    if L.s < 3:
        raise ValueError("cremona_reduce needs s >= 3")
    c = [int(x) for x in L.coords]
    cap = max(c[0], 0) + 2
    moves: list[CKMove] = []
    while True:
        if any(x < 0 for x in c[1:]):
            status = Status.NEGATIVE_MULTIPLICITY
            break
        if c[0] < 0:
            status = Status.NEGATIVE_DEGREE
            break
        i, j, k = three_largest(c[1:])
        if c[0] >= c[i] + c[j] + c[k]:
            status = Status.REDUCED
            break
        if len(moves) >= cap:
            raise RuntimeError(f"reduction of {L} exceeded its iteration cap {cap}")
        moves.append(Quadratic(i, j, k))
        c = _quadratic_coords(c, i, j, k)
    return ReductionResult(L, ClassVector.from_coords(c), CKWord(tuple(moves)), status, len(moves))


# JSON

def word_to_json(w: CKWord) -> list[dict]:
    out = []
    for mv in w.moves:
        if isinstance(mv, Quadratic):
            out.append({"quad": [mv.i, mv.j, mv.k]})
        else:
            out.append({"perm": list(mv.images)})
    return out


def word_from_json(obj: list) -> CKWord:
    moves: list[CKMove] = []
    for item in obj:
        if "quad" in item:
            moves.append(Quadratic(*(int(x) for x in item["quad"])))
        elif "perm" in item:
            moves.append(Permutation(tuple(item["perm"])))
        else:
            raise ValueError(f"unknown move {item!r}")
    return CKWord(tuple(moves))


def reduction_to_json(res: ReductionResult) -> dict:
    return {
        "kind": "reduction",
        "input": class_to_json(res.initial),
        "final": class_to_json(res.final),
        "word": word_to_json(res.word),
        "status": res.status.value,
        "steps": res.steps,
    }


def reduction_from_json(obj: dict) -> ReductionResult:
    return ReductionResult(
        class_from_json(obj["input"]),
        class_from_json(obj["final"]),
        word_from_json(obj["word"]),
        Status(obj["status"]),
        int(obj["steps"]),
    )


def verify_reduction(res: ReductionResult) -> None:
    """Replay a reduction record; raises ValueError on any mismatch."""
    if apply_word(res.word, res.initial) != res.final:
        raise ValueError("word does not map the input to the recorded final class")
    if res.steps != len(res.word):
        raise ValueError("step count does not match the word length")
    f = res.final
    if res.status is Status.REDUCED and not (min(f.m) >= 0 and f.d >= 0 and is_cremona_reduced(f)):
        raise ValueError("final class is not Cremona reduced")
    if res.status is Status.NEGATIVE_MULTIPLICITY and min(f.m) >= 0:
        raise ValueError("no negative multiplicity in the final class")
    if res.status is Status.NEGATIVE_DEGREE and f.d >= 0:
        raise ValueError("final degree is not negative")
