"""Free-group words, surface and free presentations, automorphisms, mod-n homology.

Letters are nonzero integers: ``+j`` is generator ``j`` (1-based) and ``-j`` its
inverse. Surface generators are ordered ``a1, b1, a2, b2, ...`` so ``a_i`` is
index ``2i-1`` and ``b_i`` is index ``2i``. Free generators are ``x1, ..., xr``.

Text syntax is whitespace-separated tokens, lowercase for generators and
uppercase for inverses (``"a1 b1 A1 B1"``). The identity is ``"1"`` or ``""``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

_TOKEN = re.compile(r"^([abxABX])(\d+)$")


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class Presentation:
    """A closed surface group (one relator) or a free group (no relators)."""

    kind: str
    size: int  # genus for surface kind, rank for free kind

    def __post_init__(self):
        if self.kind == "surface":
            if self.size < 2:
                raise WordError(f"surface genus must be >= 2, got {self.size}")
        elif self.kind == "free":
            if self.size < 1:
                raise WordError(f"free rank must be >= 1, got {self.size}")
        else:
            raise WordError(f"unknown presentation kind {self.kind!r}")

    @classmethod
    def surface(cls, genus: int) -> "Presentation":
        return cls("surface", genus)

    @classmethod
    def free(cls, rank: int) -> "Presentation":
        return cls("free", rank)

    @property
    def is_surface(self) -> bool:
        return self.kind == "surface"

    @property
    def genus(self) -> int:
        if not self.is_surface:
            raise WordError("free presentation has no genus")
        return self.size

    @property
    def rank(self) -> int:
        """Number of free generators (2g for a surface group)."""
        return 2 * self.size if self.is_surface else self.size

    def generator_names(self) -> list[str]:
        if self.is_surface:
            return [f"{c}{i}" for i in range(1, self.size + 1) for c in "ab"]
        return [f"x{i}" for i in range(1, self.size + 1)]

    def generator(self, j: int) -> "Word":
        return Word((j,))

    def generators(self) -> list["Word"]:
        return [Word((j,)) for j in range(1, self.rank + 1)]

    @property
    def relator(self) -> "Word | None":
        return surface_relator(self.size) if self.is_surface else None

    def to_dict(self) -> dict:
        if self.is_surface:
            return {"kind": "surface", "genus": self.size}
        return {"kind": "free", "rank": self.size}

    @classmethod
    def from_dict(cls, d: dict) -> "Presentation":
        kind = d["kind"]
        if kind == "surface":
            return cls.surface(int(d["genus"]))
        if kind == "free":
            return cls.free(int(d["rank"]))
        raise WordError(f"unknown presentation kind {kind!r}")


def _token(letter: int, surface: bool) -> str:
    j = abs(letter)
    if surface:
        name = f"{'ab'[(j - 1) % 2]}{(j + 1) // 2}"
    else:
        name = f"x{j}"
    return name if letter > 0 else name.upper()


@dataclass(frozen=True)
class Word:
    """A freely reduced word. Construct through :func:`free_reduce` or :func:`parse_word`."""

    letters: tuple[int, ...] = ()

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return free_reduce(self.letters + other.letters)

    def __pow__(self, k: int) -> "Word":
        if k < 0:
            return self.inverse() ** (-k)
        return free_reduce(self.letters * k)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    def is_identity(self) -> bool:
        return not self.letters

    def format(self, presentation: Presentation | None = None) -> str:
        if not self.letters:
            return "1"
        surface = presentation is None or presentation.is_surface
        return " ".join(_token(x, surface) for x in self.letters)

    def __str__(self):
        return self.format()


def free_reduce(letters: Iterable[int], presentation: Presentation | None = None) -> Word:
    """Cancel adjacent inverse pairs with a stack; validates indices if a presentation is given."""
    stack: list[int] = []
    bound = presentation.rank if presentation is not None else None
    for x in letters:
        x = int(x)
        if x == 0 or (bound is not None and abs(x) > bound):
            raise WordError(f"generator index {x} out of range")
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return Word(tuple(stack))


def parse_word(text: str, presentation: Presentation) -> Word:
    tokens = text.split()
    if tokens == ["1"]:
        return Word()
    letters = []
    for tok in tokens:
        m = _TOKEN.match(tok)
        if m is None:
            raise WordError(f"bad token {tok!r} in {text!r}")
        c, i = m.group(1), int(m.group(2))
        lower = c.lower()
        if presentation.is_surface:
            if lower == "x" or not 1 <= i <= presentation.size:
                raise WordError(f"token {tok!r} not in {presentation.generator_names()}")
            j = 2 * i - 1 if lower == "a" else 2 * i
        else:
            if lower != "x" or not 1 <= i <= presentation.size:
                raise WordError(f"token {tok!r} not in {presentation.generator_names()}")
            j = i
        letters.append(j if c.islower() else -j)
    return free_reduce(letters, presentation)


def commutator(v: Word, w: Word) -> Word:
    """[v, w] = v w v^-1 w^-1."""
    return v * w * v.inverse() * w.inverse()


def surface_relator(genus: int) -> Word:
    if genus < 2:
        raise WordError(f"surface genus must be >= 2, got {genus}")
    letters = []
    for i in range(1, genus + 1):
        a, b = 2 * i - 1, 2 * i
        letters += [a, b, -a, -b]
    return Word(tuple(letters))


def cyclic_reduce(w: Word) -> Word:
    letters = w.letters
    lo, hi = 0, len(letters)
    while hi - lo >= 2 and letters[lo] == -letters[hi - 1]:
        lo += 1
        hi -= 1
    return Word(letters[lo:hi])


def is_cyclic_rotation(v: Word, w: Word) -> bool:
    if len(v) != len(w):
        return False
    if not v.letters:
        return True
    doubled = w.letters + w.letters
    k = len(v)
    return any(doubled[i:i + k] == v.letters for i in range(k))


# ---------------------------------------------------------------------------
# Homology mod n


@dataclass(frozen=True)
class HomologyClass:
    coords: tuple[int, ...]
    modulus: int

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) % self.modulus for c in self.coords))

    def __add__(self, other: "HomologyClass") -> "HomologyClass":
        _check_modulus(self.modulus, other.modulus)
        return HomologyClass(tuple(a + b for a, b in zip(self.coords, other.coords)), self.modulus)

    def __neg__(self) -> "HomologyClass":
        return HomologyClass(tuple(-a for a in self.coords), self.modulus)

    def __sub__(self, other: "HomologyClass") -> "HomologyClass":
        return self + (-other)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=np.int64)


def _check_modulus(m1: int, m2: int):
    if m1 != m2:
        raise WordError(f"modulus mismatch: {m1} vs {m2}")


def abelianize(w: Word, rank: int) -> np.ndarray:
    """Signed letter counts per generator, as an integer vector."""
    v = np.zeros(rank, dtype=np.int64)
    for x in w.letters:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def total_homology_class(loops: Sequence[Word], n: int, rank: int) -> HomologyClass:
    if n < 2:
        raise WordError(f"center order must be >= 2, got {n}")
    total = np.zeros(rank, dtype=np.int64)
    for w in loops:
        total += abelianize(w, rank)
    return HomologyClass(tuple(total.tolist()), n)


def pair_character(u, c: HomologyClass) -> int:
    """Natural pairing of a center character (coords over Z/n) with a homology class."""
    modulus = getattr(u, "n", c.modulus)
    _check_modulus(modulus, c.modulus)
    coords = tuple(getattr(u, "coords", u))
    if len(coords) != len(c.coords):
        raise WordError("rank mismatch between character and homology class")
    return sum(a * b for a, b in zip(coords, c.coords)) % c.modulus


# ---------------------------------------------------------------------------
# Automorphisms


@dataclass(frozen=True)
class Automorphism:
    """Images of the generators; ``inverse_images`` is None when no inverse is known."""

    images: tuple[Word, ...]
    label: str = ""
    inverse_images: tuple[Word, ...] | None = field(default=None)

    @property
    def rank(self) -> int:
        return len(self.images)

    def __call__(self, w: Word) -> Word:
        return apply_automorphism(self, w)

    def inverse(self) -> "Automorphism":
        if self.inverse_images is None:
            raise WordError(f"automorphism {self.label!r} has no known inverse")
        label = self.label[:-3] if self.label.endswith("^-1") else self.label + "^-1"
        return Automorphism(self.inverse_images, label, self.images)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self after other: x -> self(other(x))."""
        images = tuple(apply_automorphism(self, w) for w in other.images)
        inv = None
        if self.inverse_images is not None and other.inverse_images is not None:
            inv = tuple(apply_automorphism(other.inverse(), w) for w in self.inverse_images)
        return Automorphism(images, f"{self.label}*{other.label}", inv)

    def to_dict(self, presentation: Presentation) -> dict:
        names = presentation.generator_names()
        d = {"label": self.label,
             "images": {names[j]: w.format(presentation) for j, w in enumerate(self.images)}}
        if self.inverse_images is not None:
            d["inverse"] = {names[j]: w.format(presentation)
                            for j, w in enumerate(self.inverse_images)}
        return d

    @classmethod
    def from_dict(cls, d: dict, presentation: Presentation) -> "Automorphism":
        names = presentation.generator_names()

        def images(m):
            unknown = set(m) - set(names)
            if unknown:
                raise WordError(f"unknown generators {sorted(unknown)}")
            return tuple(parse_word(m[name], presentation) if name in m else Word((j + 1,))
                         for j, name in enumerate(names))

        inv = images(d["inverse"]) if d.get("inverse") is not None else None
        return cls(images(d["images"]), d.get("label", ""), inv)


def identity_automorphism(rank: int) -> Automorphism:
    ids = tuple(Word((j,)) for j in range(1, rank + 1))
    return Automorphism(ids, "id", ids)


def apply_automorphism(phi: Automorphism, w: Word) -> Word:
    letters: list[int] = []
    for x in w.letters:
        image = phi.images[abs(x) - 1]
        letters.extend(image.letters if x > 0 else image.inverse().letters)
    return free_reduce(letters)


def _elementary(rank: int, changes: dict[int, Sequence[int]], label: str,
                inverse_changes: dict[int, Sequence[int]]) -> Automorphism:
    def build(ch):
        return tuple(free_reduce(ch[j]) if j in ch else Word((j,)) for j in range(1, rank + 1))
    return Automorphism(build(changes), label, build(inverse_changes))


def mcg_generators(genus: int) -> list[Automorphism]:
    """Handle twists T_{a_i}: b_i -> b_i a_i and T_{b_i}: a_i -> a_i b_i, with inverses.

    Both fix the relator letter for letter.
    """
    if genus < 2:
        raise WordError(f"surface genus must be >= 2, got {genus}")
    rank = 2 * genus
    out = []
    for i in range(1, genus + 1):
        a, b = 2 * i - 1, 2 * i
        out.append(_elementary(rank, {b: (b, a)}, f"twist-a{i}", {b: (b, -a)}))
        out.append(_elementary(rank, {a: (a, b)}, f"twist-b{i}", {a: (a, -b)}))
    return out


def nielsen_generators(rank: int) -> list[Automorphism]:
    """Inversions, ordered shears x_i -> x_i x_j, and adjacent transpositions."""
    if rank < 2:
        raise WordError(f"free rank must be >= 2, got {rank}")
    out = []
    for i in range(1, rank + 1):
        out.append(_elementary(rank, {i: (-i,)}, f"invert-{i}", {i: (-i,)}))
    for i in range(1, rank + 1):
        for j in range(1, rank + 1):
            if i != j:
                out.append(_elementary(rank, {i: (i, j)}, f"nielsen-{i}{j}", {i: (i, -j)}))
    for i in range(1, rank):
        swap = {i: (i + 1,), i + 1: (i,)}
        out.append(_elementary(rank, swap, f"swap-{i}{i + 1}", swap))
    return out


def shipped_automorphisms(presentation: Presentation) -> list[Automorphism]:
    if presentation.is_surface:
        return mcg_generators(presentation.genus)
    return nielsen_generators(presentation.rank)


@dataclass(frozen=True)
class AutomorphismReport:
    relator_ok: bool
    invertible_ok: bool

    @property
    def ok(self) -> bool:
        return self.relator_ok and self.invertible_ok


def verify_automorphism(phi: Automorphism, presentation: Presentation) -> AutomorphismReport:
    """Exact check on reduced words; the relator check is vacuous for free groups."""
    if phi.rank != presentation.rank:
        return AutomorphismReport(False, False)
    invertible = False
    if phi.inverse_images is not None:
        gens = presentation.generators()
        inv = phi.inverse()
        invertible = all(apply_automorphism(phi, apply_automorphism(inv, x)) == x
                         and apply_automorphism(inv, apply_automorphism(phi, x)) == x
                         for x in gens)
    relator_ok = True
    if presentation.is_surface:
        R = presentation.relator
        image = cyclic_reduce(apply_automorphism(phi, R))
        relator_ok = is_cyclic_rotation(image, R) or is_cyclic_rotation(image, R.inverse())
    return AutomorphismReport(relator_ok, invertible)


def abelianization_matrix(phi: Automorphism) -> np.ndarray:
    """Integer matrix whose column j is the abelianized image of generator j."""
    return np.column_stack([abelianize(w, phi.rank) for w in phi.images])
