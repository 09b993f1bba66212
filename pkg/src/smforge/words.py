"""Letters, free-group words, hardware and admissible words.

The word language here is the one a symmetric rewriting machine works on:
reduced group words that alternate state letters (one per "slot" of the
machine's standard base) with tape words (one alphabet per junction between
neighboring slots).  The standard base may contain inverted slots (mirror
halves) and may be circular, so slot/junction bookkeeping is explicit.

A word  q_1 u_1 q_2 ... u_s q_{s+1}  is admissible when consecutive state
letters sit on compatible slot interfaces and every tape run lies in the
alphabet of the junction it crosses.  The base of an admissible word is its
sequence of (slot, sign) entries; bases need not be reduced words.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional, Sequence


class Letter(NamedTuple):
    kind: str           # "q" state, "y" tape, "t" theta (group words only)
    part: int           # q: slot index / y: junction index / t: base position
    sym: str
    sign: int = 1
    sup: Optional[int] = None

    def inv(self) -> "Letter":
        return self._replace(sign=-self.sign)

    def bare(self) -> "Letter":
        """Same letter with superscript removed."""
        return self._replace(sup=None)

    def __repr__(self) -> str:
        return format_letter(self)


Word = tuple  # tuple[Letter, ...]

EMPTY: Word = ()


def format_letter(x: Letter) -> str:
    s = x.sym
    if x.sup is not None:
        s += "^(%d)" % x.sup
    if x.sign < 0:
        s += "^-1"
    return s


def format_word(w: Sequence[Letter]) -> str:
    return " ".join(format_letter(x) for x in w) if w else "1"


def winv(w: Sequence[Letter]) -> Word:
    return tuple(x.inv() for x in reversed(w))


def free_reduce(w: Sequence[Letter]) -> Word:
    """The unique reduced word freely equal to w (stack cancellation)."""
    out: list[Letter] = []
    for x in w:
        if out and out[-1].sign == -x.sign and out[-1][:3] == x[:3] \
                and out[-1].sup == x.sup:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def is_reduced(w: Sequence[Letter]) -> bool:
    return all(not (w[i].sign == -w[i + 1].sign and w[i][:3] == w[i + 1][:3]
                    and w[i].sup == w[i + 1].sup)
               for i in range(len(w) - 1))


def y_length(w: Sequence[Letter]) -> int:
    """Number of tape letters in the literal word (no implicit reduction)."""
    return sum(1 for x in w if x.kind == "y")


class NonInjectiveMap(ValueError):
    pass


def copy_word(w: Sequence[Letter], letter_map: dict) -> Word:
    """Letter-by-letter image of w under a map on positive letters.

    The map must be injective on the letters that actually occur; copies of
    identical words are then identical and the copy can be undone.
    """
    preimage: dict[Letter, Letter] = {}
    out = []
    for x in w:
        pos = x if x.sign > 0 else x.inv()
        img = letter_map[pos]
        if preimage.setdefault(img, pos) != pos:
            raise NonInjectiveMap("%s and %s share an image"
                                  % (preimage[img], pos))
        out.append(img if x.sign > 0 else img.inv())
    return tuple(out)


# ---------------------------------------------------------------------------
# Hardware: slots, junctions, and the admissible-word language.


class Slot(NamedTuple):
    name: str
    sign: int                # sign of this slot in the standard base
    letters: tuple           # tuple[str, ...]


class NotAdmissible(ValueError):
    def __init__(self, position: int, reason: str):
        self.position = position
        self.reason = reason
        super().__init__("position %d: %s" % (position, reason))


class Sector(NamedTuple):
    left: int                # index (into the word) of the left state letter
    junction: int
    content: Word
    right: int


@dataclass(frozen=True)
class AdmissibleWord:
    word: Word
    sectors: tuple            # tuple[Sector, ...]
    base: tuple               # tuple[(slot index, sign), ...]

    def __len__(self) -> int:
        return len(self.word)

    def __repr__(self) -> str:
        return "<adm %s>" % format_word(self.word)


@dataclass(frozen=True)
class Hardware:
    """Slots (state-letter parts, with base signs) and junction alphabets.

    junctions[j] is the tape alphabet between slot j-1 and slot j; for a
    circular machine junctions[0] sits between the last slot and slot 0,
    otherwise index 0 is unused and must be empty.
    """
    slots: tuple              # tuple[Slot, ...]
    junctions: tuple          # tuple[tuple[str, ...], ...], len == len(slots)
    circular: bool = False

    def __post_init__(self):
        assert len(self.junctions) == len(self.slots)
        if not self.circular:
            assert not self.junctions[0], "junction 0 needs a circular machine"
        qmap, ymap = {}, {}
        for i, slot in enumerate(self.slots):
            for s in slot.letters:
                assert s not in qmap and s not in ymap, "duplicate symbol " + s
                qmap[s] = i
        for j, alph in enumerate(self.junctions):
            for s in alph:
                assert s not in qmap and s not in ymap, "duplicate symbol " + s
                ymap[s] = j
        object.__setattr__(self, "_qmap", qmap)
        object.__setattr__(self, "_ymap", ymap)

    # -- letter constructors ------------------------------------------------

    def q(self, sym: str, sign: int = 1, sup: Optional[int] = None) -> Letter:
        return Letter("q", self._qmap[sym], sym, sign, sup)

    def y(self, sym: str, sign: int = 1, sup: Optional[int] = None) -> Letter:
        return Letter("y", self._ymap[sym], sym, sign, sup)

    def letter(self, sym: str, sign: int = 1, sup: Optional[int] = None) -> Letter:
        if sym in self._qmap:
            return self.q(sym, sign, sup)
        if sym in self._ymap:
            return self.y(sym, sign, sup)
        raise KeyError(sym)

    def word(self, text: str) -> Word:
        """Parse whitespace-separated tokens: name, name^-1, name^(k), name^(k)^-1."""
        return tuple(self.letter(s, sign, sup)
                     for s, sup, sign in tokenize(text))

    def slot_index(self, name: str) -> int:
        for i, s in enumerate(self.slots):
            if s.name == name:
                return i
        raise KeyError(name)

    def base_name(self, entry) -> str:
        i, sign = entry
        return self.slots[i].name + ("" if sign > 0 else "^-1")

    # -- interface calculus --------------------------------------------------

    def _right_of(self, i: int) -> Optional[int]:
        if i + 1 < len(self.slots):
            return i + 1
        return 0 if self.circular else None

    def _left_of(self, i: int) -> Optional[int]:
        if i > 0:
            return i
        return 0 if self.circular else None

    def interfaces(self, x: Letter):
        """(left junction, right junction) of a state-letter occurrence."""
        i = x.part
        aligned = (x.sign == self.slots[i].sign)
        lo, hi = self._left_of(i), self._right_of(i)
        return (lo, hi) if aligned else (hi, lo)

    # -- parsing -------------------------------------------------------------

    def parse_admissible(self, w: Sequence[Letter]) -> AdmissibleWord:
        w = tuple(w)
        if not is_reduced(w):
            raise NotAdmissible(0, "word is not reduced")
        if not w:
            raise NotAdmissible(0, "empty word has no state letter")
        if w[0].kind != "q":
            raise NotAdmissible(0, "leading tape letter")
        if w[-1].kind != "q":
            raise NotAdmissible(len(w) - 1, "trailing tape letter")
        qpos = [i for i, x in enumerate(w) if x.kind == "q"]
        for i in qpos:
            if w[i].sym not in self._qmap or self._qmap[w[i].sym] != w[i].part:
                raise NotAdmissible(i, "unknown state letter %s" % w[i].sym)
        sectors = []
        base = []
        for n, i in enumerate(qpos):
            x = w[i]
            base.append((x.part, x.sign))
            if n + 1 == len(qpos):
                break
            k = qpos[n + 1]
            x2 = w[k]
            junction = self.interfaces(x)[1]
            if junction is None or junction != self.interfaces(x2)[0]:
                raise NotAdmissible(k, "state letter %s cannot follow %s"
                                    % (format_letter(x2), format_letter(x)))
            aligned = x.sign == self.slots[x.part].sign
            aligned2 = x2.sign == self.slots[x2.part].sign
            if aligned != aligned2 and x2.sym != x.sym:
                # a turnaround must use the exact inverse letter
                raise NotAdmissible(k, "turnaround neighbor of %s must be its "
                                       "inverse" % format_letter(x))
            content = w[i + 1:k]
            for m, a in enumerate(content):
                if a.sym not in self._ymap:
                    raise NotAdmissible(i + 1 + m, "unknown tape letter %s" % a.sym)
                if a.part != junction or self._ymap[a.sym] != junction:
                    raise NotAdmissible(i + 1 + m,
                                        "tape letter %s outside its junction"
                                        % format_letter(a))
            sectors.append(Sector(i, junction, content, k))
        return AdmissibleWord(w, tuple(sectors), tuple(base))

    def is_admissible(self, w: Sequence[Letter]) -> bool:
        try:
            self.parse_admissible(w)
            return True
        except NotAdmissible:
            return False


def base_of(adm: AdmissibleWord) -> tuple:
    return adm.base


# ---------------------------------------------------------------------------
# Base-shape predicates.  A base here is any sequence of (symbol, sign)
# pairs; symbols may be slot indices or part names.


def is_faulty_base(base: Sequence) -> bool:
    """Start and end with the same signed letter, no other repeats, unreduced.

    Occurrences are counted with their signs, so a cancelling x x^-1 pair in
    the middle counts each signed form once.
    """
    b = [tuple(e) for e in base]
    if len(b) < 2 or b[0] != b[-1]:
        return False
    counts: dict = {}
    for e in b:
        counts[e] = counts.get(e, 0) + 1
    if counts[b[0]] != 2:
        return False
    if any(c > 1 for e, c in counts.items() if e != b[0]):
        return False
    return any(b[i][0] == b[i + 1][0] and b[i][1] == -b[i + 1][1]
               for i in range(len(b) - 1))


def _tight_shape(b: Sequence, L: int) -> bool:
    if len(b) < 2:
        return False
    x = b[-1][0]
    first = min(i for i, e in enumerate(b) if e[0] == x)
    if first == len(b) - 1:
        return False
    middle = sum(1 for e in b[first + 1:-1] if e[0] == x)
    return middle == L - 1


def is_tight_base(base: Sequence, L: int) -> bool:
    """u x v x with x absent from u and occurring L-1 times in v (unsigned
    counting), such that no proper prefix has the same shape."""
    b = [tuple(e) for e in base]
    if not _tight_shape(b, L):
        return False
    return not any(_tight_shape(b[:k], L) for k in range(2, len(b)))


# ---------------------------------------------------------------------------
# Token syntax shared by the CLI and the file formats.


def tokenize(text: str):
    """Yield (symbol, superscript, sign) for each token of a word string."""
    out = []
    for tok in text.split():
        sign = 1
        if tok.endswith("^-1"):
            sign = -1
            tok = tok[:-3]
        sup = None
        if tok.endswith(")") and "^(" in tok:
            tok, _, rest = tok.rpartition("^(")
            sup = int(rest[:-1])
        if not tok:
            raise ValueError("bad token in %r" % text)
        out.append((tok, sup, sign))
    return out


def parse_word(text: str, resolve: Callable[[str, Optional[int], int], Letter]) -> Word:
    return tuple(resolve(s, sup, sign) for s, sup, sign in tokenize(text))
