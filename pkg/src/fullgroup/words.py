"""Words in PSL(2,Z) = <u, v | u^2 = v^3 = 1> and mixed words in PSL(2,Z) * Z.

Words are read in application order: letter 0 acts first.  Reduced words
alternate between ``U`` and a single ``V``/``VINV`` letter (``v^2`` is stored
as ``VINV``), which makes the normal form unique.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union


class WordSyntaxError(ValueError):
    """Raised by :func:`parse_word`; ``offset`` is the byte offset of the fault."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class Letter(enum.IntEnum):
    U = 0
    V = 1
    VINV = 2

    def inverse(self) -> "Letter":
        if self is Letter.U:
            return Letter.U
        return Letter.VINV if self is Letter.V else Letter.V

    def render(self) -> str:
        return ("u", "v", "v^-1")[self]


class Bracket(enum.Enum):
    """Commutator convention.

    PAPER is ``[x, y] = x y x^-1 y^-1``; COMPAT is ``x^-1 y^-1 x y``, the
    bracket used by the original trace program.  Both are written in
    application order.
    """

    PAPER = "paper"
    COMPAT = "compat"


# multiplication table on the V-exponent (0, 1, 2) with v^3 = 1
_V_EXP = {Letter.V: 1, Letter.VINV: 2}
_V_LETTER = {1: Letter.V, 2: Letter.VINV}


def _reduce_letters(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for raw in letters:
        letter = Letter(raw)
        if not stack:
            stack.append(letter)
            continue
        top = stack[-1]
        if letter is Letter.U:
            if top is Letter.U:
                stack.pop()
            else:
                stack.append(letter)
        elif top is Letter.U:
            stack.append(letter)
        else:
            exp = (_V_EXP[top] + _V_EXP[letter]) % 3
            stack.pop()
            if exp:
                stack.append(_V_LETTER[exp])
    return tuple(stack)


@dataclass(frozen=True)
class Word:
    """An immutable sequence of letters; group operations return reduced words."""

    letters: tuple[Letter, ...] = ()

    @classmethod
    def of(cls, letters: Iterable[Letter | int]) -> "Word":
        """Build the reduced word of ``letters``."""
        return cls(_reduce_letters(letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def __pow__(self, n: int) -> "Word":
        return power(self, n)

    def __invert__(self) -> "Word":
        return invert(self)

    def is_reduced(self) -> bool:
        return _reduce_letters(self.letters) == self.letters

    def __str__(self) -> str:
        return " ".join(letter.render() for letter in self.letters)


IDENTITY = Word()
U = Word((Letter.U,))
V = Word((Letter.V,))


def reduce(w: Word) -> Word:
    return Word(_reduce_letters(w.letters))


def invert(w: Word) -> Word:
    return Word(_reduce_letters(letter.inverse() for letter in reversed(w.letters)))


def concat(x: Word, y: Word) -> Word:
    return Word(_reduce_letters(x.letters + y.letters))


def power(w: Word, n: int) -> Word:
    if n < 0:
        w, n = invert(w), -n
    result = IDENTITY
    base = reduce(w)
    # square-and-multiply keeps intermediate reductions short
    while n:
        if n & 1:
            result = concat(result, base)
        n >>= 1
        if n:
            base = concat(base, base)
    return result


def conjugate(w: Word, c: Word) -> Word:
    """Return ``c w c^-1`` as a letter sequence (``c`` is applied first)."""
    return Word(_reduce_letters(c.letters + w.letters + invert(c).letters))


def commutator(x: Word, y: Word, conv: Bracket = Bracket.PAPER) -> Word:
    xi, yi = invert(x), invert(y)
    if conv is Bracket.PAPER:
        seq = x.letters + y.letters + xi.letters + yi.letters
    else:
        seq = xi.letters + yi.letters + x.letters + y.letters
    return Word(_reduce_letters(seq))


def u_count(w: Word) -> int:
    """Number of ``u`` letters, written ``|w|_u``; bounds the head displacement."""
    return sum(1 for letter in w.letters if letter is Letter.U)


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<int>-?[0-9]+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<punct>[()\[\],^]))"
)

DEFAULT_MACROS_TEXT = {"a": "v u", "b": "v v u"}


class _Parser:
    def __init__(self, text: str, macros: Mapping[str, Word], conv: Bracket):
        self.data = text.encode("utf-8")
        self.text = text
        self.macros = macros
        self.conv = conv
        self.tokens = self._tokenize()
        self.i = 0

    def _tokenize(self):
        tokens = []
        pos = 0
        text = self.text
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if m is None:
                if text[pos:].strip() == "":
                    break
                start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
                raise WordSyntaxError(
                    f"unexpected character {text[start]!r}", self._byte(start)
                )
            kind = m.lastgroup
            tokens.append((kind, m.group(kind), self._byte(m.start(kind))))
            pos = m.end()
        tokens.append(("end", "", len(self.data)))
        return tokens

    def _byte(self, char_index: int) -> int:
        return len(self.text[:char_index].encode("utf-8"))

    def peek(self):
        return self.tokens[self.i]

    def take(self, value: str):
        kind, val, off = self.tokens[self.i]
        if val != value or kind == "end":
            shown = "end of input" if kind == "end" else repr(val)
            raise WordSyntaxError(f"expected {value!r}, found {shown}", off)
        self.i += 1

    def expr(self, stop: tuple[str, ...]) -> Word:
        letters: list[Letter] = []
        kind, val, off = self.peek()
        if kind == "end" or val in stop:
            raise WordSyntaxError("expected a term", off)
        while True:
            kind, val, off = self.peek()
            if kind == "end" or val in stop:
                return Word.of(letters)
            letters.extend(self.term().letters)

    def term(self) -> Word:
        base = self.atom()
        kind, val, off = self.peek()
        if val == "^" and kind == "punct":
            self.i += 1
            kind, val, off = self.peek()
            if kind != "int":
                raise WordSyntaxError("expected an integer exponent", off)
            self.i += 1
            return power(base, int(val))
        return base

    def atom(self) -> Word:
        kind, val, off = self.peek()
        if kind == "ident":
            self.i += 1
            if val == "u":
                return U
            if val == "v":
                return V
            if val not in self.macros:
                raise WordSyntaxError(f"unknown macro {val!r}", off)
            return self.macros[val]
        if val == "(" and kind == "punct":
            self.i += 1
            inner = self.expr(stop=(")",))
            self.take(")")
            return inner
        if val == "[" and kind == "punct":
            self.i += 1
            left = self.expr(stop=(",",))
            self.take(",")
            right = self.expr(stop=("]",))
            self.take("]")
            return commutator(left, right, self.conv)
        shown = "end of input" if kind == "end" else repr(val)
        raise WordSyntaxError(f"unexpected {shown}", off)


def default_macros() -> dict[str, Word]:
    """``a = v u`` and ``b = v^2 u`` in application order."""
    return {name: parse_word(text, {}) for name, text in DEFAULT_MACROS_TEXT.items()}


def parse_word(
    text: str,
    macros: Mapping[str, Word] | None = None,
    conv: Bracket = Bracket.PAPER,
) -> Word:
    """Parse ``text`` into a reduced word.

    Grammar::

        expr := term+
        term := atom ('^' int)?
        atom := 'u' | 'v' | ident | '(' expr ')' | '[' expr ',' expr ']'

    ``macros`` defaults to :func:`default_macros`.  Raises
    :class:`WordSyntaxError` carrying the byte offset of the problem.
    """
    if macros is None:
        macros = default_macros()
    parser = _Parser(text, macros, conv)
    word = parser.expr(stop=())
    kind, val, off = parser.peek()
    if kind != "end":
        raise WordSyntaxError(f"unexpected {val!r}", off)
    return word


def parse_macro_defs(defs: Sequence[str], conv: Bracket = Bracket.PAPER) -> dict[str, Word]:
    """Turn ``name=expr`` strings into a macro table layered on the defaults.

    Later definitions may refer to earlier ones.
    """
    macros = default_macros()
    for item in defs:
        name, sep, body = item.partition("=")
        name = name.strip()
        if not sep or not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name) or name in ("u", "v"):
            raise WordSyntaxError(f"bad macro definition {item!r}", 0)
        macros[name] = parse_word(body, macros, conv)
    return macros


# -- mixed words in Gamma * Z --------------------------------------------------


@dataclass(frozen=True)
class Var:
    """Power ``t^power`` of the free variable."""

    power: int


@dataclass(frozen=True)
class Const:
    word: Word


@dataclass(frozen=True)
class Slot:
    """A named constant (``g``) resolved at substitution time."""

    name: str
    power: int = 1


Factor = Union[Var, Const, Slot]


def _trivial(f: Factor) -> bool:
    return not f.word if isinstance(f, Const) else f.power == 0


def _merge(a: Factor, b: Factor) -> Factor | None:
    if isinstance(a, Var) and isinstance(b, Var):
        return Var(a.power + b.power)
    if isinstance(a, Slot) and isinstance(b, Slot) and a.name == b.name:
        return Slot(a.name, a.power + b.power)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(concat(a.word, b.word))
    return None


def _normalize(factors: Iterable[Factor]) -> tuple[Factor, ...]:
    out: list[Factor] = []
    for f in factors:
        if isinstance(f, Const):
            f = Const(reduce(f.word))
        if _trivial(f):
            continue
        while out:
            merged = _merge(out[-1], f)
            if merged is None:
                break
            out.pop()
            f = merged
            if _trivial(f):
                break
        if not _trivial(f):
            out.append(f)
    return tuple(out)


@dataclass(frozen=True)
class MixedWord:
    """A word in ``t`` with constants, e.g. ``[t^2, g]^3``.

    Factors are kept freely reduced: no adjacent variable powers, adjacent
    constants merged.
    """

    factors: tuple[Factor, ...] = ()

    @classmethod
    def of(cls, factors: Iterable[Factor]) -> "MixedWord":
        return cls(_normalize(factors))

    @classmethod
    def variable(cls, power: int = 1) -> "MixedWord":
        return cls.of([Var(power)])

    @classmethod
    def slot(cls, name: str) -> "MixedWord":
        return cls.of([Slot(name)])

    def __mul__(self, other: "MixedWord") -> "MixedWord":
        return MixedWord.of(self.factors + other.factors)

    def inverse(self) -> "MixedWord":
        inv: list[Factor] = []
        for f in reversed(self.factors):
            if isinstance(f, Var):
                inv.append(Var(-f.power))
            elif isinstance(f, Slot):
                inv.append(Slot(f.name, -f.power))
            else:
                inv.append(Const(invert(f.word)))
        return MixedWord.of(inv)

    def __pow__(self, n: int) -> "MixedWord":
        base = self if n >= 0 else self.inverse()
        return MixedWord.of(base.factors * abs(n))

    def commutator(self, other: "MixedWord", conv: Bracket = Bracket.PAPER) -> "MixedWord":
        if conv is Bracket.PAPER:
            return self * other * self.inverse() * other.inverse()
        return self.inverse() * other.inverse() * self * other

    def __str__(self) -> str:
        parts = []
        for f in self.factors:
            if isinstance(f, Var):
                parts.append("t" if f.power == 1 else f"t^{f.power}")
            elif isinstance(f, Slot):
                parts.append(f.name if f.power == 1 else f"{f.name}^{f.power}")
            else:
                parts.append(f"({f.word})")
        return " ".join(parts)


def nested_commutator_word(
    powers: Sequence[int], slot: str = "g", conv: Bracket = Bracket.PAPER
) -> MixedWord:
    """Build ``w_{i_0..i_m}(t)``: ``w_{i_0} = t^{i_0}`` and
    ``w_{..,i_m} = [w_{..}, g]^{i_m}``."""
    if not powers:
        raise ValueError("powers must be nonempty")
    if any(int(p) < 1 for p in powers):
        raise ValueError("powers must be positive integers")
    w = MixedWord.variable(powers[0])
    g = MixedWord.slot(slot)
    for i in powers[1:]:
        w = w.commutator(g, conv) ** i
    return w


def substitute(
    w: MixedWord, variable: Word, constants: Mapping[str, Word] | None = None
) -> Word:
    """Evaluate the word map at ``t = variable``."""
    constants = constants or {}
    letters: list[Letter] = []
    for f in w.factors:
        if isinstance(f, Var):
            letters.extend(power(variable, f.power).letters)
        elif isinstance(f, Slot):
            if f.name not in constants:
                raise KeyError(f"constant slot {f.name!r} is unassigned")
            letters.extend(power(constants[f.name], f.power).letters)
        else:
            letters.extend(f.word.letters)
    return Word.of(letters)
