"""Fixed-width bit-vectors with SMT-LIB semantics.

Values are stored packed into a Python int (bit ``i`` of the int is bit ``i``
of the vector, index 0 least significant).  The little-endian boolean view is
available through :attr:`BitVec.bits`.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class WidthMismatch(ValueError):
    """Raised when a binary operation receives operands of different widths."""


def _mask(width: int) -> int:
    return (1 << width) - 1


class BitVec:
    __slots__ = ("width", "value")

    width: int
    value: int

    def __init__(self, value: int, width: int):
        if width < 1:
            raise ValueError(f"bit-vector width must be positive, got {width}")
        object.__setattr__(self, "width", width)
        object.__setattr__(self, "value", value & _mask(width))

    def __setattr__(self, name, value):
        raise AttributeError("BitVec is immutable")

    def __reduce__(self):
        return (BitVec, (self.value, self.width))

    @classmethod
    def from_bits(cls, bits: Sequence[bool]) -> BitVec:
        """Build from a little-endian sequence (``bits[0]`` is the LSB)."""
        value = 0
        for i, b in enumerate(bits):
            if b:
                value |= 1 << i
        return cls(value, len(bits))

    @classmethod
    def parse(cls, text: str) -> BitVec:
        """Parse ``#b<msb..lsb>`` or ``#x<hex>``."""
        if text.startswith("#b") and len(text) > 2 and set(text[2:]) <= {"0", "1"}:
            return cls(int(text[2:], 2), len(text) - 2)
        if text.startswith("#x") and len(text) > 2:
            try:
                return cls(int(text[2:], 16), 4 * (len(text) - 2))
            except ValueError:
                pass
        raise ValueError(f"not a bit-vector literal: {text!r}")

    @property
    def bits(self) -> tuple[bool, ...]:
        v = self.value
        return tuple(bool((v >> i) & 1) for i in range(self.width))

    @property
    def msb(self) -> bool:
        return bool(self.value >> (self.width - 1))

    def __len__(self) -> int:
        return self.width

    def __eq__(self, other):
        if not isinstance(other, BitVec):
            return NotImplemented
        return self.width == other.width and self.value == other.value

    def __hash__(self):
        return hash((self.width, self.value))

    def __repr__(self):
        return f"BitVec({self.to_smtlib()})"

    def __str__(self):
        return self.to_smtlib()

    def to_smtlib(self) -> str:
        return "#b" + format(self.value, f"0{self.width}b")

    def to_hex(self) -> str:
        if self.width % 4:
            raise ValueError("hex rendering needs a width divisible by 4")
        return "#x" + format(self.value, f"0{self.width // 4}x")


def from_unsigned(value: int, width: int) -> BitVec:
    if value < 0:
        raise ValueError("from_unsigned takes a non-negative integer")
    return BitVec(value, width)


def from_signed(value: int, width: int) -> BitVec:
    return BitVec(value, width)


def to_unsigned(a: BitVec) -> int:
    return a.value


def to_signed(a: BitVec) -> int:
    if a.msb:
        return a.value - (1 << a.width)
    return a.value


def zeros(width: int) -> BitVec:
    return BitVec(0, width)


def ones(width: int) -> BitVec:
    return BitVec(_mask(width), width)


def _same_width(a: BitVec, b: BitVec) -> int:
    if a.width != b.width:
        raise WidthMismatch(f"operand widths differ: {a.width} vs {b.width}")
    return a.width


# Bitwise and arithmetic operators.


def bv_not(a: BitVec) -> BitVec:
    return BitVec(~a.value, a.width)


def bv_and(a: BitVec, b: BitVec) -> BitVec:
    return BitVec(a.value & b.value, _same_width(a, b))


def bv_or(a: BitVec, b: BitVec) -> BitVec:
    return BitVec(a.value | b.value, _same_width(a, b))


def bv_add(a: BitVec, b: BitVec) -> BitVec:
    return BitVec(a.value + b.value, _same_width(a, b))


def bv_sub(a: BitVec, b: BitVec) -> BitVec:
    return BitVec(a.value - b.value, _same_width(a, b))


def bv_neg(a: BitVec) -> BitVec:
    return bv_sub(zeros(a.width), a)


def bv_mul(a: BitVec, b: BitVec) -> BitVec:
    return BitVec(a.value * b.value, _same_width(a, b))


# Shifts.  Each shift has two definitions: an iterative one that applies a
# one-bit shift ``to_unsigned(b)`` times, and a splice one that glues a fill
# block onto a slice of the operand.  The packed-int expressions below are the
# list operations spelled on the integer encoding:
#   firstn k a     ->  a & mask(k)
#   a ++ block     ->  a | block << len(a)
#   fill :: ...    ->  shift left by one and or-in the fill at bit 0


def _shl_one_bit(v: int, width: int) -> int:
    # false :: removelast a
    return (v & _mask(width - 1)) << 1


def _shr_one_bit(v: int, width: int) -> int:
    # tl a ++ [false]
    return v >> 1


def _ashr_one_bit(v: int, width: int) -> int:
    # tl a ++ [last a]
    top = v >> (width - 1)
    return (v >> 1) | (top << (width - 1))


def _iterate(step, v: int, width: int, n: int) -> int:
    for _ in range(n):
        nxt = step(v, width)
        if nxt == v:
            # Fixed point of the one-bit shift: every further iteration is the
            # identity, so the remaining count cannot change the result.
            break
        v = nxt
    return v


def bv_shl_iter(a: BitVec, b: BitVec) -> BitVec:
    w = _same_width(a, b)
    return BitVec(_iterate(_shl_one_bit, a.value, w, b.value), w)


def bv_shr_iter(a: BitVec, b: BitVec) -> BitVec:
    w = _same_width(a, b)
    return BitVec(_iterate(_shr_one_bit, a.value, w, b.value), w)


def bv_ashr_iter(a: BitVec, b: BitVec) -> BitVec:
    w = _same_width(a, b)
    return BitVec(_iterate(_ashr_one_bit, a.value, w, b.value), w)


def bv_shl_splice(a: BitVec, b: BitVec) -> BitVec:
    w = _same_width(a, b)
    k = b.value
    if k < w:
        # zeros(k) ++ firstn (w - k) a
        return BitVec((a.value & _mask(w - k)) << k, w)
    return zeros(w)


def bv_shr_splice(a: BitVec, b: BitVec) -> BitVec:
    w = _same_width(a, b)
    k = b.value
    if k < w:
        # skipn k a ++ zeros(k)
        return BitVec(a.value >> k, w)
    return zeros(w)


def bv_ashr_splice(a: BitVec, b: BitVec) -> BitVec:
    w = _same_width(a, b)
    k = b.value
    fill = _mask(w) if a.msb else 0
    if k < w:
        # skipn k a ++ repeat k (msb a)
        return BitVec((a.value >> k) | ((fill & _mask(k)) << (w - k)), w)
    return BitVec(fill, w)


bv_shl = bv_shl_splice
bv_lshr = bv_shr_splice
bv_ashr = bv_ashr_splice


# Comparisons.


def _ule_list_big_endian(x: Sequence[bool], y: Sequence[bool]) -> bool:
    # Right fold of the recursive definition over the MSB-first lists; the
    # empty-list base case is reached at the least significant end.
    acc = True
    for xi, yi in zip(reversed(x), reversed(y)):
        acc = (xi == yi and acc) or (not xi and yi)
    return acc


def ule_lex(a: BitVec, b: BitVec) -> bool:
    """Unsigned ``a <= b`` by lexicographic comparison from the MSB down."""
    _same_width(a, b)
    return _ule_list_big_endian(a.bits[::-1], b.bits[::-1])


def bv_eq(a: BitVec, b: BitVec) -> bool:
    _same_width(a, b)
    return a.value == b.value


def bv_ult(a: BitVec, b: BitVec) -> bool:
    _same_width(a, b)
    return a.value < b.value


def bv_ule(a: BitVec, b: BitVec) -> bool:
    _same_width(a, b)
    return a.value <= b.value


def bv_ugt(a: BitVec, b: BitVec) -> bool:
    return bv_ult(b, a)


def bv_uge(a: BitVec, b: BitVec) -> bool:
    return bv_ule(b, a)


def bv_slt(a: BitVec, b: BitVec) -> bool:
    _same_width(a, b)
    return to_signed(a) < to_signed(b)


def bv_sle(a: BitVec, b: BitVec) -> bool:
    _same_width(a, b)
    return to_signed(a) <= to_signed(b)


def bv_sgt(a: BitVec, b: BitVec) -> bool:
    return bv_slt(b, a)


def bv_sge(a: BitVec, b: BitVec) -> bool:
    return bv_sle(b, a)


def all_vectors(width: int) -> Iterable[BitVec]:
    """Every vector of ``width`` bits, ascending by unsigned value."""
    for v in range(1 << width):
        yield BitVec(v, width)
