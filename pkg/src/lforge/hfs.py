"""Hereditarily finite sets with hash-consing.

Every set is interned in a :class:`SetEngine`, so two extensionally equal sets
built through the same engine are the *same* Python object and ``is`` /
``==`` is O(1).  Elements are kept in a canonical order: by rank, then by the
lexicographic order of the (recursively canonical) element sequences.  This
order is internal to the engine; the constructible order lives in
:mod:`lforge.levels`.
"""
from __future__ import annotations

import threading
from typing import Iterable, Iterator


class HSet:
    """An interned hereditarily finite set.  Build through an engine."""

    __slots__ = ("elements", "rank", "key", "_hash", "_members", "_nat", "__weakref__")

    def __init__(self, elements: tuple[HSet, ...], rank: int, key: tuple, hash_: int):
        self.elements = elements
        self.rank = rank
        self.key = key
        self._hash = hash_
        self._members = frozenset(elements)
        self._nat: int | None | bool = False  # False = not computed yet

    def __hash__(self) -> int:
        return self._hash

    # identity equality is extensional equality thanks to interning
    def __eq__(self, other: object) -> bool:
        return self is other

    def __lt__(self, other: HSet) -> bool:
        return self.key < other.key

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[HSet]:
        return iter(self.elements)

    def __contains__(self, item: HSet) -> bool:
        return item in self._members

    def __bool__(self) -> bool:
        # an empty set is still a value; never use truthiness for emptiness
        return True

    @property
    def is_empty(self) -> bool:
        return not self.elements

    def as_natural(self) -> int | None:
        """Return n if this set is the von Neumann natural n, else None."""
        if self._nat is False:
            n = len(self.elements)
            # n = {0, ..., n-1}; elements are sorted by rank and rank(k) = k
            ok = all(e.as_natural() == i for i, e in enumerate(self.elements))
            self._nat = n if ok else None
        return self._nat  # type: ignore[return-value]

    def __repr__(self) -> str:
        return f"HSet({format_set(self)})"

    def __str__(self) -> str:
        return format_set(self)


class SetEngine:
    """Owner of one hash-consing table.

    Sets from different engines must not be mixed.  Interning is guarded by a
    lock so construction from several threads is safe; reading an HSet never
    touches the table.
    """

    def __init__(self) -> None:
        self._table: dict[tuple[HSet, ...], HSet] = {}
        self._lock = threading.Lock()
        self.empty = self._intern(())
        self._naturals: list[HSet] = [self.empty]

    def __len__(self) -> int:
        return len(self._table)

    def _intern(self, elems: tuple[HSet, ...]) -> HSet:
        node = self._table.get(elems)
        if node is not None:
            return node
        with self._lock:
            node = self._table.get(elems)
            if node is None:
                rank = 1 + max(e.rank for e in elems) if elems else 0
                key = (rank, tuple(e.key for e in elems))
                node = HSet(elems, rank, key, hash(key))
                self._table[elems] = node
            return node

    def make(self, elements: Iterable[HSet]) -> HSet:
        uniq = set(elements)
        return self._intern(tuple(sorted(uniq, key=_key)))

    # -- primitive operations ---------------------------------------------------

    def singleton(self, x: HSet) -> HSet:
        return self._intern((x,))

    def pair(self, x: HSet, y: HSet) -> HSet:
        """The unordered pair {x, y}."""
        return self.make((x, y))

    def kpair(self, x: HSet, y: HSet) -> HSet:
        """Kuratowski pair {{x}, {x, y}}."""
        return self.pair(self.singleton(x), self.pair(x, y))

    def union(self, x: HSet) -> HSet:
        return self.make(e for y in x.elements for e in y.elements)

    def union2(self, x: HSet, y: HSet) -> HSet:
        return self.make(x.elements + y.elements)

    def add_element(self, x: HSet, y: HSet) -> HSet:
        """x ∪ {y}."""
        if y in x:
            return x
        return self.make(x.elements + (y,))

    def diff_element(self, x: HSet, y: HSet) -> HSet:
        """x ∖ {y}."""
        if y not in x:
            return x
        return self._intern(tuple(e for e in x.elements if e is not y))

    def successor(self, x: HSet) -> HSet:
        return self.add_element(x, x)

    def transitive_closure(self, x: HSet) -> HSet:
        """TC(x): the least transitive set containing every element of x."""
        seen: set[HSet] = set()
        stack = list(x.elements)
        while stack:
            y = stack.pop()
            if y not in seen:
                seen.add(y)
                stack.extend(y.elements)
        return self.make(seen)

    def natural(self, n: int) -> HSet:
        """The von Neumann natural n."""
        while len(self._naturals) <= n:
            self._naturals.append(self.successor(self._naturals[-1]))
        return self._naturals[n]

    def power_set(self, x: HSet) -> HSet:
        elems = x.elements
        subsets = []
        for mask in range(1 << len(elems)):
            subsets.append(self._intern(tuple(e for i, e in enumerate(elems) if mask >> i & 1)))
        return self.make(subsets)

    def rank_level(self, n: int) -> HSet:
        """V_n as a set: the n-fold iterated power set of ∅."""
        v = self.empty
        for _ in range(n):
            v = self.power_set(v)
        return v

    # -- text -------------------------------------------------------------------

    def parse(self, text: str) -> HSet:
        """Read the braces format: ``{}``, ``∅``, ``#n``, ``{a, b, ...}``."""
        pos = _skip(text, 0)
        value, pos = self._parse_at(text, pos)
        pos = _skip(text, pos)
        if pos != len(text):
            raise ValueError(f"trailing text in set literal at column {pos + 1}: {text!r}")
        return value

    def _parse_at(self, text: str, pos: int) -> tuple[HSet, int]:
        if pos >= len(text):
            raise ValueError(f"unexpected end of set literal: {text!r}")
        ch = text[pos]
        if ch == "∅":
            return self.empty, pos + 1
        if ch == "#":
            end = pos + 1
            while end < len(text) and text[end].isdigit():
                end += 1
            if end == pos + 1:
                raise ValueError(f"expected digits after '#' at column {pos + 1}")
            return self.natural(int(text[pos + 1:end])), end
        if ch != "{":
            raise ValueError(f"unexpected {ch!r} at column {pos + 1} in set literal")
        pos = _skip(text, pos + 1)
        items = []
        if pos < len(text) and text[pos] == "}":
            return self.empty, pos + 1
        while True:
            item, pos = self._parse_at(text, pos)
            items.append(item)
            pos = _skip(text, pos)
            if pos < len(text) and text[pos] == ",":
                pos = _skip(text, pos + 1)
                continue
            if pos < len(text) and text[pos] == "}":
                return self.make(items), pos + 1
            raise ValueError(f"expected ',' or '}}' at column {pos + 1} in set literal")


def _key(x: HSet) -> tuple:
    return x.key


def _skip(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def format_set(x: HSet, shorthand: bool = True) -> str:
    """Braces text for x; naturals print as ``#n`` when shorthand is on."""
    if shorthand:
        n = x.as_natural()
        if n is not None:
            return f"#{n}"
    if x.is_empty:
        return "{}"
    return "{" + ", ".join(format_set(e, shorthand) for e in x.elements) + "}"


def is_transitive(x: HSet) -> bool:
    return all(z in x for y in x.elements for z in y.elements)


def is_ordinal(x: HSet) -> bool:
    """A transitive set of transitive sets."""
    return is_transitive(x) and all(is_transitive(y) for y in x.elements)


def is_ordinal_classical(x: HSet) -> bool:
    """Transitive and well-ordered by ∈ (linear, every nonempty subset has an ∈-least element).

    Hereditarily finite sets are well-founded, so for a finite set the
    minimal-element clause reduces to irreflexivity plus transitivity of ∈ on x.
    Checked by brute force over all subsets for small x.
    """
    if not is_transitive(x):
        return False
    elems = x.elements
    for a in elems:
        for b in elems:
            if a is not b and not (a in b or b in a):
                return False
            if a in b:
                for c in elems:
                    if b in c and a not in c:
                        return False
    if len(elems) <= 12:
        for mask in range(1, 1 << len(elems)):
            sub = [e for i, e in enumerate(elems) if mask >> i & 1]
            if not any(all(m is o or m in o for o in sub) for m in sub):
                return False
    return True


DEFAULT_ENGINE = SetEngine()
