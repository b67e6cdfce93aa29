"""Canonical composite tokens.

Every element of every finite set in this package is a string.  Composite
elements (pairs, tuples, positional assignments) are rendered through one
scheme so that equal mathematical objects print identically and therefore
compare equal as structures:

* ``tuple_token(a, b, ...)`` splices its arguments' parts into one flat
  tuple token ``(p1,p2,...)``.  Flat means flat: a tuple token never nests,
  so building ``(a, b)`` and then pairing with ``c`` yields the same string
  as pairing ``a`` with ``(b, c)``.  Associativity of pairing is literal.
* a one-part tuple collapses to its single atom, and the empty tuple is
  ``()``.  Singleton and unit carriers therefore act as strict units.
* atoms are escaped (``( ) , \\`` get a backslash) so splitting is exact.

Atoms that merely look like tuple tokens are treated as tuple tokens; that
is the point of a canonical form.  Sets whose elements mix arities can in
principle produce colliding splices; constructors detect the collision and
refuse rather than silently merge.
"""

from __future__ import annotations

from functools import lru_cache

_SPECIAL = "(),\\"


def escape_atom(atom: str) -> str:
    out = []
    for ch in atom:
        if ch in _SPECIAL:
            out.append("\\")
        out.append(ch)
    return "".join(out)


# the same few thousand tokens are parsed and spliced millions of times
# across a law sweep, so both directions are cached; tokens are immutable
# strings and the caches only ever hold tuples of them
@lru_cache(maxsize=None)
def _parse_tuple(token: str) -> tuple[str, ...] | None:
    # Returns the unescaped parts, or None when token is not a well-formed
    # flat tuple token and must be treated as an atom.
    if len(token) < 2 or token[0] != "(" or token[-1] != ")":
        return None
    if token == "()":
        return ()
    parts: list[str] = []
    cur: list[str] = []
    i = 1
    end = len(token) - 1
    while i < end:
        ch = token[i]
        if ch == "\\":
            if i + 1 >= end:
                return None
            cur.append(token[i + 1])
            i += 2
            continue
        if ch == ",":
            parts.append("".join(cur))
            cur = []
            i += 1
            continue
        if ch in "()":
            return None
        cur.append(ch)
        i += 1
    parts.append("".join(cur))
    return tuple(parts)


def token_parts(token: str) -> list[str]:
    """Split a token into its atom list; a non-tuple token is one atom."""
    parsed = _parse_tuple(token)
    if parsed is None:
        return [token]
    return list(parsed)


@lru_cache(maxsize=None)
def tuple_token(*tokens: str) -> str:
    """Splice tokens into one flat tuple token.

    >>> tuple_token("a", "b")
    '(a,b)'
    >>> tuple_token(tuple_token("a", "b"), "c") == tuple_token("a", tuple_token("b", "c"))
    True
    >>> tuple_token("x")
    'x'
    >>> tuple_token()
    '()'
    """
    parts: list[str] = []
    for tok in tokens:
        parts.extend(token_parts(tok))
    if len(parts) == 1:
        return parts[0]
    return "(" + ",".join(escape_atom(p) for p in parts) + ")"
