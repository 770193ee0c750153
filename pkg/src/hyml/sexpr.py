"""Minimal s-expression reader and canonical writer.

Atoms are runs of characters other than whitespace, parentheses and the
comment character; comments run from ';' to end of line.  The writer emits
one-space-separated, single-line output, which is the canonical form all
documents round-trip through.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SexprSyntaxError

_ATOM_FORBIDDEN = set("() \t\r\n;")


@dataclass(frozen=True, slots=True)
class SAtom:
    text: str
    line: int = 0
    col: int = 0


@dataclass(frozen=True, slots=True)
class SList:
    items: tuple
    line: int = 0
    col: int = 0

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, index):
        return self.items[index]


SExpr = SAtom | SList


def _tokenize(text: str):
    line, col = 1, 1
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
        elif ch in " \t\r":
            col += 1
            i += 1
        elif ch == ";":
            while i < n and text[i] != "\n":
                i += 1
        elif ch in "()":
            yield ch, line, col
            col += 1
            i += 1
        else:
            start = i
            start_col = col
            while i < n and text[i] not in _ATOM_FORBIDDEN:
                i += 1
                col += 1
            yield text[start:i], line, start_col
    yield None, line, col


def parse_many(text: str) -> list[SExpr]:
    """Parse every toplevel form in the text."""
    out: list[SExpr] = []
    stack: list[tuple[list, int, int]] = []
    for token, line, col in _tokenize(text):
        if token is None:
            if stack:
                _, oline, ocol = stack[-1]
                raise SexprSyntaxError("unclosed parenthesis", oline, ocol)
            break
        if token == "(":
            stack.append(([], line, col))
        elif token == ")":
            if not stack:
                raise SexprSyntaxError("unmatched ')'", line, col)
            items, oline, ocol = stack.pop()
            node = SList(tuple(items), oline, ocol)
            if stack:
                stack[-1][0].append(node)
            else:
                out.append(node)
        else:
            node = SAtom(token, line, col)
            if stack:
                stack[-1][0].append(node)
            else:
                out.append(node)
    return out


def parse_sexpr(text: str) -> SExpr:
    """Parse exactly one toplevel form."""
    forms = parse_many(text)
    if len(forms) != 1:
        raise SexprSyntaxError(f"expected exactly one toplevel form, found {len(forms)}")
    return forms[0]


def check_atom(text: str) -> str:
    if not text or any(ch in _ATOM_FORBIDDEN for ch in text):
        raise SexprSyntaxError(f"not a legal atom: {text!r}")
    return text


def render_sexpr(node) -> str:
    """Canonical text for an SExpr or a nested tuple/list/str structure."""
    if isinstance(node, SAtom):
        return check_atom(node.text)
    if isinstance(node, SList):
        return "(" + " ".join(render_sexpr(i) for i in node.items) + ")"
    if isinstance(node, str):
        return check_atom(node)
    if isinstance(node, int):
        return str(node)
    if isinstance(node, (list, tuple)):
        return "(" + " ".join(render_sexpr(i) for i in node) + ")"
    raise SexprSyntaxError(f"cannot render {node!r}")
