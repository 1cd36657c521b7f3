"""Minimal DOT syntax checker used as a round-trip oracle for exports.

Accepts the subset this project emits: a single digraph with node and edge
statements, quoted or bare identifiers, and bracketed attribute lists."""

import re

_TOKEN = re.compile(
    r'\s*(?:("(?:[^"\\]|\\.)*")|(digraph|->)|([A-Za-z_][A-Za-z0-9_]*|\d+)|([{}\[\];=,]))'
)


def _tokens(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip():
                raise AssertionError(f"unexpected DOT text at {text[pos:pos+20]!r}")
            break
        out.append(next(g for g in m.groups() if g is not None))
        pos = m.end()
    return out


def check_dot(text):
    tokens = _tokens(text)
    assert tokens[0] == "digraph"
    assert tokens[2] == "{"
    assert tokens[-1] == "}"
    i = 3

    def name(tok):
        return tok.startswith('"') or re.fullmatch(r"[A-Za-z_0-9]+", tok)

    while i < len(tokens) - 1:
        tok = tokens[i]
        assert name(tok), f"expected a name, got {tok!r}"
        i += 1
        if tokens[i] == "->":
            i += 1
            assert name(tokens[i]), f"expected a target name, got {tokens[i]!r}"
            i += 1
        elif tokens[i] == "=":
            i += 1
            assert name(tokens[i])
            i += 1
            assert tokens[i] == ";"
            i += 1
            continue
        if tokens[i] == "[":
            i += 1
            while tokens[i] != "]":
                assert name(tokens[i])
                assert tokens[i + 1] == "="
                assert name(tokens[i + 2])
                i += 3
                if tokens[i] == ",":
                    i += 1
            i += 1
        assert tokens[i] == ";", f"expected ';', got {tokens[i]!r}"
        i += 1
    return True
