"""Text formats for automata, transducers and circuits.

SWTA files::

    swta m=4
    root q
    leaves u v
    colors 1 2
    trans q a 1 -> (1*r + 1*s | 1*r + -1*s)

WTT files use the same layout with header ``wtt`` and ground terms
``q(L)`` / ``q(R)``; transitions have no color.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from pathlib import Path
from typing import Optional, Union

from .algebra import DEFAULT_M, InvalidScalar, format_scalar, parse_scalar
from .swta import LinearForm, ModelError, Swta, state_sort_key
from .wtt import L, R, Wtt


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0, source: str = "<text>"):
        super().__init__(f"{source}:{line}:{col}: {msg}")
        self.line, self.col, self.source = line, col, source


def _split_terms(text: str) -> list:
    """Split a form on top-level '+' and binary ' - '."""
    out, cur, depth = [], [], 0
    n = len(text)
    for i, ch in enumerate(text):
        if ch in "(<":
            depth += 1
        elif ch in ")>":
            depth -= 1
        if depth == 0 and ch == "+":
            out.append("".join(cur))
            cur = []
            continue
        if (
            depth == 0
            and ch == "-"
            and i > 0
            and text[i - 1].isspace()
            and i + 1 < n
            and text[i + 1].isspace()
            and "".join(cur).strip()
        ):
            out.append("".join(cur))
            cur = ["-"]
            continue
        cur.append(ch)
    out.append("".join(cur))
    return out


def _find_top(text: str, ch: str) -> int:
    depth = 0
    for i, c in enumerate(text):
        if c in "(<":
            depth += 1
        elif c in ")>":
            depth -= 1
        elif c == ch and depth == 0:
            return i
    return -1


_GROUND = re.compile(r"^(.*)\((L|R)\)$")


def parse_form(text: str, m: int, ground: bool) -> LinearForm:
    text = text.strip()
    if not text:
        raise ValueError("empty linear form (write 0 for the empty form)")
    if text == "0":
        return LinearForm()
    terms: dict = {}
    for raw in _split_terms(text):
        t = raw.strip()
        if not t:
            raise ValueError(f"empty term in {text!r}")
        star = _find_top(t, "*")
        if star >= 0:
            coef = parse_scalar(t[:star].strip(), m)
            key = t[star + 1:].strip()
        elif t.startswith("-"):
            coef = parse_scalar("-1", m)
            key = t[1:].strip()
        else:
            coef = parse_scalar("1", m)
            key = t
        if not key or any(c.isspace() for c in key):
            raise ValueError(f"bad term {t!r}")
        if ground:
            mt = _GROUND.match(key)
            if not mt:
                raise ValueError(f"expected a ground term q(L) or q(R), got {key!r}")
            key = (mt.group(1), mt.group(2))
        terms[key] = terms[key] + coef if key in terms else coef
    return LinearForm(terms)


def _split_pair(text: str) -> tuple:
    text = text.strip()
    if not (text.startswith("(") and text.endswith(")")):
        raise ValueError("transition right-hand side must be (left | right)")
    inner = text[1:-1]
    depth = 0
    for i, c in enumerate(inner):
        if c in "(<":
            depth += 1
        elif c in ")>":
            depth -= 1
        elif c == "|" and depth == 0:
            return inner[:i], inner[i + 1:]
    raise ValueError("missing '|' between the two child forms")


def parse_model(text: str, source: str = "<text>", m: Optional[int] = None) -> Union[Swta, Wtt]:
    kind = None
    modulus = None
    root = None
    leaves: list = []
    colors: list = []
    alphabet: list = []
    trans: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        col = len(line) - len(line.lstrip()) + 1
        words = line.split()
        head = words[0]
        try:
            if kind is None:
                if head not in ("swta", "wtt"):
                    raise ValueError("file must start with 'swta' or 'wtt'")
                kind = head
                modulus = DEFAULT_M
                for w in words[1:]:
                    if not w.startswith("m="):
                        raise ValueError(f"unknown header field {w!r}")
                    modulus = int(w[2:])
                if m is not None and modulus != m:
                    raise ValueError(f"file declares m={modulus}, workspace uses m={m}")
            elif head == "root":
                if len(words) != 2:
                    raise ValueError("root takes one state")
                root = words[1]
            elif head == "leaves":
                leaves.extend(words[1:])
            elif head == "colors":
                if kind != "swta":
                    raise ValueError("transducers have no colors")
                colors.extend(words[1:])
            elif head == "alphabet":
                alphabet.extend(words[1:])
            elif head == "trans":
                arrow = line.find("->")
                if arrow < 0:
                    raise ValueError("missing '->'")
                lhs = line[:arrow].split()[1:]
                want = 3 if kind == "swta" else 2
                if len(lhs) != want:
                    raise ValueError(f"expected {want} fields before '->'")
                left, right = _split_pair(line[arrow + 2:])
                ground = kind == "wtt"
                forms = (parse_form(left, modulus, ground), parse_form(right, modulus, ground))
                key = tuple(lhs)
                if key in trans:
                    raise ValueError(f"duplicate transition for {' '.join(lhs)}")
                trans[key] = forms
            else:
                raise ValueError(f"unknown directive {head!r}")
        except (ValueError, InvalidScalar) as e:
            raise ParseError(str(e), lineno, col, source) from None
    if kind is None:
        raise ParseError("empty model", 0, 0, source)
    if root is None:
        raise ParseError("missing root", 0, 0, source)
    try:
        if kind == "swta":
            return Swta(root, frozenset(leaves), trans, tuple(alphabet), tuple(colors), m=modulus)
        return Wtt(root, frozenset(leaves), trans, tuple(alphabet), m=modulus)
    except ModelError as e:
        raise ParseError(str(e), 0, 0, source) from None


def format_form(form: LinearForm, ground: bool) -> str:
    if form.is_empty():
        return "0"
    parts = []
    for key, coef in form.items():
        name = f"{key[0]}({key[1]})" if ground else key
        parts.append(f"{format_scalar(coef)}*{name}")
    return " + ".join(parts)


def format_model(X: Union[Swta, Wtt]) -> str:
    ground = isinstance(X, Wtt)
    lines = [f"{'wtt' if ground else 'swta'} m={X.m}", f"root {X.root}"]
    lines.append("leaves " + " ".join(sorted(X.leaves, key=state_sort_key)))
    lines.append("alphabet " + " ".join(X.alphabet))
    if not ground:
        lines.append("colors " + " ".join(X.colors))
    a_idx = {a: i for i, a in enumerate(X.alphabet)}
    if ground:
        keys = sorted(X.transitions, key=lambda k: (state_sort_key(k[0]), a_idx[k[1]]))
    else:
        c_idx = {c: i for i, c in enumerate(X.colors)}
        keys = sorted(X.transitions, key=lambda k: (state_sort_key(k[0]), a_idx[k[1]], c_idx[k[2]]))
    for k in keys:
        left, right = X.transitions[k]
        lines.append(f"trans {' '.join(k)} -> ({format_form(left, ground)} | {format_form(right, ground)})")
    return "\n".join(lines) + "\n"


def load_model(path, m: Optional[int] = None) -> Union[Swta, Wtt]:
    p = Path(path)
    return parse_model(p.read_text(encoding="utf-8"), str(p), m)


def save_model(X, path) -> None:
    Path(path).write_text(format_model(X), encoding="utf-8")


# ------------------------------------------------------------------ circuits


_RANGE = re.compile(r"^(\d+)\.\.(\d+)$")
_MATRIX = re.compile(r"^\((.*)\)$")


def parse_circuit(text: str, source: str = "<text>", m: Optional[int] = None) -> tuple:
    """Return (qubit count, modulus, list of gate transducers in application order)."""
    from . import gates

    n = None
    modulus = m
    seq = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        op = words[0].upper()
        try:
            if op in ("CIRCUIT", "QUBITS"):
                for w in words[1:]:
                    if w.startswith("n="):
                        n = int(w[2:])
                    elif w.startswith("m="):
                        declared = int(w[2:])
                        if m is not None and declared != m:
                            raise ValueError(f"file declares m={declared}, workspace uses m={m}")
                        modulus = declared
                    else:
                        n = int(w)
                continue
            if n is None:
                raise ValueError("qubit count must be declared before the first gate")
            mod = modulus or DEFAULT_M
            if op == "QFT":
                mt = _RANGE.match(words[1]) if len(words) == 2 else None
                if not mt:
                    raise ValueError("QFT takes a range a..b")
                lo, hi = int(mt.group(1)), int(mt.group(2))
                seq.append(gates.qft_wtt(hi - lo + 1, n, lo, mod))
            elif op == "BROADCAST":
                U = gates.named_gate(words[1], mod)
                seq.append(gates.broadcast_wtt(U, gates.qubit_symbols(n)))
            elif op == "U":
                rest = line[1:].strip()
                close = rest.rfind(")")
                entries = rest[1:close].split("|")
                if len(entries) != 4:
                    raise ValueError("U needs four entries (a|b|c|d)")
                U = gates.Unitary2(*(parse_scalar(e.strip(), mod) for e in entries))
                idx = [int(w) for w in rest[close + 1:].split()]
                seq.append(_gate(gates, U, idx, n))
            else:
                k = len(op) - len(op.lstrip("C"))
                base = op[k:]
                if not base:
                    base, k = "C", 0
                U = gates.named_gate(base, mod)
                idx = [int(w) for w in words[1:]]
                if len(idx) != k + 1:
                    raise ValueError(f"{op} takes {k + 1} qubit indices")
                seq.append(_gate(gates, U, idx, n))
        except (ValueError, InvalidScalar, ModelError) as e:
            raise ParseError(str(e), lineno, 1, source) from None
    if n is None:
        raise ParseError("missing qubit count", 0, 0, source)
    return n, modulus or DEFAULT_M, seq


def _gate(gates, U, idx, n):
    *controls, target = idx
    if controls:
        return gates.controlled_wtt(U, target, controls, n)
    return gates.single_qubit_wtt(U, target, n)


def load_circuit(path, m: Optional[int] = None) -> tuple:
    p = Path(path)
    return parse_circuit(p.read_text(encoding="utf-8"), str(p), m)
