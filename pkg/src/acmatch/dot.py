"""Graphviz DOT export for discrimination nets.

Commutative states of a multilayer net become clusters holding their inner
net; edges leaving a cluster carry the requirement multiset of the exit.
"""
from __future__ import annotations

from typing import Callable, Dict, Hashable, List, Optional, Union

from .discrimination import ADN, ManyToOneMatcher, _State
from .flatterm import END_MARK
from .multiset import Multiset
from .vsdn import VSDN

__all__ = ["to_dot", "write_dot"]


def _quote(text: str) -> str:
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _guard_suffix(guards) -> str:
    return f" [{', '.join(map(str, guards))}]" if guards else ""


def _token_label(token) -> str:
    if token is END_MARK:
        return "⟩"
    return str(token)


class _Writer:
    def __init__(self, name: str):
        self.name = name
        self.lines: List[str] = []
        self.counter = 0
        self.clusters = 0

    def node(self, label: str = "", shape: str = "circle", indent: str = "  ") -> str:
        nid = f"n{self.counter}"
        self.counter += 1
        self.lines.append(f"{indent}{nid} [label={_quote(label)}, shape={shape}];")
        return nid

    def edge(self, a: str, b: str, label: str, indent: str = "  ", **attrs) -> None:
        extra = "".join(f", {k}={_quote(v)}" for k, v in attrs.items())
        self.lines.append(f"{indent}{a} -> {b} [label={_quote(label)}{extra}];")

    def render(self) -> str:
        head = [f"digraph {_quote(self.name)} {{", "  rankdir=LR;", "  compound=true;"]
        return "\n".join(head + self.lines + ["}"]) + "\n"


def _vsdn(net: VSDN, w: _Writer) -> None:
    ids = {}
    for st in net.states:
        label = ", ".join(str(net._ids[p]) for p in sorted(st.accept))
        ids[st.id] = w.node(label, "doublecircle" if st.accept else "circle")
    for st in net.states:
        for token, nxt in st.transitions.items():
            w.edge(ids[st.id], ids[nxt.id], _token_label(token))
        if st.omega is not None:
            w.edge(ids[st.id], ids[st.omega.id], "ω")


def _adn(state: _State, w: _Writer, final_label: Callable[[Hashable], str], indent: str = "  ") -> str:
    seen: Dict[int, str] = {}

    def visit(st: _State, indent: str) -> str:
        if id(st) in seen:
            return seen[id(st)]
        label = ", ".join(final_label(p) for p in st.final)
        nid = w.node(label, "doublecircle" if st.final else "circle", indent)
        seen[id(st)] = nid
        for key, options in st.symbols.items():
            for guards, nxt in options:
                w.edge(nid, visit(nxt, indent), _token_label(key) + _guard_suffix(guards), indent)
        for var, guards, nxt in st.variables:
            w.edge(nid, visit(nxt, indent), str(var) + _guard_suffix(guards), indent)
        for head, node in st.commutative.items():
            w.clusters += 1
            cluster = f"cluster_{w.clusters}"
            w.lines.append(f"{indent}subgraph {cluster} {{")
            w.lines.append(f"{indent}  label={_quote(head.name)};")
            w.lines.append(f"{indent}  style=dashed;")
            terms = node.subpatterns
            inner_root = _adn(node.inner.root, w, lambda sid, terms=terms: f"{sid}: {terms[sid]}", indent + "  ")
            w.lines.append(f"{indent}}}")
            w.edge(nid, inner_root, head.name, indent, lhead=cluster)
            for ex in node.exits.values():
                req = Multiset(counts={sid: m for sid, _, m in ex.requirements})
                parts = [str(req)]
                parts += [f"{name}×{m}" if m > 1 else name for name, m, _, _ in ex.seqvars]
                target = visit(ex.target, indent)
                w.edge(inner_root, target, " ".join(parts) + _guard_suffix(ex.guards), indent, ltail=cluster)
        return nid

    return visit(state, indent)


def to_dot(net: Union[VSDN, ADN, ManyToOneMatcher], name: str = "net") -> str:
    """Render a VSDN, ADN, MLDN or many-to-one matcher as a DOT digraph."""
    w = _Writer(name)
    if isinstance(net, VSDN):
        _vsdn(net, w)
    elif isinstance(net, ManyToOneMatcher):
        ids = net.ids
        _adn(net.net.root, w, lambda i: str(ids[i]))
    elif isinstance(net, ADN):
        _adn(net.root, w, str)
    else:
        raise TypeError(f"cannot render {type(net).__name__} as DOT")
    return w.render()


def write_dot(net, path: str, name: Optional[str] = None) -> str:
    text = to_dot(net, name or "net")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text
