"""Game and scheme documents, plus a canonical JSON writer.

The writer is deterministic: plain dicts are emitted with sorted keys,
floats with 12 significant digits, and infinities as the quoted tokens
"inf" / "-inf".  Branch children are the one place where order carries
meaning (it fixes leaf indexing), so they are emitted as an OrderedMap,
which preserves insertion order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .game_core import Branch, Chance, GameTree, Leaf, branch, chance, leaf
from .info_structure import InfoStructure, PaymentScheme


class OrderedMap(dict):
    """Dict whose key order the canonical writer preserves."""


def _format_float(v: float) -> str:
    if np.isnan(v):
        raise ValidationError("cannot serialize NaN")
    if np.isposinf(v):
        return '"inf"'
    if np.isneginf(v):
        return '"-inf"'
    out = format(v, ".12g")
    return "0" if out == "-0" else out


def _is_scalar(v) -> bool:
    return isinstance(v, (str, bool, int, float, np.generic)) or v is None


def _emit(v, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(v, np.ndarray):
        v = v.tolist()
    if isinstance(v, np.generic):
        v = v.item()
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        return _format_float(v)
    if isinstance(v, str):
        return json.dumps(v, ensure_ascii=True)
    if isinstance(v, (list, tuple)):
        items = list(v)
        if not items:
            return "[]"
        if all(_is_scalar(x) for x in items):
            return "[" + ", ".join(_emit(x, 0) for x in items) + "]"
        body = ",\n".join(inner + _emit(x, indent + 1) for x in items)
        return "[\n" + body + "\n" + pad + "]"
    if isinstance(v, dict):
        if not v:
            return "{}"
        keys = list(v.keys()) if isinstance(v, OrderedMap) else sorted(v.keys())
        if not all(isinstance(k, str) for k in keys):
            raise ValidationError("document keys must be strings")
        body = ",\n".join(
            inner + json.dumps(k, ensure_ascii=True) + ": " + _emit(v[k], indent + 1)
            for k in keys
        )
        return "{\n" + body + "\n" + pad + "}"
    raise ValidationError(f"cannot serialize value of type {type(v).__name__}")


def dumps_canonical(doc) -> str:
    return _emit(doc, 0)


def _node_to_doc(node):
    if isinstance(node, Leaf):
        return {
            "leaf": {
                "id": node.id,
                "utilities": list(node.utilities),
                "emission": list(node.emission),
            }
        }
    if isinstance(node, Chance):
        return {
            "chance": {
                "id": node.id,
                "children": [{"p": p, "node": _node_to_doc(child)} for p, child in node.children],
            }
        }
    children = OrderedMap()
    for move, child in node.children:
        children[move] = _node_to_doc(child)
    return {"branch": {"id": node.id, "owner": node.owner, "children": children}}


def game_to_doc(tree: GameTree, alphabet, profile, costs=None) -> dict:
    doc = {
        "players": list(tree.players),
        "alphabet": list(alphabet),
        "tree": _node_to_doc(tree.root),
        "intended": dict(profile),
    }
    if costs is not None:
        doc["costs"] = np.asarray(costs).tolist()
    return doc


def _require(doc, key, kind, where):
    if not isinstance(doc, dict):
        raise ValidationError(f"{where} must be an object")
    if key not in doc:
        raise ValidationError(f"{where} is missing {key!r}")
    value = doc[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValidationError(f"{where}.{key} must be a number")
        return float(value)
    if not isinstance(value, kind):
        raise ValidationError(f"{where}.{key} must be {kind.__name__}")
    return value


def _parse_numbers(values, where):
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise ValidationError(f"{where} must contain only numbers")
        out.append(float(v))
    return out


def _parse_node(doc):
    if not isinstance(doc, dict) or len(doc) != 1:
        raise ValidationError("each tree node must be an object with exactly one of "
                              "'branch', 'chance', or 'leaf'")
    kind, body = next(iter(doc.items()))
    if kind == "leaf":
        node_id = _require(body, "id", str, "leaf")
        utilities = _parse_numbers(_require(body, "utilities", list, f"leaf {node_id}"), "utilities")
        emission = _parse_numbers(_require(body, "emission", list, f"leaf {node_id}"), "emission")
        return leaf(node_id, utilities, emission)
    if kind == "chance":
        node_id = _require(body, "id", str, "chance")
        entries = _require(body, "children", list, f"chance {node_id}")
        children = []
        for entry in entries:
            p = _require(entry, "p", float, f"chance {node_id} child")
            children.append((p, _parse_node(_require(entry, "node", dict, f"chance {node_id} child"))))
        return chance(node_id, children)
    if kind == "branch":
        node_id = _require(body, "id", str, "branch")
        owner = _require(body, "owner", int, f"branch {node_id}")
        if isinstance(owner, bool):
            raise ValidationError(f"branch {node_id}.owner must be an integer")
        children = _require(body, "children", dict, f"branch {node_id}")
        if not children:
            raise ValidationError(f"branch {node_id} has no children")
        return branch(node_id, owner, [(move, _parse_node(sub)) for move, sub in children.items()])
    raise ValidationError(f"unknown node kind {kind!r}")


def _parse_costs(raw, n, s):
    if not isinstance(raw, list) or len(raw) != n:
        raise ValidationError(f"costs must be a {n}x{s} array")
    out = np.zeros((n, s))
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != s:
            raise ValidationError(f"costs must be a {n}x{s} array")
        for k, v in enumerate(row):
            if v == "inf":
                out[i, k] = np.inf
            elif v == "-inf":
                raise ValidationError("cost entries may be numbers or 'inf', not '-inf'")
            elif isinstance(v, bool) or not isinstance(v, (int, float)):
                raise ValidationError("cost entries may be numbers or 'inf'")
            else:
                out[i, k] = float(v)
    return out


@dataclass(frozen=True, eq=False)
class GameDocument:
    tree: GameTree
    info: InfoStructure
    profile: dict
    costs: np.ndarray | None


def parse_game_doc(doc) -> GameDocument:
    players = _require(doc, "players", list, "document")
    if not players or not all(isinstance(p, str) for p in players):
        raise ValidationError("players must be a nonempty list of names")
    alphabet = _require(doc, "alphabet", list, "document")
    if not alphabet or not all(isinstance(a, str) for a in alphabet):
        raise ValidationError("alphabet must be a nonempty list of symbols")
    tree = GameTree(tuple(players), _parse_node(_require(doc, "tree", dict, "document")))
    info = InfoStructure.from_tree(tree, tuple(alphabet))
    profile = _require(doc, "intended", dict, "document")
    for node_id, move in profile.items():
        if not isinstance(node_id, str) or not isinstance(move, str):
            raise ValidationError("intended must map branch ids to move names")
    costs = None
    if "costs" in doc:
        costs = _parse_costs(doc["costs"], tree.n, len(alphabet))
    return GameDocument(tree=tree, info=info, profile=dict(profile), costs=costs)


def scheme_to_doc(alphabet, scheme: PaymentScheme) -> dict:
    return {
        "alphabet": list(alphabet),
        "lambda": scheme.matrix.tolist(),
        "max_deposits": scheme.max_deposits.tolist(),
    }


def parse_scheme_doc(doc) -> tuple[tuple[str, ...], PaymentScheme]:
    alphabet = _require(doc, "alphabet", list, "document")
    if not alphabet or not all(isinstance(a, str) for a in alphabet):
        raise ValidationError("alphabet must be a nonempty list of symbols")
    raw = _require(doc, "lambda", list, "document")
    if not raw or not all(isinstance(row, list) for row in raw):
        raise ValidationError("lambda must be a 2D array")
    rows = [_parse_numbers(row, "lambda") for row in raw]
    width = len(rows[0])
    if any(len(row) != width for row in rows) or width != len(alphabet):
        raise ValidationError("lambda must be rectangular with one column per symbol")
    return tuple(alphabet), PaymentScheme(np.array(rows))
