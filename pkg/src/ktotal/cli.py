"""Command line front end.

    ktotal snf FILE
    ktotal check FILE.json
    ktotal paper verify [--case CASE] [--max-coeff N] [--window J] [--format text|json]
    ktotal fixture dump NAME

Exit codes: 0 everything holds, 1 a verification failed, 2 input error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from . import abgroup as ab
from .bockstein import DEFAULT_BOUND, GradedHom, check_lambda_linear, levels
from .errors import KTotalError
from .fixtures import (
    FIXTURE_NAMES,
    TotalTuple,
    cone_membership,
    eta_map,
    gamma_map,
    iota_map,
    load_fixture,
    omega_graded,
    phi_graded,
    pi_map,
    total_cone_condition,
    zeta_map,
)
from .groupexpr import atoms as A
from .groupexpr.core import Family, Group, Hom, TailProduct, tail_map
from .groupexpr.element import element, format_element, homexpr_equal
from .groupexpr.fgslice import exactness
from .groupexpr.named import bold_q, bold_q_mod_z, bold_z
from .verify import ALL_CASES, CASES, SubVerdict, VerifyConfig, VerifyReport, Witness, run_all

REPORT_SCHEMA = "ktotal-report/1"
DOCUMENT_VERSION = 1
MAX_BOUND = 60
MAX_ORDER = 10 ** 6


# ---------------------------------------------------------------- diagnostics

class ParseError(Exception):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column, self.message = line, column, message


class SemanticError(Exception):
    def __init__(self, name: str, message: str):
        super().__init__(f"{name}: {message}")
        self.name, self.message = name, message


def _position(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    return line, offset - (text.rfind("\n", 0, offset) + 1) + 1


def _locate(text: str, path: tuple) -> tuple[int, int]:
    """Approximate position of a JSON path: successive searches for its object keys."""
    offset = 0
    for key in path:
        if isinstance(key, str):
            i = text.find(json.dumps(key, ensure_ascii=False), offset)
            if i >= 0:
                offset = i
    return _position(text, offset)


class _Schema:
    def __init__(self, text: str):
        self.text = text

    def fail(self, path: tuple, message: str):
        line, col = _locate(self.text, path)
        where = "$" + "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path)
        raise ParseError(line, col, f"{where}: {message}")

    def obj(self, v, path, required=(), optional=()):
        if not isinstance(v, dict):
            self.fail(path, "expected an object")
        for k in required:
            if k not in v:
                self.fail(path, f"missing key {k!r}")
        extra = sorted(set(v) - set(required) - set(optional))
        if extra:
            self.fail(path + (extra[0],), f"unknown key {extra[0]!r}")
        return v

    def string(self, v, path, choices=None):
        if not isinstance(v, str):
            self.fail(path, "expected a string")
        if choices is not None and v not in choices:
            self.fail(path, f"expected one of {', '.join(choices)}")
        return v

    def integer(self, v, path, lo=None, hi=None):
        if not isinstance(v, int) or isinstance(v, bool):
            self.fail(path, "expected an integer")
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            self.fail(path, f"integer out of range [{lo}, {hi}]")
        return v

    def number(self, v, path):
        """Integers or exact fractions written as strings "p/q"."""
        if isinstance(v, bool):
            self.fail(path, "expected a number")
        if isinstance(v, int):
            return Fraction(v)
        if isinstance(v, str):
            try:
                q = Fraction(v.strip())
            except (ValueError, ZeroDivisionError):
                self.fail(path, f"{v!r} is not an exact number")
            if "." in v or "e" in v.lower():
                self.fail(path, "decimal notation is not exact; write p/q")
            return q
        self.fail(path, "expected an integer or a string 'p/q'")

    def array(self, v, path, limit=10_000):
        if not isinstance(v, list):
            self.fail(path, "expected an array")
        if len(v) > limit:
            self.fail(path, "array too long")
        return v


def _num_json(q: Fraction):
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# ---------------------------------------------------------------- document model

GROUP_KINDS = ("cyclic", "integers", "dyadic", "rational", "qmod_dyadic", "sum", "tail", "bold_z", "bold_q",
               "bold_q_mod_z", "fixture")
HOM_KINDS = ("matrix", "scalar", "family", "composite", "fixture")
ASSERTION_KINDS = ("square", "exact_at", "lambda_linear", "cone_member")
EXPECTED = ("commutes", "fails", "exact", "positive", "negative")
GRADED_MAPS = ("gamma", "gamma_inverse", "eta", "zeta", "iota1", "iota2", "pi", "phi", "phi_prime", "omega",
               "omega_prime")


@dataclass
class InputDocument:
    version: int
    groups: dict  # name -> Group
    homs: dict  # name -> Hom
    assertions: list  # normalized assertion dicts
    canonical: dict = field(repr=False, default_factory=dict)


def _graded(name: str, bound: int, j: int | None) -> GradedHom:
    if name in ("omega", "omega_prime"):
        return omega_graded(j, name == "omega_prime", bound)
    return {
        "gamma": lambda: gamma_map(bound),
        "gamma_inverse": lambda: gamma_map(bound, inverse=True),
        "eta": lambda: eta_map(bound),
        "zeta": lambda: zeta_map(bound),
        "iota1": lambda: iota_map(1, bound),
        "iota2": lambda: iota_map(2, bound),
        "pi": lambda: pi_map(bound),
        "phi": lambda: phi_graded(False, bound),
        "phi_prime": lambda: phi_graded(True, bound),
    }[name]()


class _Builder:
    def __init__(self, text: str, raw: dict):
        self.s = _Schema(text)
        self.raw = raw
        self.groups: dict = {}
        self.homs: dict = {}
        self.canon_groups: dict = {}
        self.canon_homs: dict = {}
        self._active: set = set()

    # groups
    def group_literal(self, v, path, name):
        s = self.s
        s.obj(v, path, ("kind",), ("n", "of", "base", "comp", "rule", "name", "j", "bound"))
        kind = s.string(v["kind"], path + ("kind",), GROUP_KINDS)
        allowed = {"cyclic": {"n"}, "sum": {"of"}, "tail": {"base", "comp", "rule"},
                   "fixture": {"name", "j", "n", "bound"}}.get(kind, set())
        s.obj(v, path, ("kind",) + tuple(sorted(allowed - {"bound"})), tuple(allowed & {"bound"}))
        if kind == "cyclic":
            n = s.integer(v["n"], path + ("n",), 0, MAX_ORDER)
            if n == 1:
                return Group(()), {"kind": "cyclic", "n": 1}
            return Group((A.Cyclic(n),)), {"kind": "cyclic", "n": n}
        simple = {"integers": A.Cyclic(0), "dyadic": A.Dyadic(), "rational": A.Rational(),
                  "qmod_dyadic": A.QmodDyadic()}
        if kind in simple:
            return Group((simple[kind],)), {"kind": kind}
        named = {"bold_z": bold_z, "bold_q": bold_q, "bold_q_mod_z": bold_q_mod_z}
        if kind in named:
            return named[kind](), {"kind": kind}
        if kind == "sum":
            parts = s.array(v["of"], path + ("of",), 64)
            built = [self.group_literal(p, path + ("of", i), name) for i, p in enumerate(parts)]
            return Group(tuple(a for g, _ in built for a in g.atoms)), {"kind": "sum", "of": [c for _, c in built]}
        if kind == "tail":
            base, cb = self.group_literal(v["base"], path + ("base",), name)
            comp, cc = self.group_literal(v["comp"], path + ("comp",), name)
            if not (base.is_simple and comp.is_simple):
                raise SemanticError(name, "tail base and component must be sums of simple groups")
            rule, cr = self.family_literal(v["rule"], path + ("rule",), name, base, comp)
            g = Group((TailProduct(base, comp, rule),)) if not comp.is_trivial else base
            return g, {"kind": "tail", "base": cb, "comp": cc, "rule": cr}
        fx = s.string(v["name"], path + ("name",), FIXTURE_NAMES)
        j = s.integer(v["j"], path + ("j",), 0, 1)
        bound = s.integer(v.get("bound", DEFAULT_BOUND), path + ("bound",), 2, MAX_BOUND)
        n = s.integer(v["n"], path + ("n",), 0, bound)
        if n == 1:
            s.fail(path + ("n",), "coefficient levels are 0 or 2..bound")
        g = load_fixture(fx, bound).totalk.group(j, n)
        if g is None:
            raise SemanticError(name, f"{fx} does not specify K_{j} at level {n}")
        return g, {"kind": "fixture", "name": fx, "j": j, "n": n, "bound": bound}

    def matrix(self, v, path, dom: Group, cod: Group, name):
        rows = self.s.array(v, path, 256)
        if len(rows) != len(cod.atoms):
            raise SemanticError(name, f"matrix needs {len(cod.atoms)} rows for {cod}")
        out = []
        for i, r in enumerate(rows):
            r = self.s.array(r, path + (i,), 256)
            if len(r) != len(dom.atoms):
                raise SemanticError(name, f"row {i} needs {len(dom.atoms)} entries for {dom}")
            out.append([self.s.number(x, path + (i, k)) for k, x in enumerate(r)])
        if not (dom.is_simple and cod.is_simple):
            raise SemanticError(name, "matrix literals connect sums of simple groups")
        return Hom.from_matrix(dom, cod, out), [[_num_json(q) for q in r] for r in out]

    def family_literal(self, v, path, name, dom, cod):
        self.s.obj(v, path, (), ("head", "cycle", "weighted"))
        parts, canon = {}, {}
        for key in ("head", "cycle", "weighted"):
            mats = self.s.array(v.get(key, []), path + (key,), 64)
            built = [self.matrix(m, path + (key, i), dom, cod, name) for i, m in enumerate(mats)]
            parts[key] = [h for h, _ in built]
            if built:
                canon[key] = [c for _, c in built]
        fam = Family.make(dom, cod, parts["head"], parts["cycle"], parts["weighted"])
        return fam, canon

    def group(self, ref, path, owner) -> Group:
        self.s.string(ref, path)
        if ref not in self.groups:
            raise SemanticError(owner, f"undefined group {ref!r}")
        return self.groups[ref]

    # homs
    def hom(self, name: str, path) -> Hom:
        if name in self.homs:
            return self.homs[name]
        homs_raw = self.raw.get("homs", {})
        if name not in homs_raw:
            raise SemanticError(name, "undefined hom")
        if name in self._active:
            raise SemanticError(name, "composite definitions form a cycle")
        self._active.add(name)
        h, c = self.hom_literal(homs_raw[name], ("homs", name), name)
        self._active.discard(name)
        self.homs[name], self.canon_homs[name] = h, c
        return h

    def hom_literal(self, v, path, name):
        s = self.s
        s.obj(v, path, ("kind",), ("from", "to", "entries", "on", "c", "of", "base", "coords", "map", "j", "n",
                                   "bound"))
        kind = s.string(v["kind"], path + ("kind",), HOM_KINDS)
        keys = {"matrix": ("from", "to", "entries"), "scalar": ("on", "c"), "composite": ("of",),
                "family": ("from", "to", "base", "coords"), "fixture": ("map", "j", "n")}[kind]
        s.obj(v, path, ("kind",) + keys, ("bound",) if kind == "fixture" else ())
        if kind == "matrix":
            dom, cod = self.group(v["from"], path + ("from",), name), self.group(v["to"], path + ("to",), name)
            h, ent = self.matrix(v["entries"], path + ("entries",), dom, cod, name)
            return h, {"kind": "matrix", "from": v["from"], "to": v["to"], "entries": ent}
        if kind == "scalar":
            g = self.group(v["on"], path + ("on",), name)
            c = s.integer(v["c"], path + ("c",), -MAX_ORDER, MAX_ORDER)
            return Hom.scalar(g, c), {"kind": "scalar", "on": v["on"], "c": c}
        if kind == "composite":
            refs = s.array(v["of"], path + ("of",), 64)
            if not refs:
                s.fail(path + ("of",), "a composite needs at least one map")
            maps = [self.hom(s.string(r, path + ("of", i)), path + ("of", i)) for i, r in enumerate(refs)]
            h = maps[0]
            for g in maps[1:]:
                if g.domain != h.codomain:
                    raise SemanticError(name, "consecutive maps in the composite do not compose")
                h = g @ h
            return h, {"kind": "composite", "of": list(refs)}
        if kind == "family":
            dom, cod = self.group(v["from"], path + ("from",), name), self.group(v["to"], path + ("to",), name)
            if not (len(dom.atoms) == len(cod.atoms) == 1 and isinstance(dom.atoms[0], TailProduct)
                    and isinstance(cod.atoms[0], TailProduct)):
                raise SemanticError(name, "family maps connect two tail groups")
            td, tc = dom.atoms[0], cod.atoms[0]
            base, cbase = self.matrix(v["base"], path + ("base",), td.base, tc.base, name)
            coords, cc = self.family_literal(v["coords"], path + ("coords",), name, td.comp, tc.comp)
            h = Hom(dom, cod, ((tail_map(td, tc, base, coords),),))
            return h, {"kind": "family", "from": v["from"], "to": v["to"], "base": cbase, "coords": cc}
        m = s.string(v["map"], path + ("map",), GRADED_MAPS)
        bound = s.integer(v.get("bound", DEFAULT_BOUND), path + ("bound",), 2, MAX_BOUND)
        j = s.integer(v["j"], path + ("j",), 0, 1)
        n = s.integer(v["n"], path + ("n",), 0, bound)
        if n == 1:
            s.fail(path + ("n",), "coefficient levels are 0 or 2..bound")
        idx = 3 if m.startswith("omega") else None
        h = _graded(m, bound, idx).at(j, n)
        if h is None:
            raise SemanticError(name, f"{m} has no component at ({j},{n})")
        return h, {"kind": "fixture", "map": m, "j": j, "n": n, "bound": bound}

    # assertions
    def assertion(self, v, path, idx):
        s = self.s
        label = f"assertion {idx}"
        s.obj(v, path, ("kind", "expected"), ("top", "right", "left", "bottom", "in", "out", "map", "index",
                                              "bound", "ops", "fixture", "element", "u", "s"))
        kind = s.string(v["kind"], path + ("kind",), ASSERTION_KINDS)
        allowed_expected = {"square": ("commutes", "fails"), "exact_at": ("exact", "fails"),
                            "lambda_linear": ("commutes", "fails"),
                            "cone_member": ("positive", "negative")}[kind]
        expected = s.string(v["expected"], path + ("expected",), allowed_expected)
        out = {"kind": kind, "expected": expected}
        if kind == "square":
            s.obj(v, path, ("kind", "expected", "top", "right", "left", "bottom"))
            maps = {k: self.hom(s.string(v[k], path + (k,)), path + (k,)) for k in ("top", "right", "left", "bottom")}
            if maps["top"].codomain != maps["right"].domain or maps["left"].codomain != maps["bottom"].domain \
                    or maps["top"].domain != maps["left"].domain or maps["right"].codomain != maps["bottom"].codomain:
                raise SemanticError(label, "the four maps do not form a square")
            out.update({k: v[k] for k in maps})
        elif kind == "exact_at":
            s.obj(v, path, ("kind", "expected", "in", "out"))
            f, g = self.hom(s.string(v["in"], path + ("in",)), path), self.hom(s.string(v["out"], path + ("out",)), path)
            if f.codomain != g.domain:
                raise SemanticError(label, "the maps are not composable")
            out.update({"in": v["in"], "out": v["out"]})
        elif kind == "lambda_linear":
            s.obj(v, path, ("kind", "expected", "map"), ("index", "bound", "ops"))
            m = s.string(v["map"], path + ("map",), GRADED_MAPS)
            bound = s.integer(v.get("bound", DEFAULT_BOUND), path + ("bound",), 2, MAX_BOUND)
            ops = s.array(v.get("ops", ["rho", "beta", "kappa"]), path + ("ops",), 3)
            ops = sorted({s.string(o, path + ("ops", i), ("rho", "beta", "kappa")) for i, o in enumerate(ops)})
            out.update({"map": m, "bound": bound, "ops": ops})
            if m.startswith("omega"):
                out["index"] = s.integer(v.get("index", 1), path + ("index",), 1, 1000)
        else:
            s.obj(v, path, ("kind", "expected", "fixture", "element"), ("u", "s"))
            fx = s.string(v["fixture"], path + ("fixture",), FIXTURE_NAMES)
            out.update({"fixture": fx, "element": _canon_payload(s, v["element"], path + ("element",))})
            if "u" in v or "s" in v:
                out["u"] = _canon_payload(s, v.get("u", [0]), path + ("u",))
                raw_s = s.obj(v.get("s", {}), path + ("s",), (), tuple(v.get("s", {}) if isinstance(v.get("s"), dict)
                                                                         else ()))
                canon_s = {}
                for key, pair in raw_s.items():
                    try:
                        n = int(key)
                    except ValueError:
                        s.fail(path + ("s", key), "keys are coefficient levels")
                    if not 2 <= n <= DEFAULT_BOUND:
                        s.fail(path + ("s", key), f"levels run over 2..{DEFAULT_BOUND}")
                    pair = s.array(pair, path + ("s", key), 2)
                    if len(pair) != 2:
                        s.fail(path + ("s", key), "expected [K_0 part, K_1 part]")
                    canon_s[str(n)] = [_canon_payload(s, p, path + ("s", key, i)) for i, p in enumerate(pair)]
                out["s"] = dict(sorted(canon_s.items(), key=lambda kv: int(kv[0])))
            _cone_value(out)  # validates the payloads against the fixture's groups
        return out


def _canon_payload(s: _Schema, v, path, depth=0):
    """Numbers become exact and canonical; containers are kept."""
    if depth > 8:
        s.fail(path, "payload nested too deeply")
    if isinstance(v, list):
        return [_canon_payload(s, x, path + (i,), depth + 1) for i, x in enumerate(s.array(v, path, 256))]
    if isinstance(v, dict):
        s.obj(v, path, ("base",), ("coords", "tail_start"))
        out = {"base": _canon_payload(s, v["base"], path + ("base",), depth + 1)}
        coords = v.get("coords", {})
        if not isinstance(coords, dict):
            s.fail(path + ("coords",), "tail coordinates must be an object of label: value")
        cs = {}
        for k, x in coords.items():
            try:
                int(k)
            except ValueError:
                s.fail(path + ("coords", k), "coordinate labels are integers")
            cs[str(int(k))] = _canon_payload(s, x, path + ("coords", k), depth + 1)
        out["coords"] = dict(sorted(cs.items(), key=lambda kv: int(kv[0])))
        if "tail_start" in v:
            out["tail_start"] = s.integer(v["tail_start"], path + ("tail_start",), -10 ** 6, 10 ** 6)
        return out
    return _num_json(s.number(v, path))


def _to_raw(v):
    if isinstance(v, list):
        return [_to_raw(x) for x in v]
    if isinstance(v, dict):
        out = {"base": _to_raw(v["base"]), "coords": {int(k): _to_raw(x) for k, x in v["coords"].items()}}
        if "tail_start" in v:
            out["tail_start"] = v["tail_start"]
        return out
    return Fraction(v)


def _cone_value(a: dict):
    b = load_fixture(a["fixture"])
    g0 = b.totalk.group(0, 0)
    if g0 is None:
        raise SemanticError(a["fixture"], "integral K_0 is not specified")
    x = element(g0, _to_raw(a["element"]))
    if "u" not in a:
        return b, x
    if b.total_cone is None:
        raise SemanticError(a["fixture"], "no total positive cone is defined")
    u = element(b.totalk.group(1, 0), _to_raw(a["u"]))
    ss = {int(n): (element(b.totalk.group(0, int(n)), _to_raw(p[0])),
                   element(b.totalk.group(1, int(n)), _to_raw(p[1]))) for n, p in a["s"].items()}
    return b, TotalTuple(x, u, ss)


def parse_input(data) -> InputDocument:
    """Parse and validate a document; raises ParseError or SemanticError only."""
    if isinstance(data, (bytes, bytearray)):
        try:
            text = bytes(data).decode("utf-8")
        except UnicodeDecodeError as exc:
            line, col = _position(bytes(data)[:exc.start].decode("utf-8", "replace"), exc.start)
            raise ParseError(line, col, "input is not valid UTF-8") from None
    else:
        text = str(data)
    try:
        raw = json.loads(text, parse_constant=_reject_constant, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.lineno, exc.colno, exc.msg) from None
    except _Rejected as exc:
        raise ParseError(*_locate(text, ()), str(exc)) from None
    except RecursionError:
        raise ParseError(1, 1, "document nested too deeply") from None
    try:
        return _build(text, raw)
    except RecursionError:
        raise ParseError(1, 1, "document nested too deeply") from None
    except KTotalError as exc:
        raise SemanticError("document", f"{type(exc).__name__}: {exc}") from None


class _Rejected(ValueError):
    pass


def _reject_constant(name):
    raise _Rejected(f"{name} is not an exact number")


def _reject_float(text):
    raise _Rejected(f"{text} is not exact; write integers or strings 'p/q'")


def _build(text: str, raw) -> InputDocument:
    s = _Schema(text)
    s.obj(raw, (), ("version",), ("groups", "homs", "assertions"))
    version = s.integer(raw["version"], ("version",))
    if version != DOCUMENT_VERSION:
        s.fail(("version",), f"unsupported version {version}; expected {DOCUMENT_VERSION}")
    b = _Builder(text, raw)
    groups_raw = s.obj(raw.get("groups", {}), ("groups",), (), tuple(raw.get("groups", {}))
                       if isinstance(raw.get("groups", {}), dict) else ())
    for name in groups_raw:
        g, c = b.group_literal(groups_raw[name], ("groups", name), name)
        b.groups[name], b.canon_groups[name] = g, c
    homs_raw = s.obj(raw.get("homs", {}), ("homs",), (), tuple(raw.get("homs", {}))
                     if isinstance(raw.get("homs", {}), dict) else ())
    for name in homs_raw:
        b.hom(name, ("homs", name))
    assertions = [b.assertion(a, ("assertions", i), i + 1)
                  for i, a in enumerate(s.array(raw.get("assertions", []), ("assertions",), 1000))]
    canonical = {"version": version, "groups": dict(sorted(b.canon_groups.items())),
                 "homs": dict(sorted(b.canon_homs.items())), "assertions": assertions}
    return InputDocument(version, b.groups, b.homs, assertions, canonical)


def serialize(doc: InputDocument) -> str:
    """Canonical text: sorted keys, exact numbers, two-space indentation."""
    return json.dumps(doc.canonical, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- evaluating documents

def evaluate(doc: InputDocument) -> list[VerifyReport]:
    reports = []
    for i, a in enumerate(doc.assertions, 1):
        reports.append(_evaluate_one(doc, i, a))
    return reports


def _evaluate_one(doc, i, a) -> VerifyReport:
    kind, exp = a["kind"], a["expected"]
    name = f"assertion {i} ({kind})"
    wits = []
    if kind == "square":
        h = doc.homs
        lhs, rhs = h[a["right"]] @ h[a["top"]], h[a["bottom"]] @ h[a["left"]]
        eq = homexpr_equal(lhs, rhs)
        observed = "commutes" if eq.equal else "fails"
        if not eq.equal:
            wits.append(Witness("square", format_element(eq.witness), format_element(eq.lhs),
                                format_element(eq.rhs), value=eq.witness, lhs_map=lhs, rhs_map=rhs))
        params = {k: a[k] for k in ("top", "right", "left", "bottom")}
    elif kind == "exact_at":
        v = exactness(doc.homs[a["in"]], doc.homs[a["out"]])
        observed = "exact" if v.holds else "fails"
        if v.witness is not None:
            wits.append(Witness("middle group", format_element(v.witness), "", "", v.reason, v.witness))
        params = {"in": a["in"], "out": a["out"], "mode": v.mode}
    elif kind == "lambda_linear":
        g = _graded(a["map"], a["bound"], a.get("index"))
        r = check_lambda_linear(g, a["ops"])
        observed = "commutes" if r.holds else "fails"
        for sq in r.failures()[:5]:
            wits.append(Witness(f"{sq.op} {sq.key}", format_element(sq.witness), format_element(sq.lhs),
                                format_element(sq.rhs), value=sq.witness))
        params = {"map": a["map"], "bound": a["bound"], "ops": a["ops"]}
    else:
        b, x = _cone_value(a)
        if isinstance(x, TotalTuple):
            cond = total_cone_condition(x, b.total_cone)
            observed = "positive" if cond is not None else "negative"
            params = {"fixture": a["fixture"], "cone": "TotalExtensionCone", "condition": cond}
        else:
            observed = "positive" if cone_membership(x, b.cone) else "negative"
            params = {"fixture": a["fixture"], "cone": b.cone.kind}
    return VerifyReport(name, params, (SubVerdict(kind, observed, exp),), tuple(wits))


# ---------------------------------------------------------------- reports

def emit_report(reports: list[VerifyReport], fmt: str = "text", config: dict | None = None) -> bytes:
    verdict = "pass" if all(r.passed for r in reports) else "fail"
    if fmt == "json":
        doc = {"schema": REPORT_SCHEMA, "config": dict(sorted((config or {}).items())), "verdict": verdict,
               "reports": [r.to_dict() for r in reports]}
        return (json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
    lines = []
    for r in reports:
        lines.append(f"CHECK {r.name} ... {r.verdict.upper()}")
        if r.error:
            lines.append(f"  error: {r.error}")
        for s in r.subs:
            exp = f" (expected {s.expected})" if s.expected is not None else ""
            mode = f" [{s.mode}]" if s.mode != "exact" else ""
            lines.append(f"  {s.location}: {s.observed}{exp}{mode}")
        for w in r.witnesses:
            extra = f"  ({w.detail})" if w.detail else ""
            lines.append(f"    witness {w.location}: x={w.element} lhs={w.lhs} rhs={w.rhs}{extra}")
    failed = sum(not r.passed for r in reports)
    lines.append(f"SUMMARY {len(reports)} checks, {failed} failed ... {verdict.upper()}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------- commands

class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _env_int(name: str, default: int) -> int:
    v = os.environ.get(name)
    if v is None or v == "":
        return default
    try:
        return int(v)
    except ValueError:
        raise _UsageError(f"environment variable {name}={v!r} is not an integer") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ktotal", description="Total K-theory invariants: normal forms, diagram checks, "
                                           "and the built-in verification suite.")
    sub = p.add_subparsers(dest="command", required=True)
    snf = sub.add_parser("snf", help="Smith normal form of an integer matrix")
    snf.add_argument("file")
    snf.add_argument("--format", choices=("text", "json"), default="text")
    chk = sub.add_parser("check", help="evaluate the assertions of an input document")
    chk.add_argument("file")
    chk.add_argument("--format", choices=("text", "json"), default="text")
    chk.add_argument("--canonical", action="store_true", help="print the canonical document instead")
    suite = sub.add_parser("paper", help="built-in verification suite")
    ssub = suite.add_subparsers(dest="action", required=True)
    ver = ssub.add_parser("verify", help="run verification cases")
    ver.add_argument("--case", choices=CASES + ("tables", "all"), default="all")
    ver.add_argument("--max-coeff", type=int, default=None)
    ver.add_argument("--window", type=int, default=None)
    ver.add_argument("--format", choices=("text", "json"), default="text")
    ver.add_argument("--random-instances", type=int, default=100)
    fx = sub.add_parser("fixture", help="inspect named fixtures")
    fsub = fx.add_subparsers(dest="action", required=True)
    dump = fsub.add_parser("dump", help="print a fixture as JSON")
    dump.add_argument("name")
    dump.add_argument("--max-coeff", type=int, default=None)
    return p


def _read(path: str) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc.strerror}") from None


def parse_matrix_text(data: bytes) -> list[list[int]]:
    """Whitespace separated rows, or a JSON array of rows, or a matrix literal."""
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise ParseError(1, 1, "input is not valid UTF-8") from None
    stripped = text.strip()
    if stripped.startswith(("[", "{")):
        try:
            raw = json.loads(stripped, parse_float=_reject_float, parse_constant=_reject_constant)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.lineno, exc.colno, exc.msg) from None
        except (_Rejected, RecursionError) as exc:
            raise ParseError(1, 1, str(exc) or "nested too deeply") from None
        s = _Schema(stripped)
        if isinstance(raw, dict):
            s.obj(raw, (), ("kind", "entries"))
            s.string(raw["kind"], ("kind",), ("matrix",))
            raw = raw["entries"]
        rows = [[s.integer(x, (i, j)) for j, x in enumerate(s.array(r, (i,)))] for i, r in enumerate(s.array(raw, ()))]
    else:
        rows = []
        for ln, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            row = []
            for tok in line.split():
                try:
                    row.append(int(tok))
                except ValueError:
                    raise ParseError(ln, line.find(tok) + 1, f"{tok!r} is not an integer") from None
            rows.append(row)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ParseError(1, 1, "rows have different lengths")
    return rows


def _cmd_snf(args) -> int:
    rows = parse_matrix_text(_read(args.file))
    cols = len(rows[0]) if rows else 0
    m = ab.IntMatrix.from_rows(rows, cols)
    _, s, _ = ab.smith_normal_form(m)
    diag = [s[i, i] for i in range(min(s.rows, s.cols))]
    coker = ab.cokernel_presentation(m)
    if args.format == "json":
        out = {"diagonal": diag, "rank": sum(d != 0 for d in diag),
               "cokernel": {"free_rank": coker.free_rank, "torsion": list(coker.torsion)}}
        sys.stdout.write(json.dumps(out, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(f"diagonal: {' '.join(map(str, diag)) or '(empty)'}\n")
        sys.stdout.write(f"cokernel (rows as relations): {coker}\n")
    return 0


def _cmd_check(args) -> int:
    doc = parse_input(_read(args.file))
    if args.canonical:
        sys.stdout.write(serialize(doc))
        return 0
    reports = evaluate(doc)
    sys.stdout.buffer.write(emit_report(reports, args.format, {"document_version": doc.version}))
    return 0 if all(r.passed for r in reports) else 1


def _cmd_verify(args) -> int:
    n = args.max_coeff if args.max_coeff is not None else _env_int("MAX_COEFF", DEFAULT_BOUND)
    j = args.window if args.window is not None else _env_int("WINDOW", 12)
    if not 3 <= n <= MAX_BOUND:
        raise _UsageError(f"--max-coeff must lie in [3, {MAX_BOUND}]")
    if args.case in ("de", "all") and n < 9:
        raise _UsageError("the de case needs --max-coeff of at least 9")
    if not 3 <= j <= 64:
        raise _UsageError("--window must lie in [3, 64]")
    if not 0 <= args.random_instances <= 10_000:
        raise _UsageError("--random-instances must lie in [0, 10000]")
    cfg = VerifyConfig((args.case,), n, j, args.random_instances)
    reports = run_all(cfg)
    config = {"case": args.case, "max_coeff": n, "window": j, "random_instances": args.random_instances}
    sys.stdout.buffer.write(emit_report(reports, args.format, config))
    return 0 if all(r.passed for r in reports) else 1


def fixture_summary(name: str, bound: int = DEFAULT_BOUND) -> dict:
    b = load_fixture(name, bound)
    tk = b.totalk
    groups = {f"{j},{n}": (str(tk.group(j, n)) if tk.group(j, n) is not None else None)
              for j in (0, 1) for n in levels(bound)}
    return {
        "name": b.name,
        "bound": bound,
        "groups": groups,
        "scale": None if b.scale is None else format_element(b.scale),
        "cone": b.cone.kind,
        "total_cone": None if b.total_cone is None else b.total_cone.kind,
        "maps": sorted(b.named_maps),
        "notes": list(b.notes),
    }


def _cmd_fixture(args) -> int:
    n = args.max_coeff if args.max_coeff is not None else _env_int("MAX_COEFF", DEFAULT_BOUND)
    if not 2 <= n <= MAX_BOUND:
        raise _UsageError(f"--max-coeff must lie in [2, {MAX_BOUND}]")
    sys.stdout.write(json.dumps(fixture_summary(args.name, n), sort_keys=True, indent=2) + "\n")
    return 0


def dispatch(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "snf":
            return _cmd_snf(args)
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "paper":
            return _cmd_verify(args)
        return _cmd_fixture(args)
    except _UsageError as exc:
        sys.stderr.write(f"ktotal: error: {exc}\n")
        return 2
    except ParseError as exc:
        sys.stderr.write(f"ktotal: parse error at line {exc.line}, column {exc.column}: {exc.message}\n")
        return 2
    except SemanticError as exc:
        sys.stderr.write(f"ktotal: error in {exc.name}: {exc.message}\n")
        return 2
    except KTotalError as exc:
        sys.stderr.write(f"ktotal: error: {type(exc).__name__}: {exc}\n")
        return 2


def main() -> None:
    sys.exit(dispatch())
