"""Action-based branching-time formulas and their fixpoint evaluation on an Lts.

Formulas are written in a small prefix syntax, one per line::

    P1: deadlock_free
    reach: (EF (dia "PACON !0 !WON" true))

Action predicates are ``any``, a quoted label (``*`` and ``?`` make it an
anchored glob), ``(not A)``, ``(or A ...)`` and ``(and A ...)``.
"""

import logging
import re
from collections import deque
from dataclasses import dataclass
from fnmatch import fnmatchcase
from pathlib import Path
from typing import Dict, FrozenSet, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict

from src.errors import FormulaSyntaxError
from src.model.lts import Lts

logger = logging.getLogger(__name__)

PROPERTIES_FILE = Path(__file__).with_name("properties.txt")


# Action predicates

class Action(BaseModel):
    model_config = ConfigDict(frozen=True)

    def matches(self, label: str) -> bool:
        raise NotImplementedError


class AnyAction(Action):
    def matches(self, label: str) -> bool:
        return True

    def __str__(self) -> str:
        return "any"


class LabelIs(Action):
    text: str

    def matches(self, label: str) -> bool:
        if "*" in self.text or "?" in self.text:
            return fnmatchcase(label, self.text)
        return label == self.text

    def __str__(self) -> str:
        return f'"{self.text}"'


class NotAction(Action):
    action: Action

    def matches(self, label: str) -> bool:
        return not self.action.matches(label)

    def __str__(self) -> str:
        return f"(not {self.action})"


class OrAction(Action):
    actions: Tuple[Action, ...]

    def matches(self, label: str) -> bool:
        return any(a.matches(label) for a in self.actions)

    def __str__(self) -> str:
        return "(or " + " ".join(map(str, self.actions)) + ")"


class AndAction(Action):
    actions: Tuple[Action, ...]

    def matches(self, label: str) -> bool:
        return all(a.matches(label) for a in self.actions)

    def __str__(self) -> str:
        return "(and " + " ".join(map(str, self.actions)) + ")"


# State formulas

class Formula(BaseModel):
    model_config = ConfigDict(frozen=True)


class TrueF(Formula):
    def __str__(self) -> str:
        return "true"


class FalseF(Formula):
    def __str__(self) -> str:
        return "false"


class Not(Formula):
    operand: Formula

    def __str__(self) -> str:
        return f"(not {self.operand})"


class And(Formula):
    operands: Tuple[Formula, ...]

    def __str__(self) -> str:
        return "(and " + " ".join(map(str, self.operands)) + ")"


class Or(Formula):
    operands: Tuple[Formula, ...]

    def __str__(self) -> str:
        return "(or " + " ".join(map(str, self.operands)) + ")"


class Diamond(Formula):
    action: Action
    operand: Formula

    def __str__(self) -> str:
        return f"(dia {self.action} {self.operand})"


class Box(Formula):
    action: Action
    operand: Formula

    def __str__(self) -> str:
        return f"(box {self.action} {self.operand})"


class EF(Formula):
    operand: Formula

    def __str__(self) -> str:
        return f"(EF {self.operand})"


class AG(Formula):
    operand: Formula

    def __str__(self) -> str:
        return f"(AG {self.operand})"


class AF(Formula):
    operand: Formula

    def __str__(self) -> str:
        return f"(AF {self.operand})"


class EU(Formula):
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"(EU {self.left} {self.right})"


class AU(Formula):
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"(AU {self.left} {self.right})"


class EUA(Formula):
    """Exists a path of ``left`` states joined by ``action`` steps up to a ``right`` state."""

    left: Formula
    action: Action
    right: Formula

    def __str__(self) -> str:
        return f"(EUA {self.left} {self.action} {self.right})"


class DeadlockFree(Formula):
    """Every reachable state has an outgoing transition (TERMINATED loops count)."""

    def __str__(self) -> str:
        return "deadlock_free"


def deadlock_freeness() -> Formula:
    return AG(operand=Diamond(action=AnyAction(), operand=TrueF()))


# Parsing

_TOKEN = re.compile(r'\s*(?:(\()|(\))|"((?:[^"\\]|\\.)*)"|([^\s()"]+))')


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise FormulaSyntaxError(f"unexpected character at offset {pos}: {text[pos:pos + 10]!r}")
        open_, close, quoted, atom = m.groups()
        if open_:
            tokens.append(("(", "("))
        elif close:
            tokens.append((")", ")"))
        elif quoted is not None:
            tokens.append(("str", quoted.replace('\\"', '"')))
        else:
            tokens.append(("atom", atom))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[Tuple[str, str]]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> Tuple[str, str]:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("unexpected end of formula")
        self.pos += 1
        return tok

    def expect_close(self):
        if self.take()[0] != ")":
            raise FormulaSyntaxError("expected ')'")

    def done(self):
        if self.peek() is not None:
            raise FormulaSyntaxError(f"trailing input after formula: {self.peek()[1]!r}")

    def action(self) -> Action:
        kind, value = self.take()
        if kind == "str":
            return LabelIs(text=value)
        if kind == "atom" and value == "any":
            return AnyAction()
        if kind != "(":
            raise FormulaSyntaxError(f"expected an action, got {value!r}")
        op = self.take()[1]
        if op == "not":
            inner = self.action()
            self.expect_close()
            return NotAction(action=inner)
        if op in ("or", "and"):
            items = []
            while self.peek() and self.peek()[0] != ")":
                items.append(self.action())
            self.expect_close()
            cls = OrAction if op == "or" else AndAction
            return cls(actions=tuple(items))
        raise FormulaSyntaxError(f"unknown action operator {op!r}")

    def formula(self) -> Formula:
        kind, value = self.take()
        if kind == "atom":
            atoms = {"true": TrueF, "false": FalseF, "deadlock_free": DeadlockFree}
            if value not in atoms:
                raise FormulaSyntaxError(f"unknown atom {value!r}")
            return atoms[value]()
        if kind != "(":
            raise FormulaSyntaxError(f"expected a formula, got {value!r}")
        op = self.take()[1]
        if op == "not":
            result: Formula = Not(operand=self.formula())
        elif op in ("and", "or"):
            operands = []
            while self.peek() and self.peek()[0] != ")":
                operands.append(self.formula())
            result = (And if op == "and" else Or)(operands=tuple(operands))
        elif op in ("dia", "box"):
            action = self.action()
            result = (Diamond if op == "dia" else Box)(action=action, operand=self.formula())
        elif op in ("EF", "AG", "AF"):
            result = {"EF": EF, "AG": AG, "AF": AF}[op](operand=self.formula())
        elif op in ("EU", "AU"):
            left = self.formula()
            result = (EU if op == "EU" else AU)(left=left, right=self.formula())
        elif op == "EUA":
            left = self.formula()
            action = self.action()
            result = EUA(left=left, action=action, right=self.formula())
        else:
            raise FormulaSyntaxError(f"unknown operator {op!r}")
        self.expect_close()
        return result


def parse_formula(text: str) -> Formula:
    parser = _Parser(text)
    result = parser.formula()
    parser.done()
    return result


_NAMED = re.compile(r"^([A-Za-z_][\w.-]*)\s*:\s*(.+)$")


def _strip_comment(line: str) -> str:
    quoted = False
    for i, ch in enumerate(line):
        if ch == '"' and (i == 0 or line[i - 1] != "\\"):
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
    return line


def parse_formula_file(text: str) -> List[Tuple[str, Formula]]:
    """Named formulas, one per line; unnamed lines are called ``F<line>``."""
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        named = _NAMED.match(line)
        name, body = (named.group(1), named.group(2)) if named else (f"F{lineno}", line)
        try:
            out.append((name, parse_formula(body)))
        except FormulaSyntaxError as e:
            raise FormulaSyntaxError(str(e), lineno) from e
    return out


def load_properties(path: Optional[Path] = None) -> List[Tuple[str, Formula]]:
    return parse_formula_file(Path(path or PROPERTIES_FILE).read_text(encoding="utf-8"))


# Evaluation

@dataclass
class Verdict:
    holds: bool
    trace: Optional[List[str]] = None


class _Evaluator:
    def __init__(self, lts: Lts):
        self.lts = lts
        self.all: FrozenSet[int] = frozenset(range(lts.num_states))
        self.cache: Dict[Formula, FrozenSet[int]] = {}
        self.label_cache: Dict[Action, FrozenSet[str]] = {}

    def labels(self, action: Action) -> FrozenSet[str]:
        if action not in self.label_cache:
            alphabet = self.lts.alphabet
            self.label_cache[action] = frozenset(label for label in alphabet if action.matches(label))
        return self.label_cache[action]

    def sat(self, f: Formula) -> FrozenSet[int]:
        if f not in self.cache:
            self.cache[f] = frozenset(self._sat(f))
        return self.cache[f]

    def _pre_exists(self, target: FrozenSet[int], labels: Optional[FrozenSet[str]]) -> Set[int]:
        pred = self.lts.predecessors
        return {
            src
            for t in target
            for label, src in pred[t]
            if labels is None or label in labels
        }

    def _backward(self, seeds: FrozenSet[int], through: FrozenSet[int], labels=None) -> Set[int]:
        """Least fixpoint: seeds plus ``through`` states with a matching step into the set."""
        found = set(seeds)
        queue = deque(seeds)
        pred = self.lts.predecessors
        while queue:
            t = queue.popleft()
            for label, src in pred[t]:
                if src in found or src not in through:
                    continue
                if labels is not None and label not in labels:
                    continue
                found.add(src)
                queue.append(src)
        return found

    def _forall(self, seeds: FrozenSet[int], through: FrozenSet[int]) -> Set[int]:
        """Least fixpoint: seeds plus ``through`` states all of whose successors are in the set."""
        succ = self.lts.successors
        remaining = {s: len({d for _, d in succ[s]}) for s in through if succ[s]}
        found = set(seeds)
        queue = deque(seeds)
        pred = self.lts.predecessors
        while queue:
            t = queue.popleft()
            for src in {src for _, src in pred[t]}:
                if src in found or src not in remaining:
                    continue
                remaining[src] -= 1
                if remaining[src] == 0:
                    found.add(src)
                    queue.append(src)
        return found

    def _sat(self, f: Formula):
        if isinstance(f, TrueF):
            return self.all
        if isinstance(f, FalseF):
            return ()
        if isinstance(f, Not):
            return self.all - self.sat(f.operand)
        if isinstance(f, And):
            result = self.all
            for g in f.operands:
                result = result & self.sat(g)
            return result
        if isinstance(f, Or):
            result: FrozenSet[int] = frozenset()
            for g in f.operands:
                result = result | self.sat(g)
            return result
        if isinstance(f, Diamond):
            return self._pre_exists(self.sat(f.operand), self.labels(f.action))
        if isinstance(f, Box):
            bad = self._pre_exists(self.all - self.sat(f.operand), self.labels(f.action))
            return self.all - bad
        if isinstance(f, EF):
            return self._backward(self.sat(f.operand), self.all)
        if isinstance(f, AG):
            return self.all - self._backward(self.all - self.sat(f.operand), self.all)
        if isinstance(f, EU):
            return self._backward(self.sat(f.right), self.sat(f.left))
        if isinstance(f, EUA):
            return self._backward(self.sat(f.right), self.sat(f.left), self.labels(f.action))
        if isinstance(f, AF):
            return self._forall(self.sat(f.operand), self.all)
        if isinstance(f, AU):
            return self._forall(self.sat(f.right), self.sat(f.left))
        if isinstance(f, DeadlockFree):
            return self.sat(deadlock_freeness())
        raise TypeError(f"unsupported formula {type(f).__name__}")


def _path_to(lts: Lts, goal: FrozenSet[int]) -> Optional[List[str]]:
    """Shortest label sequence from the initial state into ``goal``."""
    if lts.initial in goal:
        return []
    parent: Dict[int, Tuple[int, str]] = {}
    queue = deque([lts.initial])
    seen = {lts.initial}
    while queue:
        s = queue.popleft()
        for label, d in lts.successors[s]:
            if d in seen:
                continue
            seen.add(d)
            parent[d] = (s, label)
            if d in goal:
                trace = []
                while d != lts.initial:
                    d, label = parent[d]
                    trace.append(label)
                return trace[::-1]
            queue.append(d)
    return None


def check(lts: Lts, formula: Formula) -> Verdict:
    """Evaluate ``formula`` at the initial state.

    Top-level EF comes with a witness trace, top-level AG (deadlock freeness
    included) with a counterexample trace.
    """
    ev = _Evaluator(lts)
    holds = lts.initial in ev.sat(formula)
    body = deadlock_freeness() if isinstance(formula, DeadlockFree) else formula
    trace = None
    if holds and isinstance(body, EF):
        trace = _path_to(lts, ev.sat(body.operand))
    elif not holds and isinstance(body, AG):
        trace = _path_to(lts, ev.all - ev.sat(body.operand))
    logger.debug("%s: %s", formula, "holds" if holds else "fails")
    return Verdict(holds, trace)
