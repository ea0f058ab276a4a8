"""
Session d'évaluation du langage .pj : carte active, liaisons et exécution
des instructions dans l'ordre du fichier.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from functools import reduce
from typing import Callable, Dict, List, Optional, Tuple

from ..errors import EvaluationError, FrontendError, PJError
from ..exterior import DiffForm, Multivector, SkewTensor, wedge
from ..homogeneity import HomogeneousSetup
from ..jacobi import FirstOrderOp, FormPair, op_wedge, pair_wedge
from ..ring import Chart, Scalar
from .base import CommandResult
from .parser import (RESERVED, Absent, Assign, ChartDecl, CommandCall, ExprStmt, KeyArg, Name, Num,
                     OnStmt, PairLit, Power, Product, Statement, Sum, TypedZero, Vec, parse_program)
from .printer import print_canonical

logger = logging.getLogger(__name__)


def lower(value):
    """Un tenseur de degré 0 est lu comme un scalaire."""
    if isinstance(value, SkewTensor) and value.degree == 0:
        return value.as_scalar()
    return value


class Session:
    """État d'une exécution : une seule carte par session, chaque nom lié une seule fois."""

    def __init__(self):
        self.chart: Optional[Chart] = None
        self.chart_name: Optional[str] = None
        self.setup: Optional[HomogeneousSetup] = None
        self.target = "chart"
        self.bindings: Dict[str, object] = {}
        self.current: Optional[Statement] = None

    # --- Carte et liaisons ---

    @property
    def active_chart(self) -> Chart:
        if self.chart is None:
            raise EvaluationError("Aucune carte déclarée (utiliser `chart M(x, y, ...)`)")
        if self.target == "slice":
            return self.chart.slice_chart()
        return self.chart

    def require_setup(self) -> HomogeneousSetup:
        if self.setup is None:
            raise EvaluationError("Cette commande exige une carte déclarée avec `homog t`")
        return self.setup

    def declare_chart(self, name: str, variables, homogeneity: Optional[str] = None) -> Chart:
        if self.chart is not None:
            raise EvaluationError(f"Une carte est déjà déclarée dans cette session ({self.chart_name})")
        for variable in (name, *variables):
            if variable in RESERVED:
                raise EvaluationError(f"'{variable}' est un mot réservé")
        self.chart = Chart(tuple(variables), homogeneity)
        self.chart_name = name
        self.setup = HomogeneousSetup.product(self.chart) if homogeneity else None
        self.target = "chart"
        self.bind(name, self.chart)
        logger.debug("Carte %s déclarée : %s", name, self.chart)
        return self.chart

    def bind(self, name: str, value) -> None:
        if name in RESERVED:
            raise EvaluationError(f"'{name}' est un mot réservé")
        if name in self.bindings:
            raise EvaluationError(f"'{name}' est déjà lié dans cette session")
        if self.chart is not None and (name in self.chart.variables or self._is_covector_name(name)):
            raise EvaluationError(f"'{name}' désigne une coordonnée de la carte")
        self.bindings[name] = value

    def _is_covector_name(self, name: str) -> bool:
        return name.startswith("d") and name[1:] in self.chart.variables

    def lookup(self, name: str):
        if self.chart is not None:
            chart = self.active_chart
            if name in chart.variables:
                return Scalar.variable(chart, name)
            if name.startswith("d") and name[1:] in chart.variables:
                return DiffForm.basis(chart, name[1:])
        if name in self.bindings:
            return self.bindings[name]
        raise EvaluationError(f"Nom non défini : '{name}'", token=name)

    # --- Expressions ---

    def evaluate(self, expr):
        if isinstance(expr, Num):
            return Scalar.constant(self.active_chart, expr.value)
        if isinstance(expr, Name):
            return self.lookup(expr.name)
        if isinstance(expr, Vec):
            return Multivector.basis(self.active_chart, expr.name)
        if isinstance(expr, TypedZero):
            cls = Multivector if expr.kind == "multivector" else DiffForm
            return cls.zero(self.active_chart, expr.degree)
        if isinstance(expr, Absent):
            raise EvaluationError("Composante absente `_` hors d'une paire")
        if isinstance(expr, PairLit):
            return self._evaluate_pair(expr)
        if isinstance(expr, Power):
            return self._power(self.evaluate(expr.base), expr.exponent)
        if isinstance(expr, Product):
            return reduce(self.multiply, (self.evaluate(f) for f in expr.factors))
        if isinstance(expr, Sum):
            total = None
            for sign, term in expr.terms:
                value = self.evaluate(term)
                if sign == "-":
                    if not isinstance(value, (Scalar, SkewTensor, FirstOrderOp, FormPair)):
                        raise EvaluationError(f"Impossible de prendre l'opposé de {_kind(value)}")
                    value = -value
                total = value if total is None else self.add(total, value)
            return total
        raise EvaluationError(f"Expression non reconnue : {expr!r}")

    def _power(self, base, exponent: int):
        base = lower(base)
        if isinstance(base, Scalar):
            return base ** exponent
        if exponent < 1:
            raise EvaluationError("Seuls les scalaires admettent un exposant nul ou négatif")
        return reduce(self.multiply, [base] * exponent)

    def multiply(self, a, b):
        a, b = lower(a), lower(b)
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a * b
        if isinstance(a, Scalar):
            return b * a
        if isinstance(b, Scalar):
            return a * b
        if isinstance(a, SkewTensor) and type(a) is type(b):
            return wedge(a, b)
        if isinstance(a, (FirstOrderOp, Multivector)) and isinstance(b, (FirstOrderOp, Multivector)):
            return op_wedge(to_op(a), to_op(b))
        if isinstance(a, (FormPair, DiffForm)) and isinstance(b, (FormPair, DiffForm)):
            return pair_wedge(to_form_pair(a), to_form_pair(b))
        raise EvaluationError(f"Produit impossible entre {_kind(a)} et {_kind(b)}")

    def add(self, a, b):
        a, b = lower(a), lower(b)
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a + b
        if isinstance(a, SkewTensor) and type(a) is type(b):
            return a + b
        if isinstance(a, FirstOrderOp) or isinstance(b, FirstOrderOp):
            return to_op(a) + to_op(b)
        if isinstance(a, FormPair) or isinstance(b, FormPair):
            return to_form_pair(a) + to_form_pair(b)
        raise EvaluationError(f"Somme impossible entre {_kind(a)} et {_kind(b)}")

    def _evaluate_pair(self, expr: PairLit):
        first = lower(self.evaluate(expr.first))
        second = None if isinstance(expr.second, Absent) else lower(self.evaluate(expr.second))
        kind = _pair_kind(first, second, expr.second)
        tensor_cls = Multivector if kind == "multivector" else DiffForm
        pair_cls = FirstOrderOp if kind == "multivector" else FormPair

        if isinstance(first, Scalar):
            if second is None:
                first = tensor_cls.from_scalar(first)
            else:
                if not first.is_zero():
                    raise EvaluationError("Une paire de degré ≥ 1 exige une première composante tensorielle")
                degree = second.degree + 1 if isinstance(second, SkewTensor) else 1
                first = tensor_cls.zero(first.chart, degree)
        if isinstance(second, Scalar):
            second = tensor_cls.from_scalar(second)
        if not isinstance(first, tensor_cls) or (second is not None and not isinstance(second, tensor_cls)):
            raise EvaluationError("Les composantes d'une paire doivent être de même nature")
        return pair_cls(first.degree, first, second)

    # --- Instructions ---

    def execute(self, statement: Statement) -> CommandResult:
        """Exécute une instruction ; toute PJError est relocalisée sur l'instruction."""
        self.current = statement
        try:
            return self._execute(statement.node)
        except FrontendError as exc:
            if exc.line is not None:
                raise
            message = str(exc)
            raise type(exc)(message, statement.line, statement.column, exc.token) from exc
        except PJError as exc:
            raise EvaluationError(str(exc), statement.line, statement.column) from exc
        finally:
            self.current = None

    def _execute(self, node) -> CommandResult:
        if isinstance(node, ChartDecl):
            chart = self.declare_chart(node.name, node.variables, node.homogeneity)
            return CommandResult(chart)
        if isinstance(node, OnStmt):
            if node.target == "slice":
                self.require_setup()
            self.target = node.target
            return CommandResult()
        if isinstance(node, Assign):
            if isinstance(node.value, CommandCall):
                result = self.run_command(node.value)
                self.bind(node.name, result.value)
                return CommandResult(result.value, [], result.status, result.notes)
            self.bind(node.name, self.evaluate(node.value))
            return CommandResult(self.bindings[node.name])
        if isinstance(node, CommandCall):
            return self.run_command(node)
        if isinstance(node, ExprStmt):
            value = self.evaluate(node.value)
            return CommandResult(value, [print_canonical(value)])
        raise EvaluationError(f"Instruction non reconnue : {node!r}")

    def evaluate_arguments(self, call: CommandCall) -> Tuple[List[object], Dict[str, object]]:
        args, options = [], {}
        for arg in call.args:
            if isinstance(arg, KeyArg):
                options[arg.name] = self.evaluate(arg.value)
            else:
                args.append(self.evaluate(arg))
        return args, options

    def run_command(self, call: CommandCall) -> CommandResult:
        from .commands import find_command

        command = find_command(call.keyword, call.check_kind)
        args, options = self.evaluate_arguments(call)
        logger.debug("Commande %s (%d arguments)", call.keyword, len(args))
        return command.run(self, args, options)

    @property
    def label(self) -> str:
        return self.current.text if self.current is not None else ""


def run_program(text: str, session: Optional[Session] = None,
                emit: Optional[Callable[[str], None]] = None) -> Tuple[List[str], int]:
    """
    Exécute un programme complet et retourne (lignes de sortie, code de sortie).
    Une erreur hors `check` interrompt l'exécution ; `emit` reçoit chaque ligne dès qu'elle est produite.
    """
    session = session or Session()
    lines: List[str] = []
    status = 0
    for statement in parse_program(text).statements:
        result = session.execute(statement)
        lines.extend(result.output)
        if emit is not None:
            for line in result.output:
                emit(line)
        status = max(status, result.status)
    return lines, status


def evaluate_text(session: Session, text: str):
    """Évalue une expression isolée dans la session (utilisé par les tests et la REPL)."""
    from .parser import parse_expression
    return session.evaluate(parse_expression(text))


def to_op(value) -> FirstOrderOp:
    value = lower(value)
    if isinstance(value, FirstOrderOp):
        return value
    if isinstance(value, Multivector):
        return FirstOrderOp.embed(value)
    if isinstance(value, Scalar):
        return FirstOrderOp.from_function(value)
    raise EvaluationError(f"Opérateur du premier ordre attendu, reçu {_kind(value)}")


def to_form_pair(value) -> FormPair:
    value = lower(value)
    if isinstance(value, FormPair):
        return value
    if isinstance(value, DiffForm):
        return FormPair.embed(value)
    if isinstance(value, Scalar):
        return FormPair.from_function(value)
    raise EvaluationError(f"Paire de formes attendue, reçu {_kind(value)}")


def _pair_kind(first, second, second_expr) -> str:
    for part in (first, second):
        if isinstance(part, Multivector):
            return "multivector"
        if isinstance(part, DiffForm):
            return "form"
    if isinstance(second_expr, Absent):
        return second_expr.kind
    return "multivector"


def _kind(value) -> str:
    if isinstance(value, Scalar):
        return "un scalaire"
    if isinstance(value, Multivector):
        return f"un multivecteur de degré {value.degree}"
    if isinstance(value, DiffForm):
        return f"une forme de degré {value.degree}"
    if isinstance(value, FirstOrderOp):
        return f"un opérateur de degré {value.degree}"
    if isinstance(value, FormPair):
        return f"une paire de formes de degré {value.degree}"
    return type(value).__name__


def check_program(text: str, jobs: int = 1, session: Optional[Session] = None) -> List[Tuple[str, CommandResult]]:
    """
    Mode `check` : les liaisons sont évaluées dans l'ordre, seules les commandes
    `check` produisent un résultat. Avec jobs > 1 elles tournent dans un pool de threads ;
    les résultats restent dans l'ordre du fichier.
    """
    from .commands import find_command

    session = session or Session()
    pending = []
    for statement in parse_program(text).statements:
        node = statement.node
        if not (isinstance(node, CommandCall) and node.keyword == "check"):
            if isinstance(node, (ExprStmt, CommandCall)):
                continue
            session.execute(statement)
            continue
        command = find_command(node.keyword, node.check_kind)
        try:
            args, options = session.evaluate_arguments(node)
        except PJError as exc:
            pending.append((statement.text, CommandResult(None, [f"{statement.text}: error: {exc}"], 2)))
            continue
        pending.append((command, args, options, statement.text))

    def _run(item):
        if len(item) == 2:
            return item
        command, args, options, label = item
        return label, command.report(session, args, options, label)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(_run, pending))
    return [_run(item) for item in pending]
