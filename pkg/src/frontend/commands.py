"""
Commandes du langage .pj.

Chaque commande reçoit des arguments déjà évalués, les convertit vers les types
de la bibliothèque et retourne un CommandResult (valeur, lignes affichées, statut).
"""

import logging
from typing import Callable, List, Optional, Sequence, Tuple

from ..errors import DegreeError, EvaluationError, PJError, StructureError
from ..exterior import (DiffForm, Multivector, SkewTensor, bracket_of_functions, contract, eval_at_point,
                        evaluate_on_vector, exterior_derivative, lie_derivative, pairing, restrict,
                        sn_bracket, wedge)
from ..homogeneity import (decompose_along_delta, degree, degree_via_brackets, poissonize, psi, reduce_J,
                           symplectize, unpsi_N)
from ..jacobi import FirstOrderOp, FormPair, jacobi_differential, op_on_functions, sj_bracket
from ..models import ContactData
from ..ring import Point, Scalar
from ..structures import (contact_bracket, contact_condition, contact_data, contact_reduce, hamiltonian_contact,
                          hamiltonian_jacobi, hamiltonian_poisson, hamiltonian_symplectic, invert_symplectic,
                          is_jacobi, is_poisson, nambu_check, reeb_from_symplectic)
from .base import BaseCommand, CommandResult
from .printer import print_canonical
from .session import lower, to_form_pair, to_op

logger = logging.getLogger(__name__)

PASS, FAIL, ERROR = 0, 1, 2
UNBOUNDED = -1


# --- Conversions d'arguments ---

def as_scalar(value) -> Scalar:
    value = lower(value)
    if isinstance(value, FirstOrderOp) and value.degree == 0:
        return value.d0.as_scalar()
    if isinstance(value, FormPair) and value.degree == 0:
        return value.a0.as_scalar()
    if not isinstance(value, Scalar):
        raise DegreeError(f"Fonction attendue, reçu {type(value).__name__} de degré {getattr(value, 'degree', '?')}")
    return value


def as_multivector(value) -> Multivector:
    if isinstance(value, Scalar):
        return Multivector.from_scalar(value)
    if not isinstance(value, Multivector):
        raise DegreeError(f"Multivecteur attendu, reçu {type(value).__name__}")
    return value


def as_form(value) -> DiffForm:
    if isinstance(value, Scalar):
        return DiffForm.from_scalar(value)
    if not isinstance(value, DiffForm):
        raise DegreeError(f"Forme différentielle attendue, reçu {type(value).__name__}")
    return value


def as_tensor(value) -> SkewTensor:
    """Multivecteur, forme ou scalaire (lu comme multivecteur de degré 0)."""
    if isinstance(value, SkewTensor):
        return value
    return as_multivector(value)


def _arity(keyword: str, args: Sequence, low: int, high: Optional[int] = None) -> None:
    if high == UNBOUNDED:
        if len(args) < low:
            raise DegreeError(f"`{keyword}` attend au moins {low} argument(s), reçu {len(args)}")
        return
    high = low if high is None else high
    if not low <= len(args) <= high:
        expected = str(low) if low == high else f"{low} à {high}"
        raise DegreeError(f"`{keyword}` attend {expected} argument(s), reçu {len(args)}")


# --- Commandes génériques ---

class OperationCommand(BaseCommand):
    """Commande dont le résultat est une seule valeur imprimée canoniquement."""

    def __init__(self, keyword: str, operation: Callable, low: int, high: Optional[int] = None):
        self.keyword = keyword
        self.operation = operation
        self.low = low
        self.high = high

    def run(self, session, args, options) -> CommandResult:
        _arity(self.keyword, args, self.low, self.high)
        if options:
            raise DegreeError(f"`{self.keyword}` n'accepte pas d'argument nommé")
        value = self.operation(session, *args)
        return CommandResult(value, [print_canonical(value)])


class ReductionCommand(BaseCommand):
    """J, JN, psi, psiN : la valeur réduite, plus une note si l'argument n'a pas le degré attendu."""

    def __init__(self, keyword: str, on_forms: bool, restrict_to_slice: bool):
        self.keyword = keyword
        self.on_forms = on_forms
        self.restrict_to_slice = restrict_to_slice

    def run(self, session, args, options) -> CommandResult:
        _arity(self.keyword, args, 1)
        setup = session.require_setup()
        if self.on_forms:
            reduction = psi(as_form(args[0]), setup, self.restrict_to_slice)
        else:
            reduction = reduce_J(as_multivector(args[0]), setup, self.restrict_to_slice)
        notes = []
        if reduction.homogeneity_violated:
            notes.append(f"# homogeneity violated (degré {reduction.degree}, attendu {reduction.expected_degree})")
        return CommandResult(reduction.value, [print_canonical(reduction.value)], PASS, notes)


class CheckCommand(BaseCommand):
    """
    `check <nature> T` : statut 0 si la structure est valide, 1 avec témoin sinon,
    2 si l'argument n'est pas recevable. Les erreurs ne sont pas propagées.
    """
    keyword = "check"
    check_kind = ""

    def can_process(self, keyword: str, check_kind: str = None) -> bool:
        return keyword == self.keyword and check_kind == self.check_kind

    def run(self, session, args, options) -> CommandResult:
        return self.report(session, args, options, session.label or f"check {self.check_kind}")

    def report(self, session, args, options, label: str) -> CommandResult:
        """Ne modifie pas la session : plusieurs vérifications peuvent tourner en parallèle."""
        try:
            holds, details = self.certify(session, args, options)
        except PJError as exc:
            logger.info("%s : erreur %s", label, exc)
            return CommandResult(None, [f"{label}: error: {exc}"], ERROR)
        if holds:
            return CommandResult(True, [f"{label}: pass"], PASS)
        return CommandResult(False, [f"{label}: fail"] + [f"  {line}" for line in details], FAIL)

    def certify(self, session, args, options) -> Tuple[bool, List[str]]:
        raise NotImplementedError


class PoissonCheck(CheckCommand):
    check_kind = "poisson"

    def certify(self, session, args, options):
        _arity("check poisson", args, 1)
        certificate = is_poisson(args[0])
        return certificate.holds, [f"obstruction: {print_canonical(certificate.obstruction)}"]


class JacobiCheck(CheckCommand):
    check_kind = "jacobi"

    def certify(self, session, args, options):
        _arity("check jacobi", args, 1)
        certificate = is_jacobi(args[0])
        return certificate.holds, [f"obstruction: {print_canonical(certificate.obstruction)}"]


class NambuCheck(CheckCommand):
    """`check nambu T [f1 f2 ...]` : famille de test par défaut ou fournie."""
    check_kind = "nambu"

    def certify(self, session, args, options):
        if not args:
            raise DegreeError("`check nambu` attend un tenseur")
        tensor = args[0]
        if not isinstance(tensor, (Multivector, FirstOrderOp)):
            raise DegreeError("`check nambu` attend un multivecteur ou un opérateur")
        family = [as_scalar(f) for f in args[1:]] or None
        report = nambu_check(tensor, family)
        if report.passed:
            return True, []
        witness = ", ".join(print_canonical(f) for f in report.witness)
        return False, [f"witness: ({witness})"]


class ContactCheck(CheckCommand):
    """Une 1-forme : condition de contact ; une 2-forme : réduction de contact complète."""
    check_kind = "contact"

    def certify(self, session, args, options):
        _arity("check contact", args, 1)
        form = as_form(args[0])
        if form.degree == 2:
            try:
                contact_reduce(form, session.require_setup())
            except StructureError as exc:
                return False, [f"obstruction: {exc}"]
            return True, []
        if form.degree != 1:
            raise DegreeError(f"`check contact` attend une 1-forme ou une 2-forme (reçu degré {form.degree})")
        try:
            holds, volume = contact_condition(form)
        except StructureError as exc:
            return False, [f"obstruction: {exc}"]
        return holds, [f"volume: {print_canonical(volume)}"]


class EvalCommand(BaseCommand):
    """
    `eval T [X] x=... y=...` : valeur au point ; avec un champ X à coefficients
    constants et une 1-forme T, la valeur de T sur X au point.
    """
    keyword = "eval"

    def run(self, session, args, options) -> CommandResult:
        _arity("eval", args, 1, 2)
        target = lower(args[0])
        if not isinstance(target, (Scalar, SkewTensor, FirstOrderOp, FormPair)):
            raise DegreeError(f"`eval` ne s'applique pas à {type(target).__name__}")
        chart = target.chart
        point = Point.of(chart, {name: as_scalar(v).constant_value() for name, v in options.items()})
        if len(args) == 2:
            vector = as_multivector(args[1])
            if not isinstance(target, DiffForm) or target.degree != 1 or vector.degree != 1:
                raise DegreeError("`eval T X` attend une 1-forme et un champ de vecteurs")
            components = [vector.coefficient((i,)).evaluate(point) for i in range(chart.dim)]
            value = evaluate_on_vector(target, point, components)
        elif isinstance(target, Scalar):
            value = target.evaluate(point)
        elif isinstance(target, SkewTensor):
            value = eval_at_point(target, point)
        elif isinstance(target, FirstOrderOp):
            value = FirstOrderOp.join(eval_at_point(target.d0, point),
                                      None if target.d1 is None else eval_at_point(target.d1, point))
        elif isinstance(target, FormPair):
            value = FormPair.join(eval_at_point(target.a0, point),
                                  None if target.a1 is None else eval_at_point(target.a1, point))
        else:
            raise DegreeError(f"`eval` ne s'applique pas à {type(target).__name__}")
        return CommandResult(value, [print_canonical(value)])


# --- Opérations ---

def _snbracket(session, a, b):
    return sn_bracket(as_multivector(a), as_multivector(b))


def _sjbracket(session, a, b):
    return sj_bracket(to_op(a), to_op(b))


def _wedge(session, a, b):
    return session.multiply(a, b)


def _contract(session, x, target):
    return contract(as_tensor(x), as_tensor(target))


def _lie(session, x, target):
    target = lower(target)
    if isinstance(target, Scalar):
        return lie_derivative(as_multivector(x), Multivector.from_scalar(target)).as_scalar()
    return lie_derivative(as_multivector(x), target)


def _pair(session, p, alpha):
    return pairing(as_multivector(p), as_form(alpha))


def _contact_of(value) -> Optional[ContactData]:
    if isinstance(value, ContactData):
        return value
    if isinstance(value, DiffForm) and value.degree == 1:
        return contact_data(value)
    return None


def _bracket(session, structure, *functions):
    functions = [as_scalar(f) for f in functions]
    cd = _contact_of(structure)
    if cd is not None:
        _arity("bracket", functions, 2)
        return contact_bracket(cd, *functions)
    if isinstance(structure, DiffForm) and structure.degree == 2:
        return bracket_of_functions(invert_symplectic(structure), *functions)
    if isinstance(structure, FirstOrderOp):
        return op_on_functions(structure, *functions)
    return bracket_of_functions(as_multivector(structure), *functions)


def _degree(session, value, delta=None):
    return degree(lower_to_tensor(value), delta if delta is not None else session.require_setup())


def _degree_brackets(session, value, delta=None):
    if not isinstance(value, FirstOrderOp):
        value = as_multivector(value)
    return degree_via_brackets(value, delta if delta is not None else session.require_setup())


def lower_to_tensor(value):
    if isinstance(value, Scalar):
        return Multivector.from_scalar(value)
    return value


def _restrict(session, value):
    t = session.require_setup().t
    if isinstance(value, Scalar):
        return restrict(Multivector.from_scalar(value), t).as_scalar()
    if isinstance(value, FirstOrderOp):
        return FirstOrderOp.join(restrict(value.d0, t), None if value.d1 is None else restrict(value.d1, t))
    if isinstance(value, FormPair):
        return FormPair.join(restrict(value.a0, t), None if value.a1 is None else restrict(value.a1, t))
    return restrict(value, t)


def _hamiltonian(session, structure, f):
    f = as_scalar(f)
    if isinstance(structure, Multivector) and structure.degree == 2:
        return hamiltonian_poisson(structure, f)
    if isinstance(structure, DiffForm) and structure.degree == 2:
        return hamiltonian_symplectic(structure, f)
    if isinstance(structure, FirstOrderOp) and structure.degree == 2:
        return hamiltonian_jacobi(structure, f)
    cd = _contact_of(structure)
    if cd is not None:
        return hamiltonian_contact(cd, f)
    raise DegreeError("`hamiltonian` attend un bivecteur, une 2-forme, un opérateur de degré 2 ou une forme de contact")


def _reeb(session, structure):
    if isinstance(structure, DiffForm) and structure.degree == 2:
        return reeb_from_symplectic(structure, session.require_setup())
    cd = _contact_of(structure)
    if cd is None:
        raise DegreeError("`reeb` attend une forme de contact ou une 2-forme symplectique homogène")
    return cd.reeb


COMMANDS: List[BaseCommand] = [
    OperationCommand("snbracket", _snbracket, 2),
    OperationCommand("sjbracket", _sjbracket, 2),
    OperationCommand("bracket", _bracket, 1, UNBOUNDED),
    OperationCommand("d", lambda s, a: exterior_derivative(as_form(a)), 1),
    OperationCommand("d1", lambda s, a: jacobi_differential(to_form_pair(a)), 1),
    OperationCommand("lie", _lie, 2),
    OperationCommand("wedge", _wedge, 2),
    OperationCommand("contract", _contract, 2),
    OperationCommand("pair", _pair, 2),
    OperationCommand("degree", _degree, 1, 2),
    OperationCommand("degree-brackets", _degree_brackets, 1, 2),
    OperationCommand("decompose", lambda s, p: decompose_along_delta(as_multivector(p), s.require_setup()), 1),
    ReductionCommand("J", on_forms=False, restrict_to_slice=False),
    ReductionCommand("JN", on_forms=False, restrict_to_slice=True),
    ReductionCommand("psi", on_forms=True, restrict_to_slice=False),
    ReductionCommand("psiN", on_forms=True, restrict_to_slice=True),
    OperationCommand("poissonize", lambda s, d: poissonize(to_op(d), s.require_setup()), 1),
    OperationCommand("unpsiN", lambda s, p: unpsi_N(to_form_pair(p), s.require_setup()), 1),
    OperationCommand("symplectize", lambda s, eta: symplectize(as_form(eta), s.require_setup()), 1),
    OperationCommand("restrict", _restrict, 1),
    OperationCommand("invert-symplectic", lambda s, w: invert_symplectic(as_form(w)), 1),
    OperationCommand("contact-reduce", lambda s, w: contact_reduce(as_form(w), s.require_setup()), 1),
    OperationCommand("hamiltonian", _hamiltonian, 2),
    OperationCommand("reeb", _reeb, 1),
    PoissonCheck(),
    JacobiCheck(),
    NambuCheck(),
    ContactCheck(),
    EvalCommand(),
]


def find_command(keyword: str, check_kind: Optional[str] = None) -> BaseCommand:
    """Première commande acceptant ce mot-clé, comme la sélection de parseur par can_process."""
    for command in COMMANDS:
        if command.can_process(keyword, check_kind):
            return command
    raise EvaluationError(f"Commande inconnue : {keyword} {check_kind or ''}".rstrip(), token=keyword)
