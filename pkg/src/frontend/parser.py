"""
Grammaire du langage .pj (pyparsing) et arbre syntaxique.

Un programme est une suite d'instructions séparées par un retour à la ligne ou `;`,
les commentaires commencent par `#`. Chaque instruction est analysée séparément
pour que les erreurs gardent leur ligne et leur colonne dans le fichier.
"""

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple, Union

import pyparsing as pp

from ..errors import ParseError

pp.ParserElement.enable_packrat()

COMMANDS = (
    "snbracket", "sjbracket", "d1", "d", "lie", "wedge", "pair", "degree-brackets", "degree",
    "decompose", "JN", "J", "poissonize", "psiN", "psi", "check", "invert-symplectic",
    "contact-reduce", "hamiltonian", "eval", "bracket", "contract", "restrict", "unpsiN",
    "symplectize", "reeb",
)
CHECK_KINDS = ("poisson", "jacobi", "nambu", "contact")
RESERVED = frozenset(COMMANDS) | {"chart", "homog", "on", "slice", "deg", "form"}


# --- Arbre syntaxique ---

@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Name:
    name: str


@dataclass(frozen=True)
class Vec:
    name: str


@dataclass(frozen=True)
class TypedZero:
    kind: str
    degree: int


@dataclass(frozen=True)
class Absent:
    kind: str


@dataclass(frozen=True)
class PairLit:
    first: "Expr"
    second: "Expr"


@dataclass(frozen=True)
class Power:
    base: "Expr"
    exponent: int


@dataclass(frozen=True)
class Product:
    factors: Tuple["Expr", ...]


@dataclass(frozen=True)
class Sum:
    terms: Tuple[Tuple[str, "Expr"], ...]


Expr = Union[Num, Name, Vec, TypedZero, Absent, PairLit, Power, Product, Sum]


@dataclass(frozen=True)
class KeyArg:
    name: str
    value: Expr


@dataclass
class ChartDecl:
    name: str
    variables: Tuple[str, ...]
    homogeneity: Optional[str] = None


@dataclass
class OnStmt:
    target: str


@dataclass
class CommandCall:
    keyword: str
    args: Tuple[Union[Expr, KeyArg], ...]
    check_kind: Optional[str] = None


@dataclass
class Assign:
    name: str
    value: Union[Expr, CommandCall]


@dataclass
class ExprStmt:
    value: Expr


@dataclass
class Statement:
    node: Union[ChartDecl, OnStmt, CommandCall, Assign, ExprStmt]
    line: int
    column: int
    text: str


@dataclass
class Program:
    statements: List[Statement] = field(default_factory=list)


# --- Grammaire ---

def _build_grammar():
    lpar, rpar, comma, colon = map(pp.Suppress, "(),:")
    ident = pp.Regex(r"[A-Za-z][A-Za-z0-9_]*")
    rational = pp.Regex(r"\d+(?:/\d+)?").set_parse_action(lambda t: Num(Fraction(t[0])))
    exponent = pp.Regex(r"-?\d+")
    integer = pp.Regex(r"\d+")

    expr = pp.Forward()

    typed_zero = (pp.Literal("0") + colon + pp.one_of("deg form") + integer).set_parse_action(
        lambda t: TypedZero("multivector" if t[1] == "deg" else "form", int(t[2])))
    absent = (pp.Literal("_") + pp.Optional(colon + pp.Literal("form"))).set_parse_action(
        lambda t: Absent("form" if len(t) > 1 else "multivector"))
    vector = pp.Regex(r"@[A-Za-z][A-Za-z0-9_]*").set_parse_action(lambda t: Vec(t[0][1:]))
    name = ident.copy().set_parse_action(lambda t: Name(t[0]))
    pair = (lpar + expr + comma + (absent | expr) + rpar).set_parse_action(lambda t: PairLit(t[0], t[1]))
    group = lpar + expr + rpar
    atom = typed_zero | rational | vector | pair | group | name

    power = (atom + pp.Optional(pp.Suppress("^") + exponent)).set_parse_action(
        lambda t: Power(t[0], int(t[1])) if len(t) > 1 else t[0])
    term = (power + pp.ZeroOrMore(pp.Optional(pp.Suppress(pp.one_of("* ^"))) + power)).set_parse_action(
        lambda t: Product(tuple(t)) if len(t) > 1 else t[0])
    signed = pp.Optional(pp.one_of("+ -"), default="+") + term
    expr <<= (signed + pp.ZeroOrMore(pp.one_of("+ -") + term)).set_parse_action(
        lambda t: Sum(tuple((t[i], t[i + 1]) for i in range(0, len(t), 2))))

    keyword_pattern = "|".join(re.escape(k) for k in sorted(COMMANDS, key=len, reverse=True))
    command_kw = pp.Regex(rf"(?:{keyword_pattern})(?![A-Za-z0-9_\-])")
    key_value = pp.Optional(pp.one_of("+ -"), default="+") + power
    key_arg = (ident + pp.Suppress("=") + key_value).set_parse_action(
        lambda t: KeyArg(t[0], Sum(((t[1], t[2]),))))
    arg = key_arg | power
    check_call = (pp.Keyword("check") + pp.one_of(" ".join(CHECK_KINDS)) + pp.Group(pp.ZeroOrMore(arg))
                  ).set_parse_action(lambda t: CommandCall("check", tuple(t[2]), t[1]))
    plain_call = (command_kw + pp.Group(pp.ZeroOrMore(arg))).set_parse_action(
        lambda t: CommandCall(t[0], tuple(t[1])))
    command_call = check_call | plain_call

    chart_decl = (pp.Keyword("chart") + ident + lpar + pp.Group(ident + pp.ZeroOrMore(comma + ident)) + rpar
                  + pp.Optional(pp.Suppress(pp.Keyword("homog")) + ident)).set_parse_action(
        lambda t: ChartDecl(t[1], tuple(t[2]), t[3] if len(t) > 3 else None))
    on_stmt = (pp.Suppress(pp.Keyword("on")) + pp.one_of("slice chart")).set_parse_action(lambda t: OnStmt(t[0]))
    assignment = (ident + pp.Suppress("=") + (command_call | expr)).set_parse_action(lambda t: Assign(t[0], t[1]))
    expr_stmt = expr.copy().set_parse_action(lambda t: ExprStmt(t[0]))

    statement = chart_decl | on_stmt | command_call | assignment | expr_stmt
    return statement, expr


STATEMENT, EXPRESSION = _build_grammar()


def split_statements(text: str) -> List[Tuple[int, int, str]]:
    """(ligne, colonne, texte) de chaque instruction non vide, commentaires retirés."""
    pieces = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        offset = 0
        for chunk in line.split(";"):
            stripped = chunk.strip()
            if stripped:
                column = offset + len(chunk) - len(chunk.lstrip()) + 1
                pieces.append((line_no, column, stripped))
            offset += len(chunk) + 1
    return pieces


def _token_at(text: str, loc: int) -> str:
    match = re.match(r"\S+", text[loc:])
    return match.group(0) if match else "fin de ligne"


def parse_statement(text: str, line: int = 1, column: int = 1) -> Statement:
    try:
        node = STATEMENT.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise ParseError("Erreur de syntaxe", line, column + exc.loc, _token_at(text, exc.loc))
    return Statement(node, line, column, text)


def parse_program(text: str) -> Program:
    """Analyse un texte .pj complet ; la première erreur de syntaxe est levée avec sa position."""
    return Program([parse_statement(chunk, line, column) for line, column, chunk in split_statements(text)])


def parse_expression(text: str) -> Expr:
    try:
        return EXPRESSION.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as exc:
        raise ParseError("Expression invalide", 1, exc.loc + 1, _token_at(text, exc.loc))
