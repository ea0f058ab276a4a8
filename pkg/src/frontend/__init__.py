# src/frontend package
from .parser import parse_expression, parse_program
from .printer import print_canonical
from .session import Session, check_program, run_program
