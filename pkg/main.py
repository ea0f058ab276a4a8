"""
pjcalc - Calcul de Schouten et réduction Poisson-Jacobi
Interface en ligne de commande : exécution de scripts .pj, vérification des
structures, boucle interactive et vérification aléatoire des identités.
"""

import argparse
import logging
import sys
from pathlib import Path

import src.analysis as analysis
from src.config import Settings
from src.errors import PJError
from src.frontend import Session, check_program, run_program
from src.frontend.parser import parse_statement

logger = logging.getLogger("pjcalc")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise PJError(f"Lecture impossible de {path} : {exc}")


def cmd_run(args, settings: Settings) -> int:
    _, status = run_program(_read(args.file), emit=print)
    return status


def cmd_check(args, settings: Settings) -> int:
    results = check_program(_read(args.file), jobs=args.jobs)
    reports = []
    for label, result in results:
        for line in result.output:
            print(line)
        status = {0: analysis.PASS, 1: analysis.FAIL}.get(result.status, analysis.ERROR)
        details = " ; ".join(line.strip() for line in result.lines[1:])
        reports.append(analysis.CheckReport(label, status, witness=details))
    if args.report:
        analysis.reports_to_frame(reports).to_csv(args.report, index=False)
        logger.info("Rapport écrit dans %s", args.report)
    return analysis.aggregate_status(reports)


def cmd_repl(args, settings: Settings) -> int:
    session = Session()
    status = 0
    print("pjcalc - une instruction par ligne, Ctrl-D pour quitter")
    line_no = 0
    while True:
        try:
            text = input("pj> ")
        except EOFError:
            print()
            return status
        line_no += 1
        text = text.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            result = session.execute(parse_statement(text, line_no))
        except PJError as exc:
            print(f"Erreur : {exc}", file=sys.stderr)
            status = 2
            continue
        for line in result.output:
            print(line)
        status = max(status, result.status)


def cmd_selftest(args, settings: Settings) -> int:
    reports = analysis.run_identity_suite(settings, args.only or None)
    for report in reports:
        suffix = f" ({report.witness or report.detail})" if not report.passed else ""
        print(f"{report.name}: {report.status} [{report.samples} échantillons]{suffix}")
    if args.report:
        analysis.reports_to_frame(reports).to_csv(args.report, index=False)
    return analysis.aggregate_status(reports)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pjcalc", description="Calcul de Schouten et réduction Poisson-Jacobi")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v : INFO, -vv : DEBUG")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Exécuter un script .pj")
    run.add_argument("file")
    run.set_defaults(handler=cmd_run)

    check = sub.add_parser("check", help="Exécuter uniquement les commandes check d'un script .pj")
    check.add_argument("file")
    check.add_argument("--jobs", type=int, default=1, help="Vérifications en parallèle")
    check.add_argument("--report", help="Export CSV du résumé")
    check.set_defaults(handler=cmd_check)

    repl = sub.add_parser("repl", help="Session interactive")
    repl.set_defaults(handler=cmd_repl)

    selftest = sub.add_parser("selftest", help="Vérification aléatoire des identités")
    selftest.add_argument("--max-degree", type=int)
    selftest.add_argument("--samples", type=int)
    selftest.add_argument("--seed", type=int)
    selftest.add_argument("--only", action="append", help="Limiter à une identité (répétable)")
    selftest.add_argument("--report", help="Export CSV du résumé")
    selftest.set_defaults(handler=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    level = {0: None, 1: "INFO"}.get(args.verbose, "DEBUG")
    try:
        settings = Settings.from_env().override(
            seed=getattr(args, "seed", None),
            max_degree=getattr(args, "max_degree", None),
            samples=getattr(args, "samples", None),
            log_level=level,
        )
    except ValueError as exc:
        print(f"Erreur : {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=settings.log_level, format="%(levelname)s %(name)s: %(message)s")

    try:
        return args.handler(args, settings)
    except PJError as exc:
        print(f"Erreur : {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
