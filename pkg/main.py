# Word Equations with Rational Constraints
# main.py (Command Line Interface)

import argparse
import logging
import sys

import pandas as pd

# Import our modules (separate .py files under src/)
from config.config import Config
from src.certificate import verify_certificate_file, write_certificate
from src.equation import render_solution
from src.errors import CertificateError, ContractError, ParseError, ResourceLimitError
from src.factorization import critical_words, l_factorize
from src.solver import FALSE, ORACLE, SEARCH, TRUE, SearchConfig, solve_group_formula, solve_system
from src.text_formats import read_equation_file, read_formula
from src.words import CONSTANT, InvAlphabet

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_RESOURCE = 2

VERDICTS = {TRUE: 'TRUE', FALSE: 'FALSE'}
UNKNOWN_LINE = 'UNKNOWN (false-within-budget)'


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='wordsat',
                                     description='Satisfiability of equations with rational constraints '
                                                 'in free groups and free monoids with involution')
    parser.add_argument('--max-var-length', type=int, default=Config.MAX_VAR_LENGTH)
    parser.add_argument('--expansion-cap', type=int, default=Config.EXPANSION_CAP)
    parser.add_argument('--reachable-budget', type=int, default=Config.REACHABLE_BUDGET)
    parser.add_argument('--branch-budget', type=int, default=Config.BRANCH_BUDGET)
    parser.add_argument('--max-depth', type=int, default=Config.MAX_SEARCH_DEPTH)
    parser.add_argument('--no-dedup', action='store_true', help='disable the visited set of the search')
    parser.add_argument('--rho-mode', choices=('residual', 'guessed'), default='residual')
    parser.add_argument('--log-level', default='WARNING', choices=('DEBUG', 'INFO', 'WARNING', 'ERROR'))

    commands = parser.add_subparsers(dest='command', required=True)

    group = commands.add_parser('solve-group', help='decide an existential formula over a free group')
    group.add_argument('formula_file')
    group.add_argument('--certificate', metavar='PATH')

    equation = commands.add_parser('solve-equation', help='solve an equation file by search over moves')
    equation.add_argument('equation_file')
    equation.add_argument('--certificate', metavar='PATH')

    oracle = commands.add_parser('oracle', help='bounded brute force on an equation file')
    oracle.add_argument('equation_file')
    oracle.add_argument('--maxlen', type=int, required=True)

    verify = commands.add_parser('verify', help='replay a certificate file')
    verify.add_argument('certificate_file')

    factorize = commands.add_parser('factorize', help='show the l-factorization of a word')
    factorize.add_argument('word', help="letters separated by spaces, a trailing ' bars a letter")
    factorize.add_argument('--ell', type=int, required=True)
    factorize.add_argument('--cuts', type=int, nargs='*', help='cut positions; every position when omitted')
    return parser


def search_config(args, strategy: str) -> SearchConfig:
    return SearchConfig(max_var_length=args.max_var_length, expansion_cap=args.expansion_cap,
                        reachable_budget=args.reachable_budget, branch_budget=args.branch_budget,
                        max_depth=args.max_depth, dedup=not args.no_dedup, rho_mode=args.rho_mode,
                        strategy=strategy)


def print_verdict(status: str, alphabet, solution, trace=()):
    print(VERDICTS.get(status, UNKNOWN_LINE))
    for step in trace:
        print(f"# {step}")
    if solution:
        for name, word in render_solution(alphabet, solution).items():
            print(f"{name} = {word}")


def save_certificate(certificate, filename):
    if filename is None:
        return
    if certificate is None:
        logging.getLogger(__name__).warning("No certificate available; nothing written")
        return
    write_certificate(certificate, filename)
    print(f"certificate written to {filename}")


def run_solve_group(args) -> int:
    formula = read_formula(args.formula_file)
    verdict = solve_group_formula(formula, search_config(args, ORACLE))
    print_verdict(verdict.status, formula.alphabet, verdict.assignment, verdict.branch_trace)
    if verdict.status == TRUE:
        save_certificate(verdict.certificate, args.certificate)
        return EXIT_TRUE
    return EXIT_FALSE


def run_solve_system(args, strategy: str) -> int:
    system = read_equation_file(args.equation_file)
    result = solve_system(system, search_config(args, strategy))
    print_verdict(result.status, system.alphabet, result.solution, result.trace)
    if result.status == TRUE:
        save_certificate(result.certificate, getattr(args, 'certificate', None))
        return EXIT_TRUE
    return EXIT_FALSE


def run_verify(args) -> int:
    try:
        path, sigma = verify_certificate_file(args.certificate_file, args.expansion_cap)
    except CertificateError as exc:
        print(f"REJECTED: {exc}")
        return EXIT_FALSE
    print(f"VERIFIED ({len(path.arcs)} arcs)")
    print_verdict(TRUE, path.source.alphabet, sigma)
    return EXIT_TRUE


def factorization_table(alphabet: InvAlphabet, word, level: int, cuts) -> pd.DataFrame:
    critical = critical_words(word, level, cuts, alphabet)
    lf = l_factorize(word, level, critical)
    rows = []
    for i, block in enumerate(lf.blocks):
        part = 'head' if i == 0 else 'tail' if i == lf.k - 1 else 'body'
        rows.append({'start': lf.starts[i], 'part': part,
                     'u': alphabet.render_word(block.u), 'w': alphabet.render_word(block.w),
                     'v': alphabet.render_word(block.v)})
    return pd.DataFrame(rows)


def run_factorize(args) -> int:
    alphabet = InvAlphabet()
    for token in args.word.split():
        name = token.rstrip("'")
        if not alphabet.has_name(name):
            alphabet.add_pair(name, CONSTANT)
    word = alphabet.parse_word(args.word)
    cuts = range(len(word) + 1) if args.cuts is None else args.cuts
    table = factorization_table(alphabet, word, args.ell, cuts)
    print(table.to_string(index=False))
    return EXIT_TRUE


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format='%(asctime)s %(name)s %(levelname)s %(message)s')
    try:
        if args.command == 'solve-group':
            return run_solve_group(args)
        if args.command == 'solve-equation':
            return run_solve_system(args, SEARCH)
        if args.command == 'oracle':
            args.max_var_length = args.maxlen
            return run_solve_system(args, ORACLE)
        if args.command == 'verify':
            return run_verify(args)
        return run_factorize(args)
    except ResourceLimitError as exc:
        print(f"RESOURCE LIMIT: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (ParseError, ContractError, OSError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_FALSE


if __name__ == '__main__':
    sys.exit(main())
