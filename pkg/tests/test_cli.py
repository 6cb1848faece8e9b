# =============================================================================
# File: tests/test_cli.py (PyTest Version)
# =============================================================================
import json

import pytest

from main import EXIT_FALSE, EXIT_RESOURCE, EXIT_TRUE, factorization_table, main
from src.errors import ResourceLimitError
from src.words import InvAlphabet

PAIR = "alphabet: a b\nvariables: X\nequation: X = a b\n"


@pytest.fixture
def equation_file(tmp_path):
    """X = a b without constraints"""
    filename = tmp_path / 'pair.txt'
    filename.write_text(PAIR)
    return str(filename)


@pytest.fixture
def formula_file(tmp_path):
    filename = tmp_path / 'trivial.sexp'
    filename.write_text("(alphabet a)\n(exists (X) (eq X a a'))\n")
    return str(filename)


class TestCommands:
    """Test the wordsat subcommands"""

    def test_oracle(self, equation_file, capsys):
        assert main(['oracle', equation_file, '--maxlen', '2']) == EXIT_TRUE
        out = capsys.readouterr().out
        assert out.splitlines()[0] == 'TRUE'
        assert 'X = a b' in out

    def test_oracle_too_short(self, equation_file, capsys):
        """Test a bound below the solution length reports UNKNOWN"""
        assert main(['oracle', equation_file, '--maxlen', '1']) == EXIT_FALSE
        assert capsys.readouterr().out.startswith('UNKNOWN (false-within-budget)')

    def test_solve_group(self, formula_file, capsys):
        assert main(['solve-group', formula_file]) == EXIT_TRUE
        out = capsys.readouterr().out
        assert out.splitlines()[0] == 'TRUE'
        assert 'X = 1' in out

    def test_certificate_roundtrip(self, equation_file, tmp_path, capsys):
        """Test solve-equation writes a certificate that verify accepts"""
        certificate = str(tmp_path / 'pair.json')
        assert main(['solve-equation', equation_file, '--certificate', certificate]) == EXIT_TRUE
        assert f'certificate written to {certificate}' in capsys.readouterr().out
        assert main(['verify', certificate]) == EXIT_TRUE
        out = capsys.readouterr().out
        assert out.startswith('VERIFIED (')
        assert 'X = a b' in out

    def test_verify_rejects_tampering(self, equation_file, tmp_path, capsys):
        """Test an edited final equation is rejected"""
        certificate = tmp_path / 'pair.json'
        main(['solve-equation', equation_file, '--certificate', str(certificate)])
        data = json.loads(certificate.read_text())
        final = data['equations'][-1]
        final['rhs'] = final['rhs'] + ' ' + final['lhs']
        certificate.write_text(json.dumps(data))
        capsys.readouterr()
        assert main(['verify', str(certificate)]) == EXIT_FALSE
        assert capsys.readouterr().out.startswith('REJECTED:')

    def test_factorize(self, capsys):
        """Test the level 2 table of the example word has eight blocks"""
        word = "a d d' b' a d d' a' b d d' a'"
        cuts = ['0', '1', '3', '4', '6', '7', '8', '9', '11', '12']
        assert main(['factorize', word, '--ell', '2', '--cuts', *cuts]) == EXIT_TRUE
        lines = capsys.readouterr().out.splitlines()
        assert 'start' in lines[0]
        assert len(lines) == 9


class TestFactorizationTable:
    """Test the table behind the factorize command"""

    def test_parts(self):
        alphabet = InvAlphabet.from_names(constants=['a', 'b'])
        word = alphabet.parse_word('a b a b')
        table = factorization_table(alphabet, word, 1, range(len(word) + 1))
        assert list(table.columns) == ['start', 'part', 'u', 'w', 'v']
        assert table['part'].iloc[0] == 'head' and table['part'].iloc[-1] == 'tail'
        assert ' '.join(table['w']) == 'a b a b'


class TestExitCodes:
    """Test error handling at the command line"""

    def test_parse_error(self, tmp_path, capsys):
        filename = tmp_path / 'broken.txt'
        filename.write_text("alphabet: a\nvariables: X\nbogus: 1\nequation: X = a\n")
        assert main(['oracle', str(filename), '--maxlen', '1']) == EXIT_FALSE
        assert 'line 3' in capsys.readouterr().err

    def test_missing_file(self, tmp_path, capsys):
        assert main(['verify', str(tmp_path / 'nowhere.json')]) == EXIT_FALSE
        assert 'ERROR:' in capsys.readouterr().err

    def test_resource_limit(self, equation_file, mocker, capsys):
        """Test an exceeded cap exits with code 2"""
        mocker.patch('main.solve_system', side_effect=ResourceLimitError('cap exceeded', stage='expand'))
        assert main(['solve-equation', equation_file]) == EXIT_RESOURCE
        assert 'RESOURCE LIMIT' in capsys.readouterr().err

    def test_unknown_command(self):
        with pytest.raises(SystemExit):
            main(['teleport'])
