import io

import pytest

from ratgraph.acceptance import load_fixture
from ratgraph.cli import main
from ratgraph.graph import parse_graphs


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out)
    return code, out.getvalue()


@pytest.fixture
def chain_file(tmp_path):
    p = tmp_path / "c.graph"
    p.write_text("v 0 3\nv 1 2\nv 2 2\ne 0 1\ne 1 2\n")
    return str(p)


@pytest.fixture
def karras_file(tmp_path):
    p = tmp_path / "k.graph"
    p.write_text(load_fixture("karras.graph"))
    return str(p)


def test_check(chain_file):
    assert run("check", chain_file) == (0, "negative definite\nrational\n")


def test_check_reports_genus(tmp_path):
    p = tmp_path / "g.graph"
    p.write_text("v 0 2 1\n")
    code, out = run("check", str(p))
    assert code == 0
    assert "not rational: genus weight nonzero" in out


def test_fc_trace_and_central(karras_file):
    code, out = run("fc", karras_file, "--trace")
    assert code == 0
    assert out.startswith("start ")
    assert "step 1:" in out and "degree" in out
    code, out = run("fc", karras_file, "--central", "0")
    assert code == 0 and "stage 1:" in out
    assert run("fc", karras_file, "--central", "99")[0] == 2


def test_classify_and_model(chain_file):
    code, out = run("classify", chain_file)
    assert code == 0 and "A[2]^{1} [L=0]" in out
    code, out = run("canonical-model", chain_file)
    assert "configurations: A2" in out
    code, out = run("canonical-model", chain_file, "--dot")
    assert out.startswith("graph")


def test_enumerate_minimal_degree_four():
    code, out = run("enumerate", "--degree", "4", "--minimal")
    assert code == 0
    assert len(parse_graphs(out)) == 2
    assert run("enumerate", "--degree", "4", "--minimal", "--count-only") == (0, "2\n")


def test_enumerate_counts():
    assert run("enumerate", "--degree", "3", "--almost-reduced", "--count-only") == (0, "37\n")
    assert run("enumerate", "--degree", "4", "--single-nonreduced", "--count-only") == (0, "17\n")


def test_export_dot(chain_file):
    code, out = run("export-dot", chain_file)
    assert code == 0 and 'label="-3/1"' in out


def test_verify_paper_section(capsys):
    code, out = run("verify-paper", "--section", "5")
    assert code == 0
    assert out.splitlines()[0].startswith("PASS criterion 2")


@pytest.mark.parametrize(
    "argv",
    [
        ["check", "does-not-exist.graph"],
        ["enumerate", "--degree", "2", "--minimal"],
    ],
)
def test_errors_exit_two(argv, capsys):
    assert run(*argv)[0] == 2
    assert capsys.readouterr().err.startswith("error:")


def test_parse_error_has_line_number(tmp_path, capsys):
    p = tmp_path / "bad.graph"
    p.write_text("v 0 2\nx\n")
    assert run("check", str(p))[0] == 2
    assert "line 2" in capsys.readouterr().err


def test_not_definite_fc(tmp_path):
    p = tmp_path / "d.graph"
    p.write_text("v 0 2\nv 1 2\nv 2 2\nv 3 2\nv 4 2\ne 0 1\ne 0 2\ne 0 3\ne 0 4\n")
    assert run("fc", str(p))[0] == 2


def test_usage_error_exits_two():
    with pytest.raises(SystemExit) as exc:
        main(["enumerate"])
    assert exc.value.code == 2
