import pytest

from omegaseq.cli import main
from omegaseq.semantics import dump_model, standard_models
from omegaseq.terms import atom

PQ_ORACLE = "(oracle (preorder (elems p q) (leq (p q))))\n"


@pytest.fixture
def oracle_file(tmp_path):
    path = tmp_path / "pq.oracle"
    path.write_text(PQ_ORACLE)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_ok(tmp_path, capsys, oracle_file):
    proof = tmp_path / "a.proof"
    proof.write_text("(proof (basic (seq (p) q)))")
    code, out, _ = run(capsys, "check", str(proof), "--oracle", oracle_file)
    assert code == 0
    assert out == "checked: (seq (p) q)\n"


def test_check_bad_rule_a_node(tmp_path, capsys, oracle_file):
    proof = tmp_path / "bad.proof"
    proof.write_text("(proof (a (basic (seq (p) q)) (basic (seq (q) q))))")
    code, _, err = run(capsys, "check", str(proof), "--oracle", oracle_file)
    assert code == 1
    assert "RuleMismatch" in err


def test_check_basic_not_in_oracle(tmp_path, capsys, oracle_file):
    proof = tmp_path / "rev.proof"
    proof.write_text("(proof (basic (seq (q) p)))")
    code, _, err = run(capsys, "check", str(proof), "--oracle", oracle_file)
    assert code == 1
    assert "BasicNotInOracle" in err


def test_check_empty_file(tmp_path, capsys):
    proof = tmp_path / "empty.proof"
    proof.write_text("")
    code, _, err = run(capsys, "check", str(proof))
    assert code == 2
    assert "ParseError" in err


def test_check_missing_file(capsys):
    code, _, err = run(capsys, "check", "/nonexistent/x.proof")
    assert code == 2
    assert "cannot read" in err


def test_normalize_refl(tmp_path, capsys):
    oracle = tmp_path / "ab.oracle"
    oracle.write_text("(oracle (preorder (elems a b)))")
    script = tmp_path / "s.script"
    script.write_text("(script (refl (meet a b)))")
    code, out, _ = run(capsys, "normalize", str(script), "--oracle", str(oracle))
    assert code == 0
    assert out.startswith("(proof (i 0 (a ")


def test_normalize_writes_out_file(tmp_path, capsys, oracle_file):
    script = tmp_path / "s.script"
    script.write_text("(script (k (basic (seq (p) q)) (basic (seq (q) q))))")
    target = tmp_path / "out.proof"
    code, _, _ = run(capsys, "normalize", str(script), "--oracle", oracle_file, "--out", str(target))
    assert code == 0
    assert target.read_text() == "(proof (basic (seq (p) q)))\n"


def test_decide_derivable(capsys, oracle_file, tmp_path):
    target = tmp_path / "found.proof"
    code, out, _ = run(capsys, "decide", "(seq (p) q)", "--oracle", oracle_file, "--out", str(target))
    assert (code, out) == (0, "Derivable\n")
    code, out, _ = run(capsys, "check", str(target), "--oracle", oracle_file)
    assert code == 0


def test_decide_underivable(capsys, oracle_file):
    code, out, _ = run(capsys, "decide", "(seq () _)", "--oracle", oracle_file)
    assert (code, out) == (1, "Underivable\n")


def test_decide_depth_exceeded(capsys, oracle_file):
    seq = "(seq ((neg (neg (neg (neg p))))) (neg (neg (neg (neg p)))))"
    code, out, _ = run(capsys, "decide", seq, "--oracle", oracle_file, "--depth", "1")
    assert (code, out) == (1, "DepthExceeded\n")


def test_decide_lenient_compound_antecedent(capsys, oracle_file):
    code, out, _ = run(capsys, "decide", "(seq (meet p q) (meet p q))", "--oracle", oracle_file)
    assert (code, out) == (0, "Derivable\n")


def test_eval_default_model(capsys):
    code, out, _ = run(capsys, "eval", "(all x (prime (= x x)))", "--bound", "1")
    assert (code, out) == (0, "top\n")


def test_eval_named_model(capsys):
    code, out, _ = run(capsys, "eval", "(neg (prime (= 1 2)))", "--model", "chain")
    assert (code, out) == (0, "top\n")


def test_eval_model_file(tmp_path, capsys):
    m = standard_models()[2].with_assignment({atom("p"): "mid"})
    path = tmp_path / "chain.model"
    path.write_text(dump_model(m))
    code, out, _ = run(capsys, "eval", "(neg p)", "--model", str(path))
    assert (code, out) == (0, "bot\n")


def test_eval_errors(capsys):
    assert run(capsys, "eval", "p")[0] == 1
    assert run(capsys, "eval", "(all x (prime (= x 2)))", "--bound", "1")[0] == 1
    assert run(capsys, "eval", "(meet p")[0] == 2


def test_corpus_is_checkable(tmp_path, capsys, oracle_file):
    target = tmp_path / "corpus.txt"
    code, _, _ = run(capsys, "corpus", "--oracle", oracle_file, "--count", "5", "--out", str(target))
    assert code == 0
    assert target.read_text().count("(proof") == 5


def test_corpus_count_zero(capsys, oracle_file):
    code, out, _ = run(capsys, "corpus", "--oracle", oracle_file, "--count", "0")
    assert (code, out) == (0, "")


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "--help")[0] == 0
