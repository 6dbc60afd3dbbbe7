import json

from lltrans.cli import main
from lltrans.grammar import parse_grammar
from lltrans.lexer import lex
from lltrans.mathqa import fixture_path


def fx(name):
    return str(fixture_path(name))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_check_text_and_json(capsys):
    code, out, _ = run(capsys, "check", fx("mathqa_lr1.grammar"))
    assert code == 0 and "class: LR(1)" in out
    code, out, _ = run(capsys, "check", "--json", fx("mathqa_ll2.grammar"))
    d = json.loads(out)
    assert code == 0 and d["schema"] == 1 and d["class"] == "LL(2)"


def test_check_bad_grammar(capsys, tmp_path):
    bad = tmp_path / "bad.grammar"
    bad.write_text("start S ; S -> ")
    code, _, err = run(capsys, "check", str(bad))
    assert code == 2 and "bad.grammar" in err
    code, _, err = run(capsys, "check", str(tmp_path / "missing.grammar"))
    assert code == 2


def test_transform_writes_grammar_map_and_trace(capsys, tmp_path):
    out = tmp_path / "fig4_ll1.grammar"
    code, stdout, _ = run(capsys, "transform", fx("fig4.grammar"), "-o", str(out), "--json")
    assert code == 0
    trace = json.loads(stdout)
    assert trace["schema"] == 1 and trace["introduced_final"] == 1
    assert (tmp_path / "fig4_ll1.map.json").exists()
    code, stdout, _ = run(capsys, "check", str(out))
    assert "class: LL(1)" in stdout


def test_transform_stdout_and_modes(capsys, tmp_path):
    code, stdout, _ = run(capsys, "transform", fx("fig4.grammar"), "--mode", "layers=1", "--no-reorder")
    assert code == 0 and "'<S>'" in stdout
    code, _, err = run(capsys, "transform", fx("fig4.grammar"), "--mode", "bogus")
    assert code == 3
    code, _, err = run(capsys, "transform", fx("mathqa_lr1.grammar"), "--depth-cap", "2")
    assert code == 3 and "depth cap" in err
    code, _, _ = run(capsys, "transform", fx("fragment.grammar"))
    assert code == 2  # fails validation: no base case


def test_translate_program_both_directions(capsys, tmp_path):
    src = tmp_path / "p.txt"
    src.write_text("x = f(a, 2) + y.z\n")
    fwd = tmp_path / "p.ll1"
    common = ["--grammar-src", fx("mathqa_lr1.grammar"), "--grammar-dst", fx("mathqa_ll1.grammar"),
              "--map", fx("mathqa_ll1.map.json")]
    assert run(capsys, "translate", *common, str(src), str(fwd))[0] == 0
    code, out, _ = run(capsys, "translate", *common, "--backward", str(fwd))
    g = parse_grammar(open(fx("mathqa_lr1.grammar")).read())
    assert code == 0
    assert [t.lexeme for t in lex(out, g)] == [t.lexeme for t in lex(src.read_text(), g)]
    bad = tmp_path / "bad.txt"
    bad.write_text("x = = 1\n")
    code, _, err = run(capsys, "translate", *common, str(bad))
    assert code == 4 and "syntax error" in err


def test_translate_corpus(capsys, tmp_path):
    inp = tmp_path / "in.jsonl"
    inp.write_text("\n".join([json.dumps({"code": "a = 1\n", "k": 1}), "{oops", json.dumps({"code": "b = )\n"})]) + "\n")
    outp = tmp_path / "out.jsonl"
    common = ["--grammar-src", fx("mathqa_lr1.grammar"), "--grammar-dst", fx("mathqa_ll1.grammar"),
              "--map", fx("mathqa_ll1.map.json")]
    code, _, err = run(capsys, "translate", *common, "--corpus", "--json", str(inp), str(outp))
    assert code == 0
    summary = json.loads(err)
    assert summary["translated"] == 1 and summary["malformed"] == 1 and summary["parse-fail"] == 1
    rows = [json.loads(l) for l in outp.read_text().splitlines()]
    assert rows[0]["k"] == 1 and "<" in rows[0]["code"]
    fails = [json.loads(l) for l in (tmp_path / "out.jsonl.failures.jsonl").read_text().splitlines()]
    assert [f["index"] for f in fails] == [1, 2]


def test_translate_bad_map(capsys, tmp_path):
    src = tmp_path / "p.txt"
    src.write_text("a = 1\n")
    code, _, _ = run(capsys, "translate", "--grammar-src", fx("mathqa_lr1.grammar"),
                     "--grammar-dst", fx("fig4.grammar"), "--map", fx("mathqa_ll1.map.json"), str(src))
    assert code == 2


def test_parse_command(capsys, tmp_path):
    prog = tmp_path / "p.txt"
    prog.write_text("a = 1\n")
    code, out, _ = run(capsys, "parse", fx("mathqa_lr1.grammar"), str(prog))
    assert code == 0 and out.startswith("(p1 ")
    code, out, _ = run(capsys, "parse", fx("mathqa_lr1.grammar"), str(prog), "--ll1")
    assert code == 2
    amb = tmp_path / "amb.txt"
    amb.write_text("a * b * c")
    code, _, err = run(capsys, "parse", fx("fragment_closed.grammar"), str(amb))
    assert code == 4 and "ambiguous" in err
    code, out, _ = run(capsys, "parse", fx("fragment_closed.grammar"), str(amb), "--ambiguity", "--json")
    d = json.loads(out)
    assert code == 0 and d["result"] == "ambiguous" and len(d["trees"]) == 2
    prog.write_text("a = $\n")
    assert run(capsys, "parse", fx("mathqa_lr1.grammar"), str(prog))[0] == 4


def test_stats(capsys, monkeypatch):
    monkeypatch.setenv("GRAMTRANS_SEED", "7")
    code, out, _ = run(capsys, "stats", fx("mathqa_lr1.grammar"), "--samples", "60", "--baselines", "--json")
    d = json.loads(out)
    assert code == 0 and d["schema"] == 1 and d["programs"] == 60
    ratio = {r["representation"]: r["ratio"] for r in d["representations"]}
    assert ratio["original"] == 1.0 <= ratio["layers-1"] <= ratio["full"]
    assert d["monotonicity"] == "layers-1 <= full"
    again = json.loads(run(capsys, "stats", fx("mathqa_lr1.grammar"), "--samples", "60", "--baselines", "--json")[1])
    assert again == d
    other = json.loads(run(capsys, "--seed", "8", "stats", fx("mathqa_lr1.grammar"), "--samples", "60", "--json")[1])
    assert other["representations"][0]["average"] != d["representations"][0]["average"]


def test_bad_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("GRAMTRANS_SEED", "abc")
    code, _, err = run(capsys, "stats", fx("fig4.grammar"), "--samples", "3")
    assert code == 2 and "GRAMTRANS_SEED" in err
