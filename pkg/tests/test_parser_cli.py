import json
import subprocess
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import field_of, normal_words, to_terms
from qsu11.algebra import AlgebraError, Base, Element, Layer
from qsu11.cli import main, read_config
from qsu11.kernels import PAIRS, TensorElement
from qsu11.parser import Context, ParseError, evaluate, normalize, parse, render
from qsu11.sampling import random_element, rng_for

GOLDEN = Path(__file__).parent / "golden" / "normalize.tsv"
SPACES = {"x": Base.X, "xi": Base.XI}
WORD_LETTERS = {"t11", "t12", "t21", "t22", "t11*", "t12*", "t21*", "t22*", "x"}


def _golden():
    rows = []
    for line in GOLDEN.read_text(encoding="utf-8").splitlines():
        space, expr, expected = line.split("\t")
        rows.append((space, expr, expected))
    return rows


def _ctx(space):
    if space in PAIRS:
        return Context(base=Base.X, pair=PAIRS[space])
    return Context(base=SPACES[space])


def _cli_args(space, expr):
    return ["normalize", "--pair", space, expr] if space in PAIRS else ["normalize", "--space", space, expr]


def test_golden_file_has_25_cases():
    assert len(_golden()) == 25


@pytest.mark.parametrize("space,expr,expected", _golden())
def test_normalize_golden(space, expr, expected, capsys):
    assert main(_cli_args(space, expr)) == 0
    assert capsys.readouterr().out.rstrip("\n") == expected
    assert normalize(expected, _ctx(space)) == expected


PLAIN_WORDS = [r for r in _golden() if r[0] in SPACES and set(r[1].split()) <= WORD_LETTERS]


@pytest.mark.parametrize("space,expr,expected", PLAIN_WORDS)
def test_golden_words_agree_with_rewriter(space, expr, expected):
    tokens = expr.split()
    value = evaluate(expr, _ctx(space))
    ours = {(t[0], t[1], t[2], t[4]): field_of(c) for t, c in value.data.items()}
    assert ours == to_terms(normal_words(tokens, space == "x"))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from([Base.X, Base.XI]))
def test_render_parse_roundtrip(seed, base):
    f = random_element(rng_for(seed), base)
    text = render(f)
    ctx = Context(base=base)
    assert evaluate(text, ctx) == f
    assert normalize(text, ctx) == text


def test_tensor_roundtrip():
    ctx = Context(base=Base.X, pair=PAIRS["xx"])
    K = evaluate("k22 k11", ctx)
    assert isinstance(K, TensorElement)
    assert evaluate(render(K), ctx) == K


@pytest.mark.parametrize(
    "text,offset",
    [("t11 +", 5), ("t11 ) t12", 4), ("(t11", 4), ("t11 ^ x", 6), ("t11 $ t12", 4)],
)
def test_parse_error_offsets(text, offset):
    with pytest.raises(ParseError) as err:
        parse(text)
    assert err.value.offset == offset
    assert "^" in str(err.value)


def test_semantic_errors():
    with pytest.raises(ParseError):
        evaluate("t13")
    with pytest.raises(AlgebraError):
        evaluate("t12^-1", Context(base=Base.X, layer=Layer.POLYNOMIAL))
    with pytest.raises((ParseError, AlgebraError)):
        evaluate("t11^-1")
    with pytest.raises((ParseError, AlgebraError)):
        evaluate("t11 / t12")


def test_layer_option(capsys):
    assert main(["normalize", "--layer", "finite", "e0 t12"]) == 0
    assert capsys.readouterr().out.strip() == "t12 e0"
    assert main(["normalize", "--layer", "finite", "x"]) == 2
    assert "error" in capsys.readouterr().err


def test_normalize_json(capsys):
    assert main(["normalize", "--json", "t11 t12"]) == 0
    obj = json.loads(capsys.readouterr().out)
    assert Element.from_json(json.dumps(obj)) == evaluate("t11 t12")
    assert main(["normalize", "--json", "q + 1"]) == 0
    assert json.loads(capsys.readouterr().out) == {"scalar": "q + 1"}


def _run(*args):
    return subprocess.run(
        [sys.executable, "-m", "qsu11.cli", *args], capture_output=True, text=True, check=False
    )


@pytest.mark.parametrize("suite", ["casimir", "k-relations", "qseries"])
def test_json_reports_are_byte_identical(suite):
    first, second = _run("verify", suite, "--json"), _run("verify", suite, "--json")
    assert first.returncode == 0
    assert first.stdout == second.stdout
    obj = json.loads(first.stdout)
    assert obj["suite"] == suite and obj["passed"] and obj["failed"] == 0
    assert "elapsed_seconds" not in obj


def test_timing_flag(capsys):
    assert main(["verify", "casimir", "--json", "--timing"]) == 0
    assert "elapsed_seconds" in json.loads(capsys.readouterr().out)


def test_exit_codes(tmp_path, capsys):
    assert main(["verify", "casimir"]) == 0
    assert main(["verify", "nonsense"]) == 2
    assert main(["normalize", "t11 +"]) == 2
    assert main(["normalize", "t13"]) == 2
    assert main(["verify", "casimir", "--trunc", "-1"]) == 2
    assert main([]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("a_plus = 1/2\n")
    # a twist that breaks kernel invariance makes the suite fail, not crash
    assert main(["verify", "k-invariance", "--config", str(bad)]) == 1
    assert main(["verify", "casimir", "--config", str(tmp_path / "missing.cfg")]) == 2
    capsys.readouterr()


def test_config_file(tmp_path):
    cfg = tmp_path / "action.cfg"
    cfg.write_text("# swapped printed constants\ne0_action = printed\nc_plus = -q^(3/2)/(1 - q^2)\nc_minus = -q^(5/2)/(1 - q^2)\n")
    config = read_config(str(cfg))
    assert config.e0_action == "printed"
    assert main(["verify", "module-algebra", "--config", str(cfg), "--samples", "5"]) == 0
    printed = tmp_path / "printed.cfg"
    printed.write_text("e0_action = printed\n")
    assert main(["verify", "module-algebra", "--config", str(printed), "--samples", "5"]) == 1
    bogus = tmp_path / "bogus.cfg"
    bogus.write_text("colour = blue\n")
    assert main(["verify", "casimir", "--config", str(bogus)]) == 2
