import pytest

from errors import ConfigFileError
from services.montecarlo import Algorithm
from services.sweep_config import load_sweep_config, parse_sweep_config

SWEEP = """
# n sweep at p = 0.4
[experiment]
algorithm = r1
n = 64
p = 0.4
replicates = 50

; coding with a smaller beta on a changing graph
[experiment]
algorithm = RLNC
n = 32
p = 0.4
beta = 2.5
alpha = 0.1
base_seed = 9
strict_decoding = yes
"""


def test_parse_two_experiments():
    first, second = parse_sweep_config(SWEEP)
    assert first.algorithm is Algorithm.R1
    assert (first.n, first.p, first.replicates, first.beta) == (64, 0.4, 50, None)
    assert second.algorithm is Algorithm.RLNC
    assert (second.beta, second.alpha, second.base_seed) == (2.5, 0.1, 9)
    assert second.strict_decoding is True


def test_load_from_file(tmp_path):
    path = tmp_path / "sweep.cfg"
    path.write_text(SWEEP, encoding="utf-8")
    assert len(load_sweep_config(path)) == 2


@pytest.mark.parametrize(
    "text,lineno",
    [
        ("[experiment]\nalgorithm = r1\nn = 8\np = 0.5\nwidth = 3\n", 5),
        ("[experiment]\nalgorithm = r1\nn = 8\nn = 9\np = 0.5\n", 4),
        ("[run]\nalgorithm = r1\n", 1),
        ("algorithm = r1\n", 1),
        ("[experiment]\nalgorithm = r1\nn = eight\np = 0.5\n", 3),
        ("[experiment]\nalgorithm = r1\nn = 8\n", 1),
        ("[experiment]\nalgorithm = r1\nn = 8\np = 0.5\nbeta = 2\n", 1),
        ("[experiment]\nalgorithm = rlnc\nn = 8\np = 0.5\nstrict_decoding = maybe\n", 5),
    ],
)
def test_errors_carry_line_numbers(text, lineno):
    with pytest.raises(ConfigFileError) as info:
        parse_sweep_config(text)
    assert info.value.lineno == lineno
    assert str(info.value).startswith(f"line {lineno}:")


def test_empty_file_rejected():
    with pytest.raises(ConfigFileError, match="no experiments"):
        parse_sweep_config("# nothing here\n")
