"""CLI behaviour and golden outputs.

Set MEDALSTATS_REGEN_GOLDEN=1 to rewrite the files under tests/golden/.
"""

import os
import shutil
import subprocess
import sys
import xml.etree.ElementTree as ET
from importlib import resources
from pathlib import Path

import pytest

from medalstats import __version__
from medalstats.binom import BinomialSample, wilson_interval
from medalstats.cli import main

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("MEDALSTATS_REGEN_GOLDEN") == "1"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def check_golden(name, text):
    path = GOLDEN / name
    text = text.replace(f"<!-- medalstats {__version__} -->", "<!-- medalstats VERSION -->")
    if REGEN:
        GOLDEN.mkdir(exist_ok=True)
        path.write_text(text, encoding="utf-8")
    assert path.exists(), f"missing golden file {name}; run with MEDALSTATS_REGEN_GOLDEN=1"
    assert text == path.read_text(encoding="utf-8")


@pytest.fixture
def data_copy(tmp_path):
    src = resources.files("medalstats").joinpath("data")
    dst = tmp_path / "data"
    dst.mkdir()
    for f in src.iterdir():
        if f.name.endswith(".tsv"):
            (dst / f.name).write_text(f.read_text(encoding="utf-8"), encoding="utf-8")
    return dst


GOLDEN_CASES = {
    "lrt.txt": ["lrt", "NOR=41/348", "USA=33/348", "ITA=26/348"],
    "table_medals.txt": ["table", "--scheme", "medals"],
    "table_op7.txt": ["table", "--scheme", "op7"],
    "table_fib13.tsv": ["table", "--scheme", "fib13", "--format", "tsv"],
    "skating_combined.txt": ["skating", "combined"],
    "skating_men.txt": ["skating", "men"],
    "validate.txt": ["validate", "-v"],
    "series.tsv": ["series", "--format", "tsv"],
    "series_cd.txt": ["series", "--interval", "cd", "--avg", "mean"],
    "ccurve.txt": ["ccurve", "NOR=41/348", "USA=33/348", "ITA=26/348"],
    "ccurve.svg": ["ccurve", "NOR=41/348", "USA=33/348", "ITA=26/348", "--format", "svg", "--grid", "401"],
    "series.svg": ["series", "--format", "svg"],
    "regress.txt": ["regress"],
    "percapita.txt": ["percapita"],
}


@pytest.mark.parametrize("name", sorted(GOLDEN_CASES))
def test_golden(capsys, name):
    code, out, _ = run(capsys, *GOLDEN_CASES[name])
    assert code == 0
    check_golden(name, out)


class TestLrt:
    def test_three_nations(self, capsys):
        code, out, _ = run(capsys, "lrt", "NOR=41/348", "USA=33/348", "ITA=26/348")
        assert code == 0 and "p = 0.153" in out

    def test_identical(self, capsys):
        _, out, _ = run(capsys, "lrt", "A=10/100", "B=10/100")
        assert "p = 1.000" in out

    def test_deviance_pair(self, capsys):
        _, out, _ = run(capsys, "lrt", "A=5/50", "B=20/50")
        assert "p = 0.000" in out and "statistic 12.6576" in out

    def test_one_sample(self, capsys):
        code, _, err = run(capsys, "lrt", "NOR=41/348")
        assert code == 2 and "two samples" in err

    @pytest.mark.parametrize("bad", ["NOR=41", "NOR=400/348", "41/348", "NOR=4a/9"])
    def test_malformed(self, capsys, bad):
        code, out, err = run(capsys, "lrt", bad, "A=1/2")
        assert code == 2 and out == "" and "bad sample" in err


class TestCcurve:
    def test_overlap(self, capsys):
        code, out, _ = run(capsys, "ccurve", "NOR=41/348", "USA=33/348", "ITA=26/348")
        assert code == 0 and "overlap at level 0.9: true" in out
        assert "0.0917" in out and "0.1487" in out

    def test_no_overlap(self, capsys):
        code, out, _ = run(capsys, "ccurve", "NOR=41/348", "X=5/348")
        assert code == 1 and "overlap at level 0.9: false" in out

    def test_single(self, capsys):
        code, out, _ = run(capsys, "ccurve", "NOR=41/348")
        assert code == 0 and "true" in out

    def test_too_many(self, capsys):
        code, _, _ = run(capsys, "ccurve", *[f"S{i}=1/10" for i in range(7)])
        assert code == 2

    def test_svg_file(self, capsys, tmp_path):
        out_path = tmp_path / "fig3.svg"
        code, _, _ = run(capsys, "ccurve", "NOR=41/348", "USA=33/348", "ITA=26/348", "--out", str(out_path))
        assert code == 0
        root = ET.parse(out_path).getroot()
        assert root.get("width") == "800" and root.get("height") == "500"
        curves = root.findall("{http://www.w3.org/2000/svg}polyline")
        assert [c.get("data-name") for c in curves] == ["NOR", "USA", "ITA"]


class TestSeries:
    def test_sidecar(self, capsys, tmp_path, games):
        out_path = tmp_path / "fig2.svg"
        code, out, _ = run(capsys, "series", "--out", str(out_path))
        assert code == 0 and "average after 1960 (pooled): 10.5" in out
        ET.parse(out_path)
        lines = (tmp_path / "fig2.tsv").read_text().splitlines()
        assert lines[0].split("\t") == ["year", "percent", "low", "high"]
        rows = [[float(c) for c in line.split("\t")] for line in lines[1:]]
        assert len(rows) == 25
        assert rows[0][1] == 35.4 and rows[-1][1] == 11.8
        for g, row in zip(games, rows):
            ci = wilson_interval(BinomialSample.from_games(g), 0.90)
            assert row[0] == g.year and row[1] == float(g.percent)
            assert row[2] == round(100 * ci.low, 1) and row[3] == round(100 * ci.high, 1)

    def test_polyline_points(self, capsys):
        _, out, _ = run(capsys, "series", "--format", "svg")
        root = ET.fromstring(out.encode())
        est = root.find("{http://www.w3.org/2000/svg}polyline[@class='estimate']")
        assert len(est.get("points").split()) == 25

    def test_unwritable(self, capsys, tmp_path):
        code, _, err = run(capsys, "series", "--out", str(tmp_path / "missing" / "x.svg"))
        assert code == 3 and err

    @pytest.mark.parametrize("level", ["0", "1", "x"])
    def test_bad_level(self, capsys, level):
        code, _, _ = run(capsys, "series", "--level", level)
        assert code == 2


class TestTableAndSkating:
    def test_medals_order(self, capsys, nations):
        _, out, _ = run(capsys, "table", "--format", "tsv")
        codes = [line.split("\t")[1] for line in out.splitlines()[1:] if "\t" in line]
        assert codes == [r.code for r in nations if r.has_medals]

    def test_rho(self, capsys):
        _, out, _ = run(capsys, "table", "--scheme", "op7")
        assert "spearman rho (op7 vs medals, 30 nations): 0.9810" in out

    def test_all_nations(self, capsys):
        _, out, _ = run(capsys, "table", "--scheme", "op7", "--all-nations")
        assert "35 nations" in out

    def test_combined(self, capsys):
        _, out, _ = run(capsys, "skating")
        lines = out.splitlines()
        assert lines[0] == "NED  86 + 60 = 146"
        assert "NOR  85 +  5 =  90" in lines and "NKR   0 +  1 =   1" in lines

    def test_ladies(self, capsys):
        _, out, err = run(capsys, "skating", "ladies", "--format", "tsv")
        totals = dict(line.split("\t")[:2] for line in out.splitlines()[1:])
        assert totals["SWE"] == "0" and totals["GER"] == "61"
        assert "CZE" in err

    def test_men_total(self, capsys):
        _, out, _ = run(capsys, "skating", "men", "--format", "tsv")
        assert "NOR\t85\t85" in out.splitlines()

    def test_corrupted_skating(self, capsys, data_copy):
        path = data_copy / "speedskating_men.tsv"
        path.write_text(path.read_text().replace("#@ allow-mismatch SOV\n", ""))
        code, _, err = run(capsys, "skating", "--data", str(data_copy))
        assert code == 1 and "SOV" in err


class TestValidate:
    def test_shipped(self, capsys):
        code, out, _ = run(capsys, "validate")
        assert code == 0
        assert "446" in out and "CAN" in out
        assert out.strip().endswith("0 failures")

    def test_corrupted_cell(self, capsys, data_copy):
        path = data_copy / "games_norway.tsv"
        path.write_text(path.read_text().replace("Calgary\t1988\t46", "Calgary\t1988\tforty-six"))
        code, _, err = run(capsys, "validate", "--data", str(data_copy))
        assert code == 1
        assert "line" in err and "events" in err

    def test_bad_sum(self, capsys, data_copy):
        path = data_copy / "nations_2026.tsv"
        text = path.read_text()
        path.write_text(text.replace("\tNOR\t18\t12\t11\t41\t", "\tNOR\t17\t12\t11\t40\t"))
        code, out, _ = run(capsys, "validate", "--data", str(data_copy))
        assert code == 1 and "gold column sum" in out

    def test_missing_file(self, capsys, data_copy):
        (data_copy / "games_norway.tsv").unlink()
        code, _, err = run(capsys, "validate", "--data", str(data_copy))
        assert code == 3 and "games_norway.tsv" in err

    def test_missing_dir(self, capsys, tmp_path):
        code, _, _ = run(capsys, "series", "--data", str(tmp_path / "nope"))
        assert code == 3


class TestRegressAndPerCapita:
    def test_regress_default(self, capsys):
        code, out, _ = run(capsys, "regress")
        assert code == 0 and "0.503179" in out and "-2.013276" not in out

    def test_separated(self, capsys, tmp_path):
        f = tmp_path / "sep.tsv"
        f.write_text("code\tsuccesses\ttrials\tx\nA\t0\t20\t0\nB\t20\t20\t1\n")
        code, _, err = run(capsys, "regress", str(f))
        assert code == 1 and "cannot fit" in err

    def test_percapita(self, capsys):
        code, out, _ = run(capsys, "percapita")
        assert code == 0 and "population ratio NOR/LIE = 138.443" in out
        assert "37531.0" in out

    def test_two_columns(self, capsys, tmp_path):
        f = tmp_path / "pop.tsv"
        f.write_text("NOR\t5600000\nSVK\t5400000\n")
        _, out, _ = run(capsys, "percapita", str(f), "--format", "tsv")
        rows = {line.split("\t")[0]: line.split("\t") for line in out.splitlines()}
        assert rows["NOR"][2] == "41" and rows["SVK"][3] == "-"


def test_usage(capsys):
    assert main([]) == 2
    assert main(["nonsense"]) == 2
    assert main(["--version"]) == 0
    capsys.readouterr()


def test_module_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "medalstats", "lrt", "A=10/100", "B=10/100"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and "p = 1.000" in proc.stdout


@pytest.mark.skipif(shutil.which("medalstats") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["medalstats", "validate"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
