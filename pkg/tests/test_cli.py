import csv
import io
import json
import subprocess
import sys

import pytest

from heckemoments.cache import ENGINE_VERSION, CacheEntry, LValueCache, cache_load, cache_store
from heckemoments.cli import run


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_primes_csv(capsys):
    code, out, _ = _run(capsys, "primes", "--field", "qw", "--max-norm", "100", "--class", "9")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["a"], r["b"], r["norm"]) for r in rows] == [("-8", "-9", "73"), ("1", "9", "73")]
    assert list(rows[0]) == ["a", "b", "norm", "split_type"]


def test_primes_json_and_general_class(capsys):
    code, out, _ = _run(capsys, "primes", "--field", "qi", "--max-norm", "50",
                        "--class=-2+2*i", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema_version"] == 1 and doc["primes"]
    assert all((p["a"] - 1) % 2 == 0 for p in doc["primes"])


def test_symbol(capsys):
    code, out, _ = _run(capsys, "symbol", "--order", "3", "--a", "2", "--mod=-2-3*w")
    assert code == 0
    doc = json.loads(out)
    assert doc["index"] == 1 and doc["is_zero"] is False


def test_gauss(capsys):
    code, out, _ = _run(capsys, "gauss", "--order", "4", "--mod", "1+16*i")
    doc = json.loads(out)
    assert code == 0 and abs(doc["re"] ** 2 + doc["im"] ** 2 - 257) < 1e-8


def test_lvalue_hecke_and_dirichlet(capsys):
    code, out, _ = _run(capsys, "lvalue", "--family", "cubic-hecke", "--pi", "1+9*w")
    doc = json.loads(out)
    assert code == 0 and doc["conductor_norm"] == 73 and doc["residual"] < 1e-9
    code, out, _ = _run(capsys, "lvalue", "--family", "dirichlet-cubic", "--pi", "1+9*w", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["conductor_norm"] == "73"


def test_moment_json_csv_and_cache(capsys, tmp_path):
    cache = tmp_path / "c.jsonl"
    contrib = tmp_path / "contrib.csv"
    args = ["moment", "--family", "cubic", "--y", "2000", "--cache", str(cache), "--csv", str(contrib)]
    code, first, _ = _run(capsys, *args)
    assert code == 0
    code, second, _ = _run(capsys, *args)
    a, b = json.loads(first), json.loads(second)
    assert b["run"]["l_values_computed"] == 0 < a["run"]["l_values_computed"]
    a.pop("run"), b.pop("run")
    assert a == b and a["schema_version"] == 1
    rows = list(csv.DictReader(contrib.open()))
    assert len(rows) == a["prime_count"]


def test_moment_csv_round_trip(capsys):
    code, out, _ = _run(capsys, "moment", "--family", "dirichlet4", "--Q", "1500", "--format", "csv")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    assert buf.getvalue() == out


def test_constants_and_diagnose(capsys, tmp_path):
    code, out, _ = _run(capsys, "constants")
    doc = json.loads(out)
    assert code == 0 and set(doc["constants"]) == {"Aqw", "Aqi", "Cqw", "Cqi", "D3", "D4"}
    target = tmp_path / "diag.csv"
    code, out, _ = _run(capsys, "diagnose", "--order", "3", "--x-max", "512", "--out", str(target))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(target.open()))
    assert rows[-1]["x"] == "512.0" and float(rows[0]["abs_S"]) == 0.0


@pytest.mark.parametrize(
    "argv",
    [
        ["symbol", "--order", "5", "--a", "2", "--mod", "3+2*w"],
        ["primes", "--field", "qz", "--max-norm", "10"],
        ["moment", "--family", "cubic"],
        ["moment", "--family", "cubic", "--y", "100", "--workers", "0"],
        ["symbol", "--order", "3", "--a", "2", "--mod", "3+2*x"],
        ["diagnose", "--order", "3", "--field", "qi", "--x-max", "10"],
        [],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert run(argv) == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["lvalue", "--family", "cubic-hecke", "--pi", "2+w"],
        ["gauss", "--order", "3", "--mod", "1-w"],
        ["primes", "--field", "qi", "--max-norm", "1"],
    ],
)
def test_computation_errors_exit_1(capsys, argv):
    assert run(argv) == 1
    assert "error" in capsys.readouterr().err


def test_console_script_help():
    proc = subprocess.run([sys.executable, "-m", "heckemoments.cli", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "moment" in proc.stdout


# ------------------------------------------------------------------- cache


def _entry(a, re=0.5):
    return CacheEntry("cubic-hecke", a, 9, re, 0.25, 1e-14, 14.8, 300)


def test_cache_round_trip(tmp_path):
    path = tmp_path / "c.jsonl"
    cache_store(path, [_entry(1), _entry(-8, 0.1)])
    loaded = cache_load(path)
    assert len(loaded) == 2 and loaded.get("cubic-hecke", -8, 9) == _entry(-8, 0.1)
    assert CacheEntry.from_line(_entry(1).to_line()) == _entry(1)


def test_cache_keeps_first_value_for_a_key(tmp_path):
    path = tmp_path / "c.jsonl"
    cache = LValueCache(path)
    assert cache.put(_entry(1)) and not cache.put(_entry(1, 9.0))
    assert cache_load(path).get("cubic-hecke", 1, 9).L_re == 0.5


def test_cache_survives_truncated_last_line(tmp_path):
    path = tmp_path / "c.jsonl"
    cache_store(path, [_entry(1), _entry(-8)])
    text = path.read_text()
    path.write_text(text[: len(text) - 20])
    cache = LValueCache(path)
    assert len(cache) == 1 and cache.warnings == 1
    cache.put(_entry(10))
    reloaded = LValueCache(path)
    assert len(reloaded) == 2 and reloaded.warnings == 1


def test_cache_ignores_other_engine_versions(tmp_path):
    path = tmp_path / "c.jsonl"
    old = CacheEntry("cubic-hecke", 1, 9, 0.5, 0.0, 0.0, 1.0, 1, engine_version="0")
    path.write_text(old.to_line() + "\n" + "not json\n" + _entry(-8).to_line() + "\n")
    cache = LValueCache(path)
    assert cache.stale == 1 and cache.warnings == 1 and len(cache) == 1
    assert ENGINE_VERSION != "0"


def test_in_memory_cache():
    cache = LValueCache()
    cache.put(_entry(1))
    assert ("cubic-hecke", 1, 9) in cache
